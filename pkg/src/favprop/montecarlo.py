"""
Seeded Monte Carlo ensembles over random channel matrices.

Every trial ``t`` draws from its own generator ``substream(seed, t)``, so the
result of an ensemble is a function of its configuration only, regardless of
how many worker threads evaluate it or in which order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelModelSpec, Kind, generate, substream
from .metrics import (
    _condition_from_spectrum,
    _log2_1p,
    column_norms_sq,
    gramian_spectrum,
    predicted_ip_sq_variance,
    predicted_ip_variance,
)

__all__ = [
    "METRICS",
    "QUANTILES",
    "EnsembleConfig",
    "EnsembleResult",
    "EnsembleError",
    "run_ensemble",
    "VarianceRow",
    "variance_study",
    "empirical_cdf",
]

METRICS = frozenset({"spectrum", "capacity", "delta_c", "condition_number", "inner_products"})
QUANTILES = {"q01": 0.01, "q10": 0.10, "q50": 0.50, "q90": 0.90, "q99": 0.99}

# Trials per unit of work; results never depend on it.
CHUNK = 256
CHAIN_SLACK = 1e-9
MAX_ERROR_FRACTION = 1e-3


class EnsembleError(RuntimeError):
    pass


@dataclass(frozen=True)
class EnsembleConfig:
    model: ChannelModelSpec
    M: int
    K: int
    rho: float = 1.0
    trials: int = 10_000
    seed: int = 0
    collect: frozenset = METRICS

    def __post_init__(self):
        object.__setattr__(self, "collect", frozenset(self.collect))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.M < 1 or self.K < 1:
            raise ValueError("M and K must be positive")
        if not self.collect:
            raise ValueError("collect must name at least one metric")
        unknown = self.collect - METRICS
        if unknown:
            raise ValueError(f"unknown metrics: {sorted(unknown)}")
        if "inner_products" in self.collect and self.K < 2:
            raise ValueError("inner_products needs K >= 2")
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ValueError("rho must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def empirical_cdf(pool, x):
    """Fraction of the sorted sample ``pool`` that is ``<= x``."""
    pool = np.asarray(pool)
    if pool.size == 0:
        raise ValueError("empirical CDF of an empty pool")
    return np.searchsorted(pool, x, side="right") / pool.size


@dataclass
class EnsembleResult:
    """Per-trial samples of an ensemble run.

    ``samples`` maps a metric name to an array indexed by trial: ``spectrum``
    has shape ``(trials, K)`` (ascending per row), ``inner_products`` holds
    ``|g_i^H g_j| / M`` with shape ``(trials, K(K-1)/2)``, and the scalar
    metrics (``capacity``, ``hadamard``, ``jensen``, ``delta_c``,
    ``condition_number``) have shape ``(trials,)``.  Trials on which a metric
    is undefined carry NaN there and are counted in ``errors``.
    """

    config: EnsembleConfig
    samples: dict
    errors: dict = field(default_factory=dict)

    def pool(self, name):
        """Sorted, flattened samples of ``name`` with undefined trials removed."""
        x = np.ravel(self.samples[name])
        return np.sort(x[~np.isnan(x)])

    def cdf(self, name, x):
        return empirical_cdf(self.pool(name), x)

    def summary(self, name):
        x = self.pool(name)
        out = {"count": int(x.size), "mean": float(np.mean(x)),
               "variance": float(np.var(x, ddof=1)) if x.size > 1 else 0.0}
        for key, q in QUANTILES.items():
            out[key] = float(np.quantile(x, q))
        return out

    def max_inner_product(self):
        """Largest ``|g_i^H g_j| / M`` over pairs, per trial."""
        return np.max(self.samples["inner_products"], axis=1)


def _chunk_metrics(cfg, start, stop):
    G = np.stack([generate(cfg.model, cfg.M, cfg.K, substream(cfg.seed, t))[0]
                  for t in range(start, stop)])
    out = {}
    want = cfg.collect
    lam = None
    if want & {"spectrum", "capacity", "delta_c", "condition_number"}:
        lam = gramian_spectrum(G)
    if "spectrum" in want:
        out["spectrum"] = lam
    if want & {"capacity", "delta_c"}:
        cap = np.sum(_log2_1p(cfg.rho * lam), axis=-1)
        norms = column_norms_sq(G)
        had = np.sum(_log2_1p(cfg.rho * norms), axis=-1)
        jen = cfg.K * _log2_1p(cfg.rho / cfg.K * np.sum(norms, axis=-1))
        bad = (cap > had + CHAIN_SLACK) | (had > jen + CHAIN_SLACK)
        if np.any(bad):
            t = start + int(np.flatnonzero(bad)[0])
            raise EnsembleError(f"capacity bound chain violated on trial {t}")
        if "capacity" in want:
            out["capacity"], out["hadamard"], out["jensen"] = cap, had, jen
        if "delta_c" in want:
            with np.errstate(divide="ignore", invalid="ignore"):
                out["delta_c"] = np.where(cap > 0, (had - cap) / cap, np.nan)
    if "condition_number" in want:
        out["condition_number"] = np.asarray(_condition_from_spectrum(lam), dtype=float)
    if "inner_products" in want:
        i, j = np.triu_indices(cfg.K, k=1)
        ip = np.einsum("tmp,tmp->tp", G.conj()[..., i], G[..., j])
        out["inner_products"] = np.abs(ip) / cfg.M
    return out


def _run_chunks(n, fn, workers):
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda b: fn(*b), bounds))
    return [fn(*b) for b in bounds]


def run_ensemble(config, workers=1):
    """Draw ``config.trials`` channels and collect the requested metrics.

    Raises
    ------
    EnsembleError
        If the capacity bound chain fails on any trial or more than 0.1% of
        trials produce an undefined metric.
    """
    parts = _run_chunks(config.trials, lambda a, b: _chunk_metrics(config, a, b), workers)
    samples = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    errors = {k: int(np.count_nonzero(np.isnan(v))) for k, v in samples.items()
              if np.issubdtype(v.dtype, np.floating)}
    errors = {k: v for k, v in errors.items() if v}
    for name, count in errors.items():
        if count > MAX_ERROR_FRACTION * config.trials:
            raise EnsembleError(f"{count} of {config.trials} trials left {name} undefined")
    return EnsembleResult(config=config, samples=samples, errors=errors)


@dataclass(frozen=True)
class VarianceRow:
    M: int
    var_ip_sample: float
    var_ip_predicted: float
    var_ipsq_sample: float
    var_ipsq_predicted: float

    @property
    def ratio_ip(self):
        return self.var_ip_sample / self.var_ip_predicted

    @property
    def ratio_ipsq(self):
        if self.var_ipsq_predicted == 0:
            return math.nan
        return self.var_ipsq_sample / self.var_ipsq_predicted


def _pair_products(kind, M, spacing, seed, start, stop):
    """``g_i^H g_j / M`` for fresh independent pairs, one per trial."""
    if kind is Kind.RAYLEIGH:
        z = np.stack([substream(seed, M, t).standard_normal((M, 2, 2)) for t in range(start, stop)])
        g = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
        return np.einsum("tm,tm->t", g[:, :, 0].conj(), g[:, :, 1]) / M
    u = np.stack([substream(seed, M, t).uniform(-1.0, 1.0, 2) for t in range(start, stop)])
    m = np.arange(M)
    # conj(g_i) * g_j = exp(2j*pi*spacing*m*(u_i - u_j))
    phase = 2.0 * np.pi * spacing * np.outer(u[:, 0] - u[:, 1], m)
    return np.exp(1j * phase).sum(axis=1) / M


def variance_study(model, M_list, trials, seed, spacing=0.5, workers=1):
    """Sample versus predicted variances of normalized inner products.

    For every ``M`` draws ``trials`` independent channel pairs and returns a
    ``VarianceRow`` with the sample variances of ``g_i^H g_j / M`` and of
    ``|g_i^H g_j|^2 / M^2`` next to their closed forms.
    """
    kind = Kind(model)
    if kind is Kind.FIXEDLOS:
        raise ValueError("variance_study needs a random model")
    if trials < 10_000:
        raise ValueError("variance_study needs at least 10^4 trials")
    rows = []
    for M in M_list:
        pred_ip = predicted_ip_variance(kind, M, spacing)
        pred_sq = predicted_ip_sq_variance(kind, M, spacing)
        parts = _run_chunks(trials, lambda a, b: _pair_products(kind, M, spacing, seed, a, b), workers)
        ip = np.concatenate(parts)
        sq = np.abs(ip) ** 2
        var_ip = float(np.sum(np.abs(ip - ip.mean()) ** 2) / (ip.size - 1))
        rows.append(VarianceRow(M=int(M), var_ip_sample=var_ip, var_ip_predicted=pred_ip,
                                var_ipsq_sample=float(np.var(sq, ddof=1)),
                                var_ipsq_predicted=pred_sq))
    return rows
