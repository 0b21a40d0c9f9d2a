"""
Favorability measures of a channel matrix and closed-form variance laws.

All functions take a channel matrix ``G`` of shape ``(M, K)``; the spectral
and capacity functions also accept a stack ``(..., M, K)`` and return one
value per matrix.  Spectral quantities come from the ``K x K`` Gramian
``G^H G``.

.. note::
   ``condition_number`` is the ratio of extreme *Gramian* eigenvalues, i.e.
   the square of the usual condition number of ``G`` itself.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channels import Kind
from .linalg import clamp_spectrum, hermitian_eigvalsh, jacobi_eigvalsh

__all__ = [
    "UndefinedMetricError",
    "FavorabilityReport",
    "gramian",
    "gramian_spectrum",
    "sum_capacity",
    "hadamard_bound",
    "jensen_bound",
    "condition_number",
    "distance_from_fp",
    "pairwise_inner_products",
    "is_favorable",
    "predicted_ip_variance",
    "predicted_ip_sq_variance",
    "favorability_report",
]

# Eigenvalues at or below RANK_TOL * lam_max count as zero for conditioning.
RANK_TOL = 1e-12


class UndefinedMetricError(ValueError):
    """A metric has no defined value for the given channel (e.g. zero capacity)."""


class Normalization(str, enum.Enum):
    RAW = "raw"
    PER_ANTENNA = "per-antenna"


def _check_rho(rho):
    if not math.isfinite(rho) or rho <= 0:
        raise ValueError(f"rho must be positive and finite, got {rho!r}")


def gramian(G):
    """``G^H G``, entry ``(i, j)`` being ``g_i^H g_j``."""
    G = np.asarray(G)
    return np.swapaxes(G.conj(), -1, -2) @ G


def column_norms_sq(G):
    G = np.asarray(G)
    return np.sum(np.abs(G) ** 2, axis=-2)


def gramian_spectrum(G, method="lapack"):
    """Ascending eigenvalues of ``G^H G``, clamped at zero.

    ``method="jacobi"`` uses the self-contained cyclic Jacobi solver (single
    matrices only); the default delegates to LAPACK and handles stacks.
    """
    R = gramian(G)
    if method == "jacobi":
        lam = jacobi_eigvalsh(R)
    elif method == "lapack":
        lam = hermitian_eigvalsh(R)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return clamp_spectrum(lam)


def _log2_1p(x):
    return np.log1p(x) / math.log(2.0)


def sum_capacity(G, rho):
    """Sum-capacity ``log2 det(I + rho G^H G)`` in bits/s/Hz.

    Evaluated as ``sum(log2(1 + rho*lam))`` over the Gramian spectrum.

    >>> float(sum_capacity(np.array([[1.0], [1.0], [1.0]]), 1.0))
    2.0
    """
    _check_rho(rho)
    return np.sum(_log2_1p(rho * gramian_spectrum(G)), axis=-1)


def hadamard_bound(G, rho):
    """``sum_k log2(1 + rho ||g_k||^2)``, the capacity under orthogonal columns."""
    _check_rho(rho)
    return np.sum(_log2_1p(rho * column_norms_sq(G)), axis=-1)


def jensen_bound(G, rho):
    """``K log2(1 + rho/K ||G||_F^2)``, tight iff columns are orthogonal with equal norms."""
    _check_rho(rho)
    norms = column_norms_sq(G)
    K = norms.shape[-1]
    return K * _log2_1p(rho / K * np.sum(norms, axis=-1))


def _condition_from_spectrum(lam):
    lam = np.asarray(lam)
    top = lam[..., -1]
    bottom = lam[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bottom > RANK_TOL * top, top / np.where(bottom > 0, bottom, 1.0), np.inf)
    return ratio[()] if ratio.ndim == 0 else ratio


def condition_number(G):
    """Largest over smallest Gramian eigenvalue; ``inf`` when rank deficient.

    Eigenvalues at or below ``RANK_TOL * lam_max`` are treated as zero, so a
    zero matrix or a repeated column gives ``inf``.
    """
    return _condition_from_spectrum(gramian_spectrum(G))


def _delta_c(hadamard, capacity):
    capacity = np.asarray(capacity, dtype=float)
    if np.any(capacity <= 0):
        raise UndefinedMetricError("distance from favorable propagation needs nonzero capacity")
    return (np.asarray(hadamard) - capacity) / capacity


def distance_from_fp(G, rho):
    """Relative gap between the Hadamard bound and the sum-capacity.

    Zero exactly when the Gramian is diagonal. Raises
    ``UndefinedMetricError`` when the capacity is zero (``G = 0``).
    """
    return _delta_c(hadamard_bound(G, rho), sum_capacity(G, rho))


def pairwise_inner_products(G, normalization="raw"):
    """``g_i^H g_j`` for all ``i < j`` in row-major pair order.

    With ``normalization="per-antenna"`` every value is divided by ``M``.
    """
    G = np.asarray(G)
    M, K = G.shape[-2:]
    if K < 2:
        raise ValueError("pairwise inner products need at least two terminals")
    norm = Normalization(normalization)
    i, j = np.triu_indices(K, k=1)
    values = gramian(G)[..., i, j]
    if norm is Normalization.PER_ANTENNA:
        values = values / M
    return values


def is_favorable(G, epsilon=0.0):
    """True when all columns are nonzero and pairwise nearly orthogonal.

    The test is ``|g_i^H g_j| <= epsilon ||g_i|| ||g_j||`` for every pair.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    G = np.asarray(G)
    norms = np.sqrt(column_norms_sq(G))
    if np.any(norms == 0):
        return False
    if G.shape[-1] < 2:
        return True
    i, j = np.triu_indices(G.shape[-1], k=1)
    ip = np.abs(gramian(G)[i, j])
    return bool(np.all(ip <= epsilon * norms[i] * norms[j]))


def _model(model):
    kind = Kind(model)
    if kind is Kind.FIXEDLOS:
        raise ValueError("variance laws exist only for rayleigh and urlos")
    return kind


def _check_spacing(kind, spacing):
    if kind is Kind.URLOS and spacing != 0.5:
        raise ValueError("the UR-LoS variance law holds only for spacing 0.5")


def predicted_ip_variance(model, M, spacing=0.5):
    """Variance of ``g_i^H g_j / M`` for independent columns.

    ``1/M`` for Rayleigh, ``1/M - 1/M^2`` for UR-LoS at half-wavelength
    spacing.
    """
    kind = _model(model)
    _check_spacing(kind, spacing)
    if M < 1:
        raise ValueError("M must be positive")
    if kind is Kind.RAYLEIGH:
        return 1.0 / M
    return 1.0 / M - 1.0 / M ** 2


def predicted_ip_sq_variance(model, M, spacing=0.5):
    """Variance of ``|g_i^H g_j|^2 / M^2``.

    ``(M+2)/M^3`` for Rayleigh and ``(M-1)M(2M-1)/(3M^4)`` for UR-LoS; the
    latter approaches ``2/(3M)``.
    """
    kind = _model(model)
    _check_spacing(kind, spacing)
    if M < 1:
        raise ValueError("M must be positive")
    if kind is Kind.RAYLEIGH:
        return (M + 2) / M ** 3
    return (M - 1) * M * (2 * M - 1) / (3 * M ** 4)


@dataclass(frozen=True)
class FavorabilityReport:
    capacity: float
    hadamard_bound: float
    jensen_bound: float
    delta_c: float
    condition_number: float
    gramian_spectrum: np.ndarray
    snr: float


def favorability_report(G, rho=1.0):
    """All per-matrix favorability measures computed from one eigensolve."""
    _check_rho(rho)
    lam = gramian_spectrum(G)
    capacity = float(np.sum(_log2_1p(rho * lam)))
    hadamard = float(hadamard_bound(G, rho))
    return FavorabilityReport(
        capacity=capacity,
        hadamard_bound=hadamard,
        jensen_bound=float(jensen_bound(G, rho)),
        delta_c=float(_delta_c(hadamard, capacity)),
        condition_number=float(_condition_from_spectrum(lam)),
        gramian_spectrum=lam,
        snr=rho,
    )
