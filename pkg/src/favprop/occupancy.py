"""
Urns-and-balls model for terminal dropping in UR-LoS channels.

An ``M``-element half-wavelength array forms ``M`` mutually orthogonal beams.
If each of ``K`` terminals falls into a beam uniformly at random, every beam
holding more than one terminal forces all but one of them out of service.
The number of dropped terminals is ``N_drop = N_0 - (M - K)`` where ``N_0``
counts empty beams.

Probabilities are computed with exact integer/rational arithmetic: the
alternating sum cancels catastrophically in floating point once ``M`` is a
few hundred.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .channels import substream

__all__ = [
    "BeamGrid",
    "DropDistribution",
    "beam_grid",
    "drop_pmf",
    "mean_drop",
    "simulate_drop",
    "assign_and_drop",
    "total_variation",
]

# Trials per random substream in simulate_drop; fixed so that the worker
# count never changes which draws a trial sees.
DROP_BLOCK = 65536


@dataclass(frozen=True)
class BeamGrid:
    """Sines of the ``M`` orthogonal beam directions, ``-1 + (2m-1)/M``."""

    M: int

    @property
    def exact_sines(self):
        return tuple(Fraction(2 * m - 1 - self.M, self.M) for m in range(1, self.M + 1))

    @property
    def sines(self):
        m = np.arange(1, self.M + 1)
        return (2 * m - 1 - self.M) / self.M

    @property
    def angles(self):
        return np.arcsin(self.sines)


def beam_grid(M):
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    return BeamGrid(int(M))


@dataclass(frozen=True)
class DropDistribution:
    """Exact law of the number of dropped terminals.

    ``pmf[n]`` is ``P(N_drop = n)`` for ``n = 0 .. K-1`` as a ``Fraction``.
    """

    M: int
    K: int
    pmf: tuple
    mean: Fraction

    @property
    def pmf_float(self):
        return np.array([float(p) for p in self.pmf])

    @property
    def mean_float(self):
        return float(self.mean)

    def expected_mean(self):
        """Closed form ``M (1 - 1/M)^K - (M - K)`` from the expected number of empty beams."""
        return self.M * (1 - Fraction(1, self.M)) ** self.K - (self.M - self.K)


def _check_mk(M, K):
    if int(M) != M or int(K) != K or M < 1 or K < 1:
        raise ValueError("M and K must be positive integers")
    if K > M:
        raise ValueError(f"need K <= M, got K={K}, M={M}")


def drop_pmf(M, K):
    """Exact distribution of the number of dropped terminals.

    Uses the classical occupancy formula for the number of empty urns,
    ``P(N_0 = j) = C(M, j) sum_{k=0}^{M-j} (-1)^k C(M-j, k) (1 - (j+k)/M)^K``,
    with ``j = n + M - K``.

    >>> drop_pmf(2, 2).pmf
    (Fraction(1, 2), Fraction(1, 2))
    """
    _check_mk(M, K)
    M, K = int(M), int(K)
    denom = M ** K
    pmf = []
    for n in range(K):
        j = n + M - K
        r = K - n
        s = sum((-1) ** k * comb(r, k) * (M - j - k) ** K for k in range(r + 1))
        pmf.append(Fraction(comb(M, j) * s, denom))
    mean = sum((n * p for n, p in enumerate(pmf)), Fraction(0))
    return DropDistribution(M=M, K=K, pmf=tuple(pmf), mean=mean)


def mean_drop(M, K):
    """Expected number of dropped terminals as an exact ``Fraction``."""
    return drop_pmf(M, K).mean


def _drop_block(M, K, n, rng):
    beams = np.sort(rng.integers(0, M, size=(n, K)), axis=1)
    occupied = 1 + np.count_nonzero(np.diff(beams, axis=1), axis=1)
    return np.bincount(K - occupied, minlength=K)


def simulate_drop(M, K, trials, seed=0, workers=1):
    """Monte Carlo estimate of the drop distribution.

    Throws ``K`` balls into ``M`` urns uniformly per trial and returns the
    frequency of each ``N_drop = 0 .. K-1``.  Trials are split into fixed
    blocks, each with its own substream keyed by ``(seed, block)``, so the
    result does not depend on ``workers``.  ``seed`` may also be a
    ``numpy.random.Generator``, from which a master seed is drawn.
    """
    _check_mk(M, K)
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(2 ** 63))
    if trials < 1:
        raise ValueError("trials must be >= 1")
    starts = range(0, trials, DROP_BLOCK)

    def run(b):
        start = starts[b]
        n = min(DROP_BLOCK, trials - start)
        return _drop_block(M, K, n, substream(seed, 0x0CC, b))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(run, range(len(starts))))
    else:
        counts = [run(b) for b in range(len(starts))]
    return np.sum(counts, axis=0) / trials


def total_variation(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * float(np.sum(np.abs(p - q)))


def assign_and_drop(sines, M):
    """Map terminals to their nearest beam and return the dropped ones.

    A terminal exactly halfway between two beams goes to the lower-index
    beam. In a beam holding several terminals only the lowest-indexed
    terminal is kept.

    Returns
    -------
    set of int
        Indices of dropped terminals.
    """
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    sines = np.asarray(sines, dtype=float)
    # beam b (0-based) owns the half-open interval (-1 + 2b/M, -1 + 2(b+1)/M]
    beams = np.clip(np.ceil((sines + 1.0) * M / 2.0) - 1, 0, M - 1).astype(int)
    taken = set()
    dropped = set()
    for k, b in enumerate(beams):
        if b in taken:
            dropped.add(k)
        else:
            taken.add(b)
    return dropped
