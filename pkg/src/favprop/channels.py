"""
Channel matrix generators for a base station with a uniform linear array.

A channel matrix is an ``(M, K)`` complex array whose column ``k`` is the
channel vector of terminal ``k``.  Three propagation scenarios are
supported:

* ``rayleigh`` -- i.i.d. CN(0, 1) small-scale fading,
* ``urlos``    -- line of sight with ``sin(theta_k)`` i.i.d. uniform on
  [-1, 1],
* ``fixedlos`` -- line of sight with given arrival angles.

Every column is scaled by ``sqrt(beta_k)`` (large-scale fading).
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "Kind",
    "ChannelModelSpec",
    "steering_vector",
    "steering_matrix",
    "generate",
    "critical_pair",
    "substream",
]


class Kind(str, enum.Enum):
    RAYLEIGH = "rayleigh"
    URLOS = "urlos"
    FIXEDLOS = "fixedlos"


@dataclass(frozen=True)
class ChannelModelSpec:
    """How to draw a channel matrix.

    Parameters
    ----------
    kind : Kind or str
        ``"rayleigh"``, ``"urlos"`` or ``"fixedlos"``.
    betas : sequence of float, optional
        Large-scale fading per terminal. ``None`` means all ones.
    spacing : float
        Antenna spacing in wavelengths, d/lambda. Ignored for Rayleigh.
    angles : sequence of float, optional
        Arrival angles in radians, required for ``fixedlos``.
    """

    kind: Kind = Kind.RAYLEIGH
    betas: Optional[tuple] = None
    spacing: float = 0.5
    angles: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.betas is not None:
            betas = tuple(float(b) for b in self.betas)
            if any(not math.isfinite(b) or b < 0 for b in betas):
                raise ValueError("betas must be finite and non-negative")
            object.__setattr__(self, "betas", betas)
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError("spacing must be a positive finite number")
        if self.angles is not None:
            angles = tuple(float(a) for a in self.angles)
            if any(not (-math.pi / 2 <= a <= math.pi / 2) for a in angles):
                raise ValueError("angles must lie in [-pi/2, pi/2]")
            object.__setattr__(self, "angles", angles)
        if self.kind is Kind.FIXEDLOS and self.angles is None:
            raise ValueError("fixedlos requires angles")

    def beta_vector(self, K: int) -> np.ndarray:
        if self.betas is None:
            return np.ones(K)
        if len(self.betas) != K:
            raise ValueError(f"betas has length {len(self.betas)}, expected K={K}")
        return np.asarray(self.betas, dtype=float)


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator derived from a master seed and integer keys.

    The result depends only on ``(seed, *keys)``, so trials can be run in any
    order or in parallel without changing their draws.
    """
    return np.random.default_rng([int(seed), *(int(k) for k in keys)])


def _check_dims(M, K=1):
    if int(M) != M or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    if int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")


def steering_matrix(sines, M: int, spacing: float = 0.5) -> np.ndarray:
    """ULA responses for several directions given by their sines.

    Returns an ``(M, len(sines))`` array with entry ``(m, k)`` equal to
    ``exp(-2j*pi*m*spacing*sines[k])``.  Working with sines directly avoids
    an arcsin/sin round trip when the angle distribution is defined on
    ``sin(theta)``.
    """
    _check_dims(M)
    sines = np.atleast_1d(np.asarray(sines, dtype=float))
    if not np.all(np.isfinite(sines)) or not math.isfinite(spacing) or spacing <= 0:
        raise ValueError("sines must be finite and spacing positive")
    m = np.arange(M, dtype=float)[:, None]
    return np.exp(-2j * np.pi * spacing * m * sines[None, :])


def steering_vector(theta: float, M: int, spacing: float = 0.5) -> np.ndarray:
    """Far-field response of an ``M``-element ULA to a plane wave from
    ``theta`` radians off boresight.

    >>> np.allclose(steering_vector(np.pi / 2, 2), [1, -1])
    True
    """
    if not (math.isfinite(theta) and math.isfinite(spacing)):
        raise ValueError("theta and spacing must be finite")
    return steering_matrix([math.sin(theta)], M, spacing)[:, 0]


def generate(spec: ChannelModelSpec, M: int, K: int, rng: np.random.Generator):
    """Draw one channel matrix.

    Parameters
    ----------
    spec : ChannelModelSpec
    M, K : int
        Number of base-station antennas and terminals.
    rng : numpy.random.Generator
        Consumed only for the random kinds.

    Returns
    -------
    G : ndarray, shape (M, K), complex
    angles : ndarray of shape (K,) or None
        Drawn arrival angles for ``urlos``, ``None`` otherwise.
    """
    _check_dims(M, K)
    sqrt_beta = np.sqrt(spec.beta_vector(K))
    angles = None
    if spec.kind is Kind.RAYLEIGH:
        z = rng.standard_normal((M, K, 2))
        G = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
    elif spec.kind is Kind.URLOS:
        u = rng.uniform(-1.0, 1.0, size=K)
        angles = np.arcsin(u)
        G = steering_matrix(u, M, spec.spacing)
    else:
        if len(spec.angles) != K:
            raise ValueError(f"{len(spec.angles)} angles given, expected K={K}")
        G = steering_matrix(np.sin(spec.angles), M, spec.spacing)
    return G * sqrt_beta[None, :], angles


def critical_pair(M: int, spacing: float = 0.5) -> np.ndarray:
    """Two LoS terminals whose sines differ by exactly ``1/M``.

    At half-wavelength spacing the normalized inner product of the two
    columns tends to ``2/pi`` in modulus as ``M`` grows, so the pair never
    becomes orthogonal.
    """
    if int(M) != M or M < 2:
        raise ValueError("critical_pair needs M >= 2")
    return steering_matrix([0.0, 1.0 / M], M, spacing)

