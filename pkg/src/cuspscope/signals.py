"""Test signals: Hölder cusps, cusp-domain composites, rough backgrounds.

All generators are deterministic functions of their parameters (and seed)
and return :class:`~cuspscope.engine.GridSignal` objects on a periodic grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy.ndimage import distance_transform_edt

from .engine import GridError, GridSignal

__all__ = [
    "CuspDomain",
    "CuspError",
    "smooth_step",
    "smooth_window",
    "holder_cusp",
    "composite_cusp",
    "oscillating_cusp",
    "oscillation_wavelength",
    "rough_background",
    "band_limited_random",
    "smooth_component",
]


class CuspError(ValueError):
    """Degenerate or invalid cusp domain."""


def smooth_step(u) -> np.ndarray:
    """C-infinity step: 0 for ``u <= 0``, 1 for ``u >= 1`` (exactly)."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        f1 = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return f0 / (f0 + f1)


def smooth_window(r, inner: float, outer: float) -> np.ndarray:
    """Radial window: 1 for ``r <= inner``, 0 for ``r >= outer``, smooth in between."""
    if not 0 <= inner < outer:
        raise ValueError("need 0 <= inner < outer")
    return 1.0 - smooth_step((np.asarray(r, dtype=float) - inner) / (outer - inner))


def _grid(n_points: int, length: float, dimension: int, origin=0.0):
    sig = GridSignal(np.zeros((n_points,) * dimension), length, origin)
    return sig, sig.coords()


def _check_aligned(sig: GridSignal, x0) -> np.ndarray:
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (sig.dimension,))
    steps = (x0 - np.asarray(sig.origin)) / sig.spacing
    if np.any(np.abs(steps - np.round(steps)) > 1e-9):
        raise GridError("x0 must lie on a grid point")
    return x0


def holder_cusp(
    alpha: float,
    x0=0.5,
    window: tuple[float, float] = (0.2, 0.35),
    n_points: int = 4096,
    length: float = 1.0,
    dimension: int = 1,
    origin=0.0,
) -> GridSignal:
    """``|x - x0|^alpha w(|x - x0|)`` with a smooth compactly supported window.

    ``window = (inner, outer)``: ``w = 1`` on ``|t| < inner`` and vanishes
    beyond ``outer``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    sig, coords = _grid(n_points, length, dimension, origin)
    x0 = _check_aligned(sig, x0)
    r = np.sqrt(sum((c - x0[i]) ** 2 for i, c in enumerate(coords)))
    out = r ** alpha * smooth_window(r, *window)
    return sig.with_samples(out)


@dataclass(frozen=True)
class CuspDomain:
    """``{y : 0 < t <= extent, |y - x0 - t xi| <= width * t^degree}`` with ``t = (y - x0) . xi``."""

    apex: tuple[float, float] = (0.5, 0.5)
    axis: tuple[float, float] = (1.0, 0.0)
    degree: float = 2.0
    width: float = 1.0
    extent: float = 0.4

    def __post_init__(self):
        ax = np.asarray(self.axis, dtype=float)
        nrm = float(np.linalg.norm(ax))
        if ax.shape != (2,) or nrm == 0:
            raise CuspError("axis must be a nonzero 2-vector")
        object.__setattr__(self, "axis", tuple((ax / nrm).tolist()))
        object.__setattr__(self, "apex", tuple(float(v) for v in self.apex))
        if not self.degree > 1:
            raise CuspError("cusp degree must exceed 1")
        if not (self.width > 0 and self.extent > 0):
            raise CuspError("width and extent must be positive")

    @property
    def normal(self) -> tuple[float, float]:
        return (-self.axis[1], self.axis[0])

    def local_coords(self, coords) -> tuple[np.ndarray, np.ndarray]:
        """Axial depth ``t`` and signed transverse offset of grid points."""
        dx = coords[0] - self.apex[0]
        dy = coords[1] - self.apex[1]
        t = dx * self.axis[0] + dy * self.axis[1]
        s = dx * self.normal[0] + dy * self.normal[1]
        return t, s

    def contains(self, coords) -> np.ndarray:
        t, s = self.local_coords(coords)
        tp = np.maximum(t, 0.0)
        return (t > 0) & (t <= self.extent) & (np.abs(s) <= self.width * tp ** self.degree)

    def indicator(self, n_points: int, length: float = 1.0, origin=0.0) -> np.ndarray:
        _, coords = _grid(n_points, length, 2, origin)
        return np.broadcast_to(self.contains(coords), (n_points, n_points)).copy()

    def to_dict(self) -> dict:
        return {"apex": list(self.apex), "axis": list(self.axis), "degree": self.degree,
                "width": self.width, "extent": self.extent}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CuspDomain":
        return cls(tuple(d.get("apex", (0.5, 0.5))), tuple(d.get("axis", (1.0, 0.0))),
                   d.get("degree", 2.0), d.get("width", 1.0), d.get("extent", 0.4))


def smooth_component(spec: Mapping[str, Any] | None, coords) -> np.ndarray:
    """Smooth inside-part: ``{"kind": "zero"}``, ``{"kind": "constant", "value": v}``
    or ``{"kind": "cosine", "amplitude": A, "wavevector": [kx, ky]}`` (integer modes)."""
    spec = dict(spec or {"kind": "zero"})
    shape = np.broadcast_shapes(*(np.shape(c) for c in coords))
    kind = spec.get("kind", "zero")
    if kind == "zero":
        return np.zeros(shape)
    if kind == "constant":
        return np.full(shape, float(spec.get("value", 1.0)))
    if kind == "cosine":
        kv = spec.get("wavevector", [1, 0])
        length = float(spec.get("length", 1.0))
        phase = sum(2 * np.pi * kv[i] * c / length for i, c in enumerate(coords))
        return np.broadcast_to(float(spec.get("amplitude", 1.0)) * np.cos(phase), shape).copy()
    raise ValueError(f"unknown smooth component kind {kind!r}")


def _blend_weight(indicator: np.ndarray, width_steps: float) -> np.ndarray:
    """Partition weight of the inside part from the signed distance to the cusp."""
    d_out = distance_transform_edt(~indicator)
    d_in = distance_transform_edt(indicator)
    signed = np.where(indicator, -d_in, d_out)
    return 1.0 - smooth_step((signed + width_steps) / (2.0 * width_steps))


def _splice(inside: np.ndarray, outside: np.ndarray, chi: np.ndarray) -> np.ndarray:
    out = chi * inside + (1.0 - chi) * outside
    out = np.where(chi == 1.0, inside, out)
    return np.where(chi == 0.0, outside, out)


def composite_cusp(
    domain: CuspDomain,
    inside: Mapping[str, Any] | None = None,
    beta: float = 0.3,
    blend_steps: float = 3.0,
    n_points: int = 512,
    length: float = 1.0,
    seed: int = 0,
    direction=(1, 1),
    outside: np.ndarray | None = None,
) -> GridSignal:
    """Smooth inside the cusp, Hölder-``beta`` rough outside, spliced by a smooth partition.

    The splice weight is a C-infinity function of the signed Euclidean distance
    to the cusp: exactly 1 on the cusp eroded by ``blend_steps`` grid steps and
    exactly 0 outside its dilation by the same amount.  ``outside`` overrides
    the default :func:`rough_background` exterior.
    """
    dx = length / n_points
    if domain.extent < 4 * dx:
        raise CuspError("cusp extent is below 4 grid steps")
    _, coords = _grid(n_points, length, 2)
    ind = domain.indicator(n_points, length)
    chi = _blend_weight(ind, blend_steps)
    inner = smooth_component(inside, coords)
    if outside is None:
        outside = rough_background(beta, n_points, length, 2, seed, direction).samples
    return GridSignal(_splice(inner, np.asarray(outside), chi), length)


def oscillation_wavelength(t, alpha: float):
    """Local wavelength of ``sin(t^-alpha)`` at depth ``t``: ``2 pi t^(alpha+1) / alpha``."""
    return 2 * np.pi * np.asarray(t, dtype=float) ** (alpha + 1) / alpha


def oscillating_cusp(
    domain: CuspDomain,
    alpha: float = 1.5,
    beta: float = 0.3,
    blend_steps: float = 3.0,
    n_points: int = 512,
    length: float = 1.0,
    seed: int = 0,
    min_wavelength_steps: float = 4.0,
) -> tuple[GridSignal, float]:
    """``sin(t^-alpha)`` inside the cusp, rough outside as in :func:`composite_cusp`.

    Below the depth ``t_min`` where the local wavelength drops to
    ``min_wavelength_steps`` grid steps the phase is frozen at its ``t_min``
    value.  Returns the signal and ``t_min``.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    dx = length / n_points
    t_min = (min_wavelength_steps * dx * alpha / (2 * np.pi)) ** (1.0 / (alpha + 1))
    _, coords = _grid(n_points, length, 2)
    t, _ = domain.local_coords(coords)
    t = np.broadcast_to(t, (n_points, n_points))
    inner = np.sin(np.maximum(t, t_min) ** (-alpha))
    ind = domain.indicator(n_points, length)
    chi = _blend_weight(ind, blend_steps)
    outside = rough_background(beta, n_points, length, 2, seed).samples
    return GridSignal(_splice(inner, outside, chi), length), float(t_min)


def rough_background(
    beta: float,
    n_points: int = 512,
    length: float = 1.0,
    dimension: int = 1,
    seed: int = 0,
    direction=None,
    amplitude: float = 1.0,
) -> GridSignal:
    """Weierstrass-type sum ``sum_j 2^(-beta j) cos(2^j 2 pi (x . e) / L + phi_j)``.

    ``e`` is an integer direction (default 1 in 1-D, ``(1, 1)`` in 2-D) so every
    term is periodic; terms stop below the Nyquist mode.  Phases come from the
    seed.  The sum has zero mean.
    """
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    if direction is None:
        direction = (1,) if dimension == 1 else (1, 1)
    e = np.asarray(direction, dtype=int).reshape(-1)
    if e.size != dimension or not np.any(e):
        raise ValueError("direction must be a nonzero integer vector of the signal dimension")
    rng = np.random.default_rng(seed)
    _, coords = _grid(n_points, length, dimension)
    proj = sum(e[i] * c for i, c in enumerate(coords))
    n_terms = int(math.floor(math.log2((n_points // 2 - 1) / np.max(np.abs(e))))) + 1
    phases = rng.uniform(0, 2 * np.pi, n_terms)
    out = np.zeros((n_points,) * dimension)
    for j in range(n_terms):
        out = out + 2.0 ** (-beta * j) * np.cos(2.0 ** j * 2 * np.pi * proj / length + phases[j])
    return GridSignal(amplitude * out, length)


def band_limited_random(
    band: tuple[float, float],
    n_points: int = 1024,
    length: float = 1.0,
    dimension: int = 1,
    seed: int = 0,
) -> GridSignal:
    """Real random signal whose spectrum is confined to ``band[0] <= |m| <= band[1]``.

    ``m`` is the integer mode index (wavenumber ``2 pi m / L``).  The result
    has unit RMS.
    """
    lo, hi = band
    if not 0 <= lo <= hi:
        raise ValueError("need 0 <= band[0] <= band[1]")
    rng = np.random.default_rng(seed)
    shape = (n_points,) * dimension
    m = np.fft.fftfreq(n_points) * n_points
    mesh = np.meshgrid(*([m] * dimension), indexing="ij")
    mod = np.sqrt(sum(x * x for x in mesh))
    spec = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    spec[(mod < lo) | (mod > hi)] = 0.0
    out = np.fft.ifftn(spec).real
    rms = math.sqrt(float(np.mean(out ** 2)))
    if rms == 0:
        raise ValueError("band contains no grid modes")
    return GridSignal(out / rms, length)
