"""Fourier-domain wavelet catalog and admissibility machinery.

Every wavelet is defined by its Fourier profile ``ghat(k)`` with the
convention ``ghat(k) = int dx exp(-i k.x) g(x)``.  Position-space samples are
only produced on demand, by inverse FFT.

Catalog
-------
``log-normal-radial``
    ``ghat(k) = exp(-ln^2 |k|)``.  Radial, strictly positive off the origin,
    flat at ``k = 0`` (all moments vanish), admissibility constant
    ``sqrt(pi/2)``.
``gaussian-derivative``
    ``ghat(k) = |k|^m exp(-|k|^2/2)``.  Radial, vanishes to order ``m`` at the
    origin.  For even ``m`` this is ``(-Laplacian)^(m/2)`` of a Gaussian.  Not
    flat at the origin, so exponent estimates saturate near ``m``.
``laplacian-of``
    ``hhat(k) = -|k|^2 ghat(k)`` for an inner spec ``g``.
``tabulated-spectral``
    ``base`` spectrum divided by a power of a tabulated directional profile;
    :func:`reconstruction_wavelet` (power 1) and :func:`strictly_admissible`
    (power 1/2) return this kind.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

__all__ = [
    "WaveletSpec",
    "AdmissibilityProfile",
    "WaveletError",
    "UnsupportedDimensionError",
    "QuadratureError",
    "InadmissibleWaveletError",
    "log_normal",
    "gaussian_derivative",
    "laplacian_of",
    "eval_spectrum",
    "admissibility_profile",
    "admissibility_constant",
    "reconstruction_wavelet",
    "strictly_admissible",
    "normalized",
    "moment_decay_order",
    "position_samples",
    "default_directions",
]

KINDS = ("log-normal-radial", "gaussian-derivative", "laplacian-of", "tabulated-spectral")
_ALIASES = {"log-normal": "log-normal-radial", "lognormal": "log-normal-radial"}


class WaveletError(ValueError):
    """Base class for invalid wavelet specifications or operations."""


class UnsupportedDimensionError(WaveletError):
    pass


class QuadratureError(WaveletError):
    """The scale quadrature tail could not be pushed below tolerance."""


class InadmissibleWaveletError(WaveletError):
    pass


@dataclass(frozen=True, eq=False)
class WaveletSpec:
    """Immutable analytic description of a wavelet.

    ``params`` holds kind-specific parameters: ``order`` for
    ``gaussian-derivative``; ``inner`` (a spec dict) for ``laplacian-of``;
    ``base``, ``profile``, ``directions`` and ``power`` for
    ``tabulated-spectral``.
    ``norm`` multiplies the whole profile.
    """

    kind: str
    dimension: int = 1
    params: Mapping[str, Any] = field(default_factory=dict)
    norm: float = 1.0

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise WaveletError(f"unknown wavelet kind {self.kind!r}")
        if self.dimension not in (1, 2):
            raise UnsupportedDimensionError(f"dimension must be 1 or 2, got {self.dimension}")
        if not (self.norm > 0 and math.isfinite(self.norm)):
            raise WaveletError("normalization constant must be a finite positive number")
        if kind == "gaussian-derivative":
            m = self.params.get("order")
            if not isinstance(m, (int, np.integer)) or m < 1:
                raise WaveletError("gaussian-derivative needs an integer order >= 1")
        if kind == "laplacian-of":
            inner = self.params.get("inner")
            if isinstance(inner, Mapping):
                inner = WaveletSpec.from_dict(inner)
            if not isinstance(inner, WaveletSpec):
                raise WaveletError("laplacian-of needs an inner wavelet")
            if inner.dimension != self.dimension:
                raise WaveletError("inner wavelet dimension mismatch")
            object.__setattr__(self, "params", {"inner": inner})
        if kind == "tabulated-spectral":
            base = self.params.get("base")
            if isinstance(base, Mapping):
                base = WaveletSpec.from_dict(base)
            if not isinstance(base, WaveletSpec):
                raise WaveletError("tabulated-spectral needs a base wavelet")
            profile = np.asarray(self.params["profile"], dtype=float)
            directions = np.asarray(self.params["directions"], dtype=float)
            if profile.shape != directions.shape[:1] or np.any(profile <= 0):
                raise WaveletError("tabulated profile must be positive, one value per direction")
            power = float(self.params.get("power", 1.0))
            object.__setattr__(
                self,
                "params",
                {"base": base, "profile": profile, "directions": directions, "power": power},
            )

    # -- metadata -------------------------------------------------------
    @property
    def radial(self) -> bool:
        if self.kind == "laplacian-of":
            return self.params["inner"].radial
        if self.kind == "tabulated-spectral":
            p = self.params["profile"]
            return self.params["base"].radial and float(p.max() / p.min() - 1) < 1e-12
        return True

    @property
    def moment_order(self) -> float:
        """Vanishing order of ``ghat`` at the origin (``inf`` for flat profiles)."""
        if self.kind == "log-normal-radial":
            return math.inf
        if self.kind == "gaussian-derivative":
            return float(self.params["order"])
        if self.kind == "laplacian-of":
            return self.params["inner"].moment_order + 2
        return self.params["base"].moment_order

    @property
    def in_s0(self) -> bool:
        return math.isinf(self.moment_order)

    def spectrum(self, k) -> np.ndarray:
        return eval_spectrum(self, k)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        params: dict[str, Any] = {}
        if self.kind == "gaussian-derivative":
            params["order"] = int(self.params["order"])
        elif self.kind == "laplacian-of":
            params["inner"] = self.params["inner"].to_dict()
        elif self.kind == "tabulated-spectral":
            params["base"] = self.params["base"].to_dict()
            params["profile"] = self.params["profile"].tolist()
            params["directions"] = self.params["directions"].tolist()
            params["power"] = self.params["power"]
        out = {"kind": self.kind, "dimension": self.dimension, "params": params}
        if self.norm != 1.0:
            out["norm"] = self.norm
        return out

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "WaveletSpec":
        return cls(
            kind=d["kind"],
            dimension=int(d.get("dimension", 1)),
            params=dict(d.get("params", {})),
            norm=float(d.get("norm", 1.0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, WaveletSpec) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.to_json())

    def __repr__(self):
        extra = ""
        if self.kind == "gaussian-derivative":
            extra = f", order={self.params['order']}"
        return f"WaveletSpec({self.kind!r}, dimension={self.dimension}{extra}, norm={self.norm:g})"


@dataclass(frozen=True)
class AdmissibilityProfile:
    """Directional samples of ``m_{g,h}(u) = int da/a conj(ghat(a u)) hhat(a u)``."""

    directions: np.ndarray
    values: np.ndarray
    min_value: float
    max_value: float
    cross: bool
    tail: float = 0.0

    @property
    def ratio(self) -> float:
        return self.max_value / self.min_value

    @property
    def constant(self) -> float:
        """Mean profile value; the admissibility constant for radial pairs."""
        return float(np.mean(self.values))


def log_normal(dimension: int = 1, normalized: bool = False) -> WaveletSpec:
    norm = (math.pi / 2) ** -0.25 if normalized else 1.0
    return WaveletSpec("log-normal-radial", dimension, {}, norm)


def gaussian_derivative(order: int, dimension: int = 1) -> WaveletSpec:
    return WaveletSpec("gaussian-derivative", dimension, {"order": int(order)})


def laplacian_of(g: WaveletSpec) -> WaveletSpec:
    return WaveletSpec("laplacian-of", g.dimension, {"inner": g})


def _components(w: WaveletSpec, k) -> list[np.ndarray]:
    if w.dimension == 1:
        if isinstance(k, (list, tuple)):
            if len(k) != 1:
                raise UnsupportedDimensionError("1-D wavelet needs one frequency component")
            k = k[0]
        return [np.asarray(k, dtype=float)]
    if isinstance(k, (list, tuple)):
        comps = [np.asarray(c, dtype=float) for c in k]
    else:
        arr = np.asarray(k, dtype=float)
        comps = [arr[0], arr[1]] if arr.ndim >= 1 and arr.shape[0] == 2 else []
    if len(comps) != 2:
        raise UnsupportedDimensionError("2-D wavelet needs two frequency components")
    return list(np.broadcast_arrays(*comps))


def _modulus(comps: list[np.ndarray]) -> np.ndarray:
    if len(comps) == 1:
        return np.abs(comps[0])
    return np.hypot(comps[0], comps[1])


def _radial_profile(w: WaveletSpec, r: np.ndarray) -> np.ndarray:
    out = np.zeros(r.shape, dtype=float)
    pos = r > 0
    rp = r[pos]
    if w.kind == "log-normal-radial":
        out[pos] = np.exp(-np.log(rp) ** 2)
    elif w.kind == "gaussian-derivative":
        m = w.params["order"]
        # log form avoids overflow of r**m for huge r
        out[pos] = np.exp(m * np.log(rp) - 0.5 * rp * rp)
    return out


def _direction_index(w: WaveletSpec, comps: list[np.ndarray]) -> np.ndarray:
    """Interpolated tabulated profile value for each frequency direction."""
    dirs = w.params["directions"]
    prof = w.params["profile"]
    if w.dimension == 1:
        # directions are the two signs, stored as [-1, +1]
        return np.where(comps[0] < 0, prof[np.argmin(dirs)], prof[np.argmax(dirs)])
    ang = np.mod(np.arctan2(comps[1], comps[0]), 2 * np.pi)
    order = np.argsort(dirs)
    d = np.asarray(dirs)[order]
    p = np.asarray(prof)[order]
    return np.interp(ang, d, p, period=2 * np.pi)


def eval_spectrum(w: WaveletSpec, k) -> np.ndarray:
    """Sample ``ghat`` on frequency arrays.

    ``k`` is a plain array for 1-D wavelets, and a pair ``(kx, ky)`` (or an
    array with leading axis 2) for 2-D wavelets.  The result is exactly zero
    at ``k = 0``.
    """
    comps = _components(w, k)
    r = _modulus(comps)
    if w.kind in ("log-normal-radial", "gaussian-derivative"):
        out = _radial_profile(w, r)
    elif w.kind == "laplacian-of":
        out = -(r * r) * eval_spectrum(w.params["inner"], comps)
    else:
        base = eval_spectrum(w.params["base"], comps)
        out = base / _direction_index(w, comps) ** w.params["power"]
        out = np.where(r > 0, out, 0.0)
    return w.norm * np.asarray(out)


def default_directions(dimension: int, count: int = 64) -> np.ndarray:
    """Unit directions used for profiles: signs in 1-D, angles in 2-D."""
    if dimension == 1:
        return np.array([-1.0, 1.0])
    return np.arange(count) * (2 * np.pi / count)


def _unit_vectors(dimension: int, directions: np.ndarray) -> list[np.ndarray]:
    directions = np.asarray(directions, dtype=float)
    if dimension == 1:
        return [np.sign(directions)]
    return [np.cos(directions), np.sin(directions)]


def _trapezoid_profile(g, h, units, t):
    ks = [np.exp(t)[None, :] * u[:, None] for u in units]
    f = np.conj(eval_spectrum(g, ks)) * eval_spectrum(h, ks)
    return f


def admissibility_profile(
    g: WaveletSpec,
    h: WaveletSpec | None = None,
    directions: Sequence[float] | None = None,
    tol: float = 1e-12,
    t_max: float = 200.0,
) -> AdmissibilityProfile:
    """Directional cross profile ``int_0^inf da/a conj(ghat(a u)) hhat(a u)``.

    Trapezoid rule in ``t = ln a``.  The window ``[-T, T]`` grows until the
    integrand at both ends is below ``tol`` times its peak, then the step is
    halved until two successive estimates agree to ``tol`` (relative).
    Directions are signs in 1-D and angles (radians) in 2-D.
    """
    h = g if h is None else h
    if g.dimension != h.dimension:
        raise WaveletError("wavelet dimension mismatch")
    if directions is None:
        directions = default_directions(g.dimension)
    directions = np.asarray(directions, dtype=float)
    units = _unit_vectors(g.dimension, directions)

    # 1. window: widen until the tails are negligible
    T, step = 8.0, 1.0 / 16
    while True:
        t = np.arange(-T, T + step / 2, step)
        f = _trapezoid_profile(g, h, units, t)
        peak = np.max(np.abs(f))
        if peak == 0:
            raise InadmissibleWaveletError("profile integrand vanishes identically")
        edge = max(np.max(np.abs(f[:, :8])), np.max(np.abs(f[:, -8:])))
        if edge <= tol * peak:
            break
        T *= 1.5
        if T > t_max:
            raise QuadratureError(f"scale quadrature tail {edge / peak:.3g} above tolerance {tol}")
    # 2. step: halve until successive trapezoid sums agree
    prev = step * f.sum(axis=1)
    for _ in range(8):
        step /= 2
        t = np.arange(-T, T + step / 2, step)
        f = _trapezoid_profile(g, h, units, t)
        cur = step * f.sum(axis=1)
        if np.max(np.abs(cur - prev)) <= tol * np.max(np.abs(cur)):
            prev = cur
            break
        prev = cur
    values = prev
    if np.max(np.abs(values.imag)) <= tol * np.max(np.abs(values)):
        values = values.real
    vabs = np.abs(values)
    return AdmissibilityProfile(
        directions=directions,
        values=values,
        min_value=float(vabs.min()),
        max_value=float(vabs.max()),
        cross=h is not g,
        tail=float(edge / peak),
    )


def admissibility_constant(g: WaveletSpec) -> float:
    """``c_g`` for a radial wavelet (mean of its direction-independent profile)."""
    return admissibility_profile(g).constant


def _tabulated(g: WaveletSpec, directions, power: float) -> WaveletSpec:
    prof = admissibility_profile(g, g, directions)
    vals = np.asarray(prof.values, dtype=float)
    if not np.all(np.isfinite(vals)) or prof.min_value <= 0:
        raise InadmissibleWaveletError("admissibility profile is not finite and positive")
    return WaveletSpec(
        "tabulated-spectral",
        g.dimension,
        {
            "base": g,
            "profile": vals,
            "directions": np.asarray(prof.directions, dtype=float),
            "power": power,
        },
    )


def reconstruction_wavelet(g: WaveletSpec, directions: Sequence[float] | None = None) -> WaveletSpec:
    """Reconstruction wavelet with unit cross constant.

    ``rhat(k) = ghat(k) / m_g(k/|k|)`` where ``m_g`` is the directional
    profile of ``g``, so that ``int da/a conj(ghat(a k)) rhat(a k) = 1`` in
    every direction and ``M_r W_g`` is the identity.
    """
    return _tabulated(g, directions, 1.0)


def strictly_admissible(g: WaveletSpec, directions: Sequence[float] | None = None) -> WaveletSpec:
    """``ghat / sqrt(m_g)``: strictly admissible with constant 1.

    For radial ``g`` this is also a reconstruction wavelet of ``g``, with cross
    constant ``sqrt(c_g)``.
    """
    return _tabulated(g, directions, 0.5)


def normalized(g: WaveletSpec) -> WaveletSpec:
    """Rescale a radial wavelet so that ``c_g = 1`` (strictly admissible, unit constant)."""
    if not g.radial:
        raise WaveletError("only radial wavelets can be normalized by a constant")
    c = admissibility_constant(g)
    return WaveletSpec(g.kind, g.dimension, dict(g.params), g.norm / math.sqrt(c))


def moment_decay_order(g: WaveletSpec, max_order: int, direction=None) -> int:
    """Largest ``m <= max_order`` with ``ghat(k) = o(|k|^m)`` as ``k -> 0``.

    The local log-log slope of ``|ghat|`` is tracked from ``|k| = 0.1`` down,
    at least one decade, until the slope clears ``max_order + 1``, the profile
    underflows, or ``|k|`` reaches ``1e-12``.  ``o(|k|^m)`` is accepted when the
    limiting slope exceeds ``m + 1/2``.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if direction is None:
        direction = 1.0 if g.dimension == 1 else 0.0
    units = _unit_vectors(g.dimension, np.array([direction]))
    step = 0.25
    slope = 0.0
    logk = -1.0
    while True:
        ks = np.array([10.0 ** logk, 10.0 ** (logk - step)])
        vals = np.abs(eval_spectrum(g, [u * ks for u in units]))
        if vals[1] == 0.0:
            slope = math.inf
            break
        slope = (math.log(vals[0]) - math.log(vals[1])) / (step * math.log(10))
        logk -= step
        if logk <= -2.0 and slope > max_order + 1:
            break
        if logk <= -12.0:
            break
    if math.isinf(slope):
        return int(max_order)
    m = math.ceil(slope - 0.5) - 1
    return int(min(max_order, max(0, m)))


def position_samples(w: WaveletSpec, n_points: int, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Position-space samples of ``g`` on a centered periodic grid.

    Returns ``(x, g)`` with ``x`` in ``[-length/2, length/2)`` along each axis
    and ``g`` approximating ``(2 pi)^-n int dk ghat(k) exp(i k.x)``.
    """
    dx = length / n_points
    k1 = 2 * np.pi * np.fft.fftfreq(n_points, d=dx)
    if w.dimension == 1:
        ghat = eval_spectrum(w, k1)
        g = np.fft.fftshift(np.fft.ifft(ghat)) / dx
    else:
        kx, ky = np.meshgrid(k1, k1, indexing="ij")
        ghat = eval_spectrum(w, (kx, ky))
        g = np.fft.fftshift(np.fft.ifft2(ghat)) / dx ** 2
    x = (np.arange(n_points) - n_points // 2) * dx
    return x, g
