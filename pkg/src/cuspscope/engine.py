"""Discrete wavelet analysis and synthesis on the position-scale half-space.

Conventions
-----------
* Signals live on a periodic grid of ``N`` points per axis over ``[x0, x0 + L)``
  with spacing ``dx = L / N``.
* ``ghat(k) = int dx exp(-i k.x) g(x)``; the analysis wavelet at scale ``a`` is
  ``a^-n g(x / a)`` (L1 normalization), so that

      W_g s(b, a) = (2 pi)^-n int dk conj(ghat(a k)) shat(k) exp(i k.b),

  computed per scale as ``ifft(conj(ghat(a k)) * fft(s))``.
* Scale integrals ``int da / a`` become sums over a geometric grid with weight
  ``ln q`` per scale.  Position integrals carry ``dx^n``.

With these choices ``M_h W_g = c_{g,h} Id`` holds on every grid mode whose
scaled profile is covered by the scale grid, with no extra constant.
"""
from __future__ import annotations

import math
import os
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Callable, Iterator

import numpy as np
import scipy.fft as sfft

from .geometry import Lattice, RegionMask
from .wavelets import WaveletSpec, eval_spectrum, position_samples, reconstruction_wavelet

__all__ = [
    "GridError",
    "UnresolvableScalesError",
    "KernelSupportError",
    "GridSignal",
    "ScaleGrid",
    "HalfSpaceField",
    "CONVENTION",
    "set_threads",
    "get_threads",
    "forward",
    "synthesis",
    "restrict",
    "field_inner",
    "field_norm",
    "halfspace_convolve",
    "reproducing_kernel",
    "cross_kernel_apply",
    "toeplitz_apply",
    "commutator_residual",
]

CONVENTION = {
    "fourier": "ghat(k) = int exp(-i k.x) g(x) dx",
    "transform": "W(b,a) = (2 pi)^-n int conj(ghat(a k)) shat(k) exp(i k.b) dk",
    "dilation": "a^-n g(x/a)",
    "scale_measure": "da/a, weight ln q per geometric scale",
    "position_measure": "dx^n",
}


class GridError(ValueError):
    """Invalid signal grid."""


class UnresolvableScalesError(ValueError):
    """Scale grid outside the range the signal grid can resolve."""


class KernelSupportError(ValueError):
    """A requested kernel value lies outside the tabulated support."""


_threads = None


def set_threads(n: int | None) -> None:
    """Worker count for FFTs; ``None`` falls back to ``CUSPSCOPE_THREADS`` or 1."""
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def get_threads() -> int:
    if _threads is not None:
        return _threads
    env = os.environ.get("CUSPSCOPE_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _fftn(x):
    return sfft.fftn(x, workers=get_threads())


def _ifftn(x):
    return sfft.ifftn(x, workers=get_threads())


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Samples of a function on a periodic grid over ``[origin, origin + length)^n``."""

    samples: np.ndarray
    length: float = 1.0
    origin: Any = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples)
        if not np.issubdtype(s.dtype, np.number):
            raise GridError("samples must be numeric")
        if s.dtype.kind not in "fc":
            s = s.astype(float)
        if s.ndim not in (1, 2):
            raise GridError("signals must be 1-D or 2-D")
        n = s.shape[0]
        if any(m != n for m in s.shape):
            raise GridError("2-D signals must be square")
        if n < 2 or n & (n - 1):
            raise GridError(f"grid size {n} is not a power of two")
        if not self.length > 0:
            raise GridError("domain length must be positive")
        origin = np.broadcast_to(np.asarray(self.origin, dtype=float), (s.ndim,))
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "origin", tuple(float(o) for o in origin))

    @property
    def dimension(self) -> int:
        return self.samples.ndim

    @property
    def n_points(self) -> int:
        return self.samples.shape[0]

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    def axis(self, i: int = 0) -> np.ndarray:
        return self.origin[i] + self.spacing * np.arange(self.n_points)

    def coords(self) -> list[np.ndarray]:
        """Coordinate arrays broadcastable against the samples."""
        if self.dimension == 1:
            return [self.axis(0)]
        return [self.axis(0)[:, None], self.axis(1)[None, :]]

    def wavenumbers(self) -> list[np.ndarray]:
        return _wavenumbers(self.n_points, self.length, self.dimension)

    def with_samples(self, samples) -> "GridSignal":
        return GridSignal(samples, self.length, self.origin)

    def shifted(self, steps) -> "GridSignal":
        """Periodic shift by whole grid steps: ``out(x) = s(x - steps dx)``."""
        steps = tuple(np.broadcast_to(np.asarray(steps, dtype=int), (self.dimension,)))
        return self.with_samples(np.roll(self.samples, steps, axis=tuple(range(self.dimension))))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.spacing ** self.dimension))

    def inner(self, other: "GridSignal") -> complex:
        return complex(np.vdot(self.samples, other.samples) * self.spacing ** self.dimension)


def _wavenumbers(n_points: int, length: float, dimension: int) -> list[np.ndarray]:
    k = 2 * np.pi * np.fft.fftfreq(n_points, d=length / n_points)
    if dimension == 1:
        return [k]
    return [k[:, None], k[None, :]]


@dataclass(frozen=True)
class ScaleGrid:
    """Geometric scale grid ``a_j = a_min q^j``, ``j = 0 .. count-1``."""

    a_min: float
    a_max: float
    count: int

    def __post_init__(self):
        if not (0 < self.a_min < self.a_max):
            raise ValueError("need 0 < a_min < a_max")
        if self.count < 2:
            raise ValueError("a scale grid needs at least two scales")

    @property
    def scales(self) -> np.ndarray:
        return np.exp(np.linspace(math.log(self.a_min), math.log(self.a_max), self.count))

    @property
    def log_step(self) -> float:
        """``ln q``: the quadrature weight of each scale for ``da / a``."""
        return math.log(self.a_max / self.a_min) / (self.count - 1)

    @property
    def ratio(self) -> float:
        return math.exp(self.log_step)

    def __len__(self) -> int:
        return self.count

    @classmethod
    def geometric(cls, a_min: float, ratio: float, count: int) -> "ScaleGrid":
        return cls(a_min, a_min * ratio ** (count - 1), count)

    @classmethod
    def from_log_step(cls, center: float, log_step: float, half_count: int) -> "ScaleGrid":
        """Symmetric grid ``center * exp(m log_step)``, ``|m| <= half_count``."""
        return cls(
            center * math.exp(-half_count * log_step),
            center * math.exp(half_count * log_step),
            2 * half_count + 1,
        )

    @classmethod
    def full_band(
        cls, n_points: int, length: float, dimension: int = 1, count: int = 64, margin: float = 5.0
    ) -> "ScaleGrid":
        """Scales covering every nonzero grid mode with ``margin`` in ``ln(a |k|)``.

        The grid reaches ``exp(-margin) / k_max`` and ``exp(margin) / k_min``
        so the discrete Calderon sum is complete on all grid modes.  Such grids
        deliberately violate the resolvability guard.
        """
        dx = length / n_points
        k_min = 2 * np.pi / length
        k_max = np.pi / dx * math.sqrt(dimension)
        return cls(math.exp(-margin) / k_max, math.exp(margin) / k_min, count)

    @classmethod
    def resolvable(cls, n_points: int, length: float, count: int = 32,
                   min_steps: float = 2.0, max_fraction: float = 0.25) -> "ScaleGrid":
        dx = length / n_points
        return cls(min_steps * dx, max_fraction * length, count)

    def index_of(self, a: float) -> int:
        return int(np.argmin(np.abs(np.log(self.scales) - math.log(a))))

    def to_dict(self) -> dict:
        return {"a_min": self.a_min, "a_max": self.a_max, "count": self.count,
                "spacing": "geometric", "log_step": self.log_step}


def check_resolvable(scales: ScaleGrid, n_points: int, length: float,
                     min_steps: float = 2.0, max_fraction: float = 0.25) -> None:
    dx = length / n_points
    tol = 1e-12
    if scales.a_min < min_steps * dx * (1 - tol) or scales.a_max > max_fraction * length * (1 + tol):
        raise UnresolvableScalesError(
            f"scales [{scales.a_min:.4g}, {scales.a_max:.4g}] outside resolvable range "
            f"[{min_steps * dx:.4g}, {max_fraction * length:.4g}]"
        )


class HalfSpaceField:
    """Complex values on (scale grid) x (position grid), indexed ``[j, x(, y)]``.

    Values are either stored or produced lazily, one scale slice at a time,
    from a slice function; a small cache keeps recently used slices.
    """

    def __init__(
        self,
        scales: ScaleGrid,
        n_points: int,
        length: float,
        dimension: int = 1,
        origin=0.0,
        values: np.ndarray | None = None,
        slice_fn: Callable[[int], np.ndarray] | None = None,
        wavelet: WaveletSpec | None = None,
        kind: str = "transform",
        meta: dict | None = None,
        noise_floor: float | None = None,
        cache_slices: int = 8,
    ):
        self.scales = scales
        self.n_points = int(n_points)
        self.length = float(length)
        self.dimension = int(dimension)
        self.origin = tuple(np.broadcast_to(np.asarray(origin, dtype=float), (self.dimension,)).tolist())
        self.wavelet = wavelet
        self.kind = kind
        self.meta = dict(meta or {})
        if (values is None) == (slice_fn is None):
            raise ValueError("give exactly one of values or slice_fn")
        if values is not None:
            values = np.asarray(values, dtype=complex)
            if values.shape != self.shape:
                raise ValueError(f"values shape {values.shape} != {self.shape}")
        self._values = values
        self._slice_fn = slice_fn
        self._cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._cache_slices = cache_slices
        self._noise_floor = noise_floor
        self._lattice = None

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.scales.count,) + (self.n_points,) * self.dimension

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def lazy(self) -> bool:
        return self._values is None

    def slice(self, j: int) -> np.ndarray:
        if self._values is not None:
            return self._values[j]
        if j in self._cache:
            self._cache.move_to_end(j)
            return self._cache[j]
        out = self._slice_fn(j)
        out.setflags(write=False)
        self._cache[j] = out
        if len(self._cache) > self._cache_slices:
            self._cache.popitem(last=False)
        return out

    def iter_slices(self) -> Iterator[tuple[int, float, np.ndarray]]:
        for j, a in enumerate(self.scales.scales):
            yield j, a, self.slice(j)

    @property
    def values(self) -> np.ndarray:
        """All values (materialized on first access for lazy fields)."""
        if self._values is None:
            self._values = np.stack([self._slice_fn(j) for j in range(self.scales.count)])
            self._cache.clear()
        return self._values

    def materialize(self) -> "HalfSpaceField":
        self.values
        return self

    def axis(self, i: int = 0) -> np.ndarray:
        return self.origin[i] + self.spacing * np.arange(self.n_points)

    def lattice(self) -> Lattice:
        """Sample lattice in absolute coordinates (cached, so rasters can be reused)."""
        if self._lattice is None:
            self._lattice = Lattice([self.axis(i) for i in range(self.dimension)], self.scales.scales)
        return self._lattice

    @property
    def noise_floor(self) -> float:
        """Magnitude below which values are dominated by floating-point roundoff."""
        if self._noise_floor is None:
            peak = max(float(np.max(np.abs(s))) for _, _, s in self.iter_slices())
            self._noise_floor = peak * np.finfo(float).eps * math.log2(self.n_points ** self.dimension)
        return self._noise_floor

    def abs_max_per_scale(self, region: RegionMask | np.ndarray | None = None) -> np.ndarray:
        out = np.full(self.scales.count, np.nan)
        lat = self.lattice()
        for j, _, s in self.iter_slices():
            m = _slice_mask(region, lat, j)
            vals = np.abs(s) if m is None else np.abs(s[m])
            if vals.size:
                out[j] = vals.max()
        return out

    def with_values(self, values: np.ndarray, kind: str | None = None, **meta) -> "HalfSpaceField":
        return HalfSpaceField(
            self.scales, self.n_points, self.length, self.dimension, self.origin,
            values=values, wavelet=self.wavelet, kind=kind or self.kind,
            meta={**self.meta, **meta},
        )

    def metadata(self) -> dict:
        return {
            "dims": list(self.shape),
            "grid": {"n_points": self.n_points, "length": self.length,
                     "origin": list(self.origin), "dimension": self.dimension},
            "scales": self.scales.to_dict(),
            "wavelet": None if self.wavelet is None else self.wavelet.to_dict(),
            "convention": CONVENTION,
            "kind": self.kind,
        }


def _slice_mask(region, lattice: Lattice, j: int):
    if region is None:
        return None
    if isinstance(region, RegionMask):
        return region.slice_mask(lattice, j)
    return np.asarray(region[j], dtype=bool)


# ---------------------------------------------------------------------------
# analysis / synthesis


def _spectrum_on_grid(w: WaveletSpec, ks: list[np.ndarray], a: float) -> np.ndarray:
    if w.dimension != len(ks):
        raise ValueError(f"wavelet dimension {w.dimension} does not match the grid ({len(ks)})")
    if len(ks) == 1:
        return eval_spectrum(w, a * ks[0])
    kx, ky = np.broadcast_arrays(a * ks[0], a * ks[1])
    return eval_spectrum(w, (kx, ky))


def _spectrum_peak(g: WaveletSpec) -> float:
    """``max |ghat|`` over radii ``1e-4 .. 1e4`` and the default directions."""
    r = np.geomspace(1e-4, 1e4, 2001)
    if g.dimension == 1:
        k = np.concatenate([-r, r])
    else:
        th = np.arange(16) * (2 * np.pi / 16)
        k = (np.outer(np.cos(th), r), np.outer(np.sin(th), r))
    return float(np.max(np.abs(eval_spectrum(g, k))))


def forward(
    g: WaveletSpec,
    s: GridSignal,
    scales: ScaleGrid,
    guard: bool = True,
    lazy: bool = False,
    min_steps: float = 2.0,
    max_fraction: float = 0.25,
) -> HalfSpaceField:
    """Wavelet transform ``W_g s`` on ``scales`` x (signal grid).

    With ``guard`` the scale range must satisfy ``a_min >= min_steps * dx`` and
    ``a_max <= max_fraction * L``.  ``lazy`` defers each scale slice until it
    is requested, which keeps large 2-D transforms within memory.
    """
    if guard:
        check_resolvable(scales, s.n_points, s.length, min_steps, max_fraction)
    ks = s.wavenumbers()
    shat = _fftn(s.samples)
    a_vals = scales.scales

    def slice_fn(j):
        return _ifftn(np.conj(_spectrum_on_grid(g, ks, a_vals[j])) * shat)

    # roundoff scale of the inverse FFTs: eps * log2(size) * sum|shat ghat| / size
    size = s.n_points ** s.dimension
    floor = float(np.finfo(float).eps * math.log2(size) * np.sum(np.abs(shat)) / size * _spectrum_peak(g))
    meta = {"source_norm": s.norm()}
    if lazy:
        return HalfSpaceField(scales, s.n_points, s.length, s.dimension, s.origin,
                              slice_fn=slice_fn, wavelet=g, meta=meta, noise_floor=floor)
    values = np.empty((scales.count,) + s.samples.shape, dtype=complex)
    for j in range(scales.count):
        values[j] = slice_fn(j)
    return HalfSpaceField(scales, s.n_points, s.length, s.dimension, s.origin,
                          values=values, wavelet=g, meta=meta, noise_floor=floor)


def synthesis(h: WaveletSpec, r: HalfSpaceField, region=None) -> GridSignal:
    """``M_h r = int db da/a r(b, a) a^-n h((x - b)/a)``, optionally restricted
    to a region (the Töplitz restriction ``M_h chi r``)."""
    ks = _wavenumbers(r.n_points, r.length, r.dimension)
    acc = np.zeros((r.n_points,) * r.dimension, dtype=complex)
    lat = r.lattice() if region is not None else None
    for j, a, sl in r.iter_slices():
        m = _slice_mask(region, lat, j)
        if m is not None:
            if not m.any():
                continue
            sl = np.where(m, sl, 0.0)
        acc += _spectrum_on_grid(h, ks, a) * _fftn(sl)
    out = _ifftn(acc) * r.scales.log_step
    return GridSignal(out, r.length, r.origin)


def restrict(field: HalfSpaceField, region) -> HalfSpaceField:
    """``chi_region * field`` (materialized)."""
    lat = field.lattice()
    vals = np.stack([np.where(_slice_mask(region, lat, j), s, 0.0) for j, _, s in field.iter_slices()])
    return field.with_values(vals, kind="restricted")


def field_inner(f1: HalfSpaceField, f2: HalfSpaceField) -> complex:
    """``<f1, f2>`` for the measure ``db da / a`` (conjugate-linear in ``f1``)."""
    total = 0j
    for j in range(f1.scales.count):
        total += np.vdot(f1.slice(j), f2.slice(j))
    return complex(total * f1.spacing ** f1.dimension * f1.scales.log_step)


def field_norm(f: HalfSpaceField) -> float:
    total = 0.0
    for _, _, s in f.iter_slices():
        total += float(np.sum(np.abs(s) ** 2))
    return math.sqrt(total * f.spacing ** f.dimension * f.scales.log_step)


# ---------------------------------------------------------------------------
# half-space convolution and kernels


def reproducing_kernel(
    g: WaveletSpec,
    h: WaveletSpec,
    n_points: int | None = None,
    length: float | None = None,
    scales: ScaleGrid | None = None,
) -> HalfSpaceField:
    """``Pi_{g,h} = W_g h`` tabulated on a wide centered grid.

    Positions cover ``[-length/2, length/2)`` (in units of the inner scale);
    the default scale table spans ``exp(+-6)`` with ``ln q = 0.1``.
    """
    n = g.dimension
    if n_points is None:
        n_points = 8192 if n == 1 else 512
    if length is None:
        length = 256.0 if n == 1 else 64.0
    if scales is None:
        scales = ScaleGrid.from_log_step(1.0, 0.1, 60)
    _, hs = position_samples(h, n_points, length)
    sig = GridSignal(hs, length, -length / 2)
    field = forward(g, sig, scales, guard=False)
    field.kind = "kernel"
    field.meta["pair"] = (g, h)
    return field


def _gather_weights(coord: np.ndarray, size: int):
    """Linear interpolation indices/weights; points outside ``[0, size-1]`` get weight 0."""
    lo = np.floor(coord).astype(np.int64)
    w = coord - lo
    valid = (lo >= 0) & (lo <= size - 1)
    valid_hi = (lo + 1 >= 0) & (lo + 1 <= size - 1)
    w_lo = np.where(valid, 1.0 - w, 0.0)
    w_hi = np.where(valid_hi, w, 0.0)
    return np.clip(lo, 0, size - 1), np.clip(lo + 1, 0, size - 1), w_lo, w_hi


def _gather(table: np.ndarray, weights) -> np.ndarray:
    """Multilinear interpolation of a 1-D or 2-D table at precomputed weights."""
    if table.ndim == 1:
        i0, i1, w0, w1 = weights[0]
        return table[i0] * w0 + table[i1] * w1
    (x0, x1, wx0, wx1), (y0, y1, wy0, wy1) = weights
    return (
        table[x0, y0] * (wx0 * wy0)
        + table[x0, y1] * (wx0 * wy1)
        + table[x1, y0] * (wx1 * wy0)
        + table[x1, y1] * (wx1 * wy1)
    )


def _convolve_tabulated(kernel: HalfSpaceField, r: HalfSpaceField, strict: bool) -> np.ndarray:
    n = r.dimension
    N = r.n_points
    dx = r.spacing
    kv = kernel.values
    ln_c = np.log(kernel.scales.scales)
    t0, dt = ln_c[0], kernel.scales.log_step
    du = kernel.spacing
    u0 = np.asarray(kernel.origin)
    offsets = (np.arange(N) + N // 2) % N - N // 2
    out_hat = np.zeros(r.shape, dtype=complex)
    a_out = r.scales.scales
    for j, aj, sl in r.iter_slices():
        rhat = _fftn(sl)
        pos = offsets * dx / aj
        weights = []
        for ax in range(n):
            coord = (pos - u0[ax]) / du
            if n == 2:
                coord = coord[:, None] if ax == 0 else coord[None, :]
                coord = np.broadcast_to(coord, (N, N))
            weights.append(_gather_weights(coord, kernel.n_points))
        scale = (dx / aj) ** n
        for i, ai in enumerate(a_out):
            tc = (math.log(ai / aj) - t0) / dt
            if tc < -1e-9 or tc > kernel.scales.count - 1 + 1e-9:
                if strict:
                    raise KernelSupportError(
                        f"scale ratio {ai / aj:.4g} outside the tabulated range "
                        f"[{kernel.scales.a_min:.4g}, {kernel.scales.a_max:.4g}]"
                    )
                continue
            lo = int(min(max(math.floor(tc + 1e-9), 0), kernel.scales.count - 1))
            w = tc - lo
            K = _gather(kv[lo], weights)
            if w > 1e-9 and lo + 1 < kernel.scales.count:
                K = K * (1 - w) + _gather(kv[lo + 1], weights) * w
            out_hat[i] += _fftn(K * scale) * rhat
    out = np.stack([_ifftn(x) for x in out_hat]) * r.scales.log_step
    return out


def halfspace_convolve(
    kernel: HalfSpaceField, r: HalfSpaceField, method: str = "auto", strict: bool = False
) -> HalfSpaceField:
    """Half-space convolution ``(Pi * r)(b, a) = int db' da'/a' a'^-n Pi((b-b')/a', a/a') r(b', a')``.

    ``method="spectral"`` uses the kernel's wavelet pair (kernels made by
    :func:`reproducing_kernel` carry it): the convolution then equals
    ``W_g M_h r``.  ``method="tabulated"`` interpolates the stored kernel
    table (linear in ``ln(a/a')`` and in position) and applies it as a sum of
    periodic convolutions; kernel values outside the table count as zero, or
    raise :class:`KernelSupportError` with ``strict``.
    """
    if kernel.dimension != r.dimension:
        raise ValueError("kernel and field dimensions differ")
    if method == "auto":
        method = "spectral" if "pair" in kernel.meta else "tabulated"
    if method == "spectral":
        if "pair" not in kernel.meta:
            raise ValueError("kernel has no analytic wavelet pair; use method='tabulated'")
        g, h = kernel.meta["pair"]
        out = forward(g, synthesis(h, r), r.scales, guard=False)
        values = out.values
    elif method == "tabulated":
        values = _convolve_tabulated(kernel, r, strict)
    else:
        raise ValueError(f"unknown method {method!r}")
    return HalfSpaceField(
        r.scales, r.n_points, r.length, r.dimension, r.origin, values=values,
        wavelet=kernel.meta.get("pair", (None,))[0], kind="convolution",
        meta={"method": method},
    )


def cross_kernel_apply(
    g: WaveletSpec,
    g2: WaveletSpec,
    field: HalfSpaceField,
    method: str = "tabulated",
    kernel_points: int | None = None,
    kernel_length: float | None = None,
    ratio_range: float = 6.0,
) -> HalfSpaceField:
    """Transport ``W_g s`` to ``W_{g2} s`` through the cross kernel
    ``Pi_{g -> g2} = W_{g2} r`` with ``r`` the reconstruction wavelet of ``g``.

    The tabulated route builds the kernel on a scale table whose log step
    matches the field's, spanning ratios ``exp(+-ratio_range)``.
    """
    r = reconstruction_wavelet(g)
    if method == "spectral":
        out = forward(g2, synthesis(r, field), field.scales, guard=False)
        out.kind = "cross"
        return out
    step = field.scales.log_step
    half = max(1, int(math.ceil(ratio_range / step)))
    table = ScaleGrid.from_log_step(1.0, step, half)
    kernel = reproducing_kernel(g2, r, kernel_points, kernel_length, table)
    out = halfspace_convolve(kernel, field, method="tabulated")
    out.wavelet = g2
    out.kind = "cross"
    return out


def toeplitz_apply(
    g: WaveletSpec,
    h: WaveletSpec,
    region,
    s: GridSignal,
    scales: ScaleGrid,
    guard: bool = False,
) -> GridSignal:
    """Töplitz operator ``T_region s = M_h chi_region W_g s`` (streamed per scale).

    ``region`` is a :class:`RegionMask` (evaluated on the field lattice in
    absolute coordinates) or a boolean array of the field's shape.
    """
    field = forward(g, s, scales, guard=guard, lazy=True)
    field._cache_slices = 1
    return synthesis(h, field, region)


def commutator_residual(
    sigma,
    omega,
    g: WaveletSpec,
    h: WaveletSpec,
    s: GridSignal,
    scales: ScaleGrid,
    guard: bool = False,
) -> tuple[GridSignal, HalfSpaceField]:
    """``(T_sigma T_omega - T_omega T_sigma) s`` and its transform ``W_g`` on ``scales``."""
    t_so = toeplitz_apply(g, h, sigma, toeplitz_apply(g, h, omega, s, scales, guard), scales, guard)
    t_os = toeplitz_apply(g, h, omega, toeplitz_apply(g, h, sigma, s, scales, guard), scales, guard)
    res = s.with_samples(t_so.samples - t_os.samples)
    return res, forward(g, res, scales, guard=guard)
