"""Non-Euclidean geometry of the position-scale half-space.

Points are pairs ``(b, a)`` with ``b`` in R^n and ``a > 0``.  The group law is
``(b, a)(b', a') = (a b' + b, a a')`` and the multiplicative "distance" is

    dist((b, a), (b', a')) = a/a' + a'/a + |b - b'| (1/a' + 1/a),

with ``Delta(p) = dist(p, (0, 1))``.  ``dist`` never drops below 2, so the
balls ``U(p, r)`` are empty for ``r < 2``.

Array conventions: positions are arrays with a trailing axis of length ``n``
(``n`` in {1, 2}); scales are arrays broadcastable against the leading axes.
Regions are :class:`RegionMask` objects, either analytic predicates or
rasters over a :class:`Lattice` of (position, scale) samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "HalfSpacePoint",
    "identity",
    "compose",
    "inverse",
    "delta",
    "dist",
    "delta_arr",
    "dist_arr",
    "compose_arr",
    "inverse_arr",
    "Lattice",
    "RegionMask",
    "Empty",
    "Full",
    "ParabolicStrip",
    "Raster",
    "Complement",
    "Intersection",
    "Union",
    "GammaNeighborhood",
    "GammaTube",
    "InfluenceRegion",
    "SeparationReport",
    "gamma_neighborhood",
    "well_separated",
    "sandwich_region",
    "influence_region",
    "region_from_dict",
]

# relative slack on ball membership; keeps exact inclusions exact in floating point
BALL_RTOL = 1e-12
_PAIR_BUDGET = 2_000_000


@dataclass(frozen=True)
class HalfSpacePoint:
    b: np.ndarray
    a: float

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if b.ndim != 1:
            raise ValueError("position must be a vector")
        object.__setattr__(self, "b", b)
        if not self.a > 0:
            raise ValueError("scale must be positive")

    @property
    def dimension(self) -> int:
        return self.b.size


def identity(dimension: int = 1) -> HalfSpacePoint:
    return HalfSpacePoint(np.zeros(dimension), 1.0)


def compose(p: HalfSpacePoint, q: HalfSpacePoint) -> HalfSpacePoint:
    return HalfSpacePoint(p.a * q.b + p.b, p.a * q.a)


def inverse(p: HalfSpacePoint) -> HalfSpacePoint:
    return HalfSpacePoint(-p.b / p.a, 1.0 / p.a)


def delta(p: HalfSpacePoint) -> float:
    return float(delta_arr(p.b, p.a))


def dist(p: HalfSpacePoint, q: HalfSpacePoint) -> float:
    return float(dist_arr(p.b, p.a, q.b, q.a))


def _norm(b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.shape[-1] == 1:
        return np.abs(b[..., 0])
    return np.sqrt(np.sum(b * b, axis=-1))


def delta_arr(b, a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a + 1.0 / a + _norm(b) * (1.0 + 1.0 / a)


def dist_arr(b1, a1, b2, a2) -> np.ndarray:
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    d = _norm(np.asarray(b1, dtype=float) - np.asarray(b2, dtype=float))
    return a1 / a2 + a2 / a1 + d / a2 + d / a1


def compose_arr(b1, a1, b2, a2):
    a1 = np.asarray(a1, dtype=float)
    return a1[..., None] * np.asarray(b2) + np.asarray(b1), a1 * np.asarray(a2)


def inverse_arr(b, a):
    a = np.asarray(a, dtype=float)
    return -np.asarray(b) / a[..., None], 1.0 / a


# ---------------------------------------------------------------------------
# lattices and masks


class Lattice:
    """Product lattice of position axes and a scale vector.

    ``b_axes`` holds one 1-D coordinate array per spatial axis.  Raster
    arrays are indexed ``[scale, x(, y)]``.
    """

    def __init__(self, b_axes: Sequence[np.ndarray], scales: np.ndarray):
        self.b_axes = tuple(np.asarray(ax, dtype=float) for ax in b_axes)
        self.scales = np.asarray(scales, dtype=float)
        if len(self.b_axes) not in (1, 2):
            raise ValueError("lattice dimension must be 1 or 2")
        if np.any(self.scales <= 0):
            raise ValueError("scales must be positive")

    @property
    def dimension(self) -> int:
        return len(self.b_axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.scales.size,) + tuple(ax.size for ax in self.b_axes)

    def b_grid(self) -> np.ndarray:
        """Positions of one scale slice, shape ``(N1[, N2], n)``."""
        mesh = np.meshgrid(*self.b_axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def points(self, mask: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Flattened ``(b, a)`` samples, optionally restricted to a raster."""
        bg = self.b_grid()
        B = np.broadcast_to(bg, (self.scales.size,) + bg.shape)
        A = np.broadcast_to(
            self.scales.reshape((-1,) + (1,) * self.dimension), self.shape
        )
        if mask is None:
            return B.reshape(-1, self.dimension), A.reshape(-1)
        mask = np.asarray(mask, dtype=bool)
        return B[mask], A[mask]

    def shifted(self, origin) -> "Lattice":
        origin = np.broadcast_to(np.asarray(origin, dtype=float), (self.dimension,))
        return Lattice([ax - o for ax, o in zip(self.b_axes, origin)], self.scales)

    def nearest_index(self, b, a):
        """Nearest lattice indices, or -1 where ``(b, a)`` falls outside."""
        b = np.asarray(b, dtype=float)
        a = np.asarray(a, dtype=float)
        la = np.log(self.scales)
        idx = []
        inside = np.ones(a.shape, dtype=bool)
        for ax, coords in [(la, np.log(a))] + [
            (self.b_axes[i], b[..., i]) for i in range(self.dimension)
        ]:
            if ax.size == 1:
                i = np.zeros(coords.shape, dtype=int)
                h = 1.0
            else:
                h = np.min(np.diff(ax))
                i = np.clip(np.searchsorted(ax, coords), 1, ax.size - 1)
                i = np.where(np.abs(coords - ax[i - 1]) <= np.abs(coords - ax[i]), i - 1, i)
            inside &= np.abs(coords - ax[i]) <= 0.5 * h + 1e-12 * max(1.0, abs(h))
            idx.append(i)
        return tuple(idx), inside


class RegionMask:
    """A region of the half-space.

    Subclasses implement :meth:`contains`.  ``slice_mask`` and ``raster``
    evaluate membership over a lattice.
    """

    family = "abstract"

    def contains(self, b, a) -> np.ndarray:
        raise NotImplementedError

    def slice_mask(self, lattice: Lattice, j: int) -> np.ndarray:
        bg = lattice.b_grid()
        a = np.full(bg.shape[:-1], lattice.scales[j])
        return np.asarray(self.contains(bg, a), dtype=bool)

    def raster(self, lattice: Lattice) -> "Raster":
        arr = np.stack([self.slice_mask(lattice, j) for j in range(lattice.scales.size)])
        return Raster(lattice, arr)

    def complement(self) -> "RegionMask":
        return Complement(self)

    def __and__(self, other: "RegionMask") -> "RegionMask":
        return Intersection([self, other])

    def __or__(self, other: "RegionMask") -> "RegionMask":
        return Union([self, other])

    def __invert__(self) -> "RegionMask":
        return self.complement()

    def to_dict(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} is not serializable")


class Empty(RegionMask):
    family = "empty"

    def contains(self, b, a):
        return np.zeros(np.shape(a), dtype=bool)

    def to_dict(self):
        return {"family": "empty", "params": {}}


class Full(RegionMask):
    family = "full"

    def contains(self, b, a):
        return np.ones(np.shape(a), dtype=bool)

    def to_dict(self):
        return {"family": "full", "params": {}}


class ParabolicStrip(RegionMask):
    """``{a > |b - c|^p}`` (side ``above``) or ``{a < |b - c|^p}`` (``below``),
    intersected with ``{a < a_max}``."""

    family = "parabolic-strip"

    def __init__(self, exponent: float, side: str = "above", a_max: float = math.inf, center=0.0):
        if side not in ("above", "below"):
            raise ValueError("side must be 'above' or 'below'")
        self.exponent = float(exponent)
        self.side = side
        self.a_max = float(a_max)
        self.center = np.atleast_1d(np.asarray(center, dtype=float))

    def contains(self, b, a):
        a = np.asarray(a, dtype=float)
        r = _norm(np.asarray(b, dtype=float) - self.center) ** self.exponent
        inside = a > r if self.side == "above" else a < r
        return inside & (a < self.a_max)

    def to_dict(self):
        return {
            "family": self.family,
            "params": {
                "exponent": self.exponent,
                "side": self.side,
                "a_max": None if math.isinf(self.a_max) else self.a_max,
                "center": self.center.tolist(),
            },
        }


class Raster(RegionMask):
    """Boolean samples over a lattice; off-lattice membership is nearest-sample."""

    family = "raster"

    def __init__(self, lattice: Lattice, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != lattice.shape:
            raise ValueError(f"raster shape {mask.shape} does not match lattice {lattice.shape}")
        self.lattice = lattice
        self.mask = mask

    def contains(self, b, a):
        idx, inside = self.lattice.nearest_index(b, a)
        return self.mask[idx] & inside

    def slice_mask(self, lattice, j):
        if lattice is self.lattice:
            return self.mask[j]
        return super().slice_mask(lattice, j)

    def raster(self, lattice):
        if lattice is self.lattice:
            return self
        return super().raster(lattice)

    def points(self):
        return self.lattice.points(self.mask)

    def complement(self):
        return Raster(self.lattice, ~self.mask)

    @property
    def empty(self) -> bool:
        return not self.mask.any()

    def to_dict(self):
        return {
            "family": "raster",
            "params": {
                "b_axes": [ax.tolist() for ax in self.lattice.b_axes],
                "scales": self.lattice.scales.tolist(),
                "mask": self.mask.astype(int).tolist(),
            },
        }


class Complement(RegionMask):
    family = "complement"

    def __init__(self, inner: RegionMask):
        self.inner = inner

    def contains(self, b, a):
        return ~np.asarray(self.inner.contains(b, a), dtype=bool)

    def slice_mask(self, lattice, j):
        return ~self.inner.slice_mask(lattice, j)

    def complement(self):
        return self.inner

    def to_dict(self):
        d = self.inner.to_dict()
        return {**d, "ops": list(d.get("ops", [])) + [{"op": "complement"}]}


class Intersection(RegionMask):
    family = "intersection"

    def __init__(self, parts: Iterable[RegionMask]):
        self.parts = list(parts)

    def contains(self, b, a):
        out = np.ones(np.shape(a), dtype=bool)
        for p in self.parts:
            out &= p.contains(b, a)
        return out

    def slice_mask(self, lattice, j):
        out = self.parts[0].slice_mask(lattice, j).copy()
        for p in self.parts[1:]:
            out &= p.slice_mask(lattice, j)
        return out

    def to_dict(self):
        first, *rest = self.parts
        d = first.to_dict()
        ops = list(d.get("ops", [])) + [{"op": "intersect", "with": p.to_dict()} for p in rest]
        return {**d, "ops": ops}


class Union(RegionMask):
    family = "union"

    def __init__(self, parts: Iterable[RegionMask]):
        self.parts = list(parts)

    def contains(self, b, a):
        out = np.zeros(np.shape(a), dtype=bool)
        for p in self.parts:
            out |= p.contains(b, a)
        return out

    def slice_mask(self, lattice, j):
        out = self.parts[0].slice_mask(lattice, j).copy()
        for p in self.parts[1:]:
            out |= p.slice_mask(lattice, j)
        return out

    def to_dict(self):
        first, *rest = self.parts
        d = first.to_dict()
        ops = list(d.get("ops", [])) + [{"op": "union", "with": p.to_dict()} for p in rest]
        return {**d, "ops": ops}


def _chunks(n_rows: int, n_cols: int):
    step = max(1, _PAIR_BUDGET // max(1, n_cols))
    for start in range(0, n_rows, step):
        yield slice(start, min(n_rows, start + step))


class GammaNeighborhood(RegionMask):
    """``Gamma_eps`` of a sampled set: union of balls ``U(q, Delta(q)^eps)``.

    Membership is decided against the sample points only, an inner
    approximation of the continuum neighborhood.  ``include_base`` adds the
    samples themselves, which the balls miss whenever ``Delta(q)^eps < 2``.
    """

    family = "gamma-neighborhood"

    def __init__(self, b, a, eps: float, include_base: bool = False):
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.a = np.asarray(a, dtype=float).reshape(-1)
        b = np.asarray(b, dtype=float)
        width = b.shape[-1] if b.ndim > 1 else (-1 if self.a.size else 1)
        self.b = b.reshape(self.a.size, width)
        self.eps = float(eps)
        self.include_base = include_base
        self.radius = delta_arr(self.b, self.a) ** self.eps * (1 + BALL_RTOL)

    def contains(self, b, a):
        b = np.asarray(b, dtype=float)
        a = np.asarray(a, dtype=float)
        shape = a.shape
        bf = b.reshape(-1, b.shape[-1])
        af = a.reshape(-1)
        out = np.zeros(af.size, dtype=bool)
        if self.a.size == 0:
            return out.reshape(shape)
        for sl in _chunks(af.size, self.a.size):
            d = dist_arr(bf[sl, None, :], af[sl, None], self.b[None], self.a[None])
            hit = np.any(d <= self.radius[None], axis=1)
            if self.include_base:
                hit |= np.any(d <= 2.0 * (1 + BALL_RTOL), axis=1)
            out[sl] = hit
        return out.reshape(shape)


class GammaTube(GammaNeighborhood):
    """``Gamma_eps`` of a sampled parabolic path, plus the path itself.

    ``slice_mask`` intersects each ball with a scale slice analytically (a
    Euclidean disc) so rasterizing over large position grids stays cheap.
    """

    family = "gamma-tube"

    def __init__(self, b, a, eps: float, include_path: bool = True):
        super().__init__(b, a, eps, include_base=include_path)

    def slice_mask(self, lattice, j):
        a = lattice.scales[j]
        ap = self.a
        rad = (self.radius - a / ap - ap / a) / (1.0 / ap + 1.0 / a)
        out = np.zeros(lattice.shape[1:], dtype=bool)
        sel = rad >= 0
        axes = lattice.b_axes
        steps = [ax[1] - ax[0] if ax.size > 1 else 1.0 for ax in axes]
        for bp, r in zip(self.b[sel], rad[sel]):
            _mark_disc(out, axes, steps, bp, r)
        if self.include_base:
            near = np.abs(np.log(ap / a)) <= 1e-12
            for bp in self.b[near]:
                _mark_disc(out, axes, steps, bp, 0.0, nearest=True)
        return out


def _mark_disc(out, axes, steps, center, radius, nearest=False):
    lo, hi = [], []
    for ax, h, c in zip(axes, steps, center):
        if nearest:
            i = int(np.argmin(np.abs(ax - c)))
            lo.append(i)
            hi.append(i + 1)
        else:
            lo.append(max(0, int(np.searchsorted(ax, c - radius - 1e-12 * abs(h)))))
            hi.append(min(ax.size, int(np.searchsorted(ax, c + radius + 1e-12 * abs(h), "right"))))
    if any(l >= h for l, h in zip(lo, hi)):
        return
    if nearest:
        out[tuple(slice(l, h) for l, h in zip(lo, hi))] = True
        return
    sub = np.meshgrid(*[ax[l:h] - c for ax, l, h, c in zip(axes, lo, hi, center)], indexing="ij")
    r2 = sum(s * s for s in sub)
    region = tuple(slice(l, h) for l, h in zip(lo, hi))
    out[region] |= r2 <= radius * radius * (1 + BALL_RTOL)


class InfluenceRegion(RegionMask):
    """Union of unit-opening cones ``{(beta, alpha): |beta - b| <= alpha}``
    over sampled positions ``b`` of a set in R^n.

    ``full`` marks a set covering the whole grid, whose region is the entire
    half-space.
    """

    family = "influence-region"

    def __init__(self, points: np.ndarray, full: bool = False):
        self.full = bool(full)
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.shape[0] == 0:
            raise ValueError("influence region of an empty set")
        self.points = points
        self._tree = cKDTree(points)

    def euclidean_distance(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if self.full:
            return np.zeros(b.shape[:-1])
        d, _ = self._tree.query(b.reshape(-1, b.shape[-1]))
        return d.reshape(b.shape[:-1])

    def contains(self, b, a):
        return self.euclidean_distance(b) <= np.asarray(a, dtype=float)

    def distance_from(self, b, a, scale_samples: np.ndarray | None = None) -> np.ndarray:
        """Sampled infimum of ``dist((b, a), region)``.

        For fixed ``a'`` the region slice is the ``a'``-dilation of the set,
        whose nearest point lies at Euclidean distance ``max(0, d(b) - a')``;
        the remaining one-dimensional infimum over ``a'`` is sampled.
        """
        b = np.asarray(b, dtype=float)
        a = np.asarray(a, dtype=float)
        d = self.euclidean_distance(b)
        if scale_samples is None:
            scale_samples = np.geomspace(1e-8, 1e8, 1601)
        ap = np.asarray(scale_samples, dtype=float)
        best = np.full(a.shape, np.inf)
        for chunk in np.array_split(ap, max(1, ap.size // 64)):
            c = chunk.reshape((1,) * a.ndim + (-1,))
            val = a[..., None] / c + c / a[..., None]
            val = val + np.maximum(0.0, d[..., None] - c) * (1.0 / a[..., None] + 1.0 / c)
            best = np.minimum(best, val.min(axis=-1))
        return best


def influence_region(indicator: np.ndarray, length: float, origin=0.0) -> InfluenceRegion:
    """Influence region of a set given as a boolean indicator on a signal grid."""
    indicator = np.asarray(indicator, dtype=bool)
    n = indicator.shape[0]
    dx = length / n
    origin = np.broadcast_to(np.asarray(origin, dtype=float), (indicator.ndim,))
    idx = np.argwhere(indicator)
    if idx.size == 0:
        raise ValueError("influence region of an empty set")
    return InfluenceRegion(origin[None, :] + idx * dx, full=bool(indicator.all()))


def gamma_neighborhood(
    omega: RegionMask, eps: float, lattice: Lattice | None = None, include_base: bool = False
) -> GammaNeighborhood:
    """``Gamma_eps(Omega)`` against the sampled points of ``Omega``."""
    if isinstance(omega, GammaNeighborhood) and lattice is None:
        raise ValueError("a lattice is needed to sample a neighborhood")
    if isinstance(omega, Raster) and lattice is None:
        b, a = omega.points()
    else:
        if lattice is None:
            raise ValueError("analytic regions need a lattice to be sampled")
        b, a = lattice.points(omega.raster(lattice).mask)
    return GammaNeighborhood(b, a, eps, include_base=include_base)


@dataclass
class SeparationReport:
    """Outcome of a well-separation check.

    ``ratio`` is the minimum over sampled ``p`` in Omega of
    ``dist(p, Sigma) / Delta(p)^eps``; separation holds iff it exceeds 1.
    """

    separated: bool
    vacuous: bool
    eps: float
    ratio: float
    margin: float
    point: tuple | None = None
    partner: tuple | None = None
    distance: float = math.inf
    threshold: float = math.nan
    n_omega: int = 0
    n_sigma: int = 0

    def to_dict(self):
        def pt(p):
            return None if p is None else {"b": np.asarray(p[0]).tolist(), "a": float(p[1])}

        return {
            "separated": self.separated,
            "vacuous": self.vacuous,
            "eps": self.eps,
            "ratio": self.ratio,
            "margin": self.margin,
            "witness": pt(self.point),
            "partner": pt(self.partner),
            "distance": self.distance,
            "threshold": self.threshold,
            "n_omega": self.n_omega,
            "n_sigma": self.n_sigma,
        }


def _sample(region: RegionMask, lattice: Lattice | None):
    if isinstance(region, Raster) and (lattice is None or lattice is region.lattice):
        return region.points()
    if lattice is None:
        raise ValueError("analytic regions need a lattice to be sampled")
    return lattice.points(region.raster(lattice).mask)


def well_separated(
    omega: RegionMask, sigma: RegionMask, eps: float, lattice: Lattice | None = None
) -> SeparationReport:
    """Check ``dist(p, Sigma) > Delta(p)^eps`` at every sampled ``p`` in Omega.

    Sigma's distance is its sampled infimum, except for regions that provide
    an analytic ``distance_from`` (influence regions).  Empty Omega or Sigma
    pass vacuously and are flagged.
    """
    ob, oa = _sample(omega, lattice)
    analytic = hasattr(sigma, "distance_from")
    if analytic:
        sb = sa = None
        n_sigma = -1
    else:
        sb, sa = _sample(sigma, lattice)
        n_sigma = sa.size
    if oa.size == 0 or n_sigma == 0:
        return SeparationReport(True, True, eps, math.inf, math.inf, n_omega=oa.size, n_sigma=max(n_sigma, 0))

    thr = delta_arr(ob, oa) ** eps
    best = np.empty(oa.size)
    partner = np.zeros(oa.size, dtype=int)
    if analytic:
        scale_samples = None if lattice is None else np.unique(
            np.concatenate([lattice.scales, np.geomspace(1e-8, 1e8, 1601)])
        )
        best[:] = sigma.distance_from(ob, oa, scale_samples)
    else:
        for sl in _chunks(oa.size, sa.size):
            d = dist_arr(ob[sl, None, :], oa[sl, None], sb[None], sa[None])
            partner[sl] = np.argmin(d, axis=1)
            best[sl] = d[np.arange(d.shape[0]), partner[sl]]
    ratio = best / thr
    i = int(np.argmin(ratio))
    return SeparationReport(
        separated=bool(ratio[i] > 1.0),
        vacuous=False,
        eps=eps,
        ratio=float(ratio[i]),
        margin=float(best[i] - thr[i]),
        point=(ob[i], float(oa[i])),
        partner=None if analytic else (sb[partner[i]], float(sa[partner[i]])),
        distance=float(best[i]),
        threshold=float(thr[i]),
        n_omega=int(oa.size),
        n_sigma=n_sigma,
    )


def sandwich_region(omega: Raster, eps: float) -> Raster:
    """``Xi = Gamma_{eps/4}(Omega)`` (with Omega added) on Omega's lattice.

    If ``Sigma^c`` is well separated from ``Omega`` at ``eps`` then Xi sits
    between them, separated from ``Sigma^c`` and with ``Omega`` separated from
    ``Xi^c``.
    """
    nb = gamma_neighborhood(omega, eps / 4.0, include_base=True)
    return nb.raster(omega.lattice)


# ---------------------------------------------------------------------------
# JSON schema: {"family": ..., "params": {...}, "ops": [...]}


def region_from_dict(d: Mapping[str, Any]) -> RegionMask:
    family = d["family"]
    p = dict(d.get("params", {}))
    if family == "empty":
        region: RegionMask = Empty()
    elif family == "full":
        region = Full()
    elif family == "parabolic-strip":
        a_max = p.get("a_max")
        region = ParabolicStrip(
            p["exponent"], p.get("side", "above"), math.inf if a_max is None else a_max,
            p.get("center", 0.0),
        )
    elif family == "raster":
        lat = Lattice([np.asarray(ax) for ax in p["b_axes"]], np.asarray(p["scales"]))
        region = Raster(lat, np.asarray(p["mask"], dtype=bool))
    elif family == "gamma-tube":
        from .microlocal import ParabolicPath

        path = ParabolicPath.from_dict(p["path"])
        lam, b, a = path.points()
        region = GammaTube(b - path.apex, a, p.get("eps", 0.25), p.get("include_path", True))
    else:
        raise ValueError(f"unknown region family {family!r}")
    for op in d.get("ops", []):
        kind = op["op"]
        if kind == "complement":
            region = region.complement()
        elif kind == "intersect":
            region = region & region_from_dict(op["with"])
        elif kind == "union":
            region = region | region_from_dict(op["with"])
        else:
            raise ValueError(f"unknown region op {kind!r}")
    return region
