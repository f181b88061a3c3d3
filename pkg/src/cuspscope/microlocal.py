"""Parabolic paths, decay-exponent fits and directional microlocal classes.

A signal is of type ``(alpha, xi, gamma)`` when its wavelet coefficients
are ``O(a^alpha)`` on a non-Euclidean tube ``Gamma_eps(Xi)`` around the
parabolic path ``Xi = {(lambda xi, lambda^gamma)}`` and polynomially bounded
elsewhere.  Bounds are estimated here by log-log regression of the
per-scale supremum of ``|W|`` over the tube.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .engine import GridSignal, HalfSpaceField, ScaleGrid, commutator_residual, forward, toeplitz_apply
from .geometry import GammaTube, Lattice, RegionMask, Raster, well_separated

__all__ = [
    "FitError",
    "ClassError",
    "ParabolicPath",
    "PathSamples",
    "DecayFit",
    "ClassReport",
    "MembershipReport",
    "sample_along_path",
    "scale_profile",
    "fit_decay",
    "holder_seminorm",
    "tube_sup_profile",
    "growth_bound",
    "classify_type",
    "class_membership_inner",
    "class_membership_outer",
    "CommutatorReport",
    "commutator_smoothing",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 6.0


class FitError(ValueError):
    """Too few usable samples, or a degenerate sample set."""


class ClassError(ValueError):
    """An approximating family violates nesting or separation."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ParabolicPath:
    """``Xi(xi, gamma) = {(apex + lambda xi, lambda^gamma) : lam_lo <= lambda <= lam_hi}``.

    ``xi`` is normalized to a unit vector; rescaled directions give the same path.
    """

    direction: tuple
    gamma: float
    lam_lo: float = 1e-3
    lam_hi: float = 0.5
    count: int = 64
    apex: tuple = (0.0,)

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.direction, dtype=float))
        if not np.any(d):
            raise ValueError("path direction must be nonzero")
        norm = np.linalg.norm(d)
        if abs(norm - 1.0) > 4 * np.finfo(float).eps:
            d = d / norm
        d = tuple(float(v) for v in d)
        apex = tuple(float(v) for v in np.broadcast_to(np.asarray(self.apex, dtype=float), (len(d),)))
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "apex", apex)
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if not 0 < self.lam_lo < self.lam_hi:
            raise ValueError("need 0 < lam_lo < lam_hi")
        if self.count < 2:
            raise ValueError("need at least two path samples")

    @property
    def dimension(self) -> int:
        return len(self.direction)

    def points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(lambda, b, a)``; ``b`` has shape ``(count, n)`` in absolute coordinates."""
        lam = np.geomspace(self.lam_lo, self.lam_hi, self.count)
        b = np.asarray(self.apex)[None, :] + lam[:, None] * np.asarray(self.direction)[None, :]
        return lam, b, lam ** self.gamma

    def at_scales(self, scales: np.ndarray) -> "ParabolicPath":
        """Same path sampled exactly at the given scales (clipped to ``lam_hi``)."""
        lam = np.asarray(scales, dtype=float) ** (1.0 / self.gamma)
        lam = lam[lam <= self.lam_hi * (1 + 1e-12)]
        if lam.size < 2:
            raise ValueError("fewer than two scales on the path")
        return ParabolicPath(self.direction, self.gamma, float(lam[0]), float(lam[-1]), lam.size, self.apex)

    def to_dict(self) -> dict:
        return {"direction": list(self.direction), "gamma": self.gamma, "lam_lo": self.lam_lo,
                "lam_hi": self.lam_hi, "count": self.count, "apex": list(self.apex)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ParabolicPath":
        return cls(tuple(d["direction"]), d["gamma"], d.get("lam_lo", 1e-3), d.get("lam_hi", 0.5),
                   d.get("count", 64), tuple(d.get("apex", (0.0,))))


@dataclass
class PathSamples:
    lam: np.ndarray
    a: np.ndarray
    abs_w: np.ndarray
    clipped: bool = False
    lam_range: tuple = (math.nan, math.nan)

    def rows(self) -> list[tuple]:
        """CSV rows ``(lambda, a, absW, log_a, log_absW)``."""
        with np.errstate(divide="ignore"):
            la, lw = np.log(self.a), np.log(self.abs_w)
        return list(zip(self.lam, self.a, self.abs_w, la, lw))


def _log_abs(x):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x))


def sample_along_path(field: HalfSpaceField, path: ParabolicPath) -> PathSamples:
    """``|W|`` at the path points by interpolation of ``ln|W|``, linear in
    position and in ``ln a``.

    Positions are taken modulo the periodic domain.  Points whose scale
    falls outside the field's scale range are dropped and the clipped
    ``lambda`` range is reported.
    """
    if path.dimension != field.dimension:
        raise ValueError("path and field dimensions differ")
    lam, b, a = path.points()
    ln_s = np.log(field.scales.scales)
    keep = (np.log(a) >= ln_s[0] - 1e-12) & (np.log(a) <= ln_s[-1] + 1e-12)
    clipped = not bool(np.all(keep))
    lam, b, a = lam[keep], b[keep], a[keep]
    if lam.size == 0:
        raise ValueError("path lies entirely outside the field's scale range")
    tj = (np.log(a) - ln_s[0]) / field.scales.log_step
    j0 = np.clip(np.floor(tj).astype(int), 0, field.scales.count - 2)
    wj = np.clip(tj - j0, 0.0, 1.0)
    N = field.n_points
    pos = (b - np.asarray(field.origin)[None, :]) / field.spacing
    i0 = np.floor(pos).astype(int)
    wi = pos - i0
    out = np.empty(lam.size)
    for p in range(lam.size):
        acc = 0.0
        for dj, wsc in ((0, 1 - wj[p]), (1, wj[p])):
            if wsc == 0.0:
                continue
            sl = field.slice(j0[p] + dj)
            if field.dimension == 1:
                v0 = _log_abs(sl[i0[p, 0] % N])
                v1 = _log_abs(sl[(i0[p, 0] + 1) % N])
                val = v0 * (1 - wi[p, 0]) + v1 * wi[p, 0] if wi[p, 0] > 0 else v0
            else:
                val = 0.0
                for dx_, wx in ((0, 1 - wi[p, 0]), (1, wi[p, 0])):
                    for dy_, wy in ((0, 1 - wi[p, 1]), (1, wi[p, 1])):
                        if wx * wy == 0.0:
                            continue
                        val = val + wx * wy * _log_abs(sl[(i0[p, 0] + dx_) % N, (i0[p, 1] + dy_) % N])
            acc = acc + wsc * val
        out[p] = math.exp(acc) if np.isfinite(acc) else 0.0
    return PathSamples(lam, a, out, clipped, (float(lam[0]), float(lam[-1])))


def scale_profile(field: HalfSpaceField, position) -> tuple[np.ndarray, np.ndarray]:
    """``(a, |W(b0, a)|)`` at the grid point nearest to ``position``."""
    position = np.broadcast_to(np.asarray(position, dtype=float), (field.dimension,))
    idx = tuple(int(round((position[i] - field.origin[i]) / field.spacing)) % field.n_points
                for i in range(field.dimension))
    vals = np.array([abs(field.slice(j)[idx]) for j in range(field.scales.count)])
    return field.scales.scales, vals


@dataclass
class DecayFit:
    """Least-squares power law ``|W| ~ C a^slope``.

    ``exponent`` is the slope clipped at ``cutoff``; ``rapid`` marks fits
    at or above the cutoff, which are lower bounds only.
    """

    slope: float
    intercept: float
    residual_rms: float
    window: tuple
    n_samples: int
    success: bool = True
    cutoff: float = DEFAULT_CUTOFF
    message: str = ""

    @property
    def rapid(self) -> bool:
        return self.slope >= self.cutoff

    @property
    def exponent(self) -> float:
        return min(self.slope, self.cutoff)

    @property
    def decades(self) -> float:
        return math.log10(self.window[1] / self.window[0])

    def to_dict(self) -> dict:
        return {"slope": self.slope, "exponent": self.exponent, "rapid": self.rapid,
                "intercept": self.intercept, "residual_rms": self.residual_rms,
                "window": list(self.window), "decades": self.decades,
                "n_samples": self.n_samples, "success": self.success, "message": self.message}


def fit_decay(
    a,
    abs_w=None,
    noise_floor: float = 0.0,
    floor_factor: float = 10.0,
    window: tuple | None = None,
    min_samples: int = 8,
    min_decades: float = 1.0,
    cutoff: float = DEFAULT_CUTOFF,
) -> DecayFit:
    """Slope of ``ln|W|`` against ``ln a``.

    Accepts ``(a, abs_w)`` arrays or a :class:`PathSamples`.  Samples at or
    below ``floor_factor * noise_floor`` (and non-finite ones) are dropped;
    ``window`` restricts the scale range.  At least ``min_samples`` samples
    spanning ``min_decades`` decades of ``a`` must remain.
    """
    if isinstance(a, PathSamples):
        a, abs_w = a.a, a.abs_w
    a = np.asarray(a, dtype=float)
    w = np.abs(np.asarray(abs_w, dtype=float))
    if a.shape != w.shape:
        raise ValueError("scale and magnitude arrays differ in shape")
    if w.size and np.all(w == 0):
        raise FitError("all samples are zero")
    ok = np.isfinite(w) & np.isfinite(a) & (a > 0) & (w > floor_factor * noise_floor) & (w > 0)
    if window is not None:
        ok &= (a >= window[0] * (1 - 1e-12)) & (a <= window[1] * (1 + 1e-12))
    if ok.sum() < min_samples:
        raise FitError(f"{int(ok.sum())} usable samples, need {min_samples}")
    x, y = np.log(a[ok]), np.log(w[ok])
    span = (x.max() - x.min()) / math.log(10)
    if span < min_decades - 1e-9:
        raise FitError(f"sample window spans {span:.2f} decades, need {min_decades}")
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return DecayFit(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        residual_rms=float(np.sqrt(np.mean(res ** 2))),
        window=(float(a[ok].min()), float(a[ok].max())),
        n_samples=int(ok.sum()),
        cutoff=cutoff,
    )


def holder_seminorm(field: HalfSpaceField, region, alpha: float) -> float:
    """``sup |a^-alpha W(b, a)|`` over the sampled points of ``region``."""
    lat = field.lattice()
    best = -math.inf
    seen = False
    for j, a, s in field.iter_slices():
        m = region.slice_mask(lat, j) if isinstance(region, RegionMask) else np.asarray(region[j], bool)
        if m.any():
            seen = True
            best = max(best, float(np.max(np.abs(s[m]))) * a ** (-alpha))
    if not seen:
        raise ValueError("empty region")
    return best


def _tube(field: HalfSpaceField, path: ParabolicPath, eps: float) -> tuple[GammaTube, Lattice]:
    lat = field.lattice().shifted(path.apex)
    lam, b, a = path.points()
    return GammaTube(b - np.asarray(path.apex)[None, :], a, eps), lat


def tube_sup_profile(field: HalfSpaceField, path: ParabolicPath, eps: float = 0.25):
    """Per-scale ``sup |W|`` over the slices of ``Gamma_eps(path)``.

    Returns ``(a, sup, count)``; ``sup`` is NaN where the slice is empty.
    Positions are relative to the path apex; the domain is not wrapped.
    """
    tube, lat = _tube(field, path, eps)
    sups = np.full(field.scales.count, np.nan)
    counts = np.zeros(field.scales.count, dtype=int)
    for j, a, s in field.iter_slices():
        m = tube.slice_mask(lat, j)
        counts[j] = int(m.sum())
        if counts[j]:
            sups[j] = float(np.max(np.abs(s[m])))
    return field.scales.scales, sups, counts


def growth_bound(field: HalfSpaceField, region=None, center=None, quantile: float = 0.95,
                 max_points: int = 20000) -> tuple[float, float]:
    """Quantile fit ``ln|W| <= ln c + k ln((a + 1/a)(1 + |b - center|))``.

    Uses points outside ``region`` (all points if ``None``), subsampled on a
    fixed stride.  Returns ``(c, k)``.
    """
    import statsmodels.api as sm

    lat = field.lattice()
    center = np.zeros(field.dimension) if center is None else np.broadcast_to(
        np.asarray(center, dtype=float), (field.dimension,))
    bg = lat.b_grid()
    bn = np.sqrt(np.sum((bg - center) ** 2, axis=-1))
    xs, ys = [], []
    total = field.scales.count * field.n_points ** field.dimension
    stride = max(1, total // max_points)
    for j, a, s in field.iter_slices():
        m = np.ones(s.shape, bool) if region is None else ~region.slice_mask(lat, j)
        vals = np.abs(s)[m].ravel()
        w = np.log((a + 1 / a) * (1 + bn[m].ravel()))
        sel = slice(j % stride, None, stride)
        keep = vals[sel] > 0
        xs.append(w[sel][keep])
        ys.append(np.log(vals[sel][keep]))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    if x.size < 3:
        raise FitError("too few points for the growth bound")
    X = sm.add_constant(x, has_constant="add")
    res = sm.QuantReg(y, X).fit(q=quantile, max_iter=5000)
    lnc, k = res.params
    return float(math.exp(lnc)), float(k)


@dataclass
class ClassReport:
    """Directional type estimate along ``Gamma_eps(Xi(xi, gamma))``."""

    path: ParabolicPath
    eps: float
    fit: DecayFit | None
    alpha_hat: float
    rapid: bool
    scales: np.ndarray
    tube_sup: np.ndarray
    seminorms: dict = field(default_factory=dict)
    growth: tuple | None = None
    message: str = ""

    @property
    def verdict(self) -> dict:
        return {"alpha": self.alpha_hat, "rapid": self.rapid,
                "xi": list(self.path.direction), "gamma": self.path.gamma}

    def to_dict(self) -> dict:
        return {
            "path": self.path.to_dict(),
            "eps": self.eps,
            "alpha_hat": self.alpha_hat,
            "rapid": self.rapid,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "seminorms": {str(k): v for k, v in self.seminorms.items()},
            "growth": None if self.growth is None else {"c": self.growth[0], "k": self.growth[1]},
            "verdict": self.verdict,
            "message": self.message,
        }

    def rows(self) -> list[tuple]:
        with np.errstate(divide="ignore", invalid="ignore"):
            return [(a ** (1 / self.path.gamma), a, s, math.log(a), math.log(s) if s > 0 else -math.inf)
                    for a, s in zip(self.scales, self.tube_sup) if np.isfinite(s)]


def classify_type(
    field: HalfSpaceField,
    xi,
    gamma: float,
    eps: float = 0.25,
    alpha_grid: Sequence[float] = (),
    apex=None,
    window: tuple | None = None,
    lam_hi: float = 0.5,
    cutoff: float = DEFAULT_CUTOFF,
    min_samples: int = 8,
    min_decades: float = 1.0,
    outside_bound: bool = False,
) -> ClassReport:
    """Estimate the type ``(alpha, xi, gamma)`` of a transformed signal.

    The path is sampled at the field's own scales (``lambda = a^(1/gamma)``,
    ``lambda <= lam_hi``) and the tube ``Gamma_eps`` around it (plus the
    path's nearest grid points) is rasterized slice by slice.  ``alpha_hat``
    is the slope of ``ln sup_slice |W|`` against ``ln a`` over ``window``.
    When the tube values fall into the noise floor before enough samples
    accumulate, the decay is reported as rapid (``alpha_hat = cutoff``).
    """
    if apex is None:
        apex = (0.0,) * field.dimension
    base = ParabolicPath(tuple(np.atleast_1d(xi)), gamma, lam_hi * 1e-6, lam_hi, 2, apex)
    path = base.at_scales(field.scales.scales)
    a, sups, counts = tube_sup_profile(field, path, eps)
    if window is not None:
        sel = (a >= window[0] * (1 - 1e-12)) & (a <= window[1] * (1 + 1e-12))
    else:
        sel = np.ones(a.size, bool)
    sel &= np.isfinite(sups)
    if sel.sum() == 0 or math.log10(a[sel].max() / a[sel].min()) < min_decades - 1e-9:
        raise FitError("tube does not meet a decade of resolvable scales")
    floor = field.noise_floor
    message = ""
    try:
        fit = fit_decay(a[sel], sups[sel], noise_floor=floor, min_samples=min_samples,
                        min_decades=min_decades, cutoff=cutoff)
        alpha_hat, rapid = fit.exponent, fit.rapid
    except FitError as exc:
        above = sups[sel] > 10 * floor
        if above.any() and not above.all():
            fit, alpha_hat, rapid = None, cutoff, True
            message = f"decay reaches the noise floor ({exc}); reported as a lower bound"
        else:
            raise
    seminorms = {}
    for alpha in alpha_grid:
        with np.errstate(divide="ignore", invalid="ignore"):
            seminorms[float(alpha)] = float(np.nanmax(sups[sel] * a[sel] ** (-alpha)))
    growth = None
    if outside_bound:
        tube, lat = _tube(field, path, eps)
        growth = growth_bound(field, _ShiftedRegion(tube, path.apex), center=path.apex)
    return ClassReport(path, eps, fit, float(alpha_hat), bool(rapid), a, sups, seminorms, growth, message)


class _ShiftedRegion(RegionMask):
    """A region given in apex-relative coordinates, evaluated in absolute ones."""

    def __init__(self, inner: RegionMask, origin):
        self.inner = inner
        self.origin = np.asarray(origin, dtype=float)

    def contains(self, b, a):
        return self.inner.contains(np.asarray(b) - self.origin, a)

    def slice_mask(self, lattice, j):
        return self.inner.slice_mask(lattice.shifted(self.origin), j)


@dataclass
class MembershipReport:
    member: bool
    seminorms: list
    growth: tuple
    ceiling: float
    alpha: float

    def to_dict(self) -> dict:
        return {"member": self.member, "seminorms": self.seminorms,
                "growth": {"c": self.growth[0], "k": self.growth[1]},
                "ceiling": self.ceiling, "alpha": self.alpha}


def _rasters(field: HalfSpaceField, masks) -> list[np.ndarray]:
    lat = field.lattice()
    return [m.raster(lat).mask if isinstance(m, RegionMask) else np.asarray(m, bool) for m in masks]


def _check_family(field, rasters, eps, increasing: bool):
    lat = field.lattice()
    for k in range(len(rasters) - 1):
        small, big = (rasters[k], rasters[k + 1]) if increasing else (rasters[k + 1], rasters[k])
        if np.any(small & ~big):
            raise ClassError(f"family is not nested at k={k + 1}", k + 1)
        rep = well_separated(Raster(lat, small), Raster(lat, ~big), eps)
        if not rep.separated:
            raise ClassError(f"sets k={k + 1} and k={k + 2} are not well separated "
                             f"(ratio {rep.ratio:.3g})", k + 1)


def class_membership_inner(
    field: HalfSpaceField,
    masks: Sequence,
    alpha: float,
    eps: float = 0.1,
    ceiling: float = 1e3,
    max_growth: float = 10.0,
) -> MembershipReport:
    """Higher regularity ``Lambda^alpha`` on an increasing family ``Omega_k``.

    Requires ``Omega_k`` inside ``Omega_{k+1}`` with ``Omega_k`` well separated
    from the complement of ``Omega_{k+1}``.  Membership: every seminorm on
    ``Omega_k`` is at most ``ceiling`` and the global growth exponent is at
    most ``max_growth``.
    """
    rasters = _rasters(field, masks)
    _check_family(field, rasters, eps, increasing=True)
    semis = [holder_seminorm(field, r, alpha) for r in rasters]
    c, k = growth_bound(field)
    member = all(s <= ceiling for s in semis) and k <= max_growth
    return MembershipReport(member, semis, (c, k), ceiling, alpha)


def class_membership_outer(
    field: HalfSpaceField,
    masks: Sequence,
    alpha: float = DEFAULT_CUTOFF,
    eps: float = 0.1,
    ceiling: float = 1e3,
    max_growth: float = 10.0,
) -> MembershipReport:
    """Coefficients concentrated on a decreasing family ``Omega_k``.

    Requires ``Omega_{k+1}`` inside ``Omega_k`` and well separated from the
    complement of ``Omega_k``.  Membership: the ``Lambda^alpha`` seminorm
    (``alpha`` at the rapid-decay cutoff by default) on each complement
    ``Omega_k^c`` is at most ``ceiling``.
    """
    rasters = _rasters(field, masks)
    _check_family(field, rasters, eps, increasing=False)
    semis = [holder_seminorm(field, ~r, alpha) if (~r).any() else 0.0 for r in rasters]
    c, k = growth_bound(field)
    member = all(s <= ceiling for s in semis) and k <= max_growth
    return MembershipReport(member, semis, (c, k), ceiling, alpha)


@dataclass
class CommutatorReport:
    """Scale-decay of ``[T_sigma, T_omega] s`` against the single Töplitz terms."""

    slope_commutator: float
    slope_sigma: float
    slope_omega: float
    separation: Any
    window: tuple
    scales: np.ndarray
    sup_commutator: np.ndarray
    sup_sigma: np.ndarray
    sup_omega: np.ndarray

    @property
    def gap(self) -> float:
        """How much steeper the commutator decays than the steeper Töplitz term."""
        return self.slope_commutator - max(self.slope_sigma, self.slope_omega)

    def to_dict(self) -> dict:
        return {
            "slope_commutator": self.slope_commutator,
            "slope_sigma": self.slope_sigma,
            "slope_omega": self.slope_omega,
            "gap": self.gap,
            "window": list(self.window),
            "separation": None if self.separation is None else self.separation.to_dict(),
        }

    def rows(self) -> list[tuple]:
        return [(float(a), float(c), float(si), float(o)) for a, c, si, o in
                zip(self.scales, self.sup_commutator, self.sup_sigma, self.sup_omega)]


def commutator_smoothing(
    sigma: RegionMask,
    omega: RegionMask,
    g,
    h,
    s: GridSignal,
    scales: ScaleGrid,
    window: tuple | None = None,
    eps: float | None = 0.25,
    min_samples: int = 8,
    origin=None,
) -> CommutatorReport:
    """Fit the sup-per-scale decay of ``[T_sigma, T_omega] s`` and of each term.

    ``scales`` should make ``M_h W_g`` the identity to high accuracy (a dense
    full-band grid); otherwise the Töplitz operators are not projections and
    the commutator inherits the reconstruction ripple.  ``window`` defaults to
    ``[4 dx, 40 dx]``: the grid-scale corners of the region boundaries
    dominate below a few grid steps.  With ``eps`` the separation of
    ``omega`` from the complement of ``sigma`` is checked on the field lattice
    and reported on a coarsened lattice, with ``Delta`` measured from
    ``origin`` (the strips' apex).
    """
    dx = s.spacing
    if window is None:
        window = (4 * dx, 40 * dx)
    res, field = commutator_residual(sigma, omega, g, h, s, scales)
    sup_c = field.abs_max_per_scale()
    sup_s = forward(g, toeplitz_apply(g, h, sigma, s, scales), scales, guard=False).abs_max_per_scale()
    sup_o = forward(g, toeplitz_apply(g, h, omega, s, scales), scales, guard=False).abs_max_per_scale()
    sep = None
    if eps is not None:
        lat = field.lattice()
        stride = max(1, s.n_points // 256)
        sel = np.flatnonzero((scales.scales >= window[0] / 4) & (scales.scales <= 1.0))[::2]
        coarse = Lattice([ax[::stride] for ax in lat.b_axes], scales.scales[sel])
        rel = coarse.shifted(np.zeros(s.dimension) if origin is None else origin)
        sep = well_separated(Raster(rel, omega.raster(coarse).mask),
                             Raster(rel, (~sigma).raster(coarse).mask), eps)
    a = scales.scales
    fits = [fit_decay(a, p, noise_floor=field.noise_floor, window=window, min_samples=min_samples,
                      min_decades=0.9, cutoff=math.inf).slope for p in (sup_c, sup_s, sup_o)]
    return CommutatorReport(fits[0], fits[1], fits[2], sep, tuple(window), a, sup_c, sup_s, sup_o)
