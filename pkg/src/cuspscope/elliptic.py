"""Spectral Laplacian/Poisson tools and elliptic regularity experiments.

For a radial wavelet ``g`` and ``h = Laplacian g`` the transforms satisfy
``W_g (Laplacian eta) = sigma a^-2 W_h eta``; with the Fourier and
conjugation conventions of :mod:`cuspscope.engine` the sign is ``sigma = +1``
(calibrated numerically by :func:`calibrate_transfer_sign`).  Hence solving
``Laplacian eta = f`` multiplies coefficient decay by ``a^2``: a source of
type ``(xi, gamma, alpha)`` yields a potential of type
``(xi, gamma, alpha + 2)`` along paths that enter a cusp of degree
``delta < gamma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .engine import GridSignal, ScaleGrid, _fftn, _ifftn, forward
from .geometry import (
    InfluenceRegion,
    RegionMask,
    delta_arr,
    influence_region,
    well_separated,
)
from .microlocal import ClassReport, FitError, classify_type, fit_decay
from .signals import CuspDomain, CuspError, _blend_weight, rough_background
from .wavelets import WaveletSpec, laplacian_of

__all__ = [
    "HypothesisError",
    "SeparationError",
    "laplacian",
    "poisson_solve",
    "calibrate_transfer_sign",
    "TransferResult",
    "transfer_identity_residual",
    "EllipticReport",
    "cusp_source",
    "regularity_gain_experiment",
    "LocalizationReport",
    "support_localization_check",
]


class HypothesisError(ValueError):
    """A theorem hypothesis (such as ``gamma > delta``) is violated."""


class SeparationError(ValueError):
    """A region fails the well-separation precondition."""


def _k2(s: GridSignal) -> np.ndarray:
    ks = s.wavenumbers()
    return sum(k * k for k in ks) if len(ks) > 1 else ks[0] ** 2


def laplacian(s: GridSignal) -> GridSignal:
    """Spectral Laplacian on the periodic grid."""
    out = _ifftn(-_k2(s) * _fftn(s.samples))
    if not np.iscomplexobj(s.samples):
        out = out.real
    return s.with_samples(out)


def poisson_solve(f: GridSignal, return_mean: bool = False):
    """Zero-mean periodic solution of ``Laplacian eta = f``.

    The mean of ``f`` (the ``k = 0`` mode) is removed first; with
    ``return_mean`` the removed mean is returned alongside the solution.
    """
    fh = _fftn(f.samples)
    mean = fh.flat[0] / f.samples.size
    k2 = _k2(f)
    k2 = np.where(k2 == 0, 1.0, k2)
    eh = -fh / k2
    eh.flat[0] = 0.0
    out = _ifftn(eh)
    if not np.iscomplexobj(f.samples):
        out = out.real
        mean = mean.real
    eta = f.with_samples(out)
    return (eta, mean) if return_mean else eta


_SIGNS: dict[str, int] = {}


def _calibrated_sign(g: WaveletSpec) -> int:
    dimension = g.dimension
    n = 64
    x = np.arange(n) / n
    if dimension == 1:
        mode = np.cos(2 * np.pi * 3 * x)
    else:
        mode = np.cos(2 * np.pi * (3 * x[:, None] + 2 * x[None, :]))
    eta = GridSignal(mode, 1.0)
    scales = ScaleGrid(0.02, 0.2, 4)
    lhs = forward(g, laplacian(eta), scales, guard=False).values
    rhs = forward(laplacian_of(g), eta, scales, guard=False).values
    rhs = rhs / scales.scales.reshape((-1,) + (1,) * dimension) ** 2
    plus = np.max(np.abs(lhs - rhs))
    minus = np.max(np.abs(lhs + rhs))
    return 1 if plus <= minus else -1


def calibrate_transfer_sign(g: WaveletSpec) -> int:
    """Sign ``sigma`` in ``W_g Laplacian eta = sigma a^-2 W_{Laplacian g} eta``,
    determined from a single grid mode."""
    if not g.radial:
        raise ValueError("the transfer identity needs a radial wavelet")
    key = g.to_json()
    if key not in _SIGNS:
        _SIGNS[key] = _calibrated_sign(g)
    return _SIGNS[key]


@dataclass
class TransferResult:
    sign: int
    residual: float
    per_scale: np.ndarray

    def to_dict(self) -> dict:
        return {"sign": self.sign, "residual": self.residual, "per_scale": self.per_scale.tolist()}


def transfer_identity_residual(g: WaveletSpec, eta: GridSignal, scales: ScaleGrid) -> TransferResult:
    """Max over scales of ``||W_g L eta - sigma a^-2 W_{Lg} eta||_inf / ||W_g L eta||_inf``."""
    if not g.radial:
        raise ValueError("the transfer identity needs a radial wavelet")
    sign = calibrate_transfer_sign(g)
    lhs = forward(g, laplacian(eta), scales, guard=False, lazy=True)
    rhs = forward(laplacian_of(g), eta, scales, guard=False, lazy=True)
    res = np.zeros(scales.count)
    for j, a in enumerate(scales.scales):
        l = lhs.slice(j)
        r = sign * rhs.slice(j) / a ** 2
        den = np.max(np.abs(l))
        num = np.max(np.abs(l - r))
        res[j] = 0.0 if num == 0 else (num / den if den > 0 else math.inf)
    return TransferResult(sign, float(res.max()) if res.size else 0.0, res)


def cusp_source(
    domain: CuspDomain,
    alpha: float,
    n_points: int = 512,
    length: float = 1.0,
    seed: int = 0,
    blend_steps: float = 3.0,
    direction=(1, 1),
) -> GridSignal:
    """Source supported in the closed cusp: Hölder-``alpha`` Weierstrass
    texture inside, zero outside, spliced smoothly across the boundary."""
    if domain.extent < 4 * length / n_points:
        raise CuspError("cusp extent is below 4 grid steps")
    rough = rough_background(alpha, n_points, length, 2, seed, direction).samples
    chi = _blend_weight(domain.indicator(n_points, length), blend_steps)
    return GridSignal(chi * rough, length)


@dataclass
class EllipticReport:
    alpha_f: float
    alpha_eta: float
    gain: float
    rapid_f: bool
    rapid_eta: bool
    transfer: TransferResult | None
    mean_removed: float
    separation: dict = field(default_factory=dict)
    f_report: ClassReport | None = None
    eta_report: ClassReport | None = None
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "alpha_f": self.alpha_f,
            "alpha_eta": self.alpha_eta,
            "gain": self.gain,
            "rapid_f": self.rapid_f,
            "rapid_eta": self.rapid_eta,
            "transfer": None if self.transfer is None else {"sign": self.transfer.sign,
                                                            "residual": self.transfer.residual},
            "mean_removed": self.mean_removed,
            "separation": self.separation,
            "f": None if self.f_report is None else self.f_report.to_dict(),
            "eta": None if self.eta_report is None else self.eta_report.to_dict(),
            "config": self.config,
        }


def regularity_gain_experiment(
    domain: CuspDomain,
    xi,
    gamma: float,
    alpha: float,
    g: WaveletSpec,
    n_points: int = 512,
    length: float = 1.0,
    eps: float = 0.25,
    window: tuple | None = None,
    n_scales: int = 48,
    seed: int = 0,
    min_decades: float = 1.0,
    source: GridSignal | None = None,
    cutoff: float = 6.0,
) -> EllipticReport:
    """Solve ``Laplacian eta = f`` for a cusp source and compare directional types.

    ``f`` defaults to :func:`cusp_source` (Hölder-``alpha`` texture inside the
    cusp).  Both ``f`` and ``eta`` are classified along ``Xi(xi, gamma)`` from
    the cusp apex with the same wavelet, tube and scale window; the gain is
    ``alpha_eta - alpha_f``.  The window defaults to ``[2 dx, 0.06 L]``.
    """
    if not gamma > domain.degree:
        raise HypothesisError(
            f"hypothesis violated: gamma={gamma} must exceed the cusp degree delta={domain.degree}")
    dx = length / n_points
    if window is None:
        window = (2 * dx, 0.06 * length)
    f = source if source is not None else cusp_source(domain, alpha, n_points, length, seed)
    eta, mean = poisson_solve(f, return_mean=True)
    f0 = f.with_samples(f.samples - mean)
    scales = ScaleGrid(2 * dx, 0.25 * length, n_scales)
    rep_f = classify_type(forward(g, f0, scales, lazy=True), xi, gamma, eps, apex=domain.apex,
                          window=window, cutoff=cutoff, min_decades=min_decades)
    rep_eta = classify_type(forward(g, eta, scales, lazy=True), xi, gamma, eps, apex=domain.apex,
                            window=window, cutoff=cutoff, min_decades=min_decades)
    probe = GridSignal(eta.samples[:: max(1, n_points // 128), :: max(1, n_points // 128)], length)
    transfer = transfer_identity_residual(g, probe, ScaleGrid(4 * probe.spacing, 0.25 * length, 8))
    sep = _tube_separation(domain, xi, gamma, eps, n_points, length, scales)
    return EllipticReport(
        alpha_f=rep_f.alpha_hat,
        alpha_eta=rep_eta.alpha_hat,
        gain=rep_eta.alpha_hat - rep_f.alpha_hat,
        rapid_f=rep_f.rapid,
        rapid_eta=rep_eta.rapid,
        transfer=transfer,
        mean_removed=float(np.real(mean)),
        separation=sep,
        f_report=rep_f,
        eta_report=rep_eta,
        config={"domain": domain.to_dict(), "xi": list(np.atleast_1d(xi).astype(float)),
                "gamma": gamma, "alpha": alpha, "wavelet": g.to_dict(), "n_points": n_points,
                "length": length, "eps": eps, "window": list(window), "seed": seed},
    )


def _tube_separation(domain, xi, gamma, eps, n_points, length, scales) -> dict:
    """Separation of the path tube from the influence region of the cusp's exterior.

    Reported as a diagnostic: the directional theorem needs only the cusp
    condition, while the general theorem asks for this separation.
    """
    coarse = min(n_points, 256)
    ind = domain.indicator(coarse, length)
    if ind.all():
        return {"separated": True, "vacuous": True}
    region = influence_region(~ind, length)
    apex = np.asarray(domain.apex)
    lam = scales.scales ** (1.0 / gamma)
    lam = lam[lam <= 0.5]
    b = apex[None, :] + lam[:, None] * np.asarray(xi, dtype=float)[None, :]
    rep = _points_vs_influence(b, lam ** gamma, region, eps, apex)
    return rep


def _points_vs_influence(b, a, region: InfluenceRegion, eps, apex):
    d = region.distance_from(b, a)
    thr = delta_arr(b - apex, a) ** eps
    ratio = d / thr
    i = int(np.argmin(ratio))
    return {"separated": bool(ratio[i] > 1), "ratio": float(ratio[i]),
            "worst": {"b": b[i].tolist(), "a": float(a[i])},
            "separated_fraction": float(np.mean(ratio > 1))}


@dataclass
class LocalizationReport:
    slope: float
    fit: Any
    vacuous: bool
    separation: dict
    deltas: np.ndarray
    sups: np.ndarray

    @property
    def decay(self) -> float:
        """Decay rate ``-slope`` of ``sup |W|`` against ``Delta``."""
        return -self.slope

    def to_dict(self) -> dict:
        return {"slope": self.slope, "decay": self.decay, "vacuous": self.vacuous,
                "separation": self.separation,
                "fit": None if self.fit is None else self.fit.to_dict()}


def support_localization_check(
    rho: GridSignal,
    support: np.ndarray,
    tube: RegionMask,
    g: WaveletSpec,
    scales: ScaleGrid,
    eps: float = 0.25,
    min_decay: float | None = None,
    min_samples: int = 8,
) -> LocalizationReport:
    """Decay of ``sup |W_g rho|`` over a region against ``Delta``.

    ``support`` is the boolean indicator of the set carrying ``rho``; the
    region must be well separated (at ``eps``) from its influence region.
    Region points are binned by scale: for each scale slice the maximum of
    ``|W|`` is paired with the smallest ``Delta`` on the slice, and
    ``ln sup`` is regressed on ``ln Delta``.  The result slope is negative
    for decay.  With ``min_decay`` a :class:`FitError` is raised if the decay
    is weaker.
    """
    infl = influence_region(support, rho.length, rho.origin)
    field = forward(g, rho, scales, guard=False, lazy=True)
    lat = field.lattice()
    rep = well_separated(tube.raster(lat), infl, eps, lat)
    sep = rep.to_dict()
    if not rep.separated:
        raise SeparationError(f"region is not well separated from the influence region "
                              f"(ratio {rep.ratio:.3g})")
    if not np.any(rho.samples):
        return LocalizationReport(math.nan, None, True, sep, np.array([]), np.array([]))
    bg = lat.b_grid()
    deltas, sups = [], []
    for j, a, sl in field.iter_slices():
        m = tube.slice_mask(lat, j)
        if not m.any():
            continue
        deltas.append(float(np.min(delta_arr(bg[m], a))))
        sups.append(float(np.max(np.abs(sl[m]))))
    deltas = np.asarray(deltas)
    sups = np.asarray(sups)
    fit = fit_decay(deltas, sups, noise_floor=field.noise_floor, min_samples=min_samples,
                    min_decades=0.0, cutoff=math.inf)
    report = LocalizationReport(fit.slope, fit, False, sep, deltas, sups)
    if min_decay is not None and report.decay < min_decay:
        raise FitError(f"decay {report.decay:.3g} is below the required {min_decay}")
    return report
