"""Identity and property checks shared by ``cuspscope verify``.

Each check returns a :class:`CheckResult` holding the measured value and the
threshold it was compared against.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import geometry as geo
from .engine import (
    ScaleGrid,
    cross_kernel_apply,
    field_norm,
    forward,
    halfspace_convolve,
    reproducing_kernel,
    synthesis,
)
from .signals import band_limited_random
from .wavelets import (
    WaveletSpec,
    admissibility_profile,
    gaussian_derivative,
    log_normal,
    reconstruction_wavelet,
)

__all__ = [
    "CheckResult",
    "geometry_axioms",
    "admissibility",
    "reconstruction",
    "energy",
    "cross_kernel",
    "projector",
    "transfer_identity",
    "DEFAULT_CHECKS",
    "run_checks",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "seconds": self.seconds, "detail": self.detail}

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.value:.3g} (threshold {self.threshold:.3g})"


def _rel(x, y) -> np.ndarray:
    return np.abs(x - y) / np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))


def _random_points(rng: np.random.Generator, n: int, dim: int):
    b = rng.normal(scale=3.0, size=(n, dim))
    a = np.exp(rng.uniform(-4.0, 4.0, size=n))
    return b, a


def geometry_axioms(n: int = 10_000, dim: int = 2, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    """Triangle inequalities, symmetry, inverse invariance, group axioms,
    dilation/translation invariance on random samples."""
    rng = np.random.default_rng(seed)
    b1, a1 = _random_points(rng, n, dim)
    b2, a2 = _random_points(rng, n, dim)
    b3, a3 = _random_points(rng, n, dim)
    worst = {}
    d12 = geo.dist_arr(b1, a1, b2, a2)
    d23 = geo.dist_arr(b2, a2, b3, a3)
    d13 = geo.dist_arr(b1, a1, b3, a3)
    worst["symmetry"] = float(np.max(_rel(d12, geo.dist_arr(b2, a2, b1, a1))))
    # dist(p, r) <= dist(p, q) dist(q, r) and Delta(pq) <= Delta(p) Delta(q)
    worst["triangle_dist"] = float(np.max(np.maximum(d13 - d12 * d23, 0) / d13))
    worst["triangle_dist_lower"] = float(np.max(np.maximum(d12 / d23 - d13, 0) / d13))
    bc, ac = geo.compose_arr(b1, a1, b2, a2)
    dp, dq, dpq = geo.delta_arr(b1, a1), geo.delta_arr(b2, a2), geo.delta_arr(bc, ac)
    worst["triangle_delta_upper"] = float(np.max(np.maximum(dpq - dp * dq, 0) / dpq))
    worst["triangle_delta_lower"] = float(np.max(np.maximum(np.maximum(dp / dq, dq / dp) - dpq, 0) / dpq))
    bi, ai = geo.inverse_arr(b1, a1)
    worst["delta_inverse"] = float(np.max(_rel(geo.delta_arr(bi, ai), dp)))
    # group axioms: p p^-1 = e, (pq)r = p(qr)
    be, ae = geo.compose_arr(b1, a1, bi, ai)
    worst["inverse"] = float(max(np.max(np.abs(be)), np.max(np.abs(ae - 1.0))))
    lb, la = geo.compose_arr(bc, ac, b3, a3)
    rb, ra = geo.compose_arr(b1, a1, *geo.compose_arr(b2, a2, b3, a3))
    worst["associativity"] = float(max(np.max(_rel(lb, rb)), np.max(_rel(la, ra))))
    # left invariance: dist(gp, gq) = dist(p, q)
    gb, ga = _random_points(rng, n, dim)
    pb, pa = geo.compose_arr(gb, ga, b1, a1)
    qb, qa = geo.compose_arr(gb, ga, b2, a2)
    worst["invariance"] = float(np.max(_rel(geo.dist_arr(pb, pa, qb, qa), d12)))
    worst["delta_min"] = float(max(0.0, 2.0 - float(np.min(dp))))
    value = max(worst.values())
    return CheckResult("geometry axioms", value <= tol, value, tol, detail=worst)


def admissibility(wavelets=None, tol: float = 1e-10) -> CheckResult:
    """Radial catalog wavelets have a direction-independent profile."""
    if wavelets is None:
        wavelets = [log_normal(2), gaussian_derivative(4, 2)]
    worst = 0.0
    detail = {}
    for w in wavelets:
        p = admissibility_profile(w)
        spread = float(p.max_value / p.min_value - 1.0)
        detail[w.kind + str(dict(w.params))] = spread
        worst = max(worst, spread)
    return CheckResult("admissibility", worst <= tol, worst, tol, detail=detail)


def reconstruction(n_points: int = 1024, dimension: int = 1, count: int = 64, seed: int = 0,
                   tol: float = 1e-3, g: WaveletSpec | None = None) -> CheckResult:
    """``||M_r W_g s - s|| / ||s||`` on a band-limited random signal."""
    g = g or log_normal(dimension)
    s = band_limited_random((2, n_points // 8), n_points, 1.0, dimension, seed)
    scales = ScaleGrid.full_band(n_points, 1.0, dimension, count)
    rec = synthesis(reconstruction_wavelet(g), forward(g, s, scales, guard=False))
    err = float(np.linalg.norm(rec.samples - s.samples) / np.linalg.norm(s.samples))
    return CheckResult(f"reconstruction {dimension}-D", err < tol, err, tol)


def energy(n_points: int = 1024, count: int = 64, seed: int = 0, tol: float = 1e-2) -> CheckResult:
    """``||W_g s||^2 / ||s||^2`` for the unit-normalized log-normal wavelet."""
    g = log_normal(1, normalized=True)
    s = band_limited_random((2, n_points // 8), n_points, 1.0, 1, seed)
    W = forward(g, s, ScaleGrid.full_band(n_points, 1.0, 1, count), guard=False)
    ratio = field_norm(W) ** 2 / s.norm() ** 2
    return CheckResult("energy conservation", abs(ratio - 1) < tol, abs(ratio - 1), tol,
                       detail={"ratio": ratio})


def cross_kernel(n_signals: int = 5, n_points: int = 1024, seed: int = 0, tol: float = 5e-2,
                 g: WaveletSpec | None = None, g2: WaveletSpec | None = None) -> CheckResult:
    """Tabulated cross-kernel transport against direct analysis with the target."""
    g = g or log_normal(1)
    g2 = g2 or gaussian_derivative(4, 1)
    scales = ScaleGrid(1e-5, 1.0, 64)
    errs = []
    for i in range(n_signals):
        s = band_limited_random((4, 64), n_points, 1.0, 1, seed + i)
        W = forward(g, s, scales, guard=False)
        got = cross_kernel_apply(g, g2, W)
        ref = forward(g2, s, scales, guard=False)
        errs.append(float(np.linalg.norm(got.values - ref.values) / np.linalg.norm(ref.values)))
    worst = max(errs)
    return CheckResult("cross kernel", worst < tol, worst, tol, detail={"errors": errs})


def projector(tol: float = 1e-2, method: str = "tabulated") -> CheckResult:
    """``||Pi * Pi - Pi|| / ||Pi||`` for the normalized log-normal reproducing kernel."""
    g = log_normal(1, normalized=True)
    K = reproducing_kernel(g, reconstruction_wavelet(g), 4096, 128.0,
                           ScaleGrid.from_log_step(1.0, 0.2, 30))
    P = halfspace_convolve(K, K, method=method)
    err = field_norm(K.with_values(P.values - K.values)) / field_norm(K)
    return CheckResult(f"projector ({method})", err < tol, err, tol)


def transfer_identity(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """``W_g Laplacian eta = sigma a^-2 W_{Laplacian g} eta`` for catalog radial wavelets."""
    from .elliptic import transfer_identity_residual

    detail = {}
    worst = 0.0
    sign = None
    for dim, n in ((1, 1024), (2, 128)):
        s = band_limited_random((2, n // 8), n, 1.0, dim, seed)
        for g in (log_normal(dim), gaussian_derivative(2, dim), gaussian_derivative(4, dim)):
            r = transfer_identity_residual(g, s, ScaleGrid(2.0 / n, 0.25, 16))
            detail[f"{dim}-D {g.kind} {dict(g.params)}"] = r.residual
            worst = max(worst, r.residual)
            sign = r.sign
    detail["sign"] = sign
    return CheckResult("laplacian transfer identity", worst < tol, worst, tol, detail=detail)


DEFAULT_CHECKS: dict[str, Callable[[], CheckResult]] = {
    "geometry": geometry_axioms,
    "admissibility": admissibility,
    "reconstruction_1d": lambda: reconstruction(1024, 1),
    "reconstruction_2d": lambda: reconstruction(256, 2),
    "energy": energy,
    "cross_kernel": cross_kernel,
    "projector": projector,
    "transfer": transfer_identity,
}


def run_checks(names=None) -> list[CheckResult]:
    out = []
    for name in names or list(DEFAULT_CHECKS):
        t = time.perf_counter()
        res = DEFAULT_CHECKS[name]()
        res.seconds = time.perf_counter() - t
        out.append(res)
    return out
