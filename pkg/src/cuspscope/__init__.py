"""Directional (microlocal) regularity analysis with continuous wavelets.

Modules: :mod:`~cuspscope.wavelets` (analytic wavelet catalog),
:mod:`~cuspscope.geometry` (position-scale half-space geometry),
:mod:`~cuspscope.engine` (transforms, synthesis, kernels, Töplitz operators),
:mod:`~cuspscope.signals` (test signals), :mod:`~cuspscope.microlocal`
(exponent fits and class membership), :mod:`~cuspscope.elliptic`
(Laplacian transfer and regularity gain) and :mod:`~cuspscope.cli`.
"""

__version__ = "0.1.0"
