"""Binds the backend selected in _backend to a stable set of names."""

from ._backend import BACKEND, USING_NUMBA  # noqa: F401

if USING_NUMBA:
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

i0e = _impl.i0e
gaussian_stat_sums = _impl.gaussian_stat_sums
bootstrap_exp_sums = _impl.bootstrap_exp_sums
profile_sums = _impl.profile_sums
stable_stat_sum = _impl.stable_stat_sum
