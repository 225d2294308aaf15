"""Rotation bootstrap calibration of the statistic.

Under the null every observation can be multiplied by an independent
uniform phase without changing the distribution of the sample, so
replicates T* built from randomly rotated data calibrate the observed T.
The rotation acts directly on the pairwise summaries: with angle difference
delta_jk = phi_k - phi_j,

    C' = C cos delta + S sin delta
    S' = S cos delta - C sin delta

norms are unchanged, and C'^2 + S'^2 = C^2 + S^2, so the Bessel term of the
Gaussian closed form is rotation invariant and is reused across replicates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DomainError
from .kernel import GAUSSIAN, KernelSpec
from .numerics import RngStream, rng_uniform_angles
from .statistic import (
    FOUR_PI,
    ComplexSample,
    PairwiseSummaries,
    WeightConvention,
    _finalize,
    pairwise_summaries,
    statistic_quadrature,
    theta_profile,
)


@dataclass(frozen=True)
class BootstrapConfig:
    """Number of replicates, base seed, and whether to keep replicate values.

    Replicate b draws its angles from the substream (seed, stream_id=b), so
    replicates are reproducible individually and independent of evaluation
    order or thread count.
    """

    b: int = 200
    seed: int = 0
    keep_replicates: bool = False

    def __post_init__(self):
        if not isinstance(self.b, (int, np.integer)) or self.b < 1:
            raise DomainError(f"b must be a positive integer, got {self.b!r}")
        if not isinstance(self.seed, (int, np.integer)):
            raise DomainError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    kernel: KernelSpec
    n: int
    d: int
    b: int
    seed: int
    replicates: tuple[float, ...] | None = None


def rotate_summaries(ps: PairwiseSummaries, angles) -> PairwiseSummaries:
    """Summaries of the sample with observation j rotated by angles[j]."""
    angles = np.asarray(angles, dtype=np.float64)
    if angles.shape != (ps.n,):
        raise DomainError(
            f"expected {ps.n} angles, got shape {angles.shape}"
        )
    if not np.all(np.isfinite(angles)):
        raise DomainError("angles must be finite")
    cp = np.cos(angles)
    sp = np.sin(angles)
    cos_d = np.outer(cp, cp) + np.outer(sp, sp)
    sin_d = np.outer(cp, sp) - np.outer(sp, cp)
    c_rot = ps.c * cos_d + ps.s * sin_d
    s_rot = ps.s * cos_d - ps.c * sin_d
    return PairwiseSummaries(norms_sq=ps.norms_sq, c=c_rot, s=s_rot)


def replicate_statistic(
    ps: PairwiseSummaries,
    k: KernelSpec,
    angles,
    method: str = "auto",
) -> float:
    """T* for one set of rotation angles.

    method="fast" (Gaussian only) recomputes just the exp term from the
    rotated C and reuses the rotation-invariant Bessel term; "generic"
    rotates the summaries and reruns the quadrature statistic. "auto" picks
    fast for Gaussian kernels.
    """
    if method not in ("auto", "fast", "generic"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = "fast" if k.family == GAUSSIAN else "generic"
    if method == "fast":
        if k.family != GAUSSIAN:
            raise DomainError("the fast path requires a Gaussian kernel")
        angles = np.asarray(angles, dtype=np.float64)
        if angles.shape != (ps.n,):
            raise DomainError(f"expected {ps.n} angles, got shape {angles.shape}")
        _, sum_bes = _kernels.gaussian_stat_sums(ps.norms_sq, ps.c, ps.s, k.lam)
        sums = _kernels.bootstrap_exp_sums(
            ps.norms_sq,
            ps.c,
            ps.s,
            k.lam,
            np.cos(angles)[None, :],
            np.sin(angles)[None, :],
        )
        return _finalize(FOUR_PI / ps.n * (sums[0] - sum_bes), ps.n)
    return statistic_quadrature(rotate_summaries(ps, angles), k)


def _angle_matrix(cfg: BootstrapConfig, n: int) -> np.ndarray:
    out = np.empty((cfg.b, n))
    for b in range(cfg.b):
        out[b] = rng_uniform_angles(RngStream(cfg.seed, b), n)
    return out


def bootstrap_test(x, k: KernelSpec, cfg: BootstrapConfig = BootstrapConfig()) -> TestResult:
    """Rotation bootstrap test of circular symmetry.

    Returns the observed statistic and the add-one bootstrap p-value
    (1 + #{T*_b >= T}) / (B + 1); ties count toward rejection of nothing,
    i.e. they inflate the p-value, which keeps the test conservative.
    """
    if not isinstance(x, ComplexSample):
        raise DomainError("bootstrap_test expects a ComplexSample")
    ps = pairwise_summaries(x)
    n = x.n
    angles = _angle_matrix(cfg, n)
    if k.family == GAUSSIAN:
        sum_exp, sum_bes = _kernels.gaussian_stat_sums(ps.norms_sq, ps.c, ps.s, k.lam)
        observed = _finalize(FOUR_PI / n * (sum_exp - sum_bes), n)
        sums = _kernels.bootstrap_exp_sums(
            ps.norms_sq, ps.c, ps.s, k.lam, np.cos(angles), np.sin(angles)
        )
        reps = np.array([_finalize(FOUR_PI / n * (v - sum_bes), n) for v in sums])
    else:
        observed = statistic_quadrature(ps, k)
        reps = np.array(
            [
                statistic_quadrature(rotate_summaries(ps, angles[b]), k)
                for b in range(cfg.b)
            ]
        )
    count = int(np.count_nonzero(reps >= observed))
    p_value = (1.0 + count) / (cfg.b + 1.0)
    return TestResult(
        statistic=observed,
        p_value=p_value,
        kernel=k,
        n=n,
        d=x.d,
        b=cfg.b,
        seed=int(cfg.seed),
        replicates=tuple(float(v) for v in reps) if cfg.keep_replicates else None,
    )


def null_band(
    ps: PairwiseSummaries,
    k: KernelSpec,
    thetas,
    cfg: BootstrapConfig = BootstrapConfig(),
    q: float = 0.95,
    convention: WeightConvention = WeightConvention.KERNEL,
    d: int | None = None,
    angles: np.ndarray | None = None,
) -> np.ndarray:
    """Pointwise q-quantile of bootstrap-replicate theta profiles.

    The returned curve is the null reference against which an observed
    profile is drawn. angles, if given, must be a (B, n) matrix and
    replaces the seeded draws (useful for forcing degenerate rotations).
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"quantile level must lie in [0, 1], got {q!r}")
    if angles is None:
        angles = _angle_matrix(cfg, ps.n)
    else:
        angles = np.asarray(angles, dtype=np.float64)
        if angles.ndim != 2 or angles.shape[1] != ps.n:
            raise DomainError(
                f"angles must have shape (B, {ps.n}), got {angles.shape}"
            )
    profiles = np.stack(
        [
            theta_profile(rotate_summaries(ps, row), k, thetas, convention, d).values
            for row in angles
        ]
    )
    return np.quantile(profiles, q, axis=0)
