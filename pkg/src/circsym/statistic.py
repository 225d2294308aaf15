"""The circular-symmetry statistic and its angular diagnostics.

A sample of complex vectors z_1..z_n in C^d is embedded as real vectors
W_j = (Re z_j, Im z_j) in R^{2d}. Multiplying z_j by e^{i theta} acts on W_j
as the block rotation M_theta. Everything downstream depends on the data
only through the pairwise summaries

    N_j    = ||W_j||^2
    C_jk   = Re <z_j, z_k>   (Hermitian inner product, C - iS = z_j^H z_k)
    S_jk   = Im <z_k, z_j>

since W_j . M_theta W_k = C_jk cos theta + S_jk sin theta.

The statistic integrates the squared distance between the empirical
characteristic function of the W_j and its phase-rotated versions against a
spherical weight, which collapses to the pair sums evaluated here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import ClosedFormError, CostGuardError, DomainError, NumericError
from .kernel import GAUSSIAN, KernelSpec
from .numerics import gauss_legendre

FOUR_PI = 4.0 * np.pi

#: negative statistic values larger than this (times scale) indicate a bug
_NONNEG_TOL = 1e-10


@dataclass(frozen=True)
class ComplexSample:
    """n complex d-vectors stored as an (n, 2d) float64 matrix.

    Column layout is (Re z^(1), ..., Re z^(d), Im z^(1), ..., Im z^(d)).
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        if arr.ndim != 2:
            raise DomainError(f"sample must be a 2-d array, got ndim={arr.ndim}")
        n, cols = arr.shape
        if n < 1:
            raise DomainError("sample must contain at least one observation")
        if cols < 2 or cols % 2 != 0:
            raise DomainError(
                f"sample needs an even number >= 2 of real columns, got {cols}"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample entries must be finite")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1] // 2

    @classmethod
    def from_complex(cls, z) -> "ComplexSample":
        arr = np.asarray(z, dtype=np.complex128)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise DomainError(f"complex input must be 1-d or 2-d, got ndim={arr.ndim}")
        return cls(np.hstack([arr.real, arr.imag]))

    def to_complex(self) -> np.ndarray:
        d = self.d
        return self.data[:, :d] + 1j * self.data[:, d:]


@dataclass(frozen=True)
class PairwiseSummaries:
    """Squared norms plus the C (symmetric) and S (antisymmetric) matrices."""

    norms_sq: np.ndarray
    c: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        n = self.norms_sq.shape[0]
        if self.c.shape != (n, n) or self.s.shape != (n, n):
            raise DomainError(
                f"summary shapes are inconsistent: {self.norms_sq.shape}, "
                f"{self.c.shape}, {self.s.shape}"
            )

    @property
    def n(self) -> int:
        return self.norms_sq.shape[0]


class WeightConvention(enum.Enum):
    """Which weight normalization a theta profile was computed under.

    KERNEL: the kernel itself, psi(xi) = exp(-lam xi^mu); integrating the
    profile over [-pi, pi) returns the statistic.
    DENSITY: the raw Gaussian weight exp(-lam ||s||^2), Gaussian kernels
    only; this is the scaling under which the large-lam limit is taken.
    """

    KERNEL = "kernel"
    DENSITY = "density"


@dataclass(frozen=True)
class ThetaProfile:
    thetas: np.ndarray
    values: np.ndarray
    convention: WeightConvention


def pairwise_summaries(x: ComplexSample) -> PairwiseSummaries:
    """Build N, C, S from the sample. O(n^2 d) via matrix products."""
    d = x.d
    xr = x.data[:, :d]
    xi = x.data[:, d:]
    c = xr @ xr.T + xi @ xi.T
    s = xi @ xr.T - xr @ xi.T
    norms_sq = np.einsum("ij,ij->i", x.data, x.data)
    # enforce the exact structural identities against BLAS roundoff
    c = 0.5 * (c + c.T)
    s = 0.5 * (s - s.T)
    np.fill_diagonal(c, norms_sq)
    np.fill_diagonal(s, 0.0)
    return PairwiseSummaries(norms_sq=norms_sq, c=c, s=s)


def _finalize(value: float, n: int) -> float:
    if value < 0.0:
        if value < -_NONNEG_TOL * FOUR_PI * max(1, n):
            raise NumericError(
                f"statistic {value:.6e} is negative beyond roundoff tolerance"
            )
        return 0.0
    return float(value)


def statistic_closed(ps: PairwiseSummaries, k: KernelSpec) -> float:
    """T for a Gaussian kernel via the exact Bessel form.

    T = (4 pi / n) sum_jk [ exp(-lam ||W_j - W_k||^2)
                            - exp(-lam (N_j + N_k)) I0(2 lam sqrt(C^2 + S^2)) ]

    Nonnegative up to roundoff; tiny negative values clamp to 0.
    """
    if k.family != GAUSSIAN:
        raise ClosedFormError(
            f"no closed form for family {k.family!r}; use statistic_quadrature"
        )
    n = ps.n
    sum_exp, sum_bes = _kernels.gaussian_stat_sums(ps.norms_sq, ps.c, ps.s, k.lam)
    return _finalize(FOUR_PI / n * (sum_exp - sum_bes), n)


def statistic_quadrature(
    ps: PairwiseSummaries,
    k: KernelSpec,
    initial_order: int = 64,
    rtol: float = 1e-12,
    max_order: int = 8192,
) -> float:
    """T for any kernel family, angular integrals by quadrature.

    T = (1/n) sum_jk [ 4 pi psi(||W_j - W_k||) - 2 int psi(||W_j - M_t W_k||) dt ]

    The inner integral is evaluated on [0, pi] (doubled) after aligning the
    phase, with the node count doubling until the total stabilizes to rtol.
    For Gaussian kernels this is the numerically stable cross-check of
    statistic_closed: every exponent is nonpositive.
    """
    n = ps.n
    order = initial_order
    prev = None
    floor = 8.0 * FOUR_PI * n * np.finfo(float).eps
    while order <= max_order:
        t, w = gauss_legendre(order).mapped(0.0, np.pi)
        total = _kernels.stable_stat_sum(
            ps.norms_sq, ps.c, ps.s, k.lam, k.mu, t, np.asarray(w)
        )
        value = total / n
        if prev is not None and abs(value - prev) <= max(
            rtol * max(abs(value), abs(prev)), floor
        ):
            return _finalize(value, n)
        prev = value
        order *= 2
    raise NumericError(f"statistic quadrature did not converge by order {max_order}")


def theta_profile(
    ps: PairwiseSummaries,
    k: KernelSpec,
    thetas,
    convention: WeightConvention = WeightConvention.KERNEL,
    d: int | None = None,
) -> ThetaProfile:
    """Angular discrepancy profile D(theta).

    Under the KERNEL convention,

        D(theta) = (2/n) sum_jk [ psi(||W_j - W_k||) - psi(||W_j - M_theta W_k||) ]

    so that the trapezoidal integral of D over [-pi, pi) recovers the
    statistic. Under the DENSITY convention (Gaussian kernels only) psi is
    replaced by (pi/lam)^d exp(-xi^2 / (4 lam)), the form whose large-lam
    rescaling has the analytic limit 2 (1 - cos theta) ||Wbar||^2; this
    needs the ambient dimension d.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if thetas.ndim != 1:
        raise DomainError("theta grid must be one-dimensional")
    if not np.all(np.isfinite(thetas)):
        raise DomainError("theta grid must be finite")
    if np.any(thetas < -np.pi) or np.any(thetas >= np.pi):
        raise DomainError("theta grid must lie in [-pi, pi)")
    n = ps.n
    if convention is WeightConvention.KERNEL:
        sums = _kernels.profile_sums(ps.norms_sq, ps.c, ps.s, k.lam, k.mu, thetas)
        values = (2.0 / n) * sums
    elif convention is WeightConvention.DENSITY:
        if k.family != GAUSSIAN:
            raise DomainError("the DENSITY convention is defined for Gaussian kernels")
        if d is None or int(d) < 1:
            raise DomainError("the DENSITY convention needs the ambient dimension d >= 1")
        rate = 1.0 / (4.0 * k.lam)
        sums = _kernels.profile_sums(ps.norms_sq, ps.c, ps.s, rate, 2.0, thetas)
        values = (2.0 / n) * (np.pi / k.lam) ** int(d) * sums
    else:
        raise DomainError(f"unknown convention {convention!r}")
    return ThetaProfile(thetas=thetas, values=values, convention=convention)


def large_lambda_scaled(ps: PairwiseSummaries, lam: float, theta: float, d: int) -> float:
    """(2 / pi^d) * lam^(d+1) * T_n(theta) under the DENSITY convention.

    The (pi/lam)^d factors cancel analytically, leaving

        (4 lam / n^2) sum_jk [ exp(-||W_jk||^2 / (4 lam))
                               - exp(-||W_j - M_theta W_k||^2 / (4 lam)) ]

    which stays finite for arbitrarily large lam. As lam grows this tends to
    2 (1 - cos theta) ||Wbar||^2 (see large_lambda_limit).
    """
    if not np.isfinite(lam) or lam <= 0.0:
        raise DomainError(f"lam must be positive and finite, got {lam!r}")
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if not np.isfinite(theta):
        raise DomainError("theta must be finite")
    n = ps.n
    rate = 1.0 / (4.0 * lam)
    wrapped = float(np.arctan2(np.sin(theta), np.cos(theta)))
    if wrapped >= np.pi:
        wrapped = -np.pi
    sums = _kernels.profile_sums(
        ps.norms_sq, ps.c, ps.s, rate, 2.0, np.array([wrapped])
    )
    return float(4.0 * lam / (n * n) * sums[0])


def large_lambda_limit(ps: PairwiseSummaries, theta: float) -> float:
    """Analytic large-lam limit 2 (1 - cos theta) ||Wbar||^2.

    ||Wbar||^2 is the squared norm of the componentwise sample mean, which
    equals the average of the C matrix.
    """
    if not np.isfinite(theta):
        raise DomainError("theta must be finite")
    mean_sq = float(ps.c.mean())
    return 2.0 * (1.0 - np.cos(theta)) * mean_sq


def delta_estimate(t: float, n: int) -> float:
    """T/n, the consistent estimate of the population discrepancy."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not np.isfinite(t):
        raise DomainError("t must be finite")
    return float(t) / float(n)


def oracle_direct(
    x: ComplexSample,
    k: KernelSpec,
    grid_points: int = 400,
    theta_points: int = 128,
    tol: float = 1e-6,
    max_refinements: int = 3,
) -> float:
    """Brute-force evaluation of T from its definition, for tiny samples.

    Computes n * int int |phi_n(s) - phi_n,theta(s)|^2 w(||s||) ds dtheta by
    tensor-product Gauss-Legendre quadrature over s in R^2 and a midpoint
    rule in theta, where phi_n is the empirical characteristic function of
    the W_j and w is the normalized Gaussian density with
    int cos(s . v) w ds = exp(-lam ||v||^2), i.e. N(0, 2 lam I). The s grid
    is truncated where the weight falls below 1e-12 and refined until two
    levels agree to tol. Deliberately slow; guarded to d = 1, n <= 4,
    Gaussian kernels.
    """
    if k.family != GAUSSIAN:
        raise ClosedFormError("oracle_direct is defined for the Gaussian weight only")
    if x.d != 1:
        raise CostGuardError(f"oracle_direct is limited to d = 1, got d = {x.d}")
    if x.n > 4:
        raise CostGuardError(f"oracle_direct is limited to n <= 4, got n = {x.n}")
    lam = k.lam
    n = x.n
    w_obs = x.data  # (n, 2)
    w_perp = np.column_stack([-w_obs[:, 1], w_obs[:, 0]])
    half_width = 2.0 * np.sqrt(np.log(1e12) * lam)

    thetas = -np.pi + (np.arange(theta_points) + 0.5) * (2.0 * np.pi / theta_points)
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)

    prev = None
    points = grid_points
    for _ in range(max_refinements + 1):
        nodes, weights = gauss_legendre(points).mapped(-half_width, half_width)
        s1, s2 = np.meshgrid(nodes, nodes, indexing="ij")
        grid = np.column_stack([s1.ravel(), s2.ravel()])
        gauss_w = (
            np.outer(weights, weights).ravel()
            * np.exp(-(grid**2).sum(axis=1) / (4.0 * lam))
            / (4.0 * np.pi * lam)
        )
        p = grid @ w_obs.T  # (m, n) phases s . W_j
        q = grid @ w_perp.T
        phi = np.exp(1j * p).mean(axis=1)
        acc = 0.0
        for m in range(theta_points):
            phi_rot = np.exp(1j * (cos_t[m] * p + sin_t[m] * q)).mean(axis=1)
            diff = phi - phi_rot
            acc += float(gauss_w @ (diff.real**2 + diff.imag**2))
        value = n * acc * (2.0 * np.pi / theta_points)
        if prev is not None and abs(value - prev) <= tol * max(1.0, abs(value)):
            return value
        prev = value
        points = int(points * 1.5)
    raise NumericError("oracle_direct did not self-converge; increase grid_points")
