"""Data-generating processes and the Monte Carlo level/power harness."""

from __future__ import annotations

import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap_test
from .exceptions import ConfigError, DomainError
from .kernel import GAUSSIAN, STABLE, KernelSpec
from .numerics import RngStream, psd_factor
from .statistic import ComplexSample

log = logging.getLogger(__name__)

#: seed for the single uniform matrix A behind the high-dimensional process.
#: Power against this process depends strongly on the particular draw of A,
#: so it is fixed once here rather than per run.
DEFAULT_A_SEED = 7


class DistributionSpec:
    """Base class for the sampleable distributions of complex vectors."""

    @property
    def d(self) -> int:
        raise NotImplementedError

    def _draw(self, n: int, rng: np.random.Generator) -> ComplexSample:
        raise NotImplementedError


@dataclass(frozen=True)
class ScalarGaussianRho(DistributionSpec):
    """Scalar complex Gaussian with circularity quotient rho.

    E|Z|^2 = czz and E[Z^2] = rho * czz. Writing rho = rho_x + i rho_y, the
    real and imaginary parts have variances czz (1 +- rho_x)/2 and
    correlation rho_y / sqrt(1 - rho_x^2); |rho_x| = 1 collapses one part to
    zero (the perfectly correlated degenerate case). Circular iff rho = 0.
    """

    rho: complex = 0.0
    czz: float = 1.0

    def __post_init__(self):
        rho = complex(self.rho)
        if not np.isfinite(rho.real) or not np.isfinite(rho.imag):
            raise DomainError("rho must be finite")
        if abs(rho) > 1.0 + 1e-12:
            raise DomainError(f"|rho| must be <= 1, got {abs(rho):.6f}")
        if not np.isfinite(self.czz) or self.czz <= 0.0:
            raise DomainError(f"czz must be positive, got {self.czz!r}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "czz", float(self.czz))

    @property
    def d(self) -> int:
        return 1

    def _draw(self, n, rng):
        rho_x = self.rho.real
        rho_y = self.rho.imag
        var_x = 0.5 * self.czz * (1.0 + rho_x)
        var_y = 0.5 * self.czz * (1.0 - rho_x)
        if abs(rho_x) >= 1.0:
            corr = 1.0 if rho_x >= 1.0 else -1.0
        else:
            corr = rho_y / np.sqrt(1.0 - rho_x * rho_x)
        corr = min(1.0, max(-1.0, corr))
        g = rng.standard_normal((n, 2))
        x = np.sqrt(var_x) * g[:, 0]
        y = np.sqrt(var_y) * (corr * g[:, 0] + np.sqrt(max(0.0, 1.0 - corr * corr)) * g[:, 1])
        return ComplexSample(np.column_stack([x, y]))


@dataclass(frozen=True)
class ShiftedCN2(DistributionSpec):
    """Standard circular complex normal in C^2 shifted by (u, u).

    Each coordinate is u + (g1 + i g2)/sqrt(2) with independent standard
    normals, so the covariance is the identity; circular iff u = 0.
    """

    u: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.u):
            raise DomainError(f"u must be finite, got {self.u!r}")
        object.__setattr__(self, "u", float(self.u))

    @property
    def d(self) -> int:
        return 2

    def _draw(self, n, rng):
        g = rng.standard_normal((n, 4)) / np.sqrt(2.0)
        g[:, :2] += self.u
        return ComplexSample(g)


@dataclass(frozen=True)
class Discrete4(DistributionSpec):
    """Uniform on the four points {1+i, 1-i, -1+i, -1-i}.

    Proper (mean zero, E[Z^2] = 0) but not circularly symmetric: rotating
    the support by e^{i pi/4} moves it off itself.
    """

    SUPPORT = (1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j)

    @property
    def d(self) -> int:
        return 1

    def _draw(self, n, rng):
        idx = rng.integers(0, 4, size=n)
        z = np.asarray(self.SUPPORT, dtype=np.complex128)[idx]
        return ComplexSample.from_complex(z)


@dataclass(frozen=True)
class CircleUniform(DistributionSpec):
    """e^{i Phi} with Phi uniform: circularly symmetric, lives on the circle."""

    @property
    def d(self) -> int:
        return 1

    def _draw(self, n, rng):
        phi = rng.uniform(-np.pi, np.pi, n)
        return ComplexSample(np.column_stack([np.cos(phi), np.sin(phi)]))


@dataclass(frozen=True)
class Contaminated(DistributionSpec):
    """P e^{i Theta} with P uniform on [0, 1] and a contaminated angle law.

    Theta is 0, 2 pi/3 or 4 pi/3 with probability 1/6 each and 2 pi U with
    probability 1/2, so half the mass clumps on three directions. E|Z|^2 = 1/3.
    """

    @property
    def d(self) -> int:
        return 1

    def _draw(self, n, rng):
        radius = rng.uniform(0.0, 1.0, n)
        cat = rng.uniform(0.0, 1.0, n)
        u = rng.uniform(0.0, 1.0, n)
        theta = np.where(
            cat < 1.0 / 6.0,
            0.0,
            np.where(
                cat < 2.0 / 6.0,
                2.0 * np.pi / 3.0,
                np.where(cat < 3.0 / 6.0, 4.0 * np.pi / 3.0, 2.0 * np.pi * u),
            ),
        )
        return ComplexSample(
            np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
        )


@functools.lru_cache(maxsize=8)
def _highdim_factor(d: int, a_seed: int):
    """PSD factor of the augmented real covariance for HighDimCN.

    The complex covariance is the all-ones matrix Gamma and the
    pseudo-covariance is P = i A^T A with A uniform on [0,1]^{d x d} drawn
    once from a_seed. The real (X, Y) covariance blocks are

        Cov(X, X) = (Re Gamma + Re P) / 2
        Cov(Y, Y) = (Re Gamma - Re P) / 2
        Cov(X, Y) = (Im P - Im Gamma) / 2

    For d >= 2 this block matrix is indefinite for every draw of A (any
    vector orthogonal to the ones vector exposes a negative direction), so
    it is projected onto the PSD cone by clipping negative eigenvalues; the
    clip count and most negative eigenvalue are logged.
    """
    rng = RngStream(a_seed, 0).generator()
    a = rng.uniform(0.0, 1.0, (d, d))
    q = a.T @ a
    ones = np.ones((d, d))
    cxx = 0.5 * ones
    cyy = 0.5 * ones
    cxy = 0.5 * q
    aug = np.block([[cxx, cxy], [cxy.T, cyy]])
    fac = psd_factor(aug, tol=np.inf)
    log.debug(
        "highdim d=%d a_seed=%d: clipped %d eigenvalues, min %.4f",
        d,
        a_seed,
        fac.clipped,
        fac.min_eigenvalue,
    )
    return fac


@dataclass(frozen=True)
class HighDimCN(DistributionSpec):
    """Noncircular complex normal in C^d with an all-ones covariance and a
    random-but-fixed imaginary pseudo-covariance (see _highdim_factor)."""

    dim: int = 2
    a_seed: int = DEFAULT_A_SEED

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        if not isinstance(self.a_seed, (int, np.integer)):
            raise DomainError(f"a_seed must be an integer, got {self.a_seed!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "a_seed", int(self.a_seed))

    @property
    def d(self) -> int:
        return self.dim

    def _draw(self, n, rng):
        fac = _highdim_factor(self.dim, self.a_seed)
        g = rng.standard_normal((n, 2 * self.dim))
        return ComplexSample(g @ fac.factor.T)


def sample(spec: DistributionSpec, n: int, stream: RngStream) -> ComplexSample:
    """Draw n observations from spec using the given stream."""
    if not isinstance(spec, DistributionSpec):
        raise DomainError(f"spec must be a DistributionSpec, got {type(spec).__name__}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return spec._draw(int(n), stream.generator())


def level_power_cell(
    spec: DistributionSpec,
    n: int,
    k: KernelSpec,
    m: int,
    cfg: BootstrapConfig,
    alpha: float,
    stream: RngStream,
    workers: int = 1,
) -> float:
    """Rejection rate over m Monte Carlo replications of the bootstrap test.

    Replication i draws its data from stream.child(2 i) and seeds its
    bootstrap from stream.child(2 i + 1), so the estimate is reproducible
    and independent of the worker count.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise DomainError(f"workers must be a positive integer, got {workers!r}")

    def one(i: int) -> bool:
        data = sample(spec, n, stream.child(2 * i))
        cfg_i = replace(cfg, seed=stream.child(2 * i + 1).as_seed(), keep_replicates=False)
        return bootstrap_test(data, k, cfg_i).p_value <= alpha

    if workers == 1:
        hits = sum(one(i) for i in range(int(m)))
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            hits = sum(pool.map(one, range(int(m))))
    return hits / float(m)


_DISTRIBUTION_KINDS = (
    "scalar-gaussian",
    "shifted-cn2",
    "discrete4",
    "circle-uniform",
    "contaminated",
    "highdim-cn",
)

#: config keys that may carry the varying column of a study table
_AXIS_KEYS = ("lambda", "u", "d", "rho")


def make_distribution(kind: str, params: dict) -> DistributionSpec:
    """Build a DistributionSpec from a kind name and keyword parameters."""
    kind = kind.strip().lower()
    params = dict(params)
    if kind == "scalar-gaussian":
        spec = ScalarGaussianRho(rho=params.pop("rho", 0.0), czz=params.pop("czz", 1.0))
    elif kind == "shifted-cn2":
        spec = ShiftedCN2(u=params.pop("u", 0.0))
    elif kind == "discrete4":
        spec = Discrete4()
    elif kind == "circle-uniform":
        spec = CircleUniform()
    elif kind == "contaminated":
        spec = Contaminated()
    elif kind == "highdim-cn":
        spec = HighDimCN(
            dim=params.pop("d", 2), a_seed=params.pop("a_seed", DEFAULT_A_SEED)
        )
    else:
        raise ConfigError(f"unknown distribution {kind!r}")
    if params:
        raise ConfigError(
            f"distribution {kind!r} does not accept key(s) {sorted(params)}"
        )
    return spec


@dataclass(frozen=True)
class StudySpec:
    """One rows-by-columns Monte Carlo study.

    Rows are sample sizes; columns vary exactly one of lambda, u, d or rho.
    Whatever does not vary comes from `lam`, `mu` and `params`.
    """

    distribution: str
    ns: tuple[int, ...]
    column_axis: str
    column_values: tuple
    lam: float = 1.0
    mu: float = 2.0
    m: int = 1000
    b: int = 200
    alpha: float = 0.05
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.distribution not in _DISTRIBUTION_KINDS:
            raise ConfigError(f"unknown distribution {self.distribution!r}")
        if len(self.ns) == 0 or len(self.column_values) == 0:
            raise ConfigError("empty grid")
        if any((not isinstance(n, (int, np.integer))) or n < 1 for n in self.ns):
            raise ConfigError(f"sample sizes must be positive integers, got {self.ns}")
        if self.column_axis not in _AXIS_KEYS:
            raise ConfigError(f"unknown column axis {self.column_axis!r}")


@dataclass(frozen=True)
class PowerTable:
    """Monte Carlo rejection rates with standard errors."""

    ns: tuple[int, ...]
    column_axis: str
    column_values: tuple
    rates: np.ndarray
    std_errors: np.ndarray
    m: int
    b: int
    alpha: float
    seed: int


def _cell_pieces(study: StudySpec, value):
    """(DistributionSpec, KernelSpec) for one column value."""
    params = dict(study.params)
    lam = study.lam
    if study.column_axis == "lambda":
        lam = float(value)
    elif study.column_axis in ("u", "rho"):
        params[study.column_axis] = value
    elif study.column_axis == "d":
        params["d"] = int(value)
    dist = make_distribution(study.distribution, params)
    if study.mu == 2.0:
        kern = KernelSpec.gaussian(lam)
    else:
        kern = KernelSpec.stable(lam, study.mu)
    return dist, kern


def run_table(study: StudySpec, workers: int = 1, progress=None) -> PowerTable:
    """Run every cell of the study.

    Cell (i, j) uses the substream master.child(i * ncols + j) of the master
    stream (seed, 0): reruns and per-cell reruns reproduce identical rates.
    progress, if given, is called with (n, axis, value, rate) after each cell.
    """
    ni = len(study.ns)
    nj = len(study.column_values)
    rates = np.empty((ni, nj))
    master = RngStream(study.seed, 0)
    cfg = BootstrapConfig(b=study.b, seed=0)
    for i, n in enumerate(study.ns):
        for j, value in enumerate(study.column_values):
            dist, kern = _cell_pieces(study, value)
            cell_stream = master.child(i * nj + j)
            rate = level_power_cell(
                dist, int(n), kern, study.m, cfg, study.alpha, cell_stream, workers
            )
            rates[i, j] = rate
            if progress is not None:
                progress(int(n), study.column_axis, value, rate)
    se = np.sqrt(rates * (1.0 - rates) / study.m)
    return PowerTable(
        ns=tuple(int(n) for n in study.ns),
        column_axis=study.column_axis,
        column_values=tuple(study.column_values),
        rates=rates,
        std_errors=se,
        m=study.m,
        b=study.b,
        alpha=study.alpha,
        seed=study.seed,
    )


_STUDY_KEYS = {
    "distribution",
    "n",
    "lambda",
    "mu",
    "u",
    "d",
    "rho",
    "czz",
    "a_seed",
    "m",
    "b",
    "alpha",
    "seed",
}


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"cannot parse value {text!r}")


def parse_study_config(path: str) -> StudySpec:
    """Parse a key = value study description.

    Lines are `key = value`, `#` starts a comment, commas make a list.
    Exactly one of lambda, u, d, rho may be a list; it becomes the column
    axis (a single lambda still works and gives one column).
    """
    raw: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"expected key = value, got {line!r}", row=lineno)
            key, _, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            if key == "lam":
                key = "lambda"
            if key not in _STUDY_KEYS:
                raise ConfigError(f"unknown key {key!r}", row=lineno)
            if key in raw:
                raise ConfigError(f"duplicate key {key!r}", row=lineno)
            items = [v for v in (piece.strip() for piece in value.split(",")) if v]
            if not items:
                raise ConfigError(f"key {key!r} has no value", row=lineno)
            if key == "distribution":
                if len(items) > 1:
                    raise ConfigError("distribution must be a single value", row=lineno)
                raw[key] = items[0]
                continue
            try:
                parsed = [_parse_scalar(v) for v in items]
            except ConfigError as exc:
                raise ConfigError(f"key {key!r}: {exc}", row=lineno) from None
            raw[key] = parsed if len(parsed) > 1 else parsed[0]

    if "distribution" not in raw:
        raise ConfigError("missing key 'distribution'")
    kind = str(raw.pop("distribution")).strip().lower()
    if "n" not in raw:
        raise ConfigError("missing key 'n'")
    ns = raw.pop("n")
    ns = tuple(ns) if isinstance(ns, list) else (ns,)

    list_axes = [k for k in _AXIS_KEYS if isinstance(raw.get(k), list)]
    if len(list_axes) > 1:
        raise ConfigError(f"only one of {_AXIS_KEYS} may vary, got {list_axes}")
    if list_axes:
        axis = list_axes[0]
        values = tuple(raw.pop(axis))
    else:
        axis = "lambda"
        values = (float(raw.pop("lambda", 1.0)),)

    lam = float(raw.pop("lambda", 1.0)) if axis != "lambda" else 1.0
    mu = float(raw.pop("mu", 2.0))
    m = int(raw.pop("m", 1000))
    b = int(raw.pop("b", 200))
    alpha = float(raw.pop("alpha", 0.05))
    seed = int(raw.pop("seed", 0))
    params = {}
    for key in ("u", "d", "rho", "czz", "a_seed"):
        if key in raw:
            params[key] = raw.pop(key)
    if raw:
        raise ConfigError(f"key(s) {sorted(raw)} are not usable here")
    try:
        study = StudySpec(
            distribution=kind,
            ns=ns,
            column_axis=axis,
            column_values=values,
            lam=lam,
            mu=mu,
            m=m,
            b=b,
            alpha=alpha,
            seed=seed,
            params=params,
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    # fail fast on bad distribution parameters instead of inside the run
    try:
        for value in study.column_values:
            _cell_pieces(study, value)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    return study


def write_table_csv(table: PowerTable, path: str) -> None:
    """Rates as CSV: one row per sample size, one column per grid value."""
    with open(path, "w", encoding="utf-8") as fh:
        header = ",".join(
            ["n"] + [f"{table.column_axis}={v}" for v in table.column_values]
        )
        fh.write(header + "\n")
        for i, n in enumerate(table.ns):
            cells = ",".join(f"{table.rates[i, j]:.4f}" for j in range(len(table.column_values)))
            fh.write(f"{n},{cells}\n")


def write_table_json(table: PowerTable, path: str, study: StudySpec | None = None) -> None:
    """JSON sidecar with seeds and standard errors."""
    import json

    payload = {
        "ns": list(table.ns),
        "column_axis": table.column_axis,
        "column_values": [
            str(v) if isinstance(v, complex) else v for v in table.column_values
        ],
        "rates": table.rates.tolist(),
        "std_errors": table.std_errors.tolist(),
        "m": table.m,
        "b": table.b,
        "alpha": table.alpha,
        "seed": table.seed,
    }
    if study is not None:
        payload["distribution"] = study.distribution
        payload["lambda"] = study.lam
        payload["mu"] = study.mu
        payload["params"] = {
            k: (str(v) if isinstance(v, complex) else v) for k, v in study.params.items()
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
