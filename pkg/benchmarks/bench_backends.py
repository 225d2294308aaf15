"""Time the hot kernels under both backends and print a comparison table.

Run from the repository root:

    python3 benchmarks/bench_backends.py [--n 400] [--b 200] [--repeat 5]

The script re-executes itself in a subprocess per backend with
CIRCSYM_BACKEND set, because the flag is read once at import time. Timings
are the best of --repeat runs after one warmup (the warmup also absorbs
numba compilation, which the on-disk cache makes a one-time cost).
"""

import argparse
import json
import os
import subprocess
import sys
import time


def build_inputs(n, b, seed=0):
    import numpy as np

    from circsym import ComplexSample, pairwise_summaries
    from circsym.numerics import gauss_legendre

    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))) / np.sqrt(2.0)
    x = ComplexSample.from_complex(z)
    ps = pairwise_summaries(x)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(b, n))
    thetas = np.linspace(-np.pi, np.pi, 181, endpoint=False)
    rule = gauss_legendre(128)
    t_nodes = 0.5 * np.pi * (rule.nodes + 1.0)
    t_weights = 0.5 * np.pi * rule.weights
    return x, ps, angles, thetas, t_nodes, t_weights


def run_cases(n, b, repeat):
    import numpy as np

    from circsym import _backend, _kernels
    from circsym import BootstrapConfig, KernelSpec, bootstrap_test

    x, ps, angles, thetas, t_nodes, t_weights = build_inputs(n, b)
    lam = 1.0
    cos_a, sin_a = np.cos(angles), np.sin(angles)

    cases = {
        "i0e (1e6 values)": lambda: _kernels.i0e(np.linspace(0.0, 50.0, 1_000_000)),
        f"gaussian sums (n={n})": lambda: _kernels.gaussian_stat_sums(
            ps.norms_sq, ps.c, ps.s, lam
        ),
        f"bootstrap sums (B={b})": lambda: _kernels.bootstrap_exp_sums(
            ps.norms_sq, ps.c, ps.s, lam, cos_a, sin_a
        ),
        "profile (181 angles)": lambda: _kernels.profile_sums(
            ps.norms_sq, ps.c, ps.s, lam, 2.0, thetas
        ),
        "stable quad (128 nodes)": lambda: _kernels.stable_stat_sum(
            ps.norms_sq, ps.c, ps.s, lam, 1.0, t_nodes, t_weights
        ),
        f"full test (n={n}, B={b})": lambda: bootstrap_test(
            x, KernelSpec.gaussian(lam), BootstrapConfig(b=b)
        ),
    }

    results = {"backend": _backend.BACKEND, "timings": {}}
    for name, fn in cases.items():
        fn()  # warmup / compile
        best = min(_timed(fn) for _ in range(repeat))
        results["timings"][name] = best
    return results


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def run_child(backend, args):
    env = dict(os.environ, CIRCSYM_BACKEND=backend)
    cmd = [
        sys.executable, os.path.abspath(__file__), "--child",
        "--n", str(args.n), "--b", str(args.b), "--repeat", str(args.repeat),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"backend {backend!r} failed")
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=400, help="sample size")
    parser.add_argument("--b", type=int, default=200, help="bootstrap replicates")
    parser.add_argument("--repeat", type=int, default=5, help="timed runs per case")
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        print(json.dumps(run_cases(args.n, args.b, args.repeat)))
        return

    numpy_res = run_child("numpy", args)
    numba_res = run_child("numba", args)

    width = max(len(k) for k in numpy_res["timings"]) + 2
    print(f"{'case':<{width}}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    print("-" * (width + 34))
    for name, t_np in numpy_res["timings"].items():
        t_nb = numba_res["timings"][name]
        print(f"{name:<{width}}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
