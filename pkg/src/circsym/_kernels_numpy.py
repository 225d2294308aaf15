"""Pure-numpy implementations of the pairwise hot loops.

Mirrors _kernels_numba and is selected when CIRCSYM_BACKEND=numpy or when
numba is unavailable. Conventions shared by both backends:

* ``norms_sq`` has shape (n,), ``c`` and ``s`` have shape (n, n)
* every exponent fed to exp() is <= 0, so nothing here can overflow
* squared distances may go an ulp negative and are clamped at 0
"""

import numpy as np

I0E_CROSSOVER = 15.0
FOUR_PI = 4.0 * np.pi


def i0e(t):
    """exp(-t) * I0(t) elementwise for t >= 0.

    Power series below the crossover, asymptotic series with optimal
    truncation above it. Absolute error stays below 1e-13 on both branches.
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.empty(t.shape, dtype=np.float64)
    tf = np.atleast_1d(t)
    of = np.atleast_1d(out)

    small = tf <= I0E_CROSSOVER
    if small.any():
        ts = tf[small]
        q = 0.25 * ts * ts
        term = np.ones_like(ts)
        total = np.ones_like(ts)
        for k in range(1, 46):
            term = term * q / (k * k)
            total += term
        of[small] = np.exp(-ts) * total

    big = ~small
    if big.any():
        tb = tf[big]
        inv8t = 1.0 / (8.0 * tb)
        term = np.ones_like(tb)
        total = np.ones_like(tb)
        active = np.ones(tb.shape, dtype=bool)
        for k in range(1, 40):
            nxt = term * ((2 * k - 1) ** 2) * inv8t / k
            active &= nxt < term
            term = np.where(active, nxt, 0.0)
            total += term
            if not active.any():
                break
        of[big] = total / np.sqrt(2.0 * np.pi * tb)

    if t.ndim == 0:
        return float(out)
    return out


def gaussian_stat_sums(norms_sq, c, s, lam):
    """Return (sum_exp, sum_bes) over all ordered pairs (j, k).

    sum_exp = sum exp(-lam * ||W_j - W_k||^2)
    sum_bes = sum exp(-lam * (N_j + N_k)) * I0(2 lam sqrt(c^2 + s^2))
    """
    a = norms_sq[:, None] + norms_sq[None, :]
    sum_exp = float(np.exp(lam * (2.0 * c - a)).sum())
    z = 2.0 * lam * np.sqrt(c * c + s * s)
    sum_bes = float((np.exp(z - lam * a) * i0e(z)).sum())
    return sum_exp, sum_bes


def bootstrap_exp_sums(norms_sq, c, s, lam, cos_ang, sin_ang):
    """exp-term sums for a batch of phase-rotated samples.

    cos_ang and sin_ang have shape (B, n); row b holds cos/sin of the angles
    applied to each observation in replicate b. The Bessel term of the
    statistic is rotation invariant and is not recomputed here.
    """
    a = norms_sq[:, None] + norms_sq[None, :]
    nrep = cos_ang.shape[0]
    out = np.empty(nrep)
    for b in range(nrep):
        cp = cos_ang[b]
        sp = sin_ang[b]
        cos_d = np.outer(cp, cp) + np.outer(sp, sp)
        sin_d = np.outer(cp, sp) - np.outer(sp, cp)
        c_rot = c * cos_d + s * sin_d
        out[b] = np.exp(lam * (2.0 * c_rot - a)).sum()
    return out


def _psi_of_sq(xsq, rate, mu):
    xsq = np.maximum(xsq, 0.0)
    if mu == 2.0:
        return np.exp(-rate * xsq)
    return np.exp(-rate * xsq ** (0.5 * mu))


def profile_sums(norms_sq, c, s, rate, mu, thetas):
    """sum_jk [psi(||W_j - W_k||) - psi(||W_j - M_theta W_k||)] per grid angle,
    with psi(xi) = exp(-rate * xi^mu)."""
    a = norms_sq[:, None] + norms_sq[None, :]
    base = float(_psi_of_sq(a - 2.0 * c, rate, mu).sum())
    out = np.empty(len(thetas))
    for g, th in enumerate(thetas):
        b = a - 2.0 * (c * np.cos(th) + s * np.sin(th))
        out[g] = base - float(_psi_of_sq(b, rate, mu).sum())
    return out


def stable_stat_sum(norms_sq, c, s, lam, mu, t_nodes, t_weights):
    """n * T for the angular-quadrature form of the statistic.

    Per pair: 4 pi psi(||W_j - W_k||) - 2 * (2 * sum_q w_q psi(sqrt(b(t_q))))
    where b(t) = N_j + N_k - 2 sqrt(c^2 + s^2) cos t and the nodes live on
    [0, pi] (the angular integrand is even around 0, hence the doubling).
    """
    a = norms_sq[:, None] + norms_sq[None, :]
    direct = FOUR_PI * _psi_of_sq(a - 2.0 * c, lam, mu).sum()
    r = np.sqrt(c * c + s * s)
    inner = np.zeros_like(a)
    for t, w in zip(t_nodes, t_weights):
        inner += w * _psi_of_sq(a - 2.0 * r * np.cos(t), lam, mu)
    return float(direct - 4.0 * inner.sum())
