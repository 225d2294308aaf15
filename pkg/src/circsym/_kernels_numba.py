"""numba-compiled implementations of the pairwise hot loops.

Same contracts as _kernels_numpy. All kernels are serial and accumulate in a
fixed order, so results are reproducible bit for bit; nogil lets callers run
independent replicates on threads.
"""

import numba as nb
import numpy as np
from numba import njit

I0E_CROSSOVER = 15.0
FOUR_PI = 4.0 * np.pi


@njit(cache=True)
def _i0e_scalar(t):
    if t <= I0E_CROSSOVER:
        q = 0.25 * t * t
        term = 1.0
        total = 1.0
        for k in range(1, 46):
            term = term * q / (k * k)
            total += term
        return np.exp(-t) * total
    inv8t = 1.0 / (8.0 * t)
    term = 1.0
    total = 1.0
    for k in range(1, 40):
        nxt = term * ((2 * k - 1) ** 2) * inv8t / k
        if nxt >= term:
            break
        total += nxt
        term = nxt
    return total / np.sqrt(2.0 * np.pi * t)


@nb.vectorize(["float64(float64)"], cache=True, nopython=True)
def i0e(t):
    return _i0e_scalar(t)


@njit(cache=True, nogil=True)
def gaussian_stat_sums(norms_sq, c, s, lam):
    n = norms_sq.shape[0]
    sum_exp = 0.0
    sum_bes = 0.0
    for j in range(n):
        nj = norms_sq[j]
        for k in range(n):
            a = nj + norms_sq[k]
            cjk = c[j, k]
            sum_exp += np.exp(lam * (2.0 * cjk - a))
            z = 2.0 * lam * np.sqrt(cjk * cjk + s[j, k] * s[j, k])
            sum_bes += np.exp(z - lam * a) * _i0e_scalar(z)
    return sum_exp, sum_bes


@njit(cache=True, nogil=True)
def bootstrap_exp_sums(norms_sq, c, s, lam, cos_ang, sin_ang):
    nrep, n = cos_ang.shape
    out = np.empty(nrep)
    for b in range(nrep):
        acc = 0.0
        for j in range(n):
            nj = norms_sq[j]
            cj = cos_ang[b, j]
            sj = sin_ang[b, j]
            for k in range(n):
                a = nj + norms_sq[k]
                cos_d = cj * cos_ang[b, k] + sj * sin_ang[b, k]
                sin_d = cj * sin_ang[b, k] - sj * cos_ang[b, k]
                c_rot = c[j, k] * cos_d + s[j, k] * sin_d
                acc += np.exp(lam * (2.0 * c_rot - a))
        out[b] = acc
    return out


@njit(cache=True, inline="always")
def _psi_sq_scalar(xsq, rate, mu):
    if xsq < 0.0:
        xsq = 0.0
    if mu == 2.0:
        return np.exp(-rate * xsq)
    return np.exp(-rate * xsq ** (0.5 * mu))


@njit(cache=True, nogil=True)
def profile_sums(norms_sq, c, s, rate, mu, thetas):
    n = norms_sq.shape[0]
    ng = thetas.shape[0]
    base = 0.0
    for j in range(n):
        nj = norms_sq[j]
        for k in range(n):
            base += _psi_sq_scalar(nj + norms_sq[k] - 2.0 * c[j, k], rate, mu)
    out = np.empty(ng)
    for g in range(ng):
        ct = np.cos(thetas[g])
        st = np.sin(thetas[g])
        acc = 0.0
        for j in range(n):
            nj = norms_sq[j]
            for k in range(n):
                b = nj + norms_sq[k] - 2.0 * (c[j, k] * ct + s[j, k] * st)
                acc += _psi_sq_scalar(b, rate, mu)
        out[g] = base - acc
    return out


@njit(cache=True, nogil=True)
def stable_stat_sum(norms_sq, c, s, lam, mu, t_nodes, t_weights):
    n = norms_sq.shape[0]
    nq = t_nodes.shape[0]
    cos_t = np.cos(t_nodes)
    total = 0.0
    for j in range(n):
        nj = norms_sq[j]
        for k in range(n):
            a = nj + norms_sq[k]
            cjk = c[j, k]
            r = np.sqrt(cjk * cjk + s[j, k] * s[j, k])
            inner = 0.0
            for q in range(nq):
                inner += t_weights[q] * _psi_sq_scalar(a - 2.0 * r * cos_t[q], lam, mu)
            total += FOUR_PI * _psi_sq_scalar(a - 2.0 * cjk, lam, mu) - 4.0 * inner
    return total
