"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def _sinc(x):
    # np.sinc is the normalized sinc
    return np.sinc(x / np.pi)


def cos2_spectrum(nu, duration):
    nu = np.asarray(nu, dtype=np.float64)
    T = float(duration)
    a = 2.0 * np.pi / T
    thr = 0.05 * a
    near = (np.abs(nu) < thr) | (np.abs(nu - a) < thr) | (np.abs(nu + a) < thr)
    out = np.empty_like(nu)
    n = nu[near]
    out[near] = 0.5 * T * (_sinc(0.5 * n * T)
                           + 0.5 * _sinc(0.5 * (n + a) * T)
                           + 0.5 * _sinc(0.5 * (n - a) * T))
    f = nu[~near]
    out[~near] = np.sin(0.5 * f * T) * a * a / (f * (a * a - f * f))
    return out


def cos2_overlap(u, dur_i, c_i, dur_j, c_j, kappa, nodes, weights):
    u = np.asarray(u, dtype=np.float64)
    shape = u.shape
    u = u.ravel()
    lo = np.maximum(c_j - 0.5 * dur_j, c_i - 0.5 * dur_i - u)
    hi = np.minimum(c_j + 0.5 * dur_j, c_i + 0.5 * dur_i - u)
    ok = hi > lo
    mid = 0.5 * (hi + lo)
    half = np.where(ok, 0.5 * (hi - lo), 0.0)
    v = mid[:, None] + half[:, None] * np.asarray(nodes)[None, :]
    ei = np.cos(np.pi / dur_i * (u[:, None] + v - c_i))
    ej = np.cos(np.pi / dur_j * (v - c_j))
    s = (np.asarray(weights)[None, :] * (ei * ei) * (ej * ej) * np.exp(1j * kappa * v)).sum(axis=1)
    return (half * s).reshape(shape)
