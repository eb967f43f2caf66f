"""numba-compiled hot loops. Must stay numerically identical to _numpy_kernels."""

import numpy as np
from numba import njit

MASK32 = np.uint64(0xFFFFFFFF)
PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = np.uint64(0x9E3779B9)
PHILOX_W1 = np.uint64(0xBB67AE85)
TWO_M32 = 2.0 ** -32


@njit(cache=True)
def survival_log(n, p):
    q = 1.0 - p
    f = np.zeros(n + 2)
    g = np.zeros(n + 2)
    f[0] = 1.0
    out = np.empty(n + 1)
    out[0] = 0.0
    acc = 0.0
    for m in range(n):
        top = m + 1
        for x in range(top + 1):
            v = 0.0
            if x >= 1:
                v += p * f[x - 1]
            v += q * f[x + 1]
            g[x] = v
        total = 0.0
        for x in range(top + 1):
            total += g[x]
        if total == 0.0:
            for i in range(m + 1, n + 1):
                out[i] = -np.inf
            return out
        acc += np.log(total)
        out[m + 1] = acc
        inv = 1.0 / total
        for x in range(top + 1):
            f[x] = g[x] * inv
        f[top + 1] = 0.0
    return out


@njit(cache=True)
def dense_onedim(k, p):
    q = 1.0 - p
    R = k // 2 + 1
    off = k + 1
    alive = np.zeros((k + 2, R))
    dead = np.zeros((2 * k + 3, R))
    nalive = np.zeros((k + 2, R))
    ndead = np.zeros((2 * k + 3, R))
    alive[0, 0] = 1.0
    for j in range(k):
        rtop = j // 2
        for x in range(j + 2):
            for r in range(rtop + 2 if rtop + 2 <= R else R):
                nalive[x, r] = 0.0
        for x in range(-j - 1, j + 2):
            for r in range(rtop + 2 if rtop + 2 <= R else R):
                ndead[x + off, r] = 0.0
        for x in range(j + 1):
            for r in range(rtop + 1):
                v = alive[x, r]
                if v == 0.0:
                    continue
                nalive[x + 1, r] += p * v
                if x >= 2:
                    nalive[x - 1, r] += q * v
                elif x == 1:
                    nalive[0, r + 1] += q * v
                else:
                    ndead[off - 1, r] += q * v
        for x in range(-j, j + 1):
            for r in range(rtop + 1):
                v = dead[x + off, r]
                if v == 0.0:
                    continue
                if x + 1 == 0:
                    ndead[off, r + 1] += p * v
                else:
                    ndead[x + 1 + off, r] += p * v
                if x - 1 == 0:
                    ndead[off, r + 1] += q * v
                else:
                    ndead[x - 1 + off, r] += q * v
        alive, nalive = nalive, alive
        dead, ndead = ndead, dead
    zt_st = alive[0, :].copy()
    zt_sf = dead[off, :].copy()
    zf_st = np.zeros(R)
    zf_sf = np.zeros(R)
    for x in range(1, k + 1):
        for r in range(R):
            zf_st[r] += alive[x, r]
    for x in range(-k, k + 1):
        if x == 0:
            continue
        for r in range(R):
            zf_sf[r] += dead[x + off, r]
    return zt_st, zt_sf, zf_st, zf_sf


@njit(cache=True)
def _mulhilo(a, b):
    prod = a * b
    return prod >> np.uint64(32), prod & MASK32


@njit(cache=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        hi0, lo0 = _mulhilo(PHILOX_M0, c0)
        hi1, lo1 = _mulhilo(PHILOX_M1, c2)
        c0, c1, c2, c3 = (hi1 ^ c1 ^ k0), lo1, (hi0 ^ c3 ^ k1), lo0
        k0 = (k0 + PHILOX_W0) & MASK32
        k1 = (k1 + PHILOX_W1) & MASK32
    return c0, c1, c2, c3


@njit(cache=True, nogil=True)
def simulate_block(seed, start, count, n, t0, t1, t2):
    r1 = np.zeros(count, dtype=np.int32)
    r2 = np.zeros(count, dtype=np.int32)
    xs = np.zeros(count, dtype=np.int32)
    ys = np.zeros(count, dtype=np.int32)
    alive = np.ones(count, dtype=np.bool_)
    k0 = np.uint64(seed) & MASK32
    k1 = (np.uint64(seed) >> np.uint64(32)) & MASK32
    u = np.empty(4)
    for t in range(count):
        trial = np.uint64(start + t)
        c1 = trial & MASK32
        c2 = trial >> np.uint64(32)
        x = 0
        y = 0
        a = 0
        b = 0
        ok = True
        for j in range(n):
            lane = j & 3
            if lane == 0:
                w0, w1, w2, w3 = philox4x32(
                    np.uint64(j >> 2), c1, c2, np.uint64(0), k0, k1
                )
                u[0] = (float(w0) + 0.5) * TWO_M32
                u[1] = (float(w1) + 0.5) * TWO_M32
                u[2] = (float(w2) + 0.5) * TWO_M32
                u[3] = (float(w3) + 0.5) * TWO_M32
            v = u[lane]
            if v < t0:
                x += 1
                if x == 0:
                    a += 1
            elif v < t1:
                x -= 1
                if x == 0:
                    a += 1
            elif v < t2:
                y += 1
                if y == 0:
                    b += 1
            else:
                y -= 1
                if y == 0:
                    b += 1
            if x < 0 or y < 0:
                ok = False
        r1[t] = a
        r2[t] = b
        xs[t] = x
        ys[t] = y
        alive[t] = ok
    return r1, r2, xs, ys, alive
