"""Pure-numpy versions of the hot loops (used when numba is disabled)."""

import numpy as np

MASK32 = np.uint64(0xFFFFFFFF)
PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = np.uint64(0x9E3779B9)
PHILOX_W1 = np.uint64(0xBB67AE85)
TWO_M32 = 2.0 ** -32


def survival_log(n, p):
    q = 1.0 - p
    f = np.zeros(n + 2)
    f[0] = 1.0
    out = np.empty(n + 1)
    out[0] = 0.0
    acc = 0.0
    for m in range(n):
        top = m + 1
        g = np.zeros(n + 2)
        g[1 : top + 1] += p * f[:top]
        g[: top + 1] += q * f[1 : top + 2]
        total = g[: top + 1].sum()
        if total == 0.0:
            out[m + 1 :] = -np.inf
            return out
        acc += np.log(total)
        out[m + 1] = acc
        f = g / total
    return out


def dense_onedim(k, p):
    q = 1.0 - p
    R = k // 2 + 1
    off = k + 1
    alive = np.zeros((k + 2, R + 1))
    dead = np.zeros((2 * k + 3, R + 1))
    alive[0, 0] = 1.0
    for _ in range(k):
        na = np.zeros_like(alive)
        nd = np.zeros_like(dead)
        na[1:, :] += p * alive[:-1, :]
        na[1:-1, :] += q * alive[2:, :]
        # x = 1 -> 0 is a return
        na[0, 1:] += q * alive[1, :-1]
        nd[off - 1, :] += q * alive[0, :]
        nd[1:, :] += p * dead[:-1, :]
        nd[:-1, :] += q * dead[1:, :]
        # everything that landed on 0 from +-1 counts one more return
        landed = nd[off, :].copy()
        nd[off, :] = 0.0
        nd[off, 1:] = landed[:-1]
        alive, dead = na, nd
    zt_st = alive[0, :R].copy()
    zt_sf = dead[off, :R].copy()
    zf_st = alive[1 : k + 1, :R].sum(axis=0)
    zf_sf = dead[1 : 2 * k + 2, :R].sum(axis=0) - dead[off, :R]
    return zt_st, zt_sf, zf_st, zf_sf


def philox4x32(c0, c1, c2, c3, k0, k1):
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3))
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    for _ in range(10):
        prod0 = PHILOX_M0 * c0
        prod1 = PHILOX_M1 * c2
        hi0, lo0 = prod0 >> np.uint64(32), prod0 & MASK32
        hi1, lo1 = prod1 >> np.uint64(32), prod1 & MASK32
        c0, c1, c2, c3 = (hi1 ^ c1 ^ k0), lo1, (hi0 ^ c3 ^ k1), lo0
        k0 = (k0 + PHILOX_W0) & MASK32
        k1 = (k1 + PHILOX_W1) & MASK32
    return c0, c1, c2, c3


def simulate_block(seed, start, count, n, t0, t1, t2):
    trial = np.arange(count, dtype=np.uint64) + np.uint64(start)
    c1 = trial & MASK32
    c2 = trial >> np.uint64(32)
    zero = np.zeros(count, dtype=np.uint64)
    k0 = np.uint64(seed) & MASK32
    k1 = (np.uint64(seed) >> np.uint64(32)) & MASK32
    x = np.zeros(count, dtype=np.int32)
    y = np.zeros(count, dtype=np.int32)
    a = np.zeros(count, dtype=np.int32)
    b = np.zeros(count, dtype=np.int32)
    ok = np.ones(count, dtype=np.bool_)
    words = None
    for j in range(n):
        lane = j & 3
        if lane == 0:
            words = philox4x32(zero + np.uint64(j >> 2), c1, c2, zero, k0, k1)
        v = (words[lane].astype(np.float64) + 0.5) * TWO_M32
        east = v < t0
        west = ~east & (v < t1)
        north = ~east & ~west & (v < t2)
        south = ~(east | west | north)
        x += east.astype(np.int32) - west.astype(np.int32)
        y += north.astype(np.int32) - south.astype(np.int32)
        a += ((east | west) & (x == 0)).astype(np.int32)
        b += ((north | south) & (y == 0)).astype(np.int32)
        ok &= (x >= 0) & (y >= 0)
    return a, b, x, y, ok
