"""Independent oracles the tests check the package against.

Deliberately written from scratch (subset DP, dense eigendecomposition
exponentials, explicit Kronecker products) so they share no code path
with the implementations under test.
"""

import numpy as np

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
XX = np.kron(X, X)
YY = np.kron(Y, Y)


def expm_hermitian(h, t):
    """exp(-i t h) for Hermitian h via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def held_karp_cycle(dist, start=0):
    """Exact minimum cycle cost through all cities, anchored at start."""
    n = len(dist)
    others = [c for c in range(n) if c != start]
    k = len(others)
    dp = {}
    for i in range(k):
        dp[(1 << i, i)] = dist[start][others[i]]
    for mask in range(1, 1 << k):
        for i in range(k):
            if not mask & (1 << i) or (mask, i) not in dp:
                continue
            base = dp[(mask, i)]
            for j in range(k):
                if mask & (1 << j):
                    continue
                nm = mask | (1 << j)
                cand = base + dist[others[i]][others[j]]
                if cand < dp.get((nm, j), np.inf):
                    dp[(nm, j)] = cand
    full = (1 << k) - 1
    return min(dp[(full, i)] + dist[others[i]][start] for i in range(k))


def dense_block_mixer(n, angle):
    """exp(-i angle A(K_n)) on one block, via eigendecomposition."""
    return expm_hermitian(np.ones((n, n)) - np.eye(n), angle)


def kron_mixer(n, m, angle):
    """Full D x D mixer as an explicit Kronecker product, block 0 leftmost."""
    u = dense_block_mixer(n, angle)
    out = u
    for _ in range(m - 1):
        out = np.kron(out, u)
    return out


def random_symmetric_instance(n_cities, seed, lo=1.0, hi=10.0):
    rng = np.random.default_rng(seed)
    m = rng.uniform(lo, hi, (n_cities, n_cities))
    m = (m + m.T) / 2.0
    np.fill_diagonal(m, 0.0)
    return m


def random_asymmetric_instance(n_cities, seed, lo=1.0, hi=10.0):
    rng = np.random.default_rng(seed)
    m = rng.uniform(lo, hi, (n_cities, n_cities))
    np.fill_diagonal(m, 0.0)
    return m
