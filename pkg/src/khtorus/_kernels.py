"""Hot numeric kernels: bulk circle labelling of a braid cube and dense rank mod p.

Each kernel has a numba implementation and a pure-numpy fallback with the
same signature and output.  The numba path is used when numba imports and the
environment variable ``KHTORUS_DISABLE_NUMBA`` is unset (or ``0``).
"""

import os

import numpy as np

try:
    import numba as nb

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def numba_enabled():
    flag = os.environ.get("KHTORUS_DISABLE_NUMBA", "").strip().lower()
    return _HAVE_NUMBA and flag in ("", "0", "false", "no")


def _maybe_njit(func):
    if _HAVE_NUMBA:
        return nb.njit(cache=True)(func)
    return func


def cube_edges(n, gens, fixed):
    """Edge endpoint tables for every crossing of a closed braid.

    ``gens[c]`` is the 0-based left strand position of crossing ``c``;
    ``fixed[c]`` is -1 for a free crossing or its pinned smoothing.
    Returns ``(edges0, edges1)``, each of shape ``(C, n, 2)``: the ``n``
    edges a crossing contributes under smoothing 0 and smoothing 1.
    Node ``(level, pos)`` has id ``level * n + pos``.
    """
    C = len(gens)
    edges0 = np.empty((C, n, 2), dtype=np.int64)
    edges1 = np.empty((C, n, 2), dtype=np.int64)
    for c in range(C):
        k = gens[c]
        lo = c * n
        hi = ((c + 1) % C) * n
        for p in range(n):
            edges0[c, p] = (lo + p, hi + p)
            edges1[c, p] = (lo + p, hi + p)
        edges1[c, k] = (lo + k, lo + k + 1)
        edges1[c, k + 1] = (hi + k, hi + k + 1)
    return edges0, edges1


@_maybe_njit
def _label_cube_numba(num_nodes, edges0, edges1, free, fixed_bits):
    C = edges0.shape[0]
    n = edges0.shape[1]
    N = free.shape[0]
    R = 1 << N
    labels = np.empty((R, num_nodes), dtype=np.int16)
    counts = np.empty(R, dtype=np.int16)
    parent = np.empty(num_nodes, dtype=np.int64)
    smoothing = np.empty(C, dtype=np.int64)
    for r in range(R):
        for c in range(C):
            smoothing[c] = fixed_bits[c]
        for j in range(N):
            smoothing[free[j]] = (r >> (N - 1 - j)) & 1
        for v in range(num_nodes):
            parent[v] = v
        for c in range(C):
            for p in range(n):
                if smoothing[c] == 0:
                    a = edges0[c, p, 0]
                    b = edges0[c, p, 1]
                else:
                    a = edges1[c, p, 0]
                    b = edges1[c, p, 1]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a < b:
                    parent[b] = a
                elif b < a:
                    parent[a] = b
        k = 0
        for v in range(num_nodes):
            root = v
            while parent[root] != root:
                root = parent[root]
            if root == v:
                labels[r, v] = k
                k += 1
            else:
                labels[r, v] = labels[r, root]
        counts[r] = k
    return labels, counts


def _label_cube_numpy(num_nodes, edges0, edges1, free, fixed_bits):
    C = edges0.shape[0]
    N = len(free)
    R = 1 << N
    smoothing = np.broadcast_to(np.asarray(fixed_bits, dtype=np.int64), (R, C)).copy()
    rs = np.arange(R, dtype=np.int64)
    for j, c in enumerate(free):
        smoothing[:, c] = (rs >> (N - 1 - j)) & 1
    if C:
        # (R, C, n, 2) endpoints selected per resolution
        chosen = np.where(smoothing[:, :, None, None] == 0, edges0[None], edges1[None])
        u = chosen[..., 0].reshape(R, -1)
        v = chosen[..., 1].reshape(R, -1)
    else:
        u = v = np.zeros((R, 0), dtype=np.int64)
    label = np.broadcast_to(np.arange(num_nodes, dtype=np.int64), (R, num_nodes)).copy()
    rows = rs[:, None]
    while True:
        lu = label[rows, u]
        lv = label[rows, v]
        low = np.minimum(lu, lv)
        new = label.copy()
        np.minimum.at(new, (np.broadcast_to(rows, u.shape), u), low)
        np.minimum.at(new, (np.broadcast_to(rows, v.shape), v), low)
        new = new[rows, new]  # pointer jumping
        if np.array_equal(new, label):
            break
        label = new
    is_root = label == np.arange(num_nodes)[None, :]
    rank = np.cumsum(is_root, axis=1) - 1
    labels = rank[rows, label].astype(np.int16)
    counts = is_root.sum(axis=1).astype(np.int16)
    return labels, counts


def label_cube(n, gens, fixed, free):
    """Circle labels of every resolution of the free crossings.

    Resolution ``r`` sets free crossing ``free[j]`` to bit ``N-1-j`` of ``r``
    (so integer order of ``r`` is lexicographic order of the bit vector).
    Returns ``labels`` of shape ``(2**N, num_nodes)`` giving each node's
    circle index (circles numbered by their smallest node id) and ``counts``.
    """
    gens = np.asarray(gens, dtype=np.int64)
    fixed = np.asarray(fixed, dtype=np.int64)
    free = np.asarray(free, dtype=np.int64)
    C = len(gens)
    num_nodes = max(C, 1) * n
    edges0, edges1 = cube_edges(n, gens, fixed)
    if numba_enabled():
        return _label_cube_numba(num_nodes, edges0, edges1, free, fixed)
    return _label_cube_numpy(num_nodes, edges0, edges1, free, fixed)


@_maybe_njit
def _rank_mod_p_numba(A, p):
    A = A.copy()
    m, n = A.shape
    rank = 0
    for col in range(n):
        piv = -1
        for i in range(rank, m):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(n):
                t = A[piv, j]
                A[piv, j] = A[rank, j]
                A[rank, j] = t
        # inverse by Fermat; p is small
        inv = 1
        base = A[rank, col]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(col, n):
            A[rank, j] = (A[rank, j] * inv) % p
        for i in range(rank + 1, m):
            f = A[i, col]
            if f != 0:
                for j in range(col, n):
                    A[i, j] = (A[i, j] - f * A[rank, j]) % p
        rank += 1
        if rank == m:
            break
    return rank


def _rank_mod_p_numpy(A, p):
    A = A.copy()
    m, n = A.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(A[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, col]), p - 2, p)
        A[rank, col:] = (A[rank, col:] * inv) % p
        f = A[rank + 1:, col].copy()
        A[rank + 1:, col:] = (A[rank + 1:, col:] - np.outer(f, A[rank, col:])) % p
        rank += 1
    return rank


def rank_mod_p(A, p):
    """Rank of a dense integer matrix over the field with ``p`` elements."""
    A = np.asarray(A, dtype=np.int64) % p
    if A.size == 0:
        return 0
    if numba_enabled():
        return int(_rank_mod_p_numba(A, p))
    return int(_rank_mod_p_numpy(A, p))
