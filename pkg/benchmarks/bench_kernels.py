"""Time the numba and numpy paths of the hot kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths are called directly, so the environment flag does not matter here.
Outputs are compared before timings are printed.
"""

import argparse
import time

import numpy as np

from khtorus import _kernels
from khtorus.braid_cube import BraidSpec, torus_braid


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_label_cube(n, m, repeat):
    d = torus_braid(BraidSpec(n, m))
    e0, e1 = _kernels.cube_edges(n, np.array(d.generators), np.array(d.fixed))
    args = (d.num_nodes, e0, e1, np.array(d.free, dtype=np.int64),
            np.array(d.fixed, dtype=np.int64))
    _kernels._label_cube_numba(*args)  # compile / load from cache
    t_nb, (l1, c1) = best_of(lambda: _kernels._label_cube_numba(*args), repeat)
    t_np, (l2, c2) = best_of(lambda: _kernels._label_cube_numpy(*args), repeat)
    assert np.array_equal(l1, l2) and np.array_equal(c1, c2)
    return f"label_cube T({n},{m}) 2^{d.free_count}", t_nb, t_np


def bench_rank(size, p, repeat):
    rng = np.random.default_rng(size)
    A = rng.integers(-2, 3, size=(size, size)) * (rng.random((size, size)) < 0.05)
    A = A.astype(np.int64) % p
    _kernels._rank_mod_p_numba(A, p)
    t_nb, r1 = best_of(lambda: _kernels._rank_mod_p_numba(A, p), repeat)
    t_np, r2 = best_of(lambda: _kernels._rank_mod_p_numpy(A, p), repeat)
    assert r1 == r2
    return f"rank_mod_p {size}x{size} p={p}", t_nb, t_np


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [bench_label_cube(2, 12, args.repeat), bench_label_cube(3, 7, args.repeat),
            bench_label_cube(4, 5, args.repeat), bench_rank(200, 2, args.repeat),
            bench_rank(400, 3, args.repeat)]
    print(f"{'kernel':32} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, a, b in rows:
        print(f"{name:32} {a:10.4f} {b:10.4f} {b / a:8.1f}")


if __name__ == "__main__":
    main()
