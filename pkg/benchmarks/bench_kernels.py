"""Time the numba kernels against their pure-numpy counterparts.

Usage: python benchmarks/bench_kernels.py [--p 40] [--repeat 5]

Compilation happens in a warm-up call and is not timed.
"""
import argparse
import time

import numpy as np

from ggmle import _kernels as kern
from ggmle.graphs import Graph


def _best(fn, make_args, repeat):
    fn(*make_args())  # warm-up / compile
    times = []
    for _ in range(repeat):
        args = make_args()
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def _problem(p, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3 * p, p))
    S = X.T @ X / (3 * p)
    G = Graph.grid(int(np.ceil(np.sqrt(p))))
    G = Graph.from_edges(p, [(i, j) for i, j in G.edge_list() if j < p])
    blocks = [(v, -1) for v in range(p)] + G.edge_list()
    us = np.array([b[0] for b in blocks], dtype=np.int64)
    vs = np.array([b[1] for b in blocks], dtype=np.int64)
    non = G.non_edges()
    nu = np.array([e[0] for e in non], dtype=np.int64)
    nv = np.array([e[1] for e in non], dtype=np.int64)
    return S, us, vs, nu, nv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=40)
    ap.add_argument("--cycle-p", type=int, default=18)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    S, us, vs, nu, nv = _problem(args.p)
    p = args.p
    theta = np.random.default_rng(1).uniform(0.1, 3.0, args.cycle_p)

    cases = {
        "cholesky": (kern.cholesky_nb, kern.cholesky_numpy, lambda: (S.copy(), 0.0)),
        "k_sweep": (kern.k_sweep_nb, kern.k_sweep_numpy,
                    lambda: (np.eye(p), np.eye(p), S, us, vs)),
        "sigma_sweep": (kern.sigma_sweep_nb, kern.sigma_sweep_numpy,
                        lambda: (S.copy(), np.linalg.inv(S), nu, nv)),
        "odd_subset_slack": (kern.odd_subset_slack_nb, kern.odd_subset_slack_numpy,
                             lambda: (theta,)),
    }
    print(f"{'kernel':<18}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}")
    for name, (nb, py, make) in cases.items():
        t_nb = _best(nb, make, args.repeat)
        t_py = _best(py, make, args.repeat)
        print(f"{name:<18}{1e3 * t_nb:>12.3f}{1e3 * t_py:>12.3f}{t_py / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
