"""Command-line interface.

Exit codes: 0 converged / exists / completable, 2 the MLE (or completion) does
not exist, 3 iteration cap reached or verdict unknown, 1 bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import completion, gaussian, graphs, mle, rcon, select
from .errors import GGMError, IterationCapExceeded
from .linalg import is_positive_definite

EXIT_OK, EXIT_ERROR, EXIT_NONEXISTENT, EXIT_CAP = 0, 1, 2, 3

_STATUS_EXIT = {
    mle.Status.CONVERGED: EXIT_OK,
    mle.Status.NONEXISTENT: EXIT_NONEXISTENT,
    mle.Status.ITERATION_CAP: EXIT_CAP,
}


class InputError(Exception):
    """Bad or missing input, reported with the offending option name."""


# ---------------------------------------------------------------------------
# JSON output with a fixed float format


def _encode(obj) -> str:
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        # keep floats recognisable as floats
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON: floats at 17 significant digits, non-finite as null."""
    return _encode(obj) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# input loading (everything is read and validated before computing)


def _load(flag: str, path: str | None, reader, required: bool = True):
    if path is None:
        if required:
            raise InputError(f"{flag} is required")
        return None
    try:
        return reader(path)
    except FileNotFoundError:
        raise InputError(f"{flag}: file not found: {path}") from None
    except (OSError, ValueError, KeyError, TypeError, GGMError) as exc:
        raise InputError(f"{flag}: {exc}") from None


def _statistic(args, p: int | None = None) -> tuple[np.ndarray, int | None]:
    """Covariance matrix and sample size from ``--cov`` or ``--data``."""
    if (args.data is None) == (args.cov is None):
        raise InputError("exactly one of --data and --cov is required")
    if args.data is not None:
        X = _load("--data", args.data, gaussian.read_matrix_csv)
        stats = gaussian.sufficient_stats(X, raw_moment=args.raw_moment)
        S, n = stats.cov, stats.n
        flag = "--data"
    else:
        S = _load("--cov", args.cov, gaussian.read_matrix_csv)
        n = None
        flag = "--cov"
        if S.shape[0] != S.shape[1]:
            raise InputError(f"--cov: matrix is {S.shape[0]}x{S.shape[1]}, not square")
        if not np.allclose(S, S.T, rtol=0, atol=1e-12 * max(1.0, np.abs(S).max())):
            raise InputError("--cov: matrix is not symmetric")
        S = (S + S.T) / 2.0
    if not np.all(np.isfinite(S)):
        raise InputError(f"{flag}: non-finite entries")
    if p is not None and S.shape[0] != p:
        raise InputError(f"{flag}: {S.shape[0]} variables but --graph has p={p}")
    return S, n


def _sample_size(args, n_data: int | None) -> int:
    n = args.n if args.n is not None else n_data
    if n is None:
        raise InputError("--n is required with --cov")
    if n < 1:
        raise InputError("--n must be positive")
    return n


def _check_positive(flag: str, value, allow_zero: bool = False):
    if value is None:
        return
    if value < 0 or (value == 0 and not allow_zero):
        raise InputError(f"{flag} must be {'non-negative' if allow_zero else 'positive'}")


# ---------------------------------------------------------------------------
# commands


def cmd_fit(args) -> int:
    G = _load("--graph", args.graph, graphs.read_graph)
    S, _ = _statistic(args, G.p)
    kwargs = {}
    if args.method in ("k", "sigma", "hybrid") or (args.method == "auto"
                                                   and not graphs.is_chordal(G)):
        kwargs = {"eps": args.eps, "max_iter": args.max_iter}
    if args.method == "sigma" and not is_positive_definite(S):
        raise InputError("--method sigma needs a positive definite statistic")
    res = mle.fit(G, S, method=args.method, **kwargs)
    _emit(dumps(res.to_dict()), args.out)
    return _STATUS_EXIT[res.status]


def cmd_exists(args) -> int:
    if args.partial is not None:
        P = _load("--partial", args.partial, completion.read_partial_json)
        G, S = P.graph, P
    else:
        G = _load("--graph", args.graph, graphs.read_graph)
        S, _ = _statistic(args, G.p)
    verdict = mle.mle_exists(G, S, args.strategy)
    _emit(dumps(verdict.to_dict()), args.out)
    if verdict.exists is None:
        return EXIT_CAP
    return EXIT_OK if verdict.exists else EXIT_NONEXISTENT


def cmd_complete(args) -> int:
    P = _load("--partial", args.partial or args.json, completion.read_partial_json)
    try:
        res = completion.maxdet_completion(P, eps=args.eps, max_iter=args.max_iter)
    except IterationCapExceeded as exc:
        _emit(dumps({"completable": None, "detail": str(exc)}), args.out)
        return EXIT_CAP
    report = res.to_dict()
    if P.graph.cycle_order() is not None and np.allclose(np.diag(P.values), 1.0):
        report["cycle_slack"] = completion.cycle_slack(mle.cycle_angles(P.graph, P))
    _emit(dumps(report), args.out)
    return EXIT_OK if res.completable else EXIT_NONEXISTENT


def cmd_sample(args) -> int:
    cov = _load("--cov", args.cov, gaussian.read_matrix_csv)
    _check_positive("--n", args.n)
    if args.n is None:
        raise InputError("--n is required")
    try:
        params = gaussian.GaussianParams(np.zeros(cov.shape[0]), cov)
    except (ValueError, GGMError) as exc:
        raise InputError(f"--cov: {exc}") from None
    X = gaussian.sample(params, args.n, seed=args.seed)
    _emit(gaussian.format_matrix_csv(X), args.out)
    return EXIT_OK


def cmd_select(args) -> int:
    S, n_data = _statistic(args)
    if args.method == "glasso":
        _check_positive("--lambda", args.lam, allow_zero=True)
        lam = 0.0 if args.lam is None else args.lam
        K = select.glasso_fit(S, lam, max_iter=args.max_iter)
        p = K.shape[0]
        edges = [[i + 1, j + 1] for i in range(p) for j in range(i + 1, p) if K[i, j] != 0.0]
        report = {"edges": edges, "criterion": "glasso", "lambda": lam,
                  "score": select.glasso_objective(K, S, lam), "k_hat": K}
    elif args.method == "threshold":
        if args.tau is None:
            raise InputError("--tau is required for --method threshold")
        G = select.threshold_select(S, args.tau)
        report = {"edges": [[i + 1, j + 1] for i, j in G.edge_list()],
                  "criterion": "threshold", "tau": args.tau}
    elif args.method == "test":
        n = _sample_size(args, n_data)
        G = select.test_select(S, n, args.alpha)
        report = {"edges": [[i + 1, j + 1] for i, j in G.edge_list()],
                  "criterion": "fisher_z", "alpha": args.alpha}
    else:
        n = _sample_size(args, n_data)
        res = select.stepwise_select(S, n, direction=args.direction, lam=args.lam,
                                     criterion=args.criterion, best_first=args.best_first)
        report = res.to_dict()
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_mlt(args) -> int:
    G = _load("--graph", args.graph, graphs.read_graph)
    if args.n is None:
        raise InputError("--n is required")
    _check_positive("--n", args.n)
    _check_positive("--trials", args.trials)
    rep = mle.mlt_monte_carlo(G, args.n, args.trials, seed=args.seed, strategy=args.strategy)
    _emit(dumps(rep.to_dict()), args.out)
    return EXIT_CAP if rep.unknown_count else EXIT_OK


def cmd_rcon(args) -> int:
    CG = _load("--json", args.json, rcon.read_colored_json)
    S, _ = _statistic(args, CG.graph.p)
    res = rcon.rcon_fit(CG, S, eps=args.eps, max_iter=args.max_iter)
    report = res.to_dict()
    if res.converged:
        report["dual"] = rcon.rcon_dual_check(res, CG, S).to_dict()
    _emit(dumps(report), args.out)
    return _STATUS_EXIT[res.status]


COMMANDS = {
    "fit": cmd_fit,
    "exists": cmd_exists,
    "complete": cmd_complete,
    "sample": cmd_sample,
    "select": cmd_select,
    "mlt": cmd_mlt,
    "rcon": cmd_rcon,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--graph", help="graph file ('p <n>' then one 1-based edge per line)")
    shared.add_argument("--data", help="data CSV, one sample per row")
    shared.add_argument("--cov", help="covariance CSV")
    shared.add_argument("--partial", help="partial-matrix JSON")
    shared.add_argument("--json", help="colored-graph JSON (rcon) or partial-matrix JSON")
    shared.add_argument("--raw-moment", action="store_true",
                        help="use X^T X / n without centring (known zero mean)")
    shared.add_argument("--eps", type=float, default=1e-9)
    shared.add_argument("--max-iter", type=int, default=10_000)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ggmle", description="Maximum likelihood estimation in Gaussian graphical models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[shared], help="fit the MLE on a graph")
    p.add_argument("--method", choices=["auto", "chordal", "k", "sigma", "hybrid"],
                   default="auto")

    p = sub.add_parser("exists", parents=[shared], help="decide existence of the MLE")
    p.add_argument("--strategy", choices=["auto", "chordal", "cycle", "divergence"],
                   default="auto")

    sub.add_parser("complete", parents=[shared], help="max-determinant PD completion")

    p = sub.add_parser("sample", parents=[shared], help="draw N(0, cov) samples as CSV")
    p.add_argument("--n", type=int)

    p = sub.add_parser("select", parents=[shared], help="learn a graph from data")
    p.add_argument("--method", choices=["stepwise", "threshold", "test", "glasso"],
                   default="stepwise")
    p.add_argument("--n", type=int, help="sample size (required with --cov)")
    p.add_argument("--direction", choices=["forward", "backward"], default="forward")
    p.add_argument("--criterion", choices=["bic", "aic"])
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--best-first", action="store_true")
    p.add_argument("--tau", type=float)
    p.add_argument("--alpha", type=float, default=0.05)

    p = sub.add_parser("mlt", parents=[shared], help="Monte Carlo existence frequency")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--strategy", choices=["auto", "chordal", "cycle", "divergence"],
                   default="auto")

    sub.add_parser("rcon", parents=[shared], help="fit an RCON model (colored graph in --json)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        _check_positive("--eps", args.eps)
        _check_positive("--max-iter", args.max_iter)
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (GGMError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
