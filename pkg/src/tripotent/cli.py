"""Command-line entry point: ``tripotent <command> ...``.

Exit codes: 0 success, 2 unreadable input, 3 non-square matrix, 4 a theorem
checker returned an inconsistent verdict (or the suite found failing cells),
5 the requested parameters lie outside the theorem's side conditions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import characterizations as ch
from .classes import ClassLabel, NotThreeOPError, classify, signature
from .core import DEFAULT_TOL, MatrixError, NotSquareError, dumps_matrix, matrix_to_dict, read_matrix
from .decompositions import hs_decompose, mp_inverse, penrose_residuals
from .generators import GenSpec, InfeasibleSpecError, generate
from .harness import Cell, SuiteConfig, identity_cell, run_suite, search_counterexample

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_SQUARE = 3
EXIT_INCONSISTENT = 4
EXIT_SIDE_CONDITION = 5


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _default_seed() -> int:
    raw = os.environ.get("TRIPOTENT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise _Fail(EXIT_PARSE, f"TRIPOTENT_SEED must be an integer, got {raw!r}")


def _tol(args):
    return DEFAULT_TOL if args.tol is None else DEFAULT_TOL.with_eq_tol(args.tol)


def _load(path):
    try:
        return read_matrix(path)
    except (OSError, MatrixError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, f"cannot read matrix from {path}: {exc}")


def _load_square(path):
    A = _load(path)
    if A.shape[0] != A.shape[1]:
        raise _Fail(EXIT_NOT_SQUARE, f"matrix in {path} is {A.shape[0]}x{A.shape[1]}, expected square")
    return A


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def _emit(args, payload: dict, table_rows=None):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
        return
    rows = table_rows if table_rows is not None else list(payload.items())
    width = max((len(str(k)) for k, _ in rows), default=0)
    for k, v in rows:
        print(f"{str(k):<{width}}  {v if isinstance(v, str) else _fmt(v)}")


def _matrix_lines(A) -> str:
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        return str(np.asarray(A))


# -- commands ---------------------------------------------------------------

def cmd_classify(args) -> int:
    cfg = _tol(args)
    A = _load_square(args.file)
    result = classify(A, cfg)
    payload = {"classes": {lab.value: {"member": bool(ok), "residual": r} for lab, (ok, r) in result.items()}}
    rows = [(lab.value, f"{_fmt(bool(ok)):<5}  residual {r:.3e}") for lab, (ok, r) in result.items()]
    if result[ClassLabel.ThreeOP][0]:
        try:
            sig = signature(A, cfg)
            payload["signature"] = list(sig.as_tuple())
            rows.append(("signature", str(sig.as_tuple())))
        except NotThreeOPError:  # pragma: no cover - guarded by the membership test
            pass
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_pinv(args) -> int:
    cfg = _tol(args)
    A = _load(args.file)
    X = mp_inverse(A, cfg)
    if args.format == "json":
        print(dumps_matrix(X))
    else:
        print(_matrix_lines(X))
        for name, r in penrose_residuals(A, X).items():
            print(f"{name}  {r:.3e}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    cfg = _tol(args)
    A = _load_square(args.file)
    d = hs_decompose(A, cfg)
    payload = {
        "r": d.r,
        "U": matrix_to_dict(d.U),
        "sigma": [float(x) for x in d.sigma],
        "K": matrix_to_dict(d.K) if d.r else None,
        "L": matrix_to_dict(d.L) if d.r and d.n > d.r else None,
        "unitarity_residual": d.unitarity_residual(),
        "reconstruction_residual": float(np.linalg.norm(d.reconstruct() - A)),
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"rank {d.r}")
        print("sigma", np.array2string(np.asarray(d.sigma), precision=6))
        print("K =")
        print(_matrix_lines(d.K))
        print("L =")
        print(_matrix_lines(d.L))
        print(f"||KK* + LL* - I||  {payload['unitarity_residual']:.3e}")
        print(f"||A - U[SK SL; 0 0]U*||  {payload['reconstruction_residual']:.3e}")
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _tol(args)
    A = _load_square(args.file)
    cell = Cell(args.theorem, args.variant, tuple(
        (name, int(v)) for name, v in (("s", args.s), ("t", args.t), ("k", args.k)) if v is not None
    ))
    try:
        rep = cell.evaluate(ch.Facts(A, cfg))
    except ch.SideConditionError as exc:
        raise _Fail(EXIT_SIDE_CONDITION, str(exc))
    except (ch.UnknownVariantError, KeyError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, f"bad theorem selection: {exc}")
    payload = rep.to_dict()
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        rows = [(k, payload[k]) for k in ("theorem_id", "condition_holds", "is_three_op", "verdict_consistent")]
        for k in ("variant", "params", "exclusion_flag", "reference", "reference_holds"):
            if k in payload:
                rows.append((k, str(payload[k]) if not isinstance(payload[k], bool) else payload[k]))
        rows += [(f"residual[{k}]", v) for k, v in payload["residuals"].items()]
        _emit(args, payload, rows)
    return EXIT_OK if rep.verdict_consistent else EXIT_INCONSISTENT


def cmd_generate(args) -> int:
    sig = None
    if args.signature:
        try:
            sig = tuple(int(x) for x in args.signature.split(","))
        except ValueError:
            raise _Fail(EXIT_PARSE, f"signature must be p,q,z, got {args.signature!r}")
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        A = generate(GenSpec(n=args.n, label=args.label, seed=seed, signature=sig, rank=args.rank))
    except (InfeasibleSpecError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, str(exc))
    print(dumps_matrix(A))
    return EXIT_OK


def cmd_suite(args) -> int:
    conf = {}
    if args.config:
        try:
            with open(args.config) as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _Fail(EXIT_PARSE, f"cannot read suite config: {exc}")
    if args.seed is not None:
        conf["seed"] = args.seed
    elif "seed" not in conf:
        conf["seed"] = _default_seed()
    if args.tol is not None:
        conf["tolerance"] = {"eq_tol": args.tol}
    try:
        cfg = SuiteConfig.from_dict(conf)
    except (TypeError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, f"invalid suite config: {exc}")
    report = run_suite(cfg)
    payload = report.to_dict()
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"{'theorem':<22}{'passed':>10}{'failed':>10}{'expected-exc':>14}")
        for tid, c in payload["by_theorem"].items():
            print(f"{tid:<22}{c['passed']:>10}{c['failed']:>10}{c['expected_exception']:>14}")
        for item in payload["failing_cells"]:
            print(f"FAIL {item['cell']}  family={item['family']} n={item['n']} failed={item['failed']}")
        if payload["failing_cell_count"] > len(payload["failing_cells"]):
            print(f"... {payload['failing_cell_count'] - len(payload['failing_cells'])} more failing cells")
        print(f"duration {payload['duration_seconds']:.1f}s, ok={_fmt(payload['ok'])}")
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def cmd_search(args) -> int:
    cfg = _tol(args)
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        identity_cell(args.identity)
        found = search_counterexample(args.identity, args.ensemble, args.budget, seed, cfg,
                                      s=args.s, t=args.t, k=args.k)
    except ch.SideConditionError as exc:
        raise _Fail(EXIT_SIDE_CONDITION, str(exc))
    except (ch.UnknownVariantError, InfeasibleSpecError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, str(exc))
    if found is None:
        payload = {"found": False}
    else:
        A, rep = found
        payload = {
            "found": True,
            "witness": matrix_to_dict(A),
            "eigenvalues": [[float(z.real), float(z.imag)] for z in np.linalg.eigvals(A)],
            "report": rep.to_dict(),
        }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif found is None:
        print("no counterexample within budget")
    else:
        A, rep = found
        print("counterexample found")
        print(_matrix_lines(A))
        print("eigenvalues", np.array2string(np.linalg.eigvals(A), precision=6))
        print(f"condition_holds {_fmt(bool(rep.condition_holds))}, is_three_op {_fmt(bool(rep.is_three_op))}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override eq_tol")
    common.add_argument("--format", choices=("json", "table"), default="table")

    p = argparse.ArgumentParser(prog="tripotent", description="Orthogonal tripotent matrix checks.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("classify", cmd_classify, "class membership and signature"),
        ("pinv", cmd_pinv, "Moore-Penrose inverse"),
        ("decompose", cmd_decompose, "Hartwig-Spindelbock decomposition"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("check", parents=[common], help="run one theorem checker")
    sp.add_argument("file")
    sp.add_argument("--theorem", required=True)
    sp.add_argument("--variant", default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("generate", parents=[common], help="generate a matrix as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--label", required=True)
    sp.add_argument("--signature", default=None, help="p,q,z for ThreeOP")
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("suite", parents=[common], help="soundness and completeness sweep")
    sp.add_argument("--config", default=None, help="JSON file with SuiteConfig fields")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_suite)

    sp = sub.add_parser("search", parents=[common], help="random search for a counterexample")
    sp.add_argument("--identity", required=True, help="theorem[/variant], e.g. average/toStar")
    sp.add_argument("--ensemble", required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotSquareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SQUARE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
