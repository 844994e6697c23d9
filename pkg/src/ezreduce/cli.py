"""Command-line front end.

Exit codes: 0 success, 2 unreadable input or bad arguments, 3 invalid
parameters, 4 a checked invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .chains import FormalSum, check_contraction
from .homology import compute_contraction, operation_matrix
from .simplicial import BUNDLED, ComplexFormatError, Simplex, bundled, load_complex
from .simplifier import count_face_operators, count_summands, evaluate_formula, generate_dnr
from .steenrod import InvalidRequest, OperationRequest

EXIT_PARSE, EXIT_PARAMS, EXIT_INVARIANT = 2, 3, 4


class InvariantFailure(RuntimeError):
    pass


def _complex(source: str):
    """A JSON file, or a bundled name (``rp2`` or ``rp2.json``) when no such file exists."""
    path = Path(source)
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    if not path.exists() and path.parent == Path(".") and name in BUNDLED:
        return bundled(name)
    if not path.exists():
        raise ComplexFormatError(f"no such complex file or bundled name: {source}")
    return load_complex(path)


def _chain_json(c: FormalSum) -> list:
    return [[list(s), k] for s, k in c.sorted_terms()]


def cmd_homology(args) -> dict:
    K = _complex(args.complex)
    H = compute_contraction(K, args.prime)
    return {
        "command": "homology",
        "complex": K.name,
        "prime": args.prime,
        "f_vector": K.f_vector(),
        "ranks": list(H.ranks),
        "generators": {str(q): [_chain_json(z) for z in H.homology_basis(q)] for q in range(K.dim + 1)},
    }


def _operation(args, req: OperationRequest) -> dict:
    req.validate()
    K = _complex(args.complex)
    H = compute_contraction(K, req.p)
    t = time.perf_counter()
    M = operation_matrix(req, H, jobs=args.jobs)
    name = f"Sq^{req.index}" if req.kind == "square" else f"P^{req.index}_{req.p}"
    return {
        "command": req.kind,
        "complex": K.name,
        "prime": req.p,
        "operation": name,
        "source_degree": req.q,
        "target_degree": req.target_degree,
        "diagonal": list(req.diagonal),
        "source_rank": H.rank(req.q),
        "target_rank": H.rank(req.target_degree),
        "matrix": M.tolist(),
        "seconds": round(time.perf_counter() - t, 3) if args.timing else None,
    }


def cmd_square(args) -> dict:
    return _operation(args, OperationRequest(2, "square", args.i, args.q))


def cmd_power(args) -> dict:
    return _operation(args, OperationRequest(args.prime, "power", args.k, args.q))


def cmd_formula(args) -> dict:
    if args.n < 2 or args.r < 0:
        raise InvalidRequest("formula needs n >= 2 and r >= 0")
    if args.dim is not None and args.dim < 0:
        raise InvalidRequest("--dim must be non-negative")
    F = generate_dnr(args.n, args.r)
    report = {
        "command": "formula",
        "n": args.n,
        "r": args.r,
        "terms": len(F.terms),
        "formula": F.to_json(),
        "text": F.to_text(),
    }
    if args.dim is not None:
        m = args.dim
        x = Simplex(range(m + 1))
        value = evaluate_formula(F, x, args.prime)
        report["instantiated"] = {
            "dim": m,
            "prime": args.prime,
            "summands": count_summands(F, m),
            "face_operators": count_face_operators(F, m),
            "nonzero_terms": len(value),
            "value": [[[list(f) for f in t], k] for t, k in value.sorted_terms()],
        }
    return report


def run_selfcheck(prime: int = 3) -> list:
    """Fast invariant suite; returns ``(name, ok)`` pairs."""
    from .chains import simplicial_chains
    from .ez import ez_contraction, naive_dnr

    results = []
    K = bundled("circle")
    C = simplicial_chains(K)
    rep = check_contraction(ez_contraction(C, C), prime, 2)
    results.append(("EZ contraction axioms on S^1 x S^1", rep.ok))
    for name in BUNDLED:
        H = compute_contraction(bundled(name), prime)
        rep = check_contraction(H.contraction, prime, H.K.dim)
        results.append((f"homology contraction axioms on {name}", rep.ok))
    for n, r in ((2, 1), (2, 2), (3, 1)):
        ok = True
        for m in range(r, r + 2):
            x = Simplex(range(m + 1))
            ok &= evaluate_formula(generate_dnr(n, r), x, prime) == naive_dnr(n, r, FormalSum.basis(x, prime))
        results.append((f"face-only D^{n}_{r} equals the operator composition", ok))
    H = compute_contraction(bundled("rp2"), 2)
    results.append(("Sq^1 nonzero on H^1(RP^2)", operation_matrix(OperationRequest(2, "square", 1, 1), H).any()))
    return results


def cmd_selfcheck(args) -> dict:
    results = run_selfcheck(args.prime if args.prime != 2 else 3)
    report = {"command": "selfcheck", "checks": [{"name": n, "ok": bool(ok)} for n, ok in results]}
    failed = [n for n, ok in results if not ok]
    if failed:
        raise InvariantFailure("; ".join(failed))
    return report


def _format_text(report: dict) -> str:
    cmd = report["command"]
    if cmd == "homology":
        lines = [f"{report['complex']} over Z_{report['prime']}",
                 "ranks: " + ", ".join(map(str, report["ranks"]))]
        return "\n".join(lines)
    if cmd in ("square", "power"):
        lines = [f"{report['operation']}: H^{report['source_degree']} -> H^{report['target_degree']} "
                 f"on {report['complex']} (D^{report['diagonal'][0]}_{report['diagonal'][1]})"]
        if not report["matrix"] or not report["matrix"][0]:
            lines.append(f"(empty {report['target_rank']}x{report['source_rank']} matrix)")
        lines += [" ".join(map(str, row)) for row in report["matrix"]]
        return "\n".join(lines)
    if cmd == "formula":
        out = report["text"].rstrip("\n")
        inst = report.get("instantiated")
        if inst:
            out += (f"\n# m = {inst['dim']}: {inst['summands']} summands, "
                    f"{inst['face_operators']} face operators, {inst['nonzero_terms']} nonzero tensor terms")
        return out
    if cmd == "selfcheck":
        return "\n".join(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']}" for c in report["checks"])
    return json.dumps(report)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--complex", default="circle", help="JSON file or bundled name (%s)" % ", ".join(BUNDLED))
    common.add_argument("--prime", type=int, default=2)
    common.add_argument("--format", "--emit", dest="format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for operation matrices")
    common.add_argument("--timing", action="store_true", help="include wall-clock seconds in reports")

    parser = argparse.ArgumentParser(prog="ezreduce", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("homology", parents=[common], help="homology ranks and generators")
    sq = sub.add_parser("square", parents=[common], help="matrix of Sq^i on H^q (Z_2)")
    sq.add_argument("--i", type=int, required=True)
    sq.add_argument("--q", type=int, required=True)
    pw = sub.add_parser("power", parents=[common], help="matrix of P^k_p on H^q")
    pw.add_argument("--k", type=int, required=True)
    pw.add_argument("--q", type=int, required=True)
    fm = sub.add_parser("formula", parents=[common], help="face-only formula for D^n_r")
    fm.add_argument("--n", type=int, required=True)
    fm.add_argument("--r", type=int, required=True)
    fm.add_argument("--dim", type=int, default=None, help="also instantiate at this dimension")
    sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    return parser


COMMANDS = {
    "homology": cmd_homology,
    "square": cmd_square,
    "power": cmd_power,
    "formula": cmd_formula,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise InvalidRequest("--jobs must be at least 1")
        if args.command != "square":
            from .chains import check_prime

            check_prime(args.prime)
        report = COMMANDS[args.command](args)
    except ComplexFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantFailure as exc:
        print(f"invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    if report.get("seconds", 0) is None:
        report.pop("seconds")
    if args.format == "json":
        print(json.dumps(report, indent=1, ensure_ascii=False))
    else:
        print(_format_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
