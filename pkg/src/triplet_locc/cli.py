"""Command-line front end.

Every command prints a JSON report followed by a human summary whose lines
start with ``# ``; :func:`parse_report` recovers the JSON part. Exit codes:
0 success, 1 usage or parse error, 2 failed precondition, 3 search failure.
"""
from __future__ import annotations

import argparse
import json
import sys


from . import __version__
from .errors import InternalContradiction, PreconditionError, SearchFailure
from .oracle import OracleKind, enumerate_witnesses_2x2, random_search_witness
from .protocol import run_protocol
from .sampling import check_random_state
from .statecore import StateSet
from .stateio import StateSetFileError, complex_to_pairs, load_state_set
from .subspace import gram, min_gram_eigenvalue
from .witness import VerdictKind, classify, maximize_success

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_SEARCH = 0, 1, 2, 3
FOOTER_PREFIX = "# "


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_report(text: str) -> dict:
    """JSON part of a report (everything before the summary footer)."""
    body = [ln for ln in text.splitlines() if not ln.startswith(FOOTER_PREFIX.rstrip())]
    return json.loads("\n".join(body))


def _emit(report: dict, summary: list[str], out) -> None:
    out.write(json.dumps(report, indent=2) + "\n")
    for line in summary:
        out.write(FOOTER_PREFIX + line + "\n")


def _resolve_target(S: StateSet, key: str) -> int:
    """State name, or a 1-based position (matching the default names psi1, psi2, ...)."""
    if key in S.names:
        return S.names.index(key)
    try:
        pos = int(key)
    except ValueError:
        raise UsageError(f"unknown target {key!r}; names are {list(S.names)}") from None
    if not 1 <= pos <= len(S):
        raise UsageError(f"target position {pos} out of range 1..{len(S)}")
    return pos - 1


def _require_three(S: StateSet):
    if len(S) != 3:
        raise PreconditionError(f"exactly 3 states are required, the file has {len(S)}")


def _witness_doc(w) -> dict:
    return {
        "success_probability": w.success_probability,
        "factors": [complex_to_pairs(f) for f in w.phi.locals],
    }


def cmd_check(args, out) -> int:
    S = load_state_set(args.file)
    g = gram(S.states)
    lam = min_gram_eigenvalue(S.states)
    independent = lam > args.tol
    report = {
        "command": "check",
        "dims": list(S.signature.dims),
        "state_count": len(S),
        "names": list(S.names),
        "input_norms": {n: s.scale for n, s in zip(S.names, S.states)},
        "gram": [complex_to_pairs(row) for row in g],
        "smallest_gram_eigenvalue": lam,
        "tol": args.tol,
        "independent": bool(independent),
    }
    _emit(
        report,
        [
            f"{len(S)} states on dims {list(S.signature.dims)}",
            f"smallest Gram eigenvalue {lam:.6g}: "
            + ("linearly independent" if independent else "NOT linearly independent"),
        ],
        out,
    )
    return EXIT_OK


def cmd_classify(args, out) -> int:
    S = load_state_set(args.file)
    _require_three(S)
    rng = check_random_state(args.seed)
    rep = classify(S, tol=args.tol, rng=rng, retries=args.retries)
    states = []
    summary = []
    for k, (name, v) in enumerate(zip(rep.names, rep.per_state)):
        entry = {"name": name, "verdict": v.kind.value}
        w = v.witness
        if w is not None and args.restarts > 1:
            w = maximize_success(S, k, args.restarts, rng, args.retries, initial=w)
        if w is not None:
            entry.update(_witness_doc(w))
        if v.note:
            entry["note"] = v.note
        states.append(entry)
        p = f" p={w.success_probability:.6f}" if w is not None else ""
        summary.append(f"{name}: {v.kind.value}{p}")
    summary.append(f"set: {rep.set_verdict.value}")
    report = {
        "command": "classify",
        "dims": list(S.signature.dims),
        "seed": args.seed,
        "tol": args.tol,
        "retries": args.retries,
        "restarts": args.restarts,
        "states": states,
        "set_verdict": rep.set_verdict.value,
        "diagnostics": {k: v for k, v in rep.diagnostics.items() if k != "seed"},
    }
    _emit(report, summary, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    S = load_state_set(args.file)
    _require_three(S)
    x = _resolve_target(S, args.target)
    rng = check_random_state(args.seed)
    rep = classify(S, tol=args.tol, rng=rng, retries=args.retries)
    v = rep.per_state[x]
    if v.kind is not VerdictKind.IDENTIFIABLE:
        raise PreconditionError(
            f"target {S.names[x]!r} is {v.kind.value}, refusing to simulate"
            + (f" ({v.note})" if v.note else "")
        )
    summ = run_protocol(S, v.witness, args.shots, rng)
    band = 3 * summ.sigma
    p = summ.predicted_probability
    within = abs(summ.empirical_frequency - p) <= band if summ.target_shots else None
    report = {
        "command": "simulate",
        "seed": args.seed,
        "target": S.names[x],
        "shots": summ.shots,
        "target_shots": summ.target_shots,
        "predicted_probability": p,
        "empirical_frequency": summ.empirical_frequency,
        "band_3sigma": band,
        "within_band": within,
        "conclusive_count": summ.conclusive_count,
        "false_conclusive_count": summ.false_conclusive_count,
        "per_true_state_counts": summ.per_true_state_counts,
        "witness": _witness_doc(v.witness),
    }
    _emit(
        report,
        [
            f"target {S.names[x]}: predicted {p:.6f}, empirical {summ.empirical_frequency:.6f} "
            f"over {summ.target_shots} target shots (3 sigma band {band:.6f})",
            f"false conclusive outcomes: {summ.false_conclusive_count}",
        ],
        out,
    )
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    S = load_state_set(args.file)
    _require_three(S)
    targets = range(3) if args.target is None else [_resolve_target(S, args.target)]
    rng = check_random_state(args.seed)
    exact = S.signature.dims == (2, 2)
    results, summary = [], []
    for x in targets:
        if exact:
            ver = enumerate_witnesses_2x2(S, x, rng)
        else:
            ver = random_search_witness(S, x, args.samples, rng, args.tol)
        entry = {
            "name": S.names[x],
            "verdict": ver.kind.value,
            "witnesses": [[complex_to_pairs(f) for f in w.locals] for w in ver.witnesses],
        }
        if ver.samples is not None:
            entry["samples_tried"] = ver.samples
        results.append(entry)
        extra = f" after {ver.samples} samples" if ver.kind is OracleKind.NOT_FOUND else ""
        summary.append(f"{S.names[x]}: {ver.kind.value}{extra}")
    report = {
        "command": "oracle",
        "method": "exact_enumeration" if exact else "random_search",
        "seed": args.seed,
        "samples": None if exact else args.samples,
        "results": results,
    }
    _emit(report, summary, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="triplet-locc", description="Conclusive local identification of three pure states.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="Gram matrix and linear-independence check")
    c.add_argument("file")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("classify", help="per-state identifiability with witnesses")
    c.add_argument("file")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--retries", type=int, default=16)
    c.add_argument("--restarts", type=int, default=32)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("simulate", help="Monte Carlo run of the witness protocol")
    c.add_argument("file")
    c.add_argument("--target", required=True, help="state name or 1-based position")
    c.add_argument("--shots", type=int, default=100_000)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--retries", type=int, default=16)
    c.set_defaults(func=cmd_simulate)

    c = sub.add_parser("oracle", help="independent witness existence check")
    c.add_argument("file")
    c.add_argument("--target", default=None, help="state name or 1-based position (default: all)")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_oracle)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "shots", 0) < 0:
            raise UsageError("--shots must be non-negative")
        return args.func(args, out)
    except (UsageError, StateSetFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SearchFailure, InternalContradiction) as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return EXIT_SEARCH


if __name__ == "__main__":
    sys.exit(main())
