"""Command-line frontend.

Every subcommand prints either plain text or JSON (`--format`); output is
byte-deterministic for fixed inputs.  Semantic verdicts (a failed check, an
inconsistent extension, a non-rigid trace) are successful computations and
exit 0; only usage problems (1), unparsable input (2), and precondition
violations (3) use nonzero exit codes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import derivations, twolocal
from .algebras import Algebra, Element, bracket, format_element, jacobi_check, parse_element
from .errors import (
    IndexOutOfDomain,
    MixedAlgebras,
    NotADerivation,
    ParseError,
    TruncationTooSmall,
    WindowTooSmall,
    WittlocalError,
)
from .linalg import SparseVector, Subspace, Window, format_rational


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(f"{self.prog}: {message}")


def _format_terms(vector: SparseVector) -> str:
    """Render a grade-indexed vector in the element grammar."""
    return format_element(Element(Algebra.WITT, vector))


def _subspace_text(space: Subspace) -> str:
    if space.dim == 0:
        return "dim=0; basis: -"
    body = ", ".join(_format_terms(v) for v in space.basis)
    return f"dim={space.dim}; basis: {body}"


def _subspace_json(space: Subspace) -> dict:
    return {"dim": space.dim, "basis": [_format_terms(v) for v in space.basis]}


def _window_json(window: Window) -> dict:
    return {"min": window.lo, "max": window.hi}


def _emit(args, text: str, payload: dict) -> int:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)
    return 0


def _load_map(path: str) -> derivations.LinearMapTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read map file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"map file {path} is not valid JSON: {exc}") from exc
    return derivations.table_from_json(data)


def _cmd_bracket(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    x = parse_element(args.x, algebra)
    y = parse_element(args.y, algebra)
    result = bracket(x, y)
    return _emit(
        args,
        format_element(result),
        {
            "algebra": algebra.value,
            "x": format_element(x),
            "y": format_element(y),
            "result": format_element(result),
        },
    )


def _cmd_jacobi(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    window = Window.parse(args.window)
    result = jacobi_check(algebra, window)
    count = len(window) ** 3
    payload = {
        "algebra": algebra.value,
        "window": _window_json(window),
        "pass": result.passed,
        "triples_checked": count,
    }
    if result.passed:
        text = f"pass ({count} triples checked)"
    else:
        i, j, k = result.counterexample
        res = _format_terms(result.residual)
        text = f"fail at ({i}, {j}, {k}): residual = {res}"
        payload["counterexample"] = [i, j, k]
        payload["residual"] = res
    return _emit(args, text, payload)


def _cmd_leibniz(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    table = _load_map(args.map)
    if table.algebra is not algebra:
        raise ParseError(f"map file algebra {table.algebra} does not match --algebra {algebra}")
    result = derivations.leibniz_check(table, args.depth)
    payload = {
        "algebra": algebra.value,
        "depth": args.depth,
        "pass": result.passed,
        "pairs_checked": result.pairs_checked,
    }
    if result.passed:
        text = f"pass ({result.pairs_checked} pairs checked)"
    else:
        i, j = result.pair
        res = format_element(result.residual)
        text = f"fail at ({i}, {j}): residual = {res}"
        payload["pair"] = [i, j]
        payload["residual"] = res
    return _emit(args, text, payload)


def _cmd_extend(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    img_e1 = parse_element(args.e1, algebra)
    img_e2 = parse_element(args.e2, algebra)
    outcome = derivations.extend_from_generators(algebra, img_e1, img_e2, args.truncation)
    if isinstance(outcome, derivations.InconsistentExtension):
        i, j = outcome.relation
        return _emit(
            args,
            outcome.describe(),
            {
                "status": "inconsistent",
                "relation": [i, j],
                "residual": format_element(outcome.residual),
            },
        )
    lines = [
        f"D(e_{k}) = {format_element(outcome.image(k))}" for k in outcome.window.indices()
    ]
    return _emit(args, "\n".join(lines), derivations.table_to_json(outcome))


def _cmd_der_basis(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    space = derivations.derivation_space_basis(algebra, args.support, args.depth)
    lines = [f"dim={space.dim}", "coordinates: " + ", ".join(space.coordinates)]
    basis_json = []
    for n, vec in enumerate(space.space.basis, start=1):
        e1, e2 = space.generator_images(vec)
        lines.append(f"[{n}] e1 = {format_element(e1)}; e2 = {format_element(e2)}")
        basis_json.append(
            {
                "coords": [
                    [space.coordinates[pos], format_rational(c)] for pos, c in vec.items()
                ],
                "e1": format_element(e1),
                "e2": format_element(e2),
            }
        )
    payload = {
        "algebra": algebra.value,
        "support_bound": space.support_bound,
        "depth": space.depth,
        "dim": space.dim,
        "coordinates": space.coordinates,
        "basis": basis_json,
    }
    return _emit(args, "\n".join(lines), payload)


def _cmd_recover_inner(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    table = _load_map(args.map)
    if table.algebra is not algebra:
        raise ParseError(f"map file algebra {table.algebra} does not match --algebra {algebra}")
    if algebra is Algebra.WPLUS:
        a = derivations.recover_inner_wplus(table)
    elif algebra is Algebra.WITT:
        a = derivations.recover_inner_witt(table)
    else:
        raise _UsageError(f"recover-inner handles witt and wplus, not {algebra}")
    return _emit(
        args,
        f"a = {format_element(a)}",
        {"algebra": a.algebra.value, "element": format_element(a)},
    )


def _cmd_centralizer(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    window = Window.parse(args.window)
    t = parse_element(args.element, algebra)
    space = twolocal.centralizer(algebra, t, window)
    payload = {
        "algebra": algebra.value,
        "element": format_element(t),
        "window": _window_json(window),
        **_subspace_json(space),
    }
    return _emit(args, _subspace_text(space), payload)


def _cmd_rigidity(args) -> int:
    algebra = Algebra.from_name(args.algebra)
    window = Window.parse(args.window)
    x = parse_element(args.element, algebra)
    baseline_result = None
    if args.baseline:
        baseline = _load_map(args.baseline)
        if baseline.algebra is not algebra:
            raise ParseError(
                f"baseline algebra {baseline.algebra} does not match --algebra {algebra}"
            )
        depth = max(abs(baseline.window.lo), abs(baseline.window.hi))
        baseline_result = derivations.leibniz_check(baseline, depth)
    trace = twolocal.rigidity_check(algebra, x, window)
    lines = [f"target = {format_element(x)}"]
    lines.append("probes: " + ", ".join(f"e_{p}" for p in trace.probes))
    if baseline_result is not None:
        verdict = "pass" if baseline_result.passed else "fail"
        lines.append(
            f"baseline: leibniz {verdict} ({baseline_result.pairs_checked} pairs checked); "
            "trace applies to the remainder after subtracting it"
        )
    for p, space in zip(trace.probes, trace.forced):
        lines.append(f"probe e_{p}: {_subspace_text(space)}")
    lines.append(f"intersection: {_subspace_text(trace.intersection)}")
    lines.append(f"rigid = {str(trace.rigid).lower()}")
    payload = {
        "algebra": algebra.value,
        "target": format_element(x),
        "window": _window_json(window),
        "probes": trace.probes,
        "baseline_leibniz": None
        if baseline_result is None
        else {"pass": baseline_result.passed, "pairs_checked": baseline_result.pairs_checked},
        "forced": [
            {"probe": p, **_subspace_json(s)} for p, s in zip(trace.probes, trace.forced)
        ],
        "intersection": _subspace_json(trace.intersection),
        "rigid": trace.rigid,
    }
    return _emit(args, "\n".join(lines), payload)


def _cmd_twolocal_verify(args) -> int:
    try:
        with open(args.pairs, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read pairs file {args.pairs}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"pairs file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("algebra") != "thin":
        raise ParseError('pairs file must be {"algebra": "thin", "pairs": [...]}')
    raw_pairs = data.get("pairs")
    if not isinstance(raw_pairs, list):
        raise ParseError("pairs file must carry a list under \"pairs\"")
    lines = []
    results = []
    all_pass = True
    for n, entry in enumerate(raw_pairs, start=1):
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError(f"pair {n} is not a two-element list")
        x = parse_element(entry[0], Algebra.THIN)
        y = parse_element(entry[1], Algebra.THIN)
        cert = twolocal.thin_witness(x, y)
        verdict = twolocal.verify_pair(twolocal.thin_delta, cert)
        all_pass = all_pass and verdict.passed
        witness = cert.witness
        d1, d2 = witness.image(1), witness.image(2)
        lines.append(
            f"[{n}] case={cert.case} | D(e_1) = {format_element(d1)} | "
            f"D(e_2) = {format_element(d2)} | pass={str(verdict.passed).lower()}"
        )
        results.append(
            {
                "pair": [format_element(x), format_element(y)],
                "case": cert.case,
                "witness": derivations.table_to_json(witness),
                "pass": verdict.passed,
            }
        )
    lines.append(f"all pass: {str(all_pass).lower()}")
    payload = {"algebra": "thin", "results": results, "all_pass": all_pass}
    return _emit(args, "\n".join(lines), payload)


def _cmd_twolocal_additivity(args) -> int:
    x = parse_element("e_1 + e_2", Algebra.THIN)
    y = parse_element("-e_1 + e_2", Algebra.THIN)
    outcome = twolocal.additivity_violation(twolocal.thin_delta, x, y)
    delta_of_sum = twolocal.thin_delta(x + y)
    sum_of_deltas = twolocal.thin_delta(x) + twolocal.thin_delta(y)
    lines = [
        f"x = {format_element(x)}",
        f"y = {format_element(y)}",
        f"delta(x + y) = {format_element(delta_of_sum)}",
        f"delta(x) + delta(y) = {format_element(sum_of_deltas)}",
        f"violated = {str(outcome.violated).lower()}",
    ]
    payload = {
        "x": format_element(x),
        "y": format_element(y),
        "delta_of_sum": format_element(delta_of_sum),
        "sum_of_deltas": format_element(sum_of_deltas),
        "residual": format_element(outcome.residual),
        "violated": outcome.violated,
    }
    return _emit(args, "\n".join(lines), payload)


def _add_format(parser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wittlocal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", help="Lie bracket of two elements")
    p.add_argument("--algebra", required=True)
    p.add_argument("x")
    p.add_argument("y")
    _add_format(p)
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("jacobi", help="exhaustive Jacobi identity check on a window")
    p.add_argument("--algebra", required=True)
    p.add_argument("--window", required=True, help="inclusive index range a:b")
    _add_format(p)
    p.set_defaults(func=_cmd_jacobi)

    p = sub.add_parser("leibniz", help="Leibniz-law check of a map table")
    p.add_argument("--algebra", required=True)
    p.add_argument("--map", required=True, help="map table JSON file")
    p.add_argument("--depth", required=True, type=int)
    _add_format(p)
    p.set_defaults(func=_cmd_leibniz)

    p = sub.add_parser("extend", help="extend generator images to a derivation table")
    p.add_argument("--algebra", required=True)
    p.add_argument("--e1", required=True, help="image of e_1")
    p.add_argument("--e2", required=True, help="image of e_2")
    p.add_argument("--truncation", required=True, type=int)
    _add_format(p)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("der-basis", help="basis of the derivation space")
    p.add_argument("--algebra", required=True)
    p.add_argument("--support", required=True, type=int)
    p.add_argument("--depth", type=int, default=None)
    _add_format(p)
    p.set_defaults(func=_cmd_der_basis)

    p = sub.add_parser("recover-inner", help="inner element behind a derivation table")
    p.add_argument("--algebra", required=True)
    p.add_argument("--map", required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_recover_inner)

    p = sub.add_parser("centralizer", help="elements commuting with a given one")
    p.add_argument("--algebra", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--window", required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_centralizer)

    p = sub.add_parser("rigidity", help="forced-image rigidity trace for a target")
    p.add_argument("--algebra", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--baseline", default=None, help="map table JSON to subtract first")
    p.add_argument("--window", required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_rigidity)

    p = sub.add_parser("two-local", help="2-local derivation tools")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    v = tsub.add_parser("verify", help="batch-verify witness certificates for a pairs file")
    v.add_argument("--pairs", required=True, help="pairs JSON file")
    _add_format(v)
    v.set_defaults(func=_cmd_twolocal_verify)
    a = tsub.add_parser("additivity", help="the additivity counterexample computation")
    _add_format(a)
    a.set_defaults(func=_cmd_twolocal_additivity)

    return parser


# Options whose values may begin with "-" (windows like -10:10, elements
# like -e_1 + e_2); argparse would lex such values as option strings, so
# they are joined into --opt=value form up front.
_DASH_VALUE_OPTS = {"--window", "--element", "--e1", "--e2"}


def _join_dash_values(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _DASH_VALUE_OPTS and nxt is not None and nxt.startswith("-") and nxt != "--":
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_dash_values(argv))
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        TruncationTooSmall,
        NotADerivation,
        WindowTooSmall,
        MixedAlgebras,
        IndexOutOfDomain,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WittlocalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
