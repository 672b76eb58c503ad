"""Command-line front door for the engine.

Exit codes: 0 success, 1 check failure (involution mismatch, failed
bimodule identity, inconsistent degree-0 criterion, invalid QP), 2 input
error (unreadable file, parse diagnostics, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import examples
from .errors import QpcalcError
from .fields import FieldError, field_by_name
from .ginzburg import build_ginzburg, check_d_squared, degree0_criterion, truncation_homology
from .dgmod import build_mutation_bimodule, image_of_simple, verify_bimodule_relations
from .mutation import involution_report, mutate
from .qp import jacobian_dims, split, validate_qp
from .qpformat import (
    Diagnostic,
    format_qp_text,
    parse_qp_text,
    qp_from_json_dict,
    qp_to_json_dict,
    quiver_to_dot,
)


def parse_range(text: str) -> list[int]:
    """'A..B' inclusive; a single integer is a one-element range."""
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def load_qp(path: str, field, trunc_override):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return None, [Diagnostic(0, 0, f"cannot read {path}: {exc.strerror or exc}")]
    if path.endswith(".json") or text.lstrip().startswith("{"):
        try:
            q = qp_from_json_dict(json.loads(text), field)
            diags = []
        except (ValueError, KeyError, QpcalcError) as exc:
            return None, [Diagnostic(0, 0, f"bad JSON QP: {exc}")]
    else:
        q, diags = parse_qp_text(text, field)
    if q is not None and trunc_override is not None:
        from .qp import QP, Potential
        if trunc_override < 2:
            return None, [Diagnostic(0, 0, "truncation must be >= 2")]
        pot = Potential(q.quiver, trunc_override,
                        list(q.potential.terms()), q.field)
        q = QP(q.quiver, pot, trunc_override, q.field)
    return q, diags


def emit(payload: dict, as_json: bool, text: str):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _qp_summary(q) -> dict:
    d = qp_to_json_dict(q)
    d["accuracy"] = q.accuracy
    return d


def cmd_validate(args, q) -> int:
    rep = validate_qp(q)
    payload = {
        "valid": rep.valid,
        "in_m2": rep.in_m2,
        "cyclically_normalized": rep.cyclically_normalized,
        "vertices": {
            v: {"loop": r.loop, "two_cycle": r.two_cycle,
                "cycle_based_here": r.cycle_based_here,
                "mutable": not (r.loop or r.two_cycle)}
            for v, r in rep.vertex.items()
        },
    }
    lines = [f"valid: {rep.valid} (W in m^2: {rep.in_m2}, "
             f"normalized: {rep.cyclically_normalized})"]
    for v, r in rep.vertex.items():
        flags = []
        if r.loop:
            flags.append("loop (c1)")
        if r.two_cycle:
            flags.append("2-cycle (c2)")
        if r.cycle_based_here:
            flags.append("cycle starts/ends here (c3)")
        lines.append(f"  vertex {v}: {', '.join(flags) if flags else 'ok'}")
    emit(payload, args.json, "\n".join(lines))
    return 0 if rep.valid else 1


def cmd_mutate(args, q) -> int:
    res = mutate(q, args.vertex)
    payload = {
        "vertex": args.vertex,
        "qp": _qp_summary(res.result),
        "trivial_pairs": [list(p) for p in (res.trivial_pairs or [])],
        "name_table": res.name_table,
    }
    text = format_qp_text(res.result)
    if res.trivial_pairs:
        text += "# cancelled trivial pairs: " + ", ".join(
            f"({a}, {b})" for a, b in res.trivial_pairs)
    emit(payload, args.json, text)
    return 0


def cmd_mutate_seq(args, q) -> int:
    steps = []
    cur = q
    for v in args.vertices.split(","):
        v = v.strip()
        if v not in cur.quiver.vertex_index:
            print(f"error: unknown vertex {v!r}", file=sys.stderr)
            return 2
        res = mutate(cur, v)
        steps.append({
            "vertex": v,
            "trivial_pairs": [list(p) for p in (res.trivial_pairs or [])],
            "arrows": len(res.result.quiver.arrows),
        })
        cur = res.result
    payload = {"steps": steps, "qp": _qp_summary(cur)}
    text = format_qp_text(cur) + f"# after sequence {args.vertices}; accuracy {cur.accuracy}"
    emit(payload, args.json, text)
    return 0


def cmd_reduce(args, q) -> int:
    sp = split(q)
    payload = {
        "trivial_pairs": [list(p) for p in sp.trivial_pairs],
        "reduced": _qp_summary(sp.reduced),
        "witness": {
            name: [[str(c), [x.name for x in p.letters()]]
                   for p, c in img.sorted_terms()]
            for name, img in sp.witness.images.items()
        },
    }
    text = format_qp_text(sp.reduced)
    text += "# trivial pairs: " + (
        ", ".join(f"({a}, {b})" for a, b in sp.trivial_pairs) or "none")
    emit(payload, args.json, text)
    return 0


def cmd_jacobian(args, q) -> int:
    from .qp import dims_stabilized
    orders = parse_range(args.orders)
    dims = jacobian_dims(q, orders)
    stable = dims_stabilized(dims)
    payload = {"orders": orders, "dims": dims, "stabilized_last_3": stable}
    lines = ["order  dim"] + [f"{o:>5}  {d}" for o, d in zip(orders, dims)]
    lines.append(
        "# dimension sequence stabilized over the last 3 orders"
        " (heuristic, not a theorem)" if stable else
        "# dimension sequence still growing at the last computed orders")
    emit(payload, args.json, "\n".join(lines))
    return 0


def cmd_ginzburg_homology(args, q) -> int:
    g = build_ginzburg(q)
    orders = parse_range(args.orders)
    degrees = parse_range(args.degrees)
    table = truncation_homology(g, orders, degrees)
    payload = table.to_json()
    payload["d_squared_zero"] = check_d_squared(g)
    emit(payload, args.json, table.format_text())
    return 0


def cmd_verify_bimodule(args, q) -> int:
    b = build_mutation_bimodule(q, args.vertex)
    rep = verify_bimodule_relations(b)
    payload = {
        "vertex": args.vertex,
        "verified_mod_order": rep.verified_mod_order,
        "passed": rep.passed,
        "checks": [{"name": c.name, "ok": c.ok} for c in rep.checks],
    }
    if rep.passed:
        text = f"all identities verified at order {rep.verified_mod_order}"
    else:
        text = "\n".join(f"FAIL {c.name}" for c in rep.failures())
    emit(payload, args.json, text)
    return 0 if rep.passed else 1


def cmd_image_of_simple(args, q) -> int:
    b = build_mutation_bimodule(q, args.vertex)
    complex_, dims = image_of_simple(b, args.simple, args.order)
    payload = {"vertex": args.vertex, "simple": args.simple,
               "order": args.order, "dims": {str(k): v for k, v in dims.items()},
               "complex": complex_.to_json()}
    lines = [f"F(S'_{args.simple}) at order {args.order}:"]
    for p in sorted(dims):
        lines.append(f"  degree {p:>3}: dim {dims[p]}")
    emit(payload, args.json, "\n".join(lines))
    return 0


def cmd_involution(args, q) -> int:
    reports = [(None, involution_report(q, args.vertex))]
    if args.random:
        rng = random.Random(args.seed)
        made = 0
        while made < args.random:
            rq = examples.random_qp(rng)
            ok_vs = [v for v in rq.quiver.vertices if rq.is_mutable(v)[0]]
            if not ok_vs:
                continue
            v = rng.choice(ok_vs)
            reports.append((f"random[{made}]@{v}", involution_report(rq, v)))
            made += 1
    payload = {"reports": []}
    lines = []
    ok = True
    for label, rep in reports:
        name = label or f"input@{rep.vertex}"
        payload["reports"].append({
            "case": name,
            "arrow_multisets_equal": rep.arrow_multisets_equal,
            "orders": rep.jacobian_orders,
            "dims_original": rep.dims_original,
            "dims_double_mutation": rep.dims_double_mutation,
            "passed": rep.passed,
        })
        lines.append(f"{name}: {'pass' if rep.passed else 'FAIL'} "
                     f"(arrows {'=' if rep.arrow_multisets_equal else '!='}, "
                     f"dims {rep.dims_original} vs {rep.dims_double_mutation})")
        ok = ok and rep.passed
    emit(payload, args.json, "\n".join(lines))
    return 0 if ok else 1


def cmd_degree0(args, q) -> int:
    orders = parse_range(args.orders)
    reports = [degree0_criterion(q, args.vertex, n) for n in orders]
    payload = {"vertex": args.vertex, "reports": [
        {"order": r.order, "dims": {str(k): v for k, v in r.dims.items()},
         "windows": {str(k): v for k, v in r.windows.items()},
         "consistent": r.consistent, "f_injective": r.f_injective}
        for r in reports
    ]}
    lines = []
    for r in reports:
        verdict = "consistent with S_i" if r.consistent else "inconsistent"
        lines.append(f"order {r.order}: {verdict}; dims "
                     + " ".join(f"H^{p}={r.dims[p]}" for p in sorted(r.dims)))
    emit(payload, args.json, "\n".join(lines))
    return 0 if all(r.consistent for r in reports) else 1


def cmd_export(args, q) -> int:
    if args.format == "dot":
        if args.ginzburg:
            out = quiver_to_dot(build_ginzburg(q).quiver, "Ginzburg")
        else:
            out = quiver_to_dot(q.quiver)
    else:
        out = json.dumps(qp_to_json_dict(q), indent=2, sort_keys=True) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            print(f"cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        print(out, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qpcalc",
        description="Exact computer algebra for quivers with potential.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, needs_vertex=False):
        p.add_argument("input", help="QP file (text format or JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--truncation", type=int, default=None,
                       help="override the truncation order")
        p.add_argument("--field", default="rational",
                       help="rational (default) or fp:<prime>")
        if needs_vertex:
            p.add_argument("-i", "--vertex", required=True, help="vertex to act at")

    p = sub.add_parser("validate", help="check QP conditions")
    common(p)
    p = sub.add_parser("mutate", help="DWZ mutation at a vertex")
    common(p, needs_vertex=True)
    p = sub.add_parser("mutate-seq", help="mutate at a comma-separated vertex sequence")
    common(p)
    p.add_argument("-i", "--vertices", required=True, help="e.g. 1,2,1")
    p = sub.add_parser("reduce", help="split into trivial + reduced parts")
    common(p)
    p = sub.add_parser("jacobian", help="truncated Jacobian dimension sequence")
    common(p)
    p.add_argument("--orders", default="1..5", help="A..B (inclusive)")
    p = sub.add_parser("ginzburg-homology", help="homology table of Gamma/m^n")
    common(p)
    p.add_argument("--orders", default="1..5")
    p.add_argument("--degrees", default="-2..0")
    p = sub.add_parser("verify-bimodule", help="check the mutation bimodule identities")
    common(p, needs_vertex=True)
    p = sub.add_parser("image-of-simple", help="homology of F(S'_j)")
    common(p, needs_vertex=True)
    p.add_argument("-j", "--simple", required=True, help="which simple S'_j")
    p.add_argument("--order", type=int, default=5)
    p = sub.add_parser("involution", help="check mutate twice against reduce")
    common(p, needs_vertex=True)
    p.add_argument("--random", type=int, default=0,
                   help="also check this many seeded random QPs")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("degree0", help="degree-0 concentration criterion")
    common(p, needs_vertex=True)
    p.add_argument("--orders", default="5..6")
    p = sub.add_parser("export", help="export DOT or JSON")
    common(p)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--ginzburg", action="store_true",
                   help="export the Ginzburg graded quiver instead of Q")
    p.add_argument("-o", "--output", default=None)
    return ap


HANDLERS = {
    "validate": cmd_validate,
    "mutate": cmd_mutate,
    "mutate-seq": cmd_mutate_seq,
    "reduce": cmd_reduce,
    "jacobian": cmd_jacobian,
    "ginzburg-homology": cmd_ginzburg_homology,
    "verify-bimodule": cmd_verify_bimodule,
    "image-of-simple": cmd_image_of_simple,
    "involution": cmd_involution,
    "degree0": cmd_degree0,
    "export": cmd_export,
}


def _glue_negative_ranges(argv):
    """Let `--degrees -2..0` parse despite the leading dash."""
    if argv is None:
        argv = sys.argv[1:]
    out = []
    skip = False
    for k, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in ("--degrees", "--orders") and k + 1 < len(argv) \
                and argv[k + 1].startswith("-"):
            out.append(f"{tok}={argv[k + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(_glue_negative_ranges(argv))
    try:
        field = field_by_name(args.field)
    except FieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    q, diags = load_qp(args.input, field, args.truncation)
    if q is None:
        for d in diags:
            print(d.render(), file=sys.stderr)
        return 2
    for attr in ("vertex", "simple"):
        v = getattr(args, attr, None)
        if v is not None and v not in q.quiver.vertex_index:
            print(f"error: unknown vertex {v!r}", file=sys.stderr)
            return 2
    try:
        return HANDLERS[args.verb](args, q)
    except QpcalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
