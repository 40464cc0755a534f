"""Command-line surface: field | directions | verify | search.

All machine formats use canonical integer indices; JSON is emitted with
sorted keys so repeated runs diff cleanly. Exit codes: 0 success,
1 counterexample found, 2 invalid input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .criteria_verify import (
    CampaignSpec,
    VerificationReport,
    cor1_criterion,
    cor2_criterion,
    is_permutation_oracle,
    main2_criterion,
    run_campaign,
    run_search,
    sziklai_classify,
    THEOREMS,
)
from .direction_engine import direction_set, inverse_set, product_set
from .errors import BudgetExceeded, DirsetError
from .field_core import FieldContext, build_field, is_prime
from .poly_fn import (
    FqFunction,
    detect_monomial_form,
    format_poly,
    is_additive,
    is_affine,
    parse_poly,
    parse_table,
)


def parse_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = 2
    while q % p:
        p += 1
        if p * p > q:
            p = q
            break
    n = 0
    rest = q
    while rest % p == 0:
        rest //= p
        n += 1
    if rest != 1 or not is_prime(p):
        raise ValueError(f"q = {q} is not a prime power")
    return p, n


def _modulus_str(modulus) -> str:
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            x = "x" if i == 1 else f"x^{i}"
            terms.append(x if c == 1 else f"{c}{x}")
    return " + ".join(terms) if terms else "0"


def _flatten(obj, prefix: str, rows: list) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(obj[key], f"{prefix}{key}." if prefix else f"{key}.", rows)
    elif isinstance(obj, list):
        rows.append((prefix[:-1], json.dumps(obj, sort_keys=True)))
    else:
        rows.append((prefix[:-1], obj))


def _to_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    rows: list = []
    _flatten(payload, "", rows)
    for key, value in rows:
        writer.writerow([key, "" if value is None else value])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(payload: dict, fmt: str, human: str, out: str | None) -> None:
    if fmt == "json":
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)
    elif fmt == "csv":
        _emit(_to_csv(payload), out)
    else:
        _emit(human, out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_field(args) -> int:
    ctx = build_field(args.p, args.n)
    desc = ctx.describe()
    human = (f"GF({ctx.q}) = GF({ctx.p}^{ctx.n})\n"
             f"modulus {desc['modulus']} ({_modulus_str(ctx.modulus)})\n"
             f"generator {ctx.generator}\n")
    _dump(desc, args.format, human, args.out)
    return 0


def analyze_function(f: FqFunction) -> dict:
    """Everything the directions report shows, as one JSON-ready dict."""
    ctx = f.ctx
    ds = direction_set(f)
    d = ds.elements
    dinv = inverse_set(ctx, d)
    dinv_d = product_set(ctx, dinv, d)
    triple = product_set(ctx, dinv_d, dinv)

    criteria: dict = {}
    if f.is_constant():
        criteria["main2"] = None
        criteria["cor1"] = None
    else:
        v = main2_criterion(f)
        criteria["main2"] = {"proven": v.proven, "set_size": v.set_size,
                             "threshold": v.threshold}
        v = cor1_criterion(f)
        criteria["cor1"] = {"proven": v.proven, "set_size": v.set_size,
                            "threshold": v.threshold}
    c2 = cor2_criterion(f)
    criteria["cor2"] = {"proven": c2.proven, "set_size": c2.set_size,
                        "threshold": c2.threshold,
                        "form": c2.form.to_list() if c2.form else None}

    containment = []
    for div in range(2, ctx.q):
        if (ctx.q - 1) % div == 0:
            res = sziklai_classify(f, div)
            containment.append({"d": div, "contained": res.contained})

    form = detect_monomial_form(f)
    return {
        "field": ctx.describe(),
        "poly": format_poly(f),
        "table": list(f.values),
        "degree": f.degree,
        "directions": d.to_list(),
        "sizes": {"directions": len(d), "inv_product": len(dinv_d),
                  "inv_product_inv": len(triple)},
        "contains_zero_direction": ds.contains_zero,
        "is_permutation": is_permutation_oracle(f),
        "is_additive": is_additive(f),
        "is_affine": is_affine(f),
        "monomial_form": form.to_list() if form else None,
        "criteria": criteria,
        "subgroup_containment": containment,
    }


def _directions_human(a: dict) -> str:
    lines = [
        f"f over GF({a['field']['q']}): poly {a['poly']} (degree {a['degree']})",
        f"table: {','.join(map(str, a['table']))}",
        f"directions ({a['sizes']['directions']}): {a['directions']}",
        (f"|D| = {a['sizes']['directions']}, "
         f"|D^-1 D| = {a['sizes']['inv_product']}, "
         f"|D^-1 D D^-1| = {a['sizes']['inv_product_inv']}"),
        f"permutation: {a['is_permutation']}",
        f"additive: {a['is_additive']}, affine: {a['is_affine']}",
        f"monomial form (a, k, b): {a['monomial_form']}",
    ]
    for name in ("main2", "cor1", "cor2"):
        v = a["criteria"][name]
        if v is None:
            lines.append(f"{name}: not applicable (constant)")
        else:
            status = "fires" if v["proven"] else "inconclusive"
            lines.append(f"{name}: {status} (size {v['set_size']} vs "
                         f"threshold {v['threshold']})")
    for entry in a["subgroup_containment"]:
        inside = "inside" if entry["contained"] else "not inside"
        lines.append(f"directions {inside} M_{entry['d']} + {{0}}")
    return "\n".join(lines) + "\n"


def cmd_directions(args) -> int:
    p, n = parse_prime_power(args.q)
    ctx = build_field(p, n)
    f = parse_poly(args.poly, ctx) if args.poly is not None else parse_table(args.table, ctx)
    analysis = analyze_function(f)
    _dump(analysis, args.format, _directions_human(analysis), args.out)
    return 0


def _report_human(report: VerificationReport) -> str:
    lines = [
        f"spec: {json.dumps(report.spec, sort_keys=True)}",
        f"checked {report.checked}, fired {report.fired}, "
        f"counterexamples {len(report.counterexamples)}",
        f"extremes: {json.dumps(report.extremes, sort_keys=True)}",
        f"elapsed {report.elapsed_ms} ms",
    ]
    if report.members is not None:
        lines.insert(1, f"members: {len(report.members)}")
        for m in report.members:
            lines.append(f"  #{m['index']} poly {m['poly']} form {m['form']}")
    return "\n".join(lines) + "\n"


def _emit_report(report: VerificationReport, fmt: str, out: str | None) -> int:
    if fmt == "json":
        _emit(report.to_json(), out)
    elif fmt == "csv":
        payload = report.to_dict()
        payload["counterexample_count"] = len(report.counterexamples)
        if report.members is not None:
            payload["member_count"] = len(report.members)
        _emit(_to_csv(payload), out)
    else:
        _emit(_report_human(report), out)
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    p, n = parse_prime_power(args.q)
    spec = CampaignSpec(p=p, n=n, theorem=args.theorem, family=args.family,
                        d=args.d, seed=args.seed, budget=args.budget,
                        jobs=args.jobs)
    return _emit_report(run_campaign(spec), args.format, args.out)


def cmd_search(args) -> int:
    p, n = parse_prime_power(args.q)
    spec = CampaignSpec(p=p, n=n, theorem="conj", family=args.family,
                        d=args.d, seed=args.seed, budget=args.budget,
                        jobs=args.jobs)
    return _emit_report(run_search(spec), args.format, args.out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirset",
        description="Direction sets of function graphs over GF(q) and "
                    "exhaustive verification of permutation criteria.")
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", help="construct a field and print its description")
    f.add_argument("--p", type=int, required=True, help="prime characteristic")
    f.add_argument("--n", type=int, required=True, help="extension degree")
    f.add_argument("--format", choices=["json", "human"], default="human")
    f.add_argument("--out", help="write output to this path")
    f.set_defaults(func=cmd_field)

    d = sub.add_parser("directions", help="analyze one function's direction set")
    d.add_argument("--q", type=int, required=True, help="field size p^n")
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help="coefficients, constant first, e.g. 0,0,1")
    g.add_argument("--table", help="value table, q comma-separated indices")
    d.add_argument("--format", choices=["json", "csv", "human"], default="human")
    d.add_argument("--out")
    d.set_defaults(func=cmd_directions)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--theorem", choices=list(THEOREMS), required=True)
    v.add_argument("--family", default="all",
                   help="all | poly-deg-D | monic-deg-D | monomial-forms | random-N")
    v.add_argument("--d", type=int, help="subgroup index for conj/result1")
    v.add_argument("--seed", type=int, help="PRNG seed for random families")
    v.add_argument("--budget", type=int,
                   help="enumeration cap (overrides DIRSET_BUDGET)")
    v.add_argument("--jobs", type=int, default=1, help="parallel workers")
    v.add_argument("--format", choices=["json", "csv", "human"], default="json")
    v.add_argument("--out", help="write the report to this path")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search",
                       help="list functions whose directions stay in M_d + {0}")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--family", default="all")
    s.add_argument("--seed", type=int)
    s.add_argument("--budget", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=["json", "csv", "human"], default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DirsetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
