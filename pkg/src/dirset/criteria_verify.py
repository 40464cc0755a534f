"""Permutation criteria, classification checks, and the campaign engine.

The criteria all reduce to cardinalities of direction-set products:

* ``main2``: |D^(-1)D| < q - deg(f) + 2 forces f to be a permutation.
* ``cor1``:  |D^(-1)D| <= (q+1)/2 forces a permutation (non-constant f).
* ``conj``:  D inside M_d + {0} forces the shape a*x^(p^k) + b.
* ``cor2``:  |D^(-1) D D^(-1)| <= (q+1)/2 forces the same shape.
* ``result1``/``result2``: statement-level implication checks.
* ``main``:  the line-incidence product bound, swept over all q^2 lines.

Campaigns enumerate a function family deterministically (value tables and
coefficient vectors are base-q counters with the least-significant position
at index 0), apply one criterion per instance, and fold per-chunk results
associatively so parallel runs reproduce the sequential report byte for byte.
"""

from __future__ import annotations

import json
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from random import Random

from .direction_engine import (
    DirectionSet,
    build_h_set,
    direction_set,
    direction_set_within,
    inverse_set,
    product_set,
    shift_set,
)
from .errors import (
    BudgetExceeded,
    ConstantFunction,
    DegreeOutOfRange,
    InvalidSpec,
    NonDivisor,
)
from .field_core import ElementSet, FieldContext, build_field, mult_subgroup
from .poly_fn import (
    FqFunction,
    MonomialForm,
    _horner,
    _lagrange_rows,
    detect_monomial_form,
    format_poly,
    is_affine,
)

THEOREMS = ("main", "main2", "cor1", "conj", "cor2", "result1", "result2")
DEFAULT_BUDGET = 2_000_000
BUDGET_ENV = "DIRSET_BUDGET"


# ---------------------------------------------------------------------------
# single-function criteria
# ---------------------------------------------------------------------------

def is_permutation_oracle(f: FqFunction) -> bool:
    """Brute-force bijectivity: all q table values distinct."""
    return len(set(f.values)) == f.ctx.q


@dataclass(frozen=True)
class Verdict:
    criterion: str
    proven: bool           # permutation established by the size bound alone
    set_size: int
    threshold: int
    oracle: bool           # independent table-distinctness check

    def sound(self) -> bool:
        return self.oracle or not self.proven


def _dinv_d(ctx: FieldContext, d: ElementSet) -> ElementSet:
    return product_set(ctx, inverse_set(ctx, d), d)


def main2_criterion(f: FqFunction) -> Verdict:
    """Permutation test via |D^(-1)D| against q - deg(f) + 2."""
    k = f.degree
    if k < 1:
        raise DegreeOutOfRange(f"need reduced degree in (0, q); got {k}")
    ctx = f.ctx
    size = len(_dinv_d(ctx, direction_set(f).elements))
    threshold = ctx.q - k + 2
    return Verdict("main2", size < threshold, size, threshold,
                   is_permutation_oracle(f))


def cor1_criterion(f: FqFunction) -> Verdict:
    """Permutation test via |D^(-1)D| against (q+1)/2, degree-free."""
    if f.is_constant():
        raise ConstantFunction("criterion needs a non-constant function")
    ctx = f.ctx
    size = len(_dinv_d(ctx, direction_set(f).elements))
    return Verdict("cor1", 2 * size <= ctx.q + 1, size, (ctx.q + 1) // 2,
                   is_permutation_oracle(f))


@dataclass(frozen=True)
class SziklaiResult:
    contained: bool                 # D_f inside M_d + {0}
    form: MonomialForm | None       # must be present whenever contained


def sziklai_classify(f: FqFunction, d: int) -> SziklaiResult:
    """Early-exit containment of D_f in M_d + {0}, then shape detection.

    A contained function without a monomial form would be a counterexample;
    the caller decides how to record it.
    """
    ctx = f.ctx
    if d <= 1 or (ctx.q - 1) % d != 0:
        raise NonDivisor(f"d = {d} must be a divisor of q - 1 = {ctx.q - 1} with d > 1")
    allowed = ElementSet(ctx.q, mult_subgroup(ctx, d).mask | 1)
    if direction_set_within(f, allowed) is None:
        return SziklaiResult(False, None)
    return SziklaiResult(True, detect_monomial_form(f))


@dataclass(frozen=True)
class Cor2Result:
    proven: bool                    # triple product small enough
    set_size: int
    threshold: int
    form: MonomialForm | None


def cor2_criterion(f: FqFunction) -> Cor2Result:
    """Shape test via |D^(-1) D D^(-1)| against (q+1)/2."""
    ctx = f.ctx
    d = direction_set(f).elements
    dinv = inverse_set(ctx, d)
    triple = product_set(ctx, product_set(ctx, dinv, d), dinv)
    size = len(triple)
    proven = 2 * size <= ctx.q + 1
    return Cor2Result(proven, size, (ctx.q + 1) // 2,
                      detect_monomial_form(f) if proven else None)


def result1_check(f: FqFunction, d: int) -> bool:
    """Implication: D_f inside M_d (no zero) forces a monomial form."""
    ctx = f.ctx
    if d <= 1 or (ctx.q - 1) % d != 0:
        raise NonDivisor(f"d = {d} must be a divisor of q - 1 = {ctx.q - 1} with d > 1")
    if direction_set_within(f, mult_subgroup(ctx, d)) is None:
        return True
    return detect_monomial_form(f) is not None


def result2_check(f: FqFunction) -> bool:
    """Implication: |D_f| <= (q+1)/2 forces an affine polynomial."""
    if 2 * len(direction_set(f)) > f.ctx.q + 1:
        return True
    return is_affine(f)


# ---------------------------------------------------------------------------
# campaign specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CampaignSpec:
    """What to enumerate and which check to apply.

    Families: ``all`` (every value table), ``poly-deg-D`` (all coefficient
    vectors of length D+1), ``monic-deg-D`` (monic polynomials of degree
    1..D), ``monomial-forms`` (all a*x^(p^k)+b with constants listed once),
    ``random-N`` (N seeded uniform tables).
    """

    p: int
    n: int
    theorem: str
    family: str
    d: int | None = None
    seed: int | None = None
    budget: int | None = None
    jobs: int = 1

    def echo(self) -> dict:
        # jobs and budget steer execution, not meaning; reports stay
        # byte-identical across parallelism widths and budget overrides
        return {
            "p": self.p,
            "n": self.n,
            "q": self.p**self.n,
            "theorem": self.theorem,
            "family": self.family,
            "d": self.d,
            "seed": self.seed,
        }


def _parse_family(family: str) -> tuple[str, int | None]:
    if family == "all":
        return "all", None
    if family == "monomial-forms":
        return "forms", None
    m = re.fullmatch(r"poly-deg-(\d+)", family)
    if m:
        return "poly", int(m.group(1))
    m = re.fullmatch(r"monic-deg-(\d+)", family)
    if m:
        if int(m.group(1)) < 1:
            raise InvalidSpec("monic family needs degree >= 1")
        return "monic", int(m.group(1))
    m = re.fullmatch(r"random-(\d+)", family)
    if m:
        if int(m.group(1)) < 1:
            raise InvalidSpec("random family needs a positive sample size")
        return "random", int(m.group(1))
    raise InvalidSpec(f"unknown family {family!r}")


def _family_size(q: int, n: int, kind: str, param: int | None) -> int:
    if kind == "all":
        return q**q
    if kind == "poly":
        return q ** (param + 1)
    if kind == "monic":
        return sum(q**deg for deg in range(1, param + 1))
    if kind == "forms":
        return q + (q - 1) * n * q
    return param  # random


def effective_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def _validate(spec: CampaignSpec, kernel: str):
    if kernel not in _KERNELS:
        raise InvalidSpec(f"unknown theorem {kernel!r}; expected one of {THEOREMS}")
    if spec.jobs < 1:
        raise InvalidSpec("jobs must be >= 1")
    ctx = build_field(spec.p, spec.n)
    kind, param = _parse_family(spec.family)
    if kind in ("poly", "monic") and param > ctx.q - 1:
        raise InvalidSpec(f"degree bound {param} exceeds q - 1 = {ctx.q - 1}")
    if kernel in ("conj", "result1", "search"):
        if spec.d is None:
            raise InvalidSpec(f"theorem {kernel!r} requires a subgroup index d")
        if spec.d <= 1 or (ctx.q - 1) % spec.d != 0:
            raise NonDivisor(
                f"d = {spec.d} must be a divisor of q - 1 = {ctx.q - 1} with d > 1")
    elif spec.d is not None:
        raise InvalidSpec(f"theorem {kernel!r} does not take a subgroup index")
    size = _family_size(ctx.q, ctx.n, kind, param)
    cap = effective_budget(spec.budget)
    if size > cap:
        raise BudgetExceeded(
            f"family {spec.family} has {size} members, over the budget {cap}")
    return ctx, kind, param, size


# ---------------------------------------------------------------------------
# family enumeration (deterministic, chunkable by index range)
# ---------------------------------------------------------------------------

def _init_counter(value: int, base: int, length: int) -> list[int]:
    digits = []
    for _ in range(length):
        digits.append(value % base)
        value //= base
    return digits


def _iter_all(ctx: FieldContext, start: int, stop: int):
    q = ctx.q
    vals = _init_counter(start, q, q)
    top = q - 1
    for idx in range(start, stop):
        yield idx, tuple(vals)
        i = 0
        while i < q:
            if vals[i] == top:
                vals[i] = 0
                i += 1
            else:
                vals[i] += 1
                break


def _iter_poly(ctx: FieldContext, degree: int, start: int, stop: int):
    q = ctx.q
    length = degree + 1
    coeffs = _init_counter(start, q, length)
    for idx in range(start, stop):
        yield idx, tuple(_horner(ctx, coeffs, x) for x in range(q))
        i = 0
        while i < length:
            if coeffs[i] == q - 1:
                coeffs[i] = 0
                i += 1
            else:
                coeffs[i] += 1
                break


def _iter_monic(ctx: FieldContext, maxdeg: int, start: int, stop: int):
    q = ctx.q
    block_start = 0
    for deg in range(1, maxdeg + 1):
        block = q**deg
        lo = max(start, block_start)
        hi = min(stop, block_start + block)
        if lo < hi:
            coeffs = _init_counter(lo - block_start, q, deg)
            for idx in range(lo, hi):
                yield idx, tuple(_horner(ctx, coeffs + [1], x) for x in range(q))
                i = 0
                while i < deg:
                    if coeffs[i] == q - 1:
                        coeffs[i] = 0
                        i += 1
                    else:
                        coeffs[i] += 1
                        break
        block_start += block


def _iter_forms(ctx: FieldContext, start: int, stop: int):
    q = ctx.q
    frob = [[ctx.pow(x, ctx.p**k) for x in range(q)] for k in range(ctx.n)]
    idx = 0
    for b in range(q):                      # constants, listed once
        if start <= idx < stop:
            yield idx, tuple([b] * q)
        idx += 1
    for a in range(1, q):
        for k in range(ctx.n):
            fk = frob[k]
            for b in range(q):
                if start <= idx < stop:
                    yield idx, tuple(ctx.add(ctx.mul(a, fk[x]), b) for x in range(q))
                idx += 1
                if idx >= stop:
                    return


def _iter_random(ctx: FieldContext, seed: int | None, start: int, stop: int):
    q = ctx.q
    rng = Random(0 if seed is None else seed)
    for _ in range(start * q):
        rng.randrange(q)
    for idx in range(start, stop):
        yield idx, tuple(rng.randrange(q) for _ in range(q))


def _iter_family(ctx, kind, param, seed, start, stop):
    if kind == "all":
        return _iter_all(ctx, start, stop)
    if kind == "poly":
        return _iter_poly(ctx, param, start, stop)
    if kind == "monic":
        return _iter_monic(ctx, param, start, stop)
    if kind == "forms":
        return _iter_forms(ctx, start, stop)
    return _iter_random(ctx, seed, start, stop)


# ---------------------------------------------------------------------------
# kernels: one tight loop per criterion
# ---------------------------------------------------------------------------

@dataclass
class _Partial:
    checked: int = 0
    fired: int = 0
    counterexamples: list = field(default_factory=list)
    extremes: dict = field(default_factory=dict)
    members: list | None = None


_MERGE_RULES = {
    "min_margin": "min",
    "max_margin": "max",
    "min_size": "min",
    "max_size": "max",
    "min_triple_size": "min",
    "max_triple_size": "max",
    "min_contained_directions": "min",
    "max_contained_directions": "max",
    "equality_count": "sum",
    "equality_witness": "first",
    "h_set_checks": "sum",
    "skipped_constants": "sum",
}


def _merge(a: _Partial, b: _Partial) -> _Partial:
    out = _Partial(a.checked + b.checked, a.fired + b.fired,
                   a.counterexamples + b.counterexamples)
    for key in a.extremes.keys() | b.extremes.keys():
        u, v = a.extremes.get(key), b.extremes.get(key)
        rule = _MERGE_RULES[key]
        if u is None:
            out.extremes[key] = v
        elif v is None:
            out.extremes[key] = u
        elif rule == "min":
            out.extremes[key] = min(u, v)
        elif rule == "max":
            out.extremes[key] = max(u, v)
        elif rule == "sum":
            out.extremes[key] = u + v
        else:                        # "first": a precedes b in chunk order
            out.extremes[key] = u
    if a.members is not None or b.members is not None:
        out.members = (a.members or []) + (b.members or [])
    return out


def _pairs(ctx: FieldContext):
    t = ctx.tables()
    q = ctx.q
    return [(x, y, t.inv[t.sub[x][y]])
            for x in range(q) for y in range(x + 1, q)], t


def _dmask(tbl, pairs, sub_t, mul_t) -> int:
    mask = 0
    for x, y, invd in pairs:
        mask |= 1 << mul_t[sub_t[tbl[x]][tbl[y]]][invd]
    return mask


def _dinv_d_size(ctx, dmask, memo) -> int:
    size = memo.get(dmask)
    if size is None:
        es = ElementSet(ctx.q, dmask)
        size = len(product_set(ctx, inverse_set(ctx, es), es))
        memo[dmask] = size
    return size


def _seed_dirset(f: FqFunction, dmask: int) -> None:
    f._dirset = DirectionSet(ElementSet(f.ctx.q, dmask), dmask & 1 == 1)


def _containment_kernel(ctx, d, items, with_zero, collect):
    """Shared early-exit loop behind conj, result1 and search."""
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t = t.sub, t.mul
    allowed = mult_subgroup(ctx, d).mask | (1 if with_zero else 0)
    part = _Partial(extremes={"min_contained_directions": None,
                              "max_contained_directions": None})
    if collect:
        part.members = []
    for idx, tbl in items:
        part.checked += 1
        mask = 0
        contained = True
        for x, y, invd in pairs:
            dd = mul_t[sub_t[tbl[x]][tbl[y]]][invd]
            if not allowed >> dd & 1:
                contained = False
                break
            mask |= 1 << dd
        if not contained:
            continue
        part.fired += 1
        count = mask.bit_count()
        ext = part.extremes
        if ext["min_contained_directions"] is None:
            ext["min_contained_directions"] = ext["max_contained_directions"] = count
        else:
            ext["min_contained_directions"] = min(ext["min_contained_directions"], count)
            ext["max_contained_directions"] = max(ext["max_contained_directions"], count)
        f = FqFunction.from_values(ctx, tbl)
        _seed_dirset(f, mask)
        form = detect_monomial_form(f)
        if form is None:
            part.counterexamples.append({
                "index": idx,
                "function_table": list(tbl),
                "details": {"reason": "directions contained but no monomial form",
                            "d": d, "directions": ElementSet(q, mask).to_list()},
            })
        elif collect:
            part.members.append({"index": idx, "table": list(tbl),
                                 "poly": format_poly(f), "form": form.to_list()})
    return part


def _kernel_conj(ctx, d, items):
    return _containment_kernel(ctx, d, items, with_zero=True, collect=False)


def _kernel_result1(ctx, d, items):
    return _containment_kernel(ctx, d, items, with_zero=False, collect=False)


def _kernel_search(ctx, d, items):
    return _containment_kernel(ctx, d, items, with_zero=True, collect=True)


def _kernel_main2(ctx, d, items):
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t, add_t = t.sub, t.mul, t.add
    rows = _lagrange_rows(ctx)
    full = (1 << q) - 1
    memo: dict[int, int] = {}
    part = _Partial(extremes={"min_margin": None, "max_margin": None,
                              "skipped_constants": 0})
    ext = part.extremes
    for idx, tbl in items:
        part.checked += 1
        k = 0
        for m in range(q - 1, 0, -1):
            row = rows[m]
            c = 0
            for a in range(q):
                v = tbl[a]
                if v:
                    c = add_t[c][mul_t[v][row[a]]]
            if c:
                k = m
                break
        if k == 0:
            ext["skipped_constants"] += 1
            continue
        size = _dinv_d_size(ctx, _dmask(tbl, pairs, sub_t, mul_t), memo)
        margin = size - (q - k + 2)
        if ext["min_margin"] is None:
            ext["min_margin"] = ext["max_margin"] = margin
        else:
            if margin < ext["min_margin"]:
                ext["min_margin"] = margin
            if margin > ext["max_margin"]:
                ext["max_margin"] = margin
        if margin < 0:
            part.fired += 1
            occ = 0
            for v in tbl:
                occ |= 1 << v
            if occ != full:
                part.counterexamples.append({
                    "index": idx,
                    "function_table": list(tbl),
                    "details": {"reason": "size bound fired but f is not a permutation",
                                "degree": k, "set_size": size,
                                "threshold": q - k + 2},
                })
    return part


def _kernel_cor1(ctx, d, items):
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t = t.sub, t.mul
    full = (1 << q) - 1
    memo: dict[int, int] = {}
    part = _Partial(extremes={"min_size": None, "max_size": None,
                              "skipped_constants": 0})
    ext = part.extremes
    for idx, tbl in items:
        part.checked += 1
        if tbl.count(tbl[0]) == q:
            ext["skipped_constants"] += 1
            continue
        size = _dinv_d_size(ctx, _dmask(tbl, pairs, sub_t, mul_t), memo)
        if ext["min_size"] is None:
            ext["min_size"] = ext["max_size"] = size
        else:
            if size < ext["min_size"]:
                ext["min_size"] = size
            if size > ext["max_size"]:
                ext["max_size"] = size
        if 2 * size <= q + 1:
            part.fired += 1
            occ = 0
            for v in tbl:
                occ |= 1 << v
            if occ != full:
                part.counterexamples.append({
                    "index": idx,
                    "function_table": list(tbl),
                    "details": {"reason": "size bound fired but f is not a permutation",
                                "set_size": size, "threshold": (q + 1) // 2},
                })
    return part


def _kernel_cor2(ctx, d, items):
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t = t.sub, t.mul
    memo: dict[int, int] = {}
    part = _Partial(extremes={"min_triple_size": None, "max_triple_size": None})
    ext = part.extremes
    for idx, tbl in items:
        part.checked += 1
        dmask = _dmask(tbl, pairs, sub_t, mul_t)
        size = memo.get(dmask)
        if size is None:
            es = ElementSet(q, dmask)
            dinv = inverse_set(ctx, es)
            size = len(product_set(ctx, product_set(ctx, dinv, es), dinv))
            memo[dmask] = size
        if ext["min_triple_size"] is None:
            ext["min_triple_size"] = ext["max_triple_size"] = size
        else:
            if size < ext["min_triple_size"]:
                ext["min_triple_size"] = size
            if size > ext["max_triple_size"]:
                ext["max_triple_size"] = size
        if 2 * size <= q + 1:
            part.fired += 1
            f = FqFunction.from_values(ctx, tbl)
            _seed_dirset(f, dmask)
            if detect_monomial_form(f) is None:
                part.counterexamples.append({
                    "index": idx,
                    "function_table": list(tbl),
                    "details": {"reason": "triple product small but no monomial form",
                                "set_size": size, "threshold": (q + 1) // 2},
                })
    return part


def _kernel_result2(ctx, d, items):
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t = t.sub, t.mul
    part = _Partial(extremes={"min_contained_directions": None,
                              "max_contained_directions": None})
    ext = part.extremes
    for idx, tbl in items:
        part.checked += 1
        dmask = _dmask(tbl, pairs, sub_t, mul_t)
        size = dmask.bit_count()
        if 2 * size > q + 1:
            continue
        part.fired += 1
        if ext["min_contained_directions"] is None:
            ext["min_contained_directions"] = ext["max_contained_directions"] = size
        else:
            if size < ext["min_contained_directions"]:
                ext["min_contained_directions"] = size
            if size > ext["max_contained_directions"]:
                ext["max_contained_directions"] = size
        f = FqFunction.from_values(ctx, tbl)
        _seed_dirset(f, dmask)
        if not is_affine(f):
            part.counterexamples.append({
                "index": idx,
                "function_table": list(tbl),
                "details": {"reason": "few directions but not affine",
                            "direction_count": size, "threshold": (q + 1) // 2},
            })
    return part


def _kernel_main(ctx, d, items):
    q = ctx.q
    pairs, t = _pairs(ctx)
    sub_t, mul_t = t.sub, t.mul
    memo: dict[int, int] = {}
    part = _Partial(extremes={"min_margin": None, "max_margin": None,
                              "equality_count": 0, "equality_witness": None,
                              "h_set_checks": 0})
    ext = part.extremes
    for idx, tbl in items:
        part.checked += 1
        dmask = _dmask(tbl, pairs, sub_t, mul_t)
        f = None
        for m in range(q):
            mrow = mul_t[m]
            counts = [0] * q
            for x in range(q):
                counts[sub_t[tbl[x]][mrow[x]]] += 1
            bs = [b for b in range(q) if 1 < counts[b] < q]
            if not bs:
                continue
            smask = 0
            rest = dmask
            while rest:
                low = rest & -rest
                smask |= 1 << sub_t[low.bit_length() - 1][m]
                rest ^= low
            size = _dinv_d_size(ctx, smask, memo)
            if f is None:
                f = FqFunction.from_values(ctx, tbl)
                _seed_dirset(f, dmask)
            for b in bs:
                k = counts[b]
                margin = size - (q - k + 2)
                part.fired += 1
                if ext["min_margin"] is None:
                    ext["min_margin"] = ext["max_margin"] = margin
                else:
                    if margin < ext["min_margin"]:
                        ext["min_margin"] = margin
                    if margin > ext["max_margin"]:
                        ext["max_margin"] = margin
                if margin == 0:
                    ext["equality_count"] += 1
                    if ext["equality_witness"] is None:
                        ext["equality_witness"] = {
                            "index": idx, "function_table": list(tbl),
                            "m": m, "b": b, "k": k, "product_size": size,
                        }
                if margin < 0:
                    part.counterexamples.append({
                        "index": idx,
                        "function_table": list(tbl),
                        "details": {"reason": "product bound violated",
                                    "m": m, "b": b, "k": k,
                                    "set_size": size, "threshold": q - k + 2},
                    })
                rep = build_h_set(f, m, b)
                ext["h_set_checks"] += 1
                if not rep.checks.all_ok():
                    part.counterexamples.append({
                        "index": idx,
                        "function_table": list(tbl),
                        "details": {"reason": "translated-root set check failed",
                                    "m": m, "b": b, "k": k,
                                    "checks": {
                                        "subset_of_products": rep.checks.subset_of_products,
                                        "lower_bound": rep.checks.lower_bound,
                                        "contains_one": rep.checks.contains_one,
                                        "excludes_zero": rep.checks.excludes_zero,
                                        "shift_identity": rep.checks.shift_identity,
                                    }},
                    })
    return part


_KERNELS = {
    "main": _kernel_main,
    "main2": _kernel_main2,
    "cor1": _kernel_cor1,
    "conj": _kernel_conj,
    "cor2": _kernel_cor2,
    "result1": _kernel_result1,
    "result2": _kernel_result2,
    "search": _kernel_search,
}


# ---------------------------------------------------------------------------
# campaign driver
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    spec: dict
    checked: int
    fired: int
    counterexamples: list
    extremes: dict
    elapsed_ms: int
    members: list | None = None

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        out = {
            "spec": self.spec,
            "checked": self.checked,
            "fired": self.fired,
            "counterexamples": self.counterexamples,
            "extremes": self.extremes,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.members is not None:
            out["members"] = self.members
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _run_chunk(args) -> _Partial:
    p, n, kernel, family, d, seed, start, stop = args
    ctx = build_field(p, n)
    kind, param = _parse_family(family)
    items = _iter_family(ctx, kind, param, seed, start, stop)
    return _KERNELS[kernel](ctx, d, items)


def _chunk_ranges(size: int, jobs: int) -> list[tuple[int, int]]:
    if jobs <= 1 or size < 4096:
        return [(0, size)]
    step = max(4096, -(-size // (jobs * 4)))
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


def _execute(spec: CampaignSpec, kernel: str) -> tuple[_Partial, int, int]:
    started = time.perf_counter()
    ctx, kind, param, size = _validate(spec, kernel)
    ranges = _chunk_ranges(size, spec.jobs)
    args = [(spec.p, spec.n, kernel, spec.family, spec.d, spec.seed, lo, hi)
            for lo, hi in ranges]
    if len(args) == 1 or spec.jobs <= 1:
        partials = [_run_chunk(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            partials = list(pool.map(_run_chunk, args))
    merged = partials[0]
    for part in partials[1:]:
        merged = _merge(merged, part)
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return merged, size, elapsed_ms


def run_campaign(spec: CampaignSpec) -> VerificationReport:
    """Enumerate the family, apply the selected check, and fold the results."""
    if spec.theorem not in THEOREMS:
        raise InvalidSpec(
            f"unknown theorem {spec.theorem!r}; expected one of {THEOREMS}")
    merged, _, elapsed_ms = _execute(spec, spec.theorem)
    return VerificationReport(
        spec=spec.echo(),
        checked=merged.checked,
        fired=merged.fired,
        counterexamples=merged.counterexamples,
        extremes=merged.extremes,
        elapsed_ms=elapsed_ms,
    )


def run_search(spec: CampaignSpec) -> VerificationReport:
    """List every family member whose directions stay inside M_d + {0}."""
    merged, _, elapsed_ms = _execute(spec, "search")
    return VerificationReport(
        spec=spec.echo(),
        checked=merged.checked,
        fired=merged.fired,
        counterexamples=merged.counterexamples,
        extremes=merged.extremes,
        elapsed_ms=elapsed_ms,
        members=merged.members or [],
    )
