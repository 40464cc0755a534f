"""Direction sets of function graphs, product-set algebra, line incidence,
and the translated-root construction that bounds |(D_f - m)^(-1) (D_f - m)|
through the set H = {x / (x - y) : h(x) != 0, h(y) = 0}.

All sets are bitmasks of width q; quotients run on the exp/log tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionViolated, ZeroInR
from .field_core import ElementSet, FieldContext
from .poly_fn import FqFunction


@dataclass(frozen=True)
class DirectionSet:
    """Slopes of all secants of the graph of f, with a cached zero flag."""

    elements: ElementSet
    contains_zero: bool

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_elements(cls, elements: ElementSet) -> "DirectionSet":
        return cls(elements, 0 in elements)


@dataclass(frozen=True)
class LineIncidence:
    """Intersection count of the line y = m*x + b with the graph of f."""

    m: int
    b: int
    k: int


@dataclass(frozen=True)
class HSetChecks:
    subset_of_products: bool    # H is inside D_h^(-1) D_h
    lower_bound: bool           # |H| >= q - k + 1
    contains_one: bool
    excludes_zero: bool
    shift_identity: bool        # D_h equals D_f - m

    def all_ok(self) -> bool:
        return (self.subset_of_products and self.lower_bound
                and self.contains_one and self.excludes_zero
                and self.shift_identity)


@dataclass(frozen=True)
class HSetReport:
    """Artifacts of translating f - m*x - b so that 0 becomes a root."""

    a: int                      # chosen root (smallest canonical index)
    k: int                      # number of intersection points
    h: FqFunction               # translated function g(x + a)
    roots: ElementSet           # the k - 1 nonzero roots of h
    h_set: ElementSet           # H
    products: ElementSet        # D_h^(-1) D_h
    directions: DirectionSet    # D_h
    checks: HSetChecks


@dataclass(frozen=True)
class Theorem1Report:
    m: int
    b: int
    k: int
    product_size: int           # |(D_f - m)^(-1) (D_f - m)|
    threshold: int              # q - k + 2
    holds: bool

    @property
    def equality(self) -> bool:
        return self.product_size == self.threshold


def direction_set(f: FqFunction) -> DirectionSet:
    """All difference quotients (f(x) - f(y)) / (x - y) over unordered pairs."""
    if f._dirset is None:
        ctx = f.ctx
        q = ctx.q
        exp, log = ctx._exp, ctx._log
        vals = f.values
        mask = 0
        for x in range(q):
            fx = vals[x]
            for y in range(x + 1, q):
                num = ctx.sub(fx, vals[y])
                if num == 0:
                    mask |= 1
                else:
                    mask |= 1 << exp[log[num] - log[ctx.sub(x, y)] + q - 1]
        f._dirset = DirectionSet(ElementSet(q, mask), mask & 1 == 1)
    return f._dirset


def direction_set_within(f: FqFunction, allowed: ElementSet) -> DirectionSet | None:
    """Like direction_set, but abort with None as soon as a slope leaves `allowed`."""
    ctx = f.ctx
    q = ctx.q
    exp, log = ctx._exp, ctx._log
    vals = f.values
    amask = allowed.mask
    mask = 0
    for x in range(q):
        fx = vals[x]
        for y in range(x + 1, q):
            num = ctx.sub(fx, vals[y])
            if num == 0:
                d = 0
            else:
                d = exp[log[num] - log[ctx.sub(x, y)] + q - 1]
            if not amask >> d & 1:
                return None
            mask |= 1 << d
    ds = DirectionSet(ElementSet(q, mask), mask & 1 == 1)
    f._dirset = ds
    return ds


def inverse_set(ctx: FieldContext, s: ElementSet) -> ElementSet:
    """{a^(-1) : a in s, a != 0}; a set holding only 0 inverts to the empty set."""
    mask = 0
    for a in s:
        if a:
            mask |= 1 << ctx.inv(a)
    return ElementSet(ctx.q, mask)


def product_set(ctx: FieldContext, a: ElementSet, b: ElementSet) -> ElementSet:
    """{x*y : x in a, y in b}; empty if either factor is empty."""
    if not a.mask or not b.mask:
        return ElementSet(ctx.q, 0)
    exp, log = ctx._exp, ctx._log
    mask = 1 if (a.mask & 1 or b.mask & 1) else 0
    for x in a:
        if x:
            lx = log[x]
            for y in b:
                if y:
                    mask |= 1 << exp[lx + log[y]]
    return ElementSet(ctx.q, mask)


def shift_set(ctx: FieldContext, s: ElementSet, c: int) -> ElementSet:
    """{a - c : a in s}."""
    mask = 0
    for a in s:
        mask |= 1 << ctx.sub(a, c)
    return ElementSet(ctx.q, mask)


def line_intersection_count(f: FqFunction, m: int, b: int) -> LineIncidence:
    ctx = f.ctx
    k = sum(1 for x in range(ctx.q)
            if f.values[x] == ctx.add(ctx.mul(m, x), b))
    return LineIncidence(m, b, k)


def build_h_set(f: FqFunction, m: int, b: int) -> HSetReport:
    """Translate g = f - m*x - b by its smallest root a and assemble H.

    Requires the line (m, b) to meet the graph in k points with 1 < k < q.
    The report records whether H landed inside D_h^(-1) D_h, whether
    |H| >= q - k + 1, and whether D_h came out equal to D_f - m.
    """
    ctx = f.ctx
    q = ctx.q
    g_vals = [ctx.sub(f.values[x], ctx.add(ctx.mul(m, x), b)) for x in range(q)]
    roots = [x for x in range(q) if g_vals[x] == 0]
    k = len(roots)
    if k <= 1 or k >= q:
        raise PreconditionViolated(
            f"line (m={m}, b={b}) meets the graph in k={k} points; need 1 < k < q")
    a = roots[0]
    h_vals = [g_vals[ctx.add(x, a)] for x in range(q)]
    h = FqFunction.from_values(ctx, h_vals)

    h_roots = [x for x in range(q) if h_vals[x] == 0]
    nonroots = [x for x in range(q) if h_vals[x]]
    hmask = 0
    for y in h_roots:
        for x in nonroots:
            hmask |= 1 << ctx.div(x, ctx.sub(x, y))
    h_set = ElementSet(q, hmask)

    d_h = direction_set(h)
    products = product_set(ctx, inverse_set(ctx, d_h.elements), d_h.elements)
    shifted = shift_set(ctx, direction_set(f).elements, m)
    checks = HSetChecks(
        subset_of_products=h_set.issubset(products),
        lower_bound=len(h_set) >= q - k + 1,
        contains_one=1 in h_set,
        excludes_zero=0 not in h_set,
        shift_identity=d_h.elements == shifted,
    )
    return HSetReport(
        a=a,
        k=k,
        h=h,
        roots=ElementSet.from_indices(q, (r for r in h_roots if r)),
        h_set=h_set,
        products=products,
        directions=d_h,
        checks=checks,
    )


def ratio_stabilizer(ctx: FieldContext, r: ElementSet) -> ElementSet:
    """{beta != 0 : beta * r == r} for a set r of nonzero elements."""
    if not r.mask:
        raise PreconditionViolated("ratio_stabilizer needs a nonempty set")
    if r.mask & 1:
        raise ZeroInR("ratio_stabilizer input must not contain 0")
    members = list(r)
    mask = 0
    for beta in range(1, ctx.q):
        mapped = 0
        for x in members:
            mapped |= 1 << ctx.mul(beta, x)
        if mapped == r.mask:
            mask |= 1 << beta
    return ElementSet(ctx.q, mask)


def theorem1_check(f: FqFunction, m: int, b: int) -> Theorem1Report:
    """Check |(D_f - m)^(-1) (D_f - m)| >= q - k + 2 for an admissible line."""
    ctx = f.ctx
    k = line_intersection_count(f, m, b).k
    if k <= 1 or k >= ctx.q:
        raise PreconditionViolated(
            f"line (m={m}, b={b}) meets the graph in k={k} points; need 1 < k < q")
    shifted = shift_set(ctx, direction_set(f).elements, m)
    size = len(product_set(ctx, inverse_set(ctx, shifted), shifted))
    threshold = ctx.q - k + 2
    return Theorem1Report(m=m, b=b, k=k, product_size=size,
                          threshold=threshold, holds=size >= threshold)
