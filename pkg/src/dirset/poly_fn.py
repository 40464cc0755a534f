"""Functions F_q -> F_q as value tables paired with their reduced polynomials.

Every function is carried in both representations at once: the full value
table and the unique polynomial of degree <= q - 1 that induces it. The
interpolation weights exploit that the nodes are the whole field: the
coefficient of x^m is

    c_0 = f(0),   c_m = -sum_{a != 0} f(a) a^(-m)  (0 < m < q-1),
    c_{q-1} = -sum_a f(a),

so one weight row per exponent is precomputed once per field and reused.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InternalDisagreement, LengthMismatch
from .field_core import FieldContext


def _lagrange_rows(ctx: FieldContext) -> list[list[int]]:
    """rows[m][a] is the weight of f(a) in the coefficient of x^m."""
    if ctx._lagrange is None:
        q = ctx.q
        neg_one = ctx.neg(1)
        rows = [[0] * q for _ in range(q)]
        rows[0][0] = 1
        if q > 2:
            for m in range(1, q - 1):
                row = rows[m]
                for a in range(1, q):
                    row[a] = ctx.neg(ctx.pow(a, q - 1 - m))
        rows[q - 1] = [neg_one] * q
        ctx._lagrange = rows
    return ctx._lagrange


def _coefficient(ctx: FieldContext, values, m: int) -> int:
    row = _lagrange_rows(ctx)[m]
    c = 0
    for a, v in enumerate(values):
        if v:
            c = ctx.add(c, ctx.mul(v, row[a]))
    return c


def table_degree(ctx: FieldContext, values) -> int:
    """Reduced degree of a value table, probing coefficients from the top."""
    for m in range(ctx.q - 1, 0, -1):
        if _coefficient(ctx, values, m):
            return m
    return 0


class FqFunction:
    """A function F_q -> F_q: value table plus reduced polynomial coefficients.

    `values[i]` is the image of the canonical index i; `coeffs` holds the
    reduced polynomial, constant term first, trailing zeros stripped (constants
    keep a single entry). Instances are immutable and cache their direction
    set once computed.
    """

    __slots__ = ("ctx", "values", "coeffs", "_dirset")

    def __init__(self, ctx: FieldContext, values: tuple[int, ...],
                 coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.values = values
        self.coeffs = coeffs
        self._dirset = None

    @classmethod
    def from_values(cls, ctx: FieldContext, values) -> "FqFunction":
        if len(values) != ctx.q:
            raise LengthMismatch(f"need {ctx.q} values, got {len(values)}")
        if any(not 0 <= v < ctx.q for v in values):
            raise ValueError("value table entries must be canonical indices")
        coeffs = [_coefficient(ctx, values, m) for m in range(ctx.q)]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return cls(ctx, tuple(values), tuple(coeffs))

    @classmethod
    def from_coeffs(cls, ctx: FieldContext, coeffs) -> "FqFunction":
        """Build from arbitrary coefficients, folding exponents mod x^q - x."""
        q = ctx.q
        reduced = [0] * q
        for e, c in enumerate(coeffs):
            if not 0 <= c < q:
                raise ValueError("coefficients must be canonical indices")
            if c == 0:
                continue
            if e >= q:
                e = (e - 1) % (q - 1) + 1
            reduced[e] = ctx.add(reduced[e], c)
        while len(reduced) > 1 and reduced[-1] == 0:
            reduced.pop()
        rt = tuple(reduced)
        values = tuple(_horner(ctx, rt, x) for x in range(q))
        return cls(ctx, values, rt)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return len(self.coeffs) == 1

    def shift_constant(self, c: int) -> "FqFunction":
        """The function x -> f(x) + c (only the constant coefficient moves)."""
        ctx = self.ctx
        coeffs = (ctx.add(self.coeffs[0], c),) + self.coeffs[1:]
        values = tuple(ctx.add(v, c) for v in self.values)
        return FqFunction(ctx, values, coeffs)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FqFunction) and self.ctx is other.ctx
                and self.values == other.values)

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"FqFunction(q={self.ctx.q}, coeffs={list(self.coeffs)})"


def _horner(ctx: FieldContext, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


@dataclass(frozen=True)
class MonomialForm:
    """Parameters of x -> a * x^(p^k) + b; reported with the smallest valid k."""

    a: int
    k: int
    b: int

    def to_list(self) -> list[int]:
        return [self.a, self.k, self.b]


def interpolate(ctx: FieldContext, values) -> FqFunction:
    """Unique polynomial of degree <= q - 1 through the given value table."""
    return FqFunction.from_values(ctx, values)


def evaluate(f: FqFunction, x: int) -> int:
    """Horner evaluation of the reduced polynomial (equals the table lookup)."""
    return _horner(f.ctx, f.coeffs, x)


def reduced_degree(f: FqFunction) -> int:
    return f.degree


def detect_monomial_form(f: FqFunction) -> MonomialForm | None:
    """Match f against a * x^(p^k) + b, trying k = 0, 1, ... in order.

    A constant table reports (a=0, k=0, b); absence of a match returns None.
    """
    ctx = f.ctx
    b = f.values[0]
    a = ctx.sub(f.values[1], b)
    for k in range(ctx.n):
        e = ctx.p**k
        if all(f.values[x] == ctx.add(ctx.mul(a, ctx.pow(x, e)), b)
               for x in range(ctx.q)):
            return MonomialForm(a, k, b)
    return None


def is_additive(f: FqFunction) -> bool:
    """f(x + y) == f(x) + f(y) everywhere.

    Checked two ways: over all pairs, and by the coefficient support (nonzero
    coefficients only at exponents 1, p, ..., p^(n-1)). Disagreement between
    the routes raises InternalDisagreement.
    """
    ctx = f.ctx
    vals = f.values
    pairwise = all(
        vals[ctx.add(x, y)] == ctx.add(vals[x], vals[y])
        for x, y in product(range(ctx.q), repeat=2)
    )
    p_powers = {ctx.p**k for k in range(ctx.n)}
    support = all(c == 0 or e in p_powers for e, c in enumerate(f.coeffs))
    if pairwise != support:
        raise InternalDisagreement(
            f"additivity checks disagree on coeffs={list(f.coeffs)}: "
            f"pairwise={pairwise}, support={support}")
    return pairwise


def is_affine(f: FqFunction) -> bool:
    """Additive after dropping the constant term."""
    return is_additive(f.shift_constant(f.ctx.neg(f.values[0])))


# -- text formats (canonical indices, comma separated, constant term first) --

def parse_indices(text: str, ctx: FieldContext) -> list[int]:
    out = []
    for pos, tok in enumerate(text.split(",")):
        try:
            v = int(tok)
        except ValueError as exc:
            raise ValueError(f"bad index {tok!r} at position {pos}") from exc
        if not 0 <= v < ctx.q:
            raise ValueError(f"index {v} at position {pos} outside [0, {ctx.q})")
        out.append(v)
    return out


def parse_poly(text: str, ctx: FieldContext) -> FqFunction:
    return FqFunction.from_coeffs(ctx, parse_indices(text, ctx))


def parse_table(text: str, ctx: FieldContext) -> FqFunction:
    values = parse_indices(text, ctx)
    if len(values) != ctx.q:
        raise LengthMismatch(f"value table needs {ctx.q} entries, got {len(values)}")
    return FqFunction.from_values(ctx, values)


def format_poly(f: FqFunction) -> str:
    return ",".join(str(c) for c in f.coeffs)
