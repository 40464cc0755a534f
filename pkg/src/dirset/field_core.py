"""Deterministic construction of small finite fields GF(p^n) with table arithmetic.

Elements are canonical integer indices in [0, q): the base-p digits of an index
are the coordinates of the element in the polynomial basis of the modulus root,
so index 0 is the additive identity and index 1 the multiplicative identity.
Multiplication, inversion and powers run on exp/log tables over a canonical
primitive element; addition is digitwise mod p. Everything is reproducible:
the modulus is the lexicographically smallest monic irreducible (highest
non-leading coefficient compared first) and the generator is the smallest
primitive index.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .errors import CompositeCharacteristic, DivisionByZero, NonDivisor, SizeLimit

TABLE_CAP = 1 << 16   # largest supported q (exp/log tables stay in memory)
DENSE_CAP = 1 << 10   # largest q for which dense q x q operation tables are built


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    i = 3
    while i * i <= m:
        if m % i == 0:
            return False
        i += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m, ascending."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# digit-list polynomial helpers over F_p (coefficients constant-term first)
# ---------------------------------------------------------------------------

def _decode(x: int, p: int, n: int) -> list[int]:
    digits = []
    for _ in range(n):
        digits.append(x % p)
        x //= p
    return digits


def _encode(digits: Iterable[int], p: int) -> int:
    x = 0
    for d in reversed(list(digits)):
        x = x * p + d
    return x


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a mod b over F_p; b must be monic."""
    r = list(a)
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            for j in range(db):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    return r


def _is_zero(poly: list[int]) -> bool:
    return all(c == 0 for c in poly)


def _irreducible(candidate: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    n = len(candidate) - 1
    for m in range(1, n // 2 + 1):
        for t in range(p**m):
            divisor = _decode(t, p, m) + [1]
            if _is_zero(_poly_rem(candidate, divisor, p)):
                return False
    return True


def _smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    # enumeration key: the integer whose base-p digits are (c_0 .. c_{n-1}),
    # most significant digit = c_{n-1}, so lower keys sort by the highest
    # non-leading coefficient first
    for key in range(p**n):
        coeffs = _decode(key, p, n) + [1]
        if _irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no monic irreducible of degree %d over F_%d" % (n, p))


class CampaignTables(NamedTuple):
    """Dense q x q lookup tables; inv[0] is a placeholder and must not be used."""

    add: list[list[int]]
    sub: list[list[int]]
    mul: list[list[int]]
    inv: list[int]


class ElementSet:
    """Subset of the canonical indices of one field, stored as a bitmask."""

    __slots__ = ("q", "mask")

    def __init__(self, q: int, mask: int = 0):
        self.q = q
        self.mask = mask

    @classmethod
    def from_indices(cls, q: int, indices: Iterable[int]) -> "ElementSet":
        mask = 0
        for i in indices:
            if not 0 <= i < q:
                raise ValueError(f"index {i} outside [0, {q})")
            mask |= 1 << i
        return cls(q, mask)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.q and (self.mask >> x) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ElementSet)
            and self.q == other.q
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.q, self.mask))

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.q, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.q, self.mask & other.mask)

    def issubset(self, other: "ElementSet") -> bool:
        return self.mask & ~other.mask == 0

    __le__ = issubset

    def to_list(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"ElementSet(q={self.q}, {{{', '.join(map(str, self))}}})"


class FieldContext:
    """Immutable arithmetic context for GF(p^n), q = p^n <= 2^16.

    Use :func:`build_field`; do not construct directly. All operation methods
    take and return canonical integer indices.
    """

    __slots__ = ("p", "n", "q", "modulus", "generator", "_exp", "_log",
                 "_dense", "_lagrange")

    def __init__(self, p: int, n: int, modulus: tuple[int, ...], generator: int,
                 exp: list[int], log: list[int]):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self.generator = generator
        self._exp = exp          # length 2(q-1): exp[i] = g^(i mod q-1)
        self._log = log          # length q; log[0] = -1 sentinel
        self._dense: CampaignTables | None = None
        self._lagrange: list[list[int]] | None = None

    # -- additive structure -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % p
        s = 0
        shift = 1
        while a or b:
            s += (a % p + b % p) % p * shift
            a //= p
            b //= p
            shift *= p
        return s

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.n == 1:
            return (p - a) % p
        s = 0
        shift = 1
        while a:
            s += (p - a % p) % p * shift
            a //= p
            shift *= p
        return s

    def sub(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.n == 1:
            return (a - b) % p
        s = 0
        shift = 1
        while a or b:
            s += (a % p - b % p) % p * shift
            a //= p
            b //= p
            shift *= p
        return s

    # -- multiplicative structure (exp/log tables) --------------------------

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by 0")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + self.q - 1]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 0 if e else 1
        return self._exp[self._log[a] * e % (self.q - 1)]

    # -- iteration and serialization ----------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def describe(self) -> dict:
        """JSON-ready field description."""
        return {
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "modulus": list(self.modulus),
            "generator": self.generator,
        }

    def tables(self) -> CampaignTables:
        """Dense q x q add/sub/mul tables plus an inverse list, built lazily."""
        if self._dense is None:
            if self.q > DENSE_CAP:
                raise SizeLimit(
                    f"dense tables capped at q <= {DENSE_CAP}, got q = {self.q}")
            rng = range(self.q)
            self._dense = CampaignTables(
                add=[[self.add(a, b) for b in rng] for a in rng],
                sub=[[self.sub(a, b) for b in rng] for a in rng],
                mul=[[self.mul(a, b) for b in rng] for a in rng],
                inv=[0] + [self.inv(a) for a in range(1, self.q)],
            )
        return self._dense

    def __repr__(self) -> str:
        return f"FieldContext(GF({self.p}^{self.n}), modulus={list(self.modulus)})"


def _mul_raw(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    """Table-free multiplication used during construction."""
    n = len(modulus) - 1
    if n == 1:
        return a * b % p
    da = _decode(a, p, n)
    db = _decode(b, p, n)
    prod = [0] * (2 * n - 1)
    for i, ca in enumerate(da):
        if ca:
            for j, cb in enumerate(db):
                prod[i + j] = (prod[i + j] + ca * cb) % p
    rem = _poly_rem(prod, list(modulus), p)
    return _encode(rem, p)


def _pow_raw(a: int, e: int, p: int, modulus: tuple[int, ...]) -> int:
    acc = 1
    base = a
    while e:
        if e & 1:
            acc = _mul_raw(acc, base, p, modulus)
        base = _mul_raw(base, base, p, modulus)
        e >>= 1
    return acc


@lru_cache(maxsize=64)
def build_field(p: int, n: int) -> FieldContext:
    """Construct GF(p^n) deterministically.

    The modulus is the lexicographically smallest monic irreducible of degree n
    over F_p (for n = 1 it is x by convention and arithmetic is mod p); the
    generator is the smallest canonical index of multiplicative order q - 1.
    """
    if not is_prime(p):
        raise CompositeCharacteristic(f"p = {p} is not prime")
    if n < 1:
        raise ValueError(f"extension degree must be >= 1, got {n}")
    q = p**n
    if q > TABLE_CAP:
        raise SizeLimit(f"q = {q} exceeds the table cap {TABLE_CAP}")

    modulus = (0, 1) if n == 1 else _smallest_irreducible(p, n)

    factors = prime_factors(q - 1)
    generator = 0
    for c in range(1, q):
        if all(_pow_raw(c, (q - 1) // r, p, modulus) != 1 for r in factors):
            generator = c
            break
    assert generator, "no primitive element found"

    exp = [0] * (2 * (q - 1))
    log = [-1] * q
    acc = 1
    for k in range(q - 1):
        exp[k] = acc
        exp[k + q - 1] = acc
        log[acc] = k
        acc = _mul_raw(acc, generator, p, modulus)
    assert acc == 1, "generator order is not q - 1"

    return FieldContext(p, n, modulus, generator, exp, log)


def mult_subgroup(ctx: FieldContext, d: int) -> ElementSet:
    """M_d = {x^d : x != 0}, the index-d subgroup of the multiplicative group."""
    if d < 1 or (ctx.q - 1) % d != 0:
        raise NonDivisor(f"d = {d} is not a positive divisor of q - 1 = {ctx.q - 1}")
    mask = 0
    for e in range(0, ctx.q - 1, d):
        mask |= 1 << ctx._exp[e]
    return ElementSet(ctx.q, mask)
