"""Elements of PGL(2,q) as canonicalized 2x2 matrices over GF(q).

Canonical form: the first nonzero entry in scan order (a, b, c, d) is 1,
so equality and hashing are exact.  The group acts on the projective
line PG(1,q) by fractional transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from chiral4.fields import (
    FieldCtx,
    FieldElement,
    divisors,
    element_order,
    is_square,
    sqrt,
    NotASquare,
)


class ContextMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class IdentityElement(ValueError):
    pass


@dataclass(frozen=True)
class ProjPoint:
    """Point of PG(1,q): an affine coordinate, or None for infinity."""

    value: Optional[FieldElement]

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __repr__(self):
        return "inf" if self.value is None else repr(self.value)


def infinity() -> ProjPoint:
    return ProjPoint(None)


def all_points(ctx: FieldCtx) -> list[ProjPoint]:
    return [infinity()] + [ProjPoint(x) for x in ctx.elements()]


class ProjElement:
    """Class of an invertible 2x2 matrix [[a,b],[c,d]] modulo scalars."""

    __slots__ = ("ctx", "a", "b", "c", "d")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement,
                 d: FieldElement, _canonical: bool = False):
        ctx = a.ctx
        if not _canonical:
            if (a * d - b * c).is_zero():
                raise SingularMatrix((a, b, c, d))
            for lead in (a, b, c, d):
                if not lead.is_zero():
                    inv = lead.inverse()
                    a, b, c, d = a * inv, b * inv, c * inv, d * inv
                    break
        self.ctx = ctx
        self.a, self.b, self.c, self.d = a, b, c, d

    # -- construction ---------------------------------------------------------

    @staticmethod
    def of(ctx: FieldCtx, a, b, c, d) -> "ProjElement":
        lift = lambda v: v if isinstance(v, FieldElement) else ctx.el(v)
        return ProjElement(lift(a), lift(b), lift(c), lift(d))

    @staticmethod
    def identity(ctx: FieldCtx) -> "ProjElement":
        return ProjElement.of(ctx, 1, 0, 0, 1)

    # -- basic structure ------------------------------------------------------

    def entries(self) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        return (self.a.is_one() and self.b.is_zero()
                and self.c.is_zero() and self.d.is_one())

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> FieldElement:
        return self.a + self.d

    def __eq__(self, other):
        return (isinstance(other, ProjElement) and self.ctx == other.ctx
                and self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a.coeffs, self.b.coeffs, self.c.coeffs, self.d.coeffs))

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def key(self) -> tuple:
        return (self.a.coeffs, self.b.coeffs, self.c.coeffs, self.d.coeffs)

    # -- group operations ------------------------------------------------------

    def __mul__(self, other: "ProjElement") -> "ProjElement":
        if self.ctx != other.ctx:
            raise ContextMismatch((self.ctx, other.ctx))
        return ProjElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ProjElement":
        return ProjElement(self.d, -self.b, -self.c, self.a)

    def __pow__(self, e: int) -> "ProjElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = ProjElement.identity(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self, h: "ProjElement") -> "ProjElement":
        """h^-1 * self * h."""
        return h.inverse() * self * h

    def frobenius(self, r: int) -> "ProjElement":
        """Entrywise p^r power; a group automorphism."""
        if r % self.ctx.d == 0:
            return self
        return ProjElement(self.a.frobenius(r), self.b.frobenius(r),
                           self.c.frobenius(r), self.d.frobenius(r))

    # -- invariants ------------------------------------------------------------

    def trace_invariant(self) -> FieldElement:
        """tr^2/det: invariant under scalars and conjugation."""
        t = self.trace()
        return t * t / self.det()

    def in_psl(self) -> bool:
        """True iff det of any representative is a square (all of PGL in char 2)."""
        return is_square(self.det())

    def proj_order(self) -> int:
        """Order in PGL(2,q), from the trace invariant.

        theta = 4 means unipotent (order p) or identity; theta = 0 means an
        involution for odd q; otherwise the order is the least divisor m of
        q-1 or q+1 with self^m scalar.
        """
        ctx = self.ctx
        if self.is_identity():
            return 1
        theta = self.trace_invariant()
        if theta == ctx.el(4):
            return ctx.p
        if ctx.p != 2 and theta.is_zero():
            return 2
        for n in (ctx.q - 1, ctx.q + 1):
            for m in divisors(n):
                if m > 1 and (self**m).is_identity():
                    return m
        raise AssertionError("order not found")  # unreachable

    def is_involution(self) -> bool:
        """Order exactly 2: zero trace for odd q, g^2 = 1 and g != 1 for even q."""
        if self.is_identity():
            return False
        if self.ctx.p == 2:
            return (self * self).is_identity()
        return self.trace().is_zero()

    # -- projective line action -------------------------------------------------

    def apply(self, z: ProjPoint) -> ProjPoint:
        if z.is_infinity:
            if self.c.is_zero():
                return infinity()
            return ProjPoint(self.a / self.c)
        num = self.a * z.value + self.b
        den = self.c * z.value + self.d
        if den.is_zero():
            return infinity()
        return ProjPoint(num / den)

    def fixed_points(self) -> set[ProjPoint]:
        """Fixed points on PG(1,q): solutions of c z^2 + (d-a) z - b = 0."""
        if self.is_identity():
            raise IdentityElement(self)
        ctx = self.ctx
        out: set[ProjPoint] = set()
        if self.c.is_zero():
            out.add(infinity())
            # (d - a) z = b on the affine line
            diff = self.d - self.a
            if not diff.is_zero():
                out.add(ProjPoint(self.b / diff))
            return out
        if ctx.p == 2:
            for z in ctx.elements():
                if (self.c * z * z + (self.d - self.a) * z - self.b).is_zero():
                    out.add(ProjPoint(z))
            return out
        disc = (self.d - self.a) ** 2 + 4 * self.b * self.c
        if not is_square(disc):
            return out
        r = sqrt(disc)
        two_c = 2 * self.c
        out.add(ProjPoint((self.a - self.d + r) / two_c))
        out.add(ProjPoint((self.a - self.d - r) / two_c))
        return out

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "a": list(self.a.coeffs), "b": list(self.b.coeffs),
            "c": list(self.c.coeffs), "d": list(self.d.coeffs),
            "field": self.ctx.name(),
        }

    @staticmethod
    def from_json(obj: dict, ctx: FieldCtx | None = None) -> "ProjElement":
        from chiral4.fields import parse_field
        if ctx is None:
            ctx = parse_field(obj["field"])
        return ProjElement.of(ctx, ctx.el(obj["a"]), ctx.el(obj["b"]),
                              ctx.el(obj["c"]), ctx.el(obj["d"]))


def pgl_order(ctx: FieldCtx) -> int:
    q = ctx.q
    return q * (q * q - 1)


def psl_order(ctx: FieldCtx) -> int:
    q = ctx.q
    return q * (q * q - 1) // (2 if q % 2 == 1 else 1)


def pgl_generators(ctx: FieldCtx) -> list[ProjElement]:
    """Generators of PGL(2,q): torus diag(j,1), inversion, and a shear."""
    j = ctx.generator()
    return [ProjElement.of(ctx, j, 0, 0, 1), ProjElement.of(ctx, 0, 1, -1, 0),
            ProjElement.of(ctx, 1, 1, 0, 1)]


def psl_generators(ctx: FieldCtx) -> list[ProjElement]:
    """Generators of PSL(2,q): opposite shears, plus [[1,j],[0,1]] for d > 1."""
    gens = [ProjElement.of(ctx, 1, 1, 0, 1), ProjElement.of(ctx, 1, 0, 1, 1)]
    if ctx.d > 1:
        gens.append(ProjElement.of(ctx, 1, ctx.generator(), 0, 1))
    return gens


def all_involutions(ctx: FieldCtx, psl_only: bool) -> Iterator[ProjElement]:
    """All involutions of PGL(2,q) (optionally only those in PSL)."""
    if ctx.p == 2:
        # unipotents: [[1,b],[c,1]] with bc != 1, plus [[0,1],[c,0]], c != 0
        one = ctx.one()
        for b in ctx.elements():
            for c in ctx.elements():
                if b * c != one and not (b.is_zero() and c.is_zero()):
                    yield ProjElement.of(ctx, 1, b, c, 1)
        for c in ctx.elements():
            if not c.is_zero():
                yield ProjElement.of(ctx, 0, 1, c, 0)
        return
    # odd q: trace-0 classes [[a,b],[c,-a]]; canonical scan-leader is 1
    for b in ctx.elements():
        for c in ctx.elements():
            if (ctx.el(-1) - b * c).is_zero():
                continue
            g = ProjElement.of(ctx, 1, b, c, -1)
            if not psl_only or g.in_psl():
                yield g
    for c in ctx.elements():
        if c.is_zero():
            continue
        g = ProjElement.of(ctx, 0, 1, c, 0)
        if not psl_only or g.in_psl():
            yield g
