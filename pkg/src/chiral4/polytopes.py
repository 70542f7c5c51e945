"""Rank-4 rotation triples: relations, intersection property, generation,
chirality, duality, and PGammaL-equivalence.

A triple (s1, s2, s3) of PGL(2,q) elements is the distinguished generator
system of a chiral 4-polytope iff s1s2, s2s3, s1s2s3 are involutions, the
intersection property holds, the triple generates the expected group, and
no automorphism (Frobenius twist + conjugation) carries it to its mirror
(s1^-1, s1^2 s2, s3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from chiral4.fields import FieldCtx, parse_field
from chiral4.projective import ProjElement, pgl_order, psl_order
from chiral4.subgroups import (
    DEFAULT_CAP,
    SubgroupClass,
    SubgroupHandle,
    classify,
    generate,
    intersect,
    mulclose,
    trace_field_degree,
)


class DegenerateOrder(ValueError):
    pass


class ParabolicTooLarge(RuntimeError):
    pass


class PreconditionFailed(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class SchlafliSymbol:
    p1: int
    p2: int
    p3: int

    def __post_init__(self):
        assert min(self.p1, self.p2, self.p3) >= 2

    def reversed(self) -> "SchlafliSymbol":
        return SchlafliSymbol(self.p3, self.p2, self.p1)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.p1, self.p2, self.p3)

    def __repr__(self):
        return f"[{self.p1},{self.p2},{self.p3}]"


@dataclass(frozen=True)
class RotationTriple:
    s1: ProjElement
    s2: ProjElement
    s3: ProjElement

    @property
    def ctx(self) -> FieldCtx:
        return self.s1.ctx

    def generators(self) -> tuple[ProjElement, ProjElement, ProjElement]:
        return (self.s1, self.s2, self.s3)

    def key(self) -> tuple:
        return (self.s1.key(), self.s2.key(), self.s3.key())

    def frobenius(self, r: int) -> "RotationTriple":
        return RotationTriple(self.s1.frobenius(r), self.s2.frobenius(r),
                              self.s3.frobenius(r))

    def conjugate(self, h: ProjElement) -> "RotationTriple":
        return RotationTriple(self.s1.conjugate(h), self.s2.conjugate(h),
                              self.s3.conjugate(h))


def schlafli_of(t: RotationTriple) -> SchlafliSymbol:
    orders = tuple(s.proj_order() for s in t.generators())
    if min(orders) < 2:
        raise DegenerateOrder(orders)
    return SchlafliSymbol(*orders)


def check_relations(t: RotationTriple) -> bool:
    """(C2): s1s2, s2s3 and s1s2s3 are involutions."""
    return ((t.s1 * t.s2).is_involution()
            and (t.s2 * t.s3).is_involution()
            and (t.s1 * t.s2 * t.s3).is_involution())


def _cyclic_set(g: ProjElement) -> set[ProjElement]:
    out = set()
    x = ProjElement.identity(g.ctx)
    while True:
        out.add(x)
        x = x * g
        if x.is_identity():
            return out


def parabolic_subgroups(t: RotationTriple, cap: int = DEFAULT_CAP
                        ) -> tuple[SubgroupHandle, SubgroupHandle]:
    h1 = generate([t.s1, t.s2], cap)
    h2 = generate([t.s2, t.s3], cap)
    if not (h1.materialized() and h2.materialized()):
        raise ParabolicTooLarge(t)
    return h1, h2


def check_intersection(t: RotationTriple, cap: int = DEFAULT_CAP) -> bool:
    """(C3'): <s1> ^ <s2> = <s2> ^ <s3> = 1 and <s1,s2> ^ <s2,s3> = <s2>."""
    idn = ProjElement.identity(t.ctx)
    c1 = _cyclic_set(t.s1)
    c2 = _cyclic_set(t.s2)
    c3 = _cyclic_set(t.s3)
    if c1 & c2 != {idn} or c2 & c3 != {idn}:
        return False
    h1, h2 = parabolic_subgroups(t, cap)
    return h1.elements & h2.elements == c2


def check_generation(t: RotationTriple, expected: str) -> bool:
    """Does <s1,s2,s3> equal the full group named by expected
    ('FullPSL' or 'FullPGL')?"""
    assert expected in ("FullPSL", "FullPGL")
    ctx = t.ctx
    if ctx.p == 2 and expected == "FullPGL":
        expected = "FullPSL"  # PSL(2,2^d) = PGL(2,2^d)
    actual = _full_group_tag(t)
    return actual == expected


def _common_fixed_point(gens: Sequence[ProjElement]) -> bool:
    pts = None
    for g in gens:
        if g.is_identity():
            continue
        fp = g.fixed_points()
        pts = fp if pts is None else pts & fp
        if not pts:
            return False
    return True


def _full_group_tag(t: RotationTriple) -> Optional[str]:
    """'FullPSL'/'FullPGL' if the triple generates the full group, the
    proper class tag otherwise (None only means 'some proper subgroup')."""
    ctx = t.ctx
    gens = [g for g in t.generators() if not g.is_identity()]
    if not gens:
        return None
    psl_flags = all(g.in_psl() for g in gens)
    if _common_fixed_point(gens):
        return None  # affine, never full
    if pgl_order(ctx) > 10**8:
        return _full_group_tag_large(t, psl_flags)
    cap0 = max(2 * (ctx.q + 1), 60) + 1
    els = mulclose(gens, cap0)
    if els is not None:
        n = len(els)
        if n == pgl_order(ctx) and ctx.p != 2:
            return "FullPGL"
        if n == psl_order(ctx):
            return "FullPSL"
        return None
    # big subgroup: beyond dihedral/exceptional/cyclic scale
    if trace_field_degree(list(gens)) == ctx.d:
        return "FullPSL" if psl_flags else "FullPGL"
    cap1 = ctx.q * (ctx.q - 1) + 1  # >= every proper class with small trace field
    els = mulclose(gens, cap1)
    if els is None:
        return "FullPSL" if psl_flags else "FullPGL"
    n = len(els)
    if n == pgl_order(ctx) and ctx.p != 2:
        return "FullPGL"
    if n == psl_order(ctx):
        return "FullPSL"
    return None


def _full_group_tag_large(t: RotationTriple, psl_flags: bool) -> Optional[str]:
    """Closure-free Dickson exclusion for groups too large to materialize.

    Requires a unipotent generator (rules out dihedral subgroups, whose
    cyclic part is prime to p) and a generator of order > 5 (rules out
    A4/S4/A5); affine was excluded by the fixed-point test.
    """
    ctx = t.ctx
    gens = list(t.generators())
    orders = [g.proj_order() for g in gens]
    if ctx.p not in orders or max(orders) <= 5:
        raise NotImplementedError("large-field generation check needs a "
                                  "unipotent generator and a high-order generator")
    if trace_field_degree(gens) != ctx.d:
        return None
    return "FullPSL" if psl_flags else "FullPGL"


# ---------------------------------------------------------------------------
# conjugation / transporter machinery

def _nullspace(rows: list[list]) -> list[list]:
    """Basis of the nullspace of a matrix over a field; rows of FieldElements."""
    if not rows:
        return []
    ctx = rows[0][0].ctx
    m, n = len(rows), len(rows[0])
    a = [row[:] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ctx.zero()] * n
        v[fc] = ctx.one()
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def solve_conjugation(a: ProjElement, b: ProjElement) -> list[ProjElement]:
    """All h in PGL(2,q) with h^-1 a h = b, sorted canonically.

    On representatives, h^-1 A h = lam*B for a scalar with
    lam^2 = det(A)/det(B); both sign choices are solved as Sylvester
    systems and the invertible nullspace combinations collected."""
    from chiral4.fields import is_square, sqrt as fsqrt
    ctx = a.ctx
    if a.is_identity() or b.is_identity():
        if a.is_identity() != b.is_identity():
            return []
        raise ValueError("conjugation solutions of the identity are all of PGL")
    ratio = a.det() / b.det()
    if not is_square(ratio):
        return []
    lam0 = fsqrt(ratio)
    zero = ctx.zero()
    a00, a01, a10, a11 = a.entries()
    out = set()
    for lam in {lam0, -lam0}:
        b00, b01, b10, b11 = (lam * e for e in b.entries())
        # a*h = h*(lam b) as 4 linear equations in h = (x0, x1, x2, x3)
        rows = [
            [a00 - b00, -b10, a01, zero],
            [-b01, a00 - b11, zero, a01],
            [a10, zero, a11 - b00, -b10],
            [zero, a10, -b01, a11 - b11],
        ]
        basis = _nullspace(rows)
        if not basis:
            continue
        if len(basis) == 1:
            cands = [basis[0]]
        elif len(basis) == 2:
            u, v = basis
            cands = [[x + lamb * y for x, y in zip(u, v)] for lamb in ctx.elements()]
            cands.append(v)
        else:
            raise AssertionError(f"unexpected commutant dimension {len(basis)}")
        for h in cands:
            det = h[0] * h[3] - h[1] * h[2]
            if not det.is_zero():
                out.add(ProjElement(h[0], h[1], h[2], h[3]))
    return sorted(out, key=lambda g: g.key())


def transporter(src: RotationTriple, dst: tuple[ProjElement, ProjElement, ProjElement]
                ) -> Optional[tuple[int, ProjElement]]:
    """Least (r, h) in PGammaL with conj(frob_r(src_i), h) = dst_i, or None.

    Seeded on the s2 constraint; the solution set of that constraint is a
    centralizer coset of size <= q+1."""
    ctx = src.ctx
    for r in range(ctx.d):
        twisted = src.frobenius(r)
        for h in solve_conjugation(twisted.s2, dst[1]):
            if (twisted.s1.conjugate(h) == dst[0]
                    and twisted.s3.conjugate(h) == dst[2]):
                return (r, h)
    return None


def transporter_bruteforce(src: RotationTriple,
                           dst: tuple[ProjElement, ProjElement, ProjElement],
                           group: Sequence[ProjElement]
                           ) -> Optional[tuple[int, ProjElement]]:
    """Same search over an explicit list of candidate conjugators."""
    for r in range(src.ctx.d):
        twisted = src.frobenius(r)
        for h in group:
            if (twisted.s2.conjugate(h) == dst[1]
                    and twisted.s1.conjugate(h) == dst[0]
                    and twisted.s3.conjugate(h) == dst[2]):
                return (r, h)
    return None


def dual(t: RotationTriple) -> RotationTriple:
    return RotationTriple(t.s3.inverse(), t.s2.inverse(), t.s1.inverse())


def enantiomorph(t: RotationTriple) -> RotationTriple:
    """The mirror generating triple (s1^-1, s1^2 s2, s3)."""
    return RotationTriple(t.s1.inverse(), t.s1 * t.s1 * t.s2, t.s3)


def is_chiral(t: RotationTriple, precheck: bool = True) -> bool:
    """No (r, h) in PGammaL maps (s1, s2, s3) to (s1^-1, s1^2 s2, s3)."""
    if precheck:
        if not check_relations(t):
            raise PreconditionFailed("relations")
        if not check_intersection(t):
            raise PreconditionFailed("intersection")
        if _full_group_tag(t) is None:
            raise PreconditionFailed("generation")
    mirror = enantiomorph(t)
    return transporter(t, mirror.generators()) is None


def are_equivalent(t1: RotationTriple, t2: RotationTriple) -> bool:
    """Some element of PGammaL(2,q) conjugates t1 componentwise onto t2."""
    if t1.ctx != t2.ctx:
        raise ValueError("mixed contexts")
    return transporter(t1, t2.generators()) is not None


def fingerprint(t: RotationTriple):
    """Conjugation-invariant key: Schlafli symbol plus the multiset of trace
    invariants of words of length <= 3 in the generators."""
    s1, s2, s3 = t.generators()
    words = [s1, s2, s3, s1 * s2, s1 * s3, s2 * s3, s1 * s2 * s3]
    thetas = sorted(w.trace_invariant().coeffs for w in words)
    orders = tuple(s.proj_order() for s in (s1, s2, s3))
    return (orders, tuple(thetas))


# ---------------------------------------------------------------------------
# verified records

@dataclass
class PolytopeRecord:
    triple: RotationTriple
    schlafli: SchlafliSymbol
    group: SubgroupClass
    parabolic1: SubgroupClass
    parabolic2: SubgroupClass
    provenance: str = "enumerated"
    fp: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.fp is None:
            self.fp = fingerprint(self.triple)

    def sort_key(self):
        return (self.schlafli.as_tuple(), self.fp, self.triple.key())

    def to_json(self) -> dict:
        return {
            "field": self.triple.ctx.name(),
            "group": "PSL" if self.group.tag == "FullPSL" else "PGL",
            "schlafli": list(self.schlafli.as_tuple()),
            "s1": self.triple.s1.to_json(),
            "s2": self.triple.s2.to_json(),
            "s3": self.triple.s3.to_json(),
            "parabolics": [self.parabolic1.label(), self.parabolic2.label()],
            "provenance": self.provenance,
        }

    @staticmethod
    def from_json(obj: dict) -> "PolytopeRecord":
        ctx = parse_field(obj["field"])
        t = RotationTriple(ProjElement.from_json(obj["s1"], ctx),
                           ProjElement.from_json(obj["s2"], ctx),
                           ProjElement.from_json(obj["s3"], ctx))
        group = "FullPSL" if obj["group"] == "PSL" else "FullPGL"
        rec = verify_triple(t, group, provenance=obj.get("provenance", "imported"))
        if rec is None:
            raise ValueError("triple in file does not verify as a chiral polytope")
        return rec


def verify_triple(t: RotationTriple, expected_group: str,
                  provenance: str = "enumerated") -> Optional[PolytopeRecord]:
    """Run every predicate; a PolytopeRecord on success, None otherwise."""
    try:
        schl = schlafli_of(t)
    except DegenerateOrder:
        return None
    if not check_relations(t):
        return None
    if not check_intersection(t):
        return None
    if not check_generation(t, expected_group):
        return None
    if not is_chiral(t, precheck=False):
        return None
    h1, h2 = parabolic_subgroups(t)
    ctx = t.ctx
    tag = expected_group
    if ctx.p == 2:
        tag = "FullPSL"
    order = psl_order(ctx) if tag == "FullPSL" else pgl_order(ctx)
    return PolytopeRecord(t, schl, SubgroupClass(tag, (ctx.q,), order),
                          classify(h1), classify(h2), provenance)


def section_regularity(t: RotationTriple) -> tuple[bool, bool]:
    """Direct-regularity verdicts for the rank-3 sections (facet polyhedron
    on (s1, s2), vertex-figure on (s2, s3)): does the orientation-reversing
    map g1 -> g1^-1, g2 -> g1^2 g2 extend to a group automorphism?

    Rank-3 sections of a chiral 4-polytope are chiral or directly regular;
    both verdicts occur (the affine-parabolic families have chiral facets)."""
    from chiral4.subgroups import extends_to_automorphism
    h1, h2 = parabolic_subgroups(t)
    ok1 = extends_to_automorphism(
        [t.s1, t.s2], [t.s1.inverse(), t.s1 * t.s1 * t.s2], h1.elements)
    ok2 = extends_to_automorphism(
        [t.s2, t.s3], [t.s2.inverse(), t.s2 * t.s2 * t.s3], h2.elements)
    return ok1, ok2


def rank2_sections_directly_regular(t: RotationTriple) -> bool:
    """The rank-2 sections (2-faces and edge cofaces) of a chiral 4-polytope
    are directly regular: inversion extends on <s1> and on <s3>."""
    from chiral4.subgroups import extends_to_automorphism
    ok = True
    for g in (t.s1, t.s3):
        els = frozenset(_cyclic_set(g))
        ok = ok and extends_to_automorphism([g], [g.inverse()], els)
    return ok
