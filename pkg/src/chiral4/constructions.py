"""Explicit chiral-polytope families.

Three sources: the affine-parabolic PGL family (sigma2 a split torus
element, types [k,k,k] / [k/2,k,k/2]), its PSL analogue for q = 1 mod 4,
and the icosahedral completions of types [5,3,4], [5,3,5], [3,5,3]
obtained by adjoining a third generator to an A5 embedding subject to
three trace conditions.

Counts follow the source theorems, which enumerate generating-triple
classes up to group automorphisms (the two enantiomorphic forms of a
chiral polytope are counted individually, dual pairs separately).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from chiral4.fields import (
    FieldCtx,
    FieldElement,
    NotASquare,
    euler_phi,
    is_square,
    sqrt,
)
from chiral4.polytopes import (
    PolytopeRecord,
    RotationTriple,
    SchlafliSymbol,
    are_equivalent,
    check_intersection,
    check_relations,
    is_chiral,
    verify_triple,
)
from chiral4.projective import ProjElement


class OrderTooSmall(ValueError):
    pass


class WrongResidue(ValueError):
    pass


class NoSqrt5(ArithmeticError):
    pass


Lift = tuple[FieldElement, FieldElement, FieldElement, FieldElement]


# ---------------------------------------------------------------------------
# affine-parabolic families (split-torus sigma2)

@dataclass(frozen=True)
class FamilyEntry:
    k: int
    l_reps: tuple[int, ...]
    count: int
    schlafli: SchlafliSymbol


def pgl_triple(ctx: FieldCtx, l: int) -> RotationTriple:
    """The literal triple with sigma2 = diag(j^l, 1):
    [[-j^-l,1],[0,1]], [[j^l,0],[0,1]], [[1,0],[1+j^l,-j^l]]."""
    j = ctx.generator()
    jl = j**l
    from chiral4.fields import element_order
    if element_order(jl) <= 2:
        raise OrderTooSmall(l)
    s1 = ProjElement.of(ctx, -(jl.inverse()), 1, 0, 1)
    s2 = ProjElement.of(ctx, jl, 0, 0, 1)
    s3 = ProjElement.of(ctx, 1, 0, 1 + jl, -jl)
    return RotationTriple(s1, s2, s3)


def _admissible(ctx: FieldCtx, k: int, psl: bool) -> bool:
    p, d, q = ctx.p, ctx.d, ctx.q
    if k <= 2:
        return False
    if psl:
        if (q - 1) // 2 % k != 0 or k % 2 != 0:
            return False
    else:
        if (q - 1) % k != 0:
            return False
        if q % 2 == 1 and ((q - 1) // 2) % k == 0:
            return False
    return all((p**e - 1) % k != 0 and (p**e + 1) % k != 0 for e in range(1, d))


def _orbit_reps(ctx: FieldCtx, k: int) -> tuple[int, ...]:
    """One exponent l per Frobenius orbit of the order-k elements j^l."""
    step = (ctx.q - 1) // k
    seen: set[int] = set()
    reps = []
    for u in range(1, k):
        if gcd(u, k) != 1 or u in seen:
            continue
        seen.update(u * pow(ctx.p, r, k) % k for r in range(ctx.d))
        reps.append(step * u)
    return tuple(reps)


def _family_type(ctx: FieldCtx, k: int) -> SchlafliSymbol:
    if ctx.q % 4 == 3 or (ctx.q % 4 == 1 and k % 4 == 2):
        return SchlafliSymbol(k // 2, k, k // 2)
    return SchlafliSymbol(k, k, k)


def pgl_family(ctx: FieldCtx) -> list[FamilyEntry]:
    """Admissible k with representatives and class counts phi(k)/d, for
    chiral 4-polytopes with group PGL(2,q) and non-fixed-point-free
    parabolic subgroups."""
    assert ctx.q > 4
    out = []
    for k in range(3, ctx.q):
        if not _admissible(ctx, k, psl=False):
            continue
        reps = _orbit_reps(ctx, k)
        count = euler_phi(k) // ctx.d
        assert len(reps) == count
        out.append(FamilyEntry(k, reps, count, _family_type(ctx, k)))
    return out


def psl_family(ctx: FieldCtx) -> list[FamilyEntry]:
    """Same for PSL(2,q), q = 1 mod 4: even k dividing (q-1)/2."""
    if ctx.q % 4 != 1:
        raise WrongResidue(ctx.q)
    out = []
    for k in range(3, ctx.q):
        if not _admissible(ctx, k, psl=True):
            continue
        reps = _orbit_reps(ctx, k)
        count = euler_phi(k) // ctx.d
        assert len(reps) == count
        out.append(FamilyEntry(k, reps, count, _family_type(ctx, k)))
    return out


def family_triples(ctx: FieldCtx, entry: FamilyEntry) -> list[RotationTriple]:
    return [pgl_triple(ctx, l) for l in entry.l_reps]


# ---------------------------------------------------------------------------
# icosahedral embeddings

@dataclass(frozen=True)
class IcosahedralPair:
    """Images of the order-5/order-3 rotation pair of an icosahedral group,
    one per golden-trace branch t = (-1 +/- sqrt5)/2."""

    branch: int
    t: FieldElement
    a: FieldElement
    b: FieldElement
    lift1: Lift = field(repr=False)  # det-1 matrix of the order-5 generator
    lift2: Lift = field(repr=False)  # det-1 matrix of the order-3 generator

    @property
    def s1(self) -> ProjElement:
        return ProjElement(*self.lift1)

    @property
    def s2(self) -> ProjElement:
        return ProjElement(*self.lift2)


def icosahedral_embeddings(ctx: FieldCtx) -> tuple[IcosahedralPair, IcosahedralPair]:
    """Both A5 embeddings; requires sqrt(5) in GF(q), odd q."""
    if ctx.p == 2 or not is_square(ctx.el(5)):
        raise NoSqrt5(ctx)
    r5 = sqrt(ctx.el(5))
    half = ctx.el(2).inverse()
    pairs = []
    for branch, tt in ((1, (r5 - 1) * half), (2, (-r5 - 1) * half)):
        target = tt * tt - 3
        a = b = None
        for cand in ctx.elements():
            if cand.is_zero():
                continue
            rem = target - cand * cand
            if is_square(rem):
                a, b = cand, sqrt(rem)
                break
        assert a is not None
        lift1 = ((tt - b) * half, (a + 1) * half, (a - 1) * half, (tt + b) * half)
        lift2 = ((a + 1) * half, (tt + b) * half, (b - tt) * half, (1 - a) * half)
        pairs.append(IcosahedralPair(branch, tt, a, b, lift1, lift2))
    return tuple(pairs)


# ---------------------------------------------------------------------------
# third-generator completion

def _lift_mul(x: Lift, y: Lift) -> Lift:
    return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])


def _affine_solve(rows: list[list[FieldElement]], rhs: list[FieldElement]):
    """Particular solution + nullspace basis of rows*x = rhs over GF(q)."""
    ctx = rows[0][0].ctx
    m, n = len(rows), len(rows[0])
    a = [rows[i][:] + [rhs[i]] for i in range(m)]
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
    for i in range(r, m):
        if not a[i][n].is_zero():
            return None, []  # inconsistent
    part = [ctx.zero()] * n
    for i, pc in enumerate(pivots):
        part[pc] = a[i][n]
    basis = []
    for fc in range(n):
        if fc in pivots:
            continue
        v = [ctx.zero()] * n
        v[fc] = ctx.one()
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return part, basis


def _det4(v):
    return v[0] * v[3] - v[1] * v[2]


def complete_triple(g1: Lift, g2: Lift, target_trace_sq: FieldElement
                    ) -> list[RotationTriple]:
    """All sigma3 = [[w,x],[y,z]] with det 1, trace^2 = target, and
    sigma2*sigma3, sigma1*sigma2*sigma3 involutions; assembled triples.

    Three trace conditions are linear in (w,x,y,z); det = 1 closes the
    1-parameter solution line with one quadratic.  Empty when either the
    trace target or the quadratic's discriminant is a non-square."""
    ctx = g1[0].ctx
    try:
        tau = sqrt(target_trace_sq)
    except NotASquare:
        return []
    g12 = _lift_mul(g1, g2)
    zero, one = ctx.zero(), ctx.one()

    def trace_row(mat: Lift) -> list[FieldElement]:
        # tr(mat * [[w,x],[y,z]]) as coefficients of (w, x, y, z)
        return [mat[0], mat[2], mat[1], mat[3]]

    rows = [trace_row(g2), trace_row(g12), [one, zero, zero, one]]
    rhs = [zero, zero, tau]
    part, basis = _affine_solve(rows, rhs)
    if part is None:
        return []
    assert len(basis) == 1, "degenerate completion system"
    v = basis[0]
    # det(part + lam*v) = 1
    a2 = _det4(v)
    a1 = part[0] * v[3] + v[0] * part[3] - part[1] * v[2] - v[1] * part[2]
    a0 = _det4(part) - 1
    lams = _quad_roots(a2, a1, a0)
    out = []
    s1p, s2p = ProjElement(*g1), ProjElement(*g2)
    for lam in lams:
        m = tuple(p + lam * w for p, w in zip(part, v))
        assert _det4(m) == ctx.one()
        if (m[0] + m[3]) * (m[0] + m[3]) != target_trace_sq:
            continue
        if m[1].is_zero() and m[2].is_zero() and m[0] == m[3]:
            continue  # scalar
        out.append(RotationTriple(s1p, s2p, ProjElement(*m)))
    return out


def _quad_roots(a2, a1, a0) -> list[FieldElement]:
    ctx = a2.ctx
    if a2.is_zero():
        if a1.is_zero():
            return []
        return [-a0 / a1]
    disc = a1 * a1 - 4 * a2 * a0
    if not is_square(disc):
        return []
    r = sqrt(disc)
    inv = (2 * a2).inverse()
    roots = [(-a1 + r) * inv]
    if not r.is_zero():
        roots.append((-a1 - r) * inv)
    return roots


def completion_discriminant(pair: IcosahedralPair, target_trace_sq: FieldElement
                            ) -> FieldElement:
    """Discriminant of the completion quadratic in the paper's (w,z)-
    eliminated normalization; valid for the icosahedral pairs, whose
    product is [[0,1],[-1,0]]."""
    ctx = pair.t.ctx
    m11, m12, m21, m22 = pair.lift2
    u = m12 + m21
    s = m11 - m22
    tau_sq = target_trace_sq
    return (tau_sq * u * u * (m11 + m22) * (m11 + m22)
            - 4 * (u * u + s * s) * (m11 * m22 * tau_sq + s * s))


# ---------------------------------------------------------------------------
# the [5,3,4], [5,3,5], [3,5,3] families

@dataclass
class FamilyResult:
    records: list[PolytopeRecord]
    rejected_regular: list[RotationTriple]


def _coxeter_family(ctx: FieldCtx, reverse_pair: bool,
                    targets: list[FieldElement], provenance: str) -> FamilyResult:
    try:
        pairs = icosahedral_embeddings(ctx)
    except NoSqrt5:
        return FamilyResult([], [])
    records: list[PolytopeRecord] = []
    rejected: list[RotationTriple] = []
    for pair in pairs:
        g1, g2 = (pair.lift2, pair.lift1) if reverse_pair else (pair.lift1, pair.lift2)
        for target in targets:
            for t in complete_triple(g1, g2, target):
                if not check_relations(t):
                    continue
                rec = verify_triple(t, "FullPSL", provenance)
                if rec is not None:
                    if not any(are_equivalent(t, r.triple) for r in records):
                        records.append(rec)
                elif (verify_generates_psl(t)
                      and not is_chiral(t, precheck=False)):
                    # full-group quotient admitting the mirror automorphism:
                    # the rotation triple of a regular polytope (at q = 19 its
                    # sigma-form intersection property even fails)
                    if not any(are_equivalent(t, r) for r in rejected):
                        rejected.append(t)
    records.sort(key=lambda r: r.sort_key())
    return FamilyResult(records, rejected)


def verify_generates_psl(t: RotationTriple) -> bool:
    from chiral4.polytopes import check_generation
    return check_generation(t, "FullPSL")


def build_family_534(ctx: FieldCtx) -> FamilyResult:
    """Type [5,3,4]: sigma3 of order 4, trace^2 = 2."""
    if ctx.p == 2:
        return FamilyResult([], [])
    return _coxeter_family(ctx, False, [ctx.el(2)], "[5,3,4] family")


def build_family_535(ctx: FieldCtx) -> FamilyResult:
    """Type [5,3,5]: sigma3 of order 5, trace^2 in both golden branches."""
    if ctx.p == 2 or not is_square(ctx.el(5)):
        return FamilyResult([], [])
    r5 = sqrt(ctx.el(5))
    half = ctx.el(2).inverse()
    t1 = (r5 - 1) * half
    t2 = (-r5 - 1) * half
    return _coxeter_family(ctx, False, [t1 * t1, t2 * t2], "[5,3,5] family")


def build_family_353(ctx: FieldCtx) -> FamilyResult:
    """Type [3,5,3]: generator pair reversed to (order 3, order 5),
    sigma3 of order 3, trace^2 = 1."""
    if ctx.p == 2:
        return FamilyResult([], [])
    return _coxeter_family(ctx, True, [ctx.el(1)], "[3,5,3] family")
