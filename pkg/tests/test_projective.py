import pytest

from chiral4.fields import make_field
from chiral4.projective import (
    ContextMismatch,
    IdentityElement,
    ProjElement,
    ProjPoint,
    SingularMatrix,
    all_involutions,
    all_points,
    infinity,
    pgl_generators,
    pgl_order,
    psl_generators,
    psl_order,
)


def mulclose(gens):
    els = set(gens)
    bdy = list(els)
    while bdy:
        new = []
        for g in gens:
            for h in bdy:
                x = g * h
                if x not in els:
                    els.add(x)
                    new.append(x)
        bdy = new
    return els


def J(ctx):
    return ProjElement.of(ctx, 0, 1, -1, 0)


# ---------------------------------------------------------------------------
# canonical form and composition

def test_scalar_variants_are_equal():
    ctx = make_field(7)
    assert ProjElement.of(ctx, 2, 0, 0, 2) == ProjElement.identity(ctx)
    assert ProjElement.of(ctx, 3, 6, 0, 3) == ProjElement.of(ctx, 1, 2, 0, 1)


def test_singular_rejected():
    ctx = make_field(7)
    with pytest.raises(SingularMatrix):
        ProjElement.of(ctx, 1, 2, 2, 4)


def test_compose_inverse_and_standard_involution():
    ctx = make_field(13)
    g = ProjElement.of(ctx, 3, 1, 5, 2)
    assert (g * g.inverse()).is_identity()
    assert (J(ctx) * J(ctx)).is_identity()  # product is -I ~ I


def test_compose_context_mismatch():
    with pytest.raises(ContextMismatch):
        ProjElement.identity(make_field(5)) * ProjElement.identity(make_field(7))


def test_compose_associative_sample():
    ctx = make_field(3, 2)
    els = [ProjElement.of(ctx, 1, ctx.from_index(i), ctx.from_index(j), 2)
           for i in range(3) for j in range(3)
           if not (ctx.one() * 2 - ctx.from_index(i) * ctx.from_index(j)).is_zero()]
    for g in els[:4]:
        for h in els[2:6]:
            for k in els[4:8]:
                assert (g * h) * k == g * (h * k)


# ---------------------------------------------------------------------------
# orders and involutions

def naive_proj_order(g):
    n, x = 1, g
    while not x.is_identity():
        x = x * g
        n += 1
    return n


def test_proj_order_basics():
    ctx = make_field(7)
    assert ProjElement.identity(ctx).proj_order() == 1
    assert J(ctx).proj_order() == 2
    assert ProjElement.of(ctx, 1, 1, 0, 1).proj_order() == 7  # unipotent


@pytest.mark.parametrize("p,d", [(5, 1), (7, 1), (2, 3), (3, 2), (11, 1)])
def test_proj_order_matches_naive_full_group(p, d):
    ctx = make_field(p, d)
    group = mulclose(pgl_generators(ctx))
    assert len(group) == pgl_order(ctx)
    for g in group:
        assert g.proj_order() == naive_proj_order(g)


@pytest.mark.parametrize("p,d", [(5, 1), (7, 1), (13, 1), (3, 2)])
def test_involution_iff_order_two_odd_q(p, d):
    ctx = make_field(p, d)
    for g in mulclose(pgl_generators(ctx)):
        assert g.is_involution() == (g.proj_order() == 2)


def test_unipotent_not_involution_odd():
    ctx = make_field(7)
    assert not ProjElement.of(ctx, 1, 1, 0, 1).is_involution()
    assert not ProjElement.identity(ctx).is_involution()


def test_all_involutions_counts():
    # odd q: q^2 in PGL, q(q+1)/2 or q(q-1)/2 in PSL per q mod 4
    for p in (5, 7, 13):
        ctx = make_field(p)
        assert sum(1 for _ in all_involutions(ctx, psl_only=False)) == p * p
        n_psl = sum(1 for _ in all_involutions(ctx, psl_only=True))
        assert n_psl == (p * (p + 1) // 2 if p % 4 == 1 else p * (p - 1) // 2)
    ctx = make_field(2, 3)
    assert sum(1 for _ in all_involutions(ctx, psl_only=False)) == 8 * 8 - 1


def test_involutions_are_involutions():
    ctx = make_field(3, 2)
    for g in all_involutions(ctx, psl_only=False):
        assert g.is_involution()
        assert (g * g).is_identity()


# ---------------------------------------------------------------------------
# PSL membership

def test_in_psl_basics():
    ctx = make_field(7)
    assert ProjElement.identity(ctx).in_psl()
    j = ctx.generator()
    assert not ProjElement.of(ctx, j, 0, 0, 1).in_psl()  # det = j non-square


def test_in_psl_even_char_always():
    ctx = make_field(2, 2)
    for g in mulclose(pgl_generators(ctx)):
        assert g.in_psl()


@pytest.mark.parametrize("p,d", [(5, 1), (7, 1), (3, 2)])
def test_psl_has_index_two_odd(p, d):
    ctx = make_field(p, d)
    group = mulclose(pgl_generators(ctx))
    inside = [g for g in group if g.in_psl()]
    assert len(inside) * 2 == len(group)
    assert len(inside) == psl_order(ctx)
    assert mulclose(psl_generators(ctx)) == set(inside)


def test_psl_closed_under_products():
    ctx = make_field(7)
    group = list(mulclose(psl_generators(ctx)))
    for g in group[:20]:
        for h in group[:20]:
            assert (g * h).in_psl()


def test_order_three_implies_psl():
    for p, d in [(5, 1), (7, 1), (13, 1), (3, 2), (2, 2)]:
        ctx = make_field(p, d)
        for g in mulclose(pgl_generators(ctx)):
            if g.proj_order() == 3:
                assert g.in_psl()


# ---------------------------------------------------------------------------
# action on PG(1,q)

def test_apply_basics():
    ctx = make_field(7)
    j = ctx.generator()
    z = ProjPoint(ctx.el(3))
    assert ProjElement.identity(ctx).apply(z) == z
    diag = ProjElement.of(ctx, j, 0, 0, 1)
    assert diag.apply(ProjPoint(ctx.zero())) == ProjPoint(ctx.zero())
    assert diag.apply(infinity()) == infinity()
    assert J(ctx).apply(ProjPoint(ctx.zero())) == infinity()
    assert J(ctx).apply(infinity()) == ProjPoint(ctx.zero())


def test_apply_is_group_action():
    ctx = make_field(5)
    g = ProjElement.of(ctx, 1, 2, 3, 2)
    h = ProjElement.of(ctx, 0, 1, 4, 3)
    for z in all_points(ctx):
        assert (g * h).apply(z) == g.apply(h.apply(z))


def test_apply_faithful():
    ctx = make_field(5)
    pts = all_points(ctx)
    for g in mulclose(pgl_generators(ctx)):
        if all(g.apply(z) == z for z in pts):
            assert g.is_identity()


def test_fixed_points():
    ctx = make_field(7)
    j = ctx.generator()
    assert ProjElement.of(ctx, 1, 1, 0, 1).fixed_points() == {infinity()}
    assert ProjElement.of(ctx, j, 0, 0, 1).fixed_points() == {
        ProjPoint(ctx.zero()), infinity()}
    with pytest.raises(IdentityElement):
        ProjElement.identity(ctx).fixed_points()


@pytest.mark.parametrize("p", [7, 11, 19])
def test_psl_involutions_fixed_point_free_3mod4(p):
    ctx = make_field(p)
    assert p % 4 == 3
    for g in all_involutions(ctx, psl_only=True):
        assert g.fixed_points() == set()


def test_fixed_points_match_action():
    ctx = make_field(3, 2)
    pts = all_points(ctx)
    for g in mulclose(pgl_generators(ctx)):
        if g.is_identity():
            continue
        expected = {z for z in pts if g.apply(z) == z}
        assert g.fixed_points() == expected


# ---------------------------------------------------------------------------
# invariants

def test_trace_invariant():
    ctx = make_field(11)
    assert ProjElement.identity(ctx).trace_invariant() == ctx.el(4)
    assert J(ctx).trace_invariant().is_zero()
    g = ProjElement.of(ctx, 3, 1, 5, 2)
    h = ProjElement.of(ctx, 0, 1, 4, 3)
    assert g.conjugate(h).trace_invariant() == g.trace_invariant()


def test_frobenius():
    ctx = make_field(2, 2)
    j = ctx.generator()
    g = ProjElement.of(ctx, j, 0, 0, 1)
    assert g.frobenius(0) == g
    assert g.frobenius(1) == ProjElement.of(ctx, j * j, 0, 0, 1)
    ctx2 = make_field(3, 3)
    g2 = ProjElement.of(ctx2, ctx2.generator(), 1, 0, 1)
    orbit = {g2.frobenius(r) for r in range(ctx2.d)}
    assert ctx2.d % len(orbit) == 0


def test_frobenius_is_automorphism():
    ctx = make_field(2, 2)
    group = list(mulclose(pgl_generators(ctx)))
    for g in group[:12]:
        for h in group[:12]:
            assert (g * h).frobenius(1) == g.frobenius(1) * h.frobenius(1)


def test_json_round_trip():
    ctx = make_field(13, 2)
    g = ProjElement.of(ctx, ctx.generator(), 1, ctx.el(5), 2)
    assert ProjElement.from_json(g.to_json()) == g
