import random

import pytest

from chiral4.fields import make_field, subfield_embed
from chiral4.projective import ProjElement, pgl_generators, psl_generators, pgl_order, psl_order
from chiral4.subgroups import (
    ElementsNotMaterialized,
    SubgroupHandle,
    classify,
    extends_to_automorphism,
    generate,
    intersect,
    mulclose,
    perm_group_order,
    trace_field_degree,
)


def embed_matrix(g, dst):
    return ProjElement.of(dst, subfield_embed(g.a, dst), subfield_embed(g.b, dst),
                          subfield_embed(g.c, dst), subfield_embed(g.d, dst))


def triple2(ctx, l):
    j = ctx.generator()
    jl = j**l
    s1 = ProjElement.of(ctx, -(jl.inverse()), 1, 0, 1)
    s2 = ProjElement.of(ctx, jl, 0, 0, 1)
    s3 = ProjElement.of(ctx, 1, 0, 1 + jl, -jl)
    return s1, s2, s3


# ---------------------------------------------------------------------------
# generate

def test_generate_identity():
    ctx = make_field(7)
    h = generate([ProjElement.identity(ctx)])
    assert h.order == 1
    assert classify(h).tag == "Trivial"


def test_generate_dihedral_normalizer_q7():
    ctx = make_field(7)
    j = ctx.generator()
    h = generate([ProjElement.of(ctx, j, 0, 0, 1), ProjElement.of(ctx, 0, 1, -1, 0)])
    assert h.order == 2 * (7 - 1)
    cls = classify(h)
    assert cls.tag == "Dihedral" and cls.params == (12,)


def test_generate_affine_parabolic_q8():
    ctx = make_field(2, 3)
    s1, s2, _ = triple2(ctx, 1)
    h = generate([s1, s2])
    cls = classify(h)
    assert h.order == 8 * 7
    assert cls.tag == "Affine" and cls.params == (8, 7)
    assert cls.label() == "E_8:C_7"


def test_generate_unmaterialized_order():
    ctx = make_field(13)
    h = generate(psl_generators(ctx), cap=50)
    assert h.elements is None
    assert h.order == psl_order(ctx) == 1092
    assert classify(generate(pgl_generators(ctx), cap=10**6)).tag == "FullPGL"


def test_generate_full_groups_small():
    for p, d in [(5, 1), (7, 1), (3, 2), (2, 2)]:
        ctx = make_field(p, d)
        assert generate(pgl_generators(ctx)).order == pgl_order(ctx)
        assert generate(psl_generators(ctx)).order == psl_order(ctx)


def test_generate_order_independent_of_gen_order():
    ctx = make_field(7)
    j = ctx.generator()
    a = ProjElement.of(ctx, j, 0, 0, 1)
    b = ProjElement.of(ctx, 0, 1, -1, 0)
    assert generate([a, b]).elements == generate([b, a]).elements


# ---------------------------------------------------------------------------
# classify

def test_classify_cyclic_sweep_q13():
    ctx = make_field(13)
    group = mulclose(pgl_generators(ctx), cap=10**6)
    seen = set()
    for g in group:
        th = g.trace_invariant().coeffs
        if th in seen:
            continue
        seen.add(th)
        cls = classify(generate([g]))
        if g.is_identity():
            assert cls.tag == "Trivial"
        else:
            assert cls.tag == "Cyclic" and cls.params == (g.proj_order(),)


def test_classify_a5_in_psl11():
    ctx = make_field(11)
    j = ctx.generator()
    c = ProjElement.of(ctx, j**2, 0, 0, 1)  # order 5
    assert c.proj_order() == 5
    found = None
    for b in ctx.elements():
        for cc in ctx.elements():
            if (ctx.el(-1) - b * cc).is_zero():
                continue
            t = ProjElement.of(ctx, 1, b, cc, -1)
            if not t.in_psl():
                continue
            h = mulclose([t, c], cap=100)
            if h is not None and len(h) == 60:
                found = generate([t, c])
                break
        if found:
            break
    assert found is not None
    assert classify(found).tag == "A5"


def test_classify_s4_a4_in_psl17():
    # 17 = +/-1 mod 8, so S4 is a subgroup of PSL(2,17); A4 sits inside it
    ctx = make_field(17)
    target = None
    j = ctx.generator()
    c = ProjElement.of(ctx, j**4, 0, 0, 1)  # order 4
    for b in ctx.elements():
        for cc in ctx.elements():
            if (ctx.el(-1) - b * cc).is_zero():
                continue
            t = ProjElement.of(ctx, 1, b, cc, -1)
            h = mulclose([t, c], cap=30)
            if h is not None and len(h) == 24:
                target = generate([t, c])
                break
        if target:
            break
    assert target is not None
    assert classify(target).tag == "S4"
    # order-3 elements generate the A4 inside S4
    sub = generate([g for g in target.elements if g.proj_order() == 3])
    assert sub.order == 12
    assert classify(sub).tag == "A4"


def test_classify_subfield_psl():
    small, big = make_field(13), make_field(13, 2)
    gens = [embed_matrix(g, big) for g in psl_generators(small)]
    h = generate(gens)
    assert h.order == psl_order(small)
    cls = classify(h)
    assert cls.tag == "SubfieldPSL" and cls.label() == "PSL(2,13)"
    gens_pgl = [embed_matrix(g, big) for g in pgl_generators(small)]
    cls2 = classify(generate(gens_pgl))
    assert cls2.tag == "SubfieldPGL" and cls2.label() == "PGL(2,13)"


def test_classify_klein_four():
    ctx = make_field(5)
    a = ProjElement.of(ctx, 1, 0, 0, -1)
    b = ProjElement.of(ctx, 0, 1, 1, 0)
    h = generate([a, b])
    assert h.order == 4
    assert classify(h).tag == "Dihedral"


def naive_check(cls, els):
    """Independent verification of a classification verdict from the raw
    element set (order profile, normality, counts)."""
    orders = sorted(g.proj_order() for g in els)
    n = len(els)
    assert cls.order == n
    if cls.tag == "Cyclic":
        assert max(orders) == n
    elif cls.tag == "Dihedral":
        k = n // 2
        assert orders.count(2) in (k, k + 1)
        assert any(o == k for o in orders)
    elif cls.tag == "Affine":
        u, k = cls.params
        assert n == u * k
        unip = {g for g in els if g.is_identity() or g.trace_invariant() == g.ctx.el(4)}
        assert len(unip) == u
        assert all(x * y in unip for x in unip for y in unip)  # normal Sylow-p closure
    elif cls.tag == "A4":
        assert orders == [1] + [2] * 3 + [3] * 8
    elif cls.tag == "S4":
        assert orders == [1] + [2] * 9 + [3] * 8 + [4] * 6
    elif cls.tag == "A5":
        assert orders == [1] + [2] * 15 + [3] * 20 + [5] * 24
    elif cls.tag in ("SubfieldPSL", "SubfieldPGL", "FullPSL", "FullPGL"):
        qe = cls.params[0]
        full = qe * (qe * qe - 1)
        assert n in (full, full // 2)


@pytest.mark.parametrize("p,d", [(5, 1), (7, 1), (13, 1), (3, 2)])
def test_classify_random_pairs_vs_naive(p, d):
    ctx = make_field(p, d)
    group = sorted(mulclose(pgl_generators(ctx), cap=10**6), key=lambda g: g.key())
    rng = random.Random(7)
    for _ in range(15):
        a, b = rng.choice(group), rng.choice(group)
        if a.is_identity():
            continue
        h = generate([a, b])
        cls = classify(h)
        naive_check(cls, h.elements)


# ---------------------------------------------------------------------------
# intersect

def test_intersect_self():
    ctx = make_field(7)
    h = generate([ProjElement.of(ctx, ctx.generator(), 0, 0, 1)])
    assert intersect(h, h).elements == h.elements


def test_intersect_parabolics_q8():
    ctx = make_field(2, 3)
    s1, s2, s3 = triple2(ctx, 1)
    h1 = generate([s1, s2])
    h2 = generate([s2, s3])
    meet = intersect(h1, h2)
    cls = classify(meet)
    assert cls.tag == "Cyclic" and cls.params == (7,)


def test_intersect_requires_materialization():
    ctx = make_field(13)
    h = generate(psl_generators(ctx), cap=50)
    with pytest.raises(ElementsNotMaterialized):
        intersect(h, h)


def test_subfield_intersection_prop27():
    # two distinct subfield PSL(2,3) copies inside PSL(2,9) intersect in
    # a subgroup no larger than PSL(2,3)
    big = make_field(3, 2)
    small = make_field(3)
    base = [embed_matrix(g, big) for g in psl_generators(small)]
    h1 = generate(base)
    assert classify(h1).label() == "PSL(2,3)"
    rng = random.Random(3)
    group = sorted(mulclose(pgl_generators(big), cap=10**6), key=lambda g: g.key())
    for _ in range(10):
        x = rng.choice(group)
        h2 = generate([g.conjugate(x) for g in base])
        meet = intersect(h1, h2)
        assert meet.order <= h1.order
        if meet.order == h1.order:
            assert meet.elements == h1.elements


def test_no_s4_inside_psl27():
    # Lemma on PGL(2,3^e) <= PSL(2,3^d) needing d/e even: 8 does not even
    # divide |PSL(2,27)|, so no order-24 subgroup exists at all
    assert (27 * (27 * 27 - 1) // 2) % 8 != 0


# ---------------------------------------------------------------------------
# trace_field_degree

def test_trace_field_degree_identity():
    ctx = make_field(7)
    assert trace_field_degree([ProjElement.identity(ctx)]) == 1


def test_trace_field_degree_triple2_q8():
    ctx = make_field(2, 3)
    s1, s2, s3 = triple2(ctx, 1)
    assert trace_field_degree([s1, s2, s3]) == 3


def test_trace_field_degree_subfield_gens():
    big = make_field(3, 2)
    gens = [embed_matrix(g, big) for g in psl_generators(make_field(3))]
    assert trace_field_degree(gens) == 1


# ---------------------------------------------------------------------------
# automorphism extension

def test_extends_inversion_on_cyclic():
    ctx = make_field(7)
    g = ProjElement.of(ctx, ctx.generator(), 0, 0, 1)
    h = generate([g])
    assert extends_to_automorphism([g], [g.inverse()], h.elements)


def test_extends_rejects_non_automorphism():
    ctx = make_field(7)
    g = ProjElement.of(ctx, ctx.generator(), 0, 0, 1)  # order 6
    h = generate([g])
    assert not extends_to_automorphism([g], [g * g], h.elements)  # order drops


def test_extends_klein_swap():
    ctx = make_field(5)
    a = ProjElement.of(ctx, 1, 0, 0, -1)
    b = ProjElement.of(ctx, 0, 1, 1, 0)
    h = generate([a, b])
    assert extends_to_automorphism([a, b], [b, a], h.elements)


# ---------------------------------------------------------------------------
# permutation order

def test_perm_group_order_symmetric():
    n = 6
    cyc = tuple([1, 2, 3, 4, 5, 0])
    swap = tuple([1, 0, 2, 3, 4, 5])
    assert perm_group_order([cyc, swap], n) == 720
    assert perm_group_order([cyc], n) == 6
    three = tuple([1, 2, 0, 3, 4, 5])
    assert perm_group_order([three, tuple([0, 1, 2, 4, 5, 3])], n) == 9


def test_perm_group_order_matches_closure():
    ctx = make_field(2, 3)
    from chiral4.subgroups import _order_by_action
    for gens in [pgl_generators(ctx), psl_generators(make_field(7))]:
        assert _order_by_action(gens, gens[0].ctx) == len(mulclose(gens, cap=10**6))


def test_subfield_intersection_prop27_q25():
    # PSL(2,5) copies inside PSL(2,25): pairwise meets are never larger
    big = make_field(5, 2)
    small = make_field(5)
    base = [embed_matrix(g, big) for g in psl_generators(small)]
    h1 = generate(base)
    assert classify(h1).label() == "PSL(2,5)"  # A5 = PSL(2,5) in char 5
    rng = random.Random(5)
    j = big.generator()
    conjs = [ProjElement.of(big, j, 0, 0, 1), ProjElement.of(big, 1, 1, 0, 1),
             ProjElement.of(big, 0, 1, -1, 0)]
    for _ in range(6):
        x = conjs[rng.randrange(3)] * conjs[rng.randrange(3)] * conjs[rng.randrange(3)]
        h2 = generate([g.conjugate(x) for g in base])
        meet = intersect(h1, h2)
        assert meet.order <= h1.order
