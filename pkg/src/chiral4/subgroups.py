"""Subgroup generation and Dickson-taxonomy classification in PGL(2,q).

Subgroups are materialized by breadth-first closure with canonical-form
hashing; above the cap the order is computed from the permutation action
on PG(1,q).  Classification keys on order, fixed points, and element
order statistics, which disambiguate the taxonomy exhaustively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from chiral4.fields import FieldCtx, divisors
from chiral4.projective import (
    ProjElement,
    all_points,
    pgl_order,
    psl_order,
)


class CapExceededWithoutOrder(RuntimeError):
    pass


class ElementsNotMaterialized(ValueError):
    pass


class UnrecognizedSubgroup(RuntimeError):
    """Signals an implementation bug; the taxonomy is exhaustive."""


DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class SubgroupClass:
    """Verdict for a generated subgroup of PGL(2,q)."""

    tag: str           # Trivial Cyclic Dihedral Affine A4 S4 A5 SubfieldPSL SubfieldPGL FullPSL FullPGL
    params: tuple
    order: int

    def label(self) -> str:
        t = self.tag
        if t == "Trivial":
            return "1"
        if t == "Cyclic":
            return f"C_{self.params[0]}"
        if t == "Dihedral":
            return f"D_{self.params[0]}"
        if t == "Affine":
            u, k = self.params
            return f"E_{u}" if k == 1 else f"E_{u}:C_{k}"
        if t in ("A4", "S4", "A5"):
            return t
        if t == "SubfieldPSL":
            return f"PSL(2,{self.params[0]})"
        if t == "SubfieldPGL":
            return f"PGL(2,{self.params[0]})"
        if t == "FullPSL":
            return f"PSL(2,{self.params[0]})"
        if t == "FullPGL":
            return f"PGL(2,{self.params[0]})"
        raise AssertionError(t)

    def is_full(self) -> bool:
        return self.tag in ("FullPSL", "FullPGL")


@dataclass
class SubgroupHandle:
    ctx: FieldCtx
    generators: list[ProjElement]
    elements: Optional[frozenset[ProjElement]]
    order: int
    cls: Optional[SubgroupClass] = None

    def materialized(self) -> bool:
        return self.elements is not None


def mulclose(gens: Sequence[ProjElement], cap: int) -> Optional[set[ProjElement]]:
    """BFS closure under multiplication; None if the cap is exceeded."""
    idn = ProjElement.identity(gens[0].ctx)
    els = {idn}
    els.update(gens)
    bdy = [g for g in els if not g.is_identity()]
    while bdy:
        new = []
        for h in bdy:
            for g in gens:
                x = h * g
                if x not in els:
                    els.add(x)
                    new.append(x)
                    if len(els) > cap:
                        return None
        bdy = new
    return els


def generate(gens: Sequence[ProjElement], cap: int = DEFAULT_CAP) -> SubgroupHandle:
    """Subgroup generated by gens; elements stay unmaterialized above cap."""
    gens = list(gens)
    assert gens, "need at least one generator"
    ctx = gens[0].ctx
    els = mulclose(gens, cap)
    if els is not None:
        return SubgroupHandle(ctx, gens, frozenset(els), len(els))
    order = _order_by_action(gens, ctx)
    return SubgroupHandle(ctx, gens, None, order)


def _order_by_action(gens: Sequence[ProjElement], ctx: FieldCtx) -> int:
    pts = all_points(ctx)
    index = {z: i for i, z in enumerate(pts)}
    perms = [tuple(index[g.apply(z)] for z in pts) for g in gens]
    order = perm_group_order(perms, len(pts))
    if order is None:
        raise CapExceededWithoutOrder(gens)
    return order


def intersect(h1: SubgroupHandle, h2: SubgroupHandle) -> SubgroupHandle:
    if not (h1.materialized() and h2.materialized()):
        raise ElementsNotMaterialized()
    els = h1.elements & h2.elements
    # the element list itself is the only generating set known for a meet
    return SubgroupHandle(h1.ctx, sorted(els, key=lambda g: g.key()),
                          frozenset(els), len(els))


# ---------------------------------------------------------------------------
# classification

def _psl_size(p: int, e: int) -> int:
    qe = p**e
    return qe * (qe * qe - 1) // (2 if p != 2 else 1)


def _pgl_size(p: int, e: int) -> int:
    qe = p**e
    return qe * (qe * qe - 1)


def _common_fixed_point(gens: Sequence[ProjElement]) -> bool:
    pts = None
    for g in gens:
        if g.is_identity():
            continue
        fp = g.fixed_points()
        pts = fp if pts is None else pts & fp
        if not pts:
            return False
    return pts is None or bool(pts)


def classify(h: SubgroupHandle) -> SubgroupClass:
    """Unique taxonomy tag for the subgroup; cached on the handle."""
    if h.cls is not None:
        return h.cls
    h.cls = _classify(h)
    return h.cls


def _classify(h: SubgroupHandle) -> SubgroupClass:
    ctx = h.ctx
    if h.order > 1:
        if h.order == pgl_order(ctx) and ctx.p != 2:
            return SubgroupClass("FullPGL", (ctx.q,), h.order)
        if h.order == psl_order(ctx):
            return SubgroupClass("FullPSL", (ctx.q,), h.order)
        if not h.materialized():
            return _classify_by_order(ctx, h.order)

    els = h.elements
    # order statistics via one proj_order call per distinct trace invariant
    order_of_theta: dict[tuple, int] = {}
    orders: dict[ProjElement, int] = {}
    for g in els:
        if g.is_identity():
            orders[g] = 1
            continue
        th = g.trace_invariant().coeffs
        if th not in order_of_theta:
            order_of_theta[th] = g.proj_order()
        orders[g] = order_of_theta[th]
    n_unip = sum(1 for g, v in orders.items() if v == ctx.p and not g.is_identity()
                 and g.trace_invariant() == ctx.el(4))

    def cyclic_index2(k: int) -> bool:
        gen_k = next((g for g, v in orders.items() if v == k), None)
        if gen_k is None:
            return False
        cyc = set()
        x = gen_k
        for _ in range(k):
            cyc.add(x)
            x = x * gen_k
        return cyc <= els and all(orders[g] == 2 for g in els - cyc)

    return classify_from_stats(
        ctx, h.order, sorted(orders.values()), n_unip,
        _common_fixed_point(h.generators), cyclic_index2)


def classify_from_stats(ctx: FieldCtx, n: int, order_profile: list[int],
                        n_unip: int, reducible: bool, cyclic_index2) -> SubgroupClass:
    """Taxonomy decision from group statistics; shared by the object-level
    and the packed enumeration paths."""
    p, q = ctx.p, ctx.q
    if n == 1:
        return SubgroupClass("Trivial", (), 1)
    if n == pgl_order(ctx) and p != 2:
        return SubgroupClass("FullPGL", (q,), n)
    if n == psl_order(ctx):
        return SubgroupClass("FullPSL", (q,), n)

    max_order = order_profile[-1]
    n_invol = sum(1 for v in order_profile if v == 2)
    if max_order == n:
        return SubgroupClass("Cyclic", (n,), n)
    if reducible:
        u = n_unip + 1
        assert u > 1 and n % u == 0, "reducible non-cyclic subgroup must have translations"
        return SubgroupClass("Affine", (u, n // u), n)
    if n % 2 == 0 and cyclic_index2(n // 2):
        return SubgroupClass("Dihedral", (n,), n)

    profile = set(order_profile)
    if n == 12 and profile == {1, 2, 3}:
        if p == 3:
            return SubgroupClass("SubfieldPSL", (3,), n)  # A4 = PSL(2,3)
        return SubgroupClass("A4", (), n)
    if n == 24 and profile == {1, 2, 3, 4} and n_invol == 9:
        if p == 3:
            return SubgroupClass("SubfieldPGL", (3,), n)  # S4 = PGL(2,3)
        return SubgroupClass("S4", (), n)
    if n == 60 and profile == {1, 2, 3, 5} and n_invol == 15:
        if p == 2:
            return SubgroupClass("SubfieldPSL", (4,), n)  # A5 = PSL(2,4)
        if p == 5:
            return SubgroupClass("SubfieldPSL", (5,), n)  # A5 = PSL(2,5)
        return SubgroupClass("A5", (), n)

    for e in divisors(ctx.d):
        if e == ctx.d:
            continue
        if n == _psl_size(p, e) and p**e > 3:
            return SubgroupClass("SubfieldPSL", (p**e,), n)
        if n == _pgl_size(p, e) and p**e > 3 and p != 2:
            return SubgroupClass("SubfieldPGL", (p**e,), n)

    raise UnrecognizedSubgroup(f"order {n} in PGL(2,{q})")


def _classify_by_order(ctx: FieldCtx, n: int) -> SubgroupClass:
    """Classification from order alone (unmaterialized handles)."""
    p = ctx.p
    matches = []
    for e in divisors(ctx.d):
        if e == ctx.d:
            continue
        if n == _psl_size(p, e) and p**e > 3:
            matches.append(SubgroupClass("SubfieldPSL", (p**e,), n))
        if n == _pgl_size(p, e) and p**e > 3 and p != 2:
            matches.append(SubgroupClass("SubfieldPGL", (p**e,), n))
    if len(matches) == 1:
        return matches[0]
    raise UnrecognizedSubgroup(f"order {n} without materialized elements")


# ---------------------------------------------------------------------------
# trace fields

def trace_field_degree(gens: Sequence[ProjElement]) -> int:
    """Degree of the subfield generated by the trace invariants of the
    generators, their pairwise products, and the full product."""
    assert gens
    ctx = gens[0].ctx
    words = list(gens)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            words.append(gens[i] * gens[j])
    if len(gens) > 1:
        prod = gens[0]
        for g in gens[1:]:
            prod = prod * g
        words.append(prod)
    deg = 1
    for w in words:
        deg = math.lcm(deg, w.trace_invariant().degree())
    return deg


# ---------------------------------------------------------------------------
# homomorphism extension (used for rank-3 direct-regularity checks)

def extends_to_automorphism(gens: Sequence[ProjElement],
                            images: Sequence[ProjElement],
                            elements: frozenset[ProjElement]) -> bool:
    """Does gens[i] -> images[i] extend to an automorphism of the
    materialized group?  Builds the induced map by closure, then verifies
    every edge g*gen = m(g)*image."""
    idn = ProjElement.identity(gens[0].ctx)
    m = {idn: idn}
    frontier = [idn]
    while frontier:
        new = []
        for x in frontier:
            mx = m[x]
            for g, im in zip(gens, images):
                y = x * g
                my = mx * im
                if y in m:
                    if m[y] != my:
                        return False
                else:
                    m[y] = my
                    new.append(y)
        frontier = new
    if set(m) != set(elements) or len(set(m.values())) != len(m):
        return False
    for x, mx in m.items():
        for g, im in zip(gens, images):
            if m[x * g] != mx * im:
                return False
    return True


# ---------------------------------------------------------------------------
# permutation group order (orbit + point-stabilizer chain)

def perm_group_order(gens: list[tuple[int, ...]], n: int) -> int:
    """Order via incremental Schreier-Sims on n points."""
    identity = tuple(range(n))
    gens = [tuple(g) for g in gens if tuple(g) != identity]
    if not gens:
        return 1

    base: list[int] = []
    sgs: list[list[tuple[int, ...]]] = []
    trans: list[dict[int, tuple[int, ...]]] = []

    def compose(a, b):
        return tuple(map(b.__getitem__, a))

    def inverse(a):
        out = [0] * n
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    def rebuild(i):
        tr = {base[i]: identity}
        stack = [base[i]]
        while stack:
            x = stack.pop()
            tx = tr[x]
            for g in sgs[i]:
                y = g[x]
                if y not in tr:
                    tr[y] = compose(tx, g)
                    stack.append(y)
        trans[i] = tr

    def sift(g):
        for i in range(len(base)):
            x = g[base[i]]
            if x not in trans[i]:
                return g, i
            g = compose(g, inverse(trans[i][x]))
        return g, len(base)

    def add_strong(g, lvl):
        if lvl == len(base):
            pt = min(j for j in range(n) if g[j] != j)
            base.append(pt)
            sgs.append([])
            trans.append({})
        for i in range(lvl + 1):
            sgs[i].append(g)
        for i in range(lvl + 1):
            rebuild(i)

    for g in gens:
        res, lvl = sift(g)
        if res != identity:
            add_strong(res, lvl)

    # verify the Schreier condition everywhere; repeat until stable
    changed = True
    while changed:
        changed = False
        for i in reversed(range(len(base))):
            for x in list(trans[i]):
                tx = trans[i][x]
                for g in list(sgs[i]):
                    y = g[x]
                    if y not in trans[i]:
                        rebuild(i)
                        changed = True
                        tx = trans[i][x]
                    s = compose(compose(tx, g), inverse(trans[i][y]))
                    if s != identity:
                        res, lvl = sift(s)
                        if res != identity:
                            add_strong(res, lvl)
                            changed = True
    out = 1
    for tr in trans:
        out *= len(tr)
    return out
