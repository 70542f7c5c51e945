"""Ground-truth brute-force search for chiral 4-polytopes (and the rank-5
nonexistence sweep) over PSL(2,q) / PGL(2,q).

Search scheme: sigma2 runs over conjugacy class representatives (one per
Frobenius orbit, via the trace invariant theta); with sigma2 = c fixed,
sigma1 = t*c^-1 and sigma3 = c^-1*s for involutions t, s, so that (C2)
reduces to the single trace condition tr(t*c^-1*s) = 0.  Candidate
involutions are filtered by classifying the parabolic <t,c> from the pair
invariants (theta(c), theta(t*c)) alone, candidate pairs are deduplicated
under the stabilizer of c in PGammaL, and the few survivors get the full
polytope verification.

Counting convention (calibrated against the reference tables): records are
PGammaL-classes of generating triples; the two enantiomorphic forms of a
chiral polytope count as two records and dual pairs count separately.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from chiral4.fields import FieldCtx, divisors, make_field
from chiral4.polytopes import (
    PolytopeRecord,
    RotationTriple,
    enantiomorph,
    are_equivalent,
    solve_conjugation,
    verify_triple,
)
from chiral4.projective import ProjElement, pgl_order, psl_order


class UnsupportedScale(ValueError):
    pass


MAX_GROUP_ORDER = 10**7


# ---------------------------------------------------------------------------
# packed field tables

class PackedField:
    """GF(q) with elements as integer indices and dense operation tables."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p, self.d, self.q = ctx.p, ctx.d, ctx.q
        q = ctx.q
        els = [ctx.from_index(i) for i in range(q)]
        self.els = els
        idx = {e.coeffs: i for i, e in enumerate(els)}
        self.MUL = [[idx[(a * b).coeffs] for b in els] for a in els]
        self.ADD = [[idx[(a + b).coeffs] for b in els] for a in els]
        self.NEG = [idx[(-a).coeffs] for a in els]
        self.INV = [0] + [idx[els[i].inverse().coeffs] for i in range(1, q)]
        self.MULn = np.array(self.MUL, dtype=np.int32)
        self.ADDn = np.array(self.ADD, dtype=np.int32)
        self.NEGn = np.array(self.NEG, dtype=np.int32)
        self.INVn = np.array(self.INV, dtype=np.int32)
        self.FROB = [np.array([idx[e.frobenius(r).coeffs] for e in els],
                              dtype=np.int32) for r in range(ctx.d)]
        self.one = idx[ctx.one().coeffs]
        self.four = idx[ctx.el(4).coeffs]
        # per-element invariants
        self.DEG = [e.degree() if not e.is_zero() else 1 for e in els]
        from chiral4.fields import is_square
        self.SQ = [is_square(e) for e in els]
        # square in the element's own minimal subfield GF(p^deg)
        self.SUBSQ = [True] * q
        if self.p != 2:
            for i, e in enumerate(els):
                if not e.is_zero():
                    sub_q = self.p ** self.DEG[i]
                    self.SUBSQ[i] = (e ** ((sub_q - 1) // 2)).is_one()
        # projective order by trace invariant theta (index-keyed)
        self.ORD = [0] * q
        for i, e in enumerate(els):
            self.ORD[i] = self._order_of_theta(i)
        self.COEF = np.array([list(e.coeffs) for e in els], dtype=np.float64)
        # reduction tensor rows: x^(i+j) mod modulus
        rows = ctx._redrows
        dd = ctx.d
        self.RED = [np.array([[rows[i + j][k] for j in range(dd)]
                              for i in range(dd)], dtype=np.float64)
                    for k in range(dd)]

    def _order_of_theta(self, theta_idx: int) -> int:
        """Projective order of any non-identity element with this trace
        invariant (2 for 0, p for 4, torus order otherwise)."""
        if theta_idx == self.four:
            return self.p
        e = self.els[theta_idx]
        if self.p != 2 and e.is_zero():
            return 2
        if e.is_zero():
            return 2  # char 2: theta = 0 = 4 means unipotent, order 2
        g = self.companion(theta_idx)
        idn = (self.one, 0, 0, self.one)
        for n in (self.q - 1, self.q + 1):
            for m in divisors(n):
                if m > 1 and _pow(g, m, self) == idn:
                    return m
        raise AssertionError

    def companion(self, theta_idx: int) -> tuple[int, int, int, int]:
        """Canonical class representative [[0,-theta],[1,theta]] packed."""
        assert theta_idx != 0
        return _canon((0, self.NEG[theta_idx], self.one, theta_idx), self)

    def to_proj(self, m: tuple[int, int, int, int]) -> ProjElement:
        c = self.ctx
        return ProjElement(c.from_index(m[0]), c.from_index(m[1]),
                           c.from_index(m[2]), c.from_index(m[3]),
                           _canonical=True)

    def from_proj(self, g: ProjElement) -> tuple[int, int, int, int]:
        return (g.a.index(), g.b.index(), g.c.index(), g.d.index())


def _canon(m, pf):
    a, b, c, d = m
    for lead in (a, b, c, d):
        if lead:
            inv = pf.INV[lead]
            MUL = pf.MUL
            row = MUL[inv]
            return (row[a], row[b], row[c], row[d])
    raise AssertionError("zero matrix")


def _mul(x, y, pf):
    MUL, ADD = pf.MUL, pf.ADD
    a = ADD[MUL[x[0]][y[0]]][MUL[x[1]][y[2]]]
    b = ADD[MUL[x[0]][y[1]]][MUL[x[1]][y[3]]]
    c = ADD[MUL[x[2]][y[0]]][MUL[x[3]][y[2]]]
    d = ADD[MUL[x[2]][y[1]]][MUL[x[3]][y[3]]]
    return _canon((a, b, c, d), pf)


def _inv4(x, pf):
    return _canon((x[3], pf.NEG[x[1]], pf.NEG[x[2]], x[0]), pf)


def _pow(x, e, pf):
    r = (pf.one, 0, 0, pf.one)
    b = x
    while e:
        if e & 1:
            r = _mul(r, b, pf)
        b = _mul(b, b, pf)
        e >>= 1
    return r


def _det(x, pf):
    return pf.ADD[pf.MUL[x[0]][x[3]]][pf.NEG[pf.MUL[x[1]][x[2]]]]


def _theta(x, pf):
    tr = pf.ADD[x[0]][x[3]]
    return pf.MUL[pf.MUL[tr][tr]][pf.INV[_det(x, pf)]]


def _key(x, q):
    return ((x[0] * q + x[1]) * q + x[2]) * q + x[3]


def _mulclose_packed(gens, pf, cap):
    idn = (pf.one, 0, 0, pf.one)
    els = {idn}
    els.update(gens)
    bdy = [g for g in els if g != idn]
    while bdy:
        new = []
        for h in bdy:
            for g in gens:
                x = _mul(h, g, pf)
                if x not in els:
                    els.add(x)
                    new.append(x)
                    if len(els) > cap:
                        return None
        bdy = new
    return els


# ---------------------------------------------------------------------------
# the search engine

@dataclass
class SearchPlan:
    ctx: FieldCtx
    group: str
    rank: int
    sigma2_class_reps: list
    worker_count: int = 1
    convention: str = "triple-classes (enantiomorphs and duals counted separately)"


@dataclass
class EnumerationResult:
    records: list[PolytopeRecord]
    plan: SearchPlan
    mirror_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def polytope_count(self) -> int:
        return len(self.records) // 2


class Engine:
    def __init__(self, ctx: FieldCtx, group: str):
        group = group.upper()
        assert group in ("PSL", "PGL")
        if ctx.p == 2:
            group = "PSL"  # PSL = PGL in char 2
        self.ctx = ctx
        self.group = group
        self.pf = PackedField(ctx)
        self.idn = (self.pf.one, 0, 0, self.pf.one)
        self.full_order = psl_order(ctx) if group == "PSL" else pgl_order(ctx)
        self.max_proper = self._max_proper_order()
        self._build_involutions()

    # -- setup ---------------------------------------------------------------

    def _max_proper_order(self) -> int:
        # largest proper subgroup with a proper trace field is at most the
        # Borel; used as a closure bail-out cap
        q = self.ctx.q
        return q * (q - 1) + 1

    def _build_involutions(self):
        pf = self.pf
        q = pf.q
        psl_only = self.group == "PSL" and self.ctx.p != 2
        from chiral4.projective import all_involutions
        mats = []
        for g in all_involutions(self.ctx, psl_only=psl_only):
            mats.append(self.pf.from_proj(g))
        mats.sort(key=lambda m: _key(m, q))
        self.inv_list = mats
        self.inv_np = np.array(mats, dtype=np.int32)
        self.inv_keys = np.array([_key(m, q) for m in mats], dtype=np.int64)
        self.inv_index = {k: i for i, k in enumerate(self.inv_keys.tolist())}
        self.inv_psl = np.array([pf.SQ[_det(m, pf)] for m in mats], dtype=bool)

    def sigma2_reps(self) -> list[int]:
        """Trace-invariant indices, one per Frobenius orbit, order >= 3,
        restricted to PSL classes in PSL mode."""
        pf = self.pf
        out = []
        seen = set()
        for th in range(1, pf.q):
            if th in seen:
                continue
            orbit = set()
            x = th
            for _ in range(pf.d):
                orbit.add(x)
                x = int(pf.FROB[1 % pf.d][x]) if pf.d > 1 else x
            seen |= orbit
            rep = min(orbit)
            if pf.ORD[rep] < 3:
                continue
            if self.group == "PSL" and not pf.SQ[rep]:
                continue
            out.append(rep)
        return sorted(out)

    # -- stabilizer of a class representative ---------------------------------

    def stabilizer_perms(self, c_packed) -> list[np.ndarray]:
        """Permutations of the involution list induced by the PGammaL
        stabilizer of c: all (r, h) with frob_r(c)^h = c."""
        pf = self.pf
        c_obj = pf.to_proj(c_packed)
        perms = []
        for r in range(self.ctx.d):
            tw = c_obj.frobenius(r)
            for h in solve_conjugation(tw, c_obj):
                hp = pf.from_proj(h)
                hinv = _inv4(hp, pf)
                arr = self.inv_np[:, :]
                if r:
                    arr = pf.FROB[r][arr]
                arr = self._conj_batch(arr, hinv, hp)
                keys = self._pack_batch(arr)
                pos = np.searchsorted(self.inv_keys, keys)
                assert np.array_equal(self.inv_keys[pos], keys)
                perms.append(pos.astype(np.int64))
        return perms

    def _conj_batch(self, arr: np.ndarray, left, right) -> np.ndarray:
        """canon(left * arr * right) row-wise."""
        pf = self.pf
        M, A = pf.MULn, pf.ADDn
        a, b, c, d = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
        # X = left * arr
        la, lb, lc, ld = left
        xa = A[M[la, a], M[lb, c]]
        xb = A[M[la, b], M[lb, d]]
        xc = A[M[lc, a], M[ld, c]]
        xd = A[M[lc, b], M[ld, d]]
        # Y = X * right
        ra, rb, rc, rd = right
        ya = A[M[xa, ra], M[xb, rc]]
        yb = A[M[xa, rb], M[xb, rd]]
        yc = A[M[xc, ra], M[xd, rc]]
        yd = A[M[xc, rb], M[xd, rd]]
        out = np.stack([ya, yb, yc, yd], axis=1)
        return self._canon_batch(out)

    def _canon_batch(self, arr: np.ndarray) -> np.ndarray:
        pf = self.pf
        lead = arr[:, 0].copy()
        for col in range(1, 4):
            lead = np.where(lead == 0, arr[:, col], lead)
        scale = pf.INVn[lead]
        return pf.MULn[scale[:, None], arr]

    def _pack_batch(self, arr: np.ndarray) -> np.ndarray:
        q = self.pf.q
        a = arr.astype(np.int64)
        return ((a[:, 0] * q + a[:, 1]) * q + a[:, 2]) * q + a[:, 3]

    # -- pair-class filter -----------------------------------------------------

    def _pair_keep_map(self, c_packed, theta_c: int) -> dict[int, bool]:
        """z = theta(t*c) -> keep t as a candidate (parabolic <t,c> proper
        with |t*c| >= 3)."""
        pf = self.pf
        keep: dict[int, bool] = {}
        k_ord = pf.ORD[theta_c]
        zs = self._theta_tc(c_packed)
        reps: dict[int, int] = {}
        for i, z in enumerate(zs.tolist()):
            if z not in reps:
                reps[z] = i
        for z, i_rep in reps.items():
            keep[z] = self._classify_pair_z(c_packed, theta_c, k_ord, z, i_rep)
        return keep

    def _theta_tc(self, c_packed) -> np.ndarray:
        pf = self.pf
        M, A = pf.MULn, pf.ADDn
        arr = self.inv_np
        ca, cb, cc, cd = c_packed
        a, b, c, d = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
        # tr(t*c) = (t*c)[0,0] + (t*c)[1,1]
        m00 = A[M[a, ca], M[b, cc]]
        m11 = A[M[c, cb], M[d, cd]]
        tr = A[m00, m11]
        det_c = _det(c_packed, pf)
        det_t = A[M[a, d], pf.NEGn[M[b, c]]]
        det = M[det_t, det_c]
        return M[M[tr, tr], pf.INVn[det]]

    def _classify_pair_z(self, c_packed, theta_c, k_ord, z, i_rep) -> bool:
        pf = self.pf
        m_ord = pf.ORD[z] if z != 0 else 2
        if z == 0:
            return False  # dihedral pair: s1 would be an involution
        if m_ord < 3:
            return False
        if pf.ADD[theta_c][z] == pf.four:
            return True  # reducible: affine parabolic candidate
        if k_ord <= 5 and m_ord <= 5:
            t = self.inv_list[i_rep]
            els = _mulclose_packed([t, c_packed], pf, 100)
            if els is not None:
                return len(els) < self.full_order
            # fell through: genuinely subfield or full
        # subfield/full decision from the two invariants
        da, db = pf.DEG[theta_c], pf.DEG[z]
        f = math.lcm(da, db)
        ea = da if pf.SUBSQ[theta_c] else 2 * da
        eb = db if pf.SUBSQ[z] else 2 * db
        e = math.lcm(ea, eb)
        # e == f: PSL(2,p^f)-type pair; e == 2f: PGL(2,p^f)-type pair
        return f < self.ctx.d

    # -- main rank-4 search ------------------------------------------------------

    def search_class(self, theta_c: int) -> list[PolytopeRecord]:
        pf = self.pf
        c_packed = pf.companion(theta_c)
        keep = self._pair_keep_map(c_packed, theta_c)
        zs = self._theta_tc(c_packed)
        keep_arr = np.array([keep[z] for z in zs.tolist()], dtype=bool)
        cands = np.nonzero(keep_arr)[0]
        if len(cands) == 0:
            return []
        pairs = self._trace_filtered_pairs(c_packed, cands)
        if len(pairs) == 0:
            return []
        pairs = self._stab_dedup(c_packed, pairs)
        out = []
        for t_idx, s_idx in pairs:
            rec = self._verify_candidate(c_packed, theta_c, t_idx, s_idx)
            if rec is not None:
                out.append(rec)
        return out

    def _trace_filtered_pairs(self, c_packed, cands: np.ndarray) -> list[tuple[int, int]]:
        """(t, s) with all coefficients of tr(t * c^-1 * s) zero."""
        pf = self.pf
        M, A = pf.MULn, pf.ADDn
        cinv = _inv4(c_packed, pf)
        arr = self.inv_np[cands]
        a, b, c, d = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
        ca, cb, cc, cd = cinv
        u0 = A[M[a, ca], M[b, cc]]
        u1 = A[M[a, cb], M[b, cd]]
        u2 = A[M[c, ca], M[d, cc]]
        u3 = A[M[c, cb], M[d, cd]]
        # tr(U s) = u0 s0 + u1 s2 + u2 s1 + u3 s3
        s_arr = self.inv_np[cands]
        U = np.stack([u0, u1, u2, u3], axis=1)
        S = s_arr[:, [0, 2, 1, 3]]
        n = len(cands)
        dd = pf.d
        Uc = pf.COEF[U].reshape(n, 4 * dd)
        Sc = pf.COEF[S].reshape(n, 4 * dd)
        p = float(pf.p)
        mask = np.ones((n, n), dtype=bool)
        for k in range(dd):
            bd = np.kron(np.eye(4), pf.RED[k])
            Z = (Uc @ bd) @ Sc.T
            mask &= (Z % p) == 0
            if not mask.any():
                return []
        ti, si = np.nonzero(mask)
        return list(zip(cands[ti].tolist(), cands[si].tolist()))

    def _stab_dedup(self, c_packed, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        perms = self.stabilizer_perms(c_packed)
        n = len(self.inv_list)
        t = np.array([a for a, _ in pairs], dtype=np.int64)
        s = np.array([b for _, b in pairs], dtype=np.int64)
        combined = t * n + s
        best = combined.copy()
        for pi in perms:
            cand = pi[t] * n + pi[s]
            np.minimum(best, cand, out=best)
        sel = np.nonzero(best == combined)[0]
        # one representative per orbit: unique canonical value
        _, first = np.unique(best[sel], return_index=True)
        sel = sel[first]
        return [(int(t[i]), int(s[i])) for i in sel]

    # -- candidate verification ----------------------------------------------------

    def _verify_candidate(self, c_packed, theta_c, t_idx, s_idx):
        pf = self.pf
        t = self.inv_list[t_idx]
        s = self.inv_list[s_idx]
        cinv = _inv4(c_packed, pf)
        s1 = _mul(t, cinv, pf)
        s3 = _mul(cinv, s, pf)
        w = _mul(_mul(t, cinv, pf), s, pf)
        if w[1] == 0 and w[2] == 0 and w[0] == w[3]:
            return None  # s1*s2*s3 scalar
        # PGL mode needs a generator outside PSL
        if self.group == "PGL":
            flags = [pf.SQ[_det(x, pf)] for x in (s1, c_packed, s3)]
            if all(flags):
                return None
        # cyclic intersections
        pows_c = self._cyclic(c_packed)
        if (self._cyclic(s1) & pows_c) != {self.idn}:
            return None
        if (pows_c & self._cyclic(s3)) != {self.idn}:
            return None
        if not self._generates_full(s1, c_packed, s3):
            return None
        # C3' main condition
        h1 = _mulclose_packed([s1, c_packed], pf, self.max_proper)
        h2 = _mulclose_packed([c_packed, s3], pf, self.max_proper)
        if h1 is None or h2 is None:
            return None  # parabolic not proper after all (cannot happen)
        if (h1 & h2) != pows_c:
            return None
        # chirality via the transporter; the record is assembled from the
        # packed data (tests re-verify every record through polytope_core)
        from chiral4.polytopes import SchlafliSymbol, fingerprint, is_chiral
        from chiral4.subgroups import SubgroupClass
        t_obj = RotationTriple(pf.to_proj(s1), pf.to_proj(c_packed), pf.to_proj(s3))
        if not is_chiral(t_obj, precheck=False):
            return None
        schl = SchlafliSymbol(self._order_of(s1), self._order_of(c_packed),
                              self._order_of(s3))
        tag = "FullPSL" if self.group == "PSL" else "FullPGL"
        group_cls = SubgroupClass(tag, (self.ctx.q,), self.full_order)
        return PolytopeRecord(t_obj, schl, group_cls,
                              self._classify_packed(h1, [s1, c_packed]),
                              self._classify_packed(h2, [c_packed, s3]),
                              "enumerated")

    def _order_of(self, m) -> int:
        if m == self.idn:
            return 1
        return self.pf.ORD[_theta(m, self.pf)] if _theta(m, self.pf) != 0 else 2

    def _classify_packed(self, els: set, gens_packed: list):
        """Taxonomy verdict for a materialized packed subgroup."""
        from chiral4.subgroups import classify_from_stats
        pf = self.pf
        profile = []
        n_unip = 0
        pows: dict[int, set] = {}
        for m in els:
            o = self._order_of(m)
            profile.append(o)
            if o == pf.p and _theta(m, pf) == pf.four and m != self.idn:
                n_unip += 1
            if o not in pows:
                pows[o] = {m}
            else:
                pows[o].add(m)
        profile.sort()
        objs = [pf.to_proj(g) for g in gens_packed if g != self.idn]
        reducible = bool(objs) and self._common_fixed_point_packed(gens_packed)

        def cyclic_index2(k: int) -> bool:
            gen_k = next(iter(pows.get(k, ())), None)
            if gen_k is None:
                return False
            cyc = self._cyclic(gen_k)
            return cyc <= els and all(self._order_of(g) == 2 for g in els - cyc)

        return classify_from_stats(self.ctx, len(els), profile, n_unip,
                                   reducible, cyclic_index2)

    def _cyclic(self, x) -> set:
        out = set()
        g = self.idn
        pf = self.pf
        while True:
            out.add(g)
            g = _mul(g, x, pf)
            if g == self.idn:
                return out

    def _generates_full(self, s1, s2, s3) -> bool:
        pf = self.pf
        gens = [s1, s2, s3]
        if self._common_fixed_point_packed(gens):
            return False
        # exclude cyclic/dihedral/exceptional subgroups by a small closure
        cap0 = max(2 * (self.ctx.q + 1), 60) + 1
        els = _mulclose_packed(gens, pf, cap0)
        if els is not None:
            return len(els) == self.full_order
        psl_flags = all(pf.SQ[_det(x, pf)] for x in gens)
        if self.group == "PGL" and psl_flags:
            return False  # inside PSL
        words = [s1, s2, s3, _mul(s1, s2, pf), _mul(s1, s3, pf),
                 _mul(s2, s3, pf), _mul(_mul(s1, s2, pf), s3, pf)]
        deg = 1
        for wd in words:
            if wd != self.idn:
                deg = math.lcm(deg, pf.DEG[_theta(wd, pf)])
        if deg == self.ctx.d:
            return True  # no proper subgroup has a full trace field
        els = _mulclose_packed(gens, pf, self.max_proper)
        return els is None or len(els) == self.full_order

    def _common_fixed_point_packed(self, gens) -> bool:
        objs = [self.pf.to_proj(g) for g in gens if g != self.idn]
        pts = None
        for g in objs:
            fp = g.fixed_points()
            pts = fp if pts is None else pts & fp
            if not pts:
                return False
        return True


# ---------------------------------------------------------------------------
# public entry points

def _check_scale(ctx: FieldCtx):
    if ctx.q * (ctx.q**2 - 1) > MAX_GROUP_ORDER:
        raise UnsupportedScale(ctx.q)


def _finalize(records: list[PolytopeRecord], plan: SearchPlan) -> EnumerationResult:
    records.sort(key=lambda r: r.sort_key())
    mirror = []
    used = set()
    for i, rec in enumerate(records):
        if i in used:
            continue
        m = enantiomorph(rec.triple)
        for j in range(len(records)):
            if j != i and j not in used and records[j].schlafli == rec.schlafli \
                    and are_equivalent(m, records[j].triple):
                mirror.append((i, j))
                used.update((i, j))
                break
        else:
            raise AssertionError("chiral record without its mirror class")
    return EnumerationResult(records, plan, mirror)


def _run_classes(ctx: FieldCtx, group: str, thetas: list[int]) -> list[PolytopeRecord]:
    eng = Engine(ctx, group)
    out = []
    for th in thetas:
        out.extend(eng.search_class(th))
    return out


def _worker(args) -> list[dict]:
    p, d, modulus, group, thetas = args
    ctx = make_field(p, d, modulus)
    recs = _run_classes(ctx, group, thetas)
    return [r.to_json() for r in recs]


def enumerate_rank4(ctx: FieldCtx, group: str = "PSL", jobs: int = 1) -> EnumerationResult:
    """Complete deduplicated list of chiral-4-polytope records."""
    _check_scale(ctx)
    eng = Engine(ctx, group)
    plan = SearchPlan(ctx, eng.group, 4, eng.sigma2_reps(), jobs)
    if jobs <= 1 or len(plan.sigma2_class_reps) < 2:
        records = _run_classes(ctx, group, plan.sigma2_class_reps)
    else:
        batches = [plan.sigma2_class_reps[i::jobs] for i in range(jobs)]
        args = [(ctx.p, ctx.d, ctx.modulus, group, b) for b in batches if b]
        records = []
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for blob_list in ex.map(_worker, args):
                records.extend(PolytopeRecord.from_json(b) for b in blob_list)
    return _finalize(records, plan)


def table2_row(q: int, jobs: int = 1) -> tuple[int, tuple, str]:
    """(count, (q mod 4, q mod 20), case labels) combining the enumerator
    with the arithmetic classifier."""
    from chiral4.classifier import classify
    ctx = make_field(*_split(q))
    res = enumerate_rank4(ctx, "PSL", jobs=jobs)
    rep = classify(q, "PSL")
    residues = (None, None) if ctx.p == 2 else (q % 4, q % 20)
    return res.count, residues, rep.cases_string()


def _split(q):
    from chiral4.classifier import split_prime_power
    return split_prime_power(q)


# ---------------------------------------------------------------------------
# naive cross-check (no conjugacy pruning): sigma2 over ALL elements

def _all_elements_packed(pf: PackedField):
    """All of PGL(2,q) in canonical packed form."""
    q = pf.q
    out = []
    for b in range(q):
        for c in range(q):
            for d in range(q):
                # a = 1 block
                m = (pf.one, b, c, d)
                if _det(m, pf) != 0:
                    out.append(m)
        for d in range(q):
            m = (0, pf.one, c, d)  # a = 0, b = 1
            if _det(m, pf) != 0:
                out.append(m)
    return out


def _transporter_to_companion(g, theta_star, pf):
    """h with h^-1 * g * h = companion(theta_star), for non-involution g
    whose invariant equals theta_star: scale to trace theta_star, then use
    the rational-canonical basis (e, Ne)."""
    MUL, ADD = pf.MUL, pf.ADD
    tr = ADD[g[0]][g[3]]
    lam = MUL[theta_star][pf.INV[tr]]
    n0, n1, n2, n3 = (MUL[lam][x] for x in g)
    if n2 != 0:
        h = (pf.one, n0, 0, n2)
    elif n1 != 0:
        h = (0, n1, pf.one, n3)
    else:
        h = (pf.one, n0, pf.one, n3)
    return _canon(h, pf)


def enumerate_rank4_naive(ctx: FieldCtx, group: str = "PSL") -> EnumerationResult:
    """sigma2 sweeps every group element of order >= 3; only the C2 trace
    filter is applied before full honest verification of every candidate
    normalized into the pruned search's frame.  Must agree with
    enumerate_rank4; practical for q <= 27."""
    assert ctx.q <= 27
    eng = Engine(ctx, group)
    pf = eng.pf
    psl_mode = eng.group == "PSL" and ctx.p != 2
    reps = eng.sigma2_reps()
    rep_theta = {}
    for th in reps:
        orbit = {th}
        x = th
        for _ in range(ctx.d):
            x = int(pf.FROB[1 % pf.d][x]) if pf.d > 1 else x
            orbit.add(x)
        for o in orbit:
            rep_theta[o] = th
    per_class: dict[int, set] = {th: set() for th in reps}
    n = len(eng.inv_list)
    for g in _all_elements_packed(pf):
        th = _theta(g, pf)
        if th == 0 or pf.ORD[th] < 3 or g == eng.idn:
            continue
        if psl_mode and not pf.SQ[_det(g, pf)]:
            continue
        th_rep = rep_theta.get(th)
        if th_rep is None:
            continue
        # transporter of g onto its class representative within PGammaL:
        # twist by Frobenius until the invariant matches, then change basis
        # to rational canonical form
        r0 = next(r for r in range(ctx.d)
                  if int(pf.FROB[r][th]) if False else
                  _frob_idx(th, r, pf) == th_rep)
        g_r = tuple(int(pf.FROB[r0][x]) for x in g) if r0 else g
        hp = _transporter_to_companion(g_r, th_rep, pf)
        hinv = _inv4(hp, pf)
        arr = eng.inv_np
        if r0:
            arr = pf.FROB[r0][arr]
        arr = eng._conj_batch(arr, hinv, hp)
        keys = eng._pack_batch(arr)
        pos = np.searchsorted(eng.inv_keys, keys)
        pi = pos.astype(np.int64)  # involution conjugation-permutation
        # C2 trace filter against g itself over all involution pairs
        pairs = eng._trace_filtered_pairs(g, np.arange(n))
        for t_idx, s_idx in pairs:
            per_class[th_rep].add((int(pi[t_idx]) * n + int(pi[s_idx])))
    records = []
    for th in reps:
        c_packed = pf.companion(th)
        raw = sorted(per_class[th])
        pairs = [(k // n, k % n) for k in raw]
        pairs = eng._stab_dedup(c_packed, pairs)
        for t_idx, s_idx in pairs:
            rec = eng._verify_candidate(c_packed, th, t_idx, s_idx)
            if rec is not None:
                records.append(rec)
    plan = SearchPlan(ctx, eng.group, 4, reps, 1, "naive sweep")
    return _finalize(records, plan)


# ---------------------------------------------------------------------------
# rank 5

def enumerate_rank5(ctx: FieldCtx, group: str = "PSL") -> list[tuple]:
    """All chiral-5-polytope generator quadruples (expected: none)."""
    if ctx.q > 13:
        raise UnsupportedScale(ctx.q)
    eng = Engine(ctx, group)
    pf = eng.pf
    found = []
    n = len(eng.inv_list)
    for th2 in eng.sigma2_reps():
        c2 = pf.companion(th2)
        c2inv = _inv4(c2, pf)
        for t23 in eng.inv_list:
            s3 = _mul(c2inv, t23, pf)
            th3 = _theta(s3, pf)
            if s3 == eng.idn or pf.ORD[th3] < 3 or (th3 == 0):
                continue
            if eng.group == "PSL" and ctx.p != 2 and not pf.SQ[_det(s3, pf)]:
                continue
            # sigma1 = t12 * c2^-1 with tr(t12 * s3) = 0; order >= 3
            t12s = [t for t in eng.inv_list
                    if _trace_zero(_mul(t, s3, pf), pf)
                    and pf.ORD[_theta(_mul(t, c2inv, pf), pf)] >= 3
                    and _mul(t, c2inv, pf) != eng.idn]
            if not t12s:
                continue
            # sigma4 = s3^-1 * t34 with tr(c2 * t34) = 0; order >= 3
            s3inv = _inv4(s3, pf)
            t34s = [t for t in eng.inv_list
                    if _trace_zero(_mul(c2, t, pf), pf)
                    and pf.ORD[_theta(_mul(s3inv, t, pf), pf)] >= 3
                    and _mul(s3inv, t, pf) != eng.idn]
            for t12 in t12s:
                for t34 in t34s:
                    if not _trace_zero(_mul(t12, t34, pf), pf):
                        continue
                    quad = (_mul(t12, c2inv, pf), c2, s3, _mul(s3inv, t34, pf))
                    if _verify_rank5(eng, quad):
                        found.append(tuple(pf.to_proj(x) for x in quad))
    return found


def _frob_idx(x, r, pf):
    return int(pf.FROB[r][x]) if r else x


def _trace_zero(m, pf) -> bool:
    return pf.ADD[m[0]][m[3]] == 0 and not (m[1] == 0 and m[2] == 0)


def _verify_rank5(eng: Engine, quad) -> bool:
    pf = eng.pf
    s1, s2, s3, s4 = quad
    idn = eng.idn
    # C2 sanity (construction guarantees them; assert cheaply)
    for w in (_mul(s1, s2, pf), _mul(s2, s3, pf), _mul(s3, s4, pf),
              _mul(_mul(s1, s2, pf), s3, pf), _mul(_mul(s2, s3, pf), s4, pf),
              _mul(_mul(_mul(s1, s2, pf), s3, pf), s4, pf)):
        if w == idn or not _trace_zero(w, pf) and pf.p != 2:
            if not (w != idn and _mul(w, w, pf) == idn):
                return False
    cyc = [eng._cyclic(x) for x in quad]
    for i in range(3):
        if (cyc[i] & cyc[i + 1]) != {idn}:
            return False
    cap = eng.full_order + 1
    h12 = _mulclose_packed([s1, s2], pf, cap)
    h23 = _mulclose_packed([s2, s3], pf, cap)
    h34 = _mulclose_packed([s3, s4], pf, cap)
    if (h12 & h23) != cyc[1] or (h23 & h34) != cyc[2]:
        return False
    hl = _mulclose_packed([s1, s2, s3], pf, cap)
    hr = _mulclose_packed([s2, s3, s4], pf, cap)
    if (hl & hr) != h23:
        return False
    full = _mulclose_packed(list(quad), pf, cap)
    if len(full) != eng.full_order:
        return False
    if eng.group == "PGL" and all(pf.SQ[_det(x, pf)] for x in quad):
        return False
    # chirality: no (r,h) with s1 -> s1^-1, s2 -> s1^2 s2, s3 -> s3, s4 -> s4
    objs = [pf.to_proj(x) for x in quad]
    mirror = [objs[0].inverse(), objs[0] * objs[0] * objs[1], objs[2], objs[3]]
    for r in range(eng.ctx.d):
        tw = [o.frobenius(r) for o in objs]
        for h in solve_conjugation(tw[1], mirror[1]):
            if all(tw[i].conjugate(h) == mirror[i] for i in (0, 2, 3)):
                return False
    return True
