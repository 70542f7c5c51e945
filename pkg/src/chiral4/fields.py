"""Exact arithmetic in GF(p^d).

Elements are residue polynomials modulo a monic irreducible modulus,
stored as coefficient tuples with the constant term first.  The default
modulus for a given (p, d) is the lexicographically least monic
irreducible polynomial of degree d with nonzero constant term, so
canonical forms are reproducible across runs.
"""

from __future__ import annotations

import functools
import itertools
from math import gcd
from typing import Iterator, Sequence


class NotPrime(ValueError):
    pass


class ReducibleModulus(ValueError):
    pass


class ZeroElement(ArithmeticError):
    pass


class NotASquare(ArithmeticError):
    pass


class NoEmbedding(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer primality / factorization

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

# deterministic Miller-Rabin bases, valid for n < 3.3 * 10^24
_MR_BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """One nontrivial factor of composite odd n, Brent-cycle Pollard rho."""
    if n % 2 == 0:
        return 2
    for c in itertools.count(1):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        # cycle degenerated for this c; retry with next polynomial


@functools.lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted ((prime, exponent), ...)."""
    assert n >= 1
    out: dict[int, int] = {}
    for sp in _SMALL_PRIMES:
        while n % sp == 0:
            out[sp] = out.get(sp, 0) + 1
            n //= sp
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_brent(m)
        stack.append(f)
        stack.append(m // f)
    return tuple(sorted(out.items()))


def prime_factors(n: int) -> list[int]:
    return [f for f, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    divs = [1]
    for f, e in factorize(n):
        divs = [d * f**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    out = 1
    for f, e in factorize(n):
        out *= f ** (e - 1) * (f - 1)
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p) as coefficient tuples, constant term first

def _ptrim(a: Sequence[int]) -> tuple[int, ...]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([c % p for c in out])


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(a, e, m, p):
    result = (1,)
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    """Rabin test: m monic of degree d is irreducible over GF(p)."""
    d = len(m) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    x = (0, 1)
    if _ppowmod(x, p**d, m, p) != _pmod(x, m, p):
        return False
    for r in prime_factors(d):
        h = _pmod(
            _ptrim([(a - b) % p for a, b in
                    itertools.zip_longest(_ppowmod(x, p ** (d // r), m, p), x, fillvalue=0)]),
            m, p)
        if len(_pgcd(h, m, p)) != 1:
            return False
    return True


def _default_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lex-least monic irreducible of degree d, nonzero constant term."""
    if d == 1:
        return (1, 1)  # x + 1; irrelevant for arithmetic, fixed for display
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=d - 1):
            m = (c0,) + rest + (1,)
            if _is_irreducible(m, p):
                return m
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# field context and elements

@functools.lru_cache(maxsize=None)
def _make_field_cached(p: int, d: int, modulus: tuple[int, ...] | None) -> "FieldCtx":
    return FieldCtx(p, d, modulus)


def make_field(p: int, d: int = 1, modulus: Sequence[int] | None = None) -> "FieldCtx":
    """Field context for GF(p^d); contexts are cached and shared."""
    return _make_field_cached(p, d, tuple(modulus) if modulus is not None else None)


class FieldCtx:
    """Immutable arithmetic context for GF(p^d)."""

    __slots__ = ("p", "d", "q", "modulus", "_redrows", "_rednp_cache", "_fact", "_gen", "_elts")

    def __init__(self, p: int, d: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise NotPrime(p)
        if d < 1:
            raise ValueError(f"degree must be >= 1, got {d}")
        if modulus is None:
            modulus = _default_modulus(p, d)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != d + 1 or modulus[-1] != 1:
                raise ReducibleModulus(f"modulus must be monic of degree {d}")
            if d > 1 and not _is_irreducible(modulus, p):
                raise ReducibleModulus(modulus)
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = modulus
        # x^k mod modulus for k = 0 .. 2d-2, as dense length-d rows
        rows = []
        for k in range(2 * d - 1):
            r = _pmod(tuple([0] * k + [1]), modulus, p)
            rows.append(tuple(r) + (0,) * (d - len(r)))
        self._redrows = rows
        self._rednp_cache = None
        self._fact = None
        self._gen = None
        self._elts = None

    def _rednp(self):
        if self._rednp_cache is None:
            import numpy as np
            self._rednp_cache = np.array(self._redrows, dtype=np.float64)
        return self._rednp_cache

    # -- construction -------------------------------------------------------

    def el(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.d - 1)
        else:
            value = tuple(int(c) % self.p for c in value)
            if len(value) > self.d:
                raise ValueError("too many coefficients")
            coeffs = value + (0,) * (self.d - len(value))
        return FieldElement(self, coeffs)

    def zero(self) -> "FieldElement":
        return self.el(0)

    def one(self) -> "FieldElement":
        return self.el(1)

    def from_index(self, i: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.d):
            coeffs.append(i % self.p)
            i //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in ascending lex order on (c0, c1, ..., c_{d-1})."""
        for coeffs in itertools.product(range(self.p), repeat=self.d):
            yield FieldElement(self, coeffs)

    def all_elements(self) -> list["FieldElement"]:
        if self._elts is None:
            self._elts = list(self.elements())
        return self._elts

    # -- cached structure ---------------------------------------------------

    def factorization_of_q_minus_1(self) -> tuple[tuple[int, int], ...]:
        if self._fact is None:
            self._fact = factorize(self.q - 1)
        return self._fact

    def generator(self) -> "FieldElement":
        """Canonical primitive element: lex-least generator of GF(q)*."""
        if self._gen is None:
            for x in self.elements():
                if not x.is_zero() and is_primitive(x):
                    self._gen = x
                    break
        return self._gen

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus))

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.d})" if self.d > 1 else f"GF({self.p})"

    def name(self) -> str:
        """Serialized form: `p` for prime fields, `p^d/c0,c1,...` otherwise."""
        if self.d == 1:
            return str(self.p)
        return f"{self.p}^{self.d}/" + ",".join(map(str, self.modulus))


def parse_field(desc: str) -> FieldCtx:
    """Parse `p`, `p^d`, or `p^d/c0,c1,...,cd` field descriptions."""
    desc = desc.strip()
    modulus = None
    if "/" in desc:
        desc, mod_part = desc.split("/", 1)
        modulus = [int(c) for c in mod_part.split(",")]
    if "^" in desc:
        p_s, d_s = desc.split("^", 1)
        p, d = int(p_s), int(d_s)
    else:
        p, d = int(desc), 1
    return make_field(p, d, modulus)


class FieldElement:
    """Element of GF(p^d): coefficient tuple, constant term first."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def index(self) -> int:
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.ctx.p + c
        return i

    def lift(self) -> int:
        """Integer value of a prime-subfield element."""
        if any(self.coeffs[1:]):
            raise ValueError(f"{self} is not in the prime subfield")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.el(other)
        return (isinstance(other, FieldElement)
                and self.ctx == other.ctx and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.q, self.coeffs))

    def __repr__(self):
        if self.ctx.d == 1:
            return str(self.coeffs[0])
        return ",".join(map(str, self.coeffs))

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValueError("mixed field contexts")
            return other
        if isinstance(other, int):
            return self.ctx.el(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        p, d = ctx.p, ctx.d
        if d == 1:
            return FieldElement(ctx, (self.coeffs[0] * o.coeffs[0] % p,))
        a, b = self.coeffs, o.coeffs
        if d >= 8:
            # numpy fast path; exact for (p-1)^2 * (2d-1) * d well below 2^53
            import numpy as np
            conv = np.convolve(np.array(a, dtype=np.float64),
                               np.array(b, dtype=np.float64))
            red = ctx._rednp()
            out = conv @ red
            return FieldElement(ctx, tuple(int(c) % p for c in out))
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [0] * d
        rows = ctx._redrows
        for k, ck in enumerate(conv):
            if ck:
                row = rows[k]
                for jj in range(d):
                    out[jj] += ck * row[jj]
        return FieldElement(ctx, tuple(c % p for c in out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ctx = self.ctx
        p = ctx.p
        if ctx.d == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], p - 2, p),))
        # extended Euclid on (self, modulus)
        r0, r1 = _ptrim(self.coeffs), ctx.modulus
        s0, s1 = (1,), ()
        while r1:
            # r0 = q*r1 + r; track s coefficients
            q_poly, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _ptrim([(a - b) % p for a, b in
                                 itertools.zip_longest(s0, _pmul(q_poly, s1, p), fillvalue=0)])
        inv_lead = pow(r0[-1], p - 2, p)
        s0 = tuple(c * inv_lead % p for c in s0)
        s0 = _pmod(s0, ctx.modulus, p)
        return FieldElement(ctx, tuple(s0) + (0,) * (ctx.d - len(s0)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- field-theoretic queries ----------------------------------------------

    def frobenius(self, r: int = 1) -> "FieldElement":
        return self ** (self.ctx.p**r)

    def degree(self) -> int:
        """Degree over GF(p) of the subfield generated by this element."""
        for e in divisors(self.ctx.d):
            if self.frobenius(e) == self:
                return e
        raise AssertionError("element not fixed by full-field Frobenius")

    def lex_key(self) -> tuple[int, ...]:
        return self.coeffs


def _pdivmod(a, b, p):
    """Polynomial division a = q*b + r over GF(p)."""
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q_out = [0] * max(len(a) - db, 1)
    while len(_ptrim(a)) - 1 >= db:
        a = list(_ptrim(a))
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        q_out[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
    return _ptrim(q_out), _ptrim(a)


# ---------------------------------------------------------------------------
# spec operations

def element_order(g: FieldElement) -> int:
    """Multiplicative order, via the factorization of q - 1."""
    if g.is_zero():
        raise ZeroElement("order of zero")
    n = g.ctx.q - 1
    m = n
    for f, _ in g.ctx.factorization_of_q_minus_1():
        while m % f == 0 and (g ** (m // f)).is_one():
            m //= f
    return m


def negate_order(m: int) -> int:
    """Order of -g for any g of order m (odd characteristic)."""
    assert m >= 1
    if m % 2 == 1:
        return 2 * m
    if m % 4 == 0:
        return m
    return m // 2


def is_square(g: FieldElement) -> bool:
    """Euler criterion; 0 counts as a square; everything is in char 2."""
    q = g.ctx.q
    if q % 2 == 0 or g.is_zero():
        return True
    return (g ** ((q - 1) // 2)).is_one()


def _lex_min(a: FieldElement, b: FieldElement) -> FieldElement:
    return a if a.lex_key() <= b.lex_key() else b


def sqrt(g: FieldElement) -> FieldElement:
    """Canonical square root: the root with lex-smaller coefficient vector."""
    ctx = g.ctx
    q = ctx.q
    if g.is_zero():
        return g
    if q % 2 == 0:
        return g ** (q // 2)
    if not is_square(g):
        raise NotASquare(g)
    if q % 4 == 3:
        h = g ** ((q + 1) // 4)
    else:
        h = _tonelli_shanks(g)
    assert h * h == g
    return _lex_min(h, -h)


def _tonelli_shanks(g: FieldElement) -> FieldElement:
    ctx = g.ctx
    q = ctx.q
    t, s = q - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    z = next(x for x in ctx.elements() if not x.is_zero() and not is_square(x))
    c = z**t
    r = g ** ((t + 1) // 2)
    u = g**t
    m = s
    while not u.is_one():
        # find least i with u^(2^i) = 1
        i, v = 0, u
        while not v.is_one():
            v = v * v
            i += 1
        b = c ** (2 ** (m - i - 1))
        r = r * b
        c = b * b
        u = u * c
        m = i
    return r


def is_primitive(g: FieldElement) -> bool:
    """True iff g generates GF(q)*."""
    if g.is_zero():
        raise ZeroElement("primitivity of zero")
    n = g.ctx.q - 1
    return all(not (g ** (n // f)).is_one() for f in prime_factors(n))


# ---------------------------------------------------------------------------
# subfield embeddings

def _poly_eval(coeffs: list[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_roots(coeffs: list[FieldElement], ctx: FieldCtx) -> list[FieldElement]:
    """Roots in ctx of a monic polynomial that splits completely over ctx."""
    if ctx.q <= 1 << 16:
        return [x for x in ctx.elements() if _poly_eval(coeffs, x).is_zero()]
    if ctx.q % 2 == 0:
        raise NotImplementedError("large even-characteristic root finding unused")
    return sorted(_cz_split(coeffs, ctx), key=lambda r: r.lex_key())


def _cz_split(coeffs: list[FieldElement], ctx: FieldCtx) -> list[FieldElement]:
    """Cantor-Zassenhaus with a deterministic shift sequence."""
    deg = len(coeffs) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [-coeffs[0]]
    one = ctx.one()
    for delta in ctx.elements():
        h = _fpoly_powmod([delta, one], (ctx.q - 1) // 2, coeffs)
        h = [c - (one if i == 0 else ctx.zero()) for i, c in enumerate(h)] or [-one]
        g = _fpoly_gcd(h, coeffs)
        if 0 < len(g) - 1 < deg:
            other = _fpoly_div(coeffs, g)
            return _cz_split(g, ctx) + _cz_split(other, ctx)
    raise AssertionError("splitting failed")  # unreachable for split polynomials


def _fpoly_trim(a):
    i = len(a)
    while i > 0 and a[i - 1].is_zero():
        i -= 1
    return a[:i]


def _fpoly_mulmod(a, b, m):
    ctx = m[0].ctx
    out = [ctx.zero()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai.is_zero():
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return _fpoly_mod(out, m)


def _fpoly_mod(a, m):
    a = list(a)
    dm = len(m) - 1
    inv_lead = m[-1].inverse()
    while len(_fpoly_trim(a)) - 1 >= dm:
        a = _fpoly_trim(a)
        coef = a[-1] * inv_lead
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = a[shift + i] - coef * mi
        a = a[:-1]
    return _fpoly_trim(a)


def _fpoly_powmod(a, e, m):
    ctx = m[0].ctx
    result = [ctx.one()]
    base = _fpoly_mod(a, m)
    while e:
        if e & 1:
            result = _fpoly_mulmod(result, base, m)
        base = _fpoly_mulmod(base, base, m)
        e >>= 1
    return result


def _fpoly_gcd(a, b):
    a, b = _fpoly_trim(list(a)), _fpoly_trim(list(b))
    while b:
        a, b = b, _fpoly_mod(a, b)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _fpoly_div(a, b):
    q, r = _fpoly_divmod(a, b)
    assert not r
    return q


def _fpoly_divmod(a, b):
    ctx = b[0].ctx
    a = _fpoly_trim(list(a))
    db = len(b) - 1
    inv_lead = b[-1].inverse()
    q_out = [ctx.zero()] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead
        shift = len(a) - 1 - db
        q_out[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - coef * bi
        a = _fpoly_trim(a)
    return _fpoly_trim(q_out), a


@functools.lru_cache(maxsize=None)
def _embedding_root(src: FieldCtx, dst: FieldCtx) -> FieldElement:
    """Canonical image in dst of src's residue class x̄: the lex-least root
    of the source modulus.  Fixes one embedding GF(p^e) -> GF(p^d)."""
    if src.p != dst.p or dst.d % src.d != 0:
        raise NoEmbedding(f"{src} does not embed in {dst}")
    mod = [dst.el(c) for c in src.modulus]
    roots = _poly_roots(mod, dst)
    assert len(roots) == src.d
    return roots[0]


def subfield_embed(g: FieldElement, target: FieldCtx) -> FieldElement:
    """Image of g under the canonical embedding of its field into target."""
    src = g.ctx
    if src == target:
        return g
    root = _embedding_root(src, target)
    acc = target.zero()
    for c in reversed(g.coeffs):
        acc = acc * root + target.el(c)
    return acc
