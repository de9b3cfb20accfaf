"""Exact cyclotomic scalars and small polynomial utilities.

A scalar is either a rational (``QQ``, a gmpy2.mpq when available) or a
:class:`Cyclotomic`.  A cyclotomic element is stored as ``(order, coeffs)``
where ``coeffs`` has length ``phi(order)`` and holds coordinates in the
power basis ``1, z, ..., z^(phi-1)`` of ``Q(zeta_order)`` reduced modulo the
cyclotomic polynomial ``Phi_order``.  Every constructor pushes the element
down to the smallest cyclotomic field containing it, so equal values always
get identical representations and ``hash``/``==`` are sound across mixed
ambient orders.  That soundness is what lets the rest of the package group
characters and eigenvalues by exact scalar keys.

Mixed-order arithmetic lifts both operands to ``Q(zeta_lcm)``.  The lcm is
capped: the groups handled here are tiny, so a runaway order is always an
upstream bug, not a legitimate computation.
"""

from __future__ import annotations

import cmath
import math
import re
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

__all__ = [
    "QQ",
    "Cyclotomic",
    "CyclotomicOrderError",
    "UniPoly",
    "zeta",
    "as_scalar",
    "canonical_scalar",
    "conj_scalar",
    "embed_complex",
    "parse_scalar",
    "format_scalar",
    "elementary_symmetric",
    "poly_discriminant",
    "poly_resultant",
]

#: Hard ceiling on the ambient order produced by mixed-order arithmetic.
ORDER_CAP = 360

Rational = Union[int, type(QQ(0))]
Scalar = Union[int, type(QQ(0)), "Cyclotomic"]


class CyclotomicOrderError(ValueError):
    """Raised when an operation would need Q(zeta_n) with n > ORDER_CAP."""


def _phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (lowest-degree first, den monic
    up to sign of leading coefficient +-1).  Remainder must vanish."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        q, r = divmod(num[i], lead)
        if r:
            raise ArithmeticError("non-exact cyclotomic division")
        quot[i - dd] = q
        for j in range(dd + 1):
            num[i - dd + j] -= q * den[j]
    if any(num[:dd]):
        raise ArithmeticError("non-exact cyclotomic division")
    return quot


_CYCLO_POLY_CACHE: dict[int, tuple[int, ...]] = {}


def _cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest-degree first."""
    cached = _CYCLO_POLY_CACHE.get(n)
    if cached is not None:
        return cached
    f = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            f = _poly_divmod_int(f, list(_cyclotomic_poly(d)))
    result = tuple(f)
    _CYCLO_POLY_CACHE[n] = result
    return result


def _reduce_mod_phi(coeffs: list, n: int) -> list:
    """Reduce a coefficient list (powers of zeta_n, lowest first) mod Phi_n."""
    phi = _phi(n)
    if len(coeffs) <= phi:
        return list(coeffs) + [QQ(0)] * (phi - len(coeffs))
    work = list(coeffs)
    den = _cyclotomic_poly(n)
    for i in range(len(work) - 1, phi - 1, -1):
        q = work[i]
        if q:
            for j in range(phi + 1):
                work[i - phi + j] -= q * den[j]
        work.pop()
    return work


# Cached data for the membership test  Q(zeta_{n/p}) subset Q(zeta_n).
# For each (n, p) we store pivot row indices S and the exact inverse of the
# square submatrix B[S, :], where column j of B represents zeta_n^(p*j)
# reduced mod Phi_n.  A candidate solution is read off via the inverse and
# then verified against the full system, so a failed membership test is
# detected, not silently accepted.
_DESCENT_CACHE: dict[tuple[int, int], tuple[list[list], list[int], list[list]]] = {}


def _descent_data(n: int, p: int):
    key = (n, p)
    cached = _DESCENT_CACHE.get(key)
    if cached is not None:
        return cached
    m = n // p
    phi_n, phi_m = _phi(n), _phi(m)
    cols = []
    for j in range(phi_m):
        e = [QQ(0)] * (p * j) + [QQ(1)]
        cols.append(_reduce_mod_phi(e, n))
    b_rows = [[cols[j][i] for j in range(phi_m)] for i in range(phi_n)]
    # Select phi_m linearly independent rows by Gaussian elimination, then
    # invert the resulting square submatrix.
    pivot_rows: list[int] = []
    used = [False] * phi_n
    reduced = [r[:] for r in b_rows]
    for col in range(phi_m):
        pr = None
        for i in range(phi_n):
            if not used[i] and reduced[i][col] != 0:
                pr = i
                break
        if pr is None:
            raise ArithmeticError("descent basis is rank-deficient")
        used[pr] = True
        pivot_rows.append(pr)
        inv = QQ(1) / reduced[pr][col]
        for i in range(phi_n):
            if i != pr and reduced[i][col] != 0:
                f = reduced[i][col] * inv
                for j in range(col, phi_m):
                    reduced[i][j] -= f * reduced[pr][j]
    sub = [[b_rows[i][j] for j in range(phi_m)] for i in pivot_rows]
    inv_sub = _invert_exact(sub)
    _DESCENT_CACHE[key] = (b_rows, pivot_rows, inv_sub)
    return _DESCENT_CACHE[key]


def _invert_exact(mat: list[list]) -> list[list]:
    k = len(mat)
    aug = [row[:] + [QQ(1) if j == i else QQ(0) for j in range(k)]
           for i, row in enumerate(mat)]
    for col in range(k):
        pr = next(i for i in range(col, k) if aug[i][col] != 0)
        aug[col], aug[pr] = aug[pr], aug[col]
        inv = QQ(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(k):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[k:] for row in aug]


class Cyclotomic:
    """An element of Q(zeta_order) in canonical (smallest-field) form.

    Supports +, -, *, /, ** with other Cyclotomic values, rationals and
    ints; equality and hashing are value-based across orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence, *, _canonical: bool = False):
        if order < 1:
            raise ValueError("order must be a positive integer")
        if order > ORDER_CAP:
            raise CyclotomicOrderError(
                f"cyclotomic order {order} exceeds the cap of {ORDER_CAP}")
        vals = [QQ(c) for c in coeffs]
        if _canonical:
            self.order = order
            self.coeffs = tuple(vals)
            return
        vals = _reduce_mod_phi(vals, order)
        order, vals = _descend(order, vals)
        self.order = order
        self.coeffs = tuple(vals)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "Cyclotomic":
        return Cyclotomic(1, [QQ(q)], _canonical=True)

    @staticmethod
    def from_pairs(order: int, pairs: dict[int, object]) -> "Cyclotomic":
        coeffs = [QQ(0)] * order
        for e, c in pairs.items():
            coeffs[e % order] += QQ(c)
        return Cyclotomic(order, coeffs)

    # -- field queries ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.order == 1

    def as_rational(self):
        if self.order != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def _lift(self, order: int) -> "Cyclotomic":
        """Raw representation in Q(zeta_order); order must be a multiple.

        The result deliberately skips conductor descent (that is the whole
        point), so it must stay internal: public values are always canonical.
        """
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into {order}")
        if order > ORDER_CAP:
            raise CyclotomicOrderError(
                f"cyclotomic order {order} exceeds the cap of {ORDER_CAP}")
        step = order // self.order
        coeffs = [QQ(0)] * (len(self.coeffs) * step)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        coeffs = _reduce_mod_phi(coeffs, order)
        obj = Cyclotomic.__new__(Cyclotomic)
        obj.order = order
        obj.coeffs = tuple(coeffs)
        return obj

    def conjugate(self) -> "Cyclotomic":
        n = self.order
        if n == 1:
            return self
        return Cyclotomic.from_pairs(
            n, {(-i) % n: c for i, c in enumerate(self.coeffs) if c})

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other: "Cyclotomic") -> tuple[int, list, list]:
        n = math.lcm(self.order, other.order)
        if n > ORDER_CAP:
            raise CyclotomicOrderError(
                f"cyclotomic order {n} exceeds the cap of {ORDER_CAP}")
        a = self if self.order == n else self._lift(n)
        b = other if other.order == n else other._lift(n)
        return n, list(a.coeffs), list(b.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n, a, b = self._common(other)
        return Cyclotomic(n, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coeffs], _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.order == 1:
            q = other.coeffs[0]
            return Cyclotomic(self.order, [c * q for c in self.coeffs])
        if self.order == 1:
            q = self.coeffs[0]
            return Cyclotomic(other.order, [c * q for c in other.coeffs])
        n, a, b = self._common(other)
        prod = [QQ(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(n, prod)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not any(self.coeffs):
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.order == 1:
            return Cyclotomic(1, [QQ(1) / self.coeffs[0]], _canonical=True)
        phi = [QQ(c) for c in _cyclotomic_poly(self.order)]
        g, s = _poly_xgcd(list(self.coeffs), phi)
        if len(g) != 1:
            raise ArithmeticError("gcd with Phi_n is not constant")
        inv = [c / g[0] for c in s]
        return Cyclotomic(self.order, inv)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, type(QQ(0)))):
            return self.order == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.order == 1:
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    # -- output --------------------------------------------------------------

    def __complex__(self) -> complex:
        n = self.order
        total = 0j
        for i, c in enumerate(self.coeffs):
            if c:
                weight = float(c.numerator) / float(c.denominator)
                total += weight * cmath.exp(2j * cmath.pi * i / n)
        return total

    def __str__(self) -> str:
        return format_scalar(self)

    __repr__ = __str__


def _descend(order: int, coeffs: list) -> tuple[int, list]:
    """Push (order, coeffs) down to the smallest containing Q(zeta_m)."""
    while order > 1:
        if not any(coeffs[1:]):
            return 1, [coeffs[0]]
        moved = False
        for p in _prime_factors(order):
            m = order // p
            b_rows, pivots, inv_sub = _descent_data(order, p)
            rhs = [coeffs[i] for i in pivots]
            cand = [sum(inv_sub[i][j] * rhs[j] for j in range(len(rhs)))
                    for i in range(len(rhs))]
            ok = True
            for i, row in enumerate(b_rows):
                if sum(row[j] * cand[j] for j in range(len(cand))) != coeffs[i]:
                    ok = False
                    break
            if ok:
                order, coeffs = m, cand
                moved = True
                break
        if not moved:
            break
    return order, coeffs


def _poly_xgcd(a: list, b: list) -> tuple[list, list]:
    """Extended gcd over QQ[x]: returns (g, s) with s*a = g mod b."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [QQ(1)], []
    while r1:
        q, r = _poly_divmod_q(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul_q(q, s1))
    return r0, s0


def _trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else QQ(0)) - (b[i] if i < len(b) else QQ(0))
           for i in range(n)]
    return _trim(out)


def _poly_mul_q(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [QQ(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_divmod_q(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [QQ(0)] * max(0, len(a) - len(b) + 1)
    inv = QQ(1) / b[-1]
    for i in range(len(a) - 1, len(b) - 2, -1):
        f = a[i] * inv
        if f:
            q[i - len(b) + 1] = f
            for j in range(len(b)):
                a[i - len(b) + 1 + j] -= f * b[j]
    return _trim(q), _trim(a[:len(b) - 1])


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity exp(2*pi*i*k/n) as an exact scalar."""
    if n < 1:
        raise ValueError("n must be positive")
    return Cyclotomic.from_pairs(n, {k % n: 1})


# ---------------------------------------------------------------------------
# scalar protocol helpers


def as_scalar(x) -> Scalar:
    """Coerce ints, rationals, strings and Cyclotomic values to a scalar."""
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return QQ(x)
    try:
        return QQ(x)
    except (TypeError, ValueError):
        raise TypeError(f"cannot interpret {x!r} as an exact scalar") from None


def canonical_scalar(x) -> Scalar:
    """Canonical form usable as a dict key: QQ when rational, else Cyclotomic."""
    x = as_scalar(x)
    if isinstance(x, Cyclotomic):
        return x.as_rational() if x.is_rational else x
    return x


def conj_scalar(x) -> Scalar:
    x = as_scalar(x)
    return x.conjugate() if isinstance(x, Cyclotomic) else x


def cyclo_dot(pairs) -> Scalar:
    """Exact sum of products a*b, canonicalized once at the end.

    Same value as canonical_scalar(sum(a * b)), but the per-term conductor
    descent is skipped; that descent dominates sparse operator compositions.
    """
    order = 1
    items = []
    for a, b in pairs:
        if not isinstance(a, Cyclotomic):
            a = Cyclotomic.from_rational(QQ(a))
        if not isinstance(b, Cyclotomic):
            b = Cyclotomic.from_rational(QQ(b))
        order = math.lcm(order, math.lcm(a.order, b.order))
        items.append((a, b))
    if order > ORDER_CAP:
        raise CyclotomicOrderError(
            f"cyclotomic order {order} exceeds the cap of {ORDER_CAP}")
    if order == 1:
        total = QQ(0)
        for a, b in items:
            total += a.coeffs[0] * b.coeffs[0]
        return total
    acc = [QQ(0)] * (2 * _phi(order) - 1)
    for a, b in items:
        ca = a.coeffs if a.order == order else a._lift(order).coeffs
        cb = b.coeffs if b.order == order else b._lift(order).coeffs
        for i, x in enumerate(ca):
            if not x:
                continue
            for j, y in enumerate(cb):
                if y:
                    acc[i + j] += x * y
    return canonical_scalar(Cyclotomic(order, acc))


def embed_complex(z) -> complex:
    """Exact scalar -> complex float via zeta_n -> exp(2*pi*i/n)."""
    if isinstance(z, Cyclotomic):
        return complex(z)
    if isinstance(z, (complex, float)):
        return complex(z)
    return complex(float(QQ(z).numerator) / float(QQ(z).denominator))


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, int) or type(x) is type(QQ(0)):
        return Cyclotomic.from_rational(x)
    try:
        return Cyclotomic.from_rational(QQ(x))
    except (TypeError, ValueError):
        return NotImplemented


# ---------------------------------------------------------------------------
# scalar literal syntax


_TOKEN = re.compile(r"\s*(z\d+|\d+|\^|\*|/|\+|-|\(|\))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad scalar literal near {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        value = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self):
        if self.peek() == "-":
            self.take()
            return -self.factor()
        atom = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise ValueError("exponent must be an integer")
            k = -int(tok) if neg else int(tok)
            if isinstance(atom, Cyclotomic):
                return atom ** k
            if k < 0:
                return QQ(1) / (atom ** (-k))
            return atom ** k
        return atom

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ValueError("unexpected end of scalar literal")
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parenthesis in scalar literal")
            return value
        if tok.startswith("z"):
            n = int(tok[1:])
            if n < 1 or n > ORDER_CAP:
                raise ValueError(f"root order {n} out of range")
            return zeta(n)
        if tok.isdigit():
            return QQ(int(tok))
        raise ValueError(f"unexpected token {tok!r} in scalar literal")


def parse_scalar(text: str) -> Scalar:
    """Parse exact literals like '3/2', '-2', 'z8^3 - 1/2*z8'."""
    parser = _Parser(_tokenize(text.strip()))
    value = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens in scalar literal {text!r}")
    return canonical_scalar(value)


def _format_rational(q) -> str:
    q = QQ(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Render a scalar in the same syntax parse_scalar accepts."""
    x = as_scalar(x)
    if not isinstance(x, Cyclotomic) or x.is_rational:
        return _format_rational(x if not isinstance(x, Cyclotomic)
                                else x.as_rational())
    n = x.order
    parts = []
    for i, c in enumerate(x.coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(("+", _format_rational(abs(c)), c < 0))
            continue
        power = f"z{n}" if i == 1 else f"z{n}^{i}"
        mag = abs(c)
        body = power if mag == 1 else f"{_format_rational(mag)}*{power}"
        parts.append(("+", body, c < 0))
    out = ""
    for idx, (_, body, negative) in enumerate(parts):
        if idx == 0:
            out = ("-" if negative else "") + body
        else:
            out += (" - " if negative else " + ") + body
    return out


# ---------------------------------------------------------------------------
# polynomials


class UniPoly:
    """Univariate polynomial, coefficients lowest-degree first.

    Coefficients may be exact scalars or complex floats (not mixed with
    exact values in one polynomial if division is involved).  The zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        vals = list(coeffs)
        while vals and _is_zero(vals[-1]):
            vals.pop()
        self.coeffs = tuple(vals)

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def monomial(k: int, c=1) -> "UniPoly":
        return UniPoly([0] * k + [c])

    @staticmethod
    def from_roots(roots: Sequence) -> "UniPoly":
        poly = UniPoly([1])
        for r in roots:
            poly = poly * UniPoly([-r, 1])
        return poly

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and _is_one(self.coeffs[-1])

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not _is_zero(x):
                for j, y in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    def __rmul__(self, other) -> "UniPoly":
        return self * other

    def __call__(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def subs_power(self, k: int) -> "UniPoly":
        """The polynomial f(t^k)."""
        if k < 1:
            raise ValueError("power must be >= 1")
        out = [0] * (k * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return UniPoly(out)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*t" if not _is_one(c) else "t")
            else:
                parts.append(f"({c})*t^{i}" if not _is_one(c) else f"t^{i}")
        return " + ".join(parts)

    __repr__ = __str__


def _is_zero(c) -> bool:
    if isinstance(c, Cyclotomic):
        return not c
    return c == 0


def _is_one(c) -> bool:
    if isinstance(c, Cyclotomic):
        return c.is_rational and c.as_rational() == 1
    return c == 1


def elementary_symmetric(values: Sequence, i: int):
    """e_i of the given values (e_0 = 1); raises if i is out of range."""
    vals = list(values)
    if i < 0 or i > len(vals):
        raise ValueError(f"e_{i} undefined for {len(vals)} values")
    table = [1] + [0] * i
    for v in vals:
        for j in range(min(i, len(table) - 1), 0, -1):
            table[j] = table[j] + table[j - 1] * v
    return table[i]


def poly_resultant(f: UniPoly, g: UniPoly):
    """Resultant via the Sylvester matrix (works for exact or float coeffs)."""
    d, e = f.degree, g.degree
    if d < 0 or e < 0:
        raise ValueError("resultant of a zero polynomial")
    if d == 0:
        return f.coeffs[0] ** e
    if e == 0:
        return g.coeffs[0] ** d
    size = d + e
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(e):
        rows.append([0] * i + fc + [0] * (size - d - 1 - i))
    for i in range(d):
        rows.append([0] * i + gc + [0] * (size - e - 1 - i))
    return _det(rows)


def _det(rows: list[list]):
    n = len(rows)
    inexact = any(isinstance(c, (float, complex)) for row in rows for c in row)
    if inexact:
        rows = [row[:] for row in rows]
    else:
        # ints must become rationals up front or '/' below would make floats
        rows = [[c if isinstance(c, Cyclotomic) else QQ(c) for c in row]
                for row in rows]
    det = 1
    sign = 1
    for col in range(n):
        piv = None
        if inexact:
            best = -1.0
            for i in range(col, n):
                mag = abs(complex(rows[i][col]))
                if mag > best:
                    best, piv = mag, i
            if best == 0.0:
                return 0.0
        else:
            for i in range(col, n):
                if not _is_zero(rows[i][col]):
                    piv = i
                    break
            if piv is None:
                return canonical_scalar(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = det * pivot
        for i in range(col + 1, n):
            if _is_zero(rows[i][col]):
                continue
            factor = rows[i][col] / pivot
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[col])]
    result = det * sign
    return result if inexact else canonical_scalar(result)


def poly_discriminant(f: UniPoly):
    """Discriminant of a monic polynomial of degree >= 1."""
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    lead = f.leading_coefficient
    if isinstance(lead, (float, complex)):
        if abs(complex(lead) - 1.0) > 1e-9:
            raise ValueError("discriminant requires a monic polynomial")
    elif not _is_one(lead):
        raise ValueError("discriminant requires a monic polynomial")
    if d == 1:
        return canonical_scalar(1)
    res = poly_resultant(f, f.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    if isinstance(res, (float, complex)):
        return sign * res
    return canonical_scalar(sign * res)
