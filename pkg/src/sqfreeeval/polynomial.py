"""Exact univariate polynomial algebra over the integers.

Coefficients are stored lowest degree first. Every polynomial returned by
:func:`gcd`, :func:`square_free_part` and :func:`coprime_part` is primitive
with a positive leading coefficient, which removes the unit ambiguity of
greatest common divisors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .dyadic import Dyadic

__all__ = [
    "IntPolynomial",
    "TaylorExpansion",
    "evaluate",
    "derivative",
    "taylor_expansion",
    "gcd",
    "square_free_part",
    "coprime_part",
    "root_bound",
    "bit_length_L",
    "parse_polynomial",
    "read_polynomial_file",
]


def _strip(coeffs) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class IntPolynomial:
    """Immutable integer polynomial; ``coeffs[i]`` multiplies ``X**i``.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = _strip(coeffs)
        for c in coeffs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise TypeError(f"coefficient {c!r} is not an integer")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def from_roots(cls, roots) -> IntPolynomial:
        """Monic product of ``(X - r)`` over integer roots ``r``."""
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def primitive(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.coeffs[-1] < 0:
            c = -c
        if c == 1:
            return self
        return IntPolynomial(a // c for a in self.coeffs)

    def __call__(self, x) -> Dyadic:
        return evaluate(self, Dyadic.coerce(x))

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self.coeffs == _strip([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return IntPolynomial(other * c for c in self.coeffs)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        out = IntPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def pretty(self, var: str = "X") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else f"{mag}*"
                body = head + (var if i == 1 else f"{var}^{i}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __reduce__(self):
        return (IntPolynomial, (self.coeffs,))


@dataclass(frozen=True)
class TaylorExpansion:
    """Coefficients of ``f(center + y)``; ``coeffs[i] == f^(i)(center) / i!``."""

    center: Dyadic
    coeffs: tuple[Dyadic, ...]

    def __call__(self, y) -> Dyadic:
        y = Dyadic.coerce(y)
        acc = Dyadic()
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc


def _split_dyadic(x: Dyadic) -> tuple[int, int]:
    """Write ``x = M / 2**s`` with ``s >= 0``."""
    if x.exponent >= 0:
        return x.mantissa << x.exponent, 0
    return x.mantissa, -x.exponent


def evaluate(f: IntPolynomial, x: Dyadic) -> Dyadic:
    """Exact ``f(x)`` by Horner's rule on the integer numerator."""
    a = f.coeffs
    if not a:
        return Dyadic()
    M, s = _split_dyadic(x)
    d = len(a) - 1
    if s == 0:
        acc = 0
        for c in reversed(a):
            acc = acc * M + c
        return Dyadic(acc)
    # f(M/2^s) * 2^(s*d) = sum a_i M^i 2^(s(d-i))
    acc = 0
    scale = 1
    for c in reversed(a):
        acc = acc * M + c * scale
        scale <<= s
    return Dyadic(acc, -s * d)


def sign_at(f: IntPolynomial, x: Dyadic) -> int:
    """Sign of ``f(x)`` without building the Dyadic result."""
    a = f.coeffs
    if not a:
        return 0
    M, s = _split_dyadic(x)
    acc = 0
    scale = 1
    for c in reversed(a):
        acc = acc * M + c * scale
        scale <<= s
    return (acc > 0) - (acc < 0)


def derivative(f: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(i * c for i, c in enumerate(f.coeffs) if i)


def shifted_numerators(coeffs: tuple[int, ...], M: int, s: int) -> list[int]:
    """Integer Taylor shift kernel.

    Returns ``q`` with ``f(M/2^s + y) = sum q_i * 2^(s(i-d)) * y^i``. The
    scaled polynomial ``2^(sd) f(X / 2^s)`` is shifted by the integer ``M``
    with iterated synthetic division.
    """
    d = len(coeffs) - 1
    if s:
        p = [c << (s * (d - i)) for i, c in enumerate(coeffs)]
    else:
        p = list(coeffs)
    if M:
        for k in range(d):
            for i in range(d - 1, k - 1, -1):
                p[i] += M * p[i + 1]
    return p


def taylor_expansion(f: IntPolynomial, m: Dyadic) -> TaylorExpansion:
    m = Dyadic.coerce(m)
    if f.is_zero():
        return TaylorExpansion(m, (Dyadic(),))
    M, s = _split_dyadic(m)
    d = f.degree
    q = shifted_numerators(f.coeffs, M, s)
    return TaylorExpansion(m, tuple(Dyadic(c, s * (i - d)) for i, c in enumerate(q)))


# division and gcd


def _pseudo_remainder(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """``lc(b)^(deg a - deg b + 1) * a mod b``, exact over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    k = len(r) - db
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        k -= 1
    if k > 0:
        factor = lb**k
        r = [factor * c for c in r]
    return tuple(r)


def divmod_exact(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Quotient ``a / b`` when ``b`` divides ``a`` over the integers."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.coeffs)
    db = b.degree
    lb = b.leading
    if len(r) - 1 < db:
        if r:
            raise ValueError("division is not exact")
        return IntPolynomial()
    q = [0] * (len(r) - db)
    for shift in range(len(r) - 1 - db, -1, -1):
        lr = r[shift + db]
        if lr == 0:
            continue
        c, rem = divmod(lr, lb)
        if rem:
            raise ValueError("division is not exact over the integers")
        q[shift] = c
        for i, bc in enumerate(b.coeffs):
            r[i + shift] -= c * bc
    if any(r):
        raise ValueError("division is not exact")
    return IntPolynomial(q)


def pseudo_remainder(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.degree < b.degree:
        return a
    return IntPolynomial(_pseudo_remainder(a.coeffs, b.coeffs))


def gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd by the subresultant polynomial remainder sequence."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    a, b = f.primitive(), g.primitive()
    if a.degree < b.degree:
        a, b = b, a
    if b.degree == 0:
        return IntPolynomial([1])
    ac, bc = a.coeffs, b.coeffs
    g_s, h_s = 1, 1
    while True:
        delta = (len(ac) - 1) - (len(bc) - 1)
        r = _pseudo_remainder(ac, bc)
        if not r:
            break
        if len(r) == 1:
            return IntPolynomial([1])
        div = g_s * h_s**delta
        ac, bc = bc, tuple(c // div for c in r)
        g_s = ac[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h_s = g_s
        else:
            h_s = g_s**delta // h_s ** (delta - 1)
    return IntPolynomial(bc).primitive()


def square_free_part(f: IntPolynomial) -> IntPolynomial:
    """``f / gcd(f, f')`` made primitive; same distinct roots, all simple."""
    if f.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if f.degree == 0:
        return IntPolynomial([1])
    return divmod_exact(f.primitive(), gcd(f, derivative(f))).primitive()


def coprime_part(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Portion of square-free ``p`` that shares no root with ``q``."""
    if p.is_zero():
        raise ValueError("coprime part of the zero polynomial")
    if q.is_zero():
        return IntPolynomial([1])
    return divmod_exact(p.primitive(), gcd(p, q)).primitive()


def bit_length_L(f: IntPolynomial) -> int:
    if f.is_zero():
        raise ValueError("bit length of the zero polynomial")
    return max(abs(c).bit_length() for c in f.coeffs)


def root_bound(f: IntPolynomial) -> Dyadic:
    """Power of two strictly exceeding the modulus of every complex root.

    The smaller of ``2**L`` and the Cauchy bound ``1 + max|a_i| / |a_d|``
    rounded up to a power of two.
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("root bound needs a polynomial of degree >= 1")
    L = bit_length_L(f)
    ad = abs(f.leading)
    A = max((abs(c) for c in f.coeffs[:-1]), default=0)
    # smallest k >= 0 with 2^k * ad >= ad + A
    k = 0
    while (ad << k) < ad + A:
        k += 1
    return Dyadic(1, min(k, L))


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse comma-separated decimal coefficients, lowest degree first."""
    parts = [p.strip() for p in text.strip().split(",")]
    if not parts or any(p == "" for p in parts):
        raise ValueError(f"malformed polynomial {text!r}")
    try:
        return IntPolynomial(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"malformed polynomial {text!r}") from exc


def read_polynomial_file(path) -> list[IntPolynomial]:
    """One polynomial per line; ``#`` starts a comment."""
    polys = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                polys.append(parse_polynomial(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return polys
