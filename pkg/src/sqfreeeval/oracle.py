"""Independent ground truth for validating the isolator.

Two oracles live here. Sturm sequences give exact real-root counts using
integer arithmetic only. An Aberth-Ehrlich iteration gives all complex roots
numerically. The double-precision iteration is followed by a multiprecision
refinement whose precision doubles until every root is resolved against its
neighbours, up to a cap derived from the Mahler separation bound. Roots that
are too close together for doubles are still separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .dyadic import Dyadic
from .polynomial import (
    IntPolynomial,
    derivative,
    divmod_exact,
    gcd,
    pseudo_remainder,
    root_bound,
    sign_at,
    square_free_part,
)

__all__ = [
    "ConvergenceError",
    "SturmSequence",
    "RootSet",
    "sturm_sequence",
    "sturm_count",
    "sturm_isolate",
    "complex_roots",
    "separation_bits",
    "precision_cap",
]

MAX_SWEEPS = 200
STEP_TOL = 1e-13
RESIDUAL_TOL = 1e-8

_MPC = type(mpc(0))


class ConvergenceError(RuntimeError):
    """Numeric root finding did not reach its residual threshold."""


# Sturm sequences


@dataclass(frozen=True)
class SturmSequence:
    chain: tuple[IntPolynomial, ...]

    def variations(self, x: Dyadic) -> int:
        count = 0
        prev = 0
        for p in self.chain:
            s = sign_at(p, x)
            if s:
                if prev and s != prev:
                    count += 1
                prev = s
        return count


def sturm_sequence(g: IntPolynomial) -> SturmSequence:
    """Integer Sturm chain ``p0 = g, p1 = g', p_{k+1} = -prem(p_{k-1}, p_k)``.

    Pseudo-remainders are rescaled by a positive factor only (the content,
    and the sign of ``lc^(delta+1)``), which leaves sign variations intact.
    """
    if g.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    chain = [g, derivative(g)]
    if chain[1].is_zero():
        return SturmSequence((g,))
    while True:
        a, b = chain[-2], chain[-1]
        r = pseudo_remainder(a, b)
        if r.is_zero():
            break
        delta = a.degree - b.degree
        if b.leading < 0 and (delta + 1) % 2 == 1:
            r = -r
        content = r.content()
        r = IntPolynomial(-c // content for c in r.coeffs)
        chain.append(r)
        if r.degree == 0:
            break
    return SturmSequence(tuple(chain))


def sturm_count(g: IntPolynomial, J) -> int:
    """Number of distinct real roots of ``g`` in the half-open ``(J.lo, J.hi]``."""
    seq = sturm_sequence(g)
    return seq.variations(J.lo) - seq.variations(J.hi)


def sturm_isolate(g: IntPolynomial, I) -> list:
    """Disjoint intervals isolating every real root of ``g`` in closed ``I``.

    Exact roots at bisection points become degenerate intervals ``[r, r]``;
    every interval of positive width holds its root in the open interior.
    """
    from .isolator import Interval

    seq = sturm_sequence(g)
    out = []
    if sign_at(g, I.lo) == 0:
        out.append(Interval(I.lo, I.lo))
    stack = [(I.lo, I.hi, seq.variations(I.lo), seq.variations(I.hi))]
    found = []
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            if sign_at(g, hi) == 0:
                found.append(Interval(hi, hi))
            else:
                found.append(Interval(lo, hi))
            continue
        mid = (lo + hi).half()
        vm = seq.variations(mid)
        stack.append((lo, mid, vlo, vm))
        stack.append((mid, hi, vm, vhi))
    found.sort(key=lambda J: J.lo)
    return out + found


# complex roots


@dataclass(frozen=True)
class RootSet:
    """All complex roots of a polynomial, counted with multiplicity.

    ``roots`` are double-precision values; ``precise`` holds the same roots at
    ``precision`` bits. Roots classified as real have an exactly zero
    imaginary part in both representations.
    """

    roots: tuple[complex, ...]
    residual_bound: float
    precise: tuple = field(default=(), repr=False)
    precision: int = 53

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def real_roots(self) -> list[float]:
        return sorted(z.real for z in self.roots if z.imag == 0)

    @classmethod
    def empty(cls) -> RootSet:
        return cls((), 0.0, (), 53)

    @classmethod
    def from_values(cls, values, precision: int = 53) -> RootSet:
        """Build a root set from known values; used by tests and models."""
        with gmpy2.context(gmpy2.get_context(), precision=precision):
            precise = tuple(v if isinstance(v, _MPC) else mpc(complex(v)) for v in values)
        return cls(tuple(complex(v) for v in values), 0.0, precise, precision)


def _log2_norm(p: IntPolynomial) -> float:
    return 0.5 * math.log2(sum(c * c for c in p.coeffs))


def separation_bits(p: IntPolynomial) -> int:
    """Upper bound on ``log2(1 / sep(p))`` for square-free integer ``p``.

    Mahler: ``sep > sqrt(3 |disc|) d^(-(d+2)/2) ||p||_2^(1-d)`` with
    ``|disc| >= 1`` for a square-free integer polynomial.
    """
    d = p.degree
    if d < 2:
        return 0
    bits = (d + 2) / 2 * math.log2(d) + (d - 1) * _log2_norm(p) - 0.5 * math.log2(3)
    return max(0, math.ceil(bits))


def precision_cap(p: IntPolynomial) -> int:
    """Working precision that is guaranteed to separate the roots of square-free ``p``."""
    if p.degree < 1:
        return 64
    scale = root_bound(p).exponent
    return 2 * (scale + separation_bits(p)) + 256


def starting_precision(p: IntPolynomial) -> int:
    if p.degree < 1:
        return 64
    return root_bound(p).exponent + 128


def _initial_guesses(coeffs: tuple[int, ...]) -> np.ndarray:
    """Points on circles whose radii come from the Newton polygon of ``|a_i|``.

    Each edge of the upper convex hull of ``(i, log|a_i|)`` spanning ``k``
    indices contributes ``k`` points on a circle of the matching radius, so
    roots of very different magnitudes all get nearby starting values.
    """
    d = len(coeffs) - 1
    pts = [(i, math.log(abs(a))) for i, a in enumerate(coeffs) if a]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (i1, y1), (i2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly above the chord
            if (y2 - y1) * (pt[0] - i1) <= (pt[1] - y1) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append(pt)
    z = []
    # zero roots from vanishing low coefficients
    z.extend([0.0] * hull[0][0])
    for (i1, y1), (i2, y2) in zip(hull, hull[1:]):
        k = i2 - i1
        radius = math.exp((y1 - y2) / k)
        angles = 2 * math.pi * np.arange(k) / k + 2 * math.pi * i1 / d + 0.4
        z.extend(radius * np.exp(1j * angles))
    return np.array(z, dtype=complex)


def _aberth_double(coeffs: tuple[int, ...], scale: float) -> np.ndarray:
    c = np.array([float(a) for a in coeffs], dtype=complex)
    d = len(c) - 1
    dc = c[1:] * np.arange(1, d + 1)
    z = _initial_guesses(coeffs)
    hi = c[::-1]
    dhi = dc[::-1]
    with np.errstate(all="ignore"):
        for _ in range(MAX_SWEEPS):
            p = np.polyval(hi, z)
            dp = np.polyval(dhi, z)
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
            w[~np.isfinite(w)] = 0.0
            z = z - w
            if np.max(np.abs(w)) < STEP_TOL * scale:
                break
    if not np.all(np.isfinite(z)):
        z = _initial_guesses(coeffs)
    return z


def _aberth_precise(coeffs: tuple[int, ...], start, prec: int, scale):
    """Gauss-Seidel Aberth sweeps at ``prec`` bits.

    Returns ``(z, w)`` with ``w[k]`` the last correction applied to ``z[k]``.
    Iteration stops once corrections are at the precision floor or have
    stopped shrinking (roundoff dominated).
    """
    d = len(coeffs) - 1
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        a = [mpfr(x) for x in coeffs]
        da = [mpfr(i * x) for i, x in enumerate(coeffs)][1:]
        z = [s if isinstance(s, _MPC) else mpc(complex(s)) for s in start]
        last = [mpfr("inf")] * d
        tol = mpfr(scale) * mpfr(2) ** (-(prec - 12))
        zero = mpc(0)
        stalled = 0
        best = mpfr("inf")
        for _ in range(2 * MAX_SWEEPS):
            biggest = mpfr(0)
            for k in range(d):
                zk = z[k]
                p = zero
                for x in reversed(a):
                    p = p * zk + x
                if p == 0:
                    last[k] = mpfr(0)
                    continue
                dp = zero
                for x in reversed(da):
                    dp = dp * zk + x
                s = zero
                for j in range(d):
                    if j != k:
                        diff = zk - z[j]
                        if diff != 0:
                            s += 1 / diff
                if dp == 0:
                    w = p / (p * -s) if s != 0 else zero
                else:
                    ratio = p / dp
                    w = ratio / (1 - ratio * s)
                if not gmpy2.is_finite(w.real) or not gmpy2.is_finite(w.imag):
                    w = zero
                z[k] = zk - w
                aw = abs(w)
                last[k] = aw
                if aw > biggest:
                    biggest = aw
            if biggest <= tol:
                break
            # no halving of the best correction for several sweeps: roundoff
            if biggest * 2 <= best:
                best, stalled = biggest, 0
            else:
                stalled += 1
                if stalled >= 6:
                    break
        return z, last


def _resolved(z, w, prec: int) -> bool:
    """Every last correction is 2^64 times below the distance to the nearest other root."""
    d = len(z)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for k in range(d):
            near = min((abs(z[k] - z[j]) for j in range(d) if j != k), default=mpfr("inf"))
            if near == 0 or not w[k] * 2**64 <= near:
                return False
    return True


def _residual(coeffs, z, prec: int) -> float:
    d = len(coeffs) - 1
    norm = math.sqrt(sum(float(c) ** 2 for c in coeffs))
    worst = 0.0
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for r in z:
            p = mpc(0)
            for x in reversed(coeffs):
                p = p * r + x
            rel = abs(p) / (norm * max(1.0, float(abs(r))) ** d)
            worst = max(worst, float(rel))
    return worst


def _square_free_roots(g: IntPolynomial, prec: int) -> tuple[list, int]:
    """High-precision roots of square-free ``g`` and the precision used.

    Precision doubles until every root is resolved against its neighbours,
    capped by the precision the Mahler separation bound guarantees.
    """
    coeffs = g.coeffs
    d = g.degree
    if d == 1:
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            return [mpc(mpfr(-coeffs[0]) / coeffs[1])], prec
    scale = float(root_bound(g))
    cap = max(prec, precision_cap(g))
    start = _aberth_double(coeffs, scale)
    # clustered roots can collapse onto (nearly) identical doubles, which
    # stalls the iteration; spread such groups apart
    gap = np.abs(start[:, None] - start[None, :])
    np.fill_diagonal(gap, np.inf)
    crowded = gap.min(axis=1) <= 1e-12 * (np.abs(start) + 1e-300)
    k = np.arange(d)
    kick = (np.abs(start) + 1e-300) * 1e-9 * np.exp(1j * (0.7 + 2.1 * k))
    start = np.where(crowded, start + kick, start)
    while True:
        z, w = _aberth_precise(coeffs, start, prec, scale)
        if _resolved(z, w, prec):
            break
        if prec >= cap:
            raise ConvergenceError(f"Aberth iteration did not converge for {g.pretty()}")
        prec = min(2 * prec, cap)
        start = z
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        # a conjugate partner sits at distance 2|Im|, so |Im| >= near/2 for
        # genuinely complex roots; real roots carry only roundoff in Im
        out, upper, lower = [], [], []
        for i, r in enumerate(z):
            near = min(abs(r - z[j]) for j in range(d) if j != i)
            if abs(r.imag) * 4 < near:
                out.append(mpc(r.real, 0))
            elif r.imag > 0:
                upper.append(r)
            else:
                lower.append(r)
        if len(upper) != len(lower):
            raise ConvergenceError(f"unpaired complex root for {g.pretty()}")
        # make conjugate partners exact mirror images
        for r in upper:
            j = min(range(len(lower)), key=lambda i: abs(lower[i] - r.conjugate()))
            s = lower.pop(j)
            re = (r.real + s.real) / 2
            im = (r.imag - s.imag) / 2
            out.append(mpc(re, im))
            out.append(mpc(re, -im))
    return out, prec


def _multiplicity_split(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Square-free factors ``(q_k, k)`` with ``p ~ prod q_k^k``."""
    out = []
    cur = p.primitive()
    k = 1
    g_cur = square_free_part(cur)
    while cur.degree > 0:
        nxt = gcd(cur, derivative(cur))
        g_nxt = square_free_part(nxt) if nxt.degree > 0 else IntPolynomial([1])
        q = divmod_exact(g_cur, g_nxt).primitive()
        if q.degree > 0:
            out.append((q, k))
        cur, g_cur = nxt, g_nxt
        k += 1
    return out


def complex_roots(p: IntPolynomial, precision: int | None = None) -> RootSet:
    """All complex roots of ``p`` with multiplicity (Aberth-Ehrlich).

    ``precision`` is a lower bound on the working precision in bits; it is
    raised automatically until the roots are resolved.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("complex roots need a polynomial of degree >= 1")
    g = square_free_part(p)
    prec = max(precision or 0, starting_precision(g), 64)
    parts = [(p.primitive(), 1)] if g.degree == p.degree else _multiplicity_split(p)
    found = []
    for q, mult in parts:
        rs, used = _square_free_roots(q, prec)
        prec = max(prec, used)
        found.append((rs, mult))
    precise = []
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for rs, mult in found:
            for r in rs:
                precise.extend([mpc(r)] * mult)
    # real roots ascending, then complex by (re, im)
    precise.sort(key=lambda r: (r.imag != 0, r.real, r.imag))
    residual = _residual(p.coeffs, precise, prec)
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(f"residual {residual:.3g} too large for {p.pretty()}")
    roots = tuple(complex(float(r.real), float(r.imag)) for r in precise)
    return RootSet(roots, residual, tuple(precise), prec)


def numeric_roots(p: IntPolynomial) -> np.ndarray:
    """Double-precision Aberth roots only, for cheap diagnostics."""
    B = float(root_bound(p))
    return _aberth_double(p.coeffs, B)
