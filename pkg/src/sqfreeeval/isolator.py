"""The SqFreeEVAL subdivision algorithm with an instrumented subdivision tree.

The input ``f`` is replaced by its square-free part ``g`` and ``f'`` by the
square-free part of ``f'`` made coprime to ``g`` (called ``h``). An interval
``J`` is terminal when the centered Taylor form proves either ``g`` or ``h``
has no zero on ``J`` (conditions C0 and C1). All tests are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .dyadic import Dyadic, dyadic_compare_abs
from .polynomial import (
    IntPolynomial,
    bit_length_L,
    coprime_part,
    derivative,
    root_bound,
    shifted_numerators,
    sign_at,
    square_free_part,
    taylor_expansion,
)

__all__ = [
    "Interval",
    "SubdivisionStats",
    "IsolationReport",
    "DepthLimitError",
    "condition_c0",
    "condition_c1",
    "isolate",
    "isolate_benchmark",
    "substitutions",
]


class DepthLimitError(RuntimeError):
    """Subdivision went deeper than the configured cap."""


@dataclass(frozen=True)
class Interval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        lo, hi = Dyadic.coerce(self.lo), Dyadic.coerce(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).half()

    def bisect(self) -> tuple[Interval, Interval]:
        m = self.midpoint
        return Interval(self.lo, m), Interval(m, self.hi)

    def __contains__(self, x) -> bool:
        x = Dyadic.coerce(x)
        return self.lo <= x <= self.hi

    def contains_float(self, x: float) -> bool:
        return float(self.lo) <= x <= float(self.hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass
class SubdivisionStats:
    partition_size: int = 1
    bisections: int = 0
    max_depth: int = 0
    c0_terminations: int = 0
    c1_terminations: int = 0


@dataclass(frozen=True)
class IsolationReport:
    isolating_intervals: tuple[Interval, ...]
    point_roots: tuple[Dyadic, ...]
    endpoint_roots: tuple[Dyadic, ...]
    stats: SubdivisionStats = field(compare=True)

    @property
    def root_count(self) -> int:
        return len(self.isolating_intervals) + len(self.point_roots) + len(self.endpoint_roots)

    def as_dict(self) -> dict:
        return {
            "isolating_intervals": [[str(J.lo), str(J.hi)] for J in self.isolating_intervals],
            "point_roots": [str(r) for r in self.point_roots],
            "endpoint_roots": [str(r) for r in self.endpoint_roots],
            "stats": {
                "partition_size": self.stats.partition_size,
                "bisections": self.stats.bisections,
                "max_depth": self.stats.max_depth,
                "c0_terminations": self.stats.c0_terminations,
                "c1_terminations": self.stats.c1_terminations,
            },
        }


def _split(x: Dyadic) -> tuple[int, int]:
    if x.exponent >= 0:
        return x.mantissa << x.exponent, 0
    return x.mantissa, -x.exponent


def _centered_exclusion(coeffs: tuple[int, ...], lo: Dyadic, hi: Dyadic) -> bool:
    """``|p(m)| > sum_{i>=1} |p^(i)(m)| / i! * r^i`` with ``m, r`` center and radius.

    Everything is scaled to integers: with ``m = M / 2^s`` the Taylor
    numerators ``q_i`` satisfy ``p^(i)(m)/i! = q_i 2^(s(i-d))``, so both sides
    are multiplied by ``2^(sd)`` and the radius becomes ``rho = 2^s r``.
    """
    if not coeffs:
        return False
    d = len(coeffs) - 1
    if d == 0:
        return True
    M, s = _split((lo + hi).half())
    q = shifted_numerators(coeffs, M, s)
    rho = (hi - lo).scale2(s - 1)
    if rho.is_zero():
        return q[0] != 0
    R, t = rho.mantissa, rho.exponent
    if t >= 0:
        P = R << t
        acc = 0
        for i in range(d, 0, -1):
            acc = acc * P + abs(q[i])
        return abs(q[0]) > acc * P
    u = -t
    acc = abs(q[d])
    for i in range(d - 1, 0, -1):
        acc = acc * R + (abs(q[i]) << (u * (d - i)))
    return (abs(q[0]) << (u * d)) > acc * R


def _centered_exclusion_reference(p: IntPolynomial, J: Interval) -> bool:
    """Same test written directly in dyadic arithmetic; used for cross-checks."""
    if p.is_zero():
        return False
    tay = taylor_expansion(p, J.midpoint)
    r = J.width.half()
    rhs = Dyadic()
    power = Dyadic(1)
    for c in tay.coeffs[1:]:
        power = power * r
        rhs = rhs + abs(c) * power
    return dyadic_compare_abs(tay.coeffs[0], rhs) > 0


def condition_c0(g: IntPolynomial, J: Interval) -> bool:
    """True proves ``g`` has no zero on the closed interval ``J``."""
    return _centered_exclusion(g.coeffs, J.lo, J.hi)


def condition_c1(h: IntPolynomial, J: Interval) -> bool:
    """True proves ``h`` has no zero on ``J``, so ``g`` has at most one."""
    return _centered_exclusion(h.coeffs, J.lo, J.hi)


def substitutions(f: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Return ``(g, h)``: square-free part of ``f`` and of ``f'`` coprime to ``g``."""
    if f.is_zero() or f.degree < 1:
        raise ValueError("isolation needs a polynomial of degree >= 1")
    g = square_free_part(f)
    h = coprime_part(square_free_part(derivative(f)), g)
    return g, h


def isolate(
    f: IntPolynomial,
    I: Interval,
    *,
    max_depth: int | None = None,
    order: str = "depth",
) -> IsolationReport:
    """Isolate the real roots of ``f`` in ``I``.

    ``order`` selects the worklist discipline ("depth" or "breadth"); the
    report does not depend on it. ``max_depth`` defaults to ``8 * (L + 64)``.
    """
    g, h = substitutions(f)
    if not I.width:
        raise ValueError("degenerate input interval")
    if max_depth is None:
        max_depth = 8 * (bit_length_L(f) + 64)

    endpoint_roots = [x for x in (I.lo, I.hi) if sign_at(g, x) == 0]
    gc, hc = g.coeffs, h.coeffs
    stats = SubdivisionStats()
    intervals: list[Interval] = []
    points: list[Dyadic] = []

    if order not in ("depth", "breadth"):
        raise ValueError(f"unknown worklist order {order!r}")
    work = deque([(I.lo, I.hi, 0)])
    pop = work.pop if order == "depth" else work.popleft
    while work:
        lo, hi, depth = pop()
        if _centered_exclusion(gc, lo, hi):
            stats.c0_terminations += 1
            continue
        if _centered_exclusion(hc, lo, hi):
            stats.c1_terminations += 1
            if sign_at(g, lo) * sign_at(g, hi) < 0:
                intervals.append(Interval(lo, hi))
            continue
        if depth >= max_depth:
            raise DepthLimitError(f"depth cap {max_depth} reached at [{lo}, {hi}]")
        stats.bisections += 1
        m = (lo + hi).half()
        if sign_at(g, m) == 0:
            points.append(m)
        depth += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        work.append((m, hi, depth))
        work.append((lo, m, depth))

    stats.partition_size = stats.bisections + 1
    intervals.sort(key=lambda J: J.lo)
    points.sort()
    return IsolationReport(tuple(intervals), tuple(points), tuple(endpoint_roots), stats)


def benchmark_interval(f: IntPolynomial) -> Interval:
    B = root_bound(f)
    return Interval(-B, B)


def isolate_benchmark(f: IntPolynomial, **kwargs) -> IsolationReport:
    """Isolate every real root of ``f`` on ``[-B, B]`` with ``B = root_bound(f)``."""
    if f.is_zero() or f.degree < 1:
        raise ValueError("isolation needs a polynomial of degree >= 1")
    return isolate(f, benchmark_interval(f), **kwargs)
