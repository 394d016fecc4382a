"""Continuous amortization bounds for the subdivision tree.

Everything here is floating point analysis that validates the exact
isolator; nothing feeds back into it. The roots of ``g`` and ``h`` come from
:func:`sqfreeeval.oracle.complex_roots` at a precision that resolves their
separation. Integrals are taken in coordinates anchored at high-precision
breakpoints so that tightly clustered roots stay distinguishable in doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .dyadic import Dyadic
from .isolator import Interval, benchmark_interval, substitutions
from .oracle import RootSet, complex_roots
from .polynomial import IntPolynomial, bit_length_L
from .quadrature import adaptive_simpson

__all__ = [
    "StoppingModel",
    "VoronoiCell",
    "BoundReport",
    "harmonic_mean",
    "sigma",
    "stopping_G",
    "stopping_F",
    "integral_2_over_G",
    "integral_2_over_F",
    "integral_bound_G",
    "voronoi_cells",
    "closed_form_bound",
    "paper_constant_bound",
    "bound_report",
]

REL_TOL = 1e-9
UNBOUNDED = math.inf


def harmonic_mean(z) -> float:
    z = [float(v) for v in z]
    if not z:
        raise ValueError("harmonic mean of an empty list")
    if any(not v > 0 for v in z):
        raise ValueError("harmonic mean needs strictly positive entries")
    return len(z) / math.fsum(1.0 / v for v in z)


def sigma(x: float, roots) -> float:
    """Sum of reciprocal distances from real ``x`` to every root."""
    total = 0.0
    for a in roots:
        dist = abs(complex(x) - a)
        if dist == 0:
            raise ZeroDivisionError(f"{x} coincides with a root")
        total += 1.0 / dist
    return total


@dataclass(frozen=True)
class StoppingModel:
    """Roots of ``g`` (``roots_f``) and ``h`` (``roots_fp``) over ``interval``."""

    roots_f: RootSet
    roots_fp: RootSet
    interval: Interval
    degree_d: int
    bits_L: int

    @classmethod
    def from_polynomial(cls, f: IntPolynomial, interval: Interval | None = None) -> StoppingModel:
        g, h = substitutions(f)
        # the joint precision must also separate roots of g from roots of h
        prec = complex_roots(g * h).precision if h.degree > 0 else None
        roots_f = complex_roots(g, precision=prec)
        roots_fp = complex_roots(h, precision=prec) if h.degree > 0 else RootSet.empty()
        if interval is None:
            interval = benchmark_interval(f)
        return cls(roots_f, roots_fp, interval, f.degree, bit_length_L(f))

    @property
    def precision(self) -> int:
        return max(self.roots_f.precision, self.roots_fp.precision, 64)


def _G_term(x: float, roots: RootSet) -> float:
    if len(roots) == 0:
        return UNBOUNDED
    return 2.0 / (3.0 * sigma(x, roots))


def stopping_G(x: float, m: StoppingModel) -> float:
    """``max(G0, G1)`` with ``G0 = 2 / (3 Sigma_g)`` and ``G1 = 2 / (3 Sigma_h)``."""
    return max(_G_term(x, m.roots_f), _G_term(x, m.roots_fp))


# Voronoi partition of the real axis by nearest root


@dataclass(frozen=True)
class VoronoiCell:
    """Points of the interval whose nearest root (of ``g`` or ``h``) is ``root``.

    ``cell`` is ``(lo, hi)`` as high-precision floats, or ``None`` when empty.
    ``source`` is ``"f"`` for roots of ``g`` and ``"fp"`` for roots of ``h``.
    """

    root: complex
    cell: tuple | None
    source: str
    precise_root: object = None

    @property
    def cell_float(self) -> tuple[float, float] | None:
        return None if self.cell is None else (float(self.cell[0]), float(self.cell[1]))


def _to_mpfr(x: Dyadic) -> mpfr:
    # exact: the working precision is raised to hold the mantissa
    with gmpy2.context(gmpy2.get_context(), precision=max(64, abs(x.mantissa).bit_length() + 2)):
        return gmpy2.mul_2exp(mpfr(x.mantissa), x.exponent)


def _all_roots(m: StoppingModel):
    out = []
    for source, rs in (("f", m.roots_f), ("fp", m.roots_fp)):
        for k, r in enumerate(rs.precise):
            out.append((source, k, r))
    return out


def _envelope(m: StoppingModel, prec: int):
    """Lower envelope of ``|x - alpha|^2 - x^2 = -2 Re(alpha) x + |alpha|^2``.

    Returns ``(owners, breaks)``: ``owners[i]`` is the list of root indices
    (conjugates share a line) nearest on the ``i``-th piece and ``breaks`` are
    the ``len(owners) - 1`` abscissae between consecutive pieces.
    """
    roots = _all_roots(m)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        lines = {}
        for idx, (_, _, r) in enumerate(roots):
            key = (r.real, r.imag * r.imag)
            lines.setdefault(key, []).append(idx)
        best = {}
        for (a, b2), owners in lines.items():
            if a not in best or b2 < best[a][0]:
                best[a] = (b2, owners)
        ordered = sorted(best.items(), key=lambda item: item[0])
        hull = []  # (slope, intercept, owners, a)
        for a, (b2, owners) in ordered:
            line = (-2 * a, a * a + b2, owners)
            while len(hull) >= 2:
                s1, c1, _ = hull[-2]
                s2, c2, _ = hull[-1]
                s3, c3, _ = line
                x12 = (c2 - c1) / (s1 - s2)
                x13 = (c3 - c1) / (s1 - s3)
                if x13 <= x12:
                    hull.pop()
                else:
                    break
            hull.append(line)
        breaks = [(hull[i + 1][1] - hull[i][1]) / (hull[i][0] - hull[i + 1][0]) for i in range(len(hull) - 1)]
    return [h[2] for h in hull], breaks, roots


def voronoi_cells(m: StoppingModel) -> list[VoronoiCell]:
    """Nearest-root cells of every root of ``g`` and ``h`` within the interval."""
    if len(m.roots_f) + len(m.roots_fp) == 0:
        raise ValueError("Voronoi partition of an empty root set")
    prec = m.precision
    owners, breaks, roots = _envelope(m, prec)
    lo, hi = _to_mpfr(m.interval.lo), _to_mpfr(m.interval.hi)
    cells: dict[int, tuple] = {}
    edges = [None] + breaks + [None]
    for i, own in enumerate(owners):
        left = lo if edges[i] is None else max(lo, edges[i])
        right = hi if edges[i + 1] is None else min(hi, edges[i + 1])
        if right > left:
            for idx in own:
                cells[idx] = (left, right)
    out = []
    for idx, (source, _, r) in enumerate(roots):
        z = complex(float(r.real), float(r.imag))
        out.append(VoronoiCell(z, cells.get(idx), source, r))
    return out


def _breakpoints(m: StoppingModel, cells: list[VoronoiCell]) -> list:
    lo, hi = _to_mpfr(m.interval.lo), _to_mpfr(m.interval.hi)
    pts = {lo, hi}
    for c in cells:
        re = c.precise_root.real
        if lo < re < hi:
            pts.add(re)
        if c.cell is not None:
            for e in c.cell:
                if lo < e < hi:
                    pts.add(e)
    return sorted(pts)


class _AnchoredPanels:
    """Half-segments between breakpoints in anchored offset coordinates.

    Each half ``[p, mid]`` (or ``[mid, q]``) is parametrised as
    ``x = anchor + dir * t`` with ``t >= 0``. Root offsets relative to the
    anchor are rounded to doubles only after the high-precision subtraction.
    """

    def __init__(self, m: StoppingModel, cells: list[VoronoiCell]):
        prec = m.precision
        pts = _breakpoints(m, cells)
        owner_of = _cell_lookup(cells)
        rf = list(m.roots_f.precise)
        rh = list(m.roots_fp.precise)
        n_f, n_h = max(1, len(rf)), max(1, len(rh))
        f_re, f_im, h_re, h_im, length, kind = [], [], [], [], [], []
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            for p, q in zip(pts, pts[1:]):
                half = (q - p) / 2
                mid = p + half
                source = owner_of(mid)
                for anchor, direction in ((p, 1), (q, -1)):
                    row_f = [float(direction * (r.real - anchor)) for r in rf]
                    row_h = [float(direction * (r.real - anchor)) for r in rh]
                    f_re.append(row_f + [math.inf] * (n_f - len(rf)))
                    h_re.append(row_h + [math.inf] * (n_h - len(rh)))
                    f_im.append([float(abs(r.imag)) for r in rf] + [0.0] * (n_f - len(rf)))
                    h_im.append([float(abs(r.imag)) for r in rh] + [0.0] * (n_h - len(rh)))
                    length.append(float(half))
                    kind.append(source)
        self.f_re = np.array(f_re, dtype=float).reshape(len(length), n_f)
        self.f_im = np.array(f_im, dtype=float).reshape(len(length), n_f)
        self.h_re = np.array(h_re, dtype=float).reshape(len(length), n_h)
        self.h_im = np.array(h_im, dtype=float).reshape(len(length), n_h)
        self.length = np.array(length, dtype=float)
        self.owner_is_f = np.array([k == "f" for k in kind], dtype=bool)

    def sigmas(self, t, tags):
        with np.errstate(divide="ignore", invalid="ignore"):
            df = np.hypot(t[:, None] - self.f_re[tags], self.f_im[tags])
            dh = np.hypot(t[:, None] - self.h_re[tags], self.h_im[tags])
            sf = np.sum(1.0 / df, axis=1)
            sh = np.sum(1.0 / dh, axis=1)
        return sf, sh

    def panels(self):
        """Geometric panels toward each anchor, down to the nearest-root scale."""
        a_list, b_list, tag_list = [], [], []
        dist = np.minimum(
            _nonzero_min(np.hypot(self.f_re, self.f_im)),
            _nonzero_min(np.hypot(self.h_re, self.h_im)),
        )
        for k, (L, scale) in enumerate(zip(self.length, dist)):
            if not L > 0:
                continue
            edges = [L]
            floor = min(L, scale) / 8.0
            while edges[-1] > floor and len(edges) < 2000:
                edges.append(edges[-1] / 2.0)
            edges.append(0.0)
            edges.reverse()
            a_list.extend(edges[:-1])
            b_list.extend(edges[1:])
            tag_list.extend([k] * (len(edges) - 1))
        return np.array(a_list), np.array(b_list), np.array(tag_list, dtype=np.intp)


def _nonzero_min(d: np.ndarray) -> np.ndarray:
    d = np.where((d > 0) & np.isfinite(d), d, np.inf)
    out = d.min(axis=1) if d.size else np.full(d.shape[0], np.inf)
    return out


def _cell_lookup(cells: list[VoronoiCell]):
    spans = sorted((c.cell[0], c.cell[1], c.source) for c in cells if c.cell is not None)

    def owner(x):
        for lo, hi, source in spans:
            if lo <= x <= hi:
                return source
        return "f"

    return owner


def _integrate(m: StoppingModel, mode: str, cells=None) -> float:
    if len(m.roots_f) == 0 or len(m.roots_fp) == 0:
        if mode in ("G", "F"):
            # an empty root set makes its stopping term unbounded, so 2/G and
            # 2/F reduce to 3 * Sigma of the empty set, i.e. zero
            return 0.0
    if cells is None:
        cells = voronoi_cells(m)
    panels = _AnchoredPanels(m, cells)

    if mode == "G":
        def integrand(t, tags):
            sf, sh = panels.sigmas(t, tags)
            return 3.0 * np.minimum(sf, sh)
    else:
        def integrand(t, tags):
            sf, sh = panels.sigmas(t, tags)
            return 3.0 * np.where(panels.owner_is_f[tags], sh, sf)

    a, b, tags = panels.panels()
    return adaptive_simpson(integrand, a, b, tags, rel_tol=REL_TOL)


def integral_2_over_G(m: StoppingModel, cells=None) -> float:
    """Raw value of the integral of ``2 / G`` over the model interval."""
    return _integrate(m, "G", cells)


def integral_2_over_F(m: StoppingModel, cells=None) -> float:
    """Integral of ``2 / F``: ``3 Sigma_h`` on cells of g-roots, ``3 Sigma_g`` on h-roots."""
    return _integrate(m, "F", cells)


def integral_bound_G(m: StoppingModel) -> float:
    """Tree-size bound ``max(1, integral of 2 / G)``."""
    return max(1.0, integral_2_over_G(m))


def stopping_F(x: float, m: StoppingModel, cells=None) -> float:
    """Pointwise ``F``: G1 nearest a g-root, G0 nearest an h-root, G on ties."""
    if cells is None:
        cells = voronoi_cells(m)
    best, owners = math.inf, set()
    for c in cells:
        dist = abs(complex(x) - c.root)
        if dist < best:
            best, owners = dist, {c.source}
        elif dist == best:
            owners.add(c.source)
    if owners == {"f"}:
        return _G_term(x, m.roots_fp)
    if owners == {"fp"}:
        return _G_term(x, m.roots_f)
    return stopping_G(x, m)


def _log_term(r, s, alpha) -> mpfr:
    """Exact integral of ``3 / |x - alpha|`` over ``[r, s]``."""
    a, b = alpha.real, abs(alpha.imag)
    if b == 0:
        if r >= a:
            return 3 * (gmpy2.log(s - a) - gmpy2.log(r - a))
        if s <= a:
            return 3 * (gmpy2.log(a - r) - gmpy2.log(a - s))
        raise ValueError("real root inside an integration piece")
    return 3 * (gmpy2.asinh((s - a) / b) - gmpy2.asinh((r - a) / b))


def closed_form_bound(m: StoppingModel, cells=None) -> float:
    """Sum over all roots of the integral of ``3 / |x - alpha|`` off alpha's cell."""
    if cells is None:
        cells = voronoi_cells(m)
    lo, hi = _to_mpfr(m.interval.lo), _to_mpfr(m.interval.hi)
    terms = []
    with gmpy2.context(gmpy2.get_context(), precision=m.precision):
        for c in cells:
            if c.cell is None:
                pieces = [(lo, hi)]
            else:
                pieces = [(lo, c.cell[0]), (c.cell[1], hi)]
            total = mpfr(0)
            for r, s in pieces:
                if s > r:
                    total += _log_term(r, s, c.precise_root)
            terms.append(float(total))
    return math.fsum(terms)


def paper_constant_bound(d: int, L: int) -> float:
    """Leading-constant tree-size bound ``25 d L + 42 d ln d``."""
    return 25.0 * d * L + 42.0 * d * math.log(d)


@dataclass(frozen=True)
class BoundReport:
    integral_2_over_G: float
    integral_2_over_F: float
    closed_form_sum: float
    paper_constant_bound: float

    def as_dict(self) -> dict:
        return {
            "integral_2_over_G": self.integral_2_over_G,
            "integral_2_over_F": self.integral_2_over_F,
            "closed_form_sum": self.closed_form_sum,
            "paper_constant_bound": self.paper_constant_bound,
        }


def bound_report(f: IntPolynomial, model: StoppingModel | None = None) -> BoundReport:
    """All amortization quantities for ``f`` on its benchmark interval."""
    if model is None:
        model = StoppingModel.from_polynomial(f)
    cells = voronoi_cells(model)
    return BoundReport(
        integral_2_over_G(model, cells),
        integral_2_over_F(model, cells),
        closed_form_bound(model, cells),
        paper_constant_bound(model.degree_d, model.bits_L),
    )
