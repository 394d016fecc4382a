"""Vectorized adaptive Simpson quadrature.

All live panels are refined together, so the integrand is called on numpy
arrays. Each panel carries an integer tag that is handed back to the
integrand. Callers use it to select per-panel data such as root offsets.
"""

from __future__ import annotations

import numpy as np

__all__ = ["QuadratureError", "adaptive_simpson"]


class QuadratureError(RuntimeError):
    """Adaptive refinement did not meet its tolerance."""


def adaptive_simpson(func, a, b, tags=None, *, rel_tol=1e-9, abs_tol=0.0, max_levels=80):
    """Integrate ``func(t, tags)`` over each panel ``[a_k, b_k]`` and sum.

    A panel is accepted when the two-half Simpson estimate differs from the
    whole-panel one by at most ``15 * (rel_tol * |estimate| + abs_tol)``; the
    Richardson-corrected value is then added to the total. Per-panel relative
    acceptance makes the result relatively accurate for non-negative
    integrands regardless of how the panels are scaled.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if tags is None:
        tags = np.zeros(a.shape, dtype=np.intp)
    tags = np.asarray(tags, dtype=np.intp)
    keep = b > a
    a, b, tags = a[keep], b[keep], tags[keep]
    if a.size == 0:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = func(a, tags), func(m, tags), func(b, tags)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    for _ in range(max_levels):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = func(lm, tags), func(rm, tags)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        both = left + right
        err = np.abs(both - whole)
        # panels too narrow to split further in floating point are accepted
        tiny = (lm <= a) | (rm >= b) | (m <= a) | (m >= b)
        ok = (err <= 15.0 * (rel_tol * np.abs(both) + abs_tol)) | tiny
        total += float(np.sum(both[ok] + (both[ok] - whole[ok]) / 15.0))
        todo = ~ok
        if not todo.any():
            return total
        a_, m_, b_ = a[todo], m[todo], b[todo]
        tg = tags[todo]
        a = np.concatenate([a_, m_])
        b = np.concatenate([m_, b_])
        m = np.concatenate([lm[todo], rm[todo]])
        fa = np.concatenate([fa[todo], fm[todo]])
        fb = np.concatenate([fm[todo], fb[todo]])
        fm = np.concatenate([flm[todo], frm[todo]])
        whole = np.concatenate([left[todo], right[todo]])
        tags = np.concatenate([tg, tg])
    raise QuadratureError(f"adaptive Simpson did not converge on {a.size} panels")
