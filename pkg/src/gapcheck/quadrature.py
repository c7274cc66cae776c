"""Adaptive Simpson quadrature for radial integrals.

The integrand must be vectorized (accept and return 1-d arrays).  Panels are
refined breadth-first so each refinement level costs one batched call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int

    def __float__(self):
        return self.value


def _simpson(fa, fm, fb, w):
    return w * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(
    f,
    a: float,
    b: float,
    atol: float = 1e-10,
    rtol: float = 0.0,
    breakpoints=(),
    initial_panels: int = 8,
    max_depth: int = 60,
    max_evaluations: int = 2_000_000,
) -> QuadResult:
    """Integrate ``f`` over ``[a, b]``.

    Each panel accepts when its Simpson/half-Simpson difference, divided by
    15, is within its width-proportional share of ``max(atol, rtol*|I|)``.
    Accepted panels contribute the Richardson-corrected value.
    ``breakpoints`` inside ``(a, b)`` always become panel edges, which is
    where kinks of piecewise integrands should go.
    """
    a, b = float(a), float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if b == a:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = [a] + sorted(float(p) for p in breakpoints if a < p < b) + [b]
    nodes = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(np.linspace(lo, hi, initial_panels + 1)[:-1])
    left = np.concatenate(nodes)
    right = np.append(left[1:], b)
    length = b - a

    def call(x):
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).astype(float)
        return y

    mid = 0.5 * (left + right)
    fl, fm, fr = (call(v) for v in (left, mid, right))
    whole = _simpson(fl, fm, fr, right - left)
    evals = 3 * left.size
    depth = 0
    total = 0.0
    err_total = 0.0
    scale_est = abs(float(np.sum(whole)))

    while left.size:
        w = right - left
        lm = 0.5 * (left + mid)
        rm = 0.5 * (mid + right)
        flm = call(lm)
        frm = call(rm)
        evals += 2 * left.size
        s_left = _simpson(fl, flm, fm, 0.5 * w)
        s_right = _simpson(fm, frm, fr, 0.5 * w)
        halves = s_left + s_right
        err = np.abs(halves - whole) / 15.0
        tol = max(atol, rtol * scale_est) * (w / length)
        ok = err <= tol
        if depth >= max_depth or evals > max_evaluations:
            ok = np.ones_like(ok)
        if not np.all(np.isfinite(halves)):
            raise QuadratureError("integrand produced non-finite values")
        total += float(np.sum(halves[ok] + (halves[ok] - whole[ok]) / 15.0))
        err_total += float(np.sum(err[ok]))
        keep = ~ok
        # children: [left, mid] and [mid, right]
        left, right, mid_new = (
            np.concatenate([left[keep], mid[keep]]),
            np.concatenate([mid[keep], right[keep]]),
            np.concatenate([lm[keep], rm[keep]]),
        )
        fl, fr, fm_new = (
            np.concatenate([fl[keep], fm[keep]]),
            np.concatenate([fm[keep], fr[keep]]),
            np.concatenate([flm[keep], frm[keep]]),
        )
        whole = np.concatenate([s_left[keep], s_right[keep]])
        mid, fm = mid_new, fm_new
        scale_est = max(scale_est, abs(total))
        depth += 1
    return QuadResult(sign * total, err_total, evals)


def geometric_breakpoints(a: float, b: float, levels: int = 40) -> list[float]:
    """Points ``a + (b-a) 2^-k`` for k = 1..levels, clustering at ``a``."""
    return [a + (b - a) * 2.0 ** (-k) for k in range(1, levels + 1)]


def integrate_radial(
    f,
    a: float,
    b: float,
    atol: float = 1e-10,
    rtol: float = 0.0,
    breakpoints=(),
    singular_start: bool | None = None,
    log_threshold: float = 1e3,
) -> QuadResult:
    """Integrate a radial profile, splitting geometrically toward a singular start.

    When ``a == 0`` (or ``singular_start``) panels are clustered toward ``a``.
    Pieces of the range beyond ``log_threshold`` times their start are
    integrated in the variable ``s = log(rho)``.
    """
    if singular_start is None:
        singular_start = a == 0.0
    pts = sorted({float(p) for p in breakpoints if a < p < b})
    total = QuadResult(0.0, 0.0, 0)
    if singular_start:
        first = pts[0] if pts else b
        geo = geometric_breakpoints(a, first, levels=100)
        pts = sorted(set(pts) | set(geo))
        # innermost sliver: open 2-point Gauss rule, never touches rho = a
        lo, hi = a, pts[0]
        x = lo + (hi - lo) * (0.5 + np.array([-0.5, 0.5]) / np.sqrt(3.0))
        sliver = 0.5 * (hi - lo) * float(np.sum(np.asarray(f(x), dtype=float)))
        total = QuadResult(sliver, abs(sliver), 2)
        a = hi
        pts = pts[1:]
    edges = [a] + pts + [b]
    # long tails: switch to log variable on each piece that spans many decades
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo > 0 and hi / lo > log_threshold:
            pieces.append(("log", lo, hi))
        else:
            pieces.append(("lin", lo, hi))
    span = max(b - a, 1e-300)
    for kind, lo, hi in pieces:
        share = max(atol * (hi - lo) / span, atol * 1e-3)
        if kind == "lin":
            r = adaptive_simpson(f, lo, hi, atol=share, rtol=rtol, initial_panels=4)
        else:

            def g(s, f=f):
                x = np.exp(s)
                return f(x) * x

            r = adaptive_simpson(g, np.log(lo), np.log(hi), atol=share, rtol=rtol)
        total = QuadResult(total.value + r.value, total.error + r.error, total.evaluations + r.evaluations)
    return total
