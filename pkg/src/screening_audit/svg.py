"""Hand-written static SVG for the sweep curve and the event tree."""

from __future__ import annotations

import math
from typing import Optional
from xml.sax.saxutils import escape

from .bayes import EventTree, SweepCurve, negative_predictive_value, positive_predictive_value
from .errors import UndefinedPosterior
from .render import number, percent

_HEAD = ('<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
         'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">\n')


def _text(x, y, s, anchor="middle", extra=""):
    return f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}"{extra}>{escape(str(s))}</text>\n'


def sweep_svg(curve: SweepCurve, highlight: Optional[float] = 0.05, width: int = 640, height: int = 420) -> str:
    """PPV and NPV against the prior on a log-scaled axis.

    Priors of 0 cannot sit on a log axis and are skipped, as are undefined
    posteriors. ``highlight`` adds markers at that prior.
    """
    left, right, top, bottom = 70, 20, 30, 60
    pw, ph = width - left - right, height - top - bottom
    pts = [p for p in curve.points if p.prior > 0]
    if not pts:
        raise ValueError("sweep has no positive priors to plot")
    lo = math.floor(math.log10(pts[0].prior))
    hi = math.ceil(math.log10(pts[-1].prior))
    if hi == lo:
        hi = lo + 1

    def sx(prior):
        return left + (math.log10(prior) - lo) / (hi - lo) * pw

    def sy(value):
        return top + (1.0 - value) * ph

    out = [_HEAD.format(w=width, h=height)]
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>\n')
    for e in range(lo, hi + 1):
        x = sx(10.0**e)
        out.append(f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{top + ph}" stroke="#ddd"/>\n')
        out.append(_text(x, top + ph + 16, f"1e{e}"))
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = sy(tick)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>\n')
        out.append(_text(left - 8, y + 4, f"{tick:.2f}", anchor="end"))
    out.append(_text(left + pw / 2, height - 15, "Prior probability of deception (log scale)"))
    out.append(_text(18, top + ph / 2, "Posterior probability",
                     extra=f' transform="rotate(-90 18 {top + ph / 2:.2f})"'))

    for name, colour in (("ppv", "#c0392b"), ("npv", "#2471a3")):
        coords = [f"{sx(p.prior):.2f},{sy(getattr(p, name)):.2f}" for p in pts if getattr(p, name) is not None]
        if coords:
            out.append(f'<polyline id="{name}" fill="none" stroke="{colour}" stroke-width="2" '
                       f'points="{" ".join(coords)}"/>\n')

    if highlight is not None and highlight > 0 and 10.0**lo <= highlight <= 10.0**hi:
        x = sx(highlight)
        for fn, colour, name in ((positive_predictive_value, "#c0392b", "PPV"),
                                 (negative_predictive_value, "#2471a3", "NPV")):
            try:
                v = fn(curve.test, highlight)
            except UndefinedPosterior:
                continue
            out.append(f'<circle class="highlight" cx="{x:.2f}" cy="{sy(v):.2f}" r="4" fill="{colour}"/>\n')
            out.append(_text(x + 6, sy(v) - 6, f"{name} {percent(v)}", anchor="start", extra=f' fill="{colour}"'))
    out.append(_text(left + 10, top + 16, "PPV", anchor="start", extra=' fill="#c0392b"'))
    out.append(_text(left + 50, top + 16, "NPV", anchor="start", extra=' fill="#2471a3"'))
    out.append("</svg>\n")
    return "".join(out)


def tree_svg(tree: EventTree, decimals: int = 4, width: int = 720, height: int = 380) -> str:
    """Event tree with counts on every node and posteriors on the leaves."""
    out = [_HEAD.format(w=width, h=height)]
    root_xy = (90, height / 2)
    out.append(_text(root_xy[0], root_xy[1] - 8, tree.root.label))
    out.append(_text(root_xy[0], root_xy[1] + 8, number(tree.root.count, decimals)))

    branches = [b for b in tree.root.children if b.probability > 0]
    slots = len(branches)
    for i, branch in enumerate(branches):
        by = height * (i + 0.5) / slots
        bx = 320
        out.append(f'<line x1="{root_xy[0] + 45}" y1="{root_xy[1]:.2f}" x2="{bx - 60}" y2="{by:.2f}" stroke="#444"/>\n')
        out.append(_text((root_xy[0] + bx) / 2, (root_xy[1] + by) / 2 - 6, f"p={number(branch.probability, decimals)}"))
        out.append(_text(bx, by - 8, branch.label))
        out.append(_text(bx, by + 8, number(branch.count, decimals)))
        for j, leaf in enumerate(branch.children):
            ly = by + (j - 0.5) * (height / slots) * 0.5
            lx = 560
            out.append(f'<line x1="{bx + 50}" y1="{by:.2f}" x2="{lx - 70}" y2="{ly:.2f}" stroke="#444"/>\n')
            out.append(_text((bx + lx) / 2, (by + ly) / 2 - 6, f"p={number(leaf.probability, decimals)}"))
            post = "PPV" if leaf.outcome in ("TP", "FP") else "NPV"
            out.append(_text(lx, ly - 8, f"{leaf.label} ({leaf.outcome})"))
            out.append(_text(lx, ly + 8, number(leaf.count, decimals)))
            out.append(_text(lx + 70, ly + 8, f"{post} {percent(leaf.posterior)}", anchor="start"))
    out.append("</svg>\n")
    return "".join(out)
