"""Text rendering. The only place fractions become rounded percentages."""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional

from .bayes import EventTree, PosteriorReport

UNDEFINED = "undefined"


def round_half_even(value: float, decimals: int = 2) -> Decimal:
    return Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN)


def percent(value: Optional[float], decimals: int = 2) -> str:
    """``0.136937 -> '13.69%'``; ``None`` (an undefined posterior) -> ``'undefined'``."""
    if value is None:
        return UNDEFINED
    return f"{round_half_even(float(value) * 100.0, decimals)}%"


def number(value: Optional[float], decimals: int = 4) -> str:
    if value is None:
        return UNDEFINED
    return str(round_half_even(value, decimals))


def posterior_table(report: PosteriorReport, decimals: int = 2) -> str:
    t = report.test
    jm = report.joint
    ec = report.expected_counts
    p = report.prior.value
    rows = [
        f"Test: sensitivity {percent(t.sensitivity, decimals)}, specificity {percent(t.specificity, decimals)}",
        f"Prior P({t.label_positive}) = {number(p, 6)}, population {number(report.population_size, 0)}",
        "",
        "Joint probabilities",
        f"{'':>14}{t.label_positive:>12}{t.label_negative:>12}",
        f"{'Test +':>14}{number(jm.tp):>12}{number(jm.fp):>12}",
        f"{'Test -':>14}{number(jm.fn):>12}{number(jm.tn):>12}",
        "",
        "Expected counts",
        f"  TP {number(ec.tp, 1)}   FP {number(ec.fp, 1)}   FN {number(ec.fn, 1)}   TN {number(ec.tn, 1)}",
        "",
        f"PPV  P({t.label_positive}|+) = {percent(report.ppv, decimals)}",
        f"NPV  P({t.label_negative}|-) = {percent(report.npv, decimals)}",
        f"P(+) = {percent(report.p_positive, decimals)}",
        f"Referred to secondary screening: {number(report.referrals, 1)}",
    ]
    return "\n".join(rows)


def tree_text(tree: EventTree, decimals: int = 4) -> str:
    """Indented rendering; zero-probability branches are omitted."""
    lines = [f"{tree.root.label}: {number(tree.root.count, decimals)}"]
    for branch in tree.root.children:
        if branch.probability == 0:
            continue
        lines.append(f"  {branch.label} (p={number(branch.probability, decimals)}): {number(branch.count, decimals)}")
        for leaf in branch.children:
            post = "PPV" if leaf.outcome in ("TP", "FP") else "NPV"
            lines.append(
                f"    {leaf.label} {leaf.outcome} (p={number(leaf.probability, decimals)}, "
                f"joint={number(leaf.joint, decimals)}): {number(leaf.count, decimals)}  "
                f"{post}={percent(leaf.posterior)}"
            )
    return "\n".join(lines)
