"""Sample-size diagnostics for person-grouped training data.

Three checks: whether there are fewer independent groups than feature
dimensions, how strongly segments cluster within their group (one-way ICC),
and how many independent observations the clustered data are worth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InsufficientGroups, InvalidSpec

__all__ = [
    "DimensionalityCheck",
    "DiagnosticReport",
    "curse_of_dimensionality_check",
    "intraclass_correlation",
    "effective_sample_size",
    "diagnose",
]


@dataclass(frozen=True)
class DimensionalityCheck:
    n_groups: int
    n_features: int
    flagged: bool
    ratio: float


def curse_of_dimensionality_check(n_groups: int, n_features: int) -> DimensionalityCheck:
    """Flag data with fewer independent groups than feature dimensions."""
    if n_groups <= 0 or n_features <= 0:
        raise InvalidSpec("n_groups and n_features must be positive")
    return DimensionalityCheck(n_groups, n_features, n_groups < n_features, n_groups / n_features)


def _icc_per_feature(x: np.ndarray, codes: np.ndarray, k: int) -> np.ndarray:
    n = x.shape[0]
    sizes = np.bincount(codes, minlength=k).astype(float)
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, codes, x)
    means = sums / sizes[:, None]
    grand = x.mean(axis=0)
    ss_between = (sizes[:, None] * (means - grand) ** 2).sum(axis=0)
    ss_within = ((x - means[codes]) ** 2).sum(axis=0)
    ms_between = ss_between / (k - 1)
    ms_within = ss_within / (n - k)
    m_bar = n / k
    with np.errstate(divide="ignore", invalid="ignore"):
        icc = (ms_between - ms_within) / (ms_between + (m_bar - 1.0) * ms_within)
    # perfect within-group agreement; constant columns carry no information
    icc = np.where((ms_within == 0) & (ms_between > 0), 1.0, icc)
    icc = np.where((ms_within == 0) & (ms_between == 0), np.nan, icc)
    return icc


def intraclass_correlation(data, groups=None, columns=None) -> float:
    """One-way random-effects ICC(1), averaged over feature columns.

    ``data`` is either a :class:`~screening_audit.replica.SyntheticDataset`
    (grouped by participant, gender column excluded) or a 2-D array with a
    matching ``groups`` vector. For each column::

        ICC = (MSB - MSW) / (MSB + (m - 1) * MSW)

    with ``m`` the mean group size. Negative estimates are kept; the result
    is clamped to [-1, 1].
    """
    if groups is None:
        if not hasattr(data, "participant_ids"):
            raise InvalidSpec("groups are required when data is a plain array")
        groups = data.participant_ids
        if columns is None:
            columns = data.behavioural_columns
        x = data.features
    else:
        x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if columns is not None:
        x = x[:, np.asarray(columns)]
    groups = np.asarray(groups)
    if groups.shape[0] != x.shape[0]:
        raise InvalidSpec("groups and data have different lengths")
    _, codes = np.unique(groups, return_inverse=True)
    k = int(codes.max()) + 1 if codes.size else 0
    if k < 2:
        raise InsufficientGroups("ICC needs at least 2 groups")
    if np.bincount(codes).min() < 2:
        raise InsufficientGroups("ICC needs at least 2 segments in every group")

    icc = _icc_per_feature(x, codes, k)
    if np.all(np.isnan(icc)):
        return 1.0
    return float(np.clip(np.nanmean(icc), -1.0, 1.0))


def effective_sample_size(n_segments: float, n_groups: int, icc: float) -> float:
    """Segments discounted by the design effect ``1 + (m - 1) * icc``.

    Negative ICC values are treated as 0. Written as ``n k / (k + (n - k) icc)``,
    which equals the design-effect form and hits both endpoints exactly.
    """
    if n_groups < 1:
        raise InvalidSpec("n_groups must be >= 1")
    if n_segments < n_groups:
        raise InvalidSpec("n_segments must be at least n_groups")
    if icc > 1:
        raise InvalidSpec("icc must be <= 1")
    rho = max(float(icc), 0.0)
    n, k = float(n_segments), float(n_groups)
    return n * k / (k + (n - k) * rho)


@dataclass
class DiagnosticReport:
    n_groups: int
    n_features: int
    n_segments: float
    cod_flag: bool
    cod_ratio: float
    icc: float
    effective_sample_size: float
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n_groups": self.n_groups,
            "n_features": self.n_features,
            "n_segments": self.n_segments,
            "cod_flag": self.cod_flag,
            "cod_ratio": self.cod_ratio,
            "icc": self.icc,
            "effective_sample_size": self.effective_sample_size,
            "notes": list(self.notes),
        }


def diagnose(data, groups=None, columns=None, holdout: int = 0,
             n_features: Optional[int] = None) -> DiagnosticReport:
    """Run all three checks.

    ``holdout`` groups are assumed reserved for testing: the
    dimensionality check and the effective sample size describe the
    remaining training groups, while the ICC is estimated from every group.
    """
    if groups is None:
        g = np.asarray(data.participant_ids)
        width = data.n_features
    else:
        g = np.asarray(groups)
        width = np.asarray(data).shape[1] if np.asarray(data).ndim == 2 else 1
        if columns is not None:
            width = len(columns)
    n_features = width if n_features is None else n_features
    icc = intraclass_correlation(data, groups, columns)

    n_total_groups = len(np.unique(g))
    n_groups = n_total_groups - int(holdout)
    if n_groups < 1:
        raise InsufficientGroups(f"holding out {holdout} of {n_total_groups} groups leaves none for training")
    n_segments = len(g) * n_groups / n_total_groups
    cod = curse_of_dimensionality_check(n_groups, n_features)
    ess = effective_sample_size(n_segments, n_groups, icc)

    notes = []
    if cod.flagged:
        notes.append(f"{n_groups} independent groups < {n_features} features: feature space is sparse")
    if icc > 0.05:
        notes.append(f"segments within a group are correlated (ICC {icc:.3f}); samples are not i.i.d.")
    if icc < 0:
        notes.append("negative ICC estimate; effective sample size computed with ICC = 0")
    notes.append(f"{n_segments:.0f} segments carry the information of about {ess:.1f} independent ones")
    return DiagnosticReport(n_groups, n_features, n_segments, cod.flagged, cod.ratio, icc, ess, notes)
