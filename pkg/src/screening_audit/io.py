"""CSV and JSON artifacts.

Floats are written with ``repr`` so every CSV parses back to the exact value
that was written. Files use ``\\n`` line endings and sorted JSON keys so that
identical runs produce byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .bayes import SweepCurve, SweepPoint, TestCharacteristics
from .errors import InvalidSpec
from .replica.dataset import DECEPTION, LABEL_NAMES, TRUTH, Participant, SyntheticDataset
from .replica.protocols import FoldResult, ProtocolSummary

__all__ = [
    "write_json",
    "read_json",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_replicates_csv",
    "read_replicates_csv",
    "write_protocol_csv",
    "read_protocol_csv",
    "write_table2_csv",
    "write_dataset_csv",
    "read_dataset_csv",
    "read_grouped_csv",
]

_LABEL_CODES = {v: k for k, v in LABEL_NAMES.items()}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _opt_float(text: str):
    return None if text == "" else float(text)


def _write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_rows(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if math.isnan(obj) else float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def write_sweep_csv(path, curve: SweepCurve) -> None:
    """Columns ``prior,ppv,npv``; an undefined posterior is an empty field."""
    _write_rows(path, ["prior", "ppv", "npv"], [[_fmt(p.prior), _fmt(p.ppv), _fmt(p.npv)] for p in curve.points])


def read_sweep_csv(path, test: TestCharacteristics) -> SweepCurve:
    header, rows = _read_rows(path)
    if header != ["prior", "ppv", "npv"]:
        raise InvalidSpec(f"unexpected sweep header {header}")
    points = tuple(SweepPoint(float(r[0]), _opt_float(r[1]), _opt_float(r[2])) for r in rows)
    return SweepCurve(test=test, points=points)


def write_replicates_csv(path, counts: np.ndarray) -> None:
    _write_rows(path, ["replicate", "tp", "fp", "fn", "tn"],
                [[i, *(int(c) for c in row)] for i, row in enumerate(counts)])


def read_replicates_csv(path) -> np.ndarray:
    header, rows = _read_rows(path)
    if header != ["replicate", "tp", "fp", "fn", "tn"]:
        raise InvalidSpec(f"unexpected replicate header {header}")
    return np.array([[int(v) for v in r[1:]] for r in rows], dtype=np.int64).reshape(-1, 4)


def write_protocol_csv(path, summary: ProtocolSummary) -> None:
    """``fold,T,D`` per fold, followed by ``mean`` and ``std`` rows."""
    rows = [[f.fold, _fmt(f.truthful_accuracy), _fmt(f.deceptive_accuracy)] for f in summary.folds]
    rows.append(["mean", _fmt(summary.mean_truthful), _fmt(summary.mean_deceptive)])
    rows.append(["std", _fmt(summary.std_truthful), _fmt(summary.std_deceptive)])
    _write_rows(path, ["fold", "T", "D"], rows)


def read_protocol_csv(path, protocol: str) -> ProtocolSummary:
    header, rows = _read_rows(path)
    if header != ["fold", "T", "D"]:
        raise InvalidSpec(f"unexpected protocol header {header}")
    folds = [
        FoldResult(fold=int(r[0]), truthful_accuracy=float(r[1]), deceptive_accuracy=float(r[2]),
                   n_truthful_questions=0, n_deceptive_questions=0)
        for r in rows if r[0] not in ("mean", "std")
    ]
    return ProtocolSummary(protocol, folds)


def write_table2_csv(path, grouped: ProtocolSummary, leaked: ProtocolSummary) -> None:
    """Both protocols side by side: the layout of the original validation table."""
    n = max(len(grouped.folds), len(leaked.folds))

    def cell(summary, i, attr):
        return _fmt(getattr(summary.folds[i], attr)) if i < len(summary.folds) else ""

    rows = [
        [i + 1, cell(grouped, i, "truthful_accuracy"), cell(grouped, i, "deceptive_accuracy"),
         cell(leaked, i, "truthful_accuracy"), cell(leaked, i, "deceptive_accuracy")]
        for i in range(n)
    ]
    rows.append(["mean", *(_fmt(v) for v in (grouped.mean_truthful, grouped.mean_deceptive,
                                            leaked.mean_truthful, leaked.mean_deceptive))])
    rows.append(["std", *(_fmt(v) for v in (grouped.std_truthful, grouped.std_deceptive,
                                           leaked.std_truthful, leaked.std_deceptive))])
    _write_rows(path, ["fold", "grouped_T", "grouped_D", "leaked_T", "leaked_D"], rows)


def write_dataset_csv(path, dataset: SyntheticDataset) -> None:
    header = ["participant_id", "question", "label"] + [f"f{j + 1}" for j in range(dataset.n_features)]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for pid, q, lab, feats in zip(dataset.participant_ids, dataset.question, dataset.labels, dataset.features):
            writer.writerow([int(pid), int(q), LABEL_NAMES[int(lab)], *map(repr, feats.tolist())])


def read_dataset_csv(path, gender_column="auto") -> SyntheticDataset:
    """Load a segment CSV written by :func:`write_dataset_csv`.

    A participant's role is the label of its segments (majority if mixed).
    With ``gender_column="auto"`` the last feature is taken as the gender
    bit when it is 0/1-valued and constant within every participant.
    """
    header, rows = _read_rows(path)
    if header[:3] != ["participant_id", "question", "label"] or len(header) < 4:
        raise InvalidSpec("dataset CSV needs participant_id, question, label and feature columns")
    if not rows:
        raise InvalidSpec("dataset CSV has no rows")
    pids = np.array([int(r[0]) for r in rows], dtype=np.int64)
    question = np.array([int(r[1]) for r in rows], dtype=np.int64)
    try:
        labels = np.array([_LABEL_CODES[r[2]] for r in rows], dtype=np.int64)
    except KeyError as exc:
        raise InvalidSpec(f"unknown label {exc.args[0]!r}; expected Truth or Deception") from None
    features = np.array([[float(v) for v in r[3:]] for r in rows])

    if gender_column == "auto":
        last = features[:, -1]
        gender_column = None
        if np.isin(last, (0.0, 1.0)).all() and all(
            np.unique(last[pids == p]).size == 1 for p in np.unique(pids)
        ):
            gender_column = features.shape[1] - 1

    participants = []
    for p in np.unique(pids):
        mask = pids == p
        role = DECEPTION if labels[mask].mean() > 0.5 else TRUTH
        gender = int(features[mask, gender_column][0]) if gender_column is not None else 0
        participants.append(Participant(id=int(p), role=role, gender=gender))
    return SyntheticDataset(pids, question, features, labels, participants, gender_column=gender_column)


def read_grouped_csv(path, group_column: str = "participant_id"):
    """Generic CSV with a group-id column: returns ``(features, groups, names)``.

    Every other column that parses as a number is a feature, except
    ``question``; a ``label`` column is ignored.
    """
    header, rows = _read_rows(path)
    if group_column not in header:
        raise InvalidSpec(f"group column {group_column!r} not in CSV header")
    gi = header.index(group_column)
    skip = {gi} | {header.index(c) for c in ("question", "label") if c in header}
    cols = []
    for j, name in enumerate(header):
        if j in skip:
            continue
        try:
            [float(r[j]) for r in rows]
        except ValueError:
            continue
        cols.append(j)
    if not cols:
        raise InvalidSpec("no numeric feature columns found")
    features = np.array([[float(r[j]) for j in cols] for r in rows])
    groups = np.array([r[gi] for r in rows])
    return features, groups, [header[j] for j in cols]
