import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from screening_audit import io
from screening_audit.bayes import ADDS_TEST, TestCharacteristics, prevalence_sweep
from screening_audit.errors import InvalidSpec
from screening_audit.replica import DatasetSpec, generate_synthetic_dataset
from screening_audit.replica.protocols import GROUPED, FoldResult, ProtocolSummary


def test_sweep_round_trip(tmp_path):
    curve = prevalence_sweep(ADDS_TEST, np.geomspace(1e-5, 0.5, 37).tolist())
    io.write_sweep_csv(tmp_path / "s.csv", curve)
    assert io.read_sweep_csv(tmp_path / "s.csv", ADDS_TEST) == curve
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "prior,ppv,npv"


def test_sweep_undefined_is_empty_field(tmp_path):
    perfect = TestCharacteristics(1.0, 1.0)
    curve = prevalence_sweep(perfect, [0.0, 0.5, 1.0])
    io.write_sweep_csv(tmp_path / "s.csv", curve)
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[1] == "0.0,,1.0"
    assert lines[3] == "1.0,1.0,"
    assert io.read_sweep_csv(tmp_path / "s.csv", perfect) == curve


@given(st.lists(st.floats(0, 1, allow_subnormal=False), min_size=1, max_size=20, unique=True))
def test_sweep_round_trip_any_grid(tmp_path_factory, priors):
    path = tmp_path_factory.mktemp("sweep") / "s.csv"
    curve = prevalence_sweep(ADDS_TEST, sorted(priors))
    io.write_sweep_csv(path, curve)
    assert io.read_sweep_csv(path, ADDS_TEST) == curve


def test_replicates_round_trip(tmp_path):
    counts = np.array([[37, 232, 13, 718], [40, 229, 11, 720]])
    io.write_replicates_csv(tmp_path / "r.csv", counts)
    assert np.array_equal(io.read_replicates_csv(tmp_path / "r.csv"), counts)


def test_protocol_round_trip(tmp_path):
    s = ProtocolSummary(GROUPED, [FoldResult(i, 100 / 3 * i, 200 / 7, 13, 13) for i in range(1, 4)])
    io.write_protocol_csv(tmp_path / "p.csv", s)
    back = io.read_protocol_csv(tmp_path / "p.csv", GROUPED)
    assert back.truthful == s.truthful and back.deceptive == s.deceptive
    assert back.std_truthful == s.std_truthful


def test_side_by_side_layout(tmp_path):
    g = ProtocolSummary(GROUPED, [FoldResult(i, 70.0, 75.0, 13, 13) for i in range(1, 10)])
    l = ProtocolSummary("LeakedSplit", [FoldResult(i, 95.0, 96.0, 52, 52) for i in range(1, 11)])
    io.write_table2_csv(tmp_path / "t.csv", g, l)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "fold,grouped_T,grouped_D,leaked_T,leaked_D"
    assert lines[10] == "10,,,95.0,96.0"
    assert lines[-2] == "mean,70.0,75.0,95.0,96.0"


def test_dataset_round_trip(tmp_path):
    ds = generate_synthetic_dataset(DatasetSpec(n_participants=4, n_deceptive=2, target_total_vectors=4 * 13 * 3))
    io.write_dataset_csv(tmp_path / "d.csv", ds)
    back = io.read_dataset_csv(tmp_path / "d.csv")
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)
    assert back.gender_column == ds.gender_column
    assert [(p.id, p.role, p.gender) for p in back.participants] == [(p.id, p.role, p.gender) for p in ds.participants]


def test_dataset_bad_label(tmp_path):
    (tmp_path / "d.csv").write_text("participant_id,question,label,f1\n1,1,Maybe,0.5\n")
    with pytest.raises(InvalidSpec):
        io.read_dataset_csv(tmp_path / "d.csv")


def test_grouped_csv(tmp_path):
    (tmp_path / "g.csv").write_text("subject,name,x,y\na,foo,1,2\na,bar,3,4\nb,baz,5,6\n")
    x, groups, names = io.read_grouped_csv(tmp_path / "g.csv", "subject")
    assert names == ["x", "y"] and list(groups) == ["a", "a", "b"]
    assert x.shape == (3, 2)
    with pytest.raises(InvalidSpec):
        io.read_grouped_csv(tmp_path / "g.csv", "participant_id")


def test_json_is_canonical(tmp_path):
    io.write_json(tmp_path / "a.json", {"b": np.float64(0.5), "a": [np.int64(3), float("nan")]})
    assert (tmp_path / "a.json").read_text() == '{\n  "a": [\n    3,\n    null\n  ],\n  "b": 0.5\n}\n'
