from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hkens.errors import ConfigError, DataError
from hkens.ingest import (PipelineConfig, impute_missing, load_config, load_csv, load_dataset,
                          parse_config_text, write_csv)

DATA = Path(__file__).resolve().parents[1] / "data" / "breast_cancer_wisconsin.csv"


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_small_table(tmp_path):
    t = load_csv(write(tmp_path, "1,2\n3,4\n5,6\n"), has_header=False)
    assert t.values.shape == (3, 2) and t.n_cols == 2
    assert t.values[2, 1] == 6.0


def test_question_mark_is_missing(tmp_path):
    t = load_csv(write(tmp_path, "a,b\n1,?\n,4\n"))
    assert t.missing.tolist() == [[False, True], [True, False]]


def test_breast_cancer_has_nine_attributes():
    raw = load_csv(DATA, label_column="class")
    d = impute_missing(raw)
    assert d.dim == 9
    assert d.n == 699
    assert raw.missing.sum() == 16
    assert set(d.labels) == {"benign", "malignant"}


def test_label_by_index_and_tab_delimiter(tmp_path):
    t = load_csv(write(tmp_path, "x\ty\tcls\n1\t2\ta\n3\t4\tb\n"), label_column=-1)
    assert t.labels == ["a", "b"] and t.header == ["x", "y"]
    t = load_csv(write(tmp_path, "a,1,2\nb,3,4\n"), label_column=0, has_header=False)
    assert t.labels == ["a", "b"] and t.values.tolist() == [[1, 2], [3, 4]]


def test_errors_name_row_and_column(tmp_path):
    with pytest.raises(DataError, match="row 3"):
        load_csv(write(tmp_path, "a,b\n1,2\n3\n"))
    with pytest.raises(DataError, match="row 2, column 1"):
        load_csv(write(tmp_path, "a,b\n1,x\n"))
    with pytest.raises(DataError, match="non-finite"):
        load_csv(write(tmp_path, "a,b\n1,inf\n"))
    with pytest.raises(DataError):
        load_csv(tmp_path / "missing.csv")
    with pytest.raises(DataError, match="not found"):
        load_csv(write(tmp_path, "a,b\n1,2\n"), label_column="zzz")


def test_impute_examples(tmp_path):
    d = impute_missing(load_csv(write(tmp_path, "1,?,3\n?,?,?\n4,5,6\n"), has_header=False))
    assert d.X.tolist() == [[1, 0, 3], [0, 0, 0], [4, 5, 6]]
    assert np.all(np.isfinite(d.X))


def test_impute_identity_and_idempotent(tmp_path):
    raw = load_csv(write(tmp_path, "1.5,2\n3,4\n"), has_header=False)
    once = impute_missing(raw)
    assert np.array_equal(once.X, raw.values)
    twice = impute_missing(load_csv(_roundtrip(tmp_path, once.X), has_header=False))
    assert np.array_equal(once.X, twice.X)


def _roundtrip(tmp_path, X):
    p = tmp_path / "rt.csv"
    write_csv(p, X)
    return p


def test_standardize_is_opt_in(tmp_path):
    p = write(tmp_path, "1,10\n3,30\n")
    assert load_dataset(p, has_header=False).X.tolist() == [[1, 10], [3, 30]]
    z = load_dataset(p, has_header=False, standardize=True).X
    assert np.allclose(z.mean(axis=0), 0) and np.allclose(z.std(axis=0), 1)


decimals = st.decimals(min_value=-1e6, max_value=1e6, places=6, allow_nan=False, allow_infinity=False)


@given(st.lists(st.lists(decimals, min_size=3, max_size=3), min_size=1, max_size=8))
def test_roundtrip_bit_exact(tmp_path_factory, rows):
    tmp = tmp_path_factory.mktemp("rt")
    p = tmp / "a.csv"
    p.write_text("".join(",".join(str(c) for c in r) + "\n" for r in rows))
    first = load_csv(p, has_header=False).values
    again = load_csv(_roundtrip(tmp, first), has_header=False).values
    assert first.tobytes() == again.tobytes()


def test_config_file_and_overrides(tmp_path):
    p = write(tmp_path, "# run settings\nk = 4\nT = 40\nL: 3\nconsensus = co-association\nbeta = none\n", "cfg.txt")
    cfg = load_config(p, seed=9, k=None)
    assert (cfg.k, cfg.threshold, cfg.ensemble_size, cfg.consensus, cfg.seed) == (4, 40, 3, "co-association", 9)
    assert load_config(p, k=6).k == 6


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_config_text("bogus = 1")
    with pytest.raises(ConfigError):
        parse_config_text("k = four")
    for bad in (dict(k=1), dict(threshold=1), dict(ensemble_size=0), dict(alpha=1.0), dict(k=3, k0=2),
                dict(consensus="vote")):
        with pytest.raises(ConfigError):
            PipelineConfig(**bad).validate()
    with pytest.raises(ConfigError):
        PipelineConfig(d=10).validate(n=100, D=9)
