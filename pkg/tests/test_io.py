import json
import logging

import numpy as np
import pytest

from satake_lab.charcalc import DominantWeight, adams_decompose, tensor_decompose
from satake_lab import io


def test_config_text_round_trip():
    cfg = io.ExperimentConfig("lowzeros", rank=3, weight="1,0,0", delta=0.75, emit_plot=True, seed=11)
    again = io.ExperimentConfig.from_text(cfg.to_text())
    assert again == cfg
    assert again.digest() == cfg.digest()
    assert cfg.updated(seed=12).digest() != cfg.digest()
    assert cfg.updated(seed=None) == cfg


def test_config_parsing_rules():
    text = "subcommand = satotate\nsamples=1e6 # million\nemit-plot=yes\n\n# note\nmax_weight=4\n"
    cfg = io.ExperimentConfig.from_text(text)
    assert cfg.samples == 1_000_000 and cfg.emit_plot is True and cfg.max_weight == 4
    with pytest.raises(ValueError, match="line 2: unknown key 'colour'"):
        io.ExperimentConfig.from_text("subcommand=afe\ncolour=red\n")
    with pytest.raises(ValueError, match="line 1"):
        io.ExperimentConfig.from_text("subcommand afe\n")
    with pytest.raises(ValueError, match="subcommand"):
        io.ExperimentConfig.from_text("rank=2\n")
    with pytest.raises(ValueError, match="boolean"):
        io.ExperimentConfig("afe", emit_plot="maybe")
    with pytest.raises(ValueError):
        io.ExperimentConfig("afe", tolerance_profile="lax")
    assert io.ExperimentConfig("afe", grid="5, 5,30").int_list("grid") == [5, 5, 30]


def test_digest_is_sha256_of_text():
    import hashlib
    cfg = io.ExperimentConfig("afe")
    assert cfg.digest() == hashlib.sha256(cfg.to_text().encode()).hexdigest()


def test_result_record_json(tmp_path):
    rec = io.ResultRecord.new(io.ExperimentConfig("afe"))
    rec.results.update(value=np.float64(-1.46), count=np.int64(3))
    rec.verdicts["ok"] = bool(np.bool_(True))
    line = rec.to_json()
    assert json.loads(line)["results"]["count"] == 3
    assert io.ResultRecord.from_json(line) == rec
    assert rec.passed
    rec.verdicts["bad"] = False
    assert not rec.passed
    ledger = tmp_path / "sub" / "results.jsonl"
    io.append_record(ledger, rec)
    io.append_record(ledger, rec)
    assert io.read_records(ledger) == [rec, rec]
    assert rec.experiment_id.startswith("afe-")


def test_csv_meta_round_trip(tmp_path):
    path = io.write_csv(tmp_path / "x.csv", ["a", "b"], [(1, 0.5), (2, True)], {"seed": 3, "flag": False})
    meta, rows = io.read_csv(path)
    assert meta == {"seed": "3", "flag": "false"}
    assert rows == [{"a": "1", "b": "0.5"}, {"a": "2", "b": "true"}]


def test_ingest_zeros(tmp_path, caplog):
    path = tmp_path / "z.txt"
    path.write_text("# L mine\n3.0\n1.0\n")
    with caplog.at_level(logging.WARNING):
        zeros = io.ingest_zeros(path)
    assert zeros.source == "mine" and zeros.ordinates.tolist() == [1.0, 3.0]
    assert "sorted" in caplog.text
    path.write_text("1.0\n2.x\n")
    with pytest.raises(ValueError, match="line 2"):
        io.ingest_zeros(path)
    with pytest.raises(FileNotFoundError):
        io.ingest_zeros(tmp_path / "absent.txt")


def test_parse_satake_text():
    table = io.parse_satake_text("3 0.5 -0.5\n2 1.0 -1.0\n3 0.0 0.0  # second member\n")
    assert list(table) == [2, 3]
    assert table[3].shape == (2, 2)
    assert io.parse_satake_text("5 3.0 3.2831853071795862\n")[5].shape == (1, 2)  # sums to 2 pi
    for bad, msg in [("2 x 1\n", "line 1"), ("2\n", "line 1"), ("1 0 0\n", "line 1"),
                     ("2 0 0\n3 0 0 0\n", "line 2: expected 2"), ("2 0.1 0.1\n", "sum to 0")]:
        with pytest.raises(ValueError, match=msg):
            io.parse_satake_text(bad)


def test_decomposition_cache_is_transparent(tmp_path):
    cache = io.DecompositionCache(tmp_path)
    w = DominantWeight((2, 1, 0))
    first = cache.adams(w, 3)
    assert first == adams_decompose(w, 3)
    assert len(list(tmp_path.iterdir())) == 1
    assert io.DecompositionCache(tmp_path).adams(w, 3) == first
    a, b = DominantWeight((1, 0, 0)), DominantWeight((1, 1, 0))
    assert cache.tensor(a, b) == tensor_decompose(a, b)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["adams-2_1_0-k3.txt", "tensor-1_0_0-1_1_0.txt"]


def test_cache_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv(io.CACHE_ENV, str(tmp_path))
    assert io.cache_dir() == tmp_path
    monkeypatch.delenv(io.CACHE_ENV)
    assert io.cache_dir().name == "satake-lab"
