import math

import pytest

import crimelab


def test_version_and_categories():
    assert crimelab.__version__ == "0.1.0"
    names = crimelab.category_names()
    assert len(names) == 15
    assert names == sorted(names)
    assert "traffic-accident" in names


def test_accuracy():
    assert crimelab.accuracy([0, 1, 2, 1], [0, 1, 1, 1]) == pytest.approx(0.75)


def test_paired_t_test_known_case():
    a = [1.0, 2.0, 3.0, 4.0, 5.0]
    b = [0.5, 1.0, 2.0, 3.0, 4.0]
    r = crimelab.paired_t_test(a, b)
    assert r["n"] == 5
    assert r["df"] == 4
    assert r["mean_diff"] == pytest.approx(0.7)
    # d = [0.5, 1, 1, 1, 1], sd = sqrt(0.05), t = 0.7 / sqrt(0.05 / 5)
    assert r["t"] == pytest.approx(0.7 / math.sqrt(0.05 / 5))
    assert 0.0 < r["p"] < 1.0
    assert r["decision"].startswith(("reject", "cannot reject"))


def test_config_error_maps_to_value_error():
    with pytest.raises(ValueError):
        crimelab.run_experiment({"dataset": "x.csv", "bogus_key": 1})


def test_synth_roundtrip_experiment(tmp_path):
    csv = tmp_path / "blobs.csv"
    crimelab.generate_synthetic_csv([60, 40], csv, dims=2, spread=0.05, seed=7)
    config = {
        "dataset": str(csv),
        "seed": 11,
        "model": {"kind": "knn", "knn_k": 3},
        "protocol": "cv10",
        "out_dir": str(tmp_path / "run"),
    }
    report = crimelab.run_experiment(config, threads=2)
    assert report["data"]["rows"] == 100
    assert report["data"]["classes"] == 2
    assert len(report["cv"]["fold_accuracies"]) == 10
    # tight, well-separated blobs: the pooled confusion should be near-diagonal
    assert report["cv"]["mean_accuracy"] > 0.9
    acc = report["cv"]["pooled"]["accuracy"]
    cm = report["cv"]["pooled"]["confusion"]["rows_true_cols_pred"]
    diag = sum(cm[i][i] for i in range(len(cm)))
    total = sum(sum(row) for row in cm)
    assert acc == diag / total

    # byte-level determinism across thread counts
    report_again = crimelab.run_experiment(config, threads=1)
    assert report_again == report


def test_files_written(tmp_path):
    csv = tmp_path / "blobs.csv"
    crimelab.generate_synthetic_csv([30, 30], csv, dims=2, spread=0.1, seed=3)
    out = tmp_path / "run"
    config = {
        "dataset": str(csv),
        "seed": 5,
        "model": {"kind": "decision_tree"},
        "protocol": "cv10",
        "n_folds": 5,
        "out_dir": str(out),
    }
    crimelab.run_experiment_to_files(config)
    for name in ("report.json", "timings.json", "cv_folds.csv", "confusion_cv.csv"):
        assert (out / name).is_file()
