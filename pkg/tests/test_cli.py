import numpy as np
import pytest

from rankfill import cli, data_io

from conftest import lowrank_shapes_image, three_region_phantom


@pytest.fixture(autouse=True)
def quiet_tau3_warning():
    # the default tau3 sits just past the strict bound and warns by design
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


@pytest.fixture
def pgm(tmp_path):
    path = tmp_path / "clean.pgm"
    data_io.save_image(path, lowrank_shapes_image(32))
    return path


def _parse_summary(captured):
    line = captured.out.strip().splitlines()[-1]
    return dict(part.split("=") for part in line.split())


def test_complete_subcommand(pgm, tmp_path, capsys):
    out = tmp_path / "out.pgm"
    trace_csv = tmp_path / "trace.csv"
    code = cli.main([
        "complete", "--input", str(pgm), "--output", str(out),
        "--sr", "0.5", "--seed", "3", "--reference", str(pgm),
        "--trace", str(trace_csv),
    ])
    assert code == cli.EXIT_OK
    summary = _parse_summary(capsys.readouterr())
    assert summary["status"] == "converged"
    assert int(summary["iters"]) <= 1000
    assert float(summary["psnr"]) > 15.0
    assert out.exists()
    lines = trace_csv.read_text().splitlines()
    assert len(lines) == int(summary["iters"]) + 1


def test_complete_with_saved_mask(pgm, tmp_path, capsys):
    mask = data_io.make_mask(32, 32, 0.5, seed=3)
    mask_path = tmp_path / "m.mask"
    data_io.save_mask(mask_path, mask)
    out = tmp_path / "out.pgm"
    code = cli.main([
        "complete", "--input", str(pgm), "--output", str(out),
        "--mask", str(mask_path), "--reference", str(pgm),
    ])
    assert code == cli.EXIT_OK
    assert float(_parse_summary(capsys.readouterr())["psnr"]) > 15.0


def test_complete_trace_byte_reproducible(pgm, tmp_path):
    traces = []
    for name in ("t1.csv", "t2.csv"):
        trace = tmp_path / name
        code = cli.main([
            "complete", "--input", str(pgm), "--output", str(tmp_path / "o.pgm"),
            "--sr", "0.5", "--seed", "3", "--trace", str(trace),
        ])
        assert code == cli.EXIT_OK
        traces.append(trace.read_bytes())
    assert traces[0] == traces[1]


def test_complete_missing_input(tmp_path, capsys):
    code = cli.main([
        "complete", "--input", str(tmp_path / "nope.pgm"),
        "--output", str(tmp_path / "o.pgm"), "--sr", "0.5",
    ])
    assert code == cli.EXIT_IO
    assert "stage=load" in capsys.readouterr().err


def test_complete_bad_params(pgm, tmp_path, capsys):
    code = cli.main([
        "complete", "--input", str(pgm), "--output", str(tmp_path / "o.pgm"),
        "--sr", "0.5", "--tau1", "0.5",
    ])
    assert code == cli.EXIT_PARAMS
    assert "stage=params" in capsys.readouterr().err


def test_complete_bad_sampling_rate(pgm, tmp_path, capsys):
    code = cli.main([
        "complete", "--input", str(pgm), "--output", str(tmp_path / "o.pgm"),
        "--sr", "0.0",
    ])
    assert code == cli.EXIT_PARAMS
    assert "stage=params" in capsys.readouterr().err


def test_complete_sr_and_mask_exclusive(pgm, tmp_path):
    with pytest.raises(SystemExit):
        cli.main([
            "complete", "--input", str(pgm), "--output", str(tmp_path / "o.pgm"),
            "--sr", "0.5", "--mask", "m.mask",
        ])


def test_segment_subcommand(tmp_path, capsys):
    clean = tmp_path / "ph.pgm"
    data_io.save_image(clean, three_region_phantom(48))
    out = tmp_path / "seg.pgm"
    code = cli.main([
        "segment", "--input", str(clean), "--output", str(out),
        "--k", "3", "--noise-level", "0.1", "--seed", "0",
        "--palette", "0.0,0.5,1.0",
    ])
    assert code == cli.EXIT_OK
    summary = _parse_summary(capsys.readouterr())
    assert float(summary["ssim"]) > 0.5
    seg = data_io.load_image(out)
    assert set(np.unique(np.round(seg * 2))) <= {0.0, 1.0, 2.0}


def test_segment_noiseless_path(tmp_path, capsys):
    clean = tmp_path / "ph.pgm"
    data_io.save_image(clean, three_region_phantom(48))
    out = tmp_path / "seg.pgm"
    code = cli.main([
        "segment", "--input", str(clean), "--output", str(out), "--k", "3",
    ])
    assert code == cli.EXIT_OK
    assert float(_parse_summary(capsys.readouterr())["ssim"]) > 0.9


def test_segment_bad_k(tmp_path, capsys):
    clean = tmp_path / "tiny.pgm"
    data_io.save_image(clean, np.full((4, 4), 0.5))
    code = cli.main([
        "segment", "--input", str(clean), "--output", str(tmp_path / "o.pgm"),
        "--k", "20",
    ])
    assert code == cli.EXIT_PARAMS
    assert "stage=cluster" in capsys.readouterr().err


def test_metrics_subcommand(tmp_path, capsys, rng):
    ref = tmp_path / "ref.pgm"
    test = tmp_path / "test.pgm"
    im = np.round(rng.random((24, 24)) * 255) / 255.0
    data_io.save_image(ref, im)
    data_io.save_image(test, np.clip(im + 0.05, 0.0, 1.0))
    code = cli.main(["metrics", "--reference", str(ref), "--test", str(test)])
    assert code == cli.EXIT_OK
    summary = _parse_summary(capsys.readouterr())
    assert 15.0 < float(summary["psnr"]) < 40.0
    assert 0.0 < float(summary["ssim"]) <= 1.0


def test_metrics_identical_images(tmp_path, capsys, rng):
    ref = tmp_path / "ref.pgm"
    data_io.save_image(ref, rng.random((16, 16)))
    code = cli.main(["metrics", "--reference", str(ref), "--test", str(ref)])
    assert code == cli.EXIT_OK
    summary = _parse_summary(capsys.readouterr())
    assert summary["psnr"] == "inf"
    assert float(summary["ssim"]) == pytest.approx(1.0)


def test_complete_ppm_round_trip(tmp_path, capsys, rng):
    im = np.stack([lowrank_shapes_image(24)] * 3)
    src = tmp_path / "c.ppm"
    data_io.save_image(src, im)
    out = tmp_path / "o.ppm"
    code = cli.main([
        "complete", "--input", str(src), "--output", str(out),
        "--sr", "0.6", "--reference", str(src),
    ])
    assert code == cli.EXIT_OK
    assert data_io.load_image(out).shape == (3, 24, 24)
