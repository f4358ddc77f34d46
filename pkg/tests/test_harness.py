import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radnls.cli import main
from radnls.corpus import CORPUS_KINDS, corpus, make_data, profile
from radnls.harness import (
    COMMANDS, OPERATIONS, REGISTRY, Manifest, ManifestError, Scenario, parse_grid, register,
)
from radnls.io import FormatError, field_to_csv, read_field, write_field
from radnls.lp_decomp import spatial_cutoff_values
from radnls.norms import weighted_norm
from radnls.radial_spectral import RadialGrid, sample_function

G = RadialGrid(32.0, 512)


@given(st.integers(0, 2 ** 64 - 1), st.sampled_from(CORPUS_KINDS))
def test_corpus_deterministic(seed, kind):
    a, b = corpus(seed, kind, G), corpus(seed, kind, G)
    assert a.samples.tobytes() == b.samples.tobytes()


def test_corpus_grid_independent():
    f = profile(3, "gaussian_mix")
    fine = corpus(3, "gaussian_mix", G.refined())
    assert np.allclose(fine.values[1::2], corpus(3, "gaussian_mix", G).values, rtol=0, atol=0)
    assert np.allclose(f(G.r), corpus(3, "gaussian_mix", G).values)


def test_corpus_errors():
    with pytest.raises(ValueError):
        corpus(-1, "gaussian_mix", G)
    with pytest.raises(ValueError):
        corpus(0, "noise", G)


def test_shell_bump_support():
    f = corpus(5, "shell_bump", G, j=2)
    outside = (G.r < 2.0) | (G.r > 8.0)
    assert np.all(f.samples[outside] == 0) and np.any(f.samples != 0)
    assert np.allclose(np.abs(f.values) / np.abs(f.values).max(),
                       spatial_cutoff_values(G.r, 2, "chi") / spatial_cutoff_values(G.r, 2, "chi").max())


@pytest.mark.parametrize("kind", CORPUS_KINDS)
def test_weighted_half_norm_finite(kind):
    vals = [weighted_norm(corpus(s, kind, G), 0.5) for s in range(20)]
    assert np.all(np.isfinite(vals)) and min(vals) > 0


def test_make_data():
    assert np.all(make_data({"kind": "zero"}, G).samples == 0)
    g = make_data(None, G)
    assert g.values[0] == pytest.approx(np.exp(-G.r[0] ** 2 / 2))
    assert make_data({"kind": "random_bandlimited", "seed": 4}, G).samples.tobytes() == \
        corpus(4, "random_bandlimited", G).samples.tobytes()


def test_field_container_roundtrip(tmp_path):
    f = corpus(1, "random_bandlimited", G)
    write_field(tmp_path / "f.radf", f)
    back = read_field(tmp_path / "f.radf")
    assert back.grid == G and back.samples.tobytes() == f.samples.tobytes()
    raw = (tmp_path / "f.radf").read_bytes()
    (tmp_path / "bad.radf").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(FormatError):
        read_field(tmp_path / "bad.radf")
    (tmp_path / "short.radf").write_bytes(raw[:-8])
    with pytest.raises(FormatError):
        read_field(tmp_path / "short.radf")
    field_to_csv(tmp_path / "f.csv", f)
    rows = (tmp_path / "f.csv").read_text().splitlines()
    assert rows[0] == "r,re,im" and len(rows) == G.n + 1


def test_manifest_parsing(tmp_path):
    p = tmp_path / "m.yaml"
    p.write_text("command: conserve\ngrid: 1024x16\ndt: 2.0e-3\nparams:\n  conservation: {T: 0.5}\n")
    m = Manifest.load(p)
    assert m.grid == (1024, 16.0) and m.dt == 2e-3 and m.params["conservation"]["T"] == 0.5
    assert parse_grid({"M": 64, "R": 4}) == (64, 4.0)
    for bad in ("grid: 1024\n", "colour: red\n", "dt: -1\n", "params: [1]\n", "- a\n"):
        p.write_text(bad)
        with pytest.raises(ManifestError):
            Manifest.load(p)


def test_registry():
    assert set(COMMANDS) <= set(REGISTRY)
    for name, sc in REGISTRY.items():
        assert all(c in OPERATIONS for c in sc.checks())
    with pytest.raises(ValueError):
        register(Scenario("conserve", "conserve"))
    with pytest.raises(ManifestError):
        Scenario("x", "conserve", Manifest(checks=["picard"]))
    with pytest.raises(ManifestError):
        Scenario("x", "launch")


def test_cli_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["launch"])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err


def test_cli_bad_grid(capsys):
    assert main(["oracle", "--grid", "abc"]) == 2
    assert "usage" in capsys.readouterr().err


def test_cli_conserve_zero_field(tmp_path, capsys):
    man = tmp_path / "zero.yaml"
    man.write_text("data: {kind: zero}\ngrid: 512x32\noutput: {snapshots: true}\n")
    assert main(["conserve", "--manifest", str(man), "--out", str(tmp_path / "o")]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "PASS criterion 1" in out
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    drifts = {c["name"]: c["value"] for c in summary["checks"]["conservation"]}
    assert drifts["mass drift"] == drifts["energy drift"] == drifts["P drift"] == 0
    assert read_field(tmp_path / "o" / "initial.radf").grid == RadialGrid(32.0, 512)


def test_cli_deterministic_artifacts(tmp_path):
    args = ["oracle", "--grid", "1024x32", "--quiet"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("oracle.json", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_transform_id_manifest_tolerance(tmp_path):
    man = tmp_path / "t.yaml"
    man.write_text("checks: [transforms]\ngrid: 1024x32\nparams:\n  transforms: {tol: 1.0e-3}\n")
    assert main(["transform-id", "--manifest", str(man), "--out", str(tmp_path), "--quiet"]) == 0


def test_cli_failure_exit_names_check(tmp_path, capsys):
    man = tmp_path / "t.yaml"
    man.write_text("checks: [transforms]\ngrid: 1024x32\nparams:\n  transforms: {tol: 1.0e-20}\n")
    assert main(["transform-id", "--manifest", str(man), "--out", str(tmp_path), "--quiet"]) == 1
    assert "involution" in capsys.readouterr().err


def test_manifest_command_mismatch(tmp_path):
    man = tmp_path / "t.yaml"
    man.write_text("command: lwp\n")
    assert main(["oracle", "--manifest", str(man)]) == 2
