"""Bundled scenarios, report determinism, and the command line contract.

The three bundled scenarios are frozen end to end: the diagonal pair is
ordinary with an intact base, the irreducible symmetric-group instance
has unit reducibility ideal and a collapsing ordinary quotient, and the
plane tower passes the structural audit and the numerical criterion.
Certificates quoted in the reports are re-verified here from scratch.
"""

import json

import numpy as np
import pytest

from exalg import cli, gma, scenarios, serialize, towers
from exalg.errors import InvariantViolation
from exalg.rings import Ideal, zmod_ring

BUNDLE_DIR = __import__("pathlib").Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="module")
def reports():
    return {name: scenarios.run_scenario(name) for name in scenarios.BUILTIN}


# ---- bundled files ---------------------------------------------------


def test_bundled_files_match_builtin_documents():
    for name, doc in scenarios.BUILTIN.items():
        on_disk = (BUNDLE_DIR / f"{name}.json").read_text()
        assert on_disk == serialize.canonical_json(doc), name


def test_bundled_files_load_as_paths(reports):
    sc = scenarios.load_scenario(BUNDLE_DIR / "diag-ordinary.json")
    assert sc.name == "diag-ordinary" and sc.kind == "psrep"
    rep = scenarios.run_scenario(sc)
    assert rep.canonical() == reports["diag-ordinary"].canonical()


# ---- frozen outcomes -------------------------------------------------


def test_diag_ordinary_report(reports):
    st = reports["diag-ordinary"].stages
    assert reports["diag-ordinary"].verdict == "ok"
    assert st["validate"]["ok"] and st["validate"]["failures"] == []
    assert st["ch"]["dim"] == 2
    assert st["gma"]["e1"].tolist() == [1, 4]
    assert st["gma"]["b_rows"] == 0 and st["gma"]["c_rows"] == 0
    assert st["reducibility"]["zero"] and not st["reducibility"]["unit"]
    o = st["ordinary"]
    assert o["alignment"] == "corner1"
    assert o["rep_ordinary"] and o["witness"] is None
    assert o["psrep_supported"] and o["psrep_ordinary"]
    assert not o["collapsed"] and o["e_ord_dim"] == 2
    assert len(o["j_r_basis"]) == 0


def test_s3_irreducible_report(reports):
    st = reports["s3-irreducible"].stages
    assert st["ch"]["dim"] == 4
    assert st["gma"]["e1"].tolist() == [0, 4, 0, 1]
    assert st["gma"]["b_rows"] == 1 and st["gma"]["c_rows"] == 1
    red = st["reducibility"]
    assert red["unit"] and red["quotient_dim"] == 0 and red["split"]
    assert red["ideal_basis"].tolist() == [[1]]
    o = st["ordinary"]
    assert o["alignment"] == "nonsplit"
    assert not o["rep_ordinary"]
    assert o["witness"]["element"] == 1 and o["witness"]["coordinate"] == "rho12"
    assert not o["psrep_supported"]
    assert o["collapsed"] and o["base_quotient_dim"] == 0
    assert o["j_r_basis"].tolist() == [[1]]


def test_plane_tower_report(reports):
    st = reports["plane-tower-r2"].stages
    assert st["build"]["h_dim"] == 16 and st["build"]["glued_dim"] == 30
    audit = st["audit"]
    for key in (
        "regular_base", "principal_nzd", "both_principal", "embdim_two",
        "both_gorenstein", "colength_matches_r", "consistent",
        "complete_intersection",
    ):
        assert audit[key] is True, key
    # multiplicity one singles out r = 1; this tower has r = 2
    assert audit["multiplicity_one"] is False
    assert audit["eisenstein_colength"] == 2
    crit = st["criterion"]
    assert crit["cotangent_length"] == 2 == crit["eta_colength"]
    assert crit["criterion_met"] and crit["isomorphism"] and crit["complete_intersection"]
    assert crit["presentation_degree"] == 2 and crit["model"] == "rank2"
    replay = st["replay"]
    assert replay["annihilator_vanishes"] and replay["bound_met"] and replay["bound"] == 2


# ---- certificates re-verify ------------------------------------------


def test_quoted_idempotent_re_verifies(reports):
    body = scenarios.BUILTIN["diag-ordinary"]
    st = scenarios._State(scenarios.load_scenario("diag-ordinary"))
    ch = st.get("ch")
    e1 = np.asarray(reports["diag-ordinary"].stages["gma"]["e1"])
    assert np.array_equal(ch.algebra.mul(e1, e1), e1)
    assert np.array_equal(ch.t_el(e1), ch.base.one)
    assert body["kind"] == "psrep"


def test_quoted_witness_re_verifies(reports):
    st = scenarios._State(scenarios.load_scenario("s3-irreducible"))
    ch = st.get("ch")
    rep = reports["s3-irreducible"].stages
    g = gma.gma_decompose(ch, np.asarray(rep["gma"]["e1"]))
    w = rep["ordinary"]["witness"]
    off_diag = (ch.rho(w["element"]) @ g.p12) % ch.algebra.char
    assert off_diag.any()  # the quoted coordinate really is nonzero
    f5 = zmod_ring(5, 1)
    ideal = Ideal(f5, np.asarray(rep["reducibility"]["ideal_basis"]))
    assert ideal.contains(f5.one)


def test_quoted_tower_certificate_re_verifies(reports):
    sc = scenarios.load_scenario("plane-tower-r2")
    st = scenarios._State(sc)
    t = st.get("tower")
    assert np.array_equal(t.T0, np.asarray(reports["plane-tower-r2"].stages["build"]["T0"]))
    assert towers.ideal_colength(st.cache["lam"], towers.tower_eta(t)) == 2


# ---- determinism -----------------------------------------------------


def test_reports_are_bit_identical_across_runs(reports):
    for name in scenarios.BUILTIN:
        again = scenarios.run_scenario(name)
        assert again.canonical() == reports[name].canonical(), name
        assert "timing" not in json.loads(again.canonical())


def test_seed_override_enters_the_report():
    rep = scenarios.run_scenario("diag-ordinary", seed=77, stages=("validate",))
    assert rep.seed == 77
    assert json.loads(rep.canonical())["seed"] == 77


# ---- command line ----------------------------------------------------


def test_pipeline_exit_zero_and_json_stdout(capsys):
    assert cli.main(["pipeline", "diag-ordinary"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == serialize.REPORT_SCHEMA
    assert doc["scenario"] == "diag-ordinary" and doc["verdict"] == "ok"
    # canonical form sorts keys, so compare as sets
    assert set(doc["stages"]) == {"validate", "ch", "gma", "reducibility", "ordinary"}


def test_validate_subcommand_runs_one_stage(capsys):
    assert cli.main(["validate", "diag-ordinary"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert list(doc["stages"]) == ["validate"]
    assert cli.main(["validate", "plane-tower-r2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert list(doc["stages"]) == ["build"]  # towers validate by rebuilding


def test_audit_subcommand_on_tower(capsys):
    assert cli.main(["audit", "plane-tower-r2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc["stages"]) == {"build", "audit"}
    assert doc["stages"]["audit"]["consistent"] is True


def test_missing_scenario_is_input_error(capsys):
    assert cli.main(["pipeline", "no-such-scenario"]) == 2
    assert "error:" in capsys.readouterr().err


def test_tower_only_commands_reject_psrep_scenarios(capsys):
    assert cli.main(["audit", "diag-ordinary"]) == 2
    assert "applies to tower scenarios" in capsys.readouterr().err
    assert cli.main(["criterion", "s3-irreducible"]) == 2


def test_budget_exhaustion_exit_code(capsys):
    assert cli.main(["pipeline", "diag-ordinary", "--budget", "1"]) == 3
    assert "budget exceeded:" in capsys.readouterr().err


def test_invariant_failure_exit_code(monkeypatch, capsys):
    def boom(source, seed=None, budget=None, stages=None):
        raise InvariantViolation("forced for the exit-code contract")

    monkeypatch.setattr(scenarios, "run_scenario", boom)
    assert cli.main(["pipeline", "diag-ordinary"]) == 1
    assert "invariant failure:" in capsys.readouterr().err


def test_bad_verdict_maps_to_exit_one(monkeypatch, capsys):
    real = scenarios.run_scenario

    def downgrade(source, seed=None, budget=None, stages=None):
        rep = real(source, seed=seed, budget=budget, stages=("validate",))
        rep.verdict = "invariant-failure"
        return rep

    monkeypatch.setattr(scenarios, "run_scenario", downgrade)
    assert cli.main(["pipeline", "diag-ordinary"]) == 1
    capsys.readouterr()


def test_out_directory_receives_reports(tmp_path, capsys):
    assert cli.main(["pipeline", "diag-ordinary", "--out", str(tmp_path)]) == 0
    msg = capsys.readouterr().out
    assert "diag-ordinary: ok ->" in msg
    written = json.loads((tmp_path / "diag-ordinary.json").read_text())
    assert written["verdict"] == "ok"
    assert cli.main(
        ["validate", "diag-ordinary", "--format", "text", "--out", str(tmp_path)]
    ) == 0
    capsys.readouterr()
    text = (tmp_path / "diag-ordinary.txt").read_text()
    assert text.startswith("scenario diag-ordinary  verdict ok")


def test_text_format_renders_stages(capsys):
    assert cli.main(["validate", "diag-ordinary", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "[validate]" in out and "ok: true" in out


def test_condition_table_renderer():
    rows = [
        {"label": "a", "r": 1, "principal_nzd": True, "both_principal": True,
         "embdim_two": False, "both_gorenstein": None, "multiplicity_one": True,
         "eisenstein_colength": 3, "complete_intersection": False},
    ]
    table = cli._render_condition_table(rows)
    lines = table.splitlines()
    assert lines[0].startswith("label")
    assert "yes" in lines[2] and "no" in lines[2] and "-" in lines[2] and "3" in lines[2]


# ---- corpus ----------------------------------------------------------


def test_corpus_zero_count_empty_manifest(tmp_path):
    manifest = scenarios.generate_corpus(seed=4, count=0, out_dir=tmp_path)
    assert manifest["files"] == [] and manifest["count"] == 0
    assert manifest["digest"] == serialize.sha256_text("")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["manifest.json"]


def test_corpus_is_reproducible(tmp_path):
    a = scenarios.generate_corpus(seed=0, count=16, out_dir=tmp_path / "a")
    b = scenarios.generate_corpus(seed=0, count=16, out_dir=tmp_path / "b")
    assert (tmp_path / "a" / "manifest.json").read_text() == (
        tmp_path / "b" / "manifest.json"
    ).read_text()
    assert a["digest"] == b["digest"]
    names = [f["name"] for f in a["files"]]
    assert len(set(names)) == 16
    for f in a["files"]:
        text = (tmp_path / "a" / f"{f['name']}.json").read_text()
        assert serialize.sha256_text(text) == f["sha256"]
        serialize.parse_scenario_text(text, where=f["name"])


def test_corpus_seeds_never_collide(tmp_path):
    a = scenarios.generate_corpus(seed=0, count=8, out_dir=tmp_path / "a")
    b = scenarios.generate_corpus(seed=1, count=8, out_dir=tmp_path / "b")
    assert not {f["name"] for f in a["files"]} & {f["name"] for f in b["files"]}
    assert a["digest"] != b["digest"]


def test_corpus_cli_needs_out(capsys, tmp_path):
    assert cli.main(["corpus", "--count", "2"]) == 2
    assert "corpus needs --out" in capsys.readouterr().err
    assert cli.main(["corpus", "--count", "2", "--out", str(tmp_path)]) == 0
    assert "2 scenarios ->" in capsys.readouterr().out


def test_generated_scenarios_actually_run(tmp_path):
    scenarios.generate_corpus(seed=2, count=4, out_dir=tmp_path)
    for path in sorted(tmp_path.glob("gen2-*.json")):
        rep = scenarios.run_scenario(path, stages=("validate",) if "tower" not in path.name else ("build",))
        assert rep.verdict == "ok", path.name
