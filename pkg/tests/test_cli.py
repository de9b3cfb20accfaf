import contextlib
import io
import json
import os
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from cmcells import cli
from cmcells.dunkl_verma import BracketReport
from cmcells.gaudin_cells import NumericAmbiguityError

REPO = pathlib.Path(__file__).resolve().parent.parent
SCHEMA_DIR = REPO / "schemas"
PACKAGED_DIR = REPO / "src" / "cmcells" / "schemas"
SCHEMA_NAMES = ["cells.schema.json", "cellular.schema.json",
                "families.schema.json", "info.schema.json",
                "verify.schema.json"]


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(args)
    return code, out.getvalue(), err.getvalue()


def load(args):
    code, out, err = run(args)
    assert code == 0, err
    return json.loads(out)


def schema(name):
    return json.loads((SCHEMA_DIR / name).read_text())


# ---------------------------------------------------------------------------
# info


class TestInfo:
    def test_b2(self):
        payload = load(["info", "--group", "b2", "--format", "json"])
        assert payload["order"] == 8
        assert payload["degrees"] == [2, 4]
        assert payload["reflections"] == 4
        assert set(payload["characterTable"]["rows"]) == \
            {"1", "eps_s", "eps_t", "eps", "chi"}
        jsonschema.validate(payload, schema("info.schema.json"))

    def test_cyclic_2(self):
        payload = load(["info", "--group", "cyclic", "--d", "2",
                        "--format", "json"])
        assert payload["order"] == 2
        assert payload["fakeDegrees"]["det"] == "t"

    def test_table_format(self):
        code, out, _err = run(["info", "--group", "dihedral", "--m", "5"])
        assert code == 0
        assert "order        10" in out
        assert "fake degree" in out

    def test_config_json(self):
        payload = load(["info", "--config", '{"group":"cyclic","d":4}',
                        "--format", "json"])
        assert payload["order"] == 4

    def test_flags_override_config(self):
        payload = load(["info", "--config", '{"group":"cyclic","d":4}',
                        "--d", "6", "--format", "json"])
        assert payload["order"] == 6

    def test_malformed_json_reports_position(self):
        code, _out, err = run(["info", "--config", '{"group": "b2",}'])
        assert code == 1
        assert "column" in err

    def test_unknown_group(self):
        code, _out, err = run(["info", "--group", "e8"])
        assert code == 1
        assert "unknown group" in err

    def test_unknown_config_key(self):
        code, _out, err = run(["info", "--config",
                               '{"group":"b2","order":8}'])
        assert code == 1
        assert "unknown config keys" in err


# ---------------------------------------------------------------------------
# families


class TestFamilies:
    def test_b2_equal_parameters(self):
        payload = load(["families", "--group", "b2", "--c", "a=1,b=1"])
        assert len(payload["blocks"]) == 3
        assert payload["exact"] is True
        sizes = sorted(blk["sumDimSq"] for blk in payload["blocks"])
        assert sizes == [1, 1, 6]
        jsonschema.validate(payload, schema("families.schema.json"))

    def test_k_input(self):
        payload = load(["families", "--group", "cyclic", "--d", "3",
                        "--k", "1,1,-2"])
        assert payload["params"]["k"] == {"0.0": "1", "0.1": "1",
                                          "0.2": "-2"}
        assert len(payload["blocks"]) == 2

    def test_requires_exactly_one_parameter_map(self):
        code, _out, err = run(["families", "--group", "b2"])
        assert code == 1 and "exactly one" in err
        code, _out, err = run(["families", "--group", "b2",
                               "--c", "a=1,b=2", "--k", "0,0,0,0"])
        assert code == 1 and "exactly one" in err

    def test_floats_rejected(self):
        code, _out, err = run(["families", "--group", "b2",
                               "--c", "a=1.5,b=2"])
        assert code == 1

    def test_table_format(self):
        code, out, _err = run(["families", "--group", "b2",
                               "--c", "a=1,b=2", "--format", "table"])
        assert code == 0
        assert "5 families" in out


# ---------------------------------------------------------------------------
# cellular


class TestCellular:
    def test_cyclic_3(self):
        payload = load(["cellular", "--group", "cyclic", "--d", "3",
                        "--k", "1,1,-2", "--seed", "1"])
        chars = payload["cellularCharacters"]
        assert len(chars) == 2
        mults = sorted(tuple(sorted(ch["mults"].items())) for ch in chars)
        assert mults == [(("1", 1), ("det^2", 1)), (("det", 1),)]
        jsonschema.validate(payload, schema("cellular.schema.json"))

    def test_b2_generic(self):
        payload = load(["cellular", "--group", "b2", "--c", "a=1,b=2"])
        counts = sorted(tuple(sorted(ch["mults"].items()))
                        for ch in payload["cellularCharacters"])
        assert counts.count((("chi", 1),)) == 2
        assert len(payload["cellularCharacters"]) == 6


# ---------------------------------------------------------------------------
# cells


class TestCells:
    def test_left_b2_generic(self):
        payload = load(["cells", "--kind", "left", "--group", "b2",
                        "--c", "a=1,b=2", "--seed", "7"])
        assert payload["kind"] == "left"
        assert len(payload["blocks"]) == 6
        sets = {frozenset(blk["elements"]) for blk in payload["blocks"]}
        assert frozenset(("t", "st")) in sets
        assert frozenset(("ts", "sts")) in sets
        assert len(payload["cellularCharacters"]) == 6
        jsonschema.validate(payload, schema("cells.schema.json"))

    def test_right_is_inverse(self):
        payload = load(["cells", "--kind", "right", "--group", "b2",
                        "--c", "a=1,b=2"])
        sets = {frozenset(blk["elements"]) for blk in payload["blocks"]}
        assert frozenset(("t", "ts")) in sets
        assert frozenset(("st", "sts")) in sets
        assert payload["cellularCharacters"] == []

    def test_two_sided_character_sums(self):
        payload = load(["cells", "--kind", "two-sided", "--group", "b2",
                        "--c", "a=1,b=1"])
        by_size = {len(blk["elements"]): i
                   for i, blk in enumerate(payload["blocks"])}
        big = [ch for ch in payload["cellularCharacters"]
               if ch["block"] == by_size[6]]
        assert big == [{"block": by_size[6],
                        "mults": {"eps_s": 1, "eps_t": 1, "chi": 2}}]

    def test_two_sided_without_one_sided_model(self):
        # a = -b has no one-sided table, but the Euler coarsening exists
        payload = load(["cells", "--kind", "two-sided", "--group", "b2",
                        "--c", "a=1,b=-1"])
        assert sorted(len(blk["elements"])
                      for blk in payload["blocks"]) == [1, 1, 6]
        code, _out, err = run(["cells", "--kind", "left", "--group", "b2",
                               "--c", "a=1,b=-1"])
        assert code == 1 and "opposite" in err

    def test_diagnostics_fields(self):
        payload = load(["cells", "--group", "b2", "--c", "a=1,b=2"])
        diag = payload["diagnostics"]
        assert diag["retries"] == 0
        assert diag["minGap"] > 0
        assert "Euler limit" in diag["convention"]
        assert sorted(len(b) for b in diag["rawBlocks"]) == \
            [1, 1, 1, 1, 2, 2]

    def test_zero_point_collapses_gap(self):
        payload = load(["cells", "--group", "b2", "--c", "a=0,b=0"])
        assert len(payload["blocks"]) == 1
        assert payload["diagnostics"]["minGap"] is None

    def test_samples_cross_check(self):
        payload = load(["cells", "--group", "cyclic", "--d", "4",
                        "--k", "2,-1,0,-1", "--samples", "3"])
        assert payload["diagnostics"]["seedsChecked"] == 3

    def test_byte_identical_reruns(self):
        args = ["cells", "--kind", "left", "--group", "b2",
                "--c", "a=1,b=2", "--seed", "7"]
        _code, first, _err = run(args)
        _code, second, _err = run(args)
        assert first == second

    def test_no_model_group(self):
        code, _out, err = run(["cells", "--group", "dihedral", "--m", "5",
                               "--c", "1"])
        assert code == 1 and "exact cell model" in err

    def test_ambiguity_exit_code(self, monkeypatch):
        def boom(W, c, seed=0):
            raise NumericAmbiguityError("clusters overlap")
        monkeypatch.setattr(cli, "left_cells", boom)
        code, _out, err = run(["cells", "--group", "b2", "--c", "a=1,b=2"])
        assert code == 2
        assert "numeric ambiguity" in err


# ---------------------------------------------------------------------------
# verify


class TestVerify:
    def test_minpoly_b2(self):
        code, out, _err = run(["verify", "--suite", "minpoly",
                               "--group", "b2", "--seed", "3"])
        assert code == 0
        assert ": ok" in out

    def test_all_cyclic_5(self):
        code, out, _err = run(["verify", "--suite", "all", "--group",
                               "cyclic", "--d", "5", "--seed", "3"])
        assert code == 0
        assert "fail" not in out

    def test_all_dihedral_skips_cells(self):
        payload = load(["verify", "--suite", "all", "--group", "dihedral",
                        "--m", "5", "--seed", "1", "--format", "json"])
        assert payload["status"] == "ok"
        status = {check["id"]: check["status"]
                  for check in payload["checks"]}
        assert status["cells-suite"] == "skipped"
        assert status["minpoly-suite"] == "skipped"
        jsonschema.validate(payload, schema("verify.schema.json"))

    def test_explicit_params_respected(self):
        payload = load(["verify", "--suite", "families", "--group", "b2",
                        "--c", "a=1,b=1", "--format", "json"])
        assert payload["params"]["c"] == {"a": "1", "b": "1"}

    def test_unknown_suite_is_usage_error(self):
        code, _out, err = run(["verify", "--suite", "bogus",
                               "--group", "b2"])
        assert code == 1
        assert "--suite" in err

    def test_failing_check_gives_nonzero_exit(self, monkeypatch):
        def broken(W, c, N=6):
            return BracketReport(group=W.name, N=N, status="fail",
                                 pairs_checked=0, witnesses=())
        monkeypatch.setattr(cli, "check_bracket", broken)
        code, out, _err = run(["verify", "--suite", "dunkl",
                               "--group", "cyclic", "--d", "3",
                               "--seed", "0"])
        assert code == 1
        assert "fail" in out


# ---------------------------------------------------------------------------
# published schemas


class TestSchemas:
    def test_root_mirror_matches_package(self):
        assert sorted(p.name for p in SCHEMA_DIR.glob("*.json")) == \
            SCHEMA_NAMES
        for name in SCHEMA_NAMES:
            assert (SCHEMA_DIR / name).read_text() == \
                (PACKAGED_DIR / name).read_text()

    def test_schemas_are_valid(self):
        for name in SCHEMA_NAMES:
            jsonschema.validators.Draft202012Validator.check_schema(
                schema(name))


# ---------------------------------------------------------------------------
# process-level behaviour


class TestProcess:
    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cmcells.cli", "info", "--group", "b2"],
            capture_output=True, text=True, cwd=REPO)
        assert proc.returncode == 0
        assert "order        8" in proc.stdout

    def test_thread_cap_env(self):
        env = dict(os.environ, CM_CELLS_THREADS="1")
        env.pop("OMP_NUM_THREADS", None)
        proc = subprocess.run(
            [sys.executable, "-c",
             "import os, cmcells; print(os.environ['OMP_NUM_THREADS'])"],
            capture_output=True, text=True, env=env, cwd=REPO)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "1"
