import json

import pytest

from hfsmdec.cli import main
from hfsmdec.config import DEFAULT_DUMP_DIR
from hfsmdec.errors import InvariantError
from hfsmdec.readers import load_machine, parse_fsm_text, parse_hfsm_json


@pytest.fixture
def p4_file(p4, write_fsm):
    return write_fsm(p4, "p4.fsm")


@pytest.fixture
def h1_file(h1, write_hfsm):
    return write_hfsm(h1, "h1.hfsm")


def run(capsys, *argv):
    code = main(["-q", *argv])
    return code, capsys.readouterr().out


class TestCheckModule:
    def test_thin_module(self, capsys, p4_file):
        code, out = run(capsys, "check-module", p4_file, "--states", "2,3")
        assert code == 0
        assert out == "module: yes, thin: yes, entrance: 2\n"

    def test_not_a_module(self, capsys, flat_h1, write_fsm):
        path = write_fsm(flat_h1, "flat.fsm")
        code, out = run(capsys, "check-module", path, "--states", "a,c")
        assert code == 1
        assert out.startswith("module: no")

    def test_unknown_state(self, capsys, p4_file):
        code, _ = run(capsys, "check-module", p4_file, "--states", "9")
        assert code == 2

    def test_empty_state_list(self, capsys, p4_file):
        code, _ = run(capsys, "check-module", p4_file, "--states", ",")
        assert code == 2


class TestDecompose:
    def test_dot(self, capsys, p4_file):
        code, out = run(capsys, "decompose", p4_file, "--format", "dot")
        assert code == 0
        assert out.startswith('digraph "p4"')
        assert out.count('label=""') == 3

    def test_json_to_file(self, capsys, p4_file, tmp_path):
        target = tmp_path / "tree.json"
        code, out = run(capsys, "decompose", p4_file, "-o", str(target))
        assert code == 0
        assert out == ""
        assert len(json.loads(target.read_text())["nodes"]) == 7

    def test_inaccessible(self, capsys, tmp_path):
        path = tmp_path / "bad.fsm"
        path.write_text("states 1 2\nstart 1\n")
        code, _ = run(capsys, "decompose", str(path))
        assert code == 2


class TestHierarchy:
    def test_maximize(self, capsys, p4_file):
        code, out = run(capsys, "maximize", p4_file)
        assert code == 0
        assert parse_hfsm_json(out).order == 3

    def test_flatten(self, capsys, h1_file, flat_h1):
        code, out = run(capsys, "flatten", h1_file)
        assert code == 0
        assert parse_fsm_text(out) == flat_h1

    def test_flatten_modules(self, capsys, p4_file):
        code, out = run(capsys, "flatten", p4_file, "-t", "dot", "--show-modules")
        assert code == 0
        assert out.count("subgraph cluster_") == 2

    def test_core(self, capsys, p4_file):
        code, out = run(capsys, "core", p4_file)
        assert code == 0
        assert out == "3\tn=2 0-x->1\n"

    def test_eval(self, capsys, h1_file):
        assert run(capsys, "eval", h1_file, "x", "y") == (0, "c\n")
        assert run(capsys, "eval", h1_file, "x", "x") == (0, "undefined\n")

    def test_equiv(self, capsys, h1_file, flat_h1, p4_file, write_fsm):
        flat = write_fsm(flat_h1, "flat.fsm")
        assert run(capsys, "equiv", h1_file, flat) == (0, "equivalent\n")
        assert run(capsys, "equiv", h1_file, p4_file) == (1, "not equivalent\n")

    def test_stats(self, capsys, h1_file):
        code, out = run(capsys, "stats", h1_file)
        assert code == 0
        fields = dict(line.split(":", 1) for line in out.splitlines())
        assert fields["order"].strip() == "2"
        assert fields["dimension"].strip() == "2"
        assert fields["thin"].strip() == "yes"
        assert fields["indecomposable"].strip().startswith("5 (bounds 4..5: ok)")


class TestVerify:
    def test_file(self, capsys, p4_file):
        code, out = run(capsys, "verify", p4_file)
        assert code == 0
        assert "all properties hold" in out
        assert "p4: 7 indecomposable thin modules (bounds 5..7)" in out

    def test_single_state(self, capsys, s1, write_fsm):
        code, out = run(capsys, "verify", write_fsm(s1, "s1.fsm"))
        assert code == 0
        assert "all properties hold" in out

    def test_random(self, capsys):
        code, out = run(capsys, "verify", "--random", "--count", "5", "--max-n", "5")
        assert code == 0
        assert out.rstrip().endswith("all properties hold")

    def test_needs_exactly_one_source(self, capsys, p4_file):
        assert run(capsys, "verify")[0] == 2
        assert run(capsys, "verify", p4_file, "--random")[0] == 2

    def test_oracle_limit(self, capsys):
        code, _ = run(capsys, "--oracle-limit", "4", "verify", "--random", "--max-n", "6")
        assert code == 2


class TestVerifyFailures:
    @pytest.fixture(autouse=True)
    def broken_maximize(self, monkeypatch, tmp_path):
        def fail(z):
            raise InvariantError("maximal submodules intersect")

        monkeypatch.setattr("hfsmdec.verify.maximize", fail)
        monkeypatch.delenv("HFSMDEC_DUMP_DIR", raising=False)
        monkeypatch.setenv("HOME", str(tmp_path / "home"))
        monkeypatch.chdir(tmp_path)

    def test_counterexample_written_by_default(self, capsys, h1, h1_file, tmp_path):
        code, out = run(capsys, "verify", h1_file)
        assert code == 3
        assert "PROPERTY FAILURES" in out
        dumped = tmp_path / DEFAULT_DUMP_DIR / "000-internal-invariants.hfsm"
        assert load_machine(str(dumped)).to_dict() == h1.to_dict()

    def test_dump_dir_override(self, capsys, h1_file, tmp_path):
        code, _ = run(capsys, "verify", h1_file, "--dump-dir", str(tmp_path / "cx"))
        assert code == 3
        assert [p.name for p in (tmp_path / "cx").iterdir()] == [
            "000-internal-invariants.hfsm"
        ]
        assert not (tmp_path / DEFAULT_DUMP_DIR).exists()


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _ = run(capsys, "stats", str(tmp_path / "absent.fsm"))
        assert code == 2

    def test_parse_error_reported(self, capsys, tmp_path):
        path = tmp_path / "bad.fsm"
        path.write_text("states 1\nstart 1\ntrans 1 x 1\n")
        assert main(["stats", str(path)]) == 2
        assert "bad.fsm:3:" in capsys.readouterr().err

    def test_no_command_prints_help(self, capsys):
        assert main([]) == 0
        assert "usage:" in capsys.readouterr().out

    def test_bad_config(self, capsys, monkeypatch, p4_file):
        monkeypatch.setenv("HFSMDEC_JOBS", "many")
        assert run(capsys, "stats", p4_file)[0] == 2
