import json

import pytest

from hfsmdec.decomposition import build_decomposition_tree
from hfsmdec.errors import InputError, ParseError, ValidationError
from hfsmdec.formatters import (
    format_core,
    format_fsm,
    format_fsm_text,
    format_hfsm_json,
    format_tree,
    fsm_to_dot,
    resolve_output_format,
    tree_to_dot,
    write_output,
)
from hfsmdec.fsm import Fsm
from hfsmdec.hfsm import Hfsm
from hfsmdec.hierarchy import core
from hfsmdec.readers import (
    detect_or_require_format,
    load_fsm,
    load_hfsm,
    load_machine,
    parse_fsm_text,
    parse_hfsm_json,
)

P4_TEXT = """\
# a path on four states
fsm p4
alphabet x
states 1 2 3 4
start 1
trans 1 x 2   # first arc
trans 2 x 3
trans 3 x 4
"""


class TestFsmText:
    def test_parse(self, p4):
        z = parse_fsm_text(P4_TEXT)
        assert z == p4
        assert z.name == "p4"

    def test_round_trip_is_stable(self):
        text = format_fsm_text(parse_fsm_text(P4_TEXT))
        assert format_fsm_text(parse_fsm_text(text)) == text
        assert text.splitlines()[:4] == ["fsm p4", "alphabet x", "states 1 2 3 4", "start 1"]

    def test_name_from_path(self):
        z = parse_fsm_text(P4_TEXT.replace("fsm p4\n", ""), path="dir/walk.fsm")
        assert z.name == "walk"

    def test_duplicate_transition(self):
        text = P4_TEXT + "trans 1 x 3\n"
        with pytest.raises(ParseError) as info:
            parse_fsm_text(text, path="p4.fsm")
        assert info.value.line == 9
        assert "line 6" in str(info.value)
        assert str(info.value).startswith("p4.fsm:9:")

    @pytest.mark.parametrize(
        "line, message",
        [
            ("bogus 1", "unknown directive"),
            ("trans 1 x 9", "undeclared state"),
            ("trans 4 y 1", "not in the alphabet"),
            ("trans 1 x", "takes <src> <sym> <dst>"),
            ("start 2", "repeated 'start'"),
        ],
    )
    def test_errors_carry_line(self, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_fsm_text(P4_TEXT + line + "\n")
        assert info.value.line == 9

    def test_missing_start(self):
        with pytest.raises(ParseError, match="no 'start'"):
            parse_fsm_text("states 1\n")

    def test_duplicate_states(self):
        with pytest.raises(ParseError, match="duplicate states: 1"):
            parse_fsm_text("states 1 1\nstart 1\n")


class TestHfsmJson:
    def test_round_trip(self, h1):
        again = parse_hfsm_json(format_hfsm_json(h1))
        assert again.to_dict() == h1.to_dict()

    def test_nesting_optional(self):
        text = json.dumps(
            {
                "alphabet": ["x"],
                "root": "m",
                "machines": [
                    {"name": "m", "states": ["1"], "start": "1", "transitions": []}
                ],
            }
        )
        assert parse_hfsm_json(text).order == 1

    def test_missing_field(self, h1):
        data = h1.to_dict()
        del data["machines"][0]["start"]
        with pytest.raises(ValidationError) as info:
            parse_hfsm_json(json.dumps(data))
        assert info.value.field == "machines[0].start"

    def test_bad_transition(self, h1):
        data = h1.to_dict()
        data["machines"][1]["transitions"].append(["A", "y"])
        with pytest.raises(ValidationError) as info:
            parse_hfsm_json(json.dumps(data))
        assert info.value.field == "machines[1].transitions[1]"

    def test_symbol_outside_alphabet(self, h1):
        data = h1.to_dict()
        data["alphabet"] = ["x"]
        with pytest.raises(ValidationError) as info:
            parse_hfsm_json(json.dumps(data))
        assert info.value.field == "machines[1]"

    def test_invalid_json(self):
        with pytest.raises(ParseError) as info:
            parse_hfsm_json('{\n  "alphabet": [\n')
        assert info.value.line is not None


class TestDetection:
    def test_extension(self):
        assert detect_or_require_format("m.fsm", None) == "fsm"
        assert detect_or_require_format("m.json", None) == "hfsm"

    def test_explicit_wins(self):
        assert detect_or_require_format("m.fsm", "json") == "hfsm"

    def test_sniff(self):
        assert detect_or_require_format("-", None, '{"root": "m"}') == "hfsm"
        assert detect_or_require_format("m.txt", None, "states 1") == "fsm"

    def test_undetectable(self):
        with pytest.raises(InputError, match="-f/--from-format"):
            detect_or_require_format("m.txt", None, "")

    def test_unsupported(self):
        with pytest.raises(InputError, match="Unsupported"):
            detect_or_require_format("m.fsm", "xml")


class TestLoading:
    def test_load_fsm_flattens(self, h1, flat_h1, write_hfsm):
        path = write_hfsm(h1, "h1.hfsm")
        assert load_fsm(path) == flat_h1
        assert isinstance(load_machine(path), Hfsm)

    def test_load_hfsm_wraps(self, p4, write_fsm):
        z = load_hfsm(write_fsm(p4, "p4.fsm"))
        assert z.order == 1
        assert z.root == "p4"

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="Input file not found"):
            load_machine(str(tmp_path / "absent.fsm"))


class TestFormatters:
    def test_resolve_output_format(self):
        assert resolve_output_format(None, None) == "text"
        assert resolve_output_format("tree.dot", None) == "dot"
        assert resolve_output_format("tree.dot", "JSON") == "json"
        assert resolve_output_format("tree.xyz", None, default="fsm") == "fsm"

    def test_tree_dot_labels_only_sinks(self, p4):
        dot = tree_to_dot(build_decomposition_tree(p4))
        assert dot.count('label=""') == 3
        assert '0 [label="1"];' in dot
        assert dot.count("->") == 6

    def test_tree_dot_annotated(self, p4):
        dot = tree_to_dot(build_decomposition_tree(p4), annotate=True)
        assert 'label="{1,2}"' in dot

    def test_tree_text(self, flat_h1):
        text = format_tree(build_decomposition_tree(flat_h1), "text")
        assert text.splitlines() == ["3\t{a,b}\t0 1", "4\t{a,b,c}\t2 3"]

    def test_fsm_dot_clusters(self, p4):
        dot = fsm_to_dot(p4, [frozenset({"1", "2"}), frozenset({"1", "2", "3"})])
        assert "subgraph cluster_0" in dot
        assert "subgraph cluster_1" in dot
        assert '"1" -> "2" [label="x"];' in dot

    def test_quoting(self):
        z = Fsm.build(['a"b'], ["x"], [], 'a"b', name="q")
        assert r'"a\"b"' in fsm_to_dot(z)

    def test_unsupported(self, p4):
        with pytest.raises(ValueError, match="Unsupported output format"):
            format_fsm(p4, "svg")

    def test_core(self, p4):
        assert format_core(core(Hfsm.flat(p4))) == "3\tn=2 0-x->1"

    def test_write_output(self, tmp_path, capsys):
        write_output("hello")
        assert capsys.readouterr().out == "hello\n"
        target = tmp_path / "out.txt"
        write_output("hello", str(target))
        assert target.read_text() == "hello\n"
