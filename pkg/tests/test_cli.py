import json

import pytest

from zclosure.cli import main, parse_input_document
from zclosure.errors import ParseError
from zclosure.fixtures import fixture, fixture_names


def write_doc(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


TORUS_DOC = {"generators": [[["2", "0"], ["0", "1/2"]]]}


class TestParsing:
    def test_rational_document(self):
        mats = parse_input_document(TORUS_DOC)
        assert len(mats) == 1
        assert mats[0].entries[1][1] == pytest.approx(0.5)

    def test_missing_generators(self):
        with pytest.raises(ParseError):
            parse_input_document({})

    def test_ragged_matrix(self):
        with pytest.raises(ParseError):
            parse_input_document({"generators": [[["1", "0"], ["1"]]]})

    def test_bad_rational(self):
        with pytest.raises(ParseError):
            parse_input_document({"generators": [[["1/0", "0"], ["0", "1"]]]})

    def test_number_field_embedding(self):
        # x^2 - 2; the generator diag(sqrt2) embeds as the 2x2 companion block
        doc = {
            "field": ["-2", "0", "1"],
            "generators": [[[["0", "1"]]]],
        }
        mats = parse_input_document(doc)
        assert mats[0].rows == 2
        sq = mats[0] * mats[0]
        assert sq.entries[0][0] == 2 and sq.entries[0][1] == 0


class TestRun:
    def test_json_output(self, tmp_path, capsys):
        path = write_doc(tmp_path, TORUS_DOC)
        assert main(["run", "--input", path, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 2
        assert doc["lie_dim"] == 1
        assert doc["component_count"] == 1
        assert doc["certified"] is True
        assert doc["trace"]["multrel_calls"] > 0
        assert doc["trace"]["membership_calls"] > 0

    def test_human_output(self, tmp_path, capsys):
        path = write_doc(tmp_path, TORUS_DOC)
        assert main(["run", "--input", path]) == 0
        out = capsys.readouterr().out
        assert "Lie dimension    : 1" in out
        assert "components       : 1" in out

    def test_implicit_run_subcommand(self, tmp_path, capsys):
        path = write_doc(tmp_path, TORUS_DOC)
        assert main(["--input", path, "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["lie_dim"] == 1

    def test_parse_error_exit_code(self, tmp_path):
        path = write_doc(tmp_path, {"generators": [[["1/0"]]]})
        assert main(["run", "--input", path]) == 2

    def test_missing_input_exit_code(self):
        assert main(["run"]) == 2

    def test_unreadable_file_exit_code(self):
        assert main(["run", "--input", "/nonexistent.json"]) == 2

    def test_budget_exhaustion_exit_code(self, tmp_path, capsys):
        doc = {
            "generators": [
                [["1", "1"], ["0", "1"]],
                [["1", "0"], ["1", "1"]],
            ]
        }
        path = write_doc(tmp_path, doc)
        assert main(["run", "--input", path, "--time-budget", "0"]) == 3
        err = capsys.readouterr().err
        assert "budget" in err

    def test_singular_generator_exit_code(self, tmp_path):
        path = write_doc(tmp_path, {"generators": [[["1", "1"], ["1", "1"]]]})
        assert main(["run", "--input", path]) == 2


class TestMemberCommand:
    def test_member_yes(self, tmp_path, capsys):
        gen_path = write_doc(tmp_path, TORUS_DOC)
        el_path = write_doc(tmp_path, [["4", "0"], ["0", "1/4"]], "el.json")
        code = main(
            ["member", "--input", gen_path, "--element", el_path, "--json"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["member"] is True
        assert doc["component_index"] == 0

    def test_member_no(self, tmp_path, capsys):
        gen_path = write_doc(tmp_path, TORUS_DOC)
        el_path = write_doc(tmp_path, [["2", "0"], ["0", "3"]], "el.json")
        code = main(
            ["member", "--input", gen_path, "--element", el_path, "--json"]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["member"] is False


class TestFixtures:
    def test_names_exposed(self):
        names = fixture_names()
        assert "g2" in names and "b2" in names and "a3" in names

    def test_fixture_matrices_invertible(self):
        for name in fixture_names():
            for m in fixture(name):
                assert m.det() != 0
