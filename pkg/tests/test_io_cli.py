import json
from fractions import Fraction

import pytest

from probalg.cli import EXIT_OK, EXIT_PARSE, EXIT_PROPERTY, EXIT_SEMANTIC, main
from probalg.io import StructureError, generate_structure, structure_from_dict, structure_to_dict

F = Fraction

TRI = {
    "atoms": [{"label": "x", "weight": "1/2"}, {"label": "y", "weight": "1/4"}, {"label": "z", "weight": "1/4"}],
    "events": {"X": ["x"], "XY": ["x", "y"]},
    "subalgebras": {"S": ["X"]},
}


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "tri.json"
    p.write_text(json.dumps(TRI))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestStructure:
    def test_names(self):
        st = structure_from_dict(TRI)
        assert st.event("XY").mu == F(3, 4)
        assert st.event("ALL") == st.alg.full() and not st.event("NONE")
        assert st.subalgebra("S") == st.subalgebra("X")
        assert len(st.subalgebra("full").blocks) == 3

    def test_unknown_event(self):
        with pytest.raises(StructureError):
            structure_from_dict(TRI).event("Q")

    def test_float_weight_rejected(self):
        doc = dict(TRI, atoms=[{"label": "x", "weight": 0.5}, {"label": "y", "weight": "1/2"}], events={})
        with pytest.raises(StructureError):
            structure_from_dict(doc)

    def test_reserved_name(self):
        with pytest.raises(StructureError):
            structure_from_dict(dict(TRI, events={"ALL": ["x"]}))

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip(self, seed):
        st = generate_structure(seed, 5)
        again = structure_from_dict(json.loads(json.dumps(structure_to_dict(st))))
        assert again.alg.weights == st.alg.weights
        # subalgebras come back through added generator events
        assert all(again.events[k].mask == v.mask for k, v in st.events.items())
        assert again.subalgebra("S").blocks == st.subalgebra("S").blocks


class TestEval:
    def test_mu_one(self, capsys, tri_file):
        code, out, _ = run(capsys, "eval", "--structure", tri_file, "--inline", "mu(1)")
        assert code == EXIT_OK and out.startswith("1/1")

    def test_expression(self, capsys, tri_file):
        code, out, _ = run(capsys, "eval", "--structure", tri_file, "--inline", "mu(XY) -. mu(X)", "--json")
        assert code == EXIT_OK and json.loads(out)["value"] == "1/4"

    def test_bind(self, capsys, tri_file):
        code, out, _ = run(capsys, "eval", "--structure", tri_file, "--inline", "mu(v /\\ X)", "--bind", "v=XY", "--json")
        assert json.loads(out)["value"] == "1/2"

    def test_parse_error(self, capsys, tri_file):
        code, _, err = run(capsys, "eval", "--structure", tri_file, "--inline", "mu(x")
        assert code == EXIT_PARSE and err

    def test_unbound(self, capsys, tri_file):
        code, _, err = run(capsys, "eval", "--structure", tri_file, "--inline", "mu(v)")
        assert code == EXIT_SEMANTIC and "v" in err

    def test_formula_file(self, capsys, tri_file, tmp_path):
        p = tmp_path / "f.txt"
        p.write_text("sup v . mu(v /\\ X)\n")
        code, out, _ = run(capsys, "eval", "--structure", tri_file, "--formula", str(p), "--json")
        assert code == EXIT_OK and json.loads(out)["value"] == "1/2"


class TestReports:
    def test_atoms(self, capsys, tri_file):
        code, out, _ = run(capsys, "atoms", "--structure", tri_file, "--json")
        doc = json.loads(out)
        assert doc["Phi"] == ["1/2", "1/4", "1/4"] and doc["phi"]["phi_1"] == "1/2"

    def test_json_matches_table(self, capsys, tri_file):
        _, table, _ = run(capsys, "atoms", "--structure", tri_file, "--event", "XY")
        _, js, _ = run(capsys, "atoms", "--structure", tri_file, "--event", "XY", "--json")
        doc = json.loads(js)
        for key, value in doc["phi"].items():
            assert any(line.split()[:2] == [key, value] for line in table.splitlines())
        assert f"chi    {doc['chi']}" in table

    def test_entropy(self, capsys, tri_file):
        code, out, _ = run(capsys, "entropy", "--structure", tri_file, "--A", "S", "--json")
        (value,) = json.loads(out).values()
        assert abs(value - 0.6931471805599453) <= 1e-12

    def test_indep_report(self, capsys, tri_file):
        code, out, _ = run(capsys, "indep", "--structure", tri_file, "--S", "X", "--T", "XY", "--json")
        doc = json.loads(out)
        assert code == EXIT_OK and doc["defect"] == "1/8" and not doc["independent"]

    def test_axioms_broken(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(dict(TRI, atoms=[{"label": "x", "weight": "1/2"}, {"label": "y", "weight": "1/4"}], events={}, subalgebras={})))
        code, out, _ = run(capsys, "axioms", "--structure", str(p))
        assert code == EXIT_PROPERTY and "total mass 1" in out

    def test_axioms_ok(self, capsys, tri_file):
        assert run(capsys, "axioms", "--structure", tri_file)[0] == EXIT_OK

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "atoms", "--structure", str(tmp_path / "nope.json"))
        assert code == EXIT_SEMANTIC

    def test_bad_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{")
        assert run(capsys, "atoms", "--structure", str(p))[0] == EXIT_PARSE


class TestGenAndSelftest:
    def test_gen_deterministic(self, capsys):
        a = run(capsys, "gen", "--atoms", "4", "--seed", "3")[1]
        b = run(capsys, "gen", "--atoms", "4", "--seed", "3")[1]
        assert a == b
        assert len(structure_from_dict(json.loads(a)).alg.weights) == 4

    def test_selftest_small(self, capsys):
        code, out, _ = run(capsys, "selftest", "--scale", "0.02", "--only", "rv", "--only", "axioms")
        assert code == EXIT_OK and out.count("PASS") == 2

    def test_selftest_fault(self, capsys):
        code, out, _ = run(capsys, "selftest", "--scale", "0.05", "--only", "rv", "--inject-fault", "rho_n")
        assert code == EXIT_PROPERTY and "FAIL" in out and "witness" in out

    def test_selftest_repeatable(self, capsys):
        a = run(capsys, "selftest", "--scale", "0.02", "--only", "entropy", "--json")[1]
        b = run(capsys, "selftest", "--scale", "0.02", "--only", "entropy", "--json")[1]
        assert a == b
