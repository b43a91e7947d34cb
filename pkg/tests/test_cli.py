"""CLI surface: exit codes, canonical output, determinism, round-trips."""

import json

from markedposets import enumerate_vertices
from markedposets.cli import format_hrep, main, parse_hrep_text
from markedposets.polytopes import build_chain_hrep, build_order_hrep


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, payload, name="poset.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SEGMENT_DOC = {
    "name": "segment",
    "elements": ["a", "b", "x"],
    "covers": [["a", "x"], ["x", "b"]],
    "marked": {"a": 0, "b": 1},
}


class TestValidate:
    def test_builtin_pm_is_valid(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--builtin", "pm:3,1")
        assert code == 0
        assert "strict: true" in out and "regular: true" in out

    def test_equal_marks_fail_strictness(self, capsys, tmp_path):
        doc = {
            "name": "flat",
            "elements": ["a", "b"],
            "covers": [["a", "b"]],
            "marked": {"a": 1, "b": 1},
        }
        code, out, _ = run_cli(capsys, "validate", write_doc(tmp_path, doc))
        assert code == 1
        assert "strict: false" in out

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "validate", str(path))
        assert code == 2
        assert "error" in err

    def test_unknown_field_rejected(self, capsys, tmp_path):
        doc = dict(SEGMENT_DOC, surprise=1)
        code, _, err = run_cli(capsys, "validate", write_doc(tmp_path, doc))
        assert code == 2

    def test_json_mode(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--builtin", "figure1", "--json")
        payload = json.loads(out)
        assert payload["command"] == "validate"
        assert payload["result"]["strict"] is True
        assert payload["result"]["regular"] is False


class TestPolytope:
    def test_figure_one_chain_facets(self, capsys):
        code, out, _ = run_cli(capsys, "polytope", "--builtin", "figure1",
                               "--family", "chain", "--emit", "facets")
        assert code == 0
        rows = [line for line in out.splitlines() if line.startswith("ineq")]
        assert len(rows) == 4

    def test_diamond_order_vertices(self, capsys):
        code, out, _ = run_cli(capsys, "polytope", "--builtin", "diamond:0,2",
                               "--family", "order", "--emit", "vertices")
        assert code == 0
        assert out.strip().splitlines() == ["0 0", "0 2", "2 0", "2 2"]

    def test_chain_order_without_partition_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "polytope", "--builtin", "figure1",
                               "--family", "chain-order", "--emit", "hrep")
        assert code == 2
        assert "partition" in err

    def test_chain_order_with_partition(self, capsys, tmp_path):
        doc = {
            "name": "mixed",
            "elements": ["a", "c", "p", "b"],
            "covers": [["a", "c"], ["c", "p"], ["p", "b"]],
            "marked": {"a": 0, "b": 2},
            "partition": {"chain": ["c"], "order": ["p"]},
        }
        code, out, _ = run_cli(capsys, "polytope", write_doc(tmp_path, doc),
                               "--family", "chain-order", "--emit", "vertices")
        assert code == 0
        assert out.strip().splitlines() == ["0 0", "0 2", "2 2"]

    def test_hrep_round_trip(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "polytope", write_doc(tmp_path, SEGMENT_DOC),
                               "--family", "chain", "--emit", "hrep")
        assert code == 0
        from markedposets import MarkedPoset, Poset

        mp = MarkedPoset(Poset(["a", "b", "x"], [("a", "x"), ("x", "b")]), {"a": 0, "b": 1})
        reparsed = parse_hrep_text(out)
        assert enumerate_vertices(reparsed) == enumerate_vertices(build_chain_hrep(mp))

    def test_format_parse_identity(self, figure_one):
        for h in (build_chain_hrep(figure_one), build_order_hrep(figure_one)):
            assert parse_hrep_text(format_hrep(h)) == h


class TestTwoLevel:
    def test_order_both_agree_true(self, capsys):
        code, out, _ = run_cli(capsys, "two-level", "--builtin", "pm:3,1",
                               "--family", "order", "--method", "both")
        assert code == 0
        assert "AGREE" in out
        assert "direct: false" in out and "criterion: false" in out

    def test_trapezoid_poset_disagrees_nowhere(self, capsys, tmp_path):
        doc = {
            "name": "trapezoid",
            "elements": ["a", "m", "b", "x", "y"],
            "covers": [["a", "x"], ["x", "y"], ["m", "y"], ["y", "b"]],
            "marked": {"a": 0, "m": 1, "b": 2},
        }
        code, out, _ = run_cli(capsys, "two-level", write_doc(tmp_path, doc),
                               "--family", "order", "--method", "both")
        assert code == 0
        assert "direct: false" in out and "criterion: false" in out and "AGREE" in out

    def test_chain_both_with_scaling(self, capsys):
        code, out, _ = run_cli(capsys, "two-level", "--builtin", "figure1",
                               "--family", "chain", "--method", "both")
        assert code == 0
        assert "direct: true" in out and "criterion: true" in out and "AGREE" in out
        assert "scaling: x1=1 x2=1" in out

    def test_criterion_hypothesis_failure_exits_one(self, capsys):
        # figure1 is strict but irregular: the order criterion refuses
        code, _, err = run_cli(capsys, "two-level", "--builtin", "figure1",
                               "--family", "order", "--method", "criterion")
        assert code == 1
        assert "regular" in err


class TestEhrhart:
    def test_pm31_both_match(self, capsys):
        code, out, _ = run_cli(capsys, "ehrhart", "--builtin", "pm:3,1",
                               "--family", "order", "--method", "both")
        assert code == 0
        assert "formula: 1, 3, 3, 1" in out
        assert "count: 1, 3, 3, 1" in out
        assert "MATCH" in out

    def test_segment_count(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "ehrhart", write_doc(tmp_path, SEGMENT_DOC),
                               "--family", "order", "--method", "count")
        assert code == 0
        assert out.strip() == "count: 1, 1"

    def test_pm41_formula(self, capsys):
        code, out, _ = run_cli(capsys, "ehrhart", "--builtin", "pm:4,1",
                               "--family", "order", "--method", "formula")
        assert code == 0
        assert "formula: 1, 5, 9, 7, 2" in out

    def test_chain_family_notes_equivalence(self, capsys):
        code, out, _ = run_cli(capsys, "ehrhart", "--builtin", "pm:3,1",
                               "--family", "chain", "--method", "both")
        assert code == 0
        assert "note:" in out and "MATCH" in out

    def test_non_integral_marking_count_fails(self, capsys, tmp_path):
        # marked values must be integers already at the document level
        doc = dict(SEGMENT_DOC, marked={"a": 0, "b": True})
        code, _, err = run_cli(capsys, "ehrhart", write_doc(tmp_path, doc),
                               "--family", "order", "--method", "count")
        assert code == 2


class TestCorpus:
    def test_small_corpus_passes(self, capsys):
        code, out, _ = run_cli(capsys, "corpus", "--seed", "1", "--trials", "5",
                               "--max-unmarked", "3")
        assert code == 0
        assert "5/5 pass" in out

    def test_zero_trials_vacuous(self, capsys):
        code, out, _ = run_cli(capsys, "corpus", "--trials", "0")
        assert code == 0
        assert "0/0 pass" in out

    def test_seed_repeat_is_byte_identical(self, capsys):
        _, first, _ = run_cli(capsys, "corpus", "--seed", "7", "--trials", "4")
        _, second, _ = run_cli(capsys, "corpus", "--seed", "7", "--trials", "4")
        assert first == second


class TestWorkCap:
    def test_env_cap_limits_enumeration(self, capsys, monkeypatch):
        monkeypatch.setenv("MPP_WORK_CAP", "1")
        code, _, err = run_cli(capsys, "polytope", "--builtin", "figure1",
                               "--family", "chain", "--emit", "vertices")
        assert code == 1
        assert "cap" in err

    def test_env_cap_limits_extension_stream(self, capsys, monkeypatch):
        monkeypatch.setenv("MPP_WORK_CAP", "1")
        code, _, err = run_cli(capsys, "ehrhart", "--builtin", "pm:4,1",
                               "--family", "order", "--method", "formula")
        assert code == 1


class TestUsage:
    def test_missing_family_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "polytope", "--builtin", "figure1",
                             "--emit", "hrep")
        assert code == 2

    def test_unknown_builtin(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--builtin", "nonsense")
        assert code == 2

    def test_no_input(self, capsys):
        code, _, err = run_cli(capsys, "validate")
        assert code == 2
