"""End-to-end CLI tests: exit codes, record-format determinism, and the
round trip of emitted countermodels back through check-model."""

from pathlib import Path

import pytest

from fuzzytyp.cli import main

DATA = Path(__file__).parent / "data"
PENGUIN_KB = str(DATA / "penguin.fkb")
PENGUIN_INT = str(DATA / "penguin.fint")


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture()
def unfaithful_fint(tmp_path):
    text = (DATA / "penguin.fint").read_text().replace(
        "concept Penguin reddy 0.2", "concept Penguin reddy 0.9")
    path = tmp_path / "variant.fint"
    path.write_text(text)
    return str(path)


class TestCheckModel:
    def test_fixture_is_fm_model(self, capsys):
        code, out = run(capsys, "check-model", PENGUIN_KB, PENGUIN_INT)
        assert code == 0
        assert "W[Bird](reddy) = 120" in out
        assert "W[Bird](opus) = 100" in out
        assert "W[Penguin](reddy) = 30" in out
        assert "W[Penguin](opus) = 120" in out
        assert "fm-model: yes" in out

    def test_unfaithful_variant_fails_with_the_pair(self, capsys, unfaithful_fint):
        code, out = run(capsys, "check-model", PENGUIN_KB, unfaithful_fint)
        assert code == 1
        assert "faithful: no" in out
        assert "Penguin" in out and "reddy" in out and "opus" in out

    def test_malformed_kb_is_a_usage_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.fkb"
        bad.write_text("logic godel\nconcepts A\ntbox:\nA <= Ghost >= 1\n")
        code, _ = run(capsys, "check-model", str(bad), PENGUIN_INT)
        assert code == 2

    def test_records_format(self, capsys):
        code, out = run(capsys, "--format", "records",
                        "check-model", PENGUIN_KB, PENGUIN_INT)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "fuzzytyp-records 1"
        assert "weight Bird reddy 120" in lines
        assert "fm-model true" in lines


class TestEntail:
    def test_refutation_and_recheck(self, capsys, tmp_path):
        saved = tmp_path / "cm.fint"
        code, out = run(capsys, "entail", PENGUIN_KB, "T(Penguin) <= Fly >= 0.9",
                        "--mode", "fm", "--max-domain", "2",
                        "--denominator", "10", "--save-countermodel", str(saved))
        assert code == 1
        assert saved.exists()
        # an fm-mode countermodel is itself an fm-model of the KB
        code2, out2 = run(capsys, "check-model", PENGUIN_KB, str(saved))
        assert code2 == 0
        assert "fm-model: yes" in out2

    def test_goal_present_in_tbox(self, capsys, tmp_path):
        kb = tmp_path / "self.fkb"
        kb.write_text("logic godel\nconcepts A B\ntbox:\nA <= B >= 1\n")
        code, out = run(capsys, "entail", str(kb), "A <= B >= 1",
                        "--max-domain", "2", "--denominator", "2")
        assert code == 0
        assert "no-countermodel" in out

    def test_budget_truncation_has_its_own_exit_code(self, capsys, tmp_path):
        kb = tmp_path / "self.fkb"
        kb.write_text("logic godel\nconcepts A B\n")
        code, out = run(capsys, "entail", str(kb), "A <= Top >= 1",
                        "--max-domain", "2", "--denominator", "6",
                        "--budget", "5")
        assert code == 3
        assert "truncated" in out

    def test_bad_goal_axiom(self, capsys):
        code, _ = run(capsys, "entail", PENGUIN_KB, "T(Ghost) <= Fly >= 1")
        assert code == 2


class TestKlm:
    def test_find_counterexample(self, capsys):
        code, out = run(capsys, "klm-test", "--postulate", "REFL1",
                        "--logic", "godel", "--mode", "find-counterexample",
                        "--trials", "200", "--max-domain", "2",
                        "--denominator", "2", "--seed", "0")
        assert code == 1
        assert "violated" in out
        assert "conclusion" in out

    def test_verify_holds(self, capsys):
        code, out = run(capsys, "klm-test", "--postulate", "REFL0",
                        "--logic", "zadeh", "--mode", "verify",
                        "--trials", "300", "--max-domain", "3",
                        "--denominator", "4")
        assert code == 0
        assert "holds-within-bounds" in out

    def test_records_are_byte_identical_across_runs(self, capsys):
        argv = ["--format", "records", "klm-test", "--postulate", "CM0",
                "--logic", "godel", "--trials", "5000", "--max-domain", "3",
                "--denominator", "4", "--seed", "3"]
        code1, out1 = run(capsys, *argv)
        code2, out2 = run(capsys, *argv)
        assert code1 == code2
        assert out1 == out2

    def test_unknown_postulate_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["klm-test", "--postulate", "NOPE", "--logic", "godel"])
        assert err.value.code == 2


class TestMlp:
    NET = ("layers 2 3 1\n"
           "activation 1 hard-sigmoid\nactivation 2 hard-sigmoid\n"
           + "\n".join(f"synapse u0_{i} u1_{j} {w}"
                       for (i, j, w) in [(0, 0, "1/2"), (0, 1, "-2"), (0, 2, "3"),
                                         (1, 0, "1"), (1, 1, "1/3"), (1, 2, "-1")])
           + "\nsynapse u1_0 u2_0 1\nsynapse u1_1 u2_0 -1/2\nsynapse u1_2 u2_0 2\n")
    STIMS = "stimulus s0 1/2 3/4\nstimulus s1 0 1\nstimulus s2 1 0\n"

    def test_exports_three_artifacts(self, capsys, tmp_path):
        net = tmp_path / "net.fnet"
        stim = tmp_path / "net.stim"
        net.write_text(self.NET)
        stim.write_text(self.STIMS)
        code, out = run(capsys, "mlp", str(net), str(stim),
                        "--out-dir", str(tmp_path / "out"))
        assert code == 0
        assert "faithful: yes" in out
        out_dir = tmp_path / "out"
        assert (out_dir / "net.kb.fkb").exists()
        assert (out_dir / "net.interp.fint").exists()
        assert (out_dir / "net.report.txt").exists()
        # the exported KB parses and the exported interpretation
        # re-checks as an fm-model of it
        code2, out2 = run(capsys, "check-model", str(out_dir / "net.kb.fkb"),
                          str(out_dir / "net.interp.fint"))
        assert code2 == 0

    def test_cyclic_net_is_an_error(self, capsys, tmp_path):
        net = tmp_path / "net.fnet"
        net.write_text("layers 1 1\nactivation 1 step\nsynapse u1_0 u0_0 1\n")
        stim = tmp_path / "net.stim"
        stim.write_text("stimulus s0 1\n")
        code, _ = run(capsys, "mlp", str(net), str(stim))
        assert code == 2

    def test_empty_stimuli_is_an_error(self, capsys, tmp_path):
        net = tmp_path / "net.fnet"
        net.write_text("layers 1 1\nactivation 1 step\nsynapse u0_0 u1_0 1\n")
        stim = tmp_path / "net.stim"
        stim.write_text("")
        code, _ = run(capsys, "mlp", str(net), str(stim))
        assert code == 2


class TestParse:
    def test_good_kb(self, capsys):
        code, out = run(capsys, "parse", PENGUIN_KB)
        assert code == 0
        assert "ok:" in out

    def test_emit_canonical_form_reparses(self, capsys, tmp_path):
        code, out = run(capsys, "parse", PENGUIN_KB, "--emit")
        assert code == 0
        canonical = "\n".join(line for line in out.splitlines()
                              if not line.startswith("ok:")) + "\n"
        again = tmp_path / "again.fkb"
        again.write_text(canonical)
        code2, _ = run(capsys, "parse", str(again))
        assert code2 == 0

    def test_syntax_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.fkb"
        bad.write_text("concepts A\n")
        code, _ = run(capsys, "parse", str(bad))
        assert code == 2
