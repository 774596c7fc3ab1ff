import os
import subprocess
import sys
import json
from pathlib import Path

import pytest

import fincat
from fincat import io
from fincat.cli import main
from fincat.decision import _sampled

EXAMPLES = Path(fincat.__file__).parent / "examples"
GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ["boundary-to-point", "boundary-to-arrow"])
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_negative_goldens(capsys, name, fmt):
    code, out, _ = run(capsys, "check-presentation", EXAMPLES / f"{name}.cat", "--format", fmt)
    suffix = "txt" if fmt == "text" else "json"
    assert code == 2
    assert out == (GOLDEN / f"{name}.{suffix}").read_text(encoding="utf-8")


def test_report_goldens(capsys):
    code, out, _ = run(capsys, "report", EXAMPLES / "idempotent-splitting.cat")
    assert code == 2
    assert out == (GOLDEN / "idempotent-splitting.report.txt").read_text(encoding="utf-8")
    code, out, _ = run(capsys, "report", EXAMPLES / "boundary-to-arrow.cat", "--format", "json")
    assert code == 2
    assert out == (GOLDEN / "boundary-to-arrow.report.json").read_text(encoding="utf-8")


def test_json_report_schema(capsys):
    _, out, _ = run(capsys, "check-presentation", EXAMPLES / "boundary-to-arrow.cat", "--format", "json")
    doc = json.loads(out)
    assert doc["conclusion"] == "hypotheses-not-met"
    assert doc["lifting"]["0"]["counterexample"] == {"label": "no-lift", "data": ["0", "1", "u"]}
    assert doc["hypotheses"]["preserves-finite-limits"] is None


def test_positive_exit_zero(capsys):
    code, out, _ = run(capsys, "check-presentation", EXAMPLES / "chain-collapse.cat", "--oracle")
    assert code == 0
    assert "conclusion: presentation" in out
    assert "cross-validation: holds" in out


def test_failing_property_exit_one(capsys):
    code, out, _ = run(capsys, "check-equivalence", EXAMPLES / "chain-collapse.cat")
    assert code == 1
    assert "full: fails not-full(2, 1, id_1)" in out


def test_hypotheses_exit_two(capsys):
    code, _, err = run(capsys, "check-equivalence", EXAMPLES / "idempotent-splitting.cat")
    assert code == 2
    assert "hypotheses-not-met" in err


def test_input_errors_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "validate", tmp_path / "missing.cat")
    assert code == 2
    bad = tmp_path / "bad.cat"
    bad.write_text("CATEGORY C\nOBJECTS a\nMORPHISMS\n  f: a -> nowhere\nEND\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2
    assert "bad.cat:4:" in err and "'nowhere'" in err


def test_validate_and_limits(capsys):
    code, out, _ = run(capsys, "validate", EXAMPLES / "chain-collapse.cat")
    assert code == 0 and out.count("holds") == 5
    code, out, _ = run(capsys, "limits", EXAMPLES / "chain-collapse.cat", "--category", "Chain3", "--functor", "F")
    assert code == 0
    assert "terminal: 2" in out and "preserves (F): holds" in out
    code, out, _ = run(capsys, "limits", EXAMPLES / "boundary-to-arrow.cat", "--category", "dDelta1")
    assert code == 1
    assert "terminal: none" in out


def test_check_fractions(capsys):
    code, out, _ = run(capsys, "check-fractions", EXAMPLES / "chain-collapse.cat")
    assert code == 0 and "right RF2: holds" in out
    code, out, _ = run(capsys, "check-fractions", EXAMPLES / "chain-collapse.cat", "--left")
    assert code == 0 and "left RF3: holds" in out


def test_localize_writes_category_file(capsys, tmp_path):
    target = tmp_path / "q.cat"
    code, _, _ = run(capsys, "localize", EXAMPLES / "arrow-localization.cat", "-o", target)
    assert code == 0
    q = io.parse(target).category()
    assert q.n_morphisms == 4
    code, out, _ = run(capsys, "localize", EXAMPLES / "chain-collapse.cat", "--left")
    assert code == 0 and "b\\id_2: 2 -> 1" in out


def test_kan_writes_presheaf(capsys):
    code, out, _ = run(capsys, "kan", EXAMPLES / "chain-collapse.cat", "--functor", "F", "--presheaf", "X")
    assert code == 0
    text = (EXAMPLES / "chain-collapse.cat").read_text() + "\n" + out
    ext = io.parse_text(text).presheaf("F_*X")
    assert ext.sizes == (2, 1)
    code, _, err = run(capsys, "kan", EXAMPLES / "chain-collapse.cat", "--functor", "F", "--presheaf", "Y")
    assert code == 2


def test_output_is_deterministic(capsys):
    args = ("report", EXAMPLES / "chain-collapse.cat", "--format", "json", "--seed", "3")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_seed_selects_sampled_probes(capsys):
    B = io.parse(EXAMPLES / "chain-collapse.cat").category("Chain2")
    assert _sampled(B, 0, 2, 3, 20) == _sampled(B, 0, 2, 3, 20)
    assert _sampled(B, 0, 2, 3, 20) != _sampled(B, 1, 2, 3, 20)
    for seed in range(3):
        code, out, _ = run(capsys, "report", EXAMPLES / "chain-collapse.cat", "--seed", seed)
        assert code == 0 and "counit: holds" in out


def test_timestamps_opt_in(capsys):
    _, plain, _ = run(capsys, "check-presentation", EXAMPLES / "chain-collapse.cat")
    assert plain.startswith("report: ")
    _, stamped, _ = run(capsys, "check-presentation", EXAMPLES / "boundary-to-arrow.cat", "--timestamps")
    assert stamped.startswith("generated: ")
    assert stamped.split("\n", 1)[1] == (GOLDEN / "boundary-to-arrow.txt").read_text(encoding="utf-8")
    _, js, _ = run(capsys, "check-presentation", EXAMPLES / "boundary-to-arrow.cat", "--timestamps", "--format", "json")
    assert "generated" not in js


def test_identical_across_processes():
    cmd = [sys.executable, "-m", "fincat.cli", "report", str(EXAMPLES / "chain-collapse.cat"), "--format", "json"]
    runs = [subprocess.run(cmd, capture_output=True, env={**os.environ, "PYTHONHASHSEED": str(h)}) for h in (1, 2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
