import json
import subprocess
import sys

import pytest

from fusion_census import cli, lemmas
from fusion_census.lemmas import LemmaCheck


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_census_pq2_oracle(capsys):
    code, out, _ = run(capsys, "census-pq2", "--p", "3", "--q", "2", "--oracle")
    d = json.loads(out)
    assert code == 0
    assert d["counts"]["count_general"] == 3 and d["oracle_checked"] is True
    assert "wall_time" not in d


def test_census_pq2_branches(capsys):
    code, out, _ = run(capsys, "census-pq2", "--p", "2", "--q", "3")
    assert code == 0 and json.loads(out)["counts"]["count"] == 2
    code, out, _ = run(capsys, "census-pq2", "--p", "3", "--q", "7")
    assert code == 0 and json.loads(out)["counts"]["count"] == 0
    code, out, _ = run(capsys, "census-pq2", "--p", "5", "--q", "19", "--mode", "grading")
    assert json.loads(out)["counts"]["count"] == 20


def test_census_pq2_tsv_and_timing(capsys):
    code, out, _ = run(capsys, "census-pq2", "--p", "5", "--q", "19", "--format", "tsv")
    assert code == 0
    assert out.splitlines()[1].split("\t") == ["5", "19", "root_pair_family", "20", "10", "false"]
    code, out, _ = run(capsys, "census-pq2", "--p", "3", "--q", "2", "--timing")
    assert "wall_time" in json.loads(out)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["census-pq2", "--p", "4", "--q", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "census-pq2", "--p", "3", "--q", "3")
    assert code == 2 and "distinct" in err


def test_census_r3a(capsys):
    code, out, _ = run(capsys, "census-r3a", "--group", "2^1:2", "--oracle")
    d = json.loads(out)
    assert code == 0 and d["counts"]["count"] == 6 and d["oracle_checked"]
    code, out, _ = run(capsys, "census-r3a", "--group", "5^1:1")
    assert json.loads(out)["counts"]["count"] == 0
    code, out, _ = run(capsys, "census-r3a", "--group", "2^1:2+7^1:4")
    assert json.loads(out)["counts"]["count"] == 18
    code, _, err = run(capsys, "census-r3a", "--group", "3^1:2")
    assert code == 2 and "divisible by 3" in err
    code, _, _ = run(capsys, "census-r3a", "--group", "garbage")
    assert code == 2


def test_verify_lemma(capsys):
    code, out, _ = run(capsys, "verify-lemma", "--name", "uniquegamma", "--q", "5", "--n", "1", "--a", "1")
    assert code == 0 and json.loads(out)["details"]["orbits"] == 1
    code, _, _ = run(capsys, "verify-lemma", "--name", "commutes", "--qn", "4")
    assert code == 0
    code, _, _ = run(capsys, "verify-lemma", "--name", "claim2", "--p", "3", "--q", "2")
    assert code == 0
    code, _, _ = run(capsys, "verify-lemma", "--name", "uniqueskew", "--q", "2")
    assert code == 0
    code, _, _ = run(capsys, "verify-lemma", "--name", "qgp", "--group", "2^1:2")
    assert code == 0
    code, _, _ = run(capsys, "verify-lemma", "--name", "uniquegamma", "--q", "3")
    assert code == 2


def test_resource_cap_exit(capsys, monkeypatch):
    monkeypatch.delenv("FUSION_CENSUS_CAP", raising=False)
    code, _, err = run(capsys, "verify-lemma", "--name", "claim2", "--p", "5", "--q", "19")
    assert code == 4 and "FUSION_CENSUS_CAP" in err
    code, _, _ = run(capsys, "verify-lemma", "--name", "claim2", "--p", "5", "--q", "19",
                     "--cap", "1000000")
    assert code == 0
    monkeypatch.setenv("FUSION_CENSUS_CAP", "1000000")
    code, _, _ = run(capsys, "census-pq2", "--p", "5", "--q", "19", "--oracle")
    assert code == 0


def test_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(lemmas, "verify_commutes",
                        lambda qn: LemmaCheck("commutes", False, {"qn": qn}, {}))
    code, _, _ = run(capsys, "verify-lemma", "--name", "commutes", "--qn", "2")
    assert code == 3

    class Fake:
        count = 99
    monkeypatch.setattr(cli.oracle, "gamma_orbits", lambda *a, **k: Fake())
    code, out, _ = run(capsys, "census-r3a", "--group", "2^1:2", "--oracle")
    assert code == 3 and json.loads(out)["oracle"]["agree"] is False


def test_decompose_form(capsys):
    code, out, _ = run(capsys, "decompose-form", "--group", "2^1:2", "--gamma", "[[1,0],[1,1]]")
    assert code == 0
    assert json.loads(out)["blocks"] == [{"prime": 2, "exponent": 1, "tag": "special(1)"}]
    code, _, _ = run(capsys, "decompose-form", "--group", "2^1:2", "--gamma", "[[1,0],")
    assert code == 2
    code, _, _ = run(capsys, "decompose-form", "--group", "3^1:2", "--gamma", "[[0,1],[2,0]]")
    assert code == 2


def test_enumerate_orth(capsys):
    code, out, _ = run(capsys, "enumerate-orth", "--group", "2", "--count-only")
    assert code == 0 and json.loads(out) == {"group": "2^1:1", "order": 2}
    code, out, _ = run(capsys, "enumerate-orth", "--group", "2")
    assert sorted(json.loads(out)["elements"]) == [[[0, 1], [1, 0]], [[1, 0], [0, 1]]]
    code, _, _ = run(capsys, "enumerate-orth", "--group", "2^1:4", "--cap", "100")
    assert code == 4


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--oracle", "--cap", "100000000")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split("\t") == ["p", "q_or_A", "branch", "count_grading", "count_general",
                                    "oracle_checked"]
    assert len(lines) == 1 + len(cli.REPORT_PQ2) + len(cli.REPORT_R3A)
    flags = [line.rsplit("\t", 1)[1] for line in lines[1:]]
    assert flags == ["true"] * (len(flags) - 1) + ["skipped"]   # |A| = 9604 is beyond the oracle


def test_subprocess_determinism():
    argv = [sys.executable, "-m", "fusion_census", "census-pq2", "--p", "7", "--q", "13"]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "fusion_census", "census-pq2", "--p", "x"],
                         capture_output=True)
    assert bad.returncode == 2
