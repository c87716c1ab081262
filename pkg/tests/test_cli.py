import io
import json
import subprocess
import sys

import pytest

import oracles
from akshara_entropy import cli
from akshara_entropy.table_io import reference_table, tier_set
from conftest import FIXTURES, synthetic_articles, write_manifest


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def toy_manifest(tmp_path_factory):
    directory = tmp_path_factory.mktemp("toy")
    return write_manifest(directory, synthetic_articles(80, 150, seed=11), volumes=2)


def test_validate_table_default(capsys):
    code, out, _ = run(["validate-table"], capsys)
    assert code == 0
    assert "rows: 408" in out and "tiers: 8" in out and "status: ok" in out
    assert "tier r=0.60 end=54" in out
    assert out.count("warning: row") == 30


def test_validate_table_invalid(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("# tier r=0.6 end=1\n1\tत\tU+XYZ\t0.5\n", encoding="utf-8")
    code, out, _ = run(["validate-table", str(bad)], capsys)
    assert code == 1 and "row 1: malformed codepoint" in out and "status: invalid" in out


def test_approx_on_passage(capsys):
    text_path = FIXTURES / "t1.txt"
    code, out, err = run(["approx", "--r", "0.75", str(text_path)], capsys)
    assert code == 0
    text = text_path.read_text(encoding="utf-8")
    kept, replaced = oracles.membership_counts(text, tier_set(reference_table(), 0.75))
    assert f"letters={kept + replaced} replaced={replaced}" in err
    assert out.count("□") == replaced


def test_segment_empty_input(capsys, monkeypatch):
    code, out, err = run(["segment"], capsys, stdin="", monkeypatch=monkeypatch)
    assert code == 0 and out == "" and "letters=0" in err


def test_segment_output(capsys, monkeypatch):
    code, out, _ = run(["segment"], capsys, stdin="च्या ा", monkeypatch=monkeypatch)
    assert out.splitlines() == [
        "letter\tच्या\tU+091A U+094D U+092F U+093E",
        'separator\twhitespace\t" "',
        'separator\torphan\t"ा"',
    ]


def test_wordlen_and_freq(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("तर सं. कां त", encoding="utf-8")
    code, out, err = run(["wordlen", str(src)], capsys)
    assert out == "length,count\n1,3\n2,1\n" and "words=4" in err
    share = tmp_path / "share.csv"
    code, out, _ = run(["freq", str(src), "--share-csv", str(share)], capsys)
    assert out.splitlines()[1] == "1,त,U+0924,2"
    assert share.read_text().splitlines()[-1] == "4,1.0"


def test_corpus_commands(toy_manifest, tmp_path, capsys):
    code, out, err = run(["partition", str(toy_manifest)], capsys)
    assert code == 0 and len(out.splitlines()) == 21 and "books=20" in err

    sizes = tmp_path / "sizes.csv"
    code, out, err = run(["sets", str(toy_manifest), "--sizes-csv", str(sizes)], capsys)
    assert code == 0 and out.startswith("letter,r0.60")
    n_r = [int(line.split(",")[1]) for line in sizes.read_text().splitlines()[1:]]
    assert n_r == sorted(n_r)

    table_out = tmp_path / "table.tsv"
    code, out, err = run(["probs", str(toy_manifest), "--table-out", str(table_out)], capsys)
    assert code == 0 and out.startswith("letter,codepoints,p,cv")
    assert "sanity_ratio=" in err
    code, out, _ = run(["validate-table", str(table_out)], capsys)
    assert code == 0 and "tiers: 8" in out

    code, out, err = run(["entropy", str(toy_manifest), "--k-max", "4"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,k,E_mean,E_cv,F" and len(lines) == 1 + 8 * 4
    assert "mesh:" in err

    code, out, _ = run(["entropy", str(toy_manifest), "--table", str(table_out), "--k-max", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 1 + 8 * 2


def test_outputs_are_deterministic_across_workers(toy_manifest, tmp_path, capsys):
    outputs = []
    for workers in ("1", "3"):
        target = tmp_path / f"grid{workers}.csv"
        assert cli.main(["entropy", str(toy_manifest), "--k-max", "3", "--per-book",
                         "--workers", workers, "-o", str(target)]) == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    assert cli.main(["entropy", str(toy_manifest), "--k-max", "3", "--per-book", "-o",
                     str(tmp_path / "again.csv")]) == 0
    assert (tmp_path / "again.csv").read_bytes() == outputs[0]
    capsys.readouterr()


def test_config_precedence(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"k_max": 3, "r_values": [0.5, 0.7], "workers": 2}), encoding="utf-8")
    args = cli.build_parser().parse_args(["entropy", "m.tsv", "--config", str(config), "--k-max", "5"])
    cfg = cli.make_config(args)
    assert cfg.k_max == 5  # flag wins
    assert cfg.r_values == (0.5, 0.7) and cfg.workers == 2  # file beats default
    assert cfg.n_books == 20  # default


@pytest.mark.parametrize("argv,message", [
    (["entropy", "missing.tsv"], "error:"),
    (["approx", "--r", "0.5"], "unknown tier"),
    (["sets", "m.tsv", "--r-values", "0.7,0.6"], "strictly increasing"),
    (["entropy", "m.tsv", "--k-max", "0"], "k_max"),
    (["approx", "--placeholder", "क"], "placeholder"),
])
def test_errors_exit_nonzero(argv, message, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("तर"))
    code, _, err = run(argv, capsys)
    assert code == 1 and message in err


def test_k_max_longer_than_a_book(tmp_path, capsys):
    manifest = write_manifest(tmp_path, ["तर"] * 40)
    code, _, err = run(["entropy", str(manifest)], capsys)
    assert code == 1 and "fewer than k_max" in err


def test_unknown_config_key(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text('{"kmax": 3}', encoding="utf-8")
    code, _, err = run(["segment", "--config", str(config)], capsys)
    assert code == 1 and "unknown config keys: kmax" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "akshara_entropy", "validate-table"],
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0 and "status: ok" in proc.stdout
