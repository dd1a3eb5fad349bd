"""Golden-file tests for the command line.

Each case runs ``main`` in-process and compares stdout, stderr and the exit
code with files under tests/golden.  Set PHYLOREL_UPDATE_GOLDEN=1 to rewrite
them after an intended change.
"""
import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from phylorel.cli import main
from phylorel.tree import canonical_form, parse_tree

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
UPDATE = os.environ.get("PHYLOREL_UPDATE_GOLDEN") == "1"

# name -> (argv with {in} for the input directory, expected exit code)
CASES = {
    "derive_relation": (["derive-relation", "--tree", "{in}/s3.tree"], 0),
    "derive_relation_dir": (["derive-relation", "--mode", "dir", "--tree", "{in}/rooted.tree"], 0),
    "derive_relation_unrooted_dir": (["derive-relation", "--mode", "dir", "--tree", "{in}/s3.tree"], 3),
    "derive_ternary": (["derive-ternary", "--tree", "{in}/caterpillar.tree"], 0),
    "derive_ternary_no_colors": (["derive-ternary", "--tree", "{in}/plain.tree"], 2),
    "check_relation_ok": (["check-relation", "--input", "{in}/path.rel"], 0),
    "check_relation_cycle": (["check-relation", "--input", "{in}/triangle.rel"], 3),
    "check_relation_in_pointer": (["check-relation", "--input", "{in}/inpointer.rel"], 3),
    "check_relation_malformed": (["check-relation", "--input", "{in}/broken.rel"], 2),
    "check_ternary_ok": (["check-ternary", "--input", "{in}/caterpillar.ter"], 0),
    "check_ternary_cond3": (["check-ternary", "--input", "{in}/cond3.ter"], 3),
    "check_ternary_cond4": (["check-ternary", "--input", "{in}/pentagon.ter"], 3),
    "check_ternary_binary": (["check-ternary", "--require-binary", "--input", "{in}/star4.ter"], 3),
    "reconstruct_relation": (["reconstruct-relation", "--input", "{in}/path.rel"], 0),
    "reconstruct_relation_two": (["reconstruct-relation", "--input", "{in}/two.rel"], 0),
    "reconstruct_relation_dir": (["reconstruct-relation", "--input", "{in}/dirpath.rel"], 0),
    "reconstruct_relation_mixed": (["reconstruct-relation", "--input", "{in}/mixed.rel"], 0),
    "reconstruct_relation_binary": (["reconstruct-relation", "--all-binary", "--input", "{in}/empty4.rel"], 0),
    "reconstruct_relation_binary_two": (["reconstruct-relation", "--all-binary", "--input", "{in}/two.rel"], 4),
    "reconstruct_relation_cycle": (["reconstruct-relation", "--input", "{in}/triangle.rel"], 3),
    "reconstruct_ternary": (["reconstruct-ternary", "--input", "{in}/caterpillar.ter"], 0),
    "reconstruct_ternary_six": (["reconstruct-ternary", "--input", "{in}/six.ter"], 4),
    "quartets_tree": (["quartets", "--tree", "{in}/caterpillar.tree"], 0),
    "quartets_ternary": (["quartets", "--ternary", "{in}/caterpillar.ter"], 0),
    "quartets_conflict": (["quartets", "--ternary", "{in}/six.ter"], 3),
    "roots": (["roots", "--input", "{in}/mixed.rel"], 0),
    "dev_enumerate": (["dev", "enumerate", "--taxa", "a,b,c,d"], 0),
    "dev_enumerate_datings": (["dev", "enumerate", "--taxa", "a,b,c,d", "--kind", "datings",
                               "--discriminating"], 0),
    "broken_tree": (["derive-relation", "--tree", "{in}/broken.tree"], 2),
    "missing_file": (["derive-relation", "--tree", "{in}/nope.tree"], 2),
}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def expand(argv):
    return [a.replace("{in}", "tests/golden/inputs") for a in argv]


@pytest.fixture(autouse=True)
def in_repo(monkeypatch):
    monkeypatch.chdir(Path(__file__).parent.parent)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    argv, want_code = CASES[name]
    code, out, err = run(expand(argv))
    assert code == want_code, err
    for suffix, text in ((".out", out), (".err", err)):
        path = GOLDEN / (name + suffix)
        if UPDATE:
            path.write_text(text, encoding="utf-8", newline="\n")
        assert path.read_text(encoding="utf-8") == text


@pytest.mark.parametrize("name", sorted(CASES))
def test_rerun_is_byte_identical(name):
    argv = expand(CASES[name][0])
    assert run(argv) == run(argv)


def test_output_flag(tmp_path):
    target = tmp_path / "rel.txt"
    code, out, _ = run(["-o", str(target), "derive-relation", "--tree", "tests/golden/inputs/s3.tree"])
    assert code == 0 and out == ""
    assert target.read_text() == (GOLDEN / "derive_relation.out").read_text()


def test_pipe_round_trip():
    # derive-ternary | reconstruct-ternary through a real process and stdin
    cmd = [sys.executable, "-m", "phylorel"]
    src = "tests/golden/inputs/caterpillar.tree"
    derived = subprocess.run(cmd + ["derive-ternary", "--tree", src],
                             capture_output=True, text=True, check=True).stdout
    rebuilt = subprocess.run(cmd + ["reconstruct-ternary", "--input", "-"], input=derived,
                             capture_output=True, text=True, check=True).stdout
    original = parse_tree(Path(src).read_text())
    assert canonical_form(parse_tree(rebuilt)) == canonical_form(original)


def test_usage_error():
    code, _, _ = run(["reconstruct-relation"])
    assert code == 2
