import json
import subprocess
import sys
from pathlib import Path

import pytest

from homhnn import generate as gen
from homhnn.cli import (
    ParseError,
    file_from_structure,
    main,
    parse_algebra_file,
    render_algebra_file,
    run,
    structure_from_file,
)

DATA = Path(__file__).resolve().parent.parent / "data"


def code_of(*argv):
    return run(list(argv))[0]


@pytest.mark.parametrize("path", sorted(DATA.glob("*.*")), ids=lambda p: p.name)
def test_roundtrip_data_files(path):
    af = parse_algebra_file(path.read_text())
    assert parse_algebra_file(render_algebra_file(af)) == af


def test_roundtrip_generated_corpus():
    for S in gen.hom_associative_corpus(15, seed=4) + gen.hom_lie_corpus(15, seed=4):
        af = file_from_structure(S)
        again = parse_algebra_file(render_algebra_file(af))
        assert again == af
        T = structure_from_file(again)
        assert T._tensor == S._tensor and T.alpha == S.alpha


@pytest.mark.parametrize(
    "text",
    [
        "dim 2\n",
        "kind hom-lie\ndim 2\ntable\n  0 5 : 1 0\n",
        "kind hom-lie\ndim 2\ntable\n  0 1 : 1\n",
        "kind hom-lie\ndim 1\ntwist\n  0.5\n",
        "kind hom-lie\ndim 1\n  1\n",
        "kind what\ndim 1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_algebra_file(text)


def test_names_may_index_table():
    af = parse_algebra_file("kind hom-lie\ndim 2\nnames x y\ntable\n  x y : 0 1\n  y x : 0 -1\n")
    assert af.table[0][0] == (0, 1)


def test_exit_codes(tmp_path):
    d = str(DATA)
    assert code_of("check", f"{d}/sl2.alg") == 0
    assert code_of("check", f"{d}/gl2.alg") == 0
    assert code_of("check", f"{d}/sl2_perturbed.alg") == 1
    assert code_of("check", f"{d}/sl2_nonskew.alg") == 2
    assert code_of("check", f"{tmp_path}/missing.alg") == 2
    assert code_of("commutator", f"{d}/mat2.alg", "-o", f"{tmp_path}/gl2.alg") == 0
    assert code_of("check", f"{tmp_path}/gl2.alg") == 0
    assert code_of("semidirect", f"{d}/abelian1.alg", f"{d}/nonabelian2.alg", f"{d}/nonabelian2_by_adx.act") == 0
    assert code_of("hnn-assoc", f"{d}/dual_hnn.alg", "--maxlen", "2") == 0
    assert code_of("hnn-assoc", f"{d}/dual_hnn_theta_zero.alg", "--maxlen", "2") == 1
    assert code_of("hnn-lie", f"{d}/nonabelian2_hnn.alg", "--degree", "3", "--maxlen", "2") == 0
    assert code_of("hnn-lie", f"{d}/sl2_hnn_not_subalgebra.alg", "--degree", "3", "--maxlen", "2") == 1
    assert code_of("generate", "--mode", "random-search", "--dim", "1", "--nonabelian") == 3
    assert main(["no-such-command"]) == 2


def test_envelope_report():
    code, text = run(["--json", "envelope", str(DATA / "abelian1.alg"), "--degree", "3"])
    rep = json.loads(text)
    assert code == 0 and rep["degree_dims"] == [1, 1, 1, 1]


def test_hnn_lie_names_failed_hypothesis():
    code, text = run(["--json", "hnn-lie", str(DATA / "sl2_hnn_not_subalgebra.alg"), "--degree", "3", "--maxlen", "2"])
    assert code == 1 and json.loads(text)["failed_hypothesis"] == "Hom-Lie subalgebra"


def test_generate_yau_twist_swap(tmp_path):
    out = tmp_path / "tw.alg"
    code, _ = run(["generate", "--mode", "yau-twist", "--base", "sl2", "--involution", "swap", "-o", str(out)])
    assert code == 0
    assert run(["check", str(out)])[0] == 0
    assert out.read_text() == (DATA / "twisted_sl2.alg").read_text()


def test_generate_deterministic():
    argv = ["--json", "generate", "--mode", "yau-twist", "--kind", "hom-associative", "--base", "m2",
            "--basis-change", "--seed", "9"]
    assert run(argv) == run(argv)
    other = run(argv[:-1] + ["10"])
    assert json.loads(other[1])["seed"] == 10


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "homhnn.cli", "--json", "check", str(DATA / "sl2.alg")],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["axioms"]["pass"] is True
