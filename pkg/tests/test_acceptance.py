"""Acceptance criteria 1-11, one PASS/FAIL line each, all in exact arithmetic.

Run standalone with ``python tests/test_acceptance.py`` or through pytest; in
the latter case the lines appear in the terminal summary.
"""
import json
import random
import time
from fractions import Fraction
from pathlib import Path

from homhnn import generate as gen
from homhnn import library as lib
from homhnn.cli import run
from homhnn.construct import HomAction, check_hom_action, semidirect_product
from homhnn.exactlin import HomModule, InvalidInput, Matrix, unit_vec
from homhnn.freepres import FreeAlgebraTrunc, check_pbw_injectivity, enveloping, normalize_term, spanning_terms, Twist
from homhnn.homalg import (
    HomLieAlgebra,
    SubspaceData,
    adjoint,
    check_beta_k_derivation,
    check_hom_associative,
    check_hom_lie,
    check_ideal,
    check_subalgebra,
    commutator_hom_lie,
    derivation_space,
)
from homhnn.hnn import (
    HNNAssocData,
    HNNLetter,
    HNNLieData,
    build_M,
    build_Q,
    check_hnn_relation,
    crosscheck_semidirect,
    discriminate_variants,
    embedding_certificate_assoc,
    embedding_certificate_lie,
    search_assoc_instances,
    sigma_op,
    validate_hnn_assoc_data,
)

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).parent / "golden" / "variant_discrimination.json"
RESULTS = []


def criterion(number, title, budget):
    def wrap(fn):
        def test():
            start = time.perf_counter()
            status, detail = "FAIL", ""
            try:
                detail = fn() or ""
                elapsed = time.perf_counter() - start
                assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
                status = "PASS"
            except Exception as exc:
                detail = str(exc) or type(exc).__name__
                raise
            finally:
                elapsed = time.perf_counter() - start
                line = f"criterion {number:2d} {status}: {title} ({elapsed:.2f}s) {detail}".rstrip()
                RESULTS.append(line)
                print(line)

        test.__name__ = fn.__name__
        return test

    return wrap


@criterion(1, "axiom suites and sl2 perturbations", 1)
def test_criterion_01_axiom_suite():
    assert check_hom_lie(lib.sl2()).passed
    assert check_hom_lie(lib.gl2_lie()).passed
    assert check_hom_associative(lib.matrix_algebra()).passed
    base = lib.sl2().bracket
    entries = [(i, j, k, c) for i in range(3) for j in range(3) for k in range(3) for c in (1, -1, 2)]
    random.Random(0).shuffle(entries)
    caught = 0
    for i, j, k, c in entries[:50]:
        t = [[list(v) for v in row] for row in base]
        t[i][j][k] += c
        try:
            rep = check_hom_lie(HomLieAlgebra.build(t))
        except InvalidInput as exc:
            assert exc.witness[0] == "skew-symmetry" and len(exc.witness[1]) == 3
            caught += 1
            continue
        v = rep.witness("hom-jacobi")
        assert v is not None and len(v.witness) == 3
        caught += 1
    assert caught == 50
    return "50/50 perturbations rejected with witnesses"


@criterion(2, "commutator functor on generated Hom-associative algebras", 10)
def test_criterion_02_commutator():
    corpus = gen.hom_associative_corpus(120, seed=0)
    assert all(check_hom_associative(A).passed for A in corpus)
    assert max(A.dim for A in corpus) <= 4
    ok = sum(check_hom_lie(commutator_hom_lie(A)).passed for A in corpus)
    assert ok == len(corpus), f"{ok}/{len(corpus)}"
    return f"{ok}/{len(corpus)}"


@criterion(3, "adjoint of twist-fixed vectors is a derivation", 5)
def test_criterion_03_adjoint_derivation():
    count = 0
    for L in gen.hom_lie_corpus(60, seed=0):
        for x in L.basis():
            if L.twist(x) == x:
                assert check_beta_k_derivation(L, adjoint(L, x)).passed
                count += 1
    assert count > 0
    return f"{count} fixed basis vectors"


@criterion(4, "semidirect products of validated Hom-actions", 5)
def test_criterion_04_semidirect():
    actions = []
    for L in gen.hom_lie_corpus(20, seed=1):
        actions.append(HomAction.adjoint(L))
        for x in L.basis():
            if L.twist(x) == x:
                actions.append(HomAction.by_derivation(L, adjoint(L, x).map))
    actions = [a for a in actions if check_hom_action(a).passed]
    assert len(actions) >= 20
    for act in actions:
        sd = semidirect_product(act)
        assert check_hom_lie(sd.result).passed
        assert check_ideal(sd.result, sd.target_subspace).passed
        assert check_subalgebra(sd.result, sd.actor_subspace).passed
    return f"{len(actions)} actions"


@criterion(5, "free algebra: involutive normal forms and n^k dimensions", 20)
def test_criterion_05_free_algebra():
    for n in (1, 2):
        for k in range(1, 5):
            for t in spanning_terms(n, k):
                assert normalize_term(Twist(Twist(t))) == t
    for n in (1, 2):
        F = FreeAlgebraTrunc(HomModule(n, Matrix.identity(n)), 4)
        assert F.degree_dims()[1:] == [n ** k for k in range(1, 5)]
    F = FreeAlgebraTrunc(HomModule(2, Matrix([[0, 1], [1, 0]])), 4)
    for t in F.basis:
        u = {t: Fraction(1)}
        assert F.equal_mod_ideal(F.twist(F.twist(u)), u)
    return "n=1: [1,1,1,1], n=2: [2,4,8,16]"


@criterion(6, "enveloping algebras and PBW injectivity", 30)
def test_criterion_06_pbw():
    E = enveloping(lib.sl2(), 2)
    assert E.algebra.dimension == 10
    for g in (lib.sl2(), lib.abelian_lie(1), lib.abelian_lie(2), lib.abelian_lie(3), lib.twisted_sl2()):
        E = enveloping(g, 3)
        assert E.report.passed
        assert check_pbw_injectivity(E).passed
    return "dim U(sl2)<=2 = 10"


@criterion(7, "HNN-associative embedding", 20)
def test_criterion_07_hnn_assoc():
    A = lib.dual_numbers()
    B = SubspaceData(2, ((1, 0),))
    data = HNNAssocData(A, (HNNLetter(B, ((1,), (0,)), ((0,), (0,)), ((0, 1),)),))
    assert validate_hnn_assoc_data(data).passed
    Q = build_Q(data, 2)
    sig = sigma_op(Q, 0)
    assert check_hnn_relation(Q, 0, (1,), sigma=sig).zero
    assert embedding_certificate_assoc(data, 2).passed
    found = search_assoc_instances(0, 3, max_instances=10_000)
    assert found
    for inst in found:
        assert inst.A.alpha == Matrix.identity(inst.A.dim)
        L = inst.letters[0]
        Qi = build_Q(inst, 2)
        s = sigma_op(Qi, 0)
        for p in range(L.B.dim):
            assert check_hnn_relation(Qi, 0, unit_vec(L.B.dim, p), sigma=s).zero
    return f"worked example + {len(found)} searched instances"


@criterion(8, "theta-derivation variant discrimination", 20)
def test_criterion_08_variant():
    report = json.loads(json.dumps(discriminate_variants(0, 3, 2)))
    golden = json.loads(GOLDEN.read_text())
    assert report == golden
    assert report["selected_default"] in ("mixed", "twisted-both", "both")
    from homhnn.homalg import DEFAULT_VARIANT

    if report["selected_default"] != "both":
        assert DEFAULT_VARIANT.value == report["selected_default"]
    return f"selected {report['selected_default']}"


@criterion(9, "HNN-Lie embedding", 30)
def test_criterion_09_hnn_lie():
    cases = [
        HNNLieData(lib.abelian_lie(1), SubspaceData.whole(1), Matrix([[1]])),
        HNNLieData(lib.nonabelian2(), SubspaceData(2, ((0, 1),)), Matrix([[0], [1]])),
    ]
    for data in cases:
        model = build_M(data, 3, 2)
        M = model.algebra
        t = M.gen(data.g.dim)
        for p, sv in enumerate(data.s.basis):
            x = M.from_vector(sv)
            comm = M.mul_free(t, x)
            for k, c in M.mul_free(x, t).items():
                comm[k] = comm.get(k, 0) - c
            assert M.equal_mod_ideal(comm, M.from_vector(data.d.column(p)))
        assert embedding_certificate_lie(data, 3, 2).passed
    return "abelian and nonabelian cases"


@criterion(10, "semidirect cross-check of HNN tables", 5)
def test_criterion_10_crosscheck():
    count = 0
    corpus = gen.hom_lie_corpus(30, seed=0) + [lib.sl2(), lib.abelian_lie(2), lib.twisted_sl2()]
    for L in corpus:
        for d in derivation_space(L):
            assert check_beta_k_derivation(L, d).passed
            assert crosscheck_semidirect(L, d).passed
            count += 1
    return f"{count} derivations"


def _matrix():
    d = str(DATA)
    return [
        (["check", f"{d}/sl2.alg"], 0),
        (["check", f"{d}/gl2.alg"], 0),
        (["check", f"{d}/twisted_sl2.alg"], 0),
        (["check", f"{d}/sl2_perturbed.alg"], 1),
        (["check", f"{d}/sl2_nonskew.alg"], 2),
        (["check", f"{d}/does_not_exist.alg"], 2),
        (["check", f"{d}/nonabelian2_by_adx.act"], 2),
        (["commutator", f"{d}/mat2.alg"], 0),
        (["commutator", f"{d}/sl2.alg"], 2),
        (["semidirect", f"{d}/abelian1.alg", f"{d}/nonabelian2.alg", f"{d}/nonabelian2_by_adx.act"], 0),
        (["envelope", f"{d}/abelian1.alg", "--degree", "3"], 0),
        (["envelope", f"{d}/sl2.alg", "--degree", "2"], 0),
        (["envelope", f"{d}/sl2_perturbed.alg", "--degree", "2"], 1),
        (["hnn-assoc", f"{d}/dual_hnn.alg", "--maxlen", "2"], 0),
        (["hnn-assoc", f"{d}/dual_hnn_theta_zero.alg", "--maxlen", "2"], 1),
        (["hnn-lie", f"{d}/abelian1_hnn.alg", "--degree", "3", "--maxlen", "2"], 0),
        (["hnn-lie", f"{d}/nonabelian2_hnn.alg", "--degree", "3", "--maxlen", "2"], 0),
        (["hnn-lie", f"{d}/sl2_hnn_not_subalgebra.alg", "--degree", "3", "--maxlen", "2"], 1),
        (["generate", "--mode", "yau-twist", "--base", "sl2", "--involution", "swap"], 0),
        (["generate", "--mode", "yau-twist", "--kind", "hom-associative", "--base", "m2", "--seed", "3",
          "--basis-change"], 0),
        (["generate", "--mode", "random-search", "--kind", "hom-lie", "--dim", "3", "--seed", "5"], 0),
        (["generate", "--mode", "random-search", "--dim", "1", "--nonabelian"], 3),
    ]


@criterion(11, "CLI determinism and exit codes", 10)
def test_criterion_11_cli():
    n = 0
    for argv, expected in _matrix():
        for fmt in ([], ["--json"]):
            code1, text1 = run(fmt + argv)
            code2, text2 = run(fmt + argv)
            assert code1 == expected, f"{argv}: exit {code1}, expected {expected}"
            assert (code1, text1) == (code2, text2), f"{argv}: nondeterministic"
            assert code1 in (0, 1, 2, 3)
            n += 1
    return f"{n} runs"


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:
                failures += 1
    sys.exit(1 if failures else 0)
