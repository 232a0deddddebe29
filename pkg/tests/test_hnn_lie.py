
import pytest

from homhnn import generate as gen
from homhnn import library as lib
from homhnn.exactlin import InvalidInput, Matrix
from homhnn.freepres import add_into
from homhnn.homalg import DerivationData, SubspaceData, adjoint, derivation_space, fixed_vectors
from homhnn.hnn import (
    HNNLieData,
    build_M,
    crosscheck_semidirect,
    embedding_certificate_lie,
    hnn_lie_presentation,
    validate_hnn_lie_data,
)


def weyl():
    return HNNLieData(lib.abelian_lie(1), SubspaceData.whole(1), Matrix([[1]]))


def nonab():
    return HNNLieData(lib.nonabelian2(), SubspaceData(2, ((0, 1),)), Matrix([[0], [1]]))


def test_presentation_examples():
    p = hnn_lie_presentation(HNNLieData(lib.sl2(), SubspaceData.zero(3), Matrix.zeros(3, 0)))
    assert p.t_relations == ()
    p = hnn_lie_presentation(nonab())
    assert "[t, y] = y" in p.render()


def test_not_a_subalgebra():
    data = HNNLieData(lib.sl2(), SubspaceData(3, ((0, 1, 0), (0, 0, 1))), Matrix.zeros(3, 2))
    rep = validate_hnn_lie_data(data)
    assert rep.failed("Hom-Lie subalgebra")
    with pytest.raises(InvalidInput):
        hnn_lie_presentation(data)


def test_bad_derivation():
    data = HNNLieData(lib.nonabelian2(), SubspaceData.whole(2), Matrix([[1, 0], [0, 0]]))
    assert validate_hnn_lie_data(data).failed("derivation Leibniz rule")


def test_weyl_relation_in_M():
    model = build_M(weyl(), 3, 2)
    M = model.algebra
    t, x = M.gen(1), M.gen(0)
    lhs = add_into(M.mul_free(t, x), M.mul_free(x, t), -1)
    assert M.equal_mod_ideal(lhs, x)
    # d = 0, s = 0: U_g with a free letter, nothing collapses
    model = build_M(HNNLieData(lib.abelian_lie(1), SubspaceData.zero(1), Matrix.zeros(1, 0)), 3, 2)
    assert model.algebra.degree_dims() == [1, 2, 4, 7]


@pytest.mark.parametrize("make", [weyl, nonab])
def test_certificates_pass(make):
    cert = embedding_certificate_lie(make(), 3, 2)
    assert cert.passed
    assert dict(cert.info)["U_g_to_M_kernel_dim"] == 0


def test_abelian_s_zero():
    assert embedding_certificate_lie(HNNLieData(lib.abelian_lie(2), SubspaceData.zero(2), Matrix.zeros(2, 0)), 3, 1).passed


def test_twisted_sl2_with_inner_derivation():
    g = lib.twisted_sl2()
    (x,) = fixed_vectors(g)
    cert = embedding_certificate_lie(HNNLieData.from_derivation(g, adjoint(g, x)), 3, 1)
    assert cert.passed


def test_crosscheck_examples():
    g = lib.sl2()
    assert crosscheck_semidirect(g, DerivationData(Matrix.zeros(3, 3))).passed
    assert crosscheck_semidirect(g, adjoint(g, (1, 0, 0))).passed
    a = lib.abelian_lie(2)
    assert crosscheck_semidirect(a, DerivationData(Matrix.identity(2))).passed
    with pytest.raises(InvalidInput):
        crosscheck_semidirect(lib.nonabelian2(), DerivationData(Matrix([[1, 0], [0, 0]])))


def test_crosscheck_over_corpus():
    for L in gen.hom_lie_corpus(15, seed=2):
        for d in derivation_space(L):
            assert crosscheck_semidirect(L, d).passed


def test_lie_monotone():
    for make in (weyl, nonab):
        assert embedding_certificate_lie(make(), 2, 1).passed
        assert embedding_certificate_lie(make(), 3, 2).passed
