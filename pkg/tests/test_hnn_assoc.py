import json
from fractions import Fraction
from pathlib import Path

import pytest

from homhnn import library as lib
from homhnn.exactlin import InvalidInput, Matrix, solve, unit_vec
from homhnn.homalg import SubspaceData
from homhnn.hnn import (
    HNNAssocData,
    HNNLetter,
    build_Q,
    check_hnn_relation,
    decomposition_matrix,
    discriminate_variants,
    embedding_certificate_assoc,
    enumerate_normal_sequences,
    left_mult_op,
    search_assoc_instances,
    sigma_op,
    validate_hnn_assoc_data,
)

GOLDEN = Path(__file__).parent / "golden" / "variant_discrimination.json"


def dual_data(theta=((1,), (0,)), alpha=None):
    A = lib.dual_numbers(alpha)
    B = SubspaceData(2, ((1, 0),))
    return HNNAssocData(A, (HNNLetter(B, theta, ((0,), (0,)), ((0, 1),)),))


@pytest.fixture(scope="module")
def instances():
    return search_assoc_instances(0, 3, max_instances=80)


def test_worked_example_validates():
    assert validate_hnn_assoc_data(dual_data()).passed


def test_theta_zero_not_injective():
    rep = validate_hnn_assoc_data(dual_data(theta=((0,), (0,))))
    assert rep.failed("letter 1: theta is injective")


def test_sign_twist_on_dual_numbers():
    # alpha = diag(1, -1) is multiplicative here, but alpha(1)(1x) = x while (1 1)alpha(x) = -x
    rep = validate_hnn_assoc_data(dual_data(alpha=Matrix.diag([1, -1])))
    assert rep.ok("letter 1: theta is a morphism")
    assert rep.ok("letter 1: alpha commutes with delta")
    assert rep.ok("multiplicativity")
    assert rep.failed("hom-associativity")


def test_normal_sequence_counts():
    A = lib.diagonal_algebra(3)
    B = SubspaceData(3, ((1, 1, 1),))
    X = ((1, 0, 0), (0, 1, 0))
    data = HNNAssocData(A, (HNNLetter(B, ((1,), (1,), (1,)), ((0,), (0,), (0,)), X),))
    assert enumerate_normal_sequences(data, 0) == [()]
    assert len(enumerate_normal_sequences(data, 1, bare_letters=False)) == 3
    assert len(enumerate_normal_sequences(data, 2, bare_letters=False)) == 7
    # with the bare letter the alphabet has three tags
    assert len(enumerate_normal_sequences(data, 2)) == 1 + 3 + 9
    with pytest.raises(InvalidInput):
        enumerate_normal_sequences(data, -1)


def test_Q_dimensions_and_twist():
    data = dual_data()
    assert build_Q(data, 2, bare_letters=False).dim == 6
    Q0 = build_Q(data, 0)
    assert Q0.dim == 2 and Q0.alpha == data.A.alpha
    Q = build_Q(data, 3)
    assert Q.alpha @ Q.alpha == Matrix.identity(Q.dim)


def test_left_mult_examples():
    data = dual_data()
    Q = build_Q(data, 2)
    assert left_mult_op(Q, (0, 0)).matrix.is_zero()
    assert left_mult_op(Q, (1, 0)).matrix == Matrix.identity(Q.dim)
    X = left_mult_op(Q, (0, 1)).matrix
    for u in Q.sequences:
        assert X.column(Q.coord(0, u)) == unit_vec(Q.dim, Q.coord(1, u))
        assert not any(X.column(Q.coord(1, u)))


def test_left_mult_linear(instances):
    for data in instances[:10]:
        Q = build_Q(data, 1)
        n = data.A.dim
        a, b = unit_vec(n, 0), unit_vec(n, n - 1)
        combo = tuple(2 * x - 3 * y for x, y in zip(a, b))
        lhs = left_mult_op(Q, combo).matrix
        assert lhs == left_mult_op(Q, a).matrix.scale(2) - left_mult_op(Q, b).matrix.scale(3)


def test_sigma_worked_example():
    data = dual_data()
    Q = build_Q(data, 2)
    S = sigma_op(Q, 0)
    image = S.matrix.column(Q.coord(0, ()))
    assert image == unit_vec(Q.dim, Q.coord(0, ((0, None),)))
    boundary = [Q.coord(j, u) for u in Q.sequences if len(u) == 2 for j in range(2)]
    assert set(S.clipped) == set(boundary)
    assert not any(S.matrix.apply((0,) * Q.dim))


def sigma_oracle(data, r, i):
    """Direct dict implementation of the sigma formula, independent of the matrix builder."""
    A = data.A
    L = data.letters[i]
    n = A.dim
    ax = [A.twist(x) for x in L.X]
    cols = [tuple(L.B.basis)] + [[A.mul(b, a) for b in L.B.basis] for a in ax]
    flat = [v for block in cols for v in block]
    out = {}
    for u in enumerate_normal_sequences(data, r - 1):
        for j in range(n):
            c = solve(flat, unit_vec(n, j))
            m = L.B.dim
            res = {}
            for slot in range(1 + len(L.X)):
                bc = c[slot * m:(slot + 1) * m]
                tag = (i, None) if slot == 0 else (i, slot - 1)
                th = L.theta.apply(bc)
                de = L.delta.apply(bc)
                if slot:
                    de = A.mul(de, ax[slot - 1])
                for k in range(n):
                    if th[k]:
                        res[(k, (tag,) + u)] = res.get((k, (tag,) + u), 0) + th[k]
                    if de[k]:
                        res[(k, u)] = res.get((k, u), 0) + de[k]
            out[(j, u)] = {key: v for key, v in res.items() if v}
    return out


def test_sigma_matches_oracle(instances):
    for data in instances[:25]:
        Q = build_Q(data, 2)
        S = sigma_op(Q, 0)
        for (j, u), img in sigma_oracle(data, 2, 0).items():
            col = S.matrix.column(Q.coord(j, u))
            expect = [Fraction(0)] * Q.dim
            for (k, w), v in img.items():
                expect[Q.coord(k, w)] = v
            assert col == tuple(expect)


def test_sigma_grading(instances):
    for data in instances[:15]:
        Q = build_Q(data, 2)
        S = sigma_op(Q, 0)
        for u in Q.sequences:
            if len(u) >= 2:
                continue
            for j in range(Q.n):
                col = S.matrix.column(Q.coord(j, u))
                for w in Q.sequences:
                    if any(col[Q.coord(k, w)] for k in range(Q.n)):
                        assert len(w) == len(u) or (len(w) == len(u) + 1 and w[1:] == u)


def test_relation_residual_zero_on_worked_example():
    data = dual_data()
    Q = build_Q(data, 2)
    assert check_hnn_relation(Q, 0, (1,)).zero
    assert check_hnn_relation(Q, 0, (0,)).residual.is_zero()
    cert = embedding_certificate_assoc(data, 2)
    assert cert.passed
    assert all(ok is True for _, ok in cert.relations)


def test_classical_residuals_vanish(instances):
    assert len(instances) >= 50
    for data in instances:
        assert data.A.alpha == Matrix.identity(data.A.dim)
        cert = embedding_certificate_assoc(data, 2)
        assert not cert.failing_relations


def test_monotone_in_truncation(instances):
    for data in instances[:20]:
        if embedding_certificate_assoc(data, 1).passed:
            assert embedding_certificate_assoc(data, 2).passed


def test_degenerate_kernel():
    A = lib.null_algebra(1)
    data = HNNAssocData(A, (HNNLetter(SubspaceData.whole(1), ((1,),), ((0,),), ()),))
    cert = embedding_certificate_assoc(data, 0)
    assert cert.kernel_dim == 1 and not cert.passed


def test_decomposition_is_bijective_for_validated(instances):
    for data in instances:
        M = decomposition_matrix(data.A, data.letters[0])
        assert M.rank() == data.A.dim


def test_validation_failure_raises_in_certificate():
    with pytest.raises(InvalidInput):
        embedding_certificate_assoc(dual_data(theta=((0,), (0,))), 2)


def test_variant_discrimination_matches_golden():
    report = json.loads(json.dumps(discriminate_variants(0, 3, 2), default=str))
    golden = json.loads(GOLDEN.read_text())
    assert report == golden
    assert golden["selected_default"] == "mixed"


def test_alpha_Q_involutive_on_corpus(instances):
    for data in instances:
        Q = build_Q(data, 2)
        if Q.alpha is not None:
            assert Q.alpha @ Q.alpha == Matrix.identity(Q.dim)
