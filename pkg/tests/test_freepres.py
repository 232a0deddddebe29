from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homhnn import library as lib
from homhnn.exactlin import HomModule, InvalidInput, Matrix
from homhnn.freepres import (
    FreeAlgebraTrunc,
    Leaf,
    PresentedAlgebra,
    Prod,
    Twist,
    add_into,
    catalan,
    check_pbw_injectivity,
    enveloping,
    extend_derivation,
    graded_basis,
    normalize_term,
    parse_term,
    render_term,
    spanning_terms,
)
from homhnn.homalg import DerivationData, adjoint


def terms(n, depth=3):
    leaf = st.builds(Leaf, st.integers(0, n - 1), st.integers(0, 1))
    return st.recursive(
        leaf,
        lambda inner: st.one_of(st.builds(Prod, inner, inner), st.builds(Twist, inner)),
        max_leaves=4,
    )


@given(terms(2))
def test_double_twist_is_identity(t):
    assert normalize_term(Twist(Twist(t))) == normalize_term(t)


@given(terms(2))
def test_render_parse_roundtrip(t):
    n = normalize_term(t)
    assert parse_term(render_term(n, ["g1", "g2"]), ["g1", "g2"]) == n


def test_normalization_examples():
    g1, g2 = Leaf(0), Leaf(1)
    assert normalize_term(Twist(Twist(g1))) == g1
    assert normalize_term(Twist(Prod(g1, g2))) == Prod(Leaf(0, 1), Leaf(1, 1))
    assert normalize_term(Twist(Prod(Twist(g1), g2))) == Prod(g1, Leaf(1, 1))


def brute_dims(n, sign, degree):
    """Independent oracle: span of twisted leaf-labelled trees mod Hom-associators, by sympy rank.

    Only for a diagonal twist alpha = sign * id, where twisting a tree multiplies by
    sign^(number of leaves), so the free algebra is spanned by plain trees.
    """
    import sympy

    from homhnn.freepres import _trees_of_degree, tree_key

    trees = {k: sorted(_trees_of_degree(n, k), key=tree_key) for k in range(1, degree + 1)}
    dims = [0]
    for k in range(1, degree + 1):
        index = {t: i for i, t in enumerate(trees[k])}
        rows = []

        def deg(t):
            return 1 if isinstance(t, int) else deg(t[0]) + deg(t[1])

        # ideal in degree k: associators of (x, y, z) with total degree k, multiplied out by words
        def assoc_elements(k):
            out = []
            for a in range(1, k):
                for b in range(1, k - a):
                    c = k - a - b
                    for x in trees[a]:
                        for y in trees[b]:
                            for z in trees[c]:
                                out.append({(x, (y, z)): sign ** a, ((x, y), z): -(sign ** c)})
            return out

        ideal = {j: assoc_elements(j) for j in range(3, k + 1)}

        def products(j):
            if j < 3:
                return []
            items = list(ideal[j])
            for left in range(1, j - 2):
                for w in trees[left]:
                    for u in products(j - left):
                        items.append({(w, t): c for t, c in u.items()})
                        items.append({(t, w): c for t, c in u.items()})
            return items

        for u in products(k):
            row = [0] * len(trees[k])
            for t, c in u.items():
                row[index[t]] += c
            rows.append(row)
        r = sympy.Matrix(rows).rank() if rows else 0
        dims.append(len(trees[k]) - r)
    return dims


@pytest.mark.parametrize("n", [1, 2])
def test_free_dims_are_powers(n):
    F = FreeAlgebraTrunc(HomModule(n, Matrix.identity(n)), 4)
    assert F.degree_dims() == [0] + [n ** k for k in range(1, 5)]


@pytest.mark.parametrize("n,sign", [(1, 1), (1, -1), (2, 1), (2, -1)])
def test_free_dims_match_independent_oracle(n, sign):
    F = FreeAlgebraTrunc(HomModule(n, Matrix.diag([sign] * n)), 4)
    assert F.degree_dims() == brute_dims(n, sign, 4)


def test_free_examples():
    F = FreeAlgebraTrunc(HomModule(2, Matrix.identity(2)), 2)
    assert F.dimension == 2 + 4
    assert not F.equal_mod_ideal(F.mul_free(F.gen(0), F.gen(1)), F.mul_free(F.gen(1), F.gen(0)))
    F1 = FreeAlgebraTrunc(HomModule(1, Matrix.identity(1)), 3)
    assert F1.degree_dims()[3] == 1
    with pytest.raises(InvalidInput):
        graded_basis(F1, 4)
    assert len(graded_basis(F1, 3)) == 1
    assert len(spanning_terms(1, 3)) == catalan(2) * 8


def test_free_twist_involutive_on_basis():
    for alpha in (Matrix([[0, 1], [1, 0]]), Matrix.diag([1, -1])):
        F = FreeAlgebraTrunc(HomModule(2, alpha), 4)
        for t in F.basis:
            u = {t: Fraction(1)}
            assert F.equal_mod_ideal(F.twist(F.twist(u)), u)


def test_multiplicativity_in_free_algebra():
    F = FreeAlgebraTrunc(HomModule(2, Matrix([[0, 1], [1, 0]])), 3)
    g1, g2 = F.gen(0), F.gen(1)
    assert F.twist(F.mul_free(g1, g2)) == F.mul_free(F.twist(g1), F.twist(g2))


def test_enveloping_dims_and_relations():
    E = enveloping(lib.sl2(), 2)
    assert E.algebra.dimension == 10
    U = E.algebra
    h, e, f = U.gen(0), U.gen(1), U.gen(2)
    ef = add_into(U.mul_free(e, f), U.mul_free(f, e), -1)
    assert U.equal_mod_ideal(ef, h)
    assert enveloping(lib.sl2(), 4).algebra.degree_dims() == [1, 3, 6, 10, 15]
    A = enveloping(lib.abelian_lie(2), 2).algebra
    assert A.equal_mod_ideal(A.mul_free(A.gen(0), A.gen(1)), A.mul_free(A.gen(1), A.gen(0)))
    assert enveloping(lib.abelian_lie(1), 3).algebra.degree_dims() == [1, 1, 1, 1]


def test_pbw():
    for g in (lib.sl2(), lib.abelian_lie(1), lib.abelian_lie(2), lib.twisted_sl2()):
        E = enveloping(g, 3)
        assert E.report.passed
        assert check_pbw_injectivity(E).passed
    E = enveloping(lib.abelian_lie(2), 2, extra_relations=[{0: Fraction(1)}])
    assert not check_pbw_injectivity(E).passed


def test_derivation_extension():
    E = enveloping(lib.abelian_lie(2), 3)
    D = extend_derivation(E, DerivationData(Matrix.identity(2), 1))
    U = E.algebra
    xy = U.mul_free(U.gen(0), U.gen(1))
    assert D(xy) == U.reduce({t: 2 * c for t, c in xy.items()})
    assert not extend_derivation(E, DerivationData(Matrix.zeros(2, 2), 1))(xy)
    E = enveloping(lib.sl2(), 3)
    D = extend_derivation(E, adjoint(lib.sl2(), (1, 0, 0)))
    U = E.algebra
    rel = add_into(add_into(U.mul_free(U.gen(1), U.gen(2)), U.mul_free(U.gen(2), U.gen(1)), -1), U.gen(0), -1)
    assert not D(rel)


def test_budget_limits_letter_count():
    P = PresentedAlgebra(HomModule(2, Matrix.identity(2)), 3, names=("x", "t"), budget={1: 1})
    from homhnn.freepres import _leaves

    assert all(_leaves(t).count(1) <= 1 for t in P.trees)
    assert P.degree_dims() == [0, 2, 3, 4]
