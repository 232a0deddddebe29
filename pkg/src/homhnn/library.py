"""Small named algebras used by tests, the generator and the CLI."""
from __future__ import annotations

from fractions import Fraction

from .exactlin import HomModule, Matrix, unit_vec
from .homalg import HomAssociativeAlgebra, HomLieAlgebra, SubspaceData


def _zeros(n):
    return [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]


def table_from_rules(n: int, rules: dict):
    """{(i, j): {k: c}} -> dense tensor."""
    t = _zeros(n)
    for (i, j), out in rules.items():
        for k, c in out.items():
            t[i][j][k] = Fraction(c)
    return t


# -- associative algebras (twist = identity unless stated)


def matrix_algebra(alpha=None) -> HomAssociativeAlgebra:
    """Full 2x2 matrices, basis e11, e12, e21, e22."""
    idx = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}
    rules = {}
    for (a, b), p in idx.items():
        for (c, d), q in idx.items():
            if b == c:
                rules[(p, q)] = {idx[(a, d)]: 1}
    return HomAssociativeAlgebra.build(table_from_rules(4, rules), alpha, ("e11", "e12", "e21", "e22"))


def upper_triangular(alpha=None) -> HomAssociativeAlgebra:
    """Basis e11, e12, e22."""
    rules = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}
    return HomAssociativeAlgebra.build(table_from_rules(3, rules), alpha, ("e11", "e12", "e22"))


def dual_numbers(alpha=None) -> HomAssociativeAlgebra:
    """span{1, x} with x*x = 0."""
    rules = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return HomAssociativeAlgebra.build(table_from_rules(2, rules), alpha, ("1", "x"))


def truncated_polynomials(n: int, alpha=None) -> HomAssociativeAlgebra:
    """span{1, x, ..., x^(n-1)} with x^n = 0."""
    rules = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    names = ("1", "x") + tuple(f"x{i}" for i in range(2, n))
    return HomAssociativeAlgebra.build(table_from_rules(n, rules), alpha, names[:n])


def diagonal_algebra(n: int, alpha=None) -> HomAssociativeAlgebra:
    rules = {(i, i): {i: 1} for i in range(n)}
    return HomAssociativeAlgebra.build(table_from_rules(n, rules), alpha, tuple(f"p{i + 1}" for i in range(n)))


def group_algebra_c2(alpha=None) -> HomAssociativeAlgebra:
    rules = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}
    return HomAssociativeAlgebra.build(table_from_rules(2, rules), alpha, ("1", "g"))


def idempotent_line(alpha=None) -> HomAssociativeAlgebra:
    return HomAssociativeAlgebra.build([[[1]]], alpha, ("e",))


def null_algebra(n: int, alpha=None) -> HomAssociativeAlgebra:
    return HomAssociativeAlgebra.build(_zeros(n), alpha)


# -- Lie algebras


def sl2(beta=None) -> HomLieAlgebra:
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return HomLieAlgebra.from_brackets(
        3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, beta, ("h", "e", "f")
    )


SL2_SWAP = Matrix([[-1, 0, 0], [0, 0, 1], [0, 1, 0]])


def yau_twist(S, alpha: Matrix):
    """x *' y = alpha(x * y); Hom-algebra when alpha is an involutive automorphism."""
    n = S.dim
    basis = [unit_vec(n, i) for i in range(n)]
    t = [[alpha.apply(S.product(u, v)) for v in basis] for u in basis]
    return type(S)(HomModule(n, alpha), t, S.basis_names)


def twisted_sl2() -> HomLieAlgebra:
    return yau_twist(sl2(), SL2_SWAP)


def abelian_lie(n: int, beta=None) -> HomLieAlgebra:
    return HomLieAlgebra.build(_zeros(n), beta, tuple("xyzw"[:n]) if n <= 4 else ())


def nonabelian2(beta=None) -> HomLieAlgebra:
    """[x, y] = y."""
    return HomLieAlgebra.from_brackets(2, {(0, 1): (0, 1)}, beta, ("x", "y"))


def heisenberg(beta=None) -> HomLieAlgebra:
    """[p, q] = z."""
    return HomLieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1)}, beta, ("p", "q", "z"))


def so3(beta=None) -> HomLieAlgebra:
    """Cross product: [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2."""
    return HomLieAlgebra.from_brackets(
        3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)}, beta, ("u", "v", "w")
    )


def gl2_lie() -> HomLieAlgebra:
    from .homalg import commutator_hom_lie

    return commutator_hom_lie(matrix_algebra())


# -- the worked HNN instance


def dual_numbers_hnn_parts():
    """A = span{1, x}, B = span{1}, theta = inclusion, delta = 0, X = {x}."""
    A = dual_numbers()
    B = SubspaceData(2, ((1, 0),))
    return A, B
