"""Seeded generators of validated Hom-algebras.

Candidates come from the twist construction (a classical table plus an
involutive automorphism, x *' y = alpha(x * y)) followed by a random
unimodular change of basis. Nothing is trusted: every candidate goes through
the full checker before it is returned.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import library as lib
from .exactlin import Matrix, unit_vec
from .homalg import (
    HomAssociativeAlgebra,
    HomLieAlgebra,
    change_basis,
    check_hom_associative,
    check_hom_lie,
    commutator_hom_lie,
)


class GeneratorExhausted(RuntimeError):
    pass


def _perm(n, p):
    return Matrix(tuple(tuple(1 if p[j] == i else 0 for j in range(n)) for i in range(n)))


def _diag(*d):
    return Matrix.diag(d)


def unimodular(rng: random.Random, n: int, steps: int = 4) -> Matrix:
    """Random integer matrix with determinant +-1 (so its inverse is integral too)."""
    rows = [list(unit_vec(n, i)) for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1, 2))
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    rng.shuffle(rows)
    return Matrix(tuple(tuple(r) for r in rows))


def random_involution(rng: random.Random, n: int) -> Matrix:
    signs = [rng.choice((1, -1)) for _ in range(n)]
    P = unimodular(rng, n)
    return P @ Matrix.diag(signs) @ P.inverse()


def associative_bases():
    """(name, classical algebra, list of involutive automorphisms)."""
    return [
        ("idempotent", lib.idempotent_line(), [_diag(1)]),
        ("dual", lib.dual_numbers(), [_diag(1, 1), _diag(1, -1)]),
        ("c2", lib.group_algebra_c2(), [_diag(1, 1), _diag(1, -1)]),
        ("diag2", lib.diagonal_algebra(2), [_diag(1, 1), _perm(2, (1, 0))]),
        ("diag3", lib.diagonal_algebra(3), [_diag(1, 1, 1), _perm(3, (1, 0, 2)), _perm(3, (2, 1, 0))]),
        ("poly3", lib.truncated_polynomials(3), [_diag(1, 1, 1), _diag(1, -1, 1)]),
        ("poly4", lib.truncated_polynomials(4), [_diag(1, 1, 1, 1), _diag(1, -1, 1, -1)]),
        ("upper", lib.upper_triangular(), [_diag(1, 1, 1), _diag(1, -1, 1)]),
        ("m2", lib.matrix_algebra(), [_diag(1, 1, 1, 1), _diag(1, -1, -1, 1), _perm(4, (3, 2, 1, 0))]),
        ("null2", lib.null_algebra(2), None),
        ("null3", lib.null_algebra(3), None),
    ]


def lie_bases():
    return [
        ("sl2", lib.sl2(), [_diag(1, 1, 1), lib.SL2_SWAP, _diag(1, -1, -1)]),
        ("so3", lib.so3(), [_diag(1, 1, 1), _diag(1, -1, -1), _diag(-1, 1, -1)]),
        ("heis", lib.heisenberg(), [_diag(1, 1, 1), _diag(-1, 1, -1), Matrix([[0, 1, 0], [1, 0, 0], [0, 0, -1]])]),
        ("nonab2", lib.nonabelian2(), [_diag(1, 1), _diag(1, -1)]),
        ("gl2", lib.gl2_lie(), [_diag(1, 1, 1, 1), _diag(1, -1, -1, 1), _perm(4, (3, 2, 1, 0))]),
        ("ab1", lib.abelian_lie(1), None),
        ("ab2", lib.abelian_lie(2), None),
        ("ab3", lib.abelian_lie(3), None),
    ]


def _candidate(rng, bases, max_dim):
    pool = [b for b in bases if b[1].dim <= max_dim]
    name, base, autos = rng.choice(pool)
    alpha = random_involution(rng, base.dim) if autos is None else rng.choice(autos)
    S = lib.yau_twist(base, alpha)
    if rng.random() < 0.75:
        S = change_basis(S, unimodular(rng, S.dim))
    return name, S


def random_hom_associative(rng: random.Random, max_dim: int = 4, attempts: int = 200) -> HomAssociativeAlgebra:
    for _ in range(attempts):
        _, A = _candidate(rng, associative_bases(), max_dim)
        if check_hom_associative(A).passed:
            return A
    raise GeneratorExhausted("no passing Hom-associative candidate")


def random_hom_lie(rng: random.Random, max_dim: int = 4, attempts: int = 200) -> HomLieAlgebra:
    for _ in range(attempts):
        if rng.random() < 0.3:
            L = commutator_hom_lie(random_hom_associative(rng, max_dim))
        else:
            _, L = _candidate(rng, lie_bases(), max_dim)
        if check_hom_lie(L).passed:
            return L
    raise GeneratorExhausted("no passing Hom-Lie candidate")


def hom_associative_corpus(count: int, seed: int = 0, max_dim: int = 4) -> list:
    rng = random.Random(seed)
    return [random_hom_associative(rng, max_dim) for _ in range(count)]


def hom_lie_corpus(count: int, seed: int = 0, max_dim: int = 4) -> list:
    rng = random.Random(seed)
    return [random_hom_lie(rng, max_dim) for _ in range(count)]


def random_search(kind: str, dim: int, seed: int = 0, *, nonabelian: bool = False,
                  attempts: int = 500):
    """Search for a passing structure of exactly ``dim`` satisfying the constraints.

    Mixes twist-construction candidates with sparse random integer tensors.
    Raises :class:`GeneratorExhausted` when nothing is found.
    """
    rng = random.Random(seed)
    bases = associative_bases() if kind == "hom-associative" else lie_bases()
    exact = [b for b in bases if b[1].dim == dim]
    for _ in range(attempts):
        if exact and rng.random() < 0.7:
            _, S = _candidate(rng, exact, dim)
        else:
            S = _sparse_random(rng, kind, dim)
            if S is None:
                continue
        if nonabelian and all(not any(c) for r in S._tensor for c in r):
            continue
        rep = check_hom_associative(S) if kind == "hom-associative" else check_hom_lie(S)
        if rep.passed:
            return S
    raise GeneratorExhausted(f"no {kind} of dimension {dim} found in {attempts} attempts")


def _sparse_random(rng, kind, dim):
    alpha = random_involution(rng, dim)
    t = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for _ in range(rng.randint(1, 3)):
        i, j, k = (rng.randrange(dim) for _ in range(3))
        c = Fraction(rng.choice((-1, 1, 2)))
        if kind == "hom-lie":
            if i == j:
                continue
            t[i][j][k] += c
            t[j][i][k] -= c
        else:
            t[i][j][k] += c
    if kind == "hom-lie":
        return HomLieAlgebra.build(t, alpha)
    return HomAssociativeAlgebra.build(t, alpha)
