"""Finite-dimensional Hom-associative and Hom-Lie algebras by structure constants."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactlin import (
    AxiomReport,
    HomModule,
    InvalidInput,
    LinearMapBetween,
    Matrix,
    ReportBuilder,
    Vector,
    check_hom_module,
    complete_basis,
    independent,
    solve,
    to_fraction,
    unit_vec,
    vadd,
    vsub,
)

__all__ = [
    "HomAssociativeAlgebra",
    "HomLieAlgebra",
    "SubspaceData",
    "DerivationData",
    "LeibnizVariant",
    "check_hom_associative",
    "check_hom_lie",
    "commutator_hom_lie",
    "check_subalgebra",
    "check_ideal",
    "quotient_algebra",
    "check_alpha_k_derivation",
    "check_beta_k_derivation",
    "check_theta_derivation",
    "adjoint",
    "change_basis",
    "derivation_space",
    "fixed_vectors",
]


def _tensor(table, n: int):
    t = tuple(tuple(tuple(to_fraction(c) for c in cell) for cell in row) for row in table)
    if len(t) != n or any(len(r) != n for r in t) or any(len(c) != n for r in t for c in r):
        raise InvalidInput(f"structure tensor must have shape {n}x{n}x{n}")
    return t


def _bilinear(tensor, n: int, u: Vector, v: Vector) -> Vector:
    out = [Fraction(0)] * n
    for i, a in enumerate(u):
        if not a:
            continue
        row = tensor[i]
        for j, b in enumerate(v):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(row[j]):
                if c:
                    out[k] += ab * c
    return tuple(out)


def _default_names(n):
    return tuple(f"e{i + 1}" for i in range(n))


class _Structure:
    """Shared plumbing for algebras given by a rank-3 tensor and a twist."""

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def alpha(self) -> Matrix:
        return self.module.alpha

    def twist(self, v: Vector) -> Vector:
        return self.module.alpha.apply(v)

    def basis(self):
        return [unit_vec(self.dim, i) for i in range(self.dim)]

    def product(self, u: Vector, v: Vector) -> Vector:
        return _bilinear(self._tensor, self.dim, u, v)

    def left_matrix(self, u: Vector) -> Matrix:
        """Matrix of v -> u*v."""
        return Matrix.from_columns([self.product(u, e) for e in self.basis()], self.dim)


@dataclass(frozen=True)
class HomAssociativeAlgebra(_Structure):
    module: HomModule
    table: tuple
    basis_names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "table", _tensor(self.table, self.module.dim))
        if not self.basis_names:
            object.__setattr__(self, "basis_names", _default_names(self.module.dim))
        if len(self.basis_names) != self.module.dim:
            raise InvalidInput("basis_names length differs from dimension")

    @classmethod
    def build(cls, table, alpha=None, names=()):
        n = len(table)
        alpha = Matrix.identity(n) if alpha is None else (alpha if isinstance(alpha, Matrix) else Matrix(alpha))
        return cls(HomModule(n, alpha), table, tuple(names))

    @property
    def _tensor(self):
        return self.table

    def mul(self, u: Vector, v: Vector) -> Vector:
        return self.product(u, v)


def skew_violation(bracket, n: int):
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if bracket[i][j][k] != -bracket[j][i][k]:
                    return (i, j, k)
    return None


@dataclass(frozen=True)
class HomLieAlgebra(_Structure):
    module: HomModule
    bracket: tuple
    basis_names: tuple = ()

    def __post_init__(self):
        b = _tensor(self.bracket, self.module.dim)
        w = skew_violation(b, self.module.dim)
        if w is not None:
            i, j, k = w
            raise InvalidInput(
                f"bracket tensor is not skew-symmetric at ({i},{j},{k}): "
                f"{b[i][j][k]} vs {b[j][i][k]}",
                witness=("skew-symmetry", w),
            )
        object.__setattr__(self, "bracket", b)
        if not self.basis_names:
            object.__setattr__(self, "basis_names", _default_names(self.module.dim))
        if len(self.basis_names) != self.module.dim:
            raise InvalidInput("basis_names length differs from dimension")

    @classmethod
    def build(cls, bracket, beta=None, names=()):
        n = len(bracket)
        beta = Matrix.identity(n) if beta is None else (beta if isinstance(beta, Matrix) else Matrix(beta))
        return cls(HomModule(n, beta), bracket, tuple(names))

    @classmethod
    def from_brackets(cls, n: int, brackets: dict, beta=None, names=()):
        """Build from {(i, j): vector} for i < j; the rest is filled by skew-symmetry."""
        t = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), v in brackets.items():
            for k, c in enumerate(v):
                t[i][j][k] = to_fraction(c)
                t[j][i][k] = -to_fraction(c)
        return cls.build(t, beta, names)

    @property
    def _tensor(self):
        return self.bracket

    @property
    def beta(self) -> Matrix:
        return self.module.alpha

    def br(self, u: Vector, v: Vector) -> Vector:
        return self.product(u, v)

    def is_abelian(self) -> bool:
        return all(not any(c) for r in self.bracket for c in r)


@dataclass(frozen=True)
class SubspaceData:
    parent_dim: int
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(to_fraction(a) for a in v) for v in self.basis)
        if any(len(v) != self.parent_dim for v in b):
            raise InvalidInput("subspace vector has wrong length")
        if not independent(list(b)):
            raise InvalidInput("subspace basis is not linearly independent")
        object.__setattr__(self, "basis", b)

    @classmethod
    def zero(cls, n: int) -> "SubspaceData":
        return cls(n, ())

    @classmethod
    def whole(cls, n: int) -> "SubspaceData":
        return cls(n, tuple(unit_vec(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        return solve(self.basis, v) is not None

    def coords(self, v: Vector):
        """Coordinates of ``v`` in the subspace basis (None if outside)."""
        return solve(self.basis, v)

    def inclusion(self) -> Matrix:
        return Matrix.from_columns(self.basis, self.parent_dim)


@dataclass(frozen=True)
class DerivationData:
    map: Matrix
    power: int = 1

    def __post_init__(self):
        if not isinstance(self.map, Matrix):
            object.__setattr__(self, "map", Matrix(self.map))
        if not self.map.is_square():
            raise InvalidInput("derivation map must be square")
        if self.power < 0:
            raise InvalidInput("derivation power must be nonnegative")

    def __call__(self, v: Vector) -> Vector:
        return self.map.apply(v)


class LeibnizVariant(str, enum.Enum):
    """Candidate Leibniz rules for a theta-derivation delta: B -> A.

    MIXED:         delta(b b') = delta(b) b' + theta(b) delta(b')
    TWISTED_BOTH:  delta(b b') = delta(b) theta(b') + theta(b) delta(b')
    """

    MIXED = "mixed"
    TWISTED_BOTH = "twisted-both"


# MIXED is what makes the HNN relation residual vanish; see
# scripts/variant_discrimination.py and tests/golden/variant_discrimination.json.
DEFAULT_VARIANT = LeibnizVariant.MIXED


def _check_shapes(S, D: Matrix):
    if D.shape != (S.dim, S.dim):
        raise InvalidInput(f"map shape {D.shape} does not match algebra dimension {S.dim}")


def _involutivity(rb: ReportBuilder, S):
    rb.check("involutivity")
    rep = check_hom_module(S.module)
    if not rep.passed:
        v = rep.violations[0]
        rb.fail("involutivity", v.witness, v.residual)


def _multiplicativity(rb: ReportBuilder, S):
    rb.check("multiplicativity")
    basis = S.basis()
    tw = [S.twist(e) for e in basis]
    for i, ei in enumerate(basis):
        for j, ej in enumerate(basis):
            res = vsub(S.twist(S.product(ei, ej)), S.product(tw[i], tw[j]))
            if any(res):
                rb.fail("multiplicativity", (i, j), res)
                return


def check_hom_associative(A: HomAssociativeAlgebra) -> AxiomReport:
    """Hom-associativity, multiplicativity and involutivity on basis tuples."""
    rb = ReportBuilder()
    rb.check("hom-associativity")
    n = A.dim
    basis = A.basis()
    tw = [A.twist(e) for e in basis]
    prods = [[A.mul(ei, ej) for ej in basis] for ei in basis]
    done = False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                res = vsub(A.mul(tw[i], prods[j][k]), A.mul(prods[i][j], tw[k]))
                if any(res):
                    rb.fail("hom-associativity", (i, j, k), res)
                    done = True
                    break
            if done:
                break
        if done:
            break
    _multiplicativity(rb, A)
    _involutivity(rb, A)
    return rb.build()


def check_hom_lie(L: HomLieAlgebra) -> AxiomReport:
    """Skew-symmetry, Hom-Jacobi, multiplicativity and involutivity."""
    n = L.dim
    w = skew_violation(L.bracket, n)
    if w is not None:
        raise InvalidInput("bracket tensor is not skew-symmetric", witness=("skew-symmetry", w))
    rb = ReportBuilder()
    rb.check("hom-jacobi")
    basis = L.basis()
    tw = [L.twist(e) for e in basis]
    brs = [[L.br(ei, ej) for ej in basis] for ei in basis]
    found = False
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                res = vadd(
                    vadd(L.br(tw[i], brs[j][k]), L.br(tw[j], brs[k][i])),
                    L.br(tw[k], brs[i][j]),
                )
                if any(res):
                    rb.fail("hom-jacobi", (i, j, k), res)
                    found = True
                    break
            if found:
                break
        if found:
            break
    _multiplicativity(rb, L)
    _involutivity(rb, L)
    return rb.build()


def commutator_hom_lie(A: HomAssociativeAlgebra) -> HomLieAlgebra:
    rep = check_hom_associative(A)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"commutator needs a passing algebra; {v.axiom} fails at {v.witness}",
                           witness=(v.axiom, v.witness))
    n = A.dim
    c = A.table
    b = [[[c[i][j][k] - c[j][i][k] for k in range(n)] for j in range(n)] for i in range(n)]
    return HomLieAlgebra(A.module, b, A.basis_names)


# ---------------------------------------------------------------------------
# subspaces


def _closure(rb, axiom, S, sub: SubspaceData, left, right):
    for p, u in enumerate(left):
        for q, v in enumerate(right):
            w = S.product(u, v)
            if not sub.contains(w):
                rb.fail(axiom, (p, q), w)
                return


def _twist_stable(rb, S, sub):
    rb.check("twist-stable")
    for p, u in enumerate(sub.basis):
        w = S.twist(u)
        if not sub.contains(w):
            rb.fail("twist-stable", (p,), w)
            return


def check_subalgebra(S, sub: SubspaceData) -> AxiomReport:
    """Closure of ``sub`` under the product and the twist.

    Works for both algebra kinds; for a Hom-Lie algebra this is the
    Hom-Lie subalgebra condition.
    """
    if sub.parent_dim != S.dim:
        raise InvalidInput("subspace lives in a different dimension")
    rb = ReportBuilder()
    rb.check("closed-under-product")
    _closure(rb, "closed-under-product", S, sub, sub.basis, sub.basis)
    _twist_stable(rb, S, sub)
    return rb.build()


def check_ideal(S, sub: SubspaceData) -> AxiomReport:
    if sub.parent_dim != S.dim:
        raise InvalidInput("subspace lives in a different dimension")
    rb = ReportBuilder()
    for axiom, left, right in (
        ("closed-under-product", sub.basis, sub.basis),
        ("right-absorbing", sub.basis, S.basis()),
        ("left-absorbing", S.basis(), sub.basis),
    ):
        rb.check(axiom)
        _closure(rb, axiom, S, sub, left, right)
    _twist_stable(rb, S, sub)
    return rb.build()


def complement(sub: SubspaceData) -> list:
    return complete_basis(list(sub.basis), sub.parent_dim)


def quotient_projection(sub: SubspaceData):
    """(complement basis, function v -> coordinates of v + sub in the complement)."""
    comp = complement(sub)
    full = list(sub.basis) + comp
    m = sub.dim

    def project(v):
        c = solve(full, v)
        return tuple(c[m:])

    return comp, project


def quotient_algebra(A: HomAssociativeAlgebra, ideal: SubspaceData) -> HomAssociativeAlgebra:
    rep = check_ideal(A, ideal)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"not a Hom-ideal: {v.axiom} fails at {v.witness}", witness=(v.axiom, v.witness))
    comp, project = quotient_projection(ideal)
    q = len(comp)
    table = [[project(A.mul(u, v)) for v in comp] for u in comp]
    alpha = Matrix.from_columns([project(A.twist(u)) for u in comp], q)
    names = tuple(A.basis_names[u.index(1)] for u in comp)
    return HomAssociativeAlgebra(HomModule(q, alpha), table, names)


def change_basis(S, P: Matrix):
    """Same structure in the basis given by the columns of ``P``."""
    n = S.dim
    Pi = P.inverse()
    cols = P.columns()
    t = [[Pi.apply(S.product(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    alpha = Pi @ S.alpha @ P
    return type(S)(HomModule(n, alpha), t, ())


# ---------------------------------------------------------------------------
# derivations


def _derivation_report(S, D: Matrix, k: int, axiom_prefix: str) -> AxiomReport:
    _check_shapes(S, D)
    rb = ReportBuilder()
    ak = S.alpha.power(k)
    rb.check(f"{axiom_prefix}-commutes")
    diff = D @ ak - ak @ D
    for j in range(S.dim):
        col = diff.column(j)
        if any(col):
            rb.fail(f"{axiom_prefix}-commutes", (j,), col)
            break
    rb.check("leibniz")
    basis = S.basis()
    De = [D.apply(e) for e in basis]
    Ae = [ak.apply(e) for e in basis]
    for i, ei in enumerate(basis):
        for j, ej in enumerate(basis):
            lhs = D.apply(S.product(ei, ej))
            rhs = vadd(S.product(De[i], Ae[j]), S.product(Ae[i], De[j]))
            res = vsub(lhs, rhs)
            if any(res):
                rb.fail("leibniz", (i, j), res)
                return rb.build()
    return rb.build()


def check_alpha_k_derivation(A: HomAssociativeAlgebra, D: DerivationData) -> AxiomReport:
    return _derivation_report(A, D.map, D.power, "twist-power")


def check_beta_k_derivation(L: HomLieAlgebra, D: DerivationData) -> AxiomReport:
    return _derivation_report(L, D.map, D.power, "twist-power")


def restricted_twist(S, sub: SubspaceData) -> Matrix:
    """Twist restricted to an invariant subspace, in subspace coordinates."""
    cols = []
    for u in sub.basis:
        c = sub.coords(S.twist(u))
        if c is None:
            raise InvalidInput("subspace is not stable under the twist")
        cols.append(c)
    return Matrix.from_columns(cols, sub.dim) if cols else Matrix.zeros(0, 0)


def check_theta_derivation(
    A: HomAssociativeAlgebra,
    B: SubspaceData,
    theta: LinearMapBetween,
    delta: LinearMapBetween,
    variant: LeibnizVariant = DEFAULT_VARIANT,
) -> AxiomReport:
    """Leibniz rule of ``delta`` relative to the morphism ``theta`` on basis pairs of ``B``.

    ``theta`` and ``delta`` map B-coordinates to A-coordinates.
    """
    variant = LeibnizVariant(variant)
    if theta.matrix.shape != (A.dim, B.dim) or delta.matrix.shape != (A.dim, B.dim):
        raise InvalidInput("theta/delta must be dim(A) x dim(B)")
    sub = check_subalgebra(A, B)
    if not sub.passed:
        raise InvalidInput("B is not a subalgebra", witness=(sub.violations[0].axiom,))
    mor = check_hom_morphism_theta(A, B, theta)
    if not mor.passed:
        v = mor.violations[0]
        raise InvalidInput(f"theta is not a morphism: {v.axiom} at {v.witness}", witness=(v.axiom, v.witness))
    rb = ReportBuilder()
    axiom = f"theta-leibniz[{variant.value}]"
    rb.check(axiom)
    bas = B.basis
    th = [theta(unit_vec(B.dim, p)) for p in range(B.dim)]
    de = [delta(unit_vec(B.dim, p)) for p in range(B.dim)]
    for p, u in enumerate(bas):
        for q, v in enumerate(bas):
            prod_coords = B.coords(A.mul(u, v))
            lhs = delta(prod_coords)
            if variant is LeibnizVariant.MIXED:
                rhs = vadd(A.mul(de[p], v), A.mul(th[p], de[q]))
            else:
                rhs = vadd(A.mul(de[p], th[q]), A.mul(th[p], de[q]))
            res = vsub(lhs, rhs)
            if any(res):
                rb.fail(axiom, (p, q), res)
                return rb.build()
    return rb.build()


def check_hom_morphism_theta(A: HomAssociativeAlgebra, B: SubspaceData, theta: LinearMapBetween) -> AxiomReport:
    """theta: B -> A is multiplicative and intertwines the twists."""
    from .exactlin import check_hom_morphism

    rb = ReportBuilder()
    rep = check_hom_morphism(theta)
    rb.check("hom-module-morphism")
    for v in rep.violations:
        rb.fail(v.axiom, v.witness, v.residual)
    rb.check("algebra-morphism")
    for p, u in enumerate(B.basis):
        for q, v in enumerate(B.basis):
            lhs = theta(B.coords(A.mul(u, v)))
            rhs = A.mul(theta(unit_vec(B.dim, p)), theta(unit_vec(B.dim, q)))
            res = vsub(lhs, rhs)
            if any(res):
                rb.fail("algebra-morphism", (p, q), res)
                return rb.build()
    return rb.build()


def subspace_module(S, sub: SubspaceData) -> HomModule:
    return HomModule(sub.dim, restricted_twist(S, sub))


def adjoint(L: HomLieAlgebra, x: Sequence) -> DerivationData:
    x = tuple(to_fraction(a) for a in x)
    if len(x) != L.dim:
        raise InvalidInput("vector length does not match algebra dimension")
    return DerivationData(L.left_matrix(x), 1)


def fixed_vectors(S) -> list:
    """Basis of the +1 eigenspace of the twist."""
    return (S.alpha - Matrix.identity(S.dim)).kernel()


def derivation_space(S, k: int = 1) -> list:
    """Basis of all twist-power derivations of power ``k``, as DerivationData.

    Solves the Leibniz and commutation identities as a linear system in the
    n*n entries of D (entry (r, c) at index r*n + c).
    """
    n = S.dim
    ak = S.alpha.power(k)
    basis = S.basis()
    eqs = []

    def d_of(v):
        # rows (one per output coordinate) of the linear form v -> D v
        rows = [[Fraction(0)] * (n * n) for _ in range(n)]
        for c, a in enumerate(v):
            if a:
                for r in range(n):
                    rows[r][r * n + c] += a
        return rows

    def mul_rows(rows, right, other):
        # rows of (D-linear vector) * other (right=True) or other * (D-linear vector)
        out = [[Fraction(0)] * (n * n) for _ in range(n)]
        for r in range(n):
            e = unit_vec(n, r)
            prod = S.product(e, other) if right else S.product(other, e)
            for o, c in enumerate(prod):
                if c:
                    out[o] = [x + c * y for x, y in zip(out[o], rows[r])]
        return out

    Ae = [ak.apply(e) for e in basis]
    for i, ei in enumerate(basis):
        for j, ej in enumerate(basis):
            lhs = d_of(S.product(ei, ej))
            t1 = mul_rows(d_of(ei), True, Ae[j])
            t2 = mul_rows(d_of(ej), False, Ae[i])
            eqs.extend([a - b - c for a, b, c in zip(*rows)] for rows in zip(lhs, t1, t2))
    for j, ej in enumerate(basis):
        # D(ak e_j) - ak(D e_j)
        lhs = d_of(Ae[j])
        dj = d_of(ej)
        for o in range(n):
            rhs = [Fraction(0)] * (n * n)
            for r in range(n):
                if ak[o, r]:
                    rhs = [x + ak[o, r] * y for x, y in zip(rhs, dj[r])]
            eqs.append([a - b for a, b in zip(lhs[o], rhs)])
    if not eqs:
        return []
    ker = Matrix(tuple(tuple(e) for e in eqs)).kernel()
    return [DerivationData(Matrix(tuple(tuple(v[r * n + c] for c in range(n)) for r in range(n))), k) for v in ker]
