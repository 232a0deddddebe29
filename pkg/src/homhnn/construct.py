"""Hom-actions, semidirect products, coset Hom-modules and free-basis witnesses."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactlin import (
    AxiomReport,
    HomModule,
    InvalidInput,
    Matrix,
    ReportBuilder,
    Vector,
    check_hom_module,
    lincomb,
    rank_of,
    solve,
    to_fraction,
    unit_vec,
    vadd,
    vsub,
)
from .homalg import (
    HomAssociativeAlgebra,
    HomLieAlgebra,
    SubspaceData,
    check_hom_lie,
    check_ideal,
    check_subalgebra,
    quotient_projection,
)


@dataclass(frozen=True)
class HomAction:
    """x |> m = sum_k tensor[x][m][k] e_k for basis x of the actor, m of the target."""

    actor: HomLieAlgebra
    target: HomLieAlgebra
    tensor: tuple

    def __post_init__(self):
        a, m = self.actor.dim, self.target.dim
        t = tuple(tuple(tuple(to_fraction(c) for c in cell) for cell in row) for row in self.tensor)
        if len(t) != a or any(len(r) != m for r in t) or any(len(c) != m for r in t for c in r):
            raise InvalidInput(f"action tensor must have shape {a}x{m}x{m}")
        object.__setattr__(self, "tensor", t)

    def act(self, x: Vector, m: Vector) -> Vector:
        return _bilinear_rect(self.tensor, x, m, self.target.dim)

    @classmethod
    def zero(cls, actor, target) -> "HomAction":
        a, m = actor.dim, target.dim
        return cls(actor, target, [[[0] * m for _ in range(m)] for _ in range(a)])

    @classmethod
    def adjoint(cls, L: HomLieAlgebra) -> "HomAction":
        return cls(L, L, L.bracket)

    @classmethod
    def by_derivation(cls, target: HomLieAlgebra, d: Matrix) -> "HomAction":
        """One-dimensional actor span{t} (twist = id) acting through the map d."""
        line = HomLieAlgebra.build([[[0]]], None, ("t",))
        m = target.dim
        return cls(line, target, [[list(d.column(j)) for j in range(m)]])


def _bilinear_rect(tensor, x, m, n):
    out = [Fraction(0)] * n
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(m):
            if not b:
                continue
            for k, c in enumerate(tensor[i][j]):
                if c:
                    out[k] += a * b * c
    return tuple(out)


def check_hom_action(act: HomAction) -> AxiomReport:
    l, m = act.actor, act.target
    rb = ReportBuilder()
    lb, mb = l.basis(), m.basis()
    al = [l.twist(x) for x in lb]
    am = [m.twist(v) for v in mb]

    rb.check("action-bracket")
    for i, x in enumerate(lb):
        for j, y in enumerate(lb):
            for p, v in enumerate(mb):
                lhs = act.act(l.br(x, y), am[p])
                rhs = vsub(act.act(al[i], act.act(y, v)), act.act(al[j], act.act(x, v)))
                res = vsub(lhs, rhs)
                if any(res):
                    rb.fail("action-bracket", (i, j, p), res)
                    break
            if rb.has_failed("action-bracket"):
                break
        if rb.has_failed("action-bracket"):
            break

    rb.check("action-derivation")
    for i, x in enumerate(lb):
        for p, v in enumerate(mb):
            for q, w in enumerate(mb):
                lhs = act.act(al[i], m.br(v, w))
                rhs = vadd(m.br(act.act(x, v), am[q]), m.br(am[p], act.act(x, w)))
                res = vsub(lhs, rhs)
                if any(res):
                    rb.fail("action-derivation", (i, p, q), res)
                    break
            if rb.has_failed("action-derivation"):
                break
        if rb.has_failed("action-derivation"):
            break

    rb.check("action-twist")
    for i, x in enumerate(lb):
        for p, v in enumerate(mb):
            res = vsub(m.twist(act.act(x, v)), act.act(al[i], am[p]))
            if any(res):
                rb.fail("action-twist", (i, p), res)
                break
        if rb.has_failed("action-twist"):
            break
    return rb.build()


@dataclass(frozen=True)
class SemidirectProduct:
    result: HomLieAlgebra
    embed_target: Matrix  # m -> m (+) l
    embed_actor: Matrix  # l -> m (+) l

    @property
    def target_subspace(self) -> SubspaceData:
        return SubspaceData(self.result.dim, tuple(self.embed_target.columns()))

    @property
    def actor_subspace(self) -> SubspaceData:
        return SubspaceData(self.result.dim, tuple(self.embed_actor.columns()))


def semidirect_product(act: HomAction) -> SemidirectProduct:
    """Bracket [(m1,x1),(m2,x2)] = ([m1,m2] + x1|>m2 - x2|>m1, [x1,x2]) on m (+) l."""
    rep = check_hom_action(act)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"not a Hom-action: {v.axiom} at {v.witness}", witness=(v.axiom, v.witness))
    l, m = act.actor, act.target
    dm, dl = m.dim, l.dim
    n = dm + dl

    def split(v):
        return v[:dm], v[dm:]

    def bracket(u, v):
        m1, x1 = split(u)
        m2, x2 = split(v)
        mm = vsub(vadd(m.br(m1, m2), act.act(x1, m2)), act.act(x2, m1))
        return tuple(mm) + tuple(l.br(x1, x2))

    basis = [unit_vec(n, i) for i in range(n)]
    table = [[bracket(u, v) for v in basis] for u in basis]
    rows = [list(r) + [0] * dl for r in m.alpha.rows] + [[0] * dm + list(r) for r in l.alpha.rows]
    alpha = Matrix(tuple(tuple(r) for r in rows))
    names = tuple(m.basis_names) + tuple(l.basis_names)
    if len(set(names)) != n:
        names = tuple(f"m:{s}" for s in m.basis_names) + tuple(f"l:{s}" for s in l.basis_names)
    result = HomLieAlgebra(HomModule(n, alpha), table, names)
    et = Matrix.from_columns([unit_vec(n, i) for i in range(dm)], n)
    ea = Matrix.from_columns([unit_vec(n, dm + i) for i in range(dl)], n)
    return SemidirectProduct(result, et, ea)


def check_semidirect(sd: SemidirectProduct, act: HomAction) -> AxiomReport:
    """Hom-Lie axioms of the result, ideal/subalgebra embeddings, restricted brackets."""
    rb = ReportBuilder()
    rep = check_hom_lie(sd.result)
    for a in rep.checked:
        rb.check(a)
    for v in rep.violations:
        rb.fail(v.axiom, v.witness, v.residual)
    rb.check("target-is-ideal")
    if not check_ideal(sd.result, sd.target_subspace).passed:
        rb.fail("target-is-ideal")
    rb.check("actor-is-subalgebra")
    if not check_subalgebra(sd.result, sd.actor_subspace).passed:
        rb.fail("actor-is-subalgebra")
    rb.check("restricted-brackets")
    for S, E in ((act.target, sd.embed_target), (act.actor, sd.embed_actor)):
        for u in S.basis():
            for v in S.basis():
                res = vsub(sd.result.br(E.apply(u), E.apply(v)), E.apply(S.br(u, v)))
                if any(res):
                    rb.fail("restricted-brackets", (), res)
    return rb.build()


# ---------------------------------------------------------------------------
# coset modules


@dataclass(frozen=True)
class CosetHomModule:
    """A/B with the left B-action b*(a+B) = b*a + B and twist a+B -> alpha(a)+B.

    ``action[p][q]`` is b_p * c_q in complement coordinates.
    """

    parent: HomAssociativeAlgebra
    sub: SubspaceData
    complement: tuple  # representatives in A-coordinates
    action: tuple
    twist: Matrix

    @property
    def dim(self) -> int:
        return len(self.complement)

    def lift(self, coords: Sequence) -> Vector:
        return lincomb(coords, self.complement, self.parent.dim)

    def project(self, a: Vector) -> Vector:
        return quotient_projection(self.sub)[1](a)

    def act(self, b_coords: Sequence, x_coords: Sequence) -> Vector:
        return _bilinear_rect(self.action, b_coords, x_coords, self.dim)

    @property
    def module(self) -> HomModule:
        return HomModule(self.dim, self.twist)


def coset_module(A: HomAssociativeAlgebra, B: SubspaceData) -> CosetHomModule:
    rep = check_subalgebra(A, B)
    if rep.failed("twist-stable"):
        raise InvalidInput("B is not stable under the twist; the quotient twist is undefined",
                           witness=("twist-stable", rep.witness("twist-stable").witness))
    if not rep.passed:
        raise InvalidInput("B is not a subalgebra", witness=("closed-under-product",))
    comp, project = quotient_projection(B)
    # well-definedness: the defining formulas must kill B
    for b in B.basis:
        for b2 in B.basis:
            if any(project(A.mul(b, b2))):
                raise InvalidInput("induced action is not well-defined")
        if any(project(A.twist(b))):
            raise InvalidInput("induced twist is not well-defined")
    q = len(comp)
    action = tuple(tuple(project(A.mul(b, c)) for c in comp) for b in B.basis)
    twist = Matrix.from_columns([project(A.twist(c)) for c in comp], q)
    return CosetHomModule(A, B, tuple(comp), action, twist)


@dataclass(frozen=True)
class FreeBasisWitness:
    X: tuple  # coset coordinates
    matrix: Matrix
    passed: bool
    twist_stable: bool
    over: str  # "plain" (B itself) or "unitization" (K (+) B)

    def __bool__(self):
        return self.passed


def acts_unitally(Q: CosetHomModule) -> bool:
    """Some b in B acts as the identity on A/B."""
    m, q = Q.sub.dim, Q.dim
    if q == 0:
        return True
    if m == 0:
        return False
    cols = []
    for p in range(m):
        cols.append(tuple(c for r in range(q) for c in Q.act(unit_vec(m, p), unit_vec(q, r))))
    target = tuple(Fraction(int(s == r)) for r in range(q) for s in range(q))
    return solve(cols, target) is not None


def check_free_basis(Q: CosetHomModule, X: Sequence[Sequence], over: str = "auto") -> FreeBasisWitness:
    """(c_x)_x -> sum_x c_x * x is a bijection onto A/B.

    Coefficients range over B when B acts unitally on A/B ("plain"), and
    over the unitization K (+) B otherwise, so that B = 0 reduces to an
    ordinary vector-space basis.
    """
    X = tuple(tuple(to_fraction(c) for c in x) for x in X)
    if any(len(x) != Q.dim for x in X):
        raise InvalidInput("free basis elements must be given in A/B coordinates")
    if over == "auto":
        over = "plain" if acts_unitally(Q) else "unitization"
    if over not in ("plain", "unitization"):
        raise InvalidInput(f"unknown freeness mode {over!r}")
    m = Q.sub.dim
    cols = []
    for x in X:
        if over == "unitization":
            cols.append(x)
        for p in range(m):
            cols.append(Q.act(unit_vec(m, p), x))
    mat = Matrix.from_columns(cols, Q.dim) if cols else Matrix.zeros(Q.dim, 0)
    square = mat.nrows == mat.ncols
    passed = square and (mat.nrows == 0 or rank_of(cols) == mat.nrows)
    twisted = [Q.twist.apply(x) for x in X]
    stable = rank_of(list(X) + twisted) == rank_of(list(X)) if X else True
    return FreeBasisWitness(X, mat, passed, stable, over)


def search_free_basis(Q: CosetHomModule, coeffs=(0, 1, -1), max_dim: int = 4):
    """Exhaustive search for a free basis with small integer coset coordinates."""
    import itertools

    if Q.dim > max_dim:
        raise InvalidInput("exhaustive free-basis search is limited to small quotients")
    over = "plain" if acts_unitally(Q) else "unitization"
    rank = Q.sub.dim + (over == "unitization")
    if rank == 0 or Q.dim % rank:
        return None
    size = Q.dim // rank
    if size == 0:
        return check_free_basis(Q, (), over)
    candidates = [v for v in itertools.product(coeffs, repeat=Q.dim) if any(v)]
    for combo in itertools.combinations(candidates, size):
        w = check_free_basis(Q, combo, over)
        if w.passed:
            return w
    return None


def coset_twist_involutive(Q: CosetHomModule) -> bool:
    return check_hom_module(Q.module).passed
