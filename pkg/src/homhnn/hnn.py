"""HNN-extensions of involutive Hom-associative and Hom-Lie algebras.

Associative side: the module Q spanned by (a, u) with a in A and u a normal
sequence, the left multiplications a -> a-bar, the letter operators sigma_i,
and exact residuals of

    sigma_i . b-bar  -  theta_i(b)-bar . sigma_i  -  delta_i(b)-bar

on the part of Q where truncation does not clip.

Normal sequences are words in tags (i, x). A tag with x = None is the bare
letter t_i; it carries the B_i-component b_0 of a coefficient under the
decomposition a = b_0 + sum_x b_x * alpha(x), which is unique when A/B_i is
free over B_i on X_i.

Lie side: the presentation h = <g, t : [t, s] = d(s)>, the associative
model M built on the truncated enveloping algebra, and the embedding
certificate for g -> M.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .certificates import EmbeddingCertificate
from .construct import HomAction, check_free_basis, coset_module, semidirect_product
from .exactlin import (
    AxiomReport,
    HomModule,
    InvalidInput,
    LinearMapBetween,
    Matrix,
    ReportBuilder,
    check_hom_morphism,
    lincomb,
    mat_kernel,
    rank_of,
    solve,
    to_fraction,
    unit_vec,
    vadd,
    vsub,
)
from .freepres import (
    EnvelopingAlgebra,
    PresentedAlgebra,
    _trees_of_degree,
    add_into,
    check_pbw_injectivity,
    commutator_relations,
    enveloping,
    free_product,
    leibniz_images,
    render_tree,
    tree_degree,
    tree_key,
)
from .homalg import (
    DEFAULT_VARIANT,
    DerivationData,
    HomAssociativeAlgebra,
    HomLieAlgebra,
    LeibnizVariant,
    SubspaceData,
    check_beta_k_derivation,
    check_hom_associative,
    check_hom_lie,
    check_hom_morphism_theta,
    check_subalgebra,
    check_theta_derivation,
    restricted_twist,
)

# ---------------------------------------------------------------------------
# associative data


@dataclass(frozen=True)
class HNNLetter:
    """One letter t_i: subalgebra B_i, morphism theta_i, derivation delta_i, free basis X_i.

    theta and delta are dim(A) x dim(B) matrices on B-coordinates; X holds
    coset representatives in A-coordinates.
    """

    B: SubspaceData
    theta: Matrix
    delta: Matrix
    X: tuple

    def __post_init__(self):
        for name in ("theta", "delta"):
            m = getattr(self, name)
            if not isinstance(m, Matrix):
                object.__setattr__(self, name, Matrix(m))
        object.__setattr__(self, "X", tuple(tuple(to_fraction(c) for c in x) for x in self.X))

    def b(self, coords) -> tuple:
        return lincomb(coords, self.B.basis, self.B.parent_dim)


@dataclass(frozen=True)
class HNNAssocData:
    A: HomAssociativeAlgebra
    letters: tuple
    variant: LeibnizVariant = DEFAULT_VARIANT

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "variant", LeibnizVariant(self.variant))
        n = self.A.dim
        for L in self.letters:
            if L.B.parent_dim != n:
                raise InvalidInput("subalgebra lives in the wrong dimension")
            if L.theta.shape != (n, L.B.dim) or L.delta.shape != (n, L.B.dim):
                raise InvalidInput("theta/delta must be dim(A) x dim(B)")
            if any(len(x) != n for x in L.X):
                raise InvalidInput("free basis representatives must be A-vectors")


@dataclass(frozen=True)
class HNNAssocPresentation:
    """Symbolic record of H = <A, B_i, t_i, delta_i, theta_i>."""

    data: HNNAssocData
    generators: tuple
    relations: tuple
    twist: tuple

    def to_dict(self):
        return {"generators": list(self.generators), "relations": list(self.relations), "twist": list(self.twist)}


def _fmt_vec(v, names):
    parts = []
    for c, nm in zip(v, names):
        if c:
            parts.append(nm if c == 1 else f"({c})*{nm}")
    return " + ".join(parts) if parts else "0"


def hnn_assoc_presentation(data: HNNAssocData) -> HNNAssocPresentation:
    names = data.A.basis_names
    gens = tuple(names) + tuple(f"t{i + 1}" for i in range(len(data.letters)))
    rels = []
    for i, L in enumerate(data.letters):
        for p, b in enumerate(L.B.basis):
            e = unit_vec(L.B.dim, p)
            rels.append(
                f"t{i + 1}*({_fmt_vec(b, names)}) - ({_fmt_vec(L.theta.apply(e), names)})*t{i + 1}"
                f" = {_fmt_vec(L.delta.apply(e), names)}"
            )
    twist = tuple(f"a({nm}) = {_fmt_vec(data.A.twist(unit_vec(data.A.dim, k)), names)}"
                  for k, nm in enumerate(names)) + tuple(f"a(t{i + 1}) = t{i + 1}" for i in range(len(data.letters)))
    return HNNAssocPresentation(data, gens, tuple(rels), twist)


def _coset_coords(A, B, X):
    Q = coset_module(A, B)
    return Q, [Q.project(x) for x in X]


def validate_hnn_assoc_data(data: HNNAssocData) -> AxiomReport:
    """Every hypothesis of the associative HNN construction, with witnesses."""
    A = data.A
    rb = ReportBuilder()
    base = check_hom_associative(A)
    for a in base.checked:
        rb.check(a)
    for v in base.violations:
        rb.fail(v.axiom, v.witness, v.residual)
    for i, L in enumerate(data.letters):
        tag = f"letter {i + 1}"
        sub = check_subalgebra(A, L.B)
        rb.check(f"{tag}: B is a Hom-associative subalgebra")
        if not sub.passed:
            v = sub.violations[0]
            rb.fail(f"{tag}: B is a Hom-associative subalgebra", v.witness, v.residual)
            continue
        ab = restricted_twist(A, L.B)
        dom = HomModule(L.B.dim, ab)
        theta = LinearMapBetween(dom, A.module, L.theta)
        delta = LinearMapBetween(dom, A.module, L.delta)
        rb.check(f"{tag}: theta is injective")
        if L.theta.rank() < L.B.dim:
            rb.fail(f"{tag}: theta is injective", (), tuple(mat_kernel(L.theta)[0]))
        mor = check_hom_morphism_theta(A, L.B, theta)
        rb.check(f"{tag}: theta is a morphism")
        if not mor.passed:
            v = mor.violations[0]
            rb.fail(f"{tag}: theta is a morphism", (v.axiom,) + v.witness, v.residual)
        rb.check(f"{tag}: alpha commutes with delta")
        dm = check_hom_morphism(delta)
        if not dm.passed:
            v = dm.violations[0]
            rb.fail(f"{tag}: alpha commutes with delta", v.witness, v.residual)
        rb.check(f"{tag}: delta is a theta-derivation [{data.variant.value}]")
        if mor.passed:
            td = check_theta_derivation(A, L.B, theta, delta, data.variant)
            if not td.passed:
                v = td.violations[0]
                rb.fail(f"{tag}: delta is a theta-derivation [{data.variant.value}]", v.witness, v.residual)
        rb.check(f"{tag}: A/B is free on X")
        try:
            Q, xs = _coset_coords(A, L.B, L.X)
        except InvalidInput as exc:
            rb.fail(f"{tag}: A/B is free on X", (str(exc),), ())
            continue
        w = check_free_basis(Q, xs, over="plain")
        if not w.passed:
            rb.fail(f"{tag}: A/B is free on X", (), ())
        rb.note(f"{tag}: X twist-stable in A/B", w.twist_stable)
    return rb.build()


# ---------------------------------------------------------------------------
# normal sequences and Q


def _tag_key(tag):
    i, x = tag
    return (i, -1 if x is None else x)


def enumerate_normal_sequences(data: HNNAssocData, r: int, *, bare_letters: bool = True) -> list:
    """All tag words of length 0..r, ordered by length then lexicographically.

    With ``bare_letters`` each letter also contributes the tag (i, None).
    """
    if r < 0:
        raise InvalidInput("maximal length must be nonnegative")
    tags = []
    for i, L in enumerate(data.letters):
        if bare_letters:
            tags.append((i, None))
        tags.extend((i, k) for k in range(len(L.X)))
    tags.sort(key=_tag_key)
    out = []
    for length in range(r + 1):
        out.extend(itertools.product(tags, repeat=length))
    return out


def render_sequence(u, data: HNNAssocData) -> str:
    if not u:
        return "()"
    parts = []
    for i, x in u:
        if x is None:
            parts.append(f"t{i + 1}")
        else:
            parts.append(f"(t{i + 1}*a(x{i + 1}_{x + 1}))")
    return "*".join(parts)


@dataclass
class TruncatedQ:
    data: HNNAssocData
    r: int
    sequences: list
    alpha: Matrix | None
    alpha_note: str = ""
    index: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.data.A.dim

    @property
    def dim(self) -> int:
        return self.n * len(self.sequences)

    def coord(self, j: int, u) -> int:
        return self.index[u] * self.n + j

    def valid_columns(self) -> list:
        return [self.coord(j, u) for u in self.sequences if len(u) < self.r for j in range(self.n)]


def _express_in_X(L: HNNLetter, v):
    """K-coefficients of v over the representatives X, or None."""
    return solve(list(L.X), v) if L.X else (() if not any(v) else None)


def build_Q(data: HNNAssocData, r: int, *, bare_letters: bool = True) -> TruncatedQ:
    seqs = enumerate_normal_sequences(data, r, bare_letters=bare_letters)
    Q = TruncatedQ(data, r, seqs, None)
    Q.index = {u: k for k, u in enumerate(seqs)}
    A = data.A
    n = A.dim
    # twist of each tag: None stays, x -> alpha(x) re-expanded over X (K-linear only)
    tag_twist = {}
    for i, L in enumerate(data.letters):
        tag_twist[(i, None)] = {(i, None): Fraction(1)}
        for k, x in enumerate(L.X):
            c = _express_in_X(L, A.twist(x))
            if c is None:
                Q.alpha_note = f"alpha(x) leaves the span of X for letter {i + 1}; alpha_Q not built"
                return Q
            tag_twist[(i, k)] = {(i, y): cy for y, cy in enumerate(c) if cy}
    cols = []
    for u in seqs:
        expansions = [{(): Fraction(1)}]
        for tag in u:
            nxt = []
            for pre in expansions:
                for t2, c2 in tag_twist[tag].items():
                    nxt.append({k + (t2,): v * c2 for k, v in pre.items()})
            merged: dict = {}
            for e in nxt:
                add_into(merged, e)
            expansions = [merged]
        exp = expansions[0]
        for j in range(n):
            col = [Fraction(0)] * Q.dim
            aj = A.twist(unit_vec(n, j))
            for w, c in exp.items():
                for k, a in enumerate(aj):
                    if a:
                        col[Q.coord(k, w)] += c * a
            cols.append(col)
    # columns were generated in (u, j) order which matches coord()
    Q.alpha = Matrix.from_columns(cols, Q.dim)
    return Q


@dataclass(frozen=True)
class EndoOperator:
    matrix: Matrix
    valid: tuple  # column indices where the operator is faithful to the infinite module

    @property
    def clipped(self) -> tuple:
        vs = set(self.valid)
        return tuple(c for c in range(self.matrix.ncols) if c not in vs)


def left_mult_op(Q: TruncatedQ, a) -> EndoOperator:
    A = Q.data.A
    n = A.dim
    a = tuple(to_fraction(c) for c in a)
    cols = [None] * Q.dim
    for u in Q.sequences:
        for j in range(n):
            col = [Fraction(0)] * Q.dim
            prod = A.mul(a, unit_vec(n, j))
            for k, c in enumerate(prod):
                if c:
                    col[Q.coord(k, u)] = c
            cols[Q.coord(j, u)] = col
    return EndoOperator(Matrix.from_columns(cols, Q.dim), tuple(range(Q.dim)))


def decomposition_matrix(A: HomAssociativeAlgebra, L: HNNLetter) -> Matrix:
    """Columns: b_p (bare letter block), then b_p * alpha(x) for each x in X."""
    n = A.dim
    cols = [b for b in L.B.basis]
    for x in L.X:
        ax = A.twist(x)
        cols.extend(A.mul(b, ax) for b in L.B.basis)
    M = Matrix.from_columns(cols, n) if cols else Matrix.zeros(n, 0)
    if not M.is_square() or M.rank() < n:
        raise InvalidInput(
            "coefficients cannot be decomposed over B + sum_x B*alpha(x); "
            "this contradicts the freeness witness"
        )
    return M


def sigma_op(Q: TruncatedQ, i: int) -> EndoOperator:
    data = Q.data
    A = data.A
    n = A.dim
    L = data.letters[i]
    m = L.B.dim
    Dinv = decomposition_matrix(A, L).inverse()
    ax = [A.twist(x) for x in L.X]
    cols = [[Fraction(0)] * Q.dim for _ in range(Q.dim)]
    for u in Q.sequences:
        if len(u) >= Q.r:
            continue
        for j in range(n):
            col = cols[Q.coord(j, u)]
            coeffs = Dinv.apply(unit_vec(n, j))
            blocks = [coeffs[k * m:(k + 1) * m] for k in range(1 + len(L.X))]
            for slot, bc in enumerate(blocks):
                if not any(bc):
                    continue
                tag = (i, None) if slot == 0 else (i, slot - 1)
                th = L.theta.apply(bc)
                de = L.delta.apply(bc)
                if slot:
                    de = A.mul(de, ax[slot - 1])
                w = (tag,) + u
                for k in range(n):
                    if th[k]:
                        col[Q.coord(k, w)] += th[k]
                    if de[k]:
                        col[Q.coord(k, u)] += de[k]
    return EndoOperator(Matrix.from_columns(cols, Q.dim), tuple(Q.valid_columns()))


@dataclass(frozen=True)
class RelationFragment:
    label: str
    residual: Matrix  # restricted to the validity domain
    zero: bool


def check_hnn_relation(Q: TruncatedQ, i: int, b_coords, *, sigma: EndoOperator | None = None) -> RelationFragment:
    L = Q.data.letters[i]
    bc = tuple(to_fraction(c) for c in b_coords)
    b = L.b(bc)
    sig = sigma if sigma is not None else sigma_op(Q, i)
    bbar = left_mult_op(Q, b).matrix
    thbar = left_mult_op(Q, L.theta.apply(bc)).matrix
    debar = left_mult_op(Q, L.delta.apply(bc)).matrix
    full = sig.matrix @ bbar - thbar @ sig.matrix - debar
    valid = sig.valid
    res = Matrix.from_columns([full.column(c) for c in valid], full.nrows) if valid else Matrix.zeros(full.nrows, 0)
    label = f"t{i + 1}*b - theta(b)*t{i + 1} = delta(b), b = {_fmt_vec(b, Q.data.A.basis_names)}"
    return RelationFragment(label, res, res.is_zero())


def embedding_certificate_assoc(data: HNNAssocData, r: int, *, bare_letters: bool = True) -> EmbeddingCertificate:
    rep = validate_hnn_assoc_data(data)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"HNN hypothesis fails: {v.axiom}", witness=(v.axiom, v.witness))
    Q = build_Q(data, r, bare_letters=bare_letters)
    A = data.A
    rels = []
    for i, L in enumerate(data.letters):
        sig = sigma_op(Q, i)
        for p in range(L.B.dim):
            frag = check_hnn_relation(Q, i, unit_vec(L.B.dim, p), sigma=sig)
            rels.append((frag.label, frag.zero))
    stacked = []
    for e in A.basis():
        M = left_mult_op(Q, e).matrix
        stacked.append(tuple(c for row in M.rows for c in row))
    kernel = A.dim - rank_of(stacked) if stacked else 0
    info = [("dim_Q", Q.dim), ("sequences", len(Q.sequences)), ("validity_domain", len(Q.valid_columns()))]
    if Q.alpha is not None:
        sq = Q.alpha @ Q.alpha
        info.append(("alpha_Q_involutive", sq == Matrix.identity(Q.dim)))
    else:
        info.append(("alpha_Q", Q.alpha_note))
    return EmbeddingCertificate(
        kind="hnn-assoc",
        truncation=(("max_length", r), ("variant", data.variant.value)),
        relations=tuple(rels),
        kernel_dim=kernel,
        info=tuple(info),
    )


# ---------------------------------------------------------------------------
# instance search (classical case alpha = id) and the Leibniz-variant experiment


def derivation_space(A: HomAssociativeAlgebra, B: SubspaceData, theta: Matrix, variant) -> list:
    """Basis of all delta: B -> A obeying the variant's Leibniz rule and commuting with alpha."""
    variant = LeibnizVariant(variant)
    n, m = A.dim, B.dim
    nunk = n * m  # delta[k][p] -> index k*m + p
    eqs = []

    def lin_mul_left(left_vec, p):
        # coefficients of (delta(b_p) as unknowns) multiplied on the right of left_vec: left_vec * delta(b_p)
        rows = [[Fraction(0)] * nunk for _ in range(n)]
        for k in range(n):
            prod = A.mul(left_vec, unit_vec(n, k))
            for o, c in enumerate(prod):
                if c:
                    rows[o][k * m + p] += c
        return rows

    def lin_mul_right(p, right_vec):
        rows = [[Fraction(0)] * nunk for _ in range(n)]
        for k in range(n):
            prod = A.mul(unit_vec(n, k), right_vec)
            for o, c in enumerate(prod):
                if c:
                    rows[o][k * m + p] += c
        return rows

    def lin_apply(coords):
        rows = [[Fraction(0)] * nunk for _ in range(n)]
        for p, c in enumerate(coords):
            if c:
                for k in range(n):
                    rows[k][k * m + p] += c
        return rows

    th = [theta.apply(unit_vec(m, p)) for p in range(m)]
    for p, u in enumerate(B.basis):
        for q, v in enumerate(B.basis):
            lhs = lin_apply(B.coords(A.mul(u, v)))
            right_factor = v if variant is LeibnizVariant.MIXED else th[q]
            t1 = lin_mul_right(p, right_factor)
            t2 = lin_mul_left(th[p], q)
            for o in range(n):
                eqs.append([a - b - c for a, b, c in zip(lhs[o], t1[o], t2[o])])
    ab = restricted_twist(A, B)
    for p in range(m):
        # delta(alpha_B e_p) - alpha_A delta(e_p)
        lhs = lin_apply(ab.column(p))
        rows = [[Fraction(0)] * nunk for _ in range(n)]
        for o in range(n):
            for k in range(n):
                a = A.alpha[o, k]
                if a:
                    rows[o][k * m + p] += a
        for o in range(n):
            eqs.append([x - y for x, y in zip(lhs[o], rows[o])])
    if not eqs:
        ker = [unit_vec(nunk, i) for i in range(nunk)]
    else:
        ker = mat_kernel(Matrix(tuple(tuple(e) for e in eqs)))
    return [Matrix(tuple(tuple(v[k * m + p] for p in range(m)) for k in range(n))) for v in ker]


def _small_vectors(n, coeffs=(-1, 0, 1)):
    return [v for v in itertools.product(coeffs, repeat=n) if any(v)]


def candidate_subalgebras(A: HomAssociativeAlgebra, max_dim: int = 2):
    seen = set()
    vecs = _small_vectors(A.dim)
    out = [SubspaceData.whole(A.dim)]
    for k in range(1, min(max_dim, A.dim - 1) + 1):
        for combo in itertools.combinations(vecs, k):
            if rank_of([tuple(map(Fraction, v)) for v in combo]) < k:
                continue
            B = SubspaceData(A.dim, combo)
            red = tuple(tuple(r) for r in _rref_key(B))
            if red in seen:
                continue
            seen.add(red)
            if check_subalgebra(A, B).passed:
                out.append(B)
    return out


def _rref_key(B: SubspaceData):
    from .exactlin import rref

    return rref(B.basis, B.parent_dim)[0]


def candidate_thetas(A, B, rng: random.Random, limit: int = 400):
    """Injective algebra + Hom-module morphisms B -> A with small integer columns."""
    vecs = [(0,) * A.dim] + _small_vectors(A.dim)
    m = B.dim
    total = len(vecs) ** m
    if total <= limit:
        pool = itertools.product(vecs, repeat=m)
    else:
        pool = (tuple(rng.choice(vecs) for _ in range(m)) for _ in range(limit))
    dom = HomModule(m, restricted_twist(A, B))
    out = []
    seen = set()
    for cols in pool:
        if cols in seen:
            continue
        seen.add(cols)
        th = Matrix.from_columns([tuple(map(Fraction, c)) for c in cols], A.dim)
        if th.rank() < m:
            continue
        if check_hom_morphism_theta(A, B, LinearMapBetween(dom, A.module, th)).passed:
            out.append(th)
    return out


def search_assoc_instances(seed: int = 0, max_dim: int = 3, variant=DEFAULT_VARIANT,
                           algebras=None, max_instances: int = 200, require_nonidentity_theta: bool = False):
    """Validated HNNAssocData found by exhaustive/random search over small tables."""
    from . import library as lib

    rng = random.Random(seed)
    if algebras is None:
        algebras = [
            lib.idempotent_line(), lib.dual_numbers(), lib.group_algebra_c2(), lib.diagonal_algebra(2),
            lib.truncated_polynomials(3), lib.upper_triangular(), lib.diagonal_algebra(3),
        ]
    found = []
    for A in algebras:
        if A.dim > max_dim:
            continue
        for B in candidate_subalgebras(A):
            try:
                Qc = coset_module(A, B)
            except InvalidInput:
                continue
            w = None
            if Qc.dim == 0:
                w = check_free_basis(Qc, (), over="plain")
            elif B.dim and Qc.dim % B.dim == 0:
                for combo in itertools.combinations(_small_vectors(Qc.dim), Qc.dim // B.dim):
                    cand = check_free_basis(Qc, combo, over="plain")
                    if cand.passed:
                        w = cand
                        break
            if w is None or not w.passed:
                continue
            X = tuple(Qc.lift(x) for x in w.X)
            incl = B.inclusion()
            for th in candidate_thetas(A, B, rng):
                if require_nonidentity_theta and th == incl:
                    continue
                space = derivation_space(A, B, th, variant)
                deltas = [Matrix.zeros(A.dim, B.dim)] + space
                if len(space) > 1:
                    deltas.append(sum(space[1:], space[0]))
                for de in deltas:
                    data = HNNAssocData(A, (HNNLetter(B, th, de, X),), variant)
                    if validate_hnn_assoc_data(data).passed:
                        found.append(data)
                        if len(found) >= max_instances:
                            return found
    return found


def discriminate_variants(seed: int = 0, max_dim: int = 3, r: int = 2) -> dict:
    """For theta != inclusion, run the relation residual under each Leibniz variant.

    A variant "closes" on an instance when every residual is exactly zero.
    """
    summary = {}
    witness = {}
    for variant in LeibnizVariant:
        instances = search_assoc_instances(seed, max_dim, variant, require_nonidentity_theta=True,
                                           max_instances=10_000)
        other = [v for v in LeibnizVariant if v is not variant][0]
        tested = closed = exclusive = exclusive_closed = 0
        for data in instances:
            L = data.letters[0]
            Q = build_Q(data, r)
            sig = sigma_op(Q, 0)
            ok = all(check_hnn_relation(Q, 0, unit_vec(L.B.dim, p), sigma=sig).zero for p in range(L.B.dim))
            dom = HomModule(L.B.dim, restricted_twist(data.A, L.B))
            in_other = check_theta_derivation(
                data.A, L.B, LinearMapBetween(dom, data.A.module, L.theta),
                LinearMapBetween(dom, data.A.module, L.delta), other,
            ).passed
            tested += 1
            closed += ok
            if not in_other:
                exclusive += 1
                exclusive_closed += ok
                if not ok and variant.value not in witness:
                    witness[variant.value] = _describe(data)
        summary[variant.value] = {
            "instances": tested,
            "closed": closed,
            "exclusive_instances": exclusive,
            "exclusive_closed": exclusive_closed,
        }
    closing = [v for v, s in summary.items() if s["closed"] == s["instances"] and s["instances"]]
    if len(closing) == 1:
        outcome = closing[0]
    elif len(closing) == 2:
        outcome = "both"
    else:
        outcome = "none"
    return {
        "seed": seed,
        "max_dim": max_dim,
        "max_length": r,
        "variants": summary,
        "selected_default": outcome,
        "failure_witness": witness,
    }


def _describe(data: HNNAssocData) -> dict:
    L = data.letters[0]
    fmt = lambda M: [[str(c) for c in row] for row in M.rows]  # noqa: E731
    return {
        "algebra": list(data.A.basis_names),
        "table": [[[str(c) for c in cell] for cell in row] for row in data.A.table],
        "B": [[str(c) for c in b] for b in L.B.basis],
        "theta": fmt(L.theta),
        "delta": fmt(L.delta),
        "X": [[str(c) for c in x] for x in L.X],
    }


# ---------------------------------------------------------------------------
# Hom-Lie side


@dataclass(frozen=True)
class HNNLieData:
    """g, a Hom-Lie subalgebra s, and d: s -> g as a dim(g) x dim(s) matrix."""

    g: HomLieAlgebra
    s: SubspaceData
    d: Matrix

    def __post_init__(self):
        if not isinstance(self.d, Matrix):
            object.__setattr__(self, "d", Matrix(self.d))
        if self.d.shape != (self.g.dim, self.s.dim) and not (self.s.dim == 0):
            raise InvalidInput("d must be dim(g) x dim(s)")
        if self.s.parent_dim != self.g.dim:
            raise InvalidInput("s lives in the wrong dimension")

    @classmethod
    def from_derivation(cls, g: HomLieAlgebra, d: DerivationData) -> "HNNLieData":
        return cls(g, SubspaceData.whole(g.dim), d.map)

    def d_of(self, coords) -> tuple:
        return self.d.apply(coords) if self.s.dim else tuple(Fraction(0) for _ in range(self.g.dim))


def validate_hnn_lie_data(data: HNNLieData) -> AxiomReport:
    g, s = data.g, data.s
    rb = ReportBuilder()
    base = check_hom_lie(g)
    for a in base.checked:
        rb.check(a)
    for v in base.violations:
        rb.fail(v.axiom, v.witness, v.residual)
    rb.check("Hom-Lie subalgebra")
    sub = check_subalgebra(g, s)
    if not sub.passed:
        v = sub.violations[0]
        rb.fail("Hom-Lie subalgebra", (v.axiom,) + v.witness, v.residual)
        return rb.build()
    m = s.dim
    bs = restricted_twist(g, s)
    rb.check("derivation commutes with twist")
    for p in range(m):
        res = vsub(data.d_of(bs.column(p)), g.twist(data.d_of(unit_vec(m, p))))
        if any(res):
            rb.fail("derivation commutes with twist", (p,), res)
            break
    rb.check("derivation Leibniz rule")
    for p, u in enumerate(s.basis):
        for q, v in enumerate(s.basis):
            lhs = data.d_of(s.coords(g.br(u, v)))
            du, dv = data.d_of(unit_vec(m, p)), data.d_of(unit_vec(m, q))
            rhs = vadd(g.br(du, g.twist(v)), g.br(g.twist(u), dv))
            res = vsub(lhs, rhs)
            if any(res):
                rb.fail("derivation Leibniz rule", (p, q), res)
                break
        if rb.has_failed("derivation Leibniz rule"):
            break
    return rb.build()


@dataclass(frozen=True)
class HNNLiePresentation:
    data: HNNLieData
    generators: tuple
    brackets: tuple  # (i, j, vector) for i < j with nonzero bracket in g
    t_relations: tuple  # (s vector, d(s) vector)
    twist: Matrix  # on g (+) span{t}

    def bracket_table(self) -> HomLieAlgebra:
        """Finite bracket table; only available when s = g."""
        g, s = self.data.g, self.data.s
        n = g.dim
        if s.dim != n:
            raise InvalidInput("the presentation has a finite table only when s = g")
        full = Matrix.from_columns([self.data.d_of(s.coords(unit_vec(n, k))) for k in range(n)], n)
        N = n + 1
        t = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]
        for i in range(n):
            for j in range(n):
                for k, c in enumerate(g.bracket[i][j]):
                    t[i][j][k] = c
        for k in range(n):
            col = full.column(k)
            for o, c in enumerate(col):
                t[n][k][o] = c
                t[k][n][o] = -c
        return HomLieAlgebra(HomModule(N, self.twist), t, tuple(g.basis_names) + ("t",))

    def render(self) -> list:
        names = self.data.g.basis_names
        lines = [f"generators: {' '.join(self.generators)}"]
        for i, j, v in self.brackets:
            lines.append(f"[{names[i]}, {names[j]}] = {_fmt_vec(v, names)}")
        for sv, dv in self.t_relations:
            lines.append(f"[t, {_fmt_vec(sv, names)}] = {_fmt_vec(dv, names)}")
        for k, nm in enumerate(self.generators):
            lines.append(f"beta({nm}) = {_fmt_vec(self.twist.column(k), self.generators)}")
        return lines


def _block_twist(g: HomLieAlgebra) -> Matrix:
    n = g.dim
    rows = [list(r) + [0] for r in g.beta.rows] + [[0] * n + [1]]
    return Matrix(tuple(tuple(r) for r in rows))


def hnn_lie_presentation(data: HNNLieData) -> HNNLiePresentation:
    rep = validate_hnn_lie_data(data)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"HNN hypothesis fails: {v.axiom}", witness=(v.axiom, v.witness))
    g = data.g
    n = g.dim
    brs = tuple((i, j, g.bracket[i][j]) for i in range(n) for j in range(i + 1, n) if any(g.bracket[i][j]))
    trel = tuple((b, data.d_of(unit_vec(data.s.dim, p))) for p, b in enumerate(data.s.basis))
    return HNNLiePresentation(data, tuple(g.basis_names) + ("t",), brs, trel, _block_twist(g))


@dataclass
class HNNAssocModel:
    """M = <U_g, U_s, t, delta> truncated at (degree, t-count)."""

    data: HNNLieData
    envelope: EnvelopingAlgebra
    algebra: PresentedAlgebra
    s_basis_trees: list
    delta_images: dict

    @property
    def t(self) -> int:
        return self.data.g.dim


def _s_trees(m: int, max_degree: int):
    out = []
    for k in range(1, max_degree + 1):
        out.extend(sorted(_trees_of_degree(m, k), key=tree_key))
    return out


def build_M(data: HNNLieData, degree: int, r: int) -> HNNAssocModel:
    rep = validate_hnn_lie_data(data)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"HNN hypothesis fails: {v.axiom}", witness=(v.axiom, v.witness))
    if r < 1:
        raise InvalidInput("the t-count bound must be at least 1")
    g, s = data.g, data.s
    n, m = g.dim, s.dim
    E = enveloping(g, degree)
    U = E.algebra
    s_trees = _s_trees(m, degree) if m else []
    f = leibniz_images(
        U,
        [U.from_vector(b) for b in s.basis],
        [U.from_vector(data.d_of(unit_vec(m, p))) for p in range(m)],
        1,
    )
    images = {w: f(w) for w in s_trees}
    # well-definedness: every linear dependency among images of s-words must be killed by D
    coords = [U.coords(images[w][0]) for w in s_trees]
    if coords:
        Mimg = Matrix.from_columns(coords, len(U.basis))
        for kv in mat_kernel(Mimg):
            acc: dict = {}
            for c, w in zip(kv, s_trees):
                if c:
                    add_into(acc, images[w][1], c)
            res = U.reduce(acc)
            if res:
                rel = " + ".join(f"({c})*{render_tree(w, [f's{p + 1}' for p in range(m)])}"
                                 for c, w in zip(kv, s_trees) if c)
                raise InvalidInput(
                    f"derivation extension is not well-defined at degree {degree}: "
                    f"relation {rel} maps to {U.render(res)}",
                    witness=("well-defined", rel),
                )
    # basis of the image of U_s below the top degree
    chosen, chosen_coords = [], []
    for w, cv in zip(s_trees, coords):
        if tree_degree(w) > degree - 1:
            continue
        if rank_of(chosen_coords + [cv]) > len(chosen_coords):
            chosen.append(w)
            chosen_coords.append(cv)
    t = {n: Fraction(1)}
    rels = commutator_relations(g)
    for w in chosen:
        img, der = images[w]
        rel = add_into(free_product(t, img), free_product(img, t), -1)
        add_into(rel, der, -1)
        rels.append(rel)
    Mmod = HomModule(n + 1, _block_twist(g))
    M = PresentedAlgebra(Mmod, degree, rels, names=tuple(g.basis_names) + ("t",), unital=True, budget={n: r})
    return HNNAssocModel(data, E, M, chosen, {w: images[w][1] for w in chosen})


def embedding_certificate_lie(data: HNNLieData, degree: int, r: int) -> EmbeddingCertificate:
    model = build_M(data, degree, r)
    g = data.g
    n = g.dim
    M = model.algebra
    U = model.envelope.algebra
    pbw = check_pbw_injectivity(model.envelope)
    rels = [("pbw-injectivity of U_g", pbw.passed)]
    t = {n: Fraction(1)}
    names = g.basis_names
    if degree >= 2:
        for p, sv in enumerate(data.s.basis):
            x = M.from_vector(sv)
            lhs = add_into(M.mul_free(t, x), M.mul_free(x, t), -1)
            add_into(lhs, M.from_vector(data.d_of(unit_vec(data.s.dim, p))), -1)
            rels.append((f"[t, {_fmt_vec(sv, names)}] = d({_fmt_vec(sv, names)})", not M.reduce(lhs)))
    images = [M.coords(M.gen(i)) for i in range(n)]
    kernel = n - rank_of(images) if n else 0
    ug = [M.coords({w: Fraction(1)}) for w in U.basis]
    ug_kernel = len(ug) - rank_of(ug) if ug else 0
    return EmbeddingCertificate(
        kind="hnn-lie",
        truncation=(("degree", degree), ("max_t", r)),
        relations=tuple(rels),
        kernel_dim=kernel,
        info=(
            ("U_g_degree_dims", tuple(U.degree_dims())),
            ("M_degree_dims", tuple(M.degree_dims())),
            ("U_g_to_M_kernel_dim", ug_kernel),
            ("t_relations", len(model.s_basis_trees)),
        ),
    )


def crosscheck_semidirect(g: HomLieAlgebra, d: DerivationData) -> AxiomReport:
    """HNN table with s = g against the semidirect product by the 1-dim algebra acting via d."""
    rep = check_beta_k_derivation(g, d)
    if not rep.passed or d.power != 1:
        raise InvalidInput("d must be a twist-derivation with power 1")
    pres = hnn_lie_presentation(HNNLieData.from_derivation(g, d))
    h = pres.bracket_table()
    sd = semidirect_product(HomAction.by_derivation(g, d.map)).result
    rb = ReportBuilder()
    rb.check("bracket-table-match")
    N = h.dim
    for i in range(N):
        for j in range(N):
            if h.bracket[i][j] != sd.bracket[i][j]:
                rb.fail("bracket-table-match", (i, j), vsub(h.bracket[i][j], sd.bracket[i][j]))
                break
        if rb.has_failed("bracket-table-match"):
            break
    rb.check("twist-match")
    if h.alpha != sd.alpha:
        rb.fail("twist-match")
    return rb.build()
