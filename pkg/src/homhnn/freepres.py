"""Free involutive Hom-associative algebras and presented quotients, truncated by degree.

Elements of the free (non-associative) algebra are sparse dicts mapping a
tree to its rational coefficient. A tree is

* an ``int`` -- a generator leaf,
* ``()`` -- the adjoined unit (degree 0, only in unital mode),
* a pair ``(left, right)`` -- a product.

A :class:`PresentedAlgebra` quotients the degree-``<= d`` part of the free
algebra by the ideal generated by every Hom-associator plus any extra
relations, closed under the twist and under left/right multiplication inside
the truncation. Normal forms are the trees that are not leading terms of the
ideal; the reduction map is the projection onto their span.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .certificates import EmbeddingCertificate
from .exactlin import AxiomReport, HomModule, InvalidInput, Matrix, ReportBuilder, rank_of, to_fraction
from .homalg import DerivationData, HomLieAlgebra, check_beta_k_derivation, check_hom_lie

UNIT = ()


# ---------------------------------------------------------------------------
# symbolic terms with twist markers


@dataclass(frozen=True)
class Leaf:
    gen: int
    exp: int = 0


@dataclass(frozen=True)
class Prod:
    left: object
    right: object


@dataclass(frozen=True)
class Twist:
    inner: object


def normalize_term(t):
    """Push twist markers to the leaves and reduce leaf exponents mod 2."""
    return _push(t, 0)


def _push(t, parity):
    if isinstance(t, Leaf):
        return Leaf(t.gen, (t.exp + parity) % 2)
    if isinstance(t, Twist):
        return _push(t.inner, parity ^ 1)
    if isinstance(t, Prod):
        return Prod(_push(t.left, parity), _push(t.right, parity))
    raise TypeError(f"not a term: {t!r}")


def is_normalized(t) -> bool:
    if isinstance(t, Leaf):
        return t.exp in (0, 1)
    if isinstance(t, Prod):
        return is_normalized(t.left) and is_normalized(t.right)
    return False


def term_degree(t) -> int:
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Twist):
        return term_degree(t.inner)
    return term_degree(t.left) + term_degree(t.right)


def render_term(t, names: Sequence[str]) -> str:
    """Canonical text, e.g. ``a(g1).(g2.g1)``; ``a(.)`` is the twist marker."""
    if isinstance(t, Leaf):
        return f"a({names[t.gen]})" if t.exp else names[t.gen]
    if isinstance(t, Twist):
        return f"a({render_term(t.inner, names)})"

    def side(s):
        r = render_term(s, names)
        return f"({r})" if isinstance(s, Prod) else r

    return f"{side(t.left)}.{side(t.right)}"


def parse_term(text: str, names: Sequence[str]):
    """Inverse of :func:`render_term`; products associate to the left."""
    lookup = {n: i for i, n in enumerate(names)}
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "().":
            toks.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "().":
                j += 1
            toks.append(text[i:j])
            i = j
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise InvalidInput(f"bad term {text!r}: expected {expected or 'token'} at {pos}")
        pos += 1
        return tok

    def atom():
        tok = take()
        if tok == "(":
            e = expr()
            take(")")
            return e
        if tok == "a" and peek() == "(":
            take("(")
            e = expr()
            take(")")
            return Twist(e)
        if tok not in lookup:
            raise InvalidInput(f"unknown generator {tok!r}")
        return Leaf(lookup[tok])

    def expr():
        e = atom()
        while peek() == ".":
            take(".")
            e = Prod(e, atom())
        return e

    out = expr()
    if pos != len(toks):
        raise InvalidInput(f"trailing input in term {text!r}")
    return _fold_twisted_leaves(out)


def _fold_twisted_leaves(t):
    if isinstance(t, Twist) and isinstance(t.inner, Leaf) and t.inner.exp == 0:
        return Leaf(t.inner.gen, 1)
    if isinstance(t, Twist):
        return Twist(_fold_twisted_leaves(t.inner))
    if isinstance(t, Prod):
        return Prod(_fold_twisted_leaves(t.left), _fold_twisted_leaves(t.right))
    return t


def tree_to_term(tree):
    if isinstance(tree, int):
        return Leaf(tree)
    if tree == UNIT:
        raise InvalidInput("the unit has no term representation")
    return Prod(tree_to_term(tree[0]), tree_to_term(tree[1]))


# ---------------------------------------------------------------------------
# trees and sparse elements


def tree_degree(tree) -> int:
    if isinstance(tree, int):
        return 1
    if tree == UNIT:
        return 0
    return tree_degree(tree[0]) + tree_degree(tree[1])


def _shape(tree) -> str:
    if isinstance(tree, int):
        return "*"
    if tree == UNIT:
        return ""
    return "(" + _shape(tree[0]) + _shape(tree[1]) + ")"


def _leaves(tree) -> tuple:
    if isinstance(tree, int):
        return (tree,)
    if tree == UNIT:
        return ()
    return _leaves(tree[0]) + _leaves(tree[1])


def tree_key(tree):
    """Deterministic term order: degree, then shape, then leaf sequence."""
    return (tree_degree(tree), _shape(tree), _leaves(tree))


def render_tree(tree, names) -> str:
    if tree == UNIT:
        return "1"
    return render_term(tree_to_term(tree), names)


def add_into(acc: dict, other: dict, c=1):
    for k, v in other.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def scale(u: dict, c) -> dict:
    return {k: c * v for k, v in u.items()} if c else {}


def free_product(u: dict, v: dict) -> dict:
    out: dict = {}
    for a, x in u.items():
        for b, y in v.items():
            t = b if a == UNIT else (a if b == UNIT else (a, b))
            nv = out.get(t, 0) + x * y
            if nv:
                out[t] = nv
            else:
                out.pop(t, None)
    return out


def _trees_of_degree(n: int, k: int):
    if k == 1:
        return list(range(n))
    out = []
    for a in range(1, k):
        for left in _trees_of_degree(n, a):
            for right in _trees_of_degree(n, k - a):
                out.append((left, right))
    return out


def catalan(m: int) -> int:
    out = 1
    for i in range(m):
        out = out * 2 * (2 * i + 1) // (i + 2)
    return out


# ---------------------------------------------------------------------------
# the presented algebra engine


class PresentedAlgebra:
    """Quotient of the truncated free Hom-algebra on ``module`` by an ideal.

    ``budget`` optionally caps the number of occurrences of given generators
    ({generator index: max count}); products exceeding it, like products
    exceeding ``degree``, are outside the truncation and are never formed.
    """

    def __init__(
        self,
        module: HomModule,
        degree: int,
        relations: Iterable[dict] = (),
        *,
        names: Sequence[str] | None = None,
        unital: bool = False,
        budget: dict | None = None,
        hom_associative: bool = True,
    ):
        if degree < 1:
            raise InvalidInput("truncation degree must be at least 1")
        self.module = module
        self.n = module.dim
        self.degree = degree
        self.unital = unital
        self.budget = dict(budget or {})
        self.names = tuple(names) if names else tuple(f"g{i + 1}" for i in range(self.n))
        if len(self.names) != self.n:
            raise InvalidInput("names length differs from the number of generators")
        self.trees_by_degree = {0: [UNIT] if unital else []}
        for k in range(1, degree + 1):
            self.trees_by_degree[k] = sorted(
                (t for t in _trees_of_degree(self.n, k) if self._within_budget(t)), key=tree_key
            )
        self.trees = [t for k in range(degree + 1) for t in self.trees_by_degree[k]]
        self.order = {t: i for i, t in enumerate(self.trees)}
        self._twist_cache: dict = {}
        self.rows: dict = {}  # pivot tree -> row (pivot coefficient 1, zero at other pivots)
        self.generators_of_ideal: list = []
        self._queue: deque = deque()
        if hom_associative:
            for x, y, z in self._associator_triples():
                self._insert(self.hom_associator(x, y, z))
        self.extra_relations = [self._clean(r) for r in relations]
        for r in self.extra_relations:
            self._insert(r)
        self._close()
        self.basis = [t for t in self.trees if t not in self.rows]
        self.basis_index = {t: i for i, t in enumerate(self.basis)}

    # -- truncation
    def _counts(self, tree):
        return {g: _leaves(tree).count(g) for g in self.budget}

    def _within_budget(self, tree) -> bool:
        if not self.budget:
            return True
        leaves = _leaves(tree)
        return all(leaves.count(g) <= cap for g, cap in self.budget.items())

    def in_truncation(self, u: dict) -> bool:
        return all(t in self.order for t in u)

    def _clean(self, u: dict) -> dict:
        u = {t: to_fraction(c) for t, c in u.items() if c}
        for t in u:
            if t not in self.order:
                raise InvalidInput(f"relation term {render_tree(t, self.names)} is outside the truncation")
        return u

    # -- free-algebra operations
    def gen(self, i: int) -> dict:
        return {i: Fraction(1)}

    def one(self) -> dict:
        if not self.unital:
            raise InvalidInput("algebra is not unital")
        return {UNIT: Fraction(1)}

    def from_vector(self, v: Sequence) -> dict:
        return {i: to_fraction(c) for i, c in enumerate(v) if c}

    def from_term(self, t) -> dict:
        t = normalize_term(t)
        if isinstance(t, Leaf):
            return self.twist(self.gen(t.gen)) if t.exp else self.gen(t.gen)
        return free_product(self.from_term(t.left), self.from_term(t.right))

    def mul_free(self, u: dict, v: dict) -> dict:
        out = free_product(u, v)
        for t in out:
            if t not in self.order:
                raise InvalidInput(
                    f"product leaves the truncation (degree <= {self.degree}"
                    + (f", budget {self.budget}" if self.budget else "")
                    + ")"
                )
        return out

    def _twist_tree(self, tree) -> dict:
        hit = self._twist_cache.get(tree)
        if hit is not None:
            return hit
        if tree == UNIT:
            out = {UNIT: Fraction(1)}
        elif isinstance(tree, int):
            col = self.module.alpha.column(tree)
            out = {j: c for j, c in enumerate(col) if c}
        else:
            out = free_product(self._twist_tree(tree[0]), self._twist_tree(tree[1]))
        self._twist_cache[tree] = out
        return out

    def twist(self, u: dict, times: int = 1) -> dict:
        for _ in range(times):
            out: dict = {}
            for t, c in u.items():
                add_into(out, self._twist_tree(t), c)
            u = out
        return u

    def hom_associator(self, x, y, z) -> dict:
        """alpha(x)(yz) - (xy)alpha(z) for trees x, y, z."""
        left = free_product(self._twist_tree(x), {(y, z): Fraction(1)})
        right = free_product({(x, y): Fraction(1)}, self._twist_tree(z))
        return add_into(left, right, -1)

    def _associator_triples(self):
        d = self.degree
        for a in range(1, d - 1):
            for b in range(1, d - a):
                for c in range(1, d - a - b + 1):
                    for x in self.trees_by_degree[a]:
                        for y in self.trees_by_degree[b]:
                            for z in self.trees_by_degree[c]:
                                if self.budget and not self._within_budget(((x, y), z)):
                                    continue
                                yield x, y, z

    # -- ideal maintenance
    def _reduce_raw(self, u: dict) -> dict:
        u = dict(u)
        for t in [t for t in u if t in self.rows]:
            c = u.get(t)
            if c:
                add_into(u, self.rows[t], -c)
        return u

    def _insert(self, u: dict) -> bool:
        if not u:
            return False
        if not self.in_truncation(u):
            return False
        r = self._reduce_raw(u)
        if not r:
            return False
        lead = max(r, key=self.order.__getitem__)
        c = r[lead]
        if c != 1:
            r = {t: v / c for t, v in r.items()}
        for p, row in self.rows.items():
            f = row.get(lead)
            if f:
                add_into(row, r, -f)
        self.rows[lead] = r
        self.generators_of_ideal.append(dict(r))
        self._queue.append((dict(r), tree_degree(lead)))
        return True

    def _close(self):
        while self._queue:
            v, m = self._queue.popleft()
            self._insert(self.twist(v))
            for j in range(1, self.degree - m + 1):
                for w in self.trees_by_degree[j]:
                    for prod in (free_product({w: Fraction(1)}, v), free_product(v, {w: Fraction(1)})):
                        if self.in_truncation(prod):
                            self._insert(prod)

    # -- quotient operations
    def reduce(self, u: dict) -> dict:
        """Projection onto the span of normal-form trees."""
        if not self.in_truncation(u):
            raise InvalidInput("element is outside the truncation")
        return self._reduce_raw(u)

    def multiply(self, u: dict, v: dict) -> dict:
        return self.reduce(self.mul_free(u, v))

    def equal_mod_ideal(self, u: dict, v: dict) -> bool:
        """Exact equality in the truncated quotient (complete only up to the truncation)."""
        return not self.reduce(add_into(dict(u), v, -1))

    def coords(self, u: dict) -> tuple:
        r = self.reduce(u)
        out = [Fraction(0)] * len(self.basis)
        for t, c in r.items():
            out[self.basis_index[t]] = c
        return tuple(out)

    def quotient_twist(self, u: dict) -> dict:
        return self.reduce(self.twist(u))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def degree_dims(self) -> list:
        dims = [0] * (self.degree + 1)
        for t in self.basis:
            dims[tree_degree(t)] += 1
        return dims

    def basis_of_degree(self, k: int) -> list:
        return [t for t in self.basis if tree_degree(t) == k]

    def render(self, u: dict) -> str:
        if not u:
            return "0"
        parts = []
        for t in sorted(u, key=self.order.__getitem__):
            c = u[t]
            s = render_tree(t, self.names)
            parts.append(s if c == 1 else f"({c})*{s}")
        return " + ".join(parts)

    def report(self) -> dict:
        return {
            "generators": list(self.names),
            "degree": self.degree,
            "unital": self.unital,
            "degree_dims": self.degree_dims(),
            "dimension": self.dimension,
            "basis": [render_tree(t, self.names) for t in self.basis],
            "ideal_rank": len(self.rows),
        }


# ---------------------------------------------------------------------------
# free algebra


class FreeAlgebraTrunc(PresentedAlgebra):
    """Free involutive Hom-associative algebra on ``module``, degrees 1..d."""

    def __init__(self, module: HomModule, degree: int, names=None):
        super().__init__(module, degree, (), names=names, unital=False)


def graded_basis(F: PresentedAlgebra, k: int) -> list:
    """Normalized terms forming a basis of the degree-k component."""
    if k > F.degree:
        raise InvalidInput(f"degree {k} exceeds the truncation {F.degree}")
    if k < 1:
        raise InvalidInput("graded components start at degree 1")
    return [tree_to_term(t) for t in F.basis_of_degree(k)]


def spanning_terms(n: int, k: int) -> list:
    """Every tree shape with k leaves times every leaf exponent assignment."""
    out = []
    for tree in sorted(_trees_of_degree(n, k), key=tree_key):
        for exps in itertools.product((0, 1), repeat=k):
            it = iter(exps)
            out.append(_with_exps(tree, it))
    return out


def _with_exps(tree, it):
    if isinstance(tree, int):
        return Leaf(tree, next(it))
    return Prod(_with_exps(tree[0], it), _with_exps(tree[1], it))


# ---------------------------------------------------------------------------
# universal enveloping algebras


@dataclass
class EnvelopingAlgebra:
    g: HomLieAlgebra
    algebra: PresentedAlgebra
    report: AxiomReport

    def phi(self, x: Sequence) -> dict:
        """Image of a g-vector in the quotient."""
        return self.algebra.reduce(self.algebra.from_vector(x))

    @property
    def degree(self) -> int:
        return self.algebra.degree


def commutator_relations(g: HomLieAlgebra) -> list:
    rels = []
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            r = {(i, j): Fraction(1), (j, i): Fraction(-1)}
            for k, c in enumerate(g.bracket[i][j]):
                if c:
                    add_into(r, {k: c}, -1)
            rels.append(r)
    return rels


def enveloping(g: HomLieAlgebra, degree: int, *, unital: bool = True, extra_relations=(),
               budget=None, check_axioms: bool = True) -> EnvelopingAlgebra:
    if check_axioms:
        rep = check_hom_lie(g)
        if not rep.passed:
            v = rep.violations[0]
            raise InvalidInput(f"enveloping algebra needs a passing Hom-Lie algebra; {v.axiom} fails",
                               witness=(v.axiom, v.witness))
    P = PresentedAlgebra(
        g.module, degree, commutator_relations(g) + list(extra_relations),
        names=g.basis_names, unital=unital, budget=budget,
    )
    return EnvelopingAlgebra(g, P, _verify_enveloping(g, P))


def _verify_enveloping(g: HomLieAlgebra, P: PresentedAlgebra) -> AxiomReport:
    rb = ReportBuilder()
    n = g.dim
    rb.check("phi-bracket")
    if P.degree >= 2:
        for i in range(n):
            for j in range(n):
                xi, xj = P.gen(i), P.gen(j)
                comm = add_into(P.mul_free(xi, xj), P.mul_free(xj, xi), -1)
                target = P.from_vector(g.br(g.basis()[i], g.basis()[j]))
                res = P.reduce(add_into(comm, target, -1))
                if res:
                    rb.fail("phi-bracket", (i, j), (P.render(res),))
                    break
            if rb.has_failed("phi-bracket"):
                break
    else:
        rb.note("phi-bracket", "not checkable below degree 2")
    rb.check("phi-twist")
    for i in range(n):
        lhs = P.reduce(P.from_vector(g.twist(g.basis()[i])))
        rhs = P.quotient_twist(P.gen(i))
        res = add_into(dict(lhs), rhs, -1)
        if res:
            rb.fail("phi-twist", (i,), (P.render(res),))
            break
    rb.check("quotient-twist-involutive")
    for t in P.basis:
        u = {t: Fraction(1)}
        res = add_into(P.quotient_twist(P.quotient_twist(u)), u, -1)
        if res:
            rb.fail("quotient-twist-involutive", (render_tree(t, P.names),), (P.render(res),))
            break
    return rb.build()


def check_pbw_injectivity(E: EnvelopingAlgebra) -> EmbeddingCertificate:
    """phi_g is injective iff the generator images are independent in the quotient."""
    P = E.algebra
    n = E.g.dim
    images = [P.coords(P.gen(i)) for i in range(n)]
    r = rank_of(images) if images and images[0] else 0
    relations = tuple((f"phi-identities:{a}", E.report.ok(a)) for a in E.report.checked)
    return EmbeddingCertificate(
        kind="pbw-injectivity",
        truncation=(("degree", P.degree),),
        relations=relations,
        kernel_dim=n - r,
        info=(("degree_dims", tuple(P.degree_dims())), ("dimension", P.dimension)),
    )


# ---------------------------------------------------------------------------
# derivation extension


def leibniz_images(P: PresentedAlgebra, leaf_value: Sequence[dict], leaf_derivative: Sequence[dict], power: int):
    """Return f(tree) -> (image, D(image)) for trees over an abstract alphabet.

    Leaves map to ``leaf_value[i]``; D is extended by
    D(xy) = D(x) a^k(y) + a^k(x) D(y) with a the free twist. Computed in the
    free algebra, without reduction.
    """

    @lru_cache(maxsize=None)
    def f(tree):
        if isinstance(tree, int):
            return leaf_value[tree], leaf_derivative[tree]
        if tree == UNIT:
            return {UNIT: Fraction(1)}, {}
        (xl, dl), (xr, dr) = f(tree[0]), f(tree[1])
        img = P.mul_free(xl, xr)
        der = add_into(P.mul_free(dl, P.twist(xr, power)), P.mul_free(P.twist(xl, power), dr))
        return img, der

    return f


@dataclass
class DerivationOperator:
    algebra: PresentedAlgebra
    matrix: Matrix  # acting on quotient-basis coordinates
    power: int

    def __call__(self, u: dict) -> dict:
        c = self.algebra.coords(u)
        out = self.matrix.apply(c)
        return {t: v for t, v in zip(self.algebra.basis, out) if v}


def extend_derivation(E: EnvelopingAlgebra, d: DerivationData) -> DerivationOperator:
    P = E.algebra
    rep = check_beta_k_derivation(E.g, d)
    if not rep.passed:
        v = rep.violations[0]
        raise InvalidInput(f"not a twist-power derivation: {v.axiom} at {v.witness}", witness=(v.axiom, v.witness))
    n = E.g.dim
    gens = [P.gen(i) for i in range(n)]
    ders = [P.from_vector(d.map.column(i)) for i in range(n)]
    f = leibniz_images(P, gens, ders, d.power)

    def D_free(u: dict) -> dict:
        out: dict = {}
        for t, c in u.items():
            add_into(out, f(t)[1], c)
        return out

    for row in P.generators_of_ideal:
        res = P.reduce(D_free(row))
        if res:
            raise InvalidInput(
                f"derivation extension is not well-defined at degree {P.degree}: "
                f"D({P.render(row)}) = {P.render(res)}",
                witness=("well-defined", P.render(row)),
            )
    cols = [P.coords(D_free({t: Fraction(1)})) for t in P.basis]
    mat = Matrix.from_columns(cols, len(P.basis))
    op = DerivationOperator(P, mat, d.power)
    for t in P.basis:
        u = {t: Fraction(1)}
        lhs = op(P.reduce(P.twist(u, d.power)))
        rhs = P.reduce(P.twist(op(u), d.power))
        if add_into(dict(lhs), rhs, -1):
            raise InvalidInput("extended derivation does not commute with the twist power",
                               witness=("twist-commutes", render_tree(t, P.names)))
    return op
