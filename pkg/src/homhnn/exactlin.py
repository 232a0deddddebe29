"""Exact rational linear algebra and Hom-modules.

Everything here works over :class:`fractions.Fraction`. Vectors are plain
tuples of fractions, matrices are immutable row tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


class InvalidInput(ValueError):
    """Structural problem with an input (shape, skew-symmetry, parse)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        raise InvalidInput("floats are not accepted; use exact rationals")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def is_zero_vec(u: Vector) -> bool:
    return not any(u)


def lincomb(coeffs: Sequence, vectors: Sequence[Vector], n: int) -> Vector:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


@dataclass(frozen=True)
class Matrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(a) for a in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise InvalidInput("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    # -- constructors
    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls._raw(tuple((Fraction(0),) * n for _ in range(m)), m, n)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit_vec(n, i) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], nrows: int) -> "Matrix":
        if not columns:
            return cls._raw(tuple(() for _ in range(nrows)), nrows, 0)
        return cls(tuple(tuple(c[i] for c in columns) for i in range(nrows)))

    @classmethod
    def diag(cls, entries) -> "Matrix":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def _raw(cls, rows, m, n):
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "_shape", (m, n))
        return obj

    # -- shape
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        shape = getattr(self, "_shape", None)
        if shape is not None:
            return shape[1]
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    # -- arithmetic
    def apply(self, v: Vector) -> Vector:
        if len(v) != self.ncols:
            raise InvalidInput(f"vector length {len(v)} does not match {self.shape}")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise InvalidInput(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        rows = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols)
            for r in self.rows
        )
        return Matrix._raw(rows, self.nrows, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(vadd(r, s) for r, s in zip(self.rows, other.rows)), *self.shape)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(vsub(r, s) for r, s in zip(self.rows, other.rows)), *self.shape)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix._raw(tuple(vscale(c, r) for r in self.rows), *self.shape)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise InvalidInput(f"shape mismatch {self.shape} vs {other.shape}")

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(self.columns()), self.ncols, self.nrows)

    def is_zero(self) -> bool:
        return all(not any(r) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def kernel(self) -> list:
        return mat_kernel(self)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise InvalidInput("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + list(unit_vec(n, i)) for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)) or (len(piv) > n and piv[n] < n):
            raise InvalidInput("matrix is singular")
        return Matrix(tuple(tuple(r[n:]) for r in red[:n]))

    def __repr__(self):
        body = "; ".join(" ".join(format_fraction(a) for a in r) for r in self.rows)
        return f"Matrix[{body}]"


def rref(rows, ncols: int):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    prow = 0
    for c in range(ncols):
        sel = next((i for i in range(prow, len(m)) if m[i][c]), None)
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        p = m[prow][c]
        if p != 1:
            m[prow] = [a / p for a in m[prow]]
        pr = m[prow]
        for i in range(len(m)):
            if i != prow and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        prow += 1
        if prow == len(m):
            break
    return [tuple(r) for r in m[:prow]], pivots


def mat_kernel(M: Matrix) -> list:
    """Basis of the null space of ``M`` (one vector per free column)."""
    n = M.ncols
    red, piv = rref(M.rows, n)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def rank_of(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    return len(rref(vectors, len(vectors[0]))[1])


def independent(vectors: Sequence[Vector]) -> bool:
    return rank_of(vectors) == len(vectors)


def solve(columns: Sequence[Vector], target: Vector):
    """Coefficients c with sum c_j columns[j] == target, or None."""
    n = len(target)
    if not columns:
        return () if is_zero_vec(target) else None
    aug = [tuple(col[i] for col in columns) + (target[i],) for i in range(n)]
    k = len(columns)
    red, piv = rref(aug, k + 1)
    if piv and piv[-1] == k:
        return None
    sol = [Fraction(0)] * k
    for r, p in zip(red, piv):
        sol[p] = r[k]
    return tuple(sol)


def complete_basis(vectors: Sequence[Vector], n: int) -> list:
    """Standard basis vectors extending ``vectors`` to a basis, in index order."""
    chosen = list(vectors)
    extra = []
    r = rank_of(chosen)
    for i in range(n):
        e = unit_vec(n, i)
        if rank_of(chosen + [e]) > r:
            chosen.append(e)
            extra.append(e)
            r += 1
    return extra


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    residual: tuple

    def to_dict(self):
        return {
            "axiom": self.axiom,
            "witness": list(self.witness),
            "residual": [format_fraction(a) if isinstance(a, Fraction) else a for a in self.residual],
        }


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of a batch of named axiom checks.

    ``checked`` lists every axiom evaluated; ``violations`` holds the first
    failing tuple per failed axiom.
    """

    checked: tuple = ()
    violations: tuple = ()
    info: tuple = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    def failed(self, axiom: str) -> bool:
        return any(v.axiom == axiom for v in self.violations)

    def ok(self, axiom: str) -> bool:
        if axiom not in self.checked:
            raise KeyError(axiom)
        return not self.failed(axiom)

    def witness(self, axiom: str):
        for v in self.violations:
            if v.axiom == axiom:
                return v
        return None

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        return AxiomReport(self.checked + other.checked, self.violations + other.violations,
                           self.info + other.info)

    def to_dict(self):
        d = {
            "pass": self.passed,
            "checked": list(self.checked),
            "violations": [v.to_dict() for v in self.violations],
        }
        if self.info:
            d["info"] = [list(i) for i in self.info]
        return d


class ReportBuilder:
    """Collects the first failing witness per axiom."""

    def __init__(self):
        self.checked = []
        self.violations = []
        self.info = []

    def check(self, axiom: str):
        if axiom not in self.checked:
            self.checked.append(axiom)

    def fail(self, axiom: str, witness=(), residual=()):
        self.check(axiom)
        if not any(v.axiom == axiom for v in self.violations):
            self.violations.append(Violation(axiom, tuple(witness), tuple(residual)))

    def has_failed(self, axiom: str) -> bool:
        return any(v.axiom == axiom for v in self.violations)

    def note(self, key, value):
        self.info.append((key, value))

    def build(self) -> AxiomReport:
        return AxiomReport(tuple(self.checked), tuple(self.violations), tuple(self.info))


# ---------------------------------------------------------------------------
# Hom-modules


@dataclass(frozen=True)
class HomModule:
    dim: int
    alpha: Matrix

    def __post_init__(self):
        if self.alpha.shape != (self.dim, self.dim):
            raise InvalidInput(f"twist has shape {self.alpha.shape}, expected {(self.dim, self.dim)}")

    @classmethod
    def trivial(cls, dim: int) -> "HomModule":
        return cls(dim, Matrix.identity(dim))

    def twist(self, v: Vector) -> Vector:
        return self.alpha.apply(v)


@dataclass(frozen=True)
class LinearMapBetween:
    domain: HomModule
    codomain: HomModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise InvalidInput(
                f"map has shape {self.matrix.shape}, expected {(self.codomain.dim, self.domain.dim)}"
            )

    def __call__(self, v: Vector) -> Vector:
        return self.matrix.apply(v)

    def compose(self, inner: "LinearMapBetween") -> "LinearMapBetween":
        """self after inner."""
        return LinearMapBetween(inner.domain, self.codomain, self.matrix @ inner.matrix)


def check_hom_module(V: HomModule) -> AxiomReport:
    rb = ReportBuilder()
    rb.check("involutivity")
    sq = V.alpha @ V.alpha
    ident = Matrix.identity(V.dim)
    for j in range(V.dim):
        col = vsub(sq.column(j), ident.column(j))
        if any(col):
            rb.fail("involutivity", (j,), col)
            break
    return rb.build()


def check_hom_morphism(f: LinearMapBetween) -> AxiomReport:
    rb = ReportBuilder()
    rb.check("hom-module-morphism")
    left = f.matrix @ f.domain.alpha
    right = f.codomain.alpha @ f.matrix
    for j in range(f.domain.dim):
        col = vsub(left.column(j), right.column(j))
        if any(col):
            rb.fail("hom-module-morphism", (j,), col)
            break
    return rb.build()
