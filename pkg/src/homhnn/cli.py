"""Command-line front end.

Algebra files are line-oriented. Top-level lines are keywords; indented
lines belong to the preceding block::

    kind hom-lie
    dim 3
    names h e f
    twist
      1 0 0
      0 1 0
      0 0 1
    table
      0 1 : 0 2 0
      1 0 : 0 -2 0
    subspace s
      0 1 0
    map d
      0
      1
      0
    vectors X1
      0 1
    param variant mixed

Indices are 0-based; rationals are written ``p`` or ``p/q``. ``map`` blocks
list matrix rows. Exit codes: 0 pass, 1 mathematical failure, 2 invalid
input, 3 generator exhaustion.
"""
from __future__ import annotations

import argparse
import enum
import hashlib
import json
import random
import re
import sys
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import generate as gen
from . import library as lib
from .construct import HomAction, check_hom_action, check_semidirect, semidirect_product
from .exactlin import InvalidInput, Matrix, format_fraction, to_fraction
from .freepres import check_pbw_injectivity, enveloping
from .hnn import (
    HNNAssocData,
    HNNLetter,
    HNNLieData,
    embedding_certificate_assoc,
    embedding_certificate_lie,
    hnn_assoc_presentation,
    hnn_lie_presentation,
    validate_hnn_assoc_data,
    validate_hnn_lie_data,
)
from .homalg import (
    DEFAULT_VARIANT,
    HomAssociativeAlgebra,
    HomLieAlgebra,
    SubspaceData,
    change_basis,
    check_hom_associative,
    check_hom_lie,
    commutator_hom_lie,
)

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_EXHAUSTED = 0, 1, 2, 3
KINDS = ("hom-associative", "hom-lie", "hom-action")


class ParseError(InvalidInput):
    pass


# ---------------------------------------------------------------------------
# file format


@dataclass(frozen=True)
class Block:
    kind: str  # subspace | map | vectors
    name: str
    rows: tuple


@dataclass(frozen=True)
class AlgebraFile:
    kind: str
    dim: int
    names: tuple = ()
    twist: tuple | None = None
    table: tuple = ()  # ((i, j), vector)
    blocks: tuple = ()
    params: tuple = ()  # (key, value)

    def block(self, kind: str, name: str) -> Block | None:
        for b in self.blocks:
            if b.kind == kind and b.name == name:
                return b
        return None

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)

    def twist_matrix(self) -> Matrix:
        return Matrix.identity(self.dim) if self.twist is None else Matrix(self.twist)

    def tensor(self, out_dim: int | None = None):
        out_dim = self.dim if out_dim is None else out_dim
        t = [[[Fraction(0)] * out_dim for _ in range(out_dim)] for _ in range(self.dim)]
        for (i, j), v in self.table:
            t[i][j] = list(v)
        return t


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def _row(tokens, where):
    bad = [x for x in tokens if not _RATIONAL.fullmatch(x)]
    if bad:
        raise ParseError(f"{where}: {bad[0]!r} is not a rational of the form p or p/q")
    try:
        return tuple(to_fraction(x) for x in tokens)
    except InvalidInput as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _index(tok, names, where):
    try:
        return int(tok)
    except ValueError:
        pass
    if tok in names:
        return names.index(tok)
    raise ParseError(f"{where}: unknown index {tok!r}")


def parse_algebra_file(text: str) -> AlgebraFile:
    fields: dict = {"names": (), "twist": None, "table": [], "blocks": [], "params": []}
    current = None  # (keyword, name, rows)
    seen = set()

    def close():
        nonlocal current
        if current is None:
            return
        key, name, rows = current
        if key == "twist":
            fields["twist"] = tuple(rows)
        elif key == "table":
            fields["table"] = list(rows)
        else:
            fields["blocks"].append(Block(key, name, tuple(rows)))
        current = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        where = f"line {lineno}"
        if line[0].isspace():
            if current is None:
                raise ParseError(f"{where}: indented line outside a block")
            tokens = line.split()
            if current[0] == "table":
                if ":" not in tokens or tokens.index(":") != 2:
                    raise ParseError(f"{where}: table entries read 'i j : v1 v2 ...'")
                i = _index(tokens[0], fields["names"], where)
                j = _index(tokens[1], fields["names"], where)
                current[2].append(((i, j), _row(tokens[3:], where)))
            else:
                current[2].append(_row(tokens, where))
            continue
        close()
        key, *rest = line.split()
        if key in ("kind", "dim", "names", "twist", "table") and key in seen:
            raise ParseError(f"{where}: duplicate {key!r}")
        seen.add(key)
        if key == "kind":
            if len(rest) != 1 or rest[0] not in KINDS:
                raise ParseError(f"{where}: kind must be one of {', '.join(KINDS)}")
            fields["kind"] = rest[0]
        elif key == "dim":
            try:
                fields["dim"] = int(rest[0])
            except (IndexError, ValueError):
                raise ParseError(f"{where}: dim needs an integer") from None
        elif key == "names":
            fields["names"] = tuple(rest)
        elif key in ("twist", "table"):
            current = (key, "", [])
        elif key in ("subspace", "map", "vectors"):
            if len(rest) != 1:
                raise ParseError(f"{where}: {key} needs a name")
            current = (key, rest[0], [])
        elif key == "param":
            if len(rest) != 2:
                raise ParseError(f"{where}: param reads 'param key value'")
            fields["params"].append((rest[0], rest[1]))
        else:
            raise ParseError(f"{where}: unknown keyword {key!r}")
    close()
    if "kind" not in fields or "dim" not in fields:
        raise ParseError("file needs 'kind' and 'dim'")
    af = AlgebraFile(
        fields["kind"], fields["dim"], fields["names"], fields["twist"],
        tuple(fields["table"]), tuple(fields["blocks"]), tuple(fields["params"]),
    )
    _validate_file(af)
    return af


def _validate_file(af: AlgebraFile):
    n = af.dim
    if n < 0:
        raise ParseError("dim must be nonnegative")
    if af.names and len(af.names) != n:
        raise ParseError("names must list exactly dim entries")
    if af.twist is not None and (len(af.twist) != n or any(len(r) != n for r in af.twist)):
        raise ParseError("twist must be dim x dim")
    out = n if af.kind != "hom-action" else int(af.param("target_dim", -1))
    if out < 0:
        raise ParseError("hom-action files need 'param target_dim N'")
    seen = set()
    for (i, j), v in af.table:
        if not (0 <= i < n and 0 <= j < (n if af.kind != "hom-action" else out)):
            raise ParseError(f"table index ({i}, {j}) out of range")
        if (i, j) in seen:
            raise ParseError(f"table entry ({i}, {j}) given twice")
        seen.add((i, j))
        if len(v) != out:
            raise ParseError(f"table entry ({i}, {j}) must have {out} coordinates")


def _fmt_row(row) -> str:
    return " ".join(format_fraction(to_fraction(c)) for c in row)


def render_algebra_file(af: AlgebraFile) -> str:
    lines = [f"kind {af.kind}", f"dim {af.dim}"]
    if af.names:
        lines.append("names " + " ".join(af.names))
    if af.twist is not None:
        lines.append("twist")
        lines.extend("  " + _fmt_row(r) for r in af.twist)
    if af.table:
        lines.append("table")
        lines.extend(f"  {i} {j} : {_fmt_row(v)}" for (i, j), v in af.table)
    for b in af.blocks:
        lines.append(f"{b.kind} {b.name}")
        lines.extend("  " + _fmt_row(r) for r in b.rows)
    lines.extend(f"param {k} {v}" for k, v in af.params)
    return "\n".join(lines) + "\n"


def file_from_structure(S, params=(), blocks=()) -> AlgebraFile:
    kind = "hom-lie" if isinstance(S, HomLieAlgebra) else "hom-associative"
    n = S.dim
    tensor = S._tensor
    table = tuple(((i, j), tuple(tensor[i][j])) for i in range(n) for j in range(n) if any(tensor[i][j]))
    twist = None if S.alpha == Matrix.identity(n) else S.alpha.rows
    return AlgebraFile(kind, n, tuple(S.basis_names), twist, table, tuple(blocks), tuple(params))


def structure_from_file(af: AlgebraFile):
    if af.kind == "hom-lie":
        return HomLieAlgebra.build(af.tensor(), af.twist_matrix(), af.names)
    if af.kind == "hom-associative":
        return HomAssociativeAlgebra.build(af.tensor(), af.twist_matrix(), af.names)
    raise InvalidInput(f"expected an algebra file, got kind {af.kind}")


def _require(af, kind):
    if af.kind != kind:
        raise InvalidInput(f"expected a {kind} file, got {af.kind}")


# ---------------------------------------------------------------------------
# reports


def _plain(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _render_text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, ensure_ascii=False)}")
    return lines


def render_report(report: dict, as_json: bool) -> str:
    if as_json:
        return canonical_json(report)
    return "\n".join(_render_text(_plain(report))) + "\n"


@dataclass
class Inputs:
    files: list = field(default_factory=list)

    def read(self, path: str) -> AlgebraFile:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
        self.files.append((Path(path).name, hashlib.sha256(data).hexdigest()))
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path} is not UTF-8") from exc
        return parse_algebra_file(text)

    def digest(self) -> list:
        return [{"file": name, "sha256": h} for name, h in self.files]


def _write(path, text):
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _axioms(S):
    return check_hom_lie(S) if isinstance(S, HomLieAlgebra) else check_hom_associative(S)


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, inp: Inputs):
    af = inp.read(args.file)
    S = structure_from_file(af)
    rep = _axioms(S)
    return (EXIT_PASS if rep.passed else EXIT_FAIL), {"kind": af.kind, "dim": af.dim, "axioms": rep.to_dict()}


def cmd_commutator(args, inp: Inputs):
    af = inp.read(args.file)
    _require(af, "hom-associative")
    A = structure_from_file(af)
    rep = check_hom_associative(A)
    if not rep.passed:
        return EXIT_FAIL, {"input_axioms": rep.to_dict()}
    L = commutator_hom_lie(A)
    text = render_algebra_file(file_from_structure(L))
    _write(args.out, text)
    return EXIT_PASS, {"input_axioms": rep.to_dict(), "output_axioms": check_hom_lie(L).to_dict(), "output": text}


def _action_from_file(af: AlgebraFile, actor: HomLieAlgebra, target: HomLieAlgebra) -> HomAction:
    _require(af, "hom-action")
    if af.dim != actor.dim or int(af.param("target_dim")) != target.dim:
        raise InvalidInput("action dimensions do not match the algebras")
    return HomAction(actor, target, af.tensor(target.dim))


def cmd_semidirect(args, inp: Inputs):
    l_file, m_file, a_file = inp.read(args.actor), inp.read(args.target), inp.read(args.action)
    _require(l_file, "hom-lie")
    _require(m_file, "hom-lie")
    L, M = structure_from_file(l_file), structure_from_file(m_file)
    act = _action_from_file(a_file, L, M)
    pre = check_hom_lie(L).merge(check_hom_lie(M)).merge(check_hom_action(act))
    if not pre.passed:
        return EXIT_FAIL, {"hypotheses": pre.to_dict()}
    sd = semidirect_product(act)
    rep = check_semidirect(sd, act)
    text = render_algebra_file(file_from_structure(sd.result))
    _write(args.out, text)
    return (EXIT_PASS if rep.passed else EXIT_FAIL), {
        "hypotheses": pre.to_dict(), "semidirect": rep.to_dict(), "output": text,
    }


def cmd_envelope(args, inp: Inputs):
    af = inp.read(args.file)
    _require(af, "hom-lie")
    g = structure_from_file(af)
    rep = check_hom_lie(g)
    if not rep.passed:
        return EXIT_FAIL, {"axioms": rep.to_dict()}
    E = enveloping(g, args.degree)
    cert = check_pbw_injectivity(E)
    ok = cert.passed and E.report.passed
    return (EXIT_PASS if ok else EXIT_FAIL), {
        "degree": args.degree,
        "degree_dims": E.algebra.degree_dims(),
        "total_dim": E.algebra.dimension,
        "enveloping": E.report.to_dict(),
        "pbw": cert.to_dict(),
    }


def _subspace(af, name, required=True):
    b = af.block("subspace", name)
    if b is None:
        if required:
            raise InvalidInput(f"missing 'subspace {name}' block")
        return None
    return SubspaceData(af.dim, b.rows)


def _matrix(af, name, nrows, ncols):
    b = af.block("map", name)
    if b is None:
        raise InvalidInput(f"missing 'map {name}' block")
    if ncols == 0:
        if any(b.rows):
            raise InvalidInput(f"map {name} must be empty for a zero subspace")
        return Matrix.zeros(nrows, 0)
    if len(b.rows) != nrows or any(len(r) != ncols for r in b.rows):
        raise InvalidInput(f"map {name} must be {nrows} x {ncols}")
    return Matrix(b.rows)


def hnn_assoc_data_from_file(af: AlgebraFile) -> HNNAssocData:
    _require(af, "hom-associative")
    A = structure_from_file(af)
    letters = []
    k = 1
    while af.block("subspace", f"B{k}") is not None:
        B = _subspace(af, f"B{k}")
        theta = _matrix(af, f"theta{k}", A.dim, B.dim)
        delta = _matrix(af, f"delta{k}", A.dim, B.dim)
        xb = af.block("vectors", f"X{k}")
        X = xb.rows if xb is not None else ()
        letters.append(HNNLetter(B, theta, delta, X))
        k += 1
    if not letters:
        raise InvalidInput("no letters: expected blocks 'subspace B1', 'map theta1', 'map delta1', 'vectors X1'")
    return HNNAssocData(A, tuple(letters), af.param("variant", DEFAULT_VARIANT.value))


def _hypothesis_failure(rep):
    v = rep.violations[0]
    return {"failed_hypothesis": v.axiom, "hypotheses": rep.to_dict()}


def cmd_hnn_assoc(args, inp: Inputs):
    af = inp.read(args.file)
    data = hnn_assoc_data_from_file(af)
    rep = validate_hnn_assoc_data(data)
    if not rep.passed:
        return EXIT_FAIL, _hypothesis_failure(rep)
    cert = embedding_certificate_assoc(data, args.maxlen)
    return (EXIT_PASS if cert.passed else EXIT_FAIL), {
        "hypotheses": rep.to_dict(),
        "presentation": hnn_assoc_presentation(data).to_dict(),
        "certificate": cert.to_dict(),
    }


def hnn_lie_data_from_file(af: AlgebraFile) -> HNNLieData:
    _require(af, "hom-lie")
    g = structure_from_file(af)
    s = _subspace(af, "s", required=False) or SubspaceData.zero(g.dim)
    d = _matrix(af, "d", g.dim, s.dim) if af.block("map", "d") or s.dim else Matrix.zeros(g.dim, 0)
    return HNNLieData(g, s, d)


def cmd_hnn_lie(args, inp: Inputs):
    af = inp.read(args.file)
    data = hnn_lie_data_from_file(af)
    rep = validate_hnn_lie_data(data)
    if not rep.passed:
        return EXIT_FAIL, _hypothesis_failure(rep)
    pres = hnn_lie_presentation(data)
    cert = embedding_certificate_lie(data, args.degree, args.maxlen)
    return (EXIT_PASS if cert.passed else EXIT_FAIL), {
        "hypotheses": rep.to_dict(),
        "presentation": pres.render(),
        "certificate": cert.to_dict(),
    }


def _named_bases(kind):
    return {name: (S, autos) for name, S, autos in
            (gen.associative_bases() if kind == "hom-associative" else gen.lie_bases())}


def cmd_generate(args, inp: Inputs):
    rng = random.Random(args.seed)
    if args.mode == "yau-twist":
        bases = _named_bases(args.kind)
        if args.base not in bases:
            raise InvalidInput(f"unknown base {args.base!r}; choose from {', '.join(sorted(bases))}")
        S, autos = bases[args.base]
        if args.involution == "random" or autos is None:
            alpha = gen.random_involution(rng, S.dim) if autos is None else rng.choice(autos)
        elif args.involution == "swap" and args.base == "sl2":
            alpha = lib.SL2_SWAP
        else:
            try:
                alpha = autos[int(args.involution)]
            except (ValueError, IndexError):
                raise InvalidInput(f"involution must be 'random', 'swap' (sl2) or an index below {len(autos)}") from None
        T = lib.yau_twist(S, alpha)
        if args.basis_change:
            T = change_basis(T, gen.unimodular(rng, T.dim))
        rep = _axioms(T)
        if not rep.passed:
            return EXIT_FAIL, {"axioms": rep.to_dict()}
    else:
        try:
            T = gen.random_search(args.kind, args.dim, args.seed, nonabelian=args.nonabelian,
                                  attempts=args.attempts)
        except gen.GeneratorExhausted as exc:
            return EXIT_EXHAUSTED, {"exhausted": str(exc)}
        rep = _axioms(T)
    text = render_algebra_file(file_from_structure(T))
    _write(args.out, text)
    return EXIT_PASS, {"mode": args.mode, "seed": args.seed, "axioms": rep.to_dict(), "output": text}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homhnn", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="canonical JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="canonical JSON report")
        return sp

    sp = add("check", cmd_check, "run the full axiom suite")
    sp.add_argument("file")
    sp = add("commutator", cmd_commutator, "commutator Hom-Lie algebra of a Hom-associative algebra")
    sp.add_argument("file")
    sp.add_argument("-o", "--out")
    sp = add("semidirect", cmd_semidirect, "semidirect product of two Hom-Lie algebras")
    sp.add_argument("actor")
    sp.add_argument("target")
    sp.add_argument("action")
    sp.add_argument("-o", "--out")
    sp = add("envelope", cmd_envelope, "truncated enveloping algebra and PBW check")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int, required=True)
    sp = add("hnn-assoc", cmd_hnn_assoc, "HNN-extension of a Hom-associative algebra")
    sp.add_argument("file")
    sp.add_argument("--maxlen", type=int, required=True)
    sp = add("hnn-lie", cmd_hnn_lie, "HNN-extension of a Hom-Lie algebra")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--maxlen", type=int, required=True)
    sp = add("generate", cmd_generate, "emit a validated structure")
    sp.add_argument("--mode", choices=("yau-twist", "random-search"), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", choices=("hom-associative", "hom-lie"), default="hom-lie")
    sp.add_argument("--base", default="sl2")
    sp.add_argument("--involution", default="random")
    sp.add_argument("--basis-change", action="store_true")
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--nonabelian", action="store_true")
    sp.add_argument("--attempts", type=int, default=500)
    sp.add_argument("-o", "--out")
    return p


def run(argv=None) -> tuple:
    """Return (exit code, report text)."""
    args = build_parser().parse_args(argv)
    inp = Inputs()
    try:
        code, body = args.fn(args, inp)
    except InvalidInput as exc:
        code, body = EXIT_INVALID, {"error": str(exc)}
        if exc.witness is not None:
            body["witness"] = exc.witness
    report = {"command": args.command, "inputs": inp.digest(), "exit_code": code, "pass": code == EXIT_PASS}
    report.update(body)
    return code, render_report(report, args.json)


def main(argv=None) -> int:
    try:
        code, text = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INVALID if exc.code else EXIT_PASS
    except Exception:  # keep the exit-code contract even on internal errors
        traceback.print_exc()
        return EXIT_INVALID
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
