"""Corpus text format (parse and serialize), the polynomial expression
grammar, and seeded random instance generation.

Format, line oriented and diffable::

    # comment
    ring p=32003 vars=x,y,z
    module M
    shifts 0,1
    relations
    [x^2, x*y - 3*z^2]

One bracketed vector per line, one polynomial expression per ambient
component; `shifts none` denotes a rank-zero ambient.  Polynomials use
integer coefficients with `*`, `^`, `+`, `-` and parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CmregError, CorpusParseError
from .ring import (
    FreeModule,
    Polynomial,
    Presentation,
    RingSpec,
    Vector,
    make_presentation,
    make_ring,
    monomials_of_degree,
)

DESK_MAX_VARS = 4
DESK_MAX_GENS = 4
DESK_MAX_DEGREE = 4

_VAR_NAMES = ("x", "y", "z", "w")


def seeded_stream(seed: int, *key: int) -> np.random.Generator:
    """Deterministic, collision-free child stream of a root seed."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key))
    )


# ---------------------------------------------------------------------------
# polynomial expressions

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|([()*^+-]))")


def _tokenize(src: str, line: int, col0: int):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            bad = src[pos:].lstrip()
            if not bad:
                break
            raise CorpusParseError(line, col0 + pos + 1, f"unexpected character {bad[0]!r}")
        if m.group(1) is not None:
            out.append(("int", m.group(1), col0 + m.start(1) + 1))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), col0 + m.start(2) + 1))
        else:
            out.append(("op", m.group(3), col0 + m.start(3) + 1))
        pos = m.end()
    return out


class _PolyParser:
    """Recursive descent over the token list for one expression."""

    def __init__(self, tokens, ring: RingSpec, line: int, end_col: int):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.line = line
        self.end_col = end_col

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.end_col)

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _fail(self, msg, col):
        raise CorpusParseError(self.line, col, msg)

    def parse(self) -> Polynomial:
        p = self._expr()
        kind, val, col = self._peek()
        if kind is not None:
            self._fail(f"unexpected {val!r}", col)
        return p

    def _expr(self) -> Polynomial:
        kind, val, _ = self._peek()
        negate = False
        if kind == "op" and val == "-":
            self._take()
            negate = True
        acc = self._term()
        if negate:
            acc = -acc
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val in "+-":
                self._take()
                t = self._term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def _term(self) -> Polynomial:
        acc = self._factor()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "*":
                self._take()
                acc = acc * self._factor()
            else:
                return acc

    def _factor(self) -> Polynomial:
        base = self._atom()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "^":
                self._take()
                k2, v2, c2 = self._take()
                if k2 != "int":
                    self._fail("exponent must be a nonnegative integer", c2)
                base = base ** int(v2)
            else:
                return base

    def _atom(self) -> Polynomial:
        kind, val, col = self._take()
        if kind == "int":
            return Polynomial.constant(self.ring, int(val))
        if kind == "name":
            try:
                v = self.ring.var_names.index(val)
            except ValueError:
                self._fail(f"unknown variable {val!r}", col)
            return Polynomial.variable(self.ring, v)
        if kind == "op" and val == "(":
            p = self._expr()
            k2, v2, c2 = self._take()
            if (k2, v2) != ("op", ")"):
                self._fail("expected ')'", c2)
            return p
        if kind == "op" and val == "-":
            return -self._atom()
        self._fail("expected a polynomial atom", col)


def parse_polynomial(src: str, ring: RingSpec, line: int = 1, col0: int = 0) -> Polynomial:
    toks = _tokenize(src, line, col0)
    if not toks:
        raise CorpusParseError(line, col0 + 1, "empty polynomial expression")
    return _PolyParser(toks, ring, line, col0 + len(src)).parse()


def _split_vector_line(body: str, line: int, col0: int) -> list[tuple[str, int]]:
    """Split the inside of [...] at top-level commas; track column offsets."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise CorpusParseError(line, col0 + i + 1, "unbalanced ')'")
        elif ch == "," and depth == 0:
            parts.append((body[start:i], col0 + start))
            start = i + 1
    if depth != 0:
        raise CorpusParseError(line, col0 + len(body), "unbalanced '('")
    parts.append((body[start:], col0 + start))
    return parts


# ---------------------------------------------------------------------------
# corpus files

def parse_corpus(text: str) -> tuple[RingSpec, dict[str, Presentation]]:
    ring: RingSpec | None = None
    modules: dict[str, Presentation] = {}
    cur_name = None
    cur_shifts: tuple[int, ...] | None = None
    cur_rels: list[Vector] = []
    saw_relations = False

    def flush(line_no):
        nonlocal cur_name, cur_shifts, cur_rels, saw_relations
        if cur_name is None:
            return
        if cur_shifts is None:
            raise CorpusParseError(line_no, 1, f"module {cur_name!r} has no shifts line")
        try:
            modules[cur_name] = make_presentation(
                FreeModule(ring, cur_shifts), cur_rels
            )
        except CmregError as exc:
            raise CorpusParseError(line_no, 1, f"module {cur_name!r}: {exc}") from exc
        cur_name, cur_shifts, cur_rels, saw_relations = None, None, [], False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("ring"):
            if ring is not None:
                raise CorpusParseError(line_no, 1, "duplicate ring line")
            m = re.fullmatch(r"ring\s+p=(\d+)\s+vars=([A-Za-z_]\w*(?:,[A-Za-z_]\w*)*)", stripped)
            if m is None:
                raise CorpusParseError(line_no, 1, "expected 'ring p=<prime> vars=<a,b,...>'")
            try:
                ring = make_ring(tuple(m.group(2).split(",")), int(m.group(1)))
            except CmregError as exc:
                raise CorpusParseError(line_no, 1, str(exc)) from exc
            continue
        if ring is None:
            raise CorpusParseError(line_no, 1, "the ring line must come first")
        if stripped.startswith("module"):
            flush(line_no)
            m = re.fullmatch(r"module\s+(\w+)", stripped)
            if m is None:
                raise CorpusParseError(line_no, 1, "expected 'module <name>'")
            if m.group(1) in modules:
                raise CorpusParseError(line_no, 1, f"duplicate module {m.group(1)!r}")
            cur_name = m.group(1)
            continue
        if stripped.startswith("shifts"):
            if cur_name is None:
                raise CorpusParseError(line_no, 1, "shifts outside a module block")
            body = stripped[len("shifts"):].strip()
            if body == "none":
                cur_shifts = ()
            else:
                try:
                    cur_shifts = tuple(int(tok) for tok in body.split(","))
                except ValueError:
                    raise CorpusParseError(line_no, indent + 7, "shifts must be integers")
            continue
        if stripped == "relations":
            if cur_shifts is None:
                raise CorpusParseError(line_no, 1, "relations before shifts")
            saw_relations = True
            continue
        if stripped.startswith("["):
            if not saw_relations:
                raise CorpusParseError(line_no, indent + 1, "vector outside a relations block")
            if not stripped.endswith("]"):
                raise CorpusParseError(line_no, indent + len(stripped), "expected closing ']'")
            body = stripped[1:-1]
            parts = _split_vector_line(body, line_no, indent + 1)
            if len(parts) != len(cur_shifts):
                raise CorpusParseError(
                    line_no, indent + 1,
                    f"vector has {len(parts)} entries, ambient rank is {len(cur_shifts)}",
                )
            polys = [
                parse_polynomial(src, ring, line_no, col) for src, col in parts
            ]
            cur_rels.append(Vector.from_polys(polys))
            continue
        raise CorpusParseError(line_no, indent + 1, f"unrecognized line {stripped!r}")
    flush(len(text.splitlines()) + 1)
    if ring is None:
        raise CorpusParseError(1, 1, "empty corpus: no ring line")
    return ring, modules


def serialize_corpus(ring: RingSpec, modules: dict[str, Presentation]) -> str:
    out = [f"ring p={ring.p} vars={','.join(ring.var_names)}"]
    for name, m in modules.items():
        out.append(f"module {name}")
        if m.ambient.rank == 0:
            out.append("shifts none")
        else:
            out.append("shifts " + ",".join(str(t) for t in m.ambient.twists))
        out.append("relations")
        for r in m.relations:
            entries = [str(r.entry(k)) for k in range(m.ambient.rank)]
            out.append("[" + ", ".join(entries) + "]")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# random instances

@dataclass(frozen=True)
class Recipe:
    """Generation parameters, clamped to desk scale."""

    kind: str = "mixed"  # ideal | matrix | mixed
    num_vars: int = 3
    max_gens: int = 3
    max_degree: int = 3
    p: int = 32003

    def __post_init__(self):
        if self.kind not in ("ideal", "matrix", "mixed"):
            raise CmregError(f"unknown recipe kind {self.kind!r}")
        if not 1 <= self.num_vars <= DESK_MAX_VARS:
            raise CmregError(f"num_vars must be in 1..{DESK_MAX_VARS}")
        if not 1 <= self.max_gens <= DESK_MAX_GENS:
            raise CmregError(f"max_gens must be in 1..{DESK_MAX_GENS}")
        if not 1 <= self.max_degree <= DESK_MAX_DEGREE:
            raise CmregError(f"max_degree must be in 1..{DESK_MAX_DEGREE}")

    def ring(self) -> RingSpec:
        return make_ring(_VAR_NAMES[: self.num_vars], self.p)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "num_vars": self.num_vars,
            "max_gens": self.max_gens,
            "max_degree": self.max_degree,
            "p": self.p,
        }

    @staticmethod
    def from_dict(d: dict) -> "Recipe":
        return Recipe(**d)


def random_poly(ring: RingSpec, degree: int, rng: np.random.Generator) -> Polynomial:
    """Nonzero homogeneous form: a plain monomial or a sparse dense-ish form."""
    monos = list(monomials_of_degree(ring.num_vars, degree))
    if rng.random() < 0.35:
        pick = int(rng.integers(0, len(monos)))
        return Polynomial.monomial(ring, monos[pick], int(rng.integers(1, ring.p)))
    while True:
        keep = rng.random(len(monos)) < 0.55
        coeffs = rng.integers(1, ring.p, size=len(monos))
        terms = {m: int(c) for m, c, k in zip(monos, coeffs, keep) if k}
        if terms:
            return Polynomial.from_terms(ring, terms)


def random_ideal_gens(recipe: Recipe, rng: np.random.Generator,
                      ring: RingSpec | None = None) -> list[Polynomial]:
    ring = ring or recipe.ring()
    count = int(rng.integers(1, recipe.max_gens + 1))
    return [
        random_poly(ring, int(rng.integers(1, recipe.max_degree + 1)), rng)
        for _ in range(count)
    ]


def random_module(recipe: Recipe, rng: np.random.Generator,
                  ring: RingSpec | None = None) -> Presentation:
    """A quotient of R by an ideal, or the cokernel of a random matrix."""
    ring = ring or recipe.ring()
    kind = recipe.kind
    if kind == "mixed":
        kind = "ideal" if rng.random() < 0.6 else "matrix"
    if kind == "ideal":
        gens = random_ideal_gens(recipe, rng, ring)
        return make_presentation(FreeModule(ring, (0,)), [g.as_vector() for g in gens])
    rank = int(rng.integers(1, 3))
    twists = (0,) if rank == 1 else (0, int(rng.integers(0, 2)))
    amb = FreeModule(ring, twists)
    ncols = int(rng.integers(1, recipe.max_gens + 1))
    cols = []
    for _ in range(ncols):
        cdeg = max(twists) + int(rng.integers(1, recipe.max_degree + 1))
        while True:
            polys = []
            for a in twists:
                if rng.random() < 0.75:
                    polys.append(random_poly(ring, cdeg - a, rng))
                else:
                    polys.append(Polynomial.zero(ring))
            if any(not q.is_zero() for q in polys):
                cols.append(Vector.from_polys(polys))
                break
    return make_presentation(amb, cols)


def random_free_module(recipe: Recipe, rng: np.random.Generator,
                       ring: RingSpec | None = None) -> Presentation:
    ring = ring or recipe.ring()
    rank = int(rng.integers(1, 3))
    twists = tuple(int(rng.integers(0, recipe.max_degree)) for _ in range(rank))
    return Presentation(FreeModule(ring, twists), ())


def random_hypersurface(recipe: Recipe, rng: np.random.Generator,
                        ring: RingSpec | None = None) -> Presentation:
    ring = ring or recipe.ring()
    f = random_poly(ring, int(rng.integers(1, recipe.max_degree + 1)), rng)
    return make_presentation(FreeModule(ring, (0,)), [f.as_vector()])


def random_hom_pair(recipe: Recipe, rng_m: np.random.Generator,
                    rng_n: np.random.Generator,
                    ring: RingSpec | None = None) -> tuple[Presentation, Presentation]:
    """Pair shaped for the Hom bound: the depth gate on Ext should open
    for a healthy fraction (free sources pass vacuously, hypersurface
    sources against free targets give maximal-dimension CM Ext)."""
    ring = ring or recipe.ring()
    roll = rng_m.random()
    if roll < 0.25:
        m = random_free_module(recipe, rng_m, ring)
    elif roll < 0.60:
        m = random_hypersurface(recipe, rng_m, ring)
    else:
        m = random_module(recipe, rng_m, ring)
    if rng_n.random() < 0.35:
        n = random_free_module(recipe, rng_n, ring)
    else:
        n = random_module(recipe, rng_n, ring)
    return m, n


@dataclass(frozen=True)
class CorpusInstance:
    """Replayable bundle: (recipe, seed) regenerates it bit for bit."""

    ring: RingSpec
    modules: dict[str, Presentation]
    seed: int
    recipe: Recipe

    def serialize(self) -> str:
        return serialize_corpus(self.ring, self.modules)


def generate_instance(recipe: Recipe, seed: int,
                      names: Sequence[str] = ("M",)) -> CorpusInstance:
    ring = recipe.ring()
    modules = {
        name: random_module(recipe, seeded_stream(seed, 7, idx), ring)
        for idx, name in enumerate(names)
    }
    return CorpusInstance(ring, modules, seed, recipe)
