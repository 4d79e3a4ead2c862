"""Logic-grid puzzles as weighted explanation problems.

A puzzle has ``k`` categories of ``n`` entities each.  For every unordered
pair of categories ``(a, b)`` (``a`` before ``b`` in declaration order) and
every entity pair there is one relation atom ``a.x=b.y``.  The
puzzle-agnostic axioms are

* bijectivity: each entity of ``a`` is linked to exactly one entity of ``b``
  and vice versa (at-least-one clause plus pairwise at-most-one clauses);
* transitivity: for categories ``a < b < c``, any two of the links
  ``a.x=b.y``, ``b.y=c.z``, ``a.x=c.z`` imply the third.

Clues are clauses over relation atoms and are puzzle-specific.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .formula import Group
from .problem import ExplanationProblem, ProblemError, WeightScheme, build_problem


class PuzzleError(ValueError):
    pass


@dataclass(frozen=True)
class PuzzleSpec:
    categories: tuple  # ((name, (entity, ...)), ...)
    clues: tuple = ()  # clauses of literal strings or signed atom ids
    given_facts: tuple = ()
    name: str = ""
    weights: WeightScheme = field(default_factory=WeightScheme)

    def __post_init__(self):
        cats = tuple((str(n), tuple(str(e) for e in ents)) for n, ents in self.categories)
        object.__setattr__(self, "categories", cats)
        if len(cats) < 2:
            raise PuzzleError("a puzzle needs at least two categories")
        sizes = {len(ents) for _, ents in cats}
        if len(sizes) != 1 or sizes.pop() < 2:
            raise PuzzleError("all categories must have the same number (>= 2) of entities")
        names = [n for n, _ in cats]
        if len(set(names)) != len(names):
            raise PuzzleError("duplicate category name")
        for n, ents in cats:
            if len(set(ents)) != len(ents):
                raise PuzzleError(f"duplicate entity in category {n!r}")

    @property
    def size(self) -> int:
        return len(self.categories[0][1])


class RelationAtoms:
    """Numbering of relation atoms ``(a, i, b, j)`` with ``a < b`` category positions."""

    def __init__(self, spec: PuzzleSpec):
        self.spec = spec
        k, n = len(spec.categories), spec.size
        self.ids = {}
        self.names = []
        for a, b in combinations(range(k), 2):
            for i in range(n):
                for j in range(n):
                    self.ids[(a, i, b, j)] = len(self.names) + 1
                    self.names.append(self._name(a, i, b, j))
        self._cat = {name: p for p, (name, _) in enumerate(spec.categories)}
        self._ent = [{e: q for q, e in enumerate(ents)} for _, ents in spec.categories]

    def _name(self, a, i, b, j):
        (na, ea), (nb, eb) = self.spec.categories[a], self.spec.categories[b]
        return f"{na}.{ea[i]}={nb}.{eb[j]}"

    def atom(self, a, i, b, j) -> int:
        if a > b:
            a, i, b, j = b, j, a, i
        return self.ids[(a, i, b, j)]

    def parse(self, token) -> int:
        """Literal for ``"cat.x=cat.y"`` (prefix ``~``, ``-`` or ``!`` negates) or a signed id."""
        if isinstance(token, int) and not isinstance(token, bool):
            if token == 0 or abs(token) > len(self.names):
                raise PuzzleError(f"atom id {token} out of range")
            return token
        if not isinstance(token, str):
            raise PuzzleError(f"cannot read literal {token!r}")
        text = token.strip()
        sign = 1
        while text and text[0] in "~-!":
            sign = -sign
            text = text[1:].strip()
        try:
            left, right = (part.strip() for part in text.split("="))
            ca, ea = left.split(".", 1)
            cb, eb = right.split(".", 1)
            a, b = self._cat[ca], self._cat[cb]
            i, j = self._ent[a][ea], self._ent[b][eb]
        except (ValueError, KeyError):
            raise PuzzleError(f"unknown relation {token!r}") from None
        if a == b:
            raise PuzzleError(f"relation {token!r} links a category to itself")
        return sign * self.atom(a, i, b, j)


def expected_counts(k: int, n: int) -> dict:
    """Closed-form atom and axiom clause counts for ``k`` categories of size ``n``."""
    pairs, triples = comb(k, 2), comb(k, 3)
    return {
        "atoms": pairs * n * n,
        "bijectivity": pairs * 2 * n * (1 + comb(n, 2)),
        "transitivity": triples * 3 * n ** 3,
    }


def axioms(spec: PuzzleSpec, atoms: RelationAtoms):
    """Yield ``(kind, clause)`` for the puzzle-agnostic axioms."""
    k, n = len(spec.categories), spec.size
    for a, b in combinations(range(k), 2):
        for side in (0, 1):
            for i in range(n):
                row = [atoms.atom(a, i, b, j) if side == 0 else atoms.atom(a, j, b, i) for j in range(n)]
                yield "bijectivity", row
                for x, y in combinations(row, 2):
                    yield "bijectivity", [-x, -y]
    for a, b, c in combinations(range(k), 3):
        for i in range(n):
            for j in range(n):
                for z in range(n):
                    ab, bc, ac = atoms.atom(a, i, b, j), atoms.atom(b, j, c, z), atoms.atom(a, i, c, z)
                    yield "transitivity", [-ab, -bc, ac]
                    yield "transitivity", [-ab, -ac, bc]
                    yield "transitivity", [-ac, -bc, ab]


def encode(spec: PuzzleSpec) -> ExplanationProblem:
    atoms = RelationAtoms(spec)
    clauses, groups = [], []
    for _, cl in axioms(spec, atoms):
        clauses.append(cl)
        groups.append(Group.AGNOSTIC)
    for clue in spec.clues:
        if isinstance(clue, (str, int)):
            clue = [clue]
        clauses.append([atoms.parse(t) for t in clue])
        groups.append(Group.SPECIFIC)
    initial = [atoms.parse(t) for t in spec.given_facts]
    try:
        return build_problem(clauses, groups, initial, None, spec.weights, tuple(atoms.names),
                             atom_count=len(atoms.names), name=spec.name)
    except ProblemError as e:
        raise PuzzleError(f"invalid puzzle: {e}") from None


def parse_puzzle(text) -> PuzzleSpec:
    """Read the JSON puzzle format.

    ``categories`` is either an object ``{name: [entities]}`` or a list of
    ``{"name": ..., "entities": [...]}``; ``clues`` is a list of clauses
    (each a list of literals, or a single literal); ``given_facts`` a list of
    literals.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PuzzleError(f"invalid JSON: {e}") from None
    cats = doc.get("categories")
    if isinstance(cats, dict):
        cats = list(cats.items())
    elif isinstance(cats, list):
        try:
            cats = [(c["name"], c["entities"]) for c in cats]
        except (TypeError, KeyError):
            raise PuzzleError("categories must be objects with 'name' and 'entities'") from None
    else:
        raise PuzzleError("missing 'categories'")
    weights = WeightScheme(**doc.get("weights", {}))
    return PuzzleSpec(tuple(cats), tuple(doc.get("clues", ())), tuple(doc.get("given_facts", ())),
                      doc.get("name", ""), weights)


def load_puzzle(path) -> ExplanationProblem:
    from pathlib import Path

    with open(path, "rb") as f:
        spec = parse_puzzle(f.read())
    if not spec.name:
        spec = PuzzleSpec(spec.categories, spec.clues, spec.given_facts, Path(path).stem, spec.weights)
    return encode(spec)
