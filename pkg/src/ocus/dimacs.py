"""DIMACS CNF reading and writing."""

from __future__ import annotations

from .formula import CnfFormula, FormulaError, Group, make_clause


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def parse_dimacs(text) -> CnfFormula:
    """Parse DIMACS CNF text (``str`` or ``bytes``).

    Every clause gets weight 1 and group ``SPECIFIC``; clause order is kept.
    Clauses may span several lines but must be terminated by ``0``.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    header = None
    clauses = []
    current: list[int] = []
    current_start = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("duplicate header", lineno)
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError(f"malformed header {line!r}, expected 'p cnf <vars> <clauses>'", lineno)
            try:
                nvars, nclauses = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if nvars < 0 or nclauses < 0:
                raise ParseError("negative counts in header", lineno)
            header = (nvars, nclauses)
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                try:
                    clauses.append(make_clause(current))
                except FormulaError as e:
                    raise ParseError(str(e), current_start) from None
                current = []
                current_start = None
                continue
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds declared variable count {header[0]}", lineno)
            if current_start is None:
                current_start = lineno
            current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("clause not terminated by 0", current_start)
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    n = len(clauses)
    return CnfFormula(tuple(clauses), (1,) * n, (Group.SPECIFIC,) * n, header[0])


def serialize_dimacs(formula: CnfFormula, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.atom_count} {len(formula)}")
    for cl in formula.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0" if cl else "0")
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> CnfFormula:
    with open(path, "rb") as f:
        return parse_dimacs(f.read())


def write_dimacs(formula: CnfFormula, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_dimacs(formula))
