"""Single-solution random 3-SAT instances: generation, verification and DIMACS I/O.

Assignments are bit strings whose leftmost character is variable 0.  When an
assignment is packed into a basis index, variable ``k`` is bit ``k`` of the
index (least significant bit = variable 0).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    DimacsError,
    EnumerationBoundError,
    GenerationError,
    InvalidInputError,
)

MAX_ENUMERATION_N = 24
DEFAULT_MAX_TRIES = 10_000


@dataclass(frozen=True, order=True)
class Literal:
    variable: int
    negated: bool = False

    def to_dimacs(self) -> int:
        return -(self.variable + 1) if self.negated else self.variable + 1

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise InvalidInputError("0 is not a literal")
        return cls(abs(value) - 1, value < 0)


@dataclass(frozen=True, order=True)
class Clause:
    """Disjunction of exactly three literals on distinct variables, sorted by variable."""

    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(self.literals)
        if len(lits) != 3:
            raise InvalidInputError(f"clause needs exactly 3 literals, got {len(lits)}")
        if len({lit.variable for lit in lits}) != 3:
            raise InvalidInputError(f"clause variables must be distinct: {lits}")
        object.__setattr__(self, "literals", tuple(sorted(lits)))

    @classmethod
    def of(cls, *signed: int) -> "Clause":
        """Build from DIMACS-style signed 1-based literals, e.g. ``Clause.of(1, -2, 3)``."""
        return cls(tuple(Literal.from_dimacs(v) for v in signed))

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(lit.variable for lit in self.literals)

    def violated_by(self, bits: str) -> bool:
        # a literal is false when the variable's bit equals its negation flag
        return all((bits[lit.variable] == "1") == lit.negated for lit in self.literals)


@dataclass(frozen=True)
class SatInstance:
    n: int
    clauses: tuple[Clause, ...]
    alpha: float
    solution: str
    seed: int = 0
    tries: int = 0

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def solution_index(self) -> int:
        return assignment_to_index(self.solution)


def index_to_assignment(index: int, n: int) -> str:
    return "".join("1" if (index >> k) & 1 else "0" for k in range(n))


def assignment_to_index(bits: str) -> int:
    return sum(1 << k for k, b in enumerate(bits) if b == "1")


def clause_array(clauses) -> tuple[np.ndarray, np.ndarray]:
    """Return (variables, negated) arrays of shape (m, 3)."""
    if not clauses:
        return np.zeros((0, 3), dtype=np.int64), np.zeros((0, 3), dtype=bool)
    var = np.array([c.variables for c in clauses], dtype=np.int64)
    neg = np.array([[lit.negated for lit in c.literals] for c in clauses], dtype=bool)
    return var, neg


def _check_literals(n, clauses):
    for c in clauses:
        if any(v >= n or v < 0 for v in c.variables):
            raise InvalidInputError(f"clause {c} references a variable outside [0, {n})")


def violated_count(instance, assignment: str) -> int:
    """Number of clauses whose three literals are all false under ``assignment``."""
    if len(assignment) != instance.n or set(assignment) - {"0", "1"}:
        raise InvalidInputError(
            f"assignment must be a {instance.n}-bit string, got {assignment!r}"
        )
    return sum(c.violated_by(assignment) for c in instance.clauses)


def violation_counts(n: int, clauses) -> np.ndarray:
    """Violated-clause count for every basis index 0..2^n-1."""
    if n > MAX_ENUMERATION_N:
        raise EnumerationBoundError(f"n={n} exceeds enumeration bound {MAX_ENUMERATION_N}")
    idx = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int32)
    var, neg = clause_array(clauses)
    for vs, ns in zip(var, neg):
        hit = np.ones(1 << n, dtype=bool)
        for v, ng in zip(vs, ns):
            hit &= ((idx >> v) & 1).astype(bool) == ng
        counts += hit
    return counts


def _satisfying_indices(n: int, var: np.ndarray, neg: np.ndarray) -> np.ndarray:
    alive = np.arange(1 << n, dtype=np.int64)
    for vs, ns in zip(var, neg):
        if alive.size == 0:
            break
        violated = np.ones(alive.size, dtype=bool)
        for v, ng in zip(vs, ns):
            violated &= ((alive >> v) & 1).astype(bool) == ng
        alive = alive[~violated]
    return alive


def count_solutions(instance) -> int:
    """Exhaustively count satisfying assignments (any object with ``n`` and ``clauses``)."""
    n = instance.n
    if n > MAX_ENUMERATION_N:
        raise EnumerationBoundError(f"n={n} exceeds enumeration bound {MAX_ENUMERATION_N}")
    _check_literals(n, instance.clauses)
    var, neg = clause_array(instance.clauses)
    return int(_satisfying_indices(n, var, neg).size)


def clause_count(n: int, alpha) -> int:
    # round half up, independent of float banker's rounding
    return int(math.floor(Fraction(alpha) * n + Fraction(1, 2)))


def _draw_clauses(rng, n, m):
    """m distinct canonical clauses; colliding draws are discarded and redrawn."""
    seen = set()
    var = np.empty((m, 3), dtype=np.int64)
    neg = np.empty((m, 3), dtype=bool)
    k = 0
    while k < m:
        batch = m - k
        vs = np.sort(rng.random((batch, n)).argsort(axis=1)[:, :3], axis=1)
        ns = rng.integers(0, 2, size=(batch, 3)).astype(bool)
        for v, g in zip(vs, ns):
            key = (*v.tolist(), *g.tolist())
            if key in seen:
                continue
            seen.add(key)
            var[k], neg[k] = v, g
            k += 1
    return var, neg


def generate_single_solution_instance(
    n: int, alpha, seed: int, max_tries: int = DEFAULT_MAX_TRIES
) -> SatInstance:
    """Draw random 3-SAT formulas until one has exactly one satisfying assignment.

    Every try samples ``m = round(alpha * n)`` distinct clauses, each on three
    distinct variables chosen uniformly with independent fair sign flips.  The
    result is a pure function of ``(n, alpha, seed, max_tries)``.
    """
    if not 3 <= n <= MAX_ENUMERATION_N:
        raise InvalidInputError(f"n must lie in [3, {MAX_ENUMERATION_N}], got {n}")
    m = clause_count(n, alpha)
    if m < 1:
        raise InvalidInputError(f"alpha*n rounds to {m} clauses")
    if m > 8 * math.comb(n, 3):
        raise InvalidInputError(f"cannot draw {m} distinct clauses on {n} variables")
    if max_tries < 1:
        raise InvalidInputError("max_tries must be >= 1")
    rng = np.random.default_rng(seed)
    for tries in range(1, max_tries + 1):
        var, neg = _draw_clauses(rng, n, m)
        sols = _satisfying_indices(n, var, neg)
        if sols.size == 1:
            clauses = tuple(
                Clause(tuple(Literal(int(v), bool(g)) for v, g in zip(vs, ns)))
                for vs, ns in zip(var, neg)
            )
            return SatInstance(
                n=n,
                clauses=clauses,
                alpha=m / n,
                solution=index_to_assignment(int(sols[0]), n),
                seed=int(seed),
                tries=tries,
            )
    raise GenerationError(
        f"no single-solution instance for n={n}, alpha={alpha} within {max_tries} tries",
        tries=max_tries,
    )


def write_dimacs(instance: SatInstance, sink) -> None:
    """Write extended DIMACS to a path or text stream."""
    lines = [
        f"c solution {instance.solution}",
        f"c seed {instance.seed}",
        f"c tries {instance.tries}",
        f"c alpha {instance.alpha!r}",
        f"p cnf {instance.n} {instance.m}",
    ]
    lines += [" ".join(str(l.to_dimacs()) for l in c.literals) + " 0" for c in instance.clauses]
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    else:
        sink.write(text)


def dimacs_string(instance: SatInstance) -> str:
    buf = io.StringIO()
    write_dimacs(instance, buf)
    return buf.getvalue()


def read_dimacs(source) -> SatInstance:
    """Parse and re-verify an extended DIMACS file (path or text stream)."""
    if isinstance(source, (str, Path)):
        return parse_dimacs(Path(source).read_text())
    return parse_dimacs(source.read())


def parse_dimacs(text: str) -> SatInstance:
    header = None
    meta = {}
    clauses = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1] in ("solution", "seed", "tries", "alpha"):
                meta[parts[1]] = (parts[2], lineno)
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]), lineno)
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            continue
        if header is None:
            raise DimacsError("clause before header", lineno)
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsError(f"non-integer token in {line!r}", lineno) from None
        for v in values:
            if v != 0:
                if abs(v) > header[0]:
                    raise DimacsError(f"literal {v} outside 1..{header[0]}", lineno)
                pending.append(v)
                continue
            if len(pending) != 3:
                raise DimacsError(f"clause has {len(pending)} literals, expected 3", lineno)
            try:
                clauses.append((Clause.of(*pending), lineno))
            except InvalidInputError as exc:
                raise DimacsError(str(exc), lineno) from None
            pending = []
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("unterminated clause at end of file")
    n, m, hline = header
    if len(clauses) != m:
        raise DimacsError(f"header declares {m} clauses, found {len(clauses)}", hline)
    seen = {}
    for c, lineno in clauses:
        if c in seen:
            raise DimacsError(f"duplicate clause (first on line {seen[c]})", lineno)
        seen[c] = lineno
    if "solution" not in meta:
        raise DimacsError("missing 'c solution' line")

    solution, sline = meta["solution"]
    if len(solution) != n or set(solution) - {"0", "1"}:
        raise DimacsError(f"solution must be a {n}-bit string", sline)
    try:
        seed = int(meta.get("seed", ("0", None))[0])
        tries = int(meta.get("tries", ("0", None))[0])
    except ValueError as exc:
        raise DimacsError(f"bad metadata: {exc}") from None
    alpha = m / n
    if "alpha" in meta:
        text_alpha, aline = meta["alpha"]
        try:
            stored = float(text_alpha)
        except ValueError:
            raise DimacsError(f"bad alpha {text_alpha!r}", aline) from None
        if abs(stored - alpha) > 1e-12:
            raise DimacsError(f"alpha {stored} disagrees with m/n = {alpha}", aline)
        alpha = stored

    instance = SatInstance(
        n=n,
        clauses=tuple(c for c, _ in clauses),
        alpha=alpha,
        solution=solution,
        seed=seed,
        tries=tries,
    )
    for c, lineno in clauses:
        if c.violated_by(solution):
            raise DimacsError("stored solution violates this clause", lineno)
    if n <= MAX_ENUMERATION_N:
        count = count_solutions(instance)
        if count != 1:
            raise DimacsError(f"instance has {count} solutions, expected exactly 1", sline)
    return instance
