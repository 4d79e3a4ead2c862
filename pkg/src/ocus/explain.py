"""Step-wise explanation sequences for satisfiable problems.

Every step is an implication ``facts & constraints => derived`` found as an
unsatisfiable subset of ``F_C & I & ~(target \\ I)`` holding exactly one
negated target literal.  Three step searches are available:

``mus``
    one deletion-based MUS per remaining literal, keep the cheapest;
``ocus``
    a single optimal constrained unsatisfiable subset per step;
``ousb``
    one bounded optimal unsatisfiable subset per literal, cheapest-bound first.

All steps are computed over one *universe* formula with stable indices:
the constraints, then a unit clause per target literal (available as a fact
once derived), then a unit clause ``~l`` per literal still to explain.  A
step only activates the part of the universe that matches the current
interpretation, so hitting-set instances and satisfiable-subset caches can
be carried from one step to the next.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .engine import (MAX_ACTUAL_UNIF, GrowStrategy, SatSubsetCache, Status, Timeout, ocus)
from .formula import Group, format_clause, format_literal, interpretation
from .hitting_set import TRIVIALLY_TRUE, ExactlyOne, HittingSetSolver
from .oracles import mus_deletion
from .problem import ExplanationProblem, sorted_lits
from .sat import SatOracle, hint_from_literals

ALGORITHMS = ("mus", "ocus", "ousb")
INCREMENTALITY = ("none", "ss", "shared", "perlit")


class ConfigError(ValueError):
    pass


class ExplanationError(RuntimeError):
    """A step could not be produced; ``partial`` holds the steps made so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ExplanationTimeout(ExplanationError):
    pass


@dataclass(frozen=True)
class SequenceConfig:
    algorithm: str = "ocus"
    incrementality: str = "none"
    grow: GrowStrategy = MAX_ACTUAL_UNIF

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.incrementality not in INCREMENTALITY:
            raise ConfigError(f"unknown incrementality {self.incrementality!r}; expected one of {INCREMENTALITY}")
        if self.algorithm == "mus" and self.incrementality != "none":
            raise ConfigError("the MUS baseline has no incremental variants")
        if self.incrementality == "perlit" and self.algorithm != "ousb":
            raise ConfigError("per-literal incremental hitting sets need algorithm 'ousb'")

    @property
    def label(self) -> str:
        if self.algorithm == "mus":
            return "mus"
        return f"{self.algorithm}+{self.incrementality}+{self.grow.label}"

    @classmethod
    def from_label(cls, label: str) -> "SequenceConfig":
        parts = label.strip().split("+")
        if parts == ["mus"]:
            return cls("mus", "none", GrowStrategy("none"))
        if len(parts) != 3:
            raise ConfigError(f"bad configuration label {label!r}, expected algo+incr+grow")
        try:
            grow = GrowStrategy.from_label(parts[2])
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return cls(parts[0], parts[1], grow)

    @classmethod
    def all_labels(cls, grows=None) -> list:
        grows = grows or GrowStrategy.labels()
        out = ["mus"]
        for algo in ("ocus", "ousb"):
            for incr in INCREMENTALITY:
                if incr == "perlit" and algo != "ousb":
                    continue
                out += [f"{algo}+{incr}+{g}" for g in grows]
        return out


@dataclass(frozen=True)
class ExplanationStep:
    derived: frozenset
    facts_used: frozenset
    constraints_used: frozenset
    cost: int
    explained: int = 0
    ms: float = 0.0


@dataclass
class ExplanationSequence:
    steps: list
    initial: frozenset
    target: frozenset
    config: str = ""

    @property
    def total_cost(self) -> int:
        return sum(s.cost for s in self.steps)

    @property
    def total_ms(self) -> float:
        return sum(s.ms for s in self.steps)

    @property
    def costs(self) -> list:
        return [s.cost for s in self.steps]

    def to_document(self, problem: ExplanationProblem) -> dict:
        names = problem.atom_names
        F = problem.constraints
        steps = []
        for k, s in enumerate(self.steps):
            steps.append({
                "step": k,
                "derived": sorted_lits(s.derived),
                "derived_text": [format_literal(l, names) for l in sorted_lits(s.derived)],
                "facts_used": sorted_lits(s.facts_used),
                "facts_text": [format_literal(l, names) for l in sorted_lits(s.facts_used)],
                "constraints_used": sorted(s.constraints_used),
                "constraints_text": [format_clause(F[i], names) for i in sorted(s.constraints_used)],
                "cost": s.cost,
                "ms": round(s.ms, 3),
            })
        return {
            "problem": problem.name,
            "config": self.config,
            "initial": sorted_lits(self.initial),
            "target": sorted_lits(self.target),
            "steps": steps,
            "total_steps": len(self.steps),
            "total_cost": self.total_cost,
            "total_ms": round(self.total_ms, 3),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ExplanationSequence":
        """Rebuild a sequence from :meth:`to_document` output (the text fields are ignored)."""
        try:
            steps = [ExplanationStep(frozenset(s["derived"]), frozenset(s["facts_used"]),
                                     frozenset(s["constraints_used"]), int(s["cost"]),
                                     ms=float(s.get("ms", 0.0)))
                     for s in doc["steps"]]
            return cls(steps, frozenset(doc["initial"]), frozenset(doc["target"]), doc.get("config", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise ExplanationError(f"malformed sequence document: {e}") from None


class Explainer:
    """Holds the universe formula and the state that incremental modes carry across steps."""

    def __init__(self, problem: ExplanationProblem, config: SequenceConfig = SequenceConfig()):
        self.problem = problem = problem.with_target()
        self.config = config
        self.target = problem.target
        C = problem.constraints
        self.n_constraints = m = len(C)
        fc = problem.weights.fact
        facts = sorted_lits(self.target)
        todo = sorted_lits(self.target - problem.initial)
        self.fact_index = {l: m + k for k, l in enumerate(facts)}
        self.neg_index = {l: m + len(facts) + k for k, l in enumerate(todo)}
        self.index_lit = {i: l for l, i in self.fact_index.items()}
        self.neg_lit = {i: l for l, i in self.neg_index.items()}
        self.universe = C.extend([[l] for l in facts] + [[-l] for l in todo],
                                 [fc] * (len(facts) + len(todo)),
                                 [Group.DERIVED] * len(facts) + [Group.NEGATED] * len(todo))
        self.weights = dict(enumerate(self.universe.weights))
        self.order = {l: k for k, l in enumerate(todo)}
        self.hint = hint_from_literals(self.target)
        self.oracle = SatOracle(self.universe)
        self.cache = SatSubsetCache()
        self.shared_hs = None
        self.literal_hs: dict[int, HittingSetSolver] = {}
        initial_bound = (sum(C.weights) + fc * len(problem.initial) + fc * len(todo))
        self.bounds = {l: initial_bound for l in todo}
        self.bound_log: list = []
        self.step_stats: list = []
        self.trace: list | None = None
        self.deadline: float | None = None

    def close(self):
        self.oracle.close()

    # -- universe views ---------------------------------------------------

    def base(self, I) -> frozenset:
        """Constraint indices plus the fact units of ``I``."""
        return frozenset(range(self.n_constraints)) | {self.fact_index[l] for l in I}

    def active(self, I) -> frozenset:
        return self.base(I) | {self.neg_index[l] for l in self.target - I}

    def cost_of(self, subset) -> int:
        return sum(self.weights[i] for i in subset)

    def _new_hs(self):
        return HittingSetSolver(self.universe.indices, self.weights)

    def _check_interpretation(self, I):
        I = interpretation(I)
        if not self.problem.initial <= I or not I <= self.target:
            raise ExplanationError("interpretation must lie between the initial facts and the target")
        if I == self.target:
            raise ExplanationError("nothing left to explain")
        return I

    def to_step(self, I, subset) -> ExplanationStep:
        negs = [self.neg_lit[i] for i in subset if i in self.neg_lit]
        if len(negs) != 1:
            raise ExplanationError(f"subset holds {len(negs)} negated target units, expected 1")
        lit = negs[0]
        facts = frozenset(self.index_lit[i] for i in subset if i in self.index_lit)
        cons = frozenset(i for i in subset if i < self.n_constraints)
        used = sorted(cons) + [self.fact_index[f] for f in sorted_lits(facts)]
        derived = {lit}
        for other in sorted_lits(self.target - I):
            if other != lit and self.oracle.solve(used, [-other]) is None:
                derived.add(other)
        return ExplanationStep(frozenset(derived), facts, cons, self.cost_of(subset), lit)

    # -- one step ---------------------------------------------------------

    def step(self, I) -> ExplanationStep:
        I = self._check_interpretation(I)
        start = time.perf_counter()
        algo = self.config.algorithm
        if algo == "mus":
            step = self.step_mus(I)
        elif algo == "ocus":
            step = self.step_ocus(I)
        else:
            step = self.step_ous(I)
        for l in step.derived:
            self.literal_hs.pop(l, None)
        ms = (time.perf_counter() - start) * 1000.0
        return ExplanationStep(step.derived, step.facts_used, step.constraints_used, step.cost,
                               step.explained, ms)

    def step_mus(self, I) -> ExplanationStep:
        base = self.base(I)
        best = None
        for l in sorted_lits(self.target - I):
            self._check_deadline()
            X = mus_deletion(self.universe, base | {self.neg_index[l]}, self.oracle)
            c = self.cost_of(X)
            if best is None or c < best[0]:
                best = (c, X)
        self.step_stats.append({"remaining": len(self.target - I), "calls": len(self.target - I),
                                "exceeds_bound": 0})
        return self.to_step(I, best[1])

    def step_ocus(self, I) -> ExplanationStep:
        incr = self.config.incrementality
        if incr == "shared":
            if self.shared_hs is None:
                self.shared_hs = self._new_hs()
            hs, cache = self.shared_hs, None
        else:
            hs = None
            cache = self.cache if incr == "ss" else None
        todo = self.target - I
        res = ocus(self.universe, ExactlyOne({self.neg_index[l] for l in todo}), self.config.grow,
                   hs, cache, self.hint, self.active(I), self.base(I), self.oracle,
                   trace=self.trace, deadline=self.deadline)
        if res.status is not Status.FOUND:
            raise ExplanationError("no explanation exists: target is not entailed")
        self.step_stats.append({"remaining": len(todo), "calls": 1, "exceeds_bound": 0})
        return self.to_step(I, res.subset)

    def step_ous(self, I) -> ExplanationStep:
        incr = self.config.incrementality
        todo = self.target - I
        self.bound_log.append((I, {l: self.bounds[l] for l in todo}))
        base = self.base(I)
        best = None
        exceeded = 0
        for l in sorted(todo, key=lambda l: (self.bounds[l], self.order[l])):
            self._check_deadline()
            cache = None
            hs = None
            if incr == "ss":
                cache = self.cache
            elif incr == "shared":
                if self.shared_hs is None:
                    self.shared_hs = self._new_hs()
                hs = self.shared_hs
            elif incr == "perlit":
                hs = self.literal_hs.get(l)
                if hs is None:
                    hs = self.literal_hs[l] = self._new_hs()
            res = ocus(self.universe, TRIVIALLY_TRUE, self.config.grow, hs, cache, self.hint,
                       base | {self.neg_index[l]}, base, self.oracle,
                       ub_key=None if best is None else best.key - 1,
                       trace=self.trace, deadline=self.deadline)
            if res.status is Status.EXCEEDS_BOUND:
                exceeded += 1
            elif res.status is Status.FOUND:
                self.bounds[l] = res.cost
                best = res
            else:
                raise ExplanationError(f"literal {l} is not entailed")
        self.step_stats.append({"remaining": len(todo), "calls": len(todo), "exceeds_bound": exceeded})
        return self.to_step(I, best.subset)

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Timeout

    # -- whole sequence ---------------------------------------------------

    def run(self, timeout: float | None = None, on_step=None) -> ExplanationSequence:
        """Explain the whole target; ``timeout`` is in seconds."""
        if timeout is not None:
            self.deadline = time.monotonic() + timeout
        seq = ExplanationSequence([], self.problem.initial, self.target, self.config.label)
        I = self.problem.initial
        while I != self.target:
            try:
                step = self.step(I)
            except Timeout:
                raise ExplanationTimeout("time limit reached", seq) from None
            except ExplanationError as e:
                raise ExplanationError(str(e), seq) from None
            seq.steps.append(step)
            I = I | step.derived
            if on_step is not None:
                on_step(len(seq.steps) - 1, step, I)
        return seq


def explain_one_step_mus(problem: ExplanationProblem, I) -> ExplanationStep:
    ex = Explainer(problem, SequenceConfig("mus", "none", GrowStrategy("none")))
    try:
        return ex.step(I)
    finally:
        ex.close()


def explain_one_step_ocus(problem: ExplanationProblem, I, config: SequenceConfig | None = None,
                          explainer: Explainer | None = None) -> ExplanationStep:
    """Optimal step at ``I``; pass ``explainer`` to reuse incremental state across calls."""
    if explainer is None:
        config = config or SequenceConfig("ocus")
        ex = Explainer(problem, SequenceConfig("ocus", config.incrementality, config.grow))
        try:
            return ex.step(I)
        finally:
            ex.close()
    return explainer.step(I)


def explain_one_step_ous(problem: ExplanationProblem, I, config: SequenceConfig | None = None,
                         explainer: Explainer | None = None) -> ExplanationStep:
    if explainer is None:
        config = config or SequenceConfig("ousb")
        ex = Explainer(problem, SequenceConfig("ousb", config.incrementality, config.grow))
        try:
            return ex.step(I)
        finally:
            ex.close()
    return explainer.step(I)


def explain_full(problem: ExplanationProblem, config: SequenceConfig = SequenceConfig(),
                 timeout: float | None = None) -> ExplanationSequence:
    ex = Explainer(problem, config)
    try:
        return ex.run(timeout)
    finally:
        ex.close()


@dataclass
class VerificationReport:
    valid: bool
    total_cost: int
    step: int | None = None
    message: str = "valid"
    literal: int | None = None

    def __str__(self):
        if self.valid:
            return f"valid (total cost {self.total_cost})"
        where = f"step {self.step}: " if self.step is not None else ""
        return f"invalid: {where}{self.message}"


def verify_sequence(problem: ExplanationProblem, seq: ExplanationSequence) -> VerificationReport:
    """Independently re-check every step of ``seq`` against ``problem``.

    Uses a fresh SAT oracle over the constraints only; nothing computed by
    the explainer is trusted except the step contents themselves.
    """
    problem = problem.with_target()
    C = problem.constraints
    fc = problem.weights.fact
    total = sum(s.cost for s in seq.steps)
    I = set(problem.initial)

    def fail(k, msg, lit=None):
        return VerificationReport(False, total, k, msg, lit)

    with SatOracle(C) as oracle:
        for k, s in enumerate(seq.steps):
            if not s.derived:
                return fail(k, "step derives nothing")
            bad = [i for i in s.constraints_used if not 0 <= i < len(C)]
            if bad:
                return fail(k, f"unknown constraint index {bad[0]}")
            if not s.facts_used <= I:
                lit = sorted_lits(s.facts_used - I)[0]
                return fail(k, f"fact {lit} used before it was derived", lit)
            again = s.derived & I
            if again:
                lit = sorted_lits(again)[0]
                return fail(k, f"literal {lit} was already known", lit)
            outside = s.derived - problem.target
            if outside:
                lit = sorted_lits(outside)[0]
                return fail(k, f"literal {lit} is not part of the target", lit)
            for n in sorted_lits(s.derived):
                if oracle.solve(sorted(s.constraints_used), [*s.facts_used, -n]) is not None:
                    return fail(k, f"literal {n} is not entailed by the step's facts and constraints", n)
            expected = sum(C.weights[i] for i in s.constraints_used) + fc * (len(s.facts_used) + 1)
            if expected != s.cost:
                return fail(k, f"cost mismatch: recorded {s.cost}, recomputed {expected}")
            I |= s.derived
    if I != problem.target:
        missing = sorted_lits(problem.target - I)
        return fail(None, f"sequence ends before the target is reached ({len(missing)} literal(s) left)",
                    missing[0])
    return VerificationReport(True, total)


def compare_with_optimal(problem: ExplanationProblem, timeout: float | None = None) -> list:
    """Run the MUS baseline and, at every interpretation it visits, the optimal step cost.

    Returns ``[(mus_cost, optimal_cost), ...]``, one pair per baseline step.
    """
    problem = problem.with_target()
    baseline = Explainer(problem, SequenceConfig("mus", "none", GrowStrategy("none")))
    optimal = Explainer(problem, SequenceConfig("ocus", "shared", MAX_ACTUAL_UNIF))
    if timeout is not None:
        baseline.deadline = optimal.deadline = time.monotonic() + timeout
    pairs = []
    try:
        I = problem.initial
        while I != problem.target:
            step = baseline.step(I)
            pairs.append((step.cost, optimal.step(I).cost))
            I = I | step.derived
    finally:
        baseline.close()
        optimal.close()
    return pairs
