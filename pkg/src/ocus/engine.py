"""Implicit hitting-set search for cost-optimal constrained unsatisfiable subsets.

The loop alternates an optimal constrained hitting set with a SAT check.
Satisfiable hitting sets are grown into larger satisfiable subsets whose
complements become new sets to hit.

Complements are always taken against the whole formula (the *universe*),
not just the active clauses.  Such a complement is a correction subset for
every active mask at once, which is what lets one hitting-set instance or
one cache of satisfiable subsets be shared across calls that activate
different parts of the universe.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Iterable, Mapping

from .formula import CnfFormula, clause_satisfied
from .hitting_set import ABOVE_CUTOFF, TRIVIALLY_TRUE, HittingSetSolver, Timeout
from .maxsat import MaxSatInstance, maximize
from .sat import SatOracle

__all__ = [
    "GrowStrategy", "SatSubsetCache", "Status", "OcusResult", "TraceRecord",
    "grow", "ocus", "ous_bounded", "Timeout", "NO_GROW", "MAX_ACTUAL_UNIF",
]


@dataclass(frozen=True)
class GrowStrategy:
    """How to extend a satisfiable hitting set before taking its complement.

    ``kind`` is one of ``none``, ``model``, ``greedy`` or ``maxsat``; the
    MaxSAT kind additionally has a soft-clause ``domain`` (``full`` or
    ``actual``) and a weighting ``scheme`` (``unif``, ``pos`` or ``inv``).
    """

    kind: str = "maxsat"
    domain: str = "actual"
    scheme: str = "unif"

    KINDS = ("none", "model", "greedy", "maxsat")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown grow kind {self.kind!r}")
        if self.domain not in ("full", "actual") or self.scheme not in ("unif", "pos", "inv"):
            raise ValueError(f"bad MaxSAT grow parameters {self.domain!r}/{self.scheme!r}")

    @property
    def label(self) -> str:
        if self.kind == "maxsat":
            return f"max-{self.domain}-{self.scheme}"
        return self.kind

    @classmethod
    def from_label(cls, label: str) -> "GrowStrategy":
        parts = label.lower().replace(":", "-").split("-")
        if parts[0] in ("max", "maxsat"):
            domain = parts[1] if len(parts) > 1 else "actual"
            scheme = parts[2] if len(parts) > 2 else "unif"
            if len(parts) > 3:
                raise ValueError(f"unknown grow strategy {label!r}")
            return cls("maxsat", domain, scheme)
        if len(parts) == 1 and parts[0] in ("none", "model", "greedy"):
            return cls(parts[0])
        raise ValueError(f"unknown grow strategy {label!r}")

    @classmethod
    def labels(cls) -> list:
        out = ["none", "model", "greedy"]
        out += [f"max-{d}-{s}" for d in ("full", "actual") for s in ("unif", "pos", "inv")]
        return out


NO_GROW = GrowStrategy("none")
MAX_ACTUAL_UNIF = GrowStrategy("maxsat", "actual", "unif")


class SatSubsetCache:
    """Ordered, duplicate-free collection of satisfiable subsets of a universe."""

    def __init__(self, subsets: Iterable[Iterable[int]] = ()):
        self._items: list[frozenset] = []
        self._seen: set[frozenset] = set()
        self._universe = None
        self._complements: list[frozenset] = []
        for s in subsets:
            self.add(s)

    def add(self, subset) -> None:
        s = frozenset(subset)
        if s not in self._seen:
            self._seen.add(s)
            self._items.append(s)

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def with_complements(self, universe: frozenset):
        """Yield ``(S, universe - S)`` pairs; complements are memoised per universe."""
        if self._universe != universe:
            self._universe = universe
            self._complements = []
        comps = self._complements
        for k, S in enumerate(self._items):
            if k == len(comps):
                comps.append(universe - S)
            yield S, comps[k]


class Status(enum.Enum):
    FOUND = "found"
    NONE_EXISTS = "none_exists"
    EXCEEDS_BOUND = "exceeds_bound"


@dataclass(frozen=True)
class OcusResult:
    status: Status
    subset: frozenset = frozenset()
    cost: int | None = None
    key: int | None = None

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    hitting_set: tuple
    cost: int | None
    verdict: str  # sat | unsat | infeasible | exceeds_bound | satisfiable_formula
    grown: tuple = ()
    new_set: tuple = ()

    def as_dict(self) -> dict:
        return {"iteration": self.iteration, "hitting_set": list(self.hitting_set), "cost": self.cost,
                "verdict": self.verdict, "grown": list(self.grown), "new_set": list(self.new_set)}


def soft_weights(formula: CnfFormula, candidates: Iterable[int], scheme: str) -> dict:
    cands = sorted(candidates)
    if scheme == "unif":
        return {i: 1 for i in cands}
    w = formula.weights
    if scheme == "pos":
        # zero-cost clauses still need a positive soft weight
        return {i: max(w[i], 1) for i in cands}
    top = max((w[i] for i in cands), default=0)
    return {i: top + 1 - w[i] for i in cands}


def grow(formula: CnfFormula, subset: Iterable[int], model, strategy: GrowStrategy,
         actual_domain: Iterable[int] | None = None, hint: Mapping[int, bool] | None = None,
         active: Iterable[int] | None = None, oracle: SatOracle | None = None) -> frozenset:
    """Extend the satisfiable ``subset`` (witnessed by the total ``model``).

    Apart from ``none``, the result also contains every clause of the formula
    that the final witness model satisfies, so it is a superset of what the
    strategy alone would give and is satisfiable by construction.
    """
    S = frozenset(subset)
    if strategy.kind == "none":
        return S
    active = formula.indices if active is None else frozenset(active)
    model = frozenset(model)
    if strategy.kind == "greedy":
        model = _greedy(formula, S, model, active, oracle, hint)
    elif strategy.kind == "maxsat":
        domain = active if strategy.domain == "full" else frozenset(actual_domain or ()) & active
        soft = soft_weights(formula, domain - S, strategy.scheme)
        if oracle is None:
            model, _ = maximize(MaxSatInstance(formula, S, soft, hint or {}))
        else:
            model, _ = oracle.maxsat.maximize(S, soft, hint)
    return S | formula.satisfied_by(model)


def _greedy(formula, S, model, candidates, oracle, hint):
    """Scan candidates in ascending index order, keeping each one that preserves satisfiability.

    Clauses the current witness already satisfies are kept without a SAT call.
    """
    own = oracle is None
    oracle = oracle or SatOracle(formula)
    try:
        kept = set(S)
        for i in sorted(candidates - S):
            if clause_satisfied(formula[i], model):
                kept.add(i)
                continue
            m = oracle.solve(sorted(kept | {i}), hint=hint)
            if m is not None:
                kept.add(i)
                model = m
        return model
    finally:
        if own:
            oracle.close()


def ocus(formula: CnfFormula, constraint=TRIVIALLY_TRUE, strategy: GrowStrategy = MAX_ACTUAL_UNIF,
         hs: HittingSetSolver | None = None, cache: SatSubsetCache | None = None,
         hint: Mapping[int, bool] | None = None, active: Iterable[int] | None = None,
         actual_domain: Iterable[int] | None = None, oracle: SatOracle | None = None,
         ub: int | None = None, ub_key: int | None = None, trace: list | None = None,
         deadline: float | None = None) -> OcusResult:
    """Cheapest unsatisfiable subset of the active clauses that satisfies ``constraint``.

    ``hs`` and ``cache`` may be shared with earlier calls over the same
    formula.  With ``ub`` (and/or ``ub_key``, the hitting-set ordering key)
    the search stops with ``EXCEEDS_BOUND`` as soon as a hitting set's cost
    (key) is strictly above the bound.  ``actual_domain`` defaults to the
    active clauses.
    """
    universe = formula.indices
    active = universe if active is None else formula.check_subset(active)
    if actual_domain is None:
        actual_domain = active
    if hs is None:
        hs = HittingSetSolver(universe, dict(enumerate(formula.weights)))
    hs.set_active(active)
    hs.constraint = constraint
    cache = SatSubsetCache() if cache is None else cache
    own_oracle = oracle is None
    oracle = oracle or SatOracle(formula)
    try:
        for S, comp in cache.with_complements(universe):
            if comp.isdisjoint(active):
                _record(trace, 0, S, None, "satisfiable_formula")
                return OcusResult(Status.NONE_EXISTS)
            hs.add_set(comp)
        cutoff = ub_key
        if ub is not None:
            # cost <= ub  <=>  key < (ub + 1) << shift
            by_cost = ((ub + 1) << hs.shift) - 1
            cutoff = by_cost if cutoff is None else min(cutoff, by_cost)
        it = 0
        while True:
            it += 1
            if deadline is not None and time.monotonic() > deadline:
                raise Timeout
            hit = hs.solve(deadline, cutoff)
            if hit is None:
                _record(trace, it, (), None, "infeasible")
                return OcusResult(Status.NONE_EXISTS)
            if hit is ABOVE_CUTOFF:
                # the optimal hitting set, hence the OUS, costs more than the bound
                _record(trace, it, (), None, "exceeds_bound")
                return OcusResult(Status.EXCEEDS_BOUND)
            S = hit.indices
            model = oracle.solve(sorted(S), hint=hint)
            if model is None:
                _record(trace, it, S, hit.cost, "unsat")
                return OcusResult(Status.FOUND, S, hit.cost, hit.key)
            grown = grow(formula, S, model, strategy, actual_domain, hint, active, oracle)
            comp = universe - grown
            cache.add(grown)
            if comp.isdisjoint(active):
                _record(trace, it, S, hit.cost, "satisfiable_formula", grown)
                return OcusResult(Status.NONE_EXISTS)
            hs.add_set(comp)
            _record(trace, it, S, hit.cost, "sat", grown, comp)
    finally:
        if own_oracle:
            oracle.close()


def ous_bounded(formula: CnfFormula, ub: int | None, strategy: GrowStrategy = MAX_ACTUAL_UNIF,
                hs: HittingSetSolver | None = None, cache: SatSubsetCache | None = None,
                hint=None, **kwargs) -> OcusResult:
    """Unconstrained optimal unsatisfiable subset, abandoned once a hitting set costs more than ``ub``."""
    return ocus(formula, TRIVIALLY_TRUE, strategy, hs, cache, hint, ub=ub, **kwargs)


def _record(trace, it, S, cost, verdict, grown=(), new=()):
    if trace is not None:
        trace.append(TraceRecord(it, tuple(sorted(S)), cost, verdict,
                                 tuple(sorted(grown)), tuple(sorted(new))))
