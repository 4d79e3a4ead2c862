"""Exact cost-minimal hitting sets under an optional exactly-one side constraint.

This plays the role of the MIP in the implicit hitting-set loop.  Solving
is branch-and-bound: branch on the smallest unhit set, bound with a greedy
packing of pairwise-disjoint unhit sets.  An ``ExactlyOne`` constraint is
handled by enumerating its domain at the root.

Ties are broken by a composite key: among minimum-cost sets the one with the
smallest ``sum(2**i)`` wins, i.e. the set whose characteristic vector is
smallest when higher indices are the more significant bits.  The optimum is
therefore unique for every instance, which makes results reproducible across
incremental and fresh solves.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping


class Timeout(Exception):
    """A deadline (``time.monotonic()`` value) passed during a solve."""


class TriviallyTrue:
    def holds(self, subset) -> bool:
        return True

    def __repr__(self):
        return "TriviallyTrue()"

    def __eq__(self, other):
        return isinstance(other, TriviallyTrue)

    def __hash__(self):
        return hash(TriviallyTrue)


TRIVIALLY_TRUE = TriviallyTrue()


@dataclass(frozen=True)
class ExactlyOne:
    domain: frozenset

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        if not self.domain:
            raise ValueError("ExactlyOne needs a non-empty domain")

    def holds(self, subset) -> bool:
        return len(self.domain.intersection(subset)) == 1


@dataclass(frozen=True)
class HittingSet:
    indices: frozenset
    cost: int
    key: int  # composite (cost, tie-break) ordering key

    def __iter__(self):
        return iter((self.indices, self.cost))


class _AboveCutoff:
    def __repr__(self):
        return "ABOVE_CUTOFF"


ABOVE_CUTOFF = _AboveCutoff()


class HittingSetSolver:
    """Persistent collection of sets to hit over a fixed, weighted universe.

    Sets only ever get added.  ``set_active`` restricts which elements a
    solution may use (elements outside the mask behave as if they had
    infinite weight); stored sets are kept untouched.
    """

    def __init__(self, universe: Iterable[int], weights: Mapping[int, int],
                 constraint=TRIVIALLY_TRUE):
        self.universe = frozenset(universe)
        missing = [i for i in self.universe if i not in weights]
        if missing:
            raise ValueError(f"no weight for universe element(s) {sorted(missing)[:5]}")
        self.weights = {i: int(weights[i]) for i in self.universe}
        self.shift = (max(self.universe) + 1) if self.universe else 0
        self._W = {i: (w << self.shift) | (1 << i) for i, w in self.weights.items()}
        self.sets: list[frozenset] = []
        self._seen: set[frozenset] = set()
        self.active = self.universe
        self.constraint = constraint
        self._last = None
        self.solves = 0
        self.nodes = 0

    # -- instance updates -------------------------------------------------

    def add_set(self, H: Iterable[int]) -> bool:
        """Store a set to hit; returns False if it was already stored."""
        H = frozenset(H)
        if not H <= self.universe:
            raise ValueError(f"set contains elements outside the universe: {sorted(H - self.universe)}")
        if H in self._seen:
            return False
        self._seen.add(H)
        self.sets.append(H)
        return True

    def set_active(self, active: Iterable[int]) -> None:
        active = frozenset(active)
        if not active <= self.universe:
            raise ValueError("active mask must be a subset of the universe")
        self.active = active

    def key_of(self, subset: Iterable[int]) -> int:
        return sum(self._W[i] for i in subset)

    def dump(self) -> str:
        return "".join(" ".join(map(str, sorted(H))) + "\n" for H in self.sets)

    # -- solving ----------------------------------------------------------

    def solve(self, deadline: float | None = None, cutoff: int | None = None) -> HittingSet | None:
        """Return the optimal hitting set of the active elements, or ``None`` if infeasible.

        With ``cutoff`` (an ordering key), an optimum whose key lies above it
        is not searched for: :data:`ABOVE_CUTOFF` is returned instead.
        """
        self.solves += 1
        active, constraint = self.active, self.constraint
        lower = 0
        last = self._last
        if last is not None and last[0] == active and last[1] == constraint:
            _, _, n_seen, prev = last
            if prev is None:
                return None
            if prev is not ABOVE_CUTOFF:
                if all(not H.isdisjoint(prev.indices) for H in self.sets[n_seen:]):
                    self._last = (active, constraint, len(self.sets), prev)
                    return prev if cutoff is None or prev.key <= cutoff else ABOVE_CUTOFF
                lower = prev.key
        result = self._solve(active, constraint, lower, deadline, cutoff)
        if result is ABOVE_CUTOFF:
            self._last = None
        else:
            self._last = (active, constraint, len(self.sets), result)
        return result

    def _result(self, chosen) -> HittingSet:
        s = frozenset(chosen)
        return HittingSet(s, sum(self.weights[i] for i in s), self.key_of(s))

    def _solve(self, active, constraint, lower, deadline, cutoff=None):
        restricted = []
        for H in self.sets:
            R = H & active
            if not R:
                return None
            restricted.append(R)
        bb = _BranchAndBound(self._W, lower, deadline)
        if cutoff is not None:
            bb.best_key = cutoff + 1
        if isinstance(constraint, ExactlyOne):
            domain = constraint.domain & active
            if not domain:
                return None
            W = self._W
            candidates = []
            for d in domain:
                residual = []
                for R in restricted:
                    if d in R:
                        continue
                    R = R - domain
                    if not R:
                        break
                    residual.append(R)
                else:
                    residual = _minimal_sets(residual)
                    candidates.append((W[d] + _packing_bound(residual, W), d, residual))
            candidates.sort()
            for bound, d, residual in candidates:
                if bound >= bb.best_key:
                    break
                bb.run(residual, W[d], [d])
                if bb.done:
                    break
        else:
            bb.run(_minimal_sets(restricted), 0, [])
        self.nodes += bb.nodes
        if bb.best is None:
            return None if cutoff is None else self._infeasible_or_above(restricted, active, constraint)
        return self._result(bb.best)

    def _infeasible_or_above(self, restricted, active, constraint):
        # Every set is hit by ``active`` already; only the domain can fail.
        if isinstance(constraint, ExactlyOne):
            domain = constraint.domain & active
            if not any(all(d in R or R - domain for R in restricted) for d in domain):
                return None
        return ABOVE_CUTOFF


def _minimal_sets(sets):
    """Drop duplicates and strict supersets (they are hit whenever a subset is)."""
    uniq = sorted(set(sets), key=len)
    if len(uniq) > 400:
        return uniq
    kept = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def _packing_bound(sets, W) -> int:
    used = set()
    bound = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            bound += min(W[e] for e in s)
            used.update(s)
    return bound


class _BranchAndBound:
    def __init__(self, W, lower, deadline):
        self.W = W
        self.lower = lower
        self.deadline = deadline
        self.best = None
        self.best_key = float("inf")
        self.nodes = 0
        self.done = False

    def run(self, sets, base, chosen):
        self._rec(sets, base, chosen)

    def _rec(self, sets, key, chosen):
        if self.done:
            return
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise Timeout
        if not sets:
            if key < self.best_key:
                self.best_key = key
                self.best = list(chosen)
                # nothing can beat a solution that meets a known lower bound
                if key <= self.lower:
                    self.done = True
            return
        W = self.W
        if key + _packing_bound(sets, W) >= self.best_key:
            return
        pivot = min(sets, key=len)
        excluded = set()
        for e in sorted(pivot, key=W.__getitem__):
            if key + W[e] >= self.best_key:
                break
            rest = []
            feasible = True
            for s in sets:
                if e in s:
                    continue
                if excluded and not excluded.isdisjoint(s):
                    s = s - excluded
                    if not s:
                        feasible = False
                        break
                rest.append(s)
            if feasible:
                chosen.append(e)
                self._rec(rest, key + W[e], chosen)
                chosen.pop()
                if self.done:
                    return
            excluded.add(e)


def brute_force_hitting_set(sets, weights, active, constraint=TRIVIALLY_TRUE):
    """Exhaustive reference solver (small instances only); same tie-break as the solver."""
    elems = sorted(active)
    shift = (max(weights) + 1) if weights else 0
    best = None
    for mask in range(1 << len(elems)):
        S = frozenset(e for b, e in enumerate(elems) if mask >> b & 1)
        if not constraint.holds(S):
            continue
        if any(S.isdisjoint(H) for H in sets):
            continue
        c = sum(weights[i] for i in S)
        key = (c << shift) + sum(1 << i for i in S)
        if best is None or key < best[2]:
            best = (S, c, key)
    return best
