"""Decision procedures over SOL and SOL_min for every ordering.

Every search starts from a cheap core analysis of the instance:

* *forced* hypotheses: manifestations that are hypotheses and never occur
  positively in a proper clause.  Flipping such an atom to false keeps any
  model of T, so it must belong to every explanation.
* *excluded* hypotheses: unit propagation from T plus the forced set makes
  them false, so no explanation contains them.
* *inert* hypotheses: they occur in no proper clause, hence never in a
  subset-minimal explanation.

Subsets of the remaining pool are then explored level by level with
supersets of known inconsistent sets (and, for minimal searches, of known
explanations) pruned.  Minimal explanations under every non-universal
ordering are found among the subset-minimal ones, since all five orderings
are transitive and irredundant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from . import sat
from .core import AbductionInstance, Comparison, Ordering, compare

DEFAULT_MAX_SOLUTIONS = 10_000
DEFAULT_MAX_SUBSETS = 2 ** 20

QUERY_KINDS = ("relevant", "necessary", "dispensable")


class CapExceeded(RuntimeError):
    """An enumeration cap was hit; ``partial`` holds what was found so far."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class QueryError(ValueError):
    pass


@dataclass
class Stats:
    engine_calls: int = 0
    subsets: int = 0

    def as_dict(self) -> dict:
        return {"engine_calls": self.engine_calls, "subsets": self.subsets}


@dataclass
class QueryResult:
    answer: bool
    witness: frozenset | None = None
    stats: Stats = field(default_factory=Stats)


def canonical_order(explanations: Iterable[frozenset]) -> list:
    return sorted(set(explanations), key=lambda s: (len(s), sorted(s)))


class _Engine:
    def __init__(self, instance: AbductionInstance, max_subsets: int = DEFAULT_MAX_SUBSETS):
        self.instance = instance
        self.theory = instance.theory
        self.goals = instance.M
        self.horn = instance.theory.is_definite_horn
        self.max_subsets = max_subsets
        self.stats = Stats()

    # -- membership ---------------------------------------------------------

    def _consistent(self, s: frozenset) -> bool:
        if self.horn:
            return True
        self.stats.engine_calls += 1
        return sat.find_model(self.theory, sorted(s)) is not None

    def _entailed(self, s: frozenset) -> bool:
        self.stats.engine_calls += 1
        if self.horn:
            return self.goals <= sat.forward_chain(self.theory, s)
        return sat.entails(self.theory, sorted(s), self.goals)

    def classify(self, s: frozenset) -> str:
        """One of ``"solution"``, ``"inconsistent"`` or ``"weak"`` (consistent, not entailing)."""
        dead, forced, excluded = self.core[:3]
        if dead or s & excluded:
            return "inconsistent"
        if not self._consistent(s):
            return "inconsistent"
        if not forced <= s:
            return "weak"
        return "solution" if self._entailed(s) else "weak"

    def member(self, s: frozenset) -> bool:
        return self.classify(frozenset(s)) == "solution"

    @cached_property
    def core(self):
        H, T = self.instance.H, self.theory
        positive = {l for c in T.proper_clauses for l in c if l > 0}
        forced = frozenset(m for m in self.goals & H if m not in positive)
        excluded = frozenset()
        dead = False
        if not self.horn:
            self.stats.engine_calls += 1
            implied = sat.implied_literals(T, sorted(forced))
            if implied is None:
                dead = True
            else:
                excluded = frozenset(h for h in H - forced if -h in implied)
                dead = not self._consistent(forced)
        active = {abs(l) for c in T.proper_clauses for l in c}
        free = tuple(sorted(H - forced - excluded))
        inert = frozenset(h for h in free if h not in active)
        return dead, forced, excluded, free, inert

    @property
    def forced(self) -> frozenset:
        return self.core[1]

    # -- level-wise search ---------------------------------------------------

    def _levels(self, pool, blocked: list, max_size: int | None = None):
        """Yield subsets of ``pool`` by size, skipping supersets of ``blocked``.

        ``blocked`` may grow while iterating.  Stops at the first level where
        every candidate is blocked, since then every larger set is too.
        """
        top = len(pool) if max_size is None else min(max_size, len(pool))
        for k in range(top + 1):
            alive = False
            for combo in itertools.combinations(pool, k):
                s = frozenset(combo)
                if any(b <= s for b in blocked):
                    continue
                alive = True
                self.stats.subsets += 1
                if self.stats.subsets > self.max_subsets:
                    raise CapExceeded(f"more than {self.max_subsets} candidate subsets examined")
                yield s
            if not alive:
                return

    def iter_solutions(self) -> Iterator[frozenset]:
        dead, forced, _, free, _ = self.core
        if dead:
            return
        blocked: list = []
        for s in self._levels(free, blocked):
            verdict = self.classify(forced | s)
            if verdict == "inconsistent":
                blocked.append(s)
            elif verdict == "solution":
                yield forced | s

    def iter_subset_minimal(self, max_size: int | None = None) -> Iterator[frozenset]:
        """Subset-minimal explanations in order of increasing size."""
        dead, forced, _, free, inert = self.core
        if dead:
            return
        pool = tuple(h for h in free if h not in inert)
        blocked: list = []
        for s in self._levels(pool, blocked, max_size):
            verdict = self.classify(forced | s)
            if verdict != "weak":
                blocked.append(s)
            if verdict == "solution":
                yield forced | s

    def iter_minimal(self, ordering: Ordering) -> Iterator[frozenset]:
        if ordering is Ordering.UNIVERSAL:
            yield from self.iter_solutions()
            return
        if ordering is Ordering.SUBSET:
            yield from self.iter_subset_minimal()
            return
        if ordering is Ordering.CARD:
            best = None
            for s in self.iter_subset_minimal():
                if best is not None and len(s) > best:
                    return
                best = len(s)
                yield s
            return
        candidates = list(self.iter_subset_minimal())
        for s in candidates:
            if not any(compare(ordering, o, s, self.instance) is Comparison.BETTER for o in candidates):
                yield s

    def shrink(self, s: frozenset) -> frozenset:
        """Drop hypotheses from a solution while it stays a solution."""
        for h in sorted(s - self.forced):
            if self._entailed(s - {h}):
                s = s - {h}
        return s


def _check_subset(instance: AbductionInstance, candidate) -> frozenset:
    candidate = frozenset(candidate)
    if not candidate <= instance.H:
        raise QueryError("candidate explanation is not a subset of H")
    return candidate


def is_solution(instance: AbductionInstance, candidate: Iterable[int]) -> bool:
    """``candidate`` is consistent with T and, together with T, entails M."""
    candidate = _check_subset(instance, candidate)
    if instance.theory.is_definite_horn:
        return instance.M <= sat.forward_chain(instance.theory, candidate)
    return sat.is_consistent(instance.theory, candidate) and sat.entails(
        instance.theory, candidate, instance.M
    )


def exists_explanation(instance: AbductionInstance, max_subsets: int = DEFAULT_MAX_SUBSETS) -> QueryResult:
    engine = _Engine(instance, max_subsets)
    dead, forced, _, free, _ = engine.core
    if dead:
        return QueryResult(False, None, engine.stats)
    full = forced | frozenset(free)
    verdict = engine.classify(full)
    if verdict != "inconsistent":
        # every explanation lies inside ``full`` and entailment is monotone
        if verdict == "solution":
            return QueryResult(True, engine.shrink(full), engine.stats)
        return QueryResult(False, None, engine.stats)
    witness = next(engine.iter_subset_minimal(), None)
    return QueryResult(witness is not None, witness, engine.stats)


def verify_minimal(
    instance: AbductionInstance,
    ordering: Ordering,
    candidate: Iterable[int],
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> QueryResult:
    """Is ``candidate`` a minimal explanation?  A false answer may carry a better one."""
    candidate = _check_subset(instance, candidate)
    engine = _Engine(instance, max_subsets)
    if not engine.member(candidate):
        return QueryResult(False, None, engine.stats)
    if ordering is Ordering.UNIVERSAL:
        return QueryResult(True, candidate, engine.stats)
    if ordering is Ordering.SUBSET:
        # any solution between a smaller solution and the candidate is one too
        for h in sorted(candidate - engine.forced):
            if engine._entailed(candidate - {h}):
                return QueryResult(False, candidate - {h}, engine.stats)
        return QueryResult(True, candidate, engine.stats)
    if ordering is Ordering.CARD:
        limit = len(candidate) - len(engine.forced) - 1
        smaller = next(engine.iter_subset_minimal(max_size=limit), None) if limit >= 0 else None
        return QueryResult(smaller is None, smaller if smaller is not None else candidate, engine.stats)
    for s in engine.iter_subset_minimal():
        if compare(ordering, s, candidate, instance) is Comparison.BETTER:
            return QueryResult(False, s, engine.stats)
    return QueryResult(True, candidate, engine.stats)


def query_variable(
    instance: AbductionInstance,
    ordering: Ordering,
    kind: str,
    h: int,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> QueryResult:
    """Relevance, necessity or dispensability of hypothesis ``h``.

    The witness is a minimal explanation containing ``h`` (relevant), or one
    lacking it (a counterexample to necessity, i.e. a dispensability witness).
    """
    if kind not in QUERY_KINDS:
        raise QueryError(f"unknown query kind {kind!r}")
    if h not in instance.H:
        raise QueryError(f"variable {instance.name(h)} is not a hypothesis")
    engine = _Engine(instance, max_subsets)
    if kind == "relevant":
        for s in engine.iter_minimal(ordering):
            if h in s:
                return QueryResult(True, s, engine.stats)
        return QueryResult(False, None, engine.stats)
    first = None
    counterexample = None
    for s in engine.iter_minimal(ordering):
        if first is None:
            first = s
        if h not in s:
            counterexample = s
            break
    necessary = first is not None and counterexample is None
    if kind == "necessary":
        return QueryResult(necessary, counterexample if not necessary else first, engine.stats)
    return QueryResult(not necessary, counterexample, engine.stats)


def enumerate_minimal(
    instance: AbductionInstance,
    ordering: Ordering,
    cap: int = DEFAULT_MAX_SOLUTIONS,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> list:
    """All minimal explanations in canonical order (all of SOL when unordered)."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    found, _ = enumerate_with_stats(instance, ordering, cap, max_subsets)
    return found


def enumerate_with_stats(instance, ordering, cap=DEFAULT_MAX_SOLUTIONS, max_subsets=DEFAULT_MAX_SUBSETS):
    engine = _Engine(instance, max_subsets)
    found = []
    try:
        for s in engine.iter_minimal(ordering):
            found.append(s)
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} explanations", canonical_order(found[:cap]))
    except CapExceeded as exc:
        if not exc.partial:
            exc.partial = canonical_order(found)
        raise
    return canonical_order(found), engine.stats


def dh_fast_path(instance: AbductionInstance, query: str, h: int | None = None) -> QueryResult:
    """Polynomial answers for definite Horn theories.

    ``exists``: M is derived from all of H.  ``subset-necessary``: additionally
    M is not derived once ``h`` is withheld.
    """
    theory = instance.theory
    if not theory.is_definite_horn:
        raise sat.NotDefiniteHorn("the fast path needs a definite Horn theory")
    stats = Stats()
    stats.engine_calls += 1
    everything = sat.forward_chain(theory, instance.H)
    exists = instance.M <= everything
    if query == "exists":
        return QueryResult(exists, instance.H if exists else None, stats)
    if query != "subset-necessary":
        raise QueryError(f"unknown fast-path query {query!r}")
    if h not in instance.H:
        raise QueryError("subset-necessity needs a hypothesis")
    if not exists:
        return QueryResult(False, None, stats)
    stats.engine_calls += 1
    without = instance.H - {h}
    if instance.M <= sat.forward_chain(theory, without):
        return QueryResult(False, without, stats)
    return QueryResult(True, None, stats)


def answer(
    instance: AbductionInstance,
    ordering: Ordering,
    query: str,
    var: int | None = None,
    candidate: Iterable[int] | None = None,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> QueryResult:
    """Dispatch one of the five decision problems by name."""
    if query == "exists":
        return exists_explanation(instance, max_subsets)
    if query == "verify":
        if candidate is None:
            candidate = instance.candidate
        if candidate is None:
            raise QueryError("verification needs a candidate set")
        return verify_minimal(instance, ordering, candidate, max_subsets)
    if query in QUERY_KINDS:
        if var is None:
            raise QueryError(f"{query} needs a variable")
        return query_variable(instance, ordering, query, var, max_subsets)
    raise QueryError(f"unknown query {query!r}")
