"""Brute-force reference answers by explicit subset enumeration.

Membership is decided from a full truth table of the theory, built with
numpy bit operations, and never touches the SAT engine or the solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import AbductionInstance, Comparison, Ordering, compare
from .solver import CapExceeded

DEFAULT_CAP = 2 ** 16
MAX_TABLE_VARS = 20


@dataclass
class OracleReport:
    solutions: list
    minimal: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)


class TruthTable:
    """All models of a theory over its own variables (plus the manifestations)."""

    def __init__(self, instance: AbductionInstance):
        theory = instance.theory
        self.vars = sorted({abs(l) for c in theory.proper_clauses for l in c} | set(instance.M))
        if len(self.vars) > MAX_TABLE_VARS:
            raise CapExceeded(f"truth table over {len(self.vars)} variables exceeds {MAX_TABLE_VARS}")
        self.bit = {v: 1 << i for i, v in enumerate(self.vars)}
        rows = np.arange(1 << len(self.vars), dtype=np.int64)
        ok = np.ones(rows.shape, dtype=bool)
        for c in theory.proper_clauses:
            pos = sum(self.bit[l] for l in c if l > 0)
            neg = sum(self.bit[-l] for l in c if l < 0)
            ok &= ((rows & pos) != 0) | ((~rows & neg) != 0)
        self.models = rows[ok]
        self.goal_mask = self.mask(instance.M)

    def mask(self, atoms: Iterable[int]) -> int:
        return sum(self.bit[a] for a in atoms if a in self.bit)

    def consistent(self, s) -> bool:
        m = self.mask(s)
        return bool(np.any((self.models & m) == m))

    def is_solution(self, s) -> bool:
        m = self.mask(s)
        sel = self.models[(self.models & m) == m]
        if sel.size == 0:
            return False
        return bool(np.all((sel & self.goal_mask) == self.goal_mask))


def _subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def brute_solutions(instance: AbductionInstance, cap: int = DEFAULT_CAP) -> OracleReport:
    """Every explanation, found by testing all 2^|H| subsets."""
    if 2 ** len(instance.H) > cap:
        raise CapExceeded(f"2^{len(instance.H)} subsets exceed the oracle cap {cap}")
    table = TruthTable(instance)
    sols = [s for s in _subsets(instance.H) if table.is_solution(s)]
    return OracleReport(
        solutions=sols,
        counters={"subsets": 2 ** len(instance.H), "models": int(table.models.size)},
    )


def minimal_of(solutions: list, ordering: Ordering, context) -> list:
    return [
        s
        for s in solutions
        if not any(compare(ordering, o, s, context) is Comparison.BETTER for o in solutions)
    ]


def brute_minimal(
    instance: AbductionInstance,
    ordering: Ordering | Iterable[Ordering],
    cap: int = DEFAULT_CAP,
    report: OracleReport | None = None,
) -> OracleReport:
    """SOL filtered by pairwise strict comparison, for one or several orderings."""
    if report is None:
        report = brute_solutions(instance, cap)
    orderings = [ordering] if isinstance(ordering, Ordering) else list(ordering)
    for o in orderings:
        report.minimal[o] = minimal_of(report.solutions, o, instance)
    return report


def oracle_answer(
    instance: AbductionInstance,
    ordering: Ordering,
    query: str,
    var: int | None = None,
    candidate: Iterable[int] | None = None,
    report: OracleReport | None = None,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Answer one of the five decision problems straight from the definitions."""
    if report is None or ordering not in report.minimal:
        report = brute_minimal(instance, ordering, cap, report)
    sols = report.solutions
    minimal = report.minimal[ordering]
    if query == "exists":
        return bool(sols)
    if query == "verify":
        if candidate is None:
            candidate = instance.candidate
        return frozenset(candidate) in set(minimal)
    if query == "relevant":
        return any(var in s for s in minimal)
    if query == "necessary":
        return bool(sols) and all(var in s for s in minimal)
    if query == "dispensable":
        return not sols or any(var not in s for s in minimal)
    raise ValueError(f"unknown query {query!r}")
