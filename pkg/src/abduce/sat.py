"""Satisfiability, consistency and entailment for clausal theories.

A small DPLL search (two watched literals, unit propagation, chronological
backtracking) plus linear-time forward chaining for definite Horn theories.
Branching is deterministic: lowest unassigned variable, ``True`` first.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable

from .core import Theory, TheoryFlags, is_tautology

Assignment = dict  # dict[int, bool]


class NotDefiniteHorn(ValueError):
    pass


class _DPLL:
    def __init__(self, clauses: Iterable[tuple]):
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        variables = set()
        for c in clauses:
            if not c:
                self.empty = True
                continue
            if len(c) == 1:
                self.units.append(c[0])
            else:
                self.clauses.append(list(c))
            variables.update(abs(l) for l in c)
        self.order = sorted(variables)
        self.value: dict[int, bool] = {}
        self.watches: dict[int, list[int]] = defaultdict(list)
        for i, c in enumerate(self.clauses):
            self.watches[c[0]].append(i)
            self.watches[c[1]].append(i)
        self.trail: list[int] = []
        self.qhead = 0

    def lit_value(self, lit: int):
        v = self.value.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def enqueue(self, lit: int) -> bool:
        cur = self.lit_value(lit)
        if cur is not None:
            return cur
        self.value[abs(lit)] = lit > 0
        self.trail.append(lit)
        return True

    def propagate(self) -> bool:
        value = self.value
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches.get(false_lit)
            if not ws:
                continue
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value.get(abs(first))
                if fv is not None and fv == (first > 0):
                    ws[j] = ci
                    i += 1
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lv = value.get(abs(c[k]))
                    if lv is None or lv == (c[k] > 0):
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(ci)
                        break
                else:
                    ws[j] = ci
                    i += 1
                    j += 1
                    if fv is not None:
                        # every literal false
                        while i < n:
                            ws[j] = ws[i]
                            i += 1
                            j += 1
                        del ws[j:]
                        return False
                    self.enqueue(first)
                    continue
                i += 1
            del ws[j:]
        return True

    def undo(self, size: int) -> None:
        for lit in self.trail[size:]:
            del self.value[abs(lit)]
        del self.trail[size:]
        self.qhead = min(self.qhead, size)

    def start(self, assumptions: Iterable[int]) -> bool:
        if self.empty:
            return False
        for lit in list(self.units) + list(assumptions):
            if not self.enqueue(lit):
                return False
        return self.propagate()

    def solve(self, assumptions: Iterable[int] = ()) -> Assignment | None:
        if not self.start(assumptions):
            return None
        # decision stack entries: (trail size before decision, literal, flipped)
        stack: list[tuple[int, int, bool]] = []
        pos = 0
        order = self.order
        while True:
            while pos < len(order) and order[pos] in self.value:
                pos += 1
            if pos == len(order):
                return dict(self.value)
            var = order[pos]
            stack.append((len(self.trail), var, False))
            self.enqueue(var)
            while not self.propagate():
                while stack and stack[-1][2]:
                    stack.pop()
                if not stack:
                    return None
                size, lit, _ = stack.pop()
                self.undo(size)
                stack.append((size, -lit, True))
                self.enqueue(-lit)
                pos = 0


def _clauses(theory: Theory | Iterable[tuple]):
    if isinstance(theory, Theory):
        return theory.proper_clauses
    return [c for c in theory if not is_tautology(c)]


def solve(clauses, assumptions: Iterable[int] = ()) -> Assignment | None:
    """Return a satisfying assignment extending ``assumptions`` (literals), or None."""
    return _DPLL(_clauses(clauses)).solve(assumptions)


def implied_literals(theory, assumptions: Iterable[int] = ()) -> frozenset | None:
    """Literals forced by unit propagation alone; None on a propagation conflict."""
    engine = _DPLL(_clauses(theory))
    if not engine.start(assumptions):
        return None
    return frozenset(engine.trail)


def find_model(theory, assumptions: Iterable[int] = ()) -> Assignment | None:
    """A model of ``theory`` in which every assumed hypothesis is true."""
    assumptions = list(assumptions)
    model = solve(theory, assumptions)
    if model is not None:
        for v in assumptions:
            model.setdefault(v, True)
    return model


def is_consistent(theory, assumptions: Iterable[int] = ()) -> bool:
    return find_model(theory, assumptions) is not None


def entails(theory, assumptions: Iterable[int], goals: Iterable[int]) -> bool:
    """theory plus the assumed atoms entails every goal atom."""
    goals = sorted(set(goals))
    if not goals:
        return True
    clauses = list(_clauses(theory))
    clauses.append(tuple(-g for g in goals))
    return _DPLL(clauses).solve(assumptions) is None


def forward_chain(theory: Theory, assumptions: Iterable[int]) -> frozenset:
    """Atoms true in the least model of a definite Horn theory plus ``assumptions``."""
    if not theory.is_definite_horn:
        raise NotDefiniteHorn("forward chaining needs a definite Horn theory")
    missing = []
    watchers = defaultdict(list)
    agenda = list(assumptions)
    for i, c in enumerate(theory.clauses):
        body = {-l for l in c if l < 0}
        head = next(l for l in c if l > 0)
        missing.append(len(body))
        for b in body:
            watchers[b].append((i, head))
        if not body:
            agenda.append(head)
    derived = set()
    while agenda:
        atom = agenda.pop()
        if atom in derived:
            continue
        derived.add(atom)
        for i, head in watchers.get(atom, ()):
            missing[i] -= 1
            if missing[i] == 0 and head not in derived:
                agenda.append(head)
    return frozenset(derived)


def classify_theory(theory: Theory) -> TheoryFlags:
    return theory.flags
