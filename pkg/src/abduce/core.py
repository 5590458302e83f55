"""Abduction instances, clausal theories and preference orderings.

Variables are positive integers and literals follow the DIMACS convention
(``-v`` is the negation of ``v``).  Display names live on the instance, so a
clause is just a canonical tuple of ints.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Clause = tuple  # tuple[int, ...] in canonical literal order
Explanation = frozenset  # frozenset[int]


class InstanceError(ValueError):
    """An abduction instance violates one of its invariants."""


class OrderingError(ValueError):
    """An ordering needs data (weights, classes) the instance does not carry."""


def literal_key(lit: int) -> tuple[int, bool]:
    # ascending variable id, positive before negative
    return abs(lit), lit < 0


def make_clause(lits: Iterable[int]) -> Clause:
    lits = set(lits)
    if 0 in lits:
        raise InstanceError("literal 0 is not allowed inside a clause")
    return tuple(sorted(lits, key=literal_key))


def clause_key(clause: Clause) -> tuple:
    return tuple(literal_key(lit) for lit in clause)


def is_tautology(clause: Clause) -> bool:
    return any(-lit in clause for lit in clause if lit > 0)


def clause_variables(clause: Clause) -> frozenset:
    return frozenset(abs(lit) for lit in clause)


@dataclass(frozen=True)
class TheoryFlags:
    is3cnf: bool
    is_horn: bool
    is_definite_horn: bool


@dataclass(frozen=True)
class Theory:
    """A set of clauses kept in canonical (sorted, duplicate-free) order."""

    clauses: tuple = ()

    @classmethod
    def of(cls, clauses: Iterable[Iterable[int]]) -> "Theory":
        canon = {make_clause(c) for c in clauses}
        return cls(tuple(sorted(canon, key=clause_key)))

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __contains__(self, clause) -> bool:
        return make_clause(clause) in self.clause_set

    @cached_property
    def clause_set(self) -> frozenset:
        return frozenset(self.clauses)

    @cached_property
    def variables(self) -> frozenset:
        return frozenset(abs(lit) for c in self.clauses for lit in c)

    @cached_property
    def proper_clauses(self) -> tuple:
        """Non-tautological clauses; tautologies constrain nothing."""
        return tuple(c for c in self.clauses if not is_tautology(c))

    @cached_property
    def flags(self) -> TheoryFlags:
        is3 = all(len(clause_variables(c)) <= 3 for c in self.clauses)
        positives = [sum(1 for lit in c if lit > 0) for c in self.clauses]
        return TheoryFlags(
            is3cnf=is3,
            is_horn=all(p <= 1 for p in positives),
            is_definite_horn=all(p == 1 for p in positives),
        )

    @property
    def is3cnf(self) -> bool:
        return self.flags.is3cnf

    @property
    def is_horn(self) -> bool:
        return self.flags.is_horn

    @property
    def is_definite_horn(self) -> bool:
        return self.flags.is_definite_horn

    def extended(self, clauses: Iterable[Iterable[int]]) -> "Theory":
        return Theory.of(itertools.chain(self.clauses, clauses))


@dataclass(frozen=True)
class HypothesisSpace:
    """Hypotheses split into priority classes H_1 (most likely) .. H_m."""

    classes: tuple = (frozenset(),)
    weights: Mapping[int, int] | None = None

    @cached_property
    def all(self) -> frozenset:
        return frozenset().union(*self.classes)

    @property
    def m(self) -> int:
        return len(self.classes)

    def class_index(self, var: int) -> int:
        """0-based index of the class holding ``var``."""
        for i, cls in enumerate(self.classes):
            if var in cls:
                return i
        raise KeyError(var)

    def weight(self, members: Iterable[int]) -> int:
        if self.weights is None:
            raise OrderingError("penalization needs hypothesis weights")
        return sum(self.weights[h] for h in members)


@dataclass(frozen=True)
class AbductionInstance:
    hypotheses: HypothesisSpace
    manifestations: frozenset
    theory: Theory
    candidate: frozenset | None = None
    names: Mapping[int, str] = field(default_factory=dict)
    nvars: int = 0

    @property
    def H(self) -> frozenset:
        return self.hypotheses.all

    @property
    def M(self) -> frozenset:
        return self.manifestations

    @property
    def classes(self) -> tuple:
        return self.hypotheses.classes

    @property
    def weights(self):
        return self.hypotheses.weights

    @property
    def variables(self) -> frozenset:
        extra = self.candidate or frozenset()
        return self.theory.variables | self.H | self.M | extra

    @property
    def non_hypotheses(self) -> frozenset:
        """Var(T) minus H, the ``x`` variables of the instance."""
        return self.theory.variables - self.H

    def name(self, var: int) -> str:
        return self.names.get(var, str(var))

    def lookup(self, token: str | int) -> int:
        """Resolve a variable given by display name or numeric id."""
        if isinstance(token, int):
            return token
        for v, n in self.names.items():
            if n == token:
                return v
        try:
            return int(token)
        except ValueError:
            raise KeyError(f"unknown variable {token!r}") from None

    def render(self, members: Iterable[int]) -> list:
        return [self.name(v) for v in sorted(members)]

    @classmethod
    def from_names(
        cls,
        hypotheses: Sequence[str] | None = None,
        manifestations: Sequence[str] = (),
        clauses: Sequence[Sequence[str]] = (),
        classes: Sequence[Sequence[str]] | None = None,
        weights: Mapping[str, int] | None = None,
        candidate: Sequence[str] | None = None,
        extra: Sequence[str] = (),
    ) -> "AbductionInstance":
        """Build and validate an instance from symbolic names.

        Literals are written ``"a"`` / ``"-a"``.  Ids are assigned in order of
        first appearance: hypotheses, then clause variables, then ``extra``.
        """
        if classes is None:
            classes = [list(hypotheses or [])]
        ids: dict[str, int] = {}

        def vid(name: str) -> int:
            return ids.setdefault(name, len(ids) + 1)

        for cls_ in classes:
            for h in cls_:
                vid(h)
        lits = []
        for c in clauses:
            lits.append([-vid(t[1:]) if t.startswith("-") else vid(t) for t in c])
        for name in list(manifestations) + list(extra):
            vid(name)
        raw = cls(
            hypotheses=HypothesisSpace(
                classes=tuple(frozenset(ids[h] for h in c) for c in classes),
                weights=None if weights is None else {ids[k]: w for k, w in weights.items()},
            ),
            manifestations=frozenset(ids[m] for m in manifestations),
            theory=Theory.of(lits),
            candidate=None if candidate is None else frozenset(ids[h] for h in candidate),
            names={v: k for k, v in ids.items()},
        )
        return validate_instance(raw)


def validate_instance(raw: AbductionInstance) -> AbductionInstance:
    """Check the instance invariants and renumber variables densely.

    Raises :class:`InstanceError` on overlapping classes, manifestations
    missing from the theory, nonpositive weights or a candidate outside H.
    """
    classes = tuple(frozenset(c) for c in raw.hypotheses.classes) or (frozenset(),)
    seen: set = set()
    for c in classes:
        if seen & c:
            raise InstanceError(f"hypothesis classes overlap on {sorted(seen & c)}")
        seen |= c
    H = frozenset(seen)
    missing = set(raw.manifestations) - raw.theory.variables
    if missing:
        raise InstanceError(f"manifestation variables {sorted(missing)} do not occur in the theory")
    weights = raw.hypotheses.weights
    if weights is not None:
        if set(weights) != set(H):
            raise InstanceError("weights must be given for exactly the hypotheses")
        bad = [v for v, w in weights.items() if not isinstance(w, int) or w < 1]
        if bad:
            raise InstanceError(f"weights must be integers >= 1 (offending {sorted(bad)})")
    if raw.candidate is not None and not set(raw.candidate) <= H:
        raise InstanceError("candidate explanation is not a subset of H")

    used = sorted(raw.theory.variables | H | set(raw.manifestations))
    if any(v <= 0 for v in used):
        raise InstanceError("variable ids must be positive")
    used_set = set(used)
    nvars = len(used)
    if used == list(range(1, nvars + 1)):
        mapping = None
    else:
        mapping = {old: new for new, old in enumerate(used, start=1)}

    def m(v):
        return v if mapping is None else mapping[v]

    def mset(s):
        return None if s is None else frozenset(m(v) for v in s)

    theory = raw.theory
    if mapping is not None:
        theory = Theory.of([[m(abs(l)) * (1 if l > 0 else -1) for l in c] for c in theory])
    return AbductionInstance(
        hypotheses=HypothesisSpace(
            classes=tuple(mset(c) for c in classes),
            weights=None if weights is None else {m(v): w for v, w in weights.items()},
        ),
        manifestations=mset(raw.manifestations),
        theory=theory,
        candidate=mset(raw.candidate),
        names={m(v): n for v, n in raw.names.items() if v in used_set},
        nvars=nvars,
    )


class Ordering(enum.Enum):
    UNIVERSAL = "none"
    SUBSET = "subset"
    CARD = "card"
    PRIO_SUBSET = "prio-subset"
    PRIO_CARD = "prio-card"
    PENALTY = "penalty"

    @property
    def irredundant(self) -> bool:
        return self is not Ordering.UNIVERSAL


ALL_ORDERINGS = tuple(Ordering)


class Comparison(enum.Enum):
    BETTER = "strictly-better"
    WORSE = "strictly-worse"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


def _space(context) -> HypothesisSpace:
    return context.hypotheses if isinstance(context, AbductionInstance) else context


def preceq(ordering: Ordering, a: frozenset, b: frozenset, context) -> bool:
    """``a`` is at least as likely as ``b`` under ``ordering``."""
    if ordering is Ordering.UNIVERSAL:
        return True
    if ordering is Ordering.SUBSET:
        return a <= b
    if ordering is Ordering.CARD:
        return len(a) <= len(b)
    space = _space(context)
    if ordering is Ordering.PENALTY:
        return space.weight(a) <= space.weight(b)
    # classes are compared from the least likely (H_m) down to H_1
    if ordering is Ordering.PRIO_SUBSET:
        for cls in reversed(space.classes):
            x, y = a & cls, b & cls
            if x != y:
                return x < y
        return True
    if ordering is Ordering.PRIO_CARD:
        va = [len(a & cls) for cls in reversed(space.classes)]
        vb = [len(b & cls) for cls in reversed(space.classes)]
        return va <= vb
    raise ValueError(ordering)


def compare(ordering: Ordering, a, b, context=None) -> Comparison:
    """Compare two explanations; ``context`` is the instance (or its hypothesis space)."""
    if ordering is Ordering.PENALTY and _space(context).weights is None:
        raise OrderingError("penalization needs hypothesis weights")
    if ordering in (Ordering.PRIO_SUBSET, Ordering.PRIO_CARD) and not _space(context).classes:
        raise OrderingError("prioritization needs at least one hypothesis class")
    a, b = frozenset(a), frozenset(b)
    ab = preceq(ordering, a, b, context)
    ba = preceq(ordering, b, a, context)
    if ab and ba:
        return Comparison.EQUIVALENT
    if ab:
        return Comparison.BETTER
    if ba:
        return Comparison.WORSE
    return Comparison.INCOMPARABLE


def strictly_better(ordering: Ordering, a, b, context=None) -> bool:
    return compare(ordering, a, b, context) is Comparison.BETTER


@dataclass
class PropertyReport:
    meaningful: bool
    irredundant: bool
    meaningful_witness: tuple | None = None
    irredundant_witness: tuple | None = None
    exhaustive: bool = True
    checked: int = 0


def _subsets(universe: Sequence[int]):
    for k in range(len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            yield frozenset(combo)


def check_ordering_properties(
    ordering: Ordering,
    universe: Iterable[int],
    budget: int = 100_000,
    classes: Sequence[Iterable[int]] | None = None,
    weights: Mapping[int, int] | None = None,
    seed: int = 0,
) -> PropertyReport:
    """Test the meaningful and irredundant properties of an ordering.

    Exhaustive when the number of cases fits in ``budget``, otherwise
    ``budget`` seeded random cases per property.  Weights are deliberately not
    validated here so that degenerate weightings can be examined.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    universe = sorted(set(universe))
    if classes is None:
        classes = [universe]
    space = HypothesisSpace(classes=tuple(frozenset(c) for c in classes), weights=weights)
    n = len(universe)
    subsets = None
    exhaustive = 4 ** n * max(n, 1) <= budget
    report = PropertyReport(meaningful=True, irredundant=True, exhaustive=exhaustive)

    if exhaustive:
        subsets = list(_subsets(universe))
        meaningful_cases = (
            (a, b, h) for a in subsets for b in subsets for h in universe if h not in a | b
        )
        irredundant_cases = ((a, b) for a in subsets for b in subsets if a < b)
    else:
        rng = random.Random(seed)

        def rand_subset():
            return frozenset(v for v in universe if rng.random() < 0.5)

        def meaningful_gen():
            for _ in range(budget):
                h = rng.choice(universe)
                yield rand_subset() - {h}, rand_subset() - {h}, h

        def irredundant_gen():
            for _ in range(budget):
                b = rand_subset()
                if not b:
                    continue
                drop = rng.choice(sorted(b))
                yield rand_subset() & (b - {drop}), b

        meaningful_cases, irredundant_cases = meaningful_gen(), irredundant_gen()

    for a, b, h in meaningful_cases:
        report.checked += 1
        if compare(ordering, a | {h}, b | {h}, space) is not compare(ordering, a, b, space):
            report.meaningful = False
            report.meaningful_witness = (a, b, h)
            break
    for a, b in irredundant_cases:
        report.checked += 1
        if compare(ordering, a, b, space) is not Comparison.BETTER:
            report.irredundant = False
            report.irredundant_witness = (a, b)
            break
    return report


def with_candidate(instance: AbductionInstance, candidate: Iterable[int] | None) -> AbductionInstance:
    cand = None if candidate is None else frozenset(candidate)
    if cand is not None and not cand <= instance.H:
        raise InstanceError("candidate explanation is not a subset of H")
    return replace(instance, candidate=cand)
