"""Instance transformations between abduction problems.

Clause universes, the class / representative / extension functions, the
clause-indicator construction ``f`` with its padding companion ``g_c`` and
their composition ``i`` (plain, verification and prioritized variants), the
first-of-first prioritized construction and the definite Horn replication.

Fresh variables are always allocated after the existing ones in a fixed
order: padding hypotheses, padding ``x`` variables, the C block in universe
order, the D block, then role variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable

from .core import (
    AbductionInstance,
    HypothesisSpace,
    Ordering,
    Theory,
    clause_key,
    clause_variables,
    make_clause,
    validate_instance,
)
from . import solver
from .io import serialize_instance

DIALECTS = ("general", "horn", "definite-horn")
VARIANTS = ("plain", "verify", "prio")


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ClauseUniverse:
    dialect: str
    variables: frozenset
    clauses: tuple

    def __len__(self) -> int:
        return len(self.clauses)

    @cached_property
    def index(self) -> dict:
        """Clause -> 1-based position."""
        return {c: i for i, c in enumerate(self.clauses, start=1)}


def pi(variables: Iterable[int], dialect: str = "general") -> ClauseUniverse:
    """All non-tautological clauses over 1 to 3 distinct variables of ``variables``."""
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    vs = sorted(set(variables))
    out = []
    for k in (1, 2, 3):
        for combo in itertools.combinations(vs, k):
            for signs in itertools.product((1, -1), repeat=k):
                positives = signs.count(1)
                if dialect == "horn" and positives > 1:
                    continue
                if dialect == "definite-horn" and positives != 1:
                    continue
                out.append(make_clause(v * s for v, s in zip(combo, signs)))
    return ClauseUniverse(dialect, frozenset(vs), tuple(sorted(out, key=clause_key)))


@dataclass
class ReductionRecord:
    output: AbductionInstance
    c_index: dict = field(default_factory=dict)
    d_index: dict = field(default_factory=dict)
    forced: frozenset = frozenset()
    fresh: dict = field(default_factory=dict)
    var_map: dict = field(default_factory=dict)
    replicas: dict = field(default_factory=dict)
    universe: ClauseUniverse | None = None

    def map_set(self, s: Iterable[int]) -> frozenset:
        """Image of a set of input variables, or the set itself for in-place reductions."""
        if not self.var_map:
            return frozenset(s)
        return frozenset(self.var_map[v] for v in s)

    def map_comments(self) -> list:
        """``map`` lines describing the record, for embedding as comments."""
        out = self.output
        lines = []
        if self.var_map:
            lines.append("map vars " + " ".join(f"{a}:{b}" for a, b in sorted(self.var_map.items())))
        for i in sorted(self.c_index):
            lines.append(f"map clause {i} c={self.c_index[i]} d={self.d_index.get(i, 0)}")
        for i in sorted(self.replicas):
            lines.append(f"map clause {i} replicas=" + ",".join(map(str, self.replicas[i])))
        for role, v in sorted(self.fresh.items()):
            lines.append(f"map role {role} {v} {out.name(v)}")
        if self.forced:
            lines.append("map forced " + " ".join(map(str, sorted(self.forced))))
        return lines


def _fresh_name(taken: set, base: str) -> str:
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    taken.add(name)
    return name


def _is_prio(instance: AbductionInstance, prioritized: bool | None) -> bool:
    return instance.hypotheses.m > 1 if prioritized is None else prioritized


def class_of(instance: AbductionInstance, prioritized: bool | None = None) -> int:
    """Size class: max(|H|, |Var(T) - H|), or with m and every |H_i| when prioritized."""
    r = len(instance.non_hypotheses)
    if _is_prio(instance, prioritized):
        return max([instance.hypotheses.m, r] + [len(c) for c in instance.classes])
    return max(len(instance.H), r)


def repr_instance(c: int, shape: str = "plain") -> AbductionInstance:
    """The representative instance of class ``c``: every clause over its 2c (or c^2 + c) variables."""
    if c < 1:
        raise ReductionError("the representative needs a class of at least 1")
    if shape not in VARIANTS:
        raise ValueError(f"unknown shape {shape!r}")
    names = {}
    if shape == "prio":
        classes = []
        for i in range(1, c + 1):
            ids = range((i - 1) * c + 1, i * c + 1)
            classes.append(frozenset(ids))
            names.update({v: f"h{i}_{j}" for j, v in enumerate(ids, start=1)})
        nh = c * c
    else:
        classes = [frozenset(range(1, c + 1))]
        names.update({v: f"h{v}" for v in range(1, c + 1)})
        nh = c
    xs = range(nh + 1, nh + c + 1)
    names.update({v: f"x{j}" for j, v in enumerate(xs, start=1)})
    universe = pi(range(1, nh + c + 1))
    return AbductionInstance(
        hypotheses=HypothesisSpace(classes=tuple(classes)),
        manifestations=frozenset(),
        theory=Theory(universe.clauses),
        candidate=frozenset() if shape == "verify" else None,
        names=names,
        nvars=nh + c,
    )


def _pad_x(instance: AbductionInstance, n: int, taken: set, next_id: int):
    r = len(instance.non_hypotheses)
    tautologies, names = [], {}
    for j in range(r + 1, n + 1):
        names[next_id] = _fresh_name(taken, f"x{j}")
        tautologies.append((next_id, -next_id))
        next_id += 1
    return tautologies, names, next_id


def exte(instance: AbductionInstance, n: int, prioritized: bool | None = None) -> AbductionInstance:
    """Pad the theory with tautologies on fresh variables until the class is ``n``."""
    if n < class_of(instance, prioritized):
        raise ReductionError(f"cannot extend an instance of class {class_of(instance, prioritized)} to {n}")
    taken = set(instance.names.values())
    tautologies, names, next_id = _pad_x(instance, n, taken, instance.nvars + 1)
    return replace(
        instance,
        theory=instance.theory.extended(tautologies),
        names={**instance.names, **names},
        nvars=next_id - 1,
    )


def transform_gc(instance: AbductionInstance, c: int, variant: str = "plain") -> AbductionInstance:
    """Pad hypotheses (every class, and the number of classes, for ``prio``) and x variables to ``c``."""
    prio = _check_variant(instance, variant)
    if c < class_of(instance, prio):
        raise ReductionError(f"c = {c} is below the instance class {class_of(instance, prio)}")
    taken = set(instance.names.values())
    names = dict(instance.names)
    next_id = instance.nvars + 1
    classes = [set(cls) for cls in instance.classes]
    if prio:
        while len(classes) < c:
            classes.append(set())
    for i, cls in enumerate(classes, start=1):
        for j in range(len(cls) + 1, c + 1):
            names[next_id] = _fresh_name(taken, f"h{i}_{j}" if prio else f"h{j}")
            cls.add(next_id)
            next_id += 1
    tautologies, xnames, next_id = _pad_x(instance, c, taken, next_id)
    names.update(xnames)
    weights = instance.weights
    if weights is not None:
        weights = {h: weights.get(h, 1) for cls in classes for h in cls}
    return AbductionInstance(
        hypotheses=HypothesisSpace(classes=tuple(frozenset(cls) for cls in classes), weights=weights),
        manifestations=instance.M,
        theory=instance.theory.extended(tautologies),
        candidate=None if variant == "plain" else instance.candidate,
        names=names,
        nvars=next_id - 1,
    )


def _check_variant(instance: AbductionInstance, variant: str) -> bool:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant != "prio" and instance.hypotheses.m > 1:
        raise ReductionError(f"the {variant} variant expects a single hypothesis class")
    if variant == "verify" and instance.candidate is None:
        raise ReductionError("the verify variant needs a candidate explanation")
    return variant == "prio"


def canonical_relabel(instance: AbductionInstance):
    """Renumber hypotheses first (class by class), then the other variables.

    Returns the relabelled instance and the old -> new id map.
    """
    order = [h for cls in instance.classes for h in sorted(cls)]
    order += sorted(instance.variables - instance.H)
    mapping = {old: new for new, old in enumerate(order, start=1)}

    def mset(s):
        return None if s is None else frozenset(mapping[v] for v in s)

    theory = Theory.of([[mapping[abs(l)] * (1 if l > 0 else -1) for l in c] for c in instance.theory])
    weights = instance.weights
    out = AbductionInstance(
        hypotheses=HypothesisSpace(
            classes=tuple(mset(c) for c in instance.classes),
            weights=None if weights is None else {mapping[h]: w for h, w in weights.items()},
        ),
        manifestations=mset(instance.M),
        theory=theory,
        candidate=mset(instance.candidate),
        names={mapping[v]: n for v, n in instance.names.items() if v in mapping},
        nvars=len(order),
    )
    return out, mapping


def _check_three(instance: AbductionInstance) -> None:
    for clause in instance.theory.proper_clauses:
        if len(clause_variables(clause)) > 3:
            raise ReductionError(f"clause {clause} has more than three variables")


def transform_f(instance: AbductionInstance, variant: str = "plain") -> ReductionRecord:
    """Clause-indicator construction.

    Every clause gamma_i of the universe over H and Var(T) gets a fresh pair
    (c_i, d_i) of hypotheses; the new theory holds ``-c_i | -d_i`` and
    ``c_i -> gamma_i`` and the manifestations force c_i exactly for the
    clauses of T.
    """
    prio = _check_variant(instance, variant)
    _check_three(instance)
    universe = pi(instance.theory.variables | instance.H)
    k = len(universe)
    base = instance.nvars
    in_t = set(instance.theory.proper_clauses)
    taken = set(instance.names.values())
    names = dict(instance.names)
    c_index, d_index = {}, {}
    clauses = []
    forced = set()
    for i, gamma in enumerate(universe.clauses, start=1):
        ci, di = base + i, base + k + i
        c_index[i], d_index[i] = ci, di
        names[ci] = _fresh_name(taken, f"c{i}")
        forced.add(ci if gamma in in_t else di)
        clauses.append((-ci, -di))
        clauses.append((-ci,) + gamma)
    for i in range(1, k + 1):
        names[d_index[i]] = _fresh_name(taken, f"d{i}")
    indicators = frozenset(c_index.values()) | frozenset(d_index.values())
    if prio:
        classes = (instance.classes[0] | indicators,) + tuple(instance.classes[1:])
    else:
        classes = (instance.H | indicators,)
    forced = frozenset(forced)
    candidate = None
    if variant != "plain" and instance.candidate is not None:
        candidate = instance.candidate | forced
    output = AbductionInstance(
        hypotheses=HypothesisSpace(classes=classes),
        manifestations=instance.M | forced,
        theory=Theory.of(clauses),
        candidate=candidate,
        names=names,
        nvars=base + 2 * k,
    )
    return ReductionRecord(
        output=output,
        c_index=c_index,
        d_index=d_index,
        forced=forced,
        universe=universe,
    )


def transform_i(instance: AbductionInstance, variant: str = "plain") -> ReductionRecord:
    """``f`` after ``g_c`` at the instance's own class, with canonical numbering in between."""
    prio = _check_variant(instance, variant)
    padded = transform_gc(instance, class_of(instance, prio), variant)
    relabelled, mapping = canonical_relabel(padded)
    record = transform_f(relabelled, variant)
    record.var_map = {v: mapping[v] for v in instance.variables}
    record.fresh = {
        f"pad:{padded.name(v)}": mapping[v] for v in sorted(padded.variables - instance.variables)
    }
    return record


def transform_first_of_first(
    instance: AbductionInstance, target: int, clause_set: str = "statement"
) -> ReductionRecord:
    """Move the question about ``target`` onto a fresh hypothesis in a new first class.

    Adds roles t, s, u, v, the class {t, s} in front, manifestations u, v and
    ``target -> u, t -> v, s -> u, s -> v``.  ``clause_set="proof"`` uses the
    alternative ``target -> u, t -> u, t -> v, s -> v``.
    """
    if target not in instance.H:
        raise ReductionError("first-of-first needs a hypothesis as target")
    taken = set(instance.names.values())
    names = dict(instance.names)
    t, s, u, v = range(instance.nvars + 1, instance.nvars + 5)
    for role, var in zip("tsuv", (t, s, u, v)):
        names[var] = _fresh_name(taken, role)
    if clause_set == "statement":
        extra = [(-target, u), (-t, v), (-s, u), (-s, v)]
    elif clause_set == "proof":
        extra = [(-target, u), (-t, u), (-t, v), (-s, v)]
    else:
        raise ValueError(f"unknown clause set {clause_set!r}")
    weights = instance.weights
    if weights is not None:
        weights = {**weights, t: 1, s: 1}
    output = AbductionInstance(
        hypotheses=HypothesisSpace(classes=(frozenset({t, s}),) + tuple(instance.classes), weights=weights),
        manifestations=instance.M | {u, v},
        theory=instance.theory.extended(extra),
        names=names,
        nvars=instance.nvars + 4,
    )
    return ReductionRecord(output=output, fresh={"t": t, "s": s, "u": u, "v": v})


def transform_dh_replicate(instance: AbductionInstance) -> ReductionRecord:
    """Replicate each indicator n + 1 times (n = |H|) for definite Horn theories."""
    theory = instance.theory
    if not theory.is_definite_horn:
        raise ReductionError("replication needs a definite Horn theory")
    if instance.hypotheses.m > 1:
        raise ReductionError("replication expects a single hypothesis class")
    _check_three(instance)
    universe = pi(theory.variables | instance.H, "definite-horn")
    n = len(instance.H)
    in_t = set(theory.proper_clauses)
    taken = set(instance.names.values())
    names = dict(instance.names)
    next_id = instance.nvars + 1
    replicas, clauses, forced = {}, [], set()
    for i, gamma in enumerate(universe.clauses, start=1):
        reps = tuple(range(next_id, next_id + n + 1))
        next_id += n + 1
        for j, r in enumerate(reps, start=1):
            names[r] = _fresh_name(taken, f"c{i}_{j}")
        replicas[i] = reps
        clauses.append(gamma + tuple(-r for r in reps))
        if gamma in in_t:
            forced.update(reps)
    all_reps = frozenset(r for reps in replicas.values() for r in reps)
    forced = frozenset(forced)
    output = AbductionInstance(
        hypotheses=HypothesisSpace(classes=(instance.H | all_reps,)),
        manifestations=instance.M | forced,
        theory=Theory.of(clauses),
        names=names,
        nvars=next_id - 1,
    )
    return ReductionRecord(output=output, forced=forced, replicas=replicas, universe=universe)


def fixed_part(instance: AbductionInstance) -> str:
    """Canonical serialization with the varying part (M, candidate contents) blanked."""
    blank = None if instance.candidate is None else frozenset()
    return serialize_instance(replace(instance, manifestations=frozenset(), candidate=blank))


@dataclass
class EquivalenceReport:
    passed: bool
    transcript: list


REDUCTIONS = {"i": "plain", "i-verify": "verify", "i-prio": "prio", "identity": None}
PROBLEMS = ("exists", "verify", "relevant", "necessary")


def _embed_in_repr(instance: AbductionInstance, c: int, prio: bool):
    """Rename variables onto the ids used by ``repr_instance(c)``; returns (instance, map)."""
    mapping = {}
    if prio:
        for i, cls in enumerate(instance.classes):
            for j, h in enumerate(sorted(cls)):
                mapping[h] = i * c + j + 1
        base = c * c
    else:
        for j, h in enumerate(sorted(instance.H)):
            mapping[h] = j + 1
        base = c
    for j, x in enumerate(sorted(instance.variables - instance.H)):
        mapping[x] = base + j + 1

    def mset(s):
        return None if s is None else frozenset(mapping[v] for v in s)

    embedded = AbductionInstance(
        hypotheses=HypothesisSpace(classes=tuple(mset(cls) for cls in instance.classes)),
        manifestations=mset(instance.M),
        theory=Theory.of([[mapping[abs(l)] * (1 if l > 0 else -1) for l in cl] for cl in instance.theory]),
        candidate=mset(instance.candidate),
        names={mapping[v]: n for v, n in instance.names.items() if v in mapping},
        nvars=max(mapping.values(), default=0),
    )
    return embedded, mapping


def check_representative_equivalence(
    reduction: str,
    problem: str,
    ordering: Ordering,
    instance: AbductionInstance,
    var: int | None = None,
    max_subsets: int = solver.DEFAULT_MAX_SUBSETS,
) -> EquivalenceReport:
    """Answer ``problem`` on r(y) and on r(Repr(Class(y))) paired with y's varying part.

    The varying part is M plus, for verification, the candidate; the fixed
    part is everything else.  Passes iff both answers agree.
    """
    if reduction not in REDUCTIONS:
        raise ValueError(f"unknown reduction {reduction!r}")
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    variant = REDUCTIONS[reduction]
    prio = variant == "prio" or (variant is None and instance.hypotheses.m > 1)
    shape = "prio" if prio else ("verify" if problem == "verify" else "plain")
    if problem == "verify" and instance.candidate is None:
        raise ReductionError("verification needs a candidate explanation on the instance")
    if problem == "verify" and variant == "plain":
        raise ReductionError("the plain reduction drops the candidate; use i-verify or i-prio")
    if problem in ("relevant", "necessary") and var is None:
        var = min(instance.classes[0]) if instance.classes[0] else None
        if var is None:
            raise ReductionError("relevance/necessity needs a hypothesis to ask about")
    c = class_of(instance, prio)
    transcript = [f"reduction={reduction} problem={problem} ordering={ordering.value} class={c}"]

    rep = repr_instance(c, shape)
    if problem == "verify":
        rep = replace(rep, candidate=frozenset())
    if variant is None:
        left, mapping = _embed_in_repr(instance, c, prio)
        mapped_var = mapping[var] if var is not None else None
        right = replace(rep, manifestations=left.M, candidate=left.candidate)
    else:
        record = transform_i(instance, variant)
        left = record.output
        mapped_var = record.var_map[var] if var is not None else None
        rep_record = transform_i(rep, variant)
        same = fixed_part(left) == fixed_part(rep_record.output)
        transcript.append(f"fixed parts identical: {same}")
        right = replace(rep_record.output, manifestations=left.M, candidate=left.candidate)

    a = solver.answer(left, ordering, problem, mapped_var, max_subsets=max_subsets).answer
    b = solver.answer(right, ordering, problem, mapped_var, max_subsets=max_subsets).answer
    transcript.append(f"reduced instance: {a}")
    transcript.append(f"representative fixed part with instance varying part: {b}")
    passed = a == b and (variant is None or same)
    transcript.append("PASS" if passed else "FAIL")
    return EquivalenceReport(passed=passed, transcript=transcript)
