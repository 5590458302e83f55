"""Executable checks of the solution-correspondence properties of each reduction.

The untransformed side is always answered by the brute-force oracle; the
transformed side by the oracle when it is small enough, otherwise by the
solver.  Every check returns a :class:`CheckReport` with a readable
transcript.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import oracle, sat, solver
from .core import AbductionInstance, Ordering, with_candidate
from .reductions import (
    ReductionError,
    check_representative_equivalence,
    class_of,
    transform_dh_replicate,
    transform_f,
    transform_first_of_first,
    transform_gc,
)


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    transcript: list = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        self.transcript.append("FAIL " + message)

    def note(self, message: str) -> None:
        self.transcript.append(message)

    def merge(self, other: "CheckReport") -> None:
        self.passed = self.passed and other.passed
        self.transcript.extend(f"[{other.name}] {line}" for line in other.transcript)


def _subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def _show(instance, s) -> str:
    return "{" + ",".join(instance.render(s)) + "}"


def _variant(instance: AbductionInstance) -> str:
    return "prio" if instance.hypotheses.m > 1 else "plain"


def _orderings_for(instance: AbductionInstance) -> tuple:
    base = (Ordering.SUBSET, Ordering.CARD)
    if instance.hypotheses.m > 1:
        base += (Ordering.PRIO_SUBSET, Ordering.PRIO_CARD)
    return base


def check_basic(instance: AbductionInstance, samples: int = 100, seed: int = 0) -> CheckReport:
    """S is an explanation iff S plus the forced indicators is one after ``f``;
    any other indicator choice never yields an explanation."""
    report = CheckReport("basic")
    record = transform_f(instance, _variant(instance))
    out, forced = record.output, record.forced
    sols = set(oracle.brute_solutions(instance).solutions)
    report.note(f"|SOL(I)| = {len(sols)}, |H'| = {len(out.H)}, |T'| = {len(out.theory)}")
    for s in _subsets(instance.H):
        here = s in sols
        there = solver.is_solution(out, s | forced)
        if here != there:
            report.fail(f"S={_show(instance, s)}: {here} in I but {there} after f")
    rng = random.Random(seed)
    k = len(record.c_index)
    hyps = sorted(instance.H)
    for _ in range(samples):
        q = set()
        if rng.random() < 0.5:
            # perturb a few positions of the canonical choice
            q = set(forced)
            for i in rng.sample(range(1, k + 1), rng.randint(1, min(3, k))):
                pair = {record.c_index[i], record.d_index[i]}
                q -= pair
                q |= rng.choice([set(), pair, pair - forced])
        else:
            for i in range(1, k + 1):
                q |= set(rng.choice([(), (record.c_index[i],), (record.d_index[i],)]))
        q = frozenset(q)
        if q == forced:
            continue
        s = frozenset(h for h in hyps if rng.random() < 0.5)
        if solver.is_solution(out, s | q):
            report.fail(f"non-canonical indicator set accepted with S={_show(instance, s)}")
    report.note(f"{2 ** len(instance.H)} correspondences and {samples} indicator samples checked")
    return report


def check_basic_order(instance: AbductionInstance, orderings=None) -> CheckReport:
    """Minimal explanations correspond through ``f`` for meaningful orderings."""
    report = CheckReport("basic-order")
    orderings = orderings or _orderings_for(instance)
    record = transform_f(instance, _variant(instance))
    out, forced = record.output, record.forced
    rep = oracle.brute_minimal(instance, orderings)
    for o in orderings:
        expected = {s | forced for s in rep.minimal[o]}
        got = set(solver.enumerate_minimal(out, o))
        if got != expected:
            report.fail(f"{o.value}: minimal explanations after f differ")
        for s in rep.solutions:
            want = s in set(rep.minimal[o])
            if solver.verify_minimal(out, o, s | forced).answer != want:
                report.fail(f"{o.value}: verification of {_show(instance, s)} disagrees")
        report.note(f"{o.value}: {len(expected)} minimal explanations correspond")
    return report


def check_add_assumptions(instance: AbductionInstance, c: int | None = None, orderings=None) -> CheckReport:
    """Padding hypotheses multiply SOL by 2^padding and leave minimal sets alone."""
    report = CheckReport("add-assumptions")
    variant = _variant(instance)
    if c is None:
        c = class_of(instance, variant == "prio") + 1
    padded = transform_gc(instance, c, variant)
    extra = padded.H - instance.H
    before = oracle.brute_solutions(instance)
    after = oracle.brute_solutions(padded)
    want = len(before.solutions) * 2 ** len(extra)
    report.note(f"c={c}: |SOL(I)|={len(before.solutions)}, |SOL(g_c(I))|={len(after.solutions)}, expected {want}")
    if len(after.solutions) != want:
        report.fail("solution count does not scale with the padding")
    expected = {s | p for s in before.solutions for p in _subsets(extra)}
    if set(after.solutions) != expected:
        report.fail("padded solutions are not the originals with free padding")
    orderings = orderings or _orderings_for(instance)
    oracle.brute_minimal(instance, orderings, report=before)
    oracle.brute_minimal(padded, orderings, report=after)
    for o in orderings:
        if set(before.minimal[o]) != set(after.minimal[o]):
            report.fail(f"{o.value}: minimal explanations changed by padding")
        else:
            report.note(f"{o.value}: {len(before.minimal[o])} minimal explanations unchanged")
    return report


def check_first_of_first(
    instance: AbductionInstance,
    targets=None,
    orderings=(Ordering.PRIO_SUBSET, Ordering.PRIO_CARD),
    kinds=("relevant", "necessary"),
    clause_set: str = "statement",
) -> CheckReport:
    """A target's relevance/necessity equals that of the fresh ``t`` role after the transformation."""
    report = CheckReport("first-of-first")
    targets = sorted(instance.H) if targets is None else targets
    rep_in = oracle.brute_minimal(instance, orderings)
    for h in targets:
        record = transform_first_of_first(instance, h, clause_set)
        out, t = record.output, record.fresh["t"]
        rep_out = oracle.brute_minimal(out, orderings)
        for o in orderings:
            for kind in kinds:
                a = oracle.oracle_answer(instance, o, kind, h, report=rep_in)
                b = oracle.oracle_answer(out, o, kind, t, report=rep_out)
                if a != b:
                    why = _diagnose(instance, rep_in.minimal[o], h, kind, a)
                    report.fail(f"{o.value} {kind} {instance.name(h)}: {a} in I, {b} for t{why}")
    report.note(f"{len(targets)} targets x {len(orderings)} orderings x {len(kinds)} queries")
    return report


def _diagnose(instance, minimal, h, kind, answer_in) -> str:
    if kind == "necessary" and answer_in:
        return " (S plus s stays minimal next to S plus t, so t is never necessary)"
    if any(h not in m and sat.entails(instance.theory, m, {h}) for m in minimal):
        return " (target is derived from a minimal explanation that omits it)"
    return ""


def check_dh_replicate(instance: AbductionInstance, samples: int = 20, seed: int = 0) -> CheckReport:
    """Explanations and cardinality-minimal explanations survive replication."""
    report = CheckReport("dh-replicate")
    record = transform_dh_replicate(instance)
    out, forced = record.output, record.forced
    rep = oracle.brute_minimal(instance, Ordering.CARD)
    sols, minimal = set(rep.solutions), set(rep.minimal[Ordering.CARD])
    n = len(instance.H)
    report.note(f"n={n}, |H'|={len(out.H)}, |SOL(I)|={len(sols)}")
    if not sols:
        report.note("instance has no explanations; the minimality correspondence is vacuous")
    unforced = sorted(out.H - instance.H - forced)
    rng = random.Random(seed)
    for s in _subsets(instance.H):
        if solver.is_solution(out, s | forced) != (s in sols):
            report.fail(f"explanation status of {_show(instance, s)} differs")
        for _ in range(samples if unforced else 0):
            extra = frozenset(rng.sample(unforced, rng.randint(1, min(n, len(unforced))))) if n else frozenset()
            if solver.is_solution(out, s | forced | extra) != (s in sols):
                report.fail(f"{_show(instance, s)} plus {len(extra)} stray replicas disagrees")
        if sols:
            got = solver.verify_minimal(out, Ordering.CARD, s | forced).answer
            if got != (s in minimal):
                report.fail(f"cardinality minimality of {_show(instance, s)} differs")
    return report


def check_repr_equivalence(instance: AbductionInstance, orderings=(Ordering.UNIVERSAL, Ordering.SUBSET)) -> CheckReport:
    """Representative equivalence of the composed reduction for existence and verification."""
    report = CheckReport("repr-equivalence")
    prio = instance.hypotheses.m > 1
    exists_red, verify_red = ("i-prio", "i-prio") if prio else ("i", "i-verify")
    r = check_representative_equivalence(exists_red, "exists", Ordering.UNIVERSAL, instance)
    report.note(" | ".join(r.transcript))
    if not r.passed:
        report.fail("existence")
    if prio:
        orderings = tuple(orderings) + (Ordering.PRIO_SUBSET,)
    for o in orderings:
        for cand in _subsets(instance.H):
            r = check_representative_equivalence(verify_red, "verify", o, with_candidate(instance, cand))
            if not r.passed:
                report.fail(f"verify {o.value} {_show(instance, cand)}: " + " | ".join(r.transcript))
    report.note(f"verification checked for all {2 ** len(instance.H)} candidates")
    return report


LEMMAS = {
    "basic": check_basic,
    "add-assumptions": check_add_assumptions,
    "basic-order": check_basic_order,
    "first-of-first": check_first_of_first,
    "dh-replicate": check_dh_replicate,
    "repr-equivalence": check_repr_equivalence,
}


def run_lemma(name: str, instance: AbductionInstance) -> CheckReport:
    try:
        check = LEMMAS[name]
    except KeyError:
        raise ValueError(f"unknown lemma {name!r}") from None
    try:
        return check(instance)
    except ReductionError as exc:
        report = CheckReport(name)
        report.fail(f"precondition: {exc}")
        return report
