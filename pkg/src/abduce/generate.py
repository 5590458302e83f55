"""Seeded random instance generators for the oracle suites."""

from __future__ import annotations

import random

from .core import AbductionInstance, HypothesisSpace, Theory, validate_instance


def _names(nh: int, nx: int) -> dict:
    names = {i: f"h{i}" for i in range(1, nh + 1)}
    names.update({nh + j: f"x{j}" for j in range(1, nx + 1)})
    return names


def _partition(rng: random.Random, hyps: list, max_classes: int) -> tuple:
    m = rng.randint(1, max(1, min(max_classes, len(hyps))))
    classes = [set() for _ in range(m)]
    for h in hyps:
        classes[rng.randrange(m)].add(h)
    return tuple(frozenset(c) for c in classes)


def random_instance(
    rng: random.Random | int,
    max_h: int = 6,
    max_vars: int = 8,
    max_clauses: int = 12,
    max_classes: int = 3,
) -> AbductionInstance:
    """A random 3CNF instance with a class partition and weights attached.

    Clauses mix rules ``h -> x``, ``x -> x'`` and arbitrary 1-3 literal
    clauses, which keeps a healthy share of instances with explanations.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    nh = rng.randint(1, max_h)
    nx = rng.randint(1, max(1, max_vars - nh))
    hyps = list(range(1, nh + 1))
    xs = list(range(nh + 1, nh + nx + 1))
    everything = hyps + xs
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        roll = rng.random()
        if roll < 0.45:
            body = rng.sample(hyps, rng.randint(1, min(2, nh)))
            clauses.append([-b for b in body] + [rng.choice(xs)])
        elif roll < 0.65 and nx > 1:
            a, b = rng.sample(xs, 2)
            clauses.append([-a, b])
        else:
            vs = rng.sample(everything, rng.randint(1, min(3, len(everything))))
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    theory = Theory.of(clauses)
    in_theory = sorted(theory.variables)
    xs_in = [x for x in xs if x in theory.variables] or in_theory
    k = rng.randint(1, min(2, len(xs_in)))
    manifestations = frozenset(rng.sample(xs_in, k))
    raw = AbductionInstance(
        hypotheses=HypothesisSpace(
            classes=_partition(rng, hyps, max_classes),
            weights={h: rng.randint(1, 5) for h in hyps},
        ),
        manifestations=manifestations,
        theory=theory,
        names=_names(nh, nx),
    )
    return validate_instance(raw)


def random_definite_horn(
    rng: random.Random | int,
    max_h: int = 6,
    max_x: int = 3,
    max_clauses: int = 8,
) -> AbductionInstance:
    """A random instance whose clauses each have exactly one positive literal (at most 3 variables)."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    nh = rng.randint(1, max_h)
    nx = rng.randint(1, max_x)
    hyps = list(range(1, nh + 1))
    xs = list(range(nh + 1, nh + nx + 1))
    everything = hyps + xs
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        head = rng.choice(xs if rng.random() < 0.8 else everything)
        others = [v for v in everything if v != head]
        body = rng.sample(others, rng.randint(0, min(2, len(others))))
        clauses.append([head] + [-b for b in body])
    theory = Theory.of(clauses)
    pool = [x for x in xs if x in theory.variables] or sorted(theory.variables)
    manifestations = frozenset(rng.sample(pool, rng.randint(1, min(2, len(pool)))))
    raw = AbductionInstance(
        hypotheses=HypothesisSpace(classes=(frozenset(hyps),)),
        manifestations=manifestations,
        theory=theory,
        names=_names(nh, nx),
    )
    return validate_instance(raw)
