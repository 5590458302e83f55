import pytest

from abduce import checks, oracle
from abduce.core import AbductionInstance, Ordering
from abduce.generate import random_definite_horn, random_instance
from abduce.reductions import transform_first_of_first


@pytest.mark.parametrize("name", ["basic", "basic-order", "add-assumptions", "repr-equivalence"])
def test_lemmas_pass_on_tex(tex, name):
    report = checks.run_lemma(name, tex)
    assert report.passed, report.transcript


def test_lemmas_pass_on_i0(i0):
    for name in ["basic", "basic-order", "add-assumptions", "repr-equivalence", "dh-replicate"]:
        assert checks.run_lemma(name, i0).passed, name


def test_precondition_failure_is_reported(tex):
    report = checks.run_lemma("dh-replicate", tex)
    assert not report.passed
    assert report.transcript[0].startswith("FAIL precondition")


def test_unknown_lemma(tex):
    with pytest.raises(ValueError):
        checks.run_lemma("nope", tex)


def test_basic_on_prioritized(prio):
    assert checks.check_basic(prio).passed
    assert checks.check_basic_order(prio).passed


def test_first_of_first_relevance_on_prio(prio):
    assert checks.check_first_of_first(prio, kinds=("relevant",)).passed


def test_first_of_first_necessity_counterexample():
    # h is in the only explanation, yet s can always stand in for t
    inst = AbductionInstance.from_names(manifestations=["m"], clauses=[["-h", "m"]], classes=[["h"], ["g"]])
    h = inst.lookup("h")
    assert oracle.oracle_answer(inst, Ordering.PRIO_SUBSET, "necessary", h)
    rec = transform_first_of_first(inst, h)
    out, t, s = rec.output, rec.fresh["t"], rec.fresh["s"]
    minimal = set(oracle.brute_minimal(out, Ordering.PRIO_SUBSET).minimal[Ordering.PRIO_SUBSET])
    # {h, s} and {h, t} are both minimal, so t is relevant but not necessary
    assert {h, s} in minimal and {h, t} in minimal
    assert not oracle.oracle_answer(out, Ordering.PRIO_SUBSET, "necessary", t)
    report = checks.check_first_of_first(inst, targets=[h], kinds=("necessary",))
    assert not report.passed
    assert "never necessary" in report.transcript[0]


def test_first_of_first_relevance_counterexample():
    # the target g is a consequence of h, so {h, t} explains u without g
    inst = AbductionInstance.from_names(
        manifestations=["m"], clauses=[["-h", "m"], ["-h", "g"]], classes=[["g"], ["h"]]
    )
    g = inst.lookup("g")
    assert not oracle.oracle_answer(inst, Ordering.PRIO_SUBSET, "relevant", g)
    rec = transform_first_of_first(inst, g)
    assert oracle.oracle_answer(rec.output, Ordering.PRIO_SUBSET, "relevant", rec.fresh["t"])
    report = checks.check_first_of_first(inst, targets=[g], kinds=("relevant",))
    assert "derived from a minimal explanation" in report.transcript[0]


@pytest.mark.parametrize("seed", range(8))
def test_add_assumptions_random(seed):
    inst = random_instance(seed, max_h=4, max_vars=6)
    assert checks.check_add_assumptions(inst).passed


@pytest.mark.parametrize("seed", range(8))
def test_dh_replicate_random(seed):
    inst = random_definite_horn(seed, max_h=3)
    assert checks.check_dh_replicate(inst).passed


def test_report_merge():
    a, b = checks.CheckReport("a"), checks.CheckReport("b")
    b.fail("broken")
    a.merge(b)
    assert not a.passed and a.transcript == ["[b] FAIL broken"]
