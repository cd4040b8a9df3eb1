import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from shiftlab.core import EMPTY, EventuallyPeriodic, Finite, concat, parse_word, prefix
from shiftlab.shiftspace import (
    FirstEqualsLast,
    Forbidden,
    FullShift,
    SearchBudget,
    Status,
    Step,
    Table,
    ZeroStepExample,
    allowed,
    budget_from_json,
    extension_witnesses,
    in_fin,
    in_inf,
    in_inf_by_prefix,
    induced_value,
    language_up_to,
    length_spectrum,
    membership,
    periodic_points,
    permute_symbols,
    reach,
    spec_from_json,
    spec_to_json,
)

from oracles import (
    all_words,
    brute_allowed_forbidden,
    brute_allowed_step,
    brute_extension_symbols,
    lassos,
    unroll,
)

W = parse_word
B = SearchBudget()
FEL3 = Step(FirstEqualsLast(3))


def random_table(rng, window, support):
    return Table.from_function(window, support, lambda w: rng.random() < 0.7, default=rng.randint(0, 1))


def spec_corpus():
    rng = random.Random(7)
    specs = [Step(FirstEqualsLast(w)) for w in (2, 3, 4)]
    specs += [Step(ZeroStepExample(x0)) for x0 in (0, 1)]
    specs += [Step(random_table(rng, w, 3)) for w in (2, 3, 4) for _ in range(2)]
    specs += [Forbidden(((0, 0),)), Forbidden(((1,), (0, 2, 0))), Forbidden(((0, 1, 2), (2, 2))), FullShift()]
    return specs


def brute_allowed(spec, word):
    if isinstance(spec, Step):
        return brute_allowed_step(spec.pred, spec.pred.window, word)
    if isinstance(spec, Forbidden):
        return brute_allowed_forbidden(set(spec.words), word)
    return True


# -- examples ---------------------------------------------------------------------------


def test_reach():
    assert reach(FEL3) == 3
    assert reach(Forbidden((W("0 1"), (2,)))) == 2
    assert reach(FullShift()) == 1


def test_induced_value():
    pred = FirstEqualsLast(3)
    assert induced_value(pred, W("0 1")) == 1
    assert induced_value(pred, W("0 1 0")) == 1
    assert induced_value(pred, W("0 1 1 0")) == 0


def test_allowed():
    assert not allowed(FEL3, W("0 1 1"))
    assert allowed(FEL3, W("0 1"))
    assert allowed(FullShift(), W("4 4 4 9"))
    assert not allowed(Forbidden(((2,),)), W("0 2 0"))


def test_in_inf():
    assert in_inf(FEL3, EventuallyPeriodic((), W("0 5")))
    assert not in_inf(FEL3, EventuallyPeriodic((), W("0 1 1")))
    assert in_inf(FullShift(), EventuallyPeriodic((), (7,)))
    with pytest.raises(ValueError):
        in_inf(FEL3, Finite((0,)))


def test_extension_witnesses_examples():
    v = extension_witnesses(FEL3, W("0 5"), B)
    assert [a for a, _ in v.witnesses] == [0]
    v = extension_witnesses(FEL3, (0,), B)
    assert v.verified and [a for a, _ in v.witnesses] == list(range(16))
    for a, y in v.witnesses:
        assert concat((0, a), y) == EventuallyPeriodic((), (0, a))
    v = extension_witnesses(FullShift(), (), B)
    assert v.verified and v.count == 16


def test_extension_witnesses_match_oracle():
    # brute force over bounded lassos, at a truncation the oracle can afford
    budget = SearchBudget(truncation=3, threshold=2, period_bound=2)
    for spec in spec_corpus():
        for x in list(all_words(3, 2)) + [W("0 1 0"), W("2 2 1")]:
            got = [a for a, _ in extension_witnesses(spec, x, budget).witnesses]
            if not brute_allowed(spec, x):
                assert got == []
                continue
            brute = brute_extension_symbols(lambda w: brute_allowed(spec, w), x, 3, 3, 2)
            assert got == brute, (spec, x)


def test_in_fin_examples():
    v = in_fin(FEL3, (0,), B)
    assert v.status is Status.VERIFIED and v.count == 16
    v = in_fin(FEL3, W("0 5"), B)
    assert v.status is Status.NOT_VERIFIED and v.counts_at == {8: 1, 16: 1}
    assert in_fin(FEL3, (), B).verified


def test_membership():
    assert membership(FEL3, EventuallyPeriodic((), W("0 5")), B) is True
    v = membership(FEL3, Finite(W("0 5 0")), B)
    assert not v.verified
    assert membership(FullShift(), EMPTY, B).verified


def test_language_up_to():
    lang = language_up_to(FEL3, 2, SearchBudget(truncation=3))
    assert len(lang) == 13 and lang[0] == ()
    assert language_up_to(Forbidden(((0, 0),)), 2, SearchBudget(truncation=2)) == [
        (), (0,), (1,), (0, 1), (1, 0), (1, 1)
    ]
    assert language_up_to(FullShift(), 1, SearchBudget(truncation=2)) == [(), (0,), (1,)]


def test_length_spectrum_examples():
    assert length_spectrum(Step(FirstEqualsLast(4)), 5, B) == {
        0: (), 1: (0,), 2: (0, 0), 3: None, 4: None, 5: None
    }
    assert all(w is not None for w in length_spectrum(FullShift(), 2, B).values())
    assert length_spectrum(Forbidden(((0,),)), 1, B) == {0: (), 1: (1,)}


def test_length_spectrum_matches_direct_search():
    budget = SearchBudget(truncation=4, threshold=2, period_bound=4)
    for spec in spec_corpus():
        spectrum = length_spectrum(spec, 3, budget)
        for size in range(4):
            direct = next(
                (w for w in itertools.product(range(4), repeat=size) if in_fin(spec, w, budget).verified), None
            )
            assert spectrum[size] == direct, (spec, size)


def test_periodic_points_examples():
    two = periodic_points(FEL3, 2, SearchBudget(truncation=2))
    assert two == [
        EventuallyPeriodic((), (0,)),
        EventuallyPeriodic((), (0, 1)),
        EventuallyPeriodic((), (1, 0)),
        EventuallyPeriodic((), (1,)),
    ]
    assert len(periodic_points(FEL3, 1, SearchBudget(truncation=3))) == 3
    assert periodic_points(Forbidden(((0, 0),)), 1, SearchBudget(truncation=2)) == [EventuallyPeriodic((), (1,))]


def test_permute_symbols_examples():
    assert permute_symbols(FEL3, {}) == FEL3
    assert permute_symbols(Forbidden((W("0 1"),)), {0: 1, 1: 0}) == Forbidden((W("1 0"),))
    assert permute_symbols(Step(ZeroStepExample(0)), {0: 1, 1: 0}) == Step(ZeroStepExample(1))
    assert permute_symbols(FEL3, {0: 3, 3: 0}) == FEL3
    with pytest.raises(ValueError):
        permute_symbols(FEL3, {0: 1})
    with pytest.raises(ValueError):
        permute_symbols(FEL3, {0: 1, 1: 1})


def test_permuted_table_is_conjugate():
    rng = random.Random(3)
    table = random_table(rng, 3, 2)
    perm = {1: 4, 4: 1}
    image = permute_symbols(Step(table), perm)
    for w in itertools.product(range(6), repeat=3):
        assert image.pred(tuple(perm.get(s, s) for s in w)) == table(w)


def test_json_round_trip():
    for spec in spec_corpus():
        assert spec_from_json(spec_to_json(spec)) == spec
    assert budget_from_json(B.to_dict()) == B
    with pytest.raises(ValueError):
        spec_from_json({"kind": "mystery"})
    with pytest.raises(ValueError):
        spec_from_json({"kind": "step", "window": 3, "predicate": {"kind": "zero_step_example", "x0": 0}})


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(threshold=1)
    with pytest.raises(ValueError):
        SearchBudget(truncation=0)


# -- properties -------------------------------------------------------------------------------


def test_window_consistency_exhaustive():
    specs = [s for s in spec_corpus() if reach(s) <= 4]
    for pre, per in lassos(3, 3, 3):
        p = EventuallyPeriodic(pre, per)
        for spec in specs:
            assert in_inf(spec, p) == brute_allowed(spec, unroll(pre, per, 64))
            assert in_inf(spec, p) == in_inf_by_prefix(spec, p, 64)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(spec_corpus()), st.lists(st.integers(0, 3), max_size=4).map(tuple))
def test_budget_monotone(spec, x):
    small = SearchBudget(truncation=4, threshold=3, period_bound=2)
    wide = SearchBudget(truncation=8, threshold=3, period_bound=2)
    deep = SearchBudget(truncation=4, threshold=3, period_bound=4)
    base = extension_witnesses(spec, x, small)
    for bigger in (wide, deep):
        v = extension_witnesses(spec, x, bigger)
        assert v.count >= base.count
        assert set(a for a, _ in base.witnesses) <= set(a for a, _ in v.witnesses)
        assert v.verified or not base.verified


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(spec_corpus()), st.lists(st.integers(0, 3), max_size=5).map(tuple))
def test_verified_words_are_allowed_and_witnesses_recheck(spec, x):
    budget = SearchBudget(truncation=6, threshold=3, period_bound=4)
    v = in_fin(spec, x, budget)
    if v.verified:
        for i in range(len(x)):
            for j in range(i + 1, len(x) + 1):
                assert allowed(spec, x[i:j])
        assert sum(in_inf(spec, concat(x + (a,), y)) for a, y in v.witnesses) >= budget.threshold
    for a, y in v.witnesses:
        assert all(s < budget.truncation for s in prefix(y, 16))


@given(st.lists(st.integers(0, 40), max_size=5).map(tuple))
def test_full_shift_everything_extends(x):
    v = in_fin(FullShift(), x, B)
    assert v.verified and v.count == B.truncation
