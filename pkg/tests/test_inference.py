import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corules import (
    BOUNDEDNESS,
    CLOSEDNESS,
    CONSISTENCY,
    CheckReport,
    Failure,
    InferenceSystem,
    JudgmentSet,
    Rule,
    apply_step,
    bounded_coinduction_check,
    coind_interpretation,
    derivation_rounds,
    gen_interpretation,
    ind_interpretation,
    is_closed,
    is_consistent,
    restrict,
    rule,
)

from util import (
    coaxioms_for,
    coind_oracle,
    gen_oracle,
    ind_oracle,
    kleene_iterations,
    random_system,
    step_by_scan,
)

A, B, C = 0, 1, 2


def abc_system(corules=()):
    return InferenceSystem(3, (rule(A), rule(B, A), rule(C, C)), corules,
                           labels=("a", "b", "c"))


def members(s: JudgmentSet) -> set[int]:
    return set(s)


class TestJudgmentSet:
    def test_exact_set_operations(self):
        s = JudgmentSet.of(5, [0, 3])
        t = JudgmentSet.of(5, [3, 4])
        assert members(s | t) == {0, 3, 4}
        assert members(s & t) == {3}
        assert members(s - t) == {0}
        assert (s & t).is_subset_of(s) and (s & t) <= t
        assert s != t and s == JudgmentSet.of(5, [3, 0])
        assert len(s) == 2 and 3 in s and 1 not in s

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            JudgmentSet.of(3, [0]) | JudgmentSet.of(4, [0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            JudgmentSet.of(3, [3])

    def test_iteration_is_ascending(self):
        assert JudgmentSet.of(8, [5, 1, 7]).ids() == (1, 5, 7)


class TestSystemValidation:
    def test_rule_ids_must_be_in_range(self):
        with pytest.raises(ValueError):
            InferenceSystem(2, (rule(2),))
        with pytest.raises(ValueError):
            InferenceSystem(2, (rule(0, 5),))

    def test_labels_must_cover_and_be_unique(self):
        with pytest.raises(ValueError):
            InferenceSystem(2, (), labels=("a",))
        with pytest.raises(ValueError):
            InferenceSystem(2, (), labels=("a", "a"))

    def test_label_lookup(self):
        sys_ = abc_system()
        assert sys_.label_of(B) == "b"
        assert str(sys_.judgment(C)) == "c"


class TestApplyStep:
    def test_no_rules_empty_image(self):
        sys_ = InferenceSystem(2, ())
        assert members(apply_step(sys_, JudgmentSet.of(2, [0]))) == set()

    def test_axioms_fire_on_empty_set(self):
        sys_ = InferenceSystem(2, (rule(0),))
        assert members(apply_step(sys_, JudgmentSet.empty(2))) == {0}

    def test_hand_evaluated_image(self):
        sys_ = abc_system()
        s = JudgmentSet.of(3, [A, C])
        result = apply_step(sys_, s)
        assert members(result) == {A, B, C}
        assert members(result) == set(step_by_scan(sys_, frozenset([A, C])))

    def test_corules_included_when_flagged(self):
        sys_ = InferenceSystem(2, (), (rule(1),))
        empty = JudgmentSet.empty(2)
        assert members(apply_step(sys_, empty)) == set()
        assert members(apply_step(sys_, empty, use_corules=True)) == {1}

    @settings(max_examples=60)
    @given(st.integers(0, 2 ** 31), st.integers(0, 2 ** 31))
    def test_monotone(self, seed, pick):
        rng = random.Random(seed)
        sys_ = random_system(rng, max_universe=7, max_rules=12)
        n = sys_.universe_size
        t_bits = pick % (1 << n)
        s_bits = t_bits & (pick >> n)  # arbitrary subset of t
        s, t = JudgmentSet(n, s_bits), JudgmentSet(n, t_bits)
        assert apply_step(sys_, s) <= apply_step(sys_, t)
        assert apply_step(sys_, s, use_corules=True) <= apply_step(sys_, t, use_corules=True)

    @settings(max_examples=60)
    @given(st.integers(0, 2 ** 31), st.integers(0, 2 ** 31))
    def test_agrees_with_rule_scan(self, seed, pick):
        rng = random.Random(seed)
        sys_ = random_system(rng, max_universe=7, max_rules=12, max_corules=4)
        n = sys_.universe_size
        s = JudgmentSet(n, pick % (1 << n))
        for flag in (False, True):
            assert members(apply_step(sys_, s, use_corules=flag)) == set(
                step_by_scan(sys_, frozenset(s), use_corules=flag))


class TestIndInterpretation:
    def test_abc_matches_enumeration_oracle(self):
        sys_ = abc_system()
        assert ind_interpretation(sys_) == ind_oracle(sys_)
        assert members(ind_interpretation(sys_)) == {A, B}

    def test_no_rules(self):
        assert members(ind_interpretation(InferenceSystem(3, ()))) == set()

    def test_corule_flag_extends_reach(self):
        sys_ = abc_system(corules=(rule(C),))
        assert members(ind_interpretation(sys_)) == {A, B}
        assert members(ind_interpretation(sys_, use_corules=True)) == {A, B, C}


class TestCoindInterpretation:
    def test_abc_matches_enumeration_oracle(self):
        sys_ = abc_system()
        assert coind_interpretation(sys_) == coind_oracle(sys_)
        assert members(coind_interpretation(sys_)) == {A, B, C}

    def test_no_rules(self):
        assert members(coind_interpretation(InferenceSystem(3, ()))) == set()

    def test_corules_never_used(self):
        sys_ = InferenceSystem(1, (), (rule(0),))
        assert members(coind_interpretation(sys_)) == set()


class TestRestrict:
    def test_full_universe_keeps_rules(self):
        sys_ = abc_system(corules=(rule(C),))
        restricted = restrict(sys_, JudgmentSet.full(3))
        assert restricted.rules == sys_.rules
        assert restricted.corules == ()

    def test_empty_set_drops_all(self):
        assert restrict(abc_system(), JudgmentSet.empty(3)).rules == ()

    def test_keeps_only_matching_conclusions(self):
        sys_ = InferenceSystem(3, (rule(A), rule(C, C)))
        restricted = restrict(sys_, JudgmentSet.of(3, [A]))
        assert restricted.rules == (rule(A),)


class TestGenInterpretation:
    def test_empty_corules_collapse_to_ind(self):
        rng = random.Random(7)
        for _ in range(30):
            sys_ = random_system(rng, max_universe=6, max_rules=10)
            assert gen_interpretation(sys_) == ind_interpretation(sys_)

    def test_per_judgment_coaxioms_collapse_to_coind(self):
        rng = random.Random(8)
        for _ in range(30):
            sys_ = coaxioms_for(random_system(rng, max_universe=6, max_rules=10))
            assert gen_interpretation(sys_) == coind_interpretation(sys_)

    def test_self_loop_cut_without_corule(self):
        assert members(gen_interpretation(abc_system())) == {A, B}
        assert members(gen_interpretation(abc_system(corules=(rule(C),)))) == {A, B, C}

    def test_matches_enumeration_oracle(self):
        rng = random.Random(9)
        for _ in range(40):
            sys_ = random_system(rng, max_universe=6, max_rules=10, max_corules=4)
            assert gen_interpretation(sys_) == gen_oracle(sys_)

    def test_is_fixed_point_of_restricted_step(self):
        rng = random.Random(10)
        for _ in range(40):
            sys_ = random_system(rng, max_universe=6, max_rules=10, max_corules=4)
            bound = ind_interpretation(sys_, use_corules=True)
            restricted = restrict(sys_, bound)
            gen = gen_interpretation(sys_)
            assert apply_step(restricted, gen) == gen

    def test_sandwich(self):
        rng = random.Random(11)
        for _ in range(40):
            sys_ = random_system(rng, max_universe=6, max_rules=10, max_corules=4)
            gen = gen_interpretation(sys_)
            assert ind_interpretation(sys_) <= gen
            assert gen <= coind_interpretation(sys_)


class TestKleeneBehavior:
    def test_iteration_bound_holds(self):
        rng = random.Random(12)
        for _ in range(60):
            sys_ = random_system(rng, max_universe=8, max_rules=14, max_corules=4)
            limit = sys_.universe_size + 1
            assert kleene_iterations(sys_, False, downward=False) <= limit
            assert kleene_iterations(sys_, True, downward=False) <= limit
            assert kleene_iterations(sys_, False, downward=True) <= limit

    def test_derivation_rounds_decrease_toward_premises(self):
        rng = random.Random(13)
        for _ in range(40):
            sys_ = random_system(rng, max_universe=7, max_rules=12)
            rounds = derivation_rounds(sys_)
            ind = ind_interpretation(sys_)
            assert {j for j, r in enumerate(rounds) if r is not None} == members(ind)
            for j in ind:
                fired = [r for r in sys_.rules if r.conclusion == j and all(
                    rounds[p] is not None and rounds[p] < rounds[j]
                    for p in r.premises)]
                assert fired, "no rule explains the recorded round"

    def test_rule_order_insensitive(self):
        rng = random.Random(14)
        for _ in range(30):
            sys_ = random_system(rng, max_universe=6, max_rules=10, max_corules=4)
            shuffled_rules = list(sys_.rules)
            shuffled_corules = list(sys_.corules)
            rng.shuffle(shuffled_rules)
            rng.shuffle(shuffled_corules)
            permuted = InferenceSystem(sys_.universe_size, tuple(shuffled_rules),
                                       tuple(shuffled_corules))
            assert ind_interpretation(sys_) == ind_interpretation(permuted)
            assert ind_interpretation(sys_, True) == ind_interpretation(permuted, True)
            assert coind_interpretation(sys_) == coind_interpretation(permuted)
            assert gen_interpretation(sys_) == gen_interpretation(permuted)

    def test_duplicate_rules_are_inert(self):
        sys_ = abc_system()
        doubled = InferenceSystem(3, sys_.rules + sys_.rules)
        assert ind_interpretation(sys_) == ind_interpretation(doubled)
        assert coind_interpretation(sys_) == coind_interpretation(doubled)


class TestIsClosed:
    def test_lfp_is_closed(self):
        rng = random.Random(15)
        for _ in range(30):
            sys_ = random_system(rng, max_universe=6, max_rules=10)
            assert is_closed(sys_, ind_interpretation(sys_)).ok

    def test_axiom_violation_reported_with_rule(self):
        sys_ = InferenceSystem(1, (rule(0),))
        report = is_closed(sys_, JudgmentSet.empty(1))
        assert not report.ok
        assert report.failures == (Failure(0, CLOSEDNESS, rule(0)),)

    def test_full_universe_is_closed(self):
        rng = random.Random(16)
        for _ in range(20):
            sys_ = random_system(rng, max_universe=6, max_rules=10)
            assert is_closed(sys_, JudgmentSet.full(sys_.universe_size)).ok

    def test_failures_ordered_by_judgment_then_rule(self):
        sys_ = InferenceSystem(3, (rule(2), rule(1), rule(2, 1)))
        report = is_closed(sys_, JudgmentSet.of(3, [1]))
        assert [(f.judgment, f.rule) for f in report.failures] == [
            (2, rule(2)), (2, rule(2, 1))]


class TestIsConsistent:
    def test_gfp_is_consistent_with_witnesses(self):
        rng = random.Random(17)
        for _ in range(30):
            sys_ = random_system(rng, max_universe=6, max_rules=10)
            gfp = coind_interpretation(sys_)
            report = is_consistent(sys_, gfp)
            assert report.ok
            assert set(report.witnesses) == members(gfp)
            for j, witness in report.witnesses.items():
                assert witness.conclusion == j
                assert all(p in gfp for p in witness.premises)

    def test_empty_set_vacuously_consistent(self):
        assert is_consistent(abc_system(), JudgmentSet.empty(3)).ok

    def test_self_loop_witness(self):
        sys_ = InferenceSystem(1, (rule(0, 0),))
        report = is_consistent(sys_, JudgmentSet.of(1, [0]))
        assert report.ok
        assert report.witnesses == {0: rule(0, 0)}

    def test_witness_is_first_declared(self):
        sys_ = InferenceSystem(1, (rule(0, 0), rule(0)))
        report = is_consistent(sys_, JudgmentSet.of(1, [0]))
        assert report.witnesses == {0: rule(0, 0)}

    def test_partial_witnesses_on_failure(self):
        # b lacks its premise a, while c still witnesses itself
        report = is_consistent(abc_system(), JudgmentSet.of(3, [B, C]))
        assert not report.ok
        assert report.failures == (Failure(B, CONSISTENCY),)
        assert report.witnesses == {C: rule(C, C)}


class TestCheckReport:
    def test_ok_must_match_failures(self):
        with pytest.raises(ValueError):
            CheckReport(True, (Failure(0, CONSISTENCY),))


class TestUniverseMismatch:
    def test_operations_reject_foreign_sets(self):
        sys_ = abc_system()
        foreign = JudgmentSet.of(4, [0])
        for op in (lambda: apply_step(sys_, foreign),
                   lambda: restrict(sys_, foreign),
                   lambda: is_closed(sys_, foreign),
                   lambda: is_consistent(sys_, foreign),
                   lambda: bounded_coinduction_check(sys_, foreign)):
            with pytest.raises(ValueError):
                op()


class TestBoundedCoinductionCheck:
    def test_empty_spec_ok(self):
        assert bounded_coinduction_check(abc_system(), JudgmentSet.empty(3)).ok

    def test_bounded_and_consistent_spec(self):
        sys_ = abc_system(corules=(rule(C),))
        report = bounded_coinduction_check(sys_, JudgmentSet.of(3, [C]))
        assert report.ok
        assert report.witnesses == {C: rule(C, C)}

    def test_boundedness_failure_names_judgment(self):
        # without the coaxiom, c has no finite derivation
        report = bounded_coinduction_check(abc_system(), JudgmentSet.of(3, [C]))
        assert not report.ok
        assert Failure(C, BOUNDEDNESS) in report.failures

    def test_consistency_failure_detected(self):
        # b is inductively derivable but {b} alone is not consistent
        report = bounded_coinduction_check(abc_system(), JudgmentSet.of(3, [B]))
        assert not report.ok
        assert report.failures == (Failure(B, CONSISTENCY),)

    def test_failures_sorted_by_judgment_then_reason(self):
        sys_ = InferenceSystem(2, (), ())
        report = bounded_coinduction_check(sys_, JudgmentSet.of(2, [0, 1]))
        tags = [(f.judgment, f.reason) for f in report.failures]
        assert tags == sorted(tags)
        assert {t for _, t in tags} == {BOUNDEDNESS, CONSISTENCY}

    def test_ok_implies_spec_inside_gen(self):
        rng = random.Random(18)
        hits = 0
        for _ in range(300):
            sys_ = random_system(rng, max_universe=5, max_rules=8, max_corules=3)
            spec = JudgmentSet(sys_.universe_size,
                               rng.randrange(1 << sys_.universe_size))
            report = bounded_coinduction_check(sys_, spec)
            if report.ok:
                hits += 1
                assert spec <= gen_interpretation(sys_)
        assert hits > 0, "seed never produced a passing spec"
