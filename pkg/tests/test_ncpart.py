import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nclab.errors import DomainError, ParameterError, ResourceLimitError
from nclab.ncpart import (
    SetPartition,
    block_profile,
    enumerate_nc,
    is_noncrossing_t,
    is_t_partition,
    rank_of,
    refines,
    tilde_transform,
    weight_signature,
)
from nclab.params import Params

FIGURE_PARTITION = SetPartition.from_blocks(
    [{1, 6, 7, 8}, {2, 9, 12, 13}, {3, 14}, {4, 5}, {10, 11}]
)
FIGURE_CROSSING = SetPartition.from_blocks(
    [{1, 6, 7, 8}, {2, 9, 12, 13}, {3, 4, 5, 14}, {10, 11}]
)


def from_oracle(blocks):
    return SetPartition.from_blocks(blocks)


@st.composite
def set_partitions(draw, max_n=7):
    n = draw(st.integers(min_value=1, max_value=max_n))
    blocks = []
    for x in range(1, n + 1):
        choice = draw(st.integers(min_value=0, max_value=len(blocks)))
        if choice == len(blocks):
            blocks.append([x])
        else:
            blocks[choice].append(x)
    return SetPartition.from_blocks(blocks)


class TestSetPartition:
    def test_canonical_form(self):
        part = SetPartition.from_blocks([[3, 1], [4, 2]])
        assert part.blocks == ((1, 3), (2, 4))
        assert part == SetPartition.from_blocks([[2, 4], [1, 3]])

    def test_rejects_overlap_and_gaps(self):
        with pytest.raises(DomainError):
            SetPartition.from_blocks([[1, 2], [2, 3]])
        with pytest.raises(DomainError):
            SetPartition.from_blocks([[1, 3]])
        with pytest.raises(DomainError):
            SetPartition.from_blocks([[1], []])

    def test_json_round_trip(self):
        data = FIGURE_PARTITION.to_json_dict()
        assert data["n"] == 14
        assert SetPartition.from_json_dict(data) == FIGURE_PARTITION


class TestTPartition:
    def test_figure_example(self):
        assert is_t_partition(FIGURE_PARTITION, 3)

    def test_pair_violation(self):
        assert not is_t_partition(SetPartition.from_blocks([[1, 2]]), 2)

    def test_singletons(self):
        singles = SetPartition.from_blocks([[x] for x in range(1, 6)])
        assert is_t_partition(singles, 5)

    def test_t_out_of_range(self):
        with pytest.raises(ParameterError):
            is_t_partition(SetPartition.from_blocks([[1]]), 2)


class TestNoncrossing:
    def test_figure_is_noncrossing(self):
        assert is_noncrossing_t(FIGURE_PARTITION, 3)

    def test_figure_crossing_variant(self):
        assert not is_noncrossing_t(FIGURE_CROSSING, 3)

    def test_t_sensitivity(self):
        part = SetPartition.from_blocks([[1, 3], [2, 4]])
        assert not is_noncrossing_t(part, 1)
        assert is_noncrossing_t(part, 2)

    def test_requires_t_partition(self):
        with pytest.raises(DomainError):
            is_noncrossing_t(SetPartition.from_blocks([[1, 2]]), 2)

    def test_classical_agreement_exhaustive(self):
        # At t = 1 the order-t test must coincide with the classical one.
        for n in range(1, 9):
            for blocks in oracles.all_set_partitions(n):
                expected = oracles.is_noncrossing_classical(blocks)
                assert is_noncrossing_t(from_oracle(blocks), 1) == expected

    def test_oracle_agreement_small(self):
        for n in range(2, 7):
            for t in range(1, n + 1):
                for blocks in oracles.all_set_partitions(n):
                    if not oracles.is_t_partition(blocks, t):
                        continue
                    expected = oracles.is_noncrossing_t(blocks, t)
                    assert is_noncrossing_t(from_oracle(blocks), t) == expected


class TestRefines:
    def test_reflexive(self):
        assert refines(FIGURE_PARTITION, FIGURE_PARTITION)

    def test_singletons_below_everything(self):
        singles = SetPartition.from_blocks([[x] for x in range(1, 5)])
        assert refines(singles, SetPartition.from_blocks([[1, 2, 3, 4]]))

    def test_incomparable(self):
        a = SetPartition.from_blocks([[1, 2], [3]])
        b = SetPartition.from_blocks([[1, 3], [2]])
        assert not refines(a, b)
        assert not refines(b, a)

    def test_size_mismatch(self):
        with pytest.raises(DomainError):
            refines(SetPartition.from_blocks([[1]]), SetPartition.from_blocks([[1, 2]]))

    def test_matches_oracle(self):
        parts = oracles.all_set_partitions(5)
        for a in parts:
            for b in parts:
                assert refines(from_oracle(a), from_oracle(b)) == oracles.refines(a, b)


class TestRankAndProfile:
    def test_figure_rank(self):
        assert rank_of(FIGURE_PARTITION, Params(2, 7, 3)) == 2

    def test_singleton_rank_zero(self):
        for n in (1, 3, 5):
            singles = SetPartition.from_blocks([[x] for x in range(1, n + 1)])
            assert rank_of(singles, Params(1, n, 1)) == 0

    def test_single_block_rank(self):
        assert rank_of(SetPartition.from_blocks([[1, 2, 3]]), Params(1, 3, 1)) == 2

    def test_figure_weight(self):
        profile = block_profile(FIGURE_PARTITION, Params(2, 7, 3))
        assert profile.counts == (3, 2, 0, 0, 0, 0, 0)
        assert weight_signature(FIGURE_PARTITION, Params(2, 7, 3)) == {1: 3, 2: 2}
        assert str(profile) == "x1^3 x2^2"

    def test_all_singletons_profile(self):
        singles = SetPartition.from_blocks([[x] for x in range(1, 5)])
        assert block_profile(singles, Params(1, 4, 1)).counts == (4, 0, 0, 0)

    def test_single_block_profile(self):
        part = SetPartition.from_blocks([[1, 2, 3, 4, 5, 6]])
        assert block_profile(part, Params(2, 3, 1)).counts == (0, 0, 1)

    def test_indivisible_block_rejected(self):
        with pytest.raises(DomainError):
            block_profile(SetPartition.from_blocks([[1], [2, 3, 4]]), Params(2, 2, 1))


class TestTilde:
    def test_swap_example(self):
        part = SetPartition.from_blocks([[1, 3], [2, 4]])
        assert tilde_transform(part, 2) == SetPartition.from_blocks([[2, 3], [1, 4]])
        assert is_noncrossing_t(tilde_transform(part, 2), 1)

    def test_identity_at_t1(self):
        assert tilde_transform(FIGURE_PARTITION, 1) == FIGURE_PARTITION

    def test_involution_figure(self):
        assert tilde_transform(tilde_transform(FIGURE_PARTITION, 3), 3) == FIGURE_PARTITION

    @settings(max_examples=60, deadline=None)
    @given(set_partitions())
    def test_involution_random(self, part):
        for t in range(1, part.ground_size + 1):
            assert tilde_transform(tilde_transform(part, t), t) == part

    def test_membership_equivalence_exhaustive(self):
        # Order-t membership transfers through the relabelling map, both
        # ways, for every partition of {1..N} with N <= 8 and every t.
        for n in range(2, 9):
            partitions = [from_oracle(blocks) for blocks in oracles.all_set_partitions(n)]
            for t in range(1, n + 1):
                for part in partitions:
                    moved = tilde_transform(part, t)
                    if not is_t_partition(part, t):
                        assert not is_t_partition(moved, t)
                        continue
                    lhs = is_noncrossing_t(part, t)
                    rhs = is_noncrossing_t(moved, 1)
                    assert lhs == rhs


class TestEnumerate:
    def test_known_count_232(self):
        assert len(enumerate_nc(Params(2, 3, 2))) == 5

    def test_t_equals_n_single(self):
        for n in (1, 2, 4):
            parts = enumerate_nc(Params(1, n, n))
            assert parts == (SetPartition.from_blocks([[x] for x in range(1, n + 1)]),)

    def test_derived_count(self):
        assert len(enumerate_nc(Params(1, 4, 2))) == 9

    def test_matches_brute_force(self):
        cases = [
            (m, n, t)
            for m, n in ((1, 4), (1, 5), (1, 6), (2, 2), (2, 3), (3, 2), (4, 1))
            for t in range(1, n + 1)
        ]
        for m, n, t in cases:
            expected = [from_oracle(blocks) for blocks in oracles.brute_nc(m, n, t)]
            assert list(enumerate_nc(Params(m, n, t))) == expected

    def test_cardinality_formula_all_m(self):
        # the formula match holds for every m with mn <= 10, not only m <= 3
        from nclab.closedform import total_count

        for m in range(4, 11):
            for n in range(1, 10 // m + 1):
                for t in range(1, n + 1):
                    p = Params(m, n, t)
                    assert len(enumerate_nc(p)) == total_count(p)

    def test_output_sorted_and_deterministic(self):
        parts = enumerate_nc(Params(2, 3, 2))
        assert list(parts) == sorted(parts, key=lambda sp: sp.blocks)
        assert parts == enumerate_nc(Params(2, 3, 2))

    def test_rank_bounds_and_top_level(self):
        for m, n, t in ((1, 5, 2), (2, 3, 2), (2, 2, 1), (3, 2, 1)):
            p = Params(m, n, t)
            parts = enumerate_nc(p)
            ranks = [rank_of(part, p) for part in parts]
            assert all(0 <= r <= p.max_rank for r in ranks)
            assert max(ranks) == p.max_rank
            for part, r in zip(parts, ranks):
                if r == p.max_rank:
                    assert part.block_count == t

    def test_resource_guard(self):
        with pytest.raises(ResourceLimitError):
            enumerate_nc(Params(1, 6, 1), max_objects=10)
