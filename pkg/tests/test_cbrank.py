"""Poset derivative levels, the divisor-product order, approach pipeline."""

import pytest

from lampirs.cbrank import (
    FinitePoset,
    build_approach_sequence,
    cb_levels,
    classify_limit,
    level_closed_form,
    poset_less,
    truncation,
    unbounded_rank_certificate,
)
from lampirs.errors import ConsistencyError, DomainError
from lampirs.lamplighter import SubgroupTriple, delta_site
from lampirs.submodules import LaurentVector, Submodule, construct_with_invariants


class TestOrder:
    def test_zero_rank_points_are_minimal(self):
        for t in (1, 2, 5):
            for other in [(1, 0), (1, 3), (2, 1)]:
                assert not poset_less(other, (t, 0)) or other[1] * other[0] < 0

    def test_examples(self):
        assert poset_less((1, 1), (2, 1))
        assert not poset_less((2, 1), (3, 1))
        assert not poset_less((2, 1), (2, 1))

    def test_validation_catches_bad_relations(self):
        with pytest.raises(DomainError):
            FinitePoset([1, 2], lambda a, b: True)  # reflexive
        with pytest.raises(DomainError):
            FinitePoset([1, 2, 3], lambda a, b: (a, b) in {(1, 2), (2, 3)})


class TestLevels:
    def test_chain(self):
        poset = FinitePoset("abc", lambda x, y: x < y)
        assert cb_levels(poset) == {"a": 0, "b": 1, "c": 2}

    def test_antichain(self):
        poset = FinitePoset([1, 2, 3], lambda x, y: False)
        assert set(cb_levels(poset).values()) == {0}

    def test_recursion_identity(self):
        poset = truncation(6, 6)
        levels = cb_levels(poset)
        for x in poset.elements:
            below = [levels[y] for y in poset.elements if poset_less(y, x)]
            assert levels[x] == (1 + max(below) if below else 0)

    def test_closed_form_on_truncations(self):
        for bounds in [(6, 6), (8, 12)]:
            poset = truncation(*bounds)
            levels = cb_levels(poset)
            for point, lvl in levels.items():
                assert lvl == level_closed_form(point)

    def test_closed_form_point_values(self):
        assert level_closed_form((5, 0)) == 0
        assert level_closed_form((1, 1)) == 1
        assert cb_levels(truncation(8, 12))[(1, 1)] == 1
        assert cb_levels(truncation(8, 12))[(4, 1)] == 4

    def test_truncation_stability(self):
        small = cb_levels(truncation(4, 6))
        large = cb_levels(truncation(8, 12))
        for point, lvl in small.items():
            assert large[point] == lvl

    def test_downward_closure(self):
        poset = truncation(8, 12)
        elems = set(poset.elements)
        for x in elems:
            for y in elems:
                if poset_less(y, x):
                    assert y in elems


class TestCertificate:
    def test_chain_levels_grow(self):
        cert = unbounded_rank_certificate([2, 4, 8])
        assert cert["chain_strictly_increasing"]
        assert cert["closed_form_matches"]
        assert [s["max_level"] for s in cert["stages"]] == [2, 4, 8]

    def test_bad_bounds(self):
        with pytest.raises(DomainError):
            unbounded_rank_certificate([4, 2])


def make_triple(s, U, v=None):
    v = v if v is not None else LaurentVector.zero(U.n, U.p)
    return SubgroupTriple(s, U, U.reduce_vector(v))


class TestApproach:
    def test_invalid_target_rejected(self):
        V = make_triple(2, Submodule.zero(1, 2))
        with pytest.raises(DomainError):
            build_approach_sequence(V, (3, 0), 3)  # 3 does not divide 2
        with pytest.raises(DomainError):
            build_approach_sequence(V, (2, 1), 3)  # not strictly below (2, 1)

    def test_target_encoding_exact(self):
        U = construct_with_invariants(1, 2, 2, 1)
        V = make_triple(4, U, delta_site(1, 2, 1))
        assert V.poset_encoding() == (2, 1)
        for target in [(1, 1), (1, 0), (2, 0)]:
            seq = build_approach_sequence(V, target, 6)
            assert all(W.poset_encoding() == target for W in seq)
            assert all(W.contains_subgroup(V) for W in seq)


class TestClassify:
    def test_constant_sequence_stabilizes_with_equality(self):
        V = make_triple(2, construct_with_invariants(1, 2, 2, 1))
        rep = classify_limit([V, V, V], V)
        (group,) = rep["groups"]
        assert group["stabilizes"] and not group["strict"] and group["divides"]

    def test_approach_output_is_strict(self):
        V = make_triple(2, Submodule.zero(1, 2))
        seq = build_approach_sequence(V, (1, 1), 5)
        rep = classify_limit(seq, V)
        (group,) = rep["groups"]
        assert group["strict"] and not group["stabilizes"]
        assert (group["t"], group["r"]) == (1, 1)

    def test_interleaved_sequences_grouped(self):
        V = make_triple(4, construct_with_invariants(1, 2, 2, 1), delta_site(1, 2, 0))
        seq_a = build_approach_sequence(V, (1, 1), 4)
        seq_b = build_approach_sequence(V, (2, 0), 4)
        mixed = [x for pair in zip(seq_a, seq_b) for x in pair]
        rep = classify_limit(mixed, V)
        keys = {(g["t"], g["r"]) for g in rep["groups"]}
        assert keys == {(1, 1), (2, 0)}
        assert all(g["strict"] for g in rep["groups"])

    def test_violation_raises(self):
        # A sequence whose encoding does not divide the limit's must be refused.
        V = make_triple(2, Submodule.zero(1, 2))
        W = make_triple(3, Submodule.zero(1, 2))
        with pytest.raises(ConsistencyError):
            classify_limit([W], V)
