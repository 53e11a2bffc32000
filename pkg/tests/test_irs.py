"""Window distributions: exact marginals, approximants, samplers, splicing."""

from fractions import Fraction

import pytest

from lampirs.algebra import LaurentPoly, Poly
from lampirs.errors import DomainError, ResourceBudgetError
from lampirs.irs import (
    SubgroupMeasure,
    WindowDistribution,
    WindowSubgroup,
    block_average_marginal,
    block_average_measure,
    convergence_report,
    count_subspaces,
    enumerate_subspaces,
    gaussian_binomial,
    majority_invariance_estimate,
    majority_symmetric_difference,
    sample_block_average_window,
    sampler_law_report,
    splice_measures,
    tv_distance,
    window_of_submodule,
)
from lampirs.rng import SplitMix64
from lampirs.submodules import LaurentVector, Submodule

P2 = 2
HALF = Fraction(1, 2)


def even_mixture():
    return SubgroupMeasure.mixture(
        [(HALF, Submodule.full(1, P2)), (HALF, Submodule.zero(1, P2))]
    )


def line_submodule(coeffs=(1, 1)):
    return Submodule(
        1, P2, 1, [LaurentVector(P2, (LaurentPoly.from_poly(Poly(P2, coeffs)),))]
    )


class TestSubspaceEnumeration:
    def test_counts(self):
        assert len(enumerate_subspaces(2, 1)) == 2
        assert len(enumerate_subspaces(2, 2)) == 5
        assert len(enumerate_subspaces(3, 2)) == 6

    def test_counts_match_gaussian_binomials(self):
        for p, d in [(2, 4), (3, 3)]:
            assert len(enumerate_subspaces(p, d)) == count_subspaces(p, d)
            assert count_subspaces(p, d) == sum(
                gaussian_binomial(d, k, p) for k in range(d + 1)
            )

    def test_no_duplicates(self):
        seen = set(enumerate_subspaces(2, 4))
        assert len(seen) == count_subspaces(2, 4)

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            enumerate_subspaces(2, 6, budget=100)


class TestWindowOfSubmodule:
    def test_full_and_zero(self):
        full = window_of_submodule(Submodule.full(1, P2), 0, 2)
        assert full.dim == 3
        zero = window_of_submodule(Submodule.zero(1, P2), -1, 1)
        assert zero.dim == 0

    def test_even_span_window(self):
        U = Submodule(1, P2, 2, [LaurentVector.unit(1, P2, 0)])
        ws = window_of_submodule(U, 0, 3)
        # events in even exponents only: sites 0 and 2 hold exponents 0, -2
        assert ws.dim == 2

    def test_matches_brute_force_membership(self):
        # independent oracle: intersect by testing every window vector
        rng = SplitMix64(404)
        for _ in range(10):
            coeffs = [rng.below(2) for _ in range(3)]
            coeffs.append(1)
            U = line_submodule(tuple(coeffs))
            lo, hi = -1, 1
            ws = window_of_submodule(U, lo, hi)
            dim = hi - lo + 1
            member_vectors = set()
            for code in range(2**dim):
                vec = tuple((code >> i) & 1 for i in range(dim))
                lamp = LaurentVector(P2, (sum(
                    (LaurentPoly.monomial(P2, -(lo + i), c) for i, c in enumerate(vec) if c),
                    LaurentPoly.zero(P2),
                ),))
                if U.contains_vector(lamp):
                    member_vectors.add(vec)
            spanned = set()
            for code in range(2 ** ws.dim):
                acc = (0,) * dim
                for i in range(ws.dim):
                    if (code >> i) & 1:
                        acc = tuple((a + b) % 2 for a, b in zip(acc, ws.rows[i]))
                spanned.add(acc)
            assert spanned == member_vectors


class TestProjection:
    def test_identity_projection(self):
        dist = even_mixture().marginal(0, 2)
        assert dist.project(0, 2) == dist

    def test_point_mass_projects_to_point_mass(self):
        full = WindowSubgroup.full(P2, 1, 0, 2)
        d = WindowDistribution.point(full)
        proj = d.project(1, 2)
        ((ws, prob),) = proj.sorted_items()
        assert prob == 1 and ws.dim == 2

    def test_diagonal_line_projects_to_zero(self):
        diag = WindowSubgroup(P2, 1, 0, 1, ((1, 1),))
        proj = WindowDistribution.point(diag).project(0, 0)
        ((ws, prob),) = proj.sorted_items()
        assert ws.dim == 0 and prob == 1

    def test_projection_consistency_chain(self):
        mu = even_mixture()
        outer = mu.marginal(-1, 2)
        assert outer.project(0, 2).project(0, 1) == outer.project(0, 1)
        assert mu.check_consistency(-1, 2, 0, 1)


class TestBlockAverage:
    def test_point_masses_are_fixed_points(self):
        for U in (Submodule.full(1, P2), Submodule.zero(1, P2)):
            mu = SubgroupMeasure.point(U)
            for m in (1, 2, 3):
                assert block_average_marginal(mu, m, 0, 1) == mu.marginal(0, 1)

    def test_pinned_mixture_value(self):
        # Hand convolution of independent two-cell blocks under both phases.
        mu = even_mixture()
        got = block_average_marginal(mu, 2, 0, 1)
        probs = {ws.dim: [] for ws in got.atoms}
        by_rows = {ws.rows: p for ws, p in got.atoms.items()}
        assert by_rows[()] == Fraction(3, 8)
        assert by_rows[((1, 0),)] == Fraction(1, 8)
        assert by_rows[((0, 1),)] == Fraction(1, 8)
        assert by_rows[((1, 0), (0, 1))] == Fraction(3, 8)
        assert tv_distance(got, mu.marginal(0, 1)) == HALF

    def test_window_budget_guard(self):
        with pytest.raises(ResourceBudgetError):
            block_average_marginal(even_mixture(), 30, 0, 1)

    def test_non_invariant_measure_rejected(self):
        mu = SubgroupMeasure.point(
            Submodule(1, P2, 2, [LaurentVector.unit(1, P2, 0)])
        )
        assert not mu.invariant
        with pytest.raises(DomainError):
            block_average_marginal(mu, 2, 0, 1)

    def test_shift_orbit_mixture_is_invariant(self):
        U = Submodule(1, P2, 2, [LaurentVector.unit(1, P2, 0)])
        mu = SubgroupMeasure.mixture([(HALF, U), (HALF, U.shifted(1))])
        assert mu.invariant
        base = block_average_marginal(mu, 2, 0, 1)
        shifted = block_average_marginal(mu, 2, 3, 4).transported(0)
        assert base == shifted

    def test_invariant_tag_matches_marginal_shift(self):
        mu = even_mixture()
        assert mu.invariant
        assert mu.marginal(1, 3).transported(0) == mu.marginal(0, 2)
        lonely = SubgroupMeasure.point(
            Submodule(1, P2, 2, [LaurentVector.unit(1, P2, 0)])
        )
        assert not lonely.invariant
        assert lonely.marginal(1, 3).transported(0) != lonely.marginal(0, 2)


class TestDistanceReports:
    def test_tv_point_masses(self):
        a = WindowDistribution.point(WindowSubgroup.full(P2, 1, 0, 0))
        b = WindowDistribution.point(WindowSubgroup.zero(P2, 1, 0, 0))
        assert tv_distance(a, a) == 0
        assert tv_distance(a, b) == 2

    def test_convergence_report_trend(self):
        mu = even_mixture()
        values = [convergence_report(mu, m, 1)["tv"] for m in (2, 4, 8)]
        assert values == [HALF, Fraction(1, 4), Fraction(1, 8)]
        for m in (2, 4, 8):
            rep = convergence_report(mu, m, 1)
            assert rep["pass"] and rep["literal_bound_held"]

    def test_point_mass_zero_distance(self):
        mu = SubgroupMeasure.point(Submodule.full(1, P2))
        for m in (2, 4):
            assert convergence_report(mu, m, 2)["tv"] == 0


class TestSampler:
    def test_reproducible(self):
        mu = even_mixture()
        rng1 = SplitMix64(42)
        rng2 = SplitMix64(42)
        a = [sample_block_average_window(mu, 3, 0, 1, rng1) for _ in range(50)]
        b = [sample_block_average_window(mu, 3, 0, 1, rng2) for _ in range(50)]
        assert a == b

    def test_measure_object_exposes_block_average_marginals(self):
        mu = even_mixture()
        nu = block_average_measure(mu, 3)
        assert nu.invariant
        assert nu.marginal(0, 1) == block_average_marginal(mu, 3, 0, 1)

    def test_point_mass_constant(self):
        mu = SubgroupMeasure.point(Submodule.zero(1, P2))
        rng = SplitMix64(1)
        draws = {sample_block_average_window(mu, 2, 0, 1, rng) for _ in range(20)}
        assert len(draws) == 1

    def test_law_matches_exact_marginal(self):
        rep = sampler_law_report(even_mixture(), 4, 0, 1, 20000, seed=11)
        assert rep["within_tolerance"]
        assert rep["tv"] < Fraction(1, 20)


class TestSplice:
    def test_same_measure_gives_common_marginal(self):
        mu = even_mixture()
        empirical, target, rep = splice_measures(mu, mu, 11, 0, 1, 20000, seed=5)
        assert target == mu.marginal(0, 1)
        assert rep["within_bound"]

    def test_point_masses_single_cell(self):
        mu1 = SubgroupMeasure.point(Submodule.full(1, P2))
        mu2 = SubgroupMeasure.point(Submodule.zero(1, P2))
        empirical, target, rep = splice_measures(mu1, mu2, 51, 0, 0, 20000, seed=5)
        assert target.prob(WindowSubgroup.full(P2, 1, 0, 0)) == HALF
        # single-cell window: every trial is all-first or all-second
        assert rep["lambda_all_first"] + rep["lambda_all_second"] == 1
        assert rep["boundary_defect_bound"] == 0
        assert rep["within_bound"]

    def test_even_window_length_rejected(self):
        mu = even_mixture()
        with pytest.raises(DomainError):
            splice_measures(mu, mu, 10, 0, 0, 10, seed=1)

    def test_majority_exact_symmetric_difference(self):
        # brute-force oracle over all words of length n+1
        for n in (3, 5, 7):
            hits = 0
            for word in range(2 ** (n + 1)):
                w1 = word & ((1 << n) - 1)
                w2 = word >> 1
                if (bin(w1).count("1") > n // 2) != (bin(w2).count("1") > n // 2):
                    hits += 1
            assert majority_symmetric_difference(n) == Fraction(hits, 2 ** (n + 1))

    def test_majority_measure_is_half(self):
        for n in (3, 5):
            ups = sum(1 for w in range(2**n) if bin(w).count("1") > n // 2)
            assert Fraction(ups, 2**n) == HALF

    def test_invariance_estimate_tracks_exact(self):
        est = majority_invariance_estimate(11, 20000, seed=9)
        exact = majority_symmetric_difference(11)
        assert abs(est - exact) < Fraction(1, 50)
