"""Cross-checks of the Laurent canonical forms against plain F_p row spans.

The canonical-form machinery decides membership, equality and rank through
Hermite reduction over the rescaled Laurent ring.  These tests rebuild the
same answers from nothing but finite F_p linear algebra: spanning all
generator shifts within a generous exponent margin, row-reducing integer
coefficient vectors, and measuring dimension growth.  Any disagreement
fails the test.
"""

from lampirs.algebra import LaurentPoly
from lampirs.fplinalg import rref, span_contains, span_intersect_coordinates
from lampirs.rng import SplitMix64
from lampirs.submodules import LaurentVector, Submodule, construct_with_invariants

MARGIN = 12


def central_restriction(U, margin, lo, hi):
    """U's elements supported on [lo, hi], built purely from F_p row spans."""
    rows, _ = bounded_span(U, -margin, margin)
    width = 2 * margin + 1
    keep = [
        i * width + (e + margin)
        for i in range(U.n)
        for e in range(lo, hi + 1)
    ]
    return span_intersect_coordinates(rows, sorted(keep), U.p, U.n * width)


def coefficient_row(vec, lo, hi):
    """Coefficients of a LaurentVector over exponent window [lo, hi]."""
    width = hi - lo + 1
    row = [0] * (vec.n * width)
    for i, poly in enumerate(vec.coords):
        for exp, c in poly.terms():
            assert lo <= exp <= hi, "window too small for the vector"
            row[i * width + (exp - lo)] = c
    return row


def bounded_span(U, lo, hi):
    """RREF of all generator shifts supported inside [lo, hi]."""
    rows = []
    for g in U.gens:
        support = g.support()
        if support is None:
            continue
        g_lo, g_hi = support
        k = (lo - g_hi) // U.period - 1  # safely below the first valid shift
        while g_hi + k * U.period <= hi:
            if g_lo + k * U.period >= lo:
                rows.append(coefficient_row(g.shifted(k * U.period), lo, hi))
            k += 1
    return rref(rows, U.p)


def rand_vec(rng, n, p, lo=-2, hi=2):
    coords = []
    for _ in range(n):
        f = LaurentPoly.zero(p)
        for e in range(lo, hi + 1):
            c = rng.below(p)
            if c:
                f = f + LaurentPoly.monomial(p, e, c)
        coords.append(f)
    return LaurentVector(p, coords)


class TestMembershipOracle:
    def test_agreement_on_random_cases(self):
        rng = SplitMix64(8080)
        for _ in range(40):
            n = 1 + rng.below(2)
            p = (2, 3)[rng.below(2)]
            e = 1 + rng.below(3)
            U = Submodule(n, p, e, [rand_vec(rng, n, p) for _ in range(1 + rng.below(2))])
            reduced, pivots = bounded_span(U, -MARGIN, MARGIN)
            for _ in range(12):
                w = rand_vec(rng, n, p)
                # bias half the probes toward actual members
                if rng.below(2) and U.gens:
                    w = U.gens[0].shifted(e * (rng.below(3) - 1)) + w
                claimed = U.contains_vector(w)
                row = coefficient_row(w, -MARGIN, MARGIN)
                oracle = span_contains(reduced, pivots, row, p)
                if claimed:
                    assert oracle, "canonical form accepts a vector the span lacks"
                else:
                    assert not oracle, "canonical form rejects a spanned vector"

    def test_agreement_for_constructed_subgroups(self):
        rng = SplitMix64(9090)
        for n, b, r in [(1, 2, 1), (1, 3, 2), (2, 2, 3), (1, 4, 3)]:
            U = construct_with_invariants(n, 2, b, r)
            reduced, pivots = bounded_span(U, -MARGIN, MARGIN)
            for _ in range(15):
                w = rand_vec(rng, n, 2)
                row = coefficient_row(w, -MARGIN, MARGIN)
                assert U.contains_vector(w) == span_contains(reduced, pivots, row, 2)


class TestEqualityOracle:
    def test_window_spans_agree_with_equality(self):
        rng = SplitMix64(444)
        distinguished = 0
        for _ in range(25):
            p = (2, 3)[rng.below(2)]
            g1, g2 = rand_vec(rng, 1, p), rand_vec(rng, 1, p)
            U = Submodule(1, p, 2, [g1, g2])
            same = Submodule(1, p, 2, [g2, g1 + g2.shifted(-2)])
            other = Submodule(1, p, 2, [g1 + rand_vec(rng, 1, p)])
            assert U.equals(same)
            # equal subgroups restrict to the same central window space
            assert central_restriction(U, MARGIN, -4, 4) == central_restriction(
                same, MARGIN, -4, 4
            )
            if not U.equals(other):
                # claimed inequality must be witnessed by an actual vector
                found = False
                for _ in range(300):
                    w = rand_vec(rng, 1, p, lo=-3, hi=3)
                    if U.contains_vector(w) != other.contains_vector(w):
                        found = True
                        break
                assert found, "equals() distinguishes but no witness found"
                distinguished += 1
        assert distinguished > 0


class TestWindowIntersectionOracle:
    def test_measure_window_matches_span_restriction(self):
        from lampirs.irs import window_of_submodule

        rng = SplitMix64(777)
        for _ in range(20):
            n = 1 + rng.below(2)
            p = (2, 3)[rng.below(2)]
            e = 1 + rng.below(2)
            U = Submodule(n, p, e, [rand_vec(rng, n, p) for _ in range(1 + rng.below(2))])
            site_lo, site_hi = -2, 2
            ws = window_of_submodule(U, site_lo, site_hi)
            # oracle works in exponents; site k is exponent -k
            exp_lo, exp_hi = -site_hi, -site_lo
            central = central_restriction(U, MARGIN, exp_lo, exp_hi)
            width = exp_hi - exp_lo + 1
            # re-encode oracle rows into the window's (site-major) coordinates
            full_width = 2 * MARGIN + 1
            converted = []
            for row in central:
                out = [0] * (n * width)
                for i in range(n):
                    for exp in range(exp_lo, exp_hi + 1):
                        site = -exp
                        out[(site - site_lo) * n + i] = row[
                            i * full_width + (exp + MARGIN)
                        ]
                converted.append(out)
            assert rref(converted, p)[0] == ws.rows


class TestRankViaGrowth:
    def test_dimension_slope_equals_rank(self):
        # dim(U restricted to a width-W window) grows by rank per period step.
        cases = [
            Submodule.full(1, 2),
            Submodule.full(2, 2),
            construct_with_invariants(1, 2, 2, 1),
            construct_with_invariants(2, 2, 2, 3),
            construct_with_invariants(1, 3, 3, 2),
        ]
        for U in cases:
            e = U.period
            rank = U.rescaled_rank(e)
            dims = []
            for reps in (4, 5, 6):
                lo, hi = 0, reps * e - 1
                rows, _ = bounded_span(U, lo, hi)
                dims.append(len(rows))
            slopes = {b - a for a, b in zip(dims, dims[1:])}
            assert slopes == {rank}, (dims, rank)
