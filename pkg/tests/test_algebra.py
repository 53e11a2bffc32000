"""Field/ring arithmetic: hand-verified values and exhaustive identities."""

import pytest

from lampirs.algebra import (
    LaurentPoly,
    Poly,
    PolyMatrix,
    enumerate_irreducibles,
    geometric_series,
    hermite_normal_form,
    is_irreducible,
    monic_polys,
    poly_gcd,
)
from lampirs.errors import ContextError, DomainError
from lampirs.rng import SplitMix64


def P(p, *coeffs):
    return Poly(p, coeffs)


class TestPoly:
    def test_canonical_no_trailing_zeros(self):
        assert P(2, 1, 1, 0, 0).coeffs == (1, 1)

    def test_zero_degree_is_sentinel(self):
        assert Poly.zero(5).degree is None
        assert P(3, 0, 0).degree is None

    def test_mod_reduction_at_construction(self):
        assert P(3, 4, 5).coeffs == (1, 2)

    def test_arithmetic_closure(self):
        a, b = P(5, 2, 3), P(5, 4, 0, 1)
        assert (a + b) - b == a
        assert a * Poly.one(5) == a
        q, r = divmod(a * b + P(5, 1), b)
        assert q * b + r == a * b + P(5, 1)
        assert r.degree is None or r.degree < b.degree

    def test_composite_modulus_rejected(self):
        with pytest.raises(DomainError):
            Poly(6, (1,))

    def test_modulus_mismatch(self):
        with pytest.raises(ContextError):
            P(2, 1) + P(3, 1)


class TestGcd:
    def test_gcd_with_zero_is_monic(self):
        f = P(3, 2, 2)
        assert poly_gcd(f, Poly.zero(3)) == f.monic()
        assert poly_gcd(Poly.zero(3), Poly.zero(3)).is_zero()

    def test_square_factor_over_f2(self):
        # (x+1)^2 = x^2+1 over F_2, verified by expansion.
        xp1 = P(2, 1, 1)
        assert xp1 * xp1 == P(2, 1, 0, 1)
        assert poly_gcd(P(2, 1, 0, 1), xp1) == xp1

    def test_coprime(self):
        assert poly_gcd(P(2, 0, 1), P(2, 1, 1)) == Poly.one(2)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_gcd_divides_and_is_greatest(self, p):
        rng = SplitMix64(99 + p)
        for _ in range(40):
            d = Poly(p, [rng.below(p) for _ in range(3)])
            a = d * Poly(p, [rng.below(p) for _ in range(3)])
            b = d * Poly(p, [rng.below(p) for _ in range(3)])
            g = poly_gcd(a, b)
            if g.is_zero():
                assert a.is_zero() and b.is_zero()
                continue
            assert g.divides(a) and g.divides(b)
            if not d.is_zero():
                assert d.divides(g)


class TestGeometricSeries:
    def test_one_term(self):
        assert geometric_series(1, 7, 3) == Poly.one(3)

    def test_three_terms_step_one(self):
        assert geometric_series(3, 1, 2) == P(2, 1, 1, 1)

    def test_two_terms_step_two(self):
        assert geometric_series(2, 2, 2) == P(2, 1, 0, 1)

    def test_rejects_zero_arguments(self):
        with pytest.raises(DomainError):
            geometric_series(0, 1, 2)
        with pytest.raises(DomainError):
            geometric_series(1, 0, 2)

    @pytest.mark.parametrize("p", [2, 3])
    def test_telescoping_identity(self, p):
        # (x^s - 1) * (1 + x^s + ... + x^(s(t-1))) = x^(st) - 1, all t, s <= 16.
        for t in range(1, 17):
            for s in range(1, 17):
                lhs = (Poly.monomial(p, s) - Poly.one(p)) * geometric_series(t, s, p)
                assert lhs == Poly.monomial(p, s * t) - Poly.one(p)


class TestIrreducibles:
    def test_first_four_over_f2(self):
        got = enumerate_irreducibles(2, 4)
        assert got == [P(2, 1, 1), P(2, 1, 1, 1), P(2, 1, 1, 0, 1), P(2, 1, 0, 1, 1)]

    def test_first_two_over_f3(self):
        assert enumerate_irreducibles(3, 2) == [P(3, 1, 1), P(3, 2, 1)]

    def test_smallest(self):
        assert enumerate_irreducibles(2, 1) == [P(2, 1, 1)]

    def test_never_includes_x_and_all_pass_trial_division(self):
        for p in (2, 3):
            for f in enumerate_irreducibles(p, 12):
                assert f.constant() != 0  # x never divides these
                assert is_irreducible(f)
                # independent exhaustive check: no proper monic divisor
                d = f.degree
                for e in range(1, d):
                    for g in monic_polys(p, e):
                        assert not g.divides(f) or g == Poly.one(p)


class TestLaurent:
    def test_canonical_offset(self):
        f = LaurentPoly(2, 0, P(2, 0, 1, 1))
        assert f.offset == 1 and f.body == P(2, 1, 1)

    def test_zero_has_offset_zero(self):
        assert LaurentPoly(2, 5, Poly.zero(2)).offset == 0

    def test_shift_adjusts_offset_only(self):
        f = LaurentPoly.from_poly(P(2, 1, 1))
        assert f.shifted(-3).offset == -3
        assert f.shifted(-3).body == f.body

    def test_add_mul_roundtrip(self):
        f = LaurentPoly(3, -2, P(3, 1, 2))
        g = LaurentPoly(3, 1, P(3, 2, 1))
        assert (f + g) - g == f
        prod = f * g
        assert prod.offset == -1
        assert prod.body == P(3, 1, 2) * P(3, 2, 1)


class TestHermiteNormalForm:
    def test_identity_fixed(self):
        M = PolyMatrix.identity(2, 3)
        H, rank = hermite_normal_form(M)
        assert H == M and rank == 3

    def test_zero_matrix(self):
        z = Poly.zero(2)
        M = PolyMatrix(2, [[z, z], [z, z]])
        H, rank = hermite_normal_form(M)
        assert rank == 0 and H == M

    def test_column_gcd(self):
        # rows (x), (x+1): the row space is everything, pivot 1.
        M = PolyMatrix(2, [[P(2, 0, 1)], [P(2, 1, 1)]])
        H, rank = hermite_normal_form(M)
        assert rank == 1
        assert H.entries[0][0] == Poly.one(2)

    def test_idempotent_and_row_space_preserved(self):
        rng = SplitMix64(1234)
        for p in (2, 3):
            for _ in range(25):
                entries = [
                    [Poly(p, [rng.below(p) for _ in range(3)]) for _ in range(3)]
                    for _ in range(3)
                ]
                M = PolyMatrix(p, entries)
                H, rank = hermite_normal_form(M)
                H2, rank2 = hermite_normal_form(H)
                assert H2 == H and rank2 == rank
                # every original row reduces to zero against H
                for row in M.entries:
                    row = list(row)
                    for i in range(H.rows):
                        piv_cols = [
                            c for c in range(H.cols) if not H.entries[i][c].is_zero()
                        ]
                        if not piv_cols:
                            continue
                        c = piv_cols[0]
                        if row[c].is_zero():
                            continue
                        q = row[c] // H.entries[i][c]
                        row = [
                            a - q * b for a, b in zip(row, H.entries[i])
                        ]
                    assert all(
                        e.is_zero() for e in row
                    ), "row not in the span of its HNF"
