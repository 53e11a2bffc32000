"""Periodic additive subgroups of the rank-n Laurent module and their invariants.

A ``Submodule`` presents an additive subgroup U of R^n (R = F_p[x, x^-1])
that is closed under multiplication by x^{±e} for a stored period e: it is
the span of ``{x^(k*e) * g : g in gens, k in Z}``.  Everything is decided
through the rescaling isomorphism: splitting exponents modulo a level L
(a multiple of e) identifies R^n with a free module of rank n*L over
F_p[y, y^-1] where y acts as x^L, and U becomes a finitely generated
submodule there.  Its canonical form is a Hermite echelon matrix over the
Laurent ring in y, normalized by the unit group: pivots are monic with
nonzero constant term, and entries above a pivot are the unique residues
of degree smaller than the pivot's.  Two presentations describe the same
subgroup exactly when their canonical forms at a common level coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .algebra import (
    LaurentPoly,
    Poly,
    PolyMatrix,
    check_prime,
    enumerate_irreducibles,
)
from .errors import (
    ContextError,
    DomainError,
    PreconditionError,
    ResourceBudgetError,
)

ENUMERATION_BUDGET = 10**6


class LaurentVector:
    """Fixed-length vector of Laurent polynomials (an element of R^n)."""

    __slots__ = ("p", "n", "coords")

    def __init__(self, p, coords):
        check_prime(p)
        coords = tuple(coords)
        for c in coords:
            if c.p != p:
                raise ContextError("vector coordinate with mismatched modulus")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", len(coords))
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("LaurentVector is immutable")

    @classmethod
    def zero(cls, n, p):
        z = LaurentPoly.zero(p)
        return cls(p, (z,) * n)

    @classmethod
    def unit(cls, n, p, i, exponent=0, coeff=1):
        coords = [LaurentPoly.zero(p)] * n
        coords[i] = LaurentPoly.monomial(p, exponent, coeff)
        return cls(p, coords)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentVector)
            and self.p == other.p
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.p, self.coords))

    def __add__(self, other):
        self._check(other)
        return LaurentVector(self.p, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return LaurentVector(self.p, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return LaurentVector(self.p, (-a for a in self.coords))

    def scaled(self, f):
        """Multiply every coordinate by a Poly/LaurentPoly/int scalar."""
        if isinstance(f, int):
            return LaurentVector(self.p, (c.scale(f) for c in self.coords))
        return LaurentVector(self.p, (c * f for c in self.coords))

    def shifted(self, k):
        return LaurentVector(self.p, (c.shifted(k) for c in self.coords))

    def support(self):
        """(min_exp, max_exp) over all coordinates, or None if zero."""
        lows = [c.min_exp for c in self.coords if not c.is_zero()]
        highs = [c.max_exp for c in self.coords if not c.is_zero()]
        if not lows:
            return None
        return min(lows), max(highs)

    def _check(self, other):
        if self.p != other.p or self.n != other.n:
            raise ContextError("vectors from different ambient modules")

    def __repr__(self):
        from .formats import format_vector

        return f"LaurentVector({self.p}, {format_vector(self)!r})"


# ---------------------------------------------------------------------------
# Rescaling: exponent-splitting between R^n and the rank n*level module.
# Column j*n + i holds the x^j-residue class of coordinate i; y acts as x^level.
# ---------------------------------------------------------------------------


def vectorize(vec, level):
    """Split a LaurentVector across exponent classes mod ``level``."""
    p = vec.p
    cols = [LaurentPoly.zero(p)] * (vec.n * level)
    for i, poly in enumerate(vec.coords):
        for exp, c in poly.terms():
            q, j = divmod(exp, level)
            cols[j * vec.n + i] = cols[j * vec.n + i] + LaurentPoly.monomial(p, q, c)
    return cols


def unvectorize(cols, n, level, p):
    """Inverse of :func:`vectorize`."""
    acc = [LaurentPoly.zero(p)] * n
    for idx, entry in enumerate(cols):
        if entry.is_zero():
            continue
        j, i = divmod(idx, n)
        for q, c in entry.terms():
            acc[i] = acc[i] + LaurentPoly.monomial(p, q * level + j, c)
    return LaurentVector(p, acc)


# ---------------------------------------------------------------------------
# Canonical Hermite form over the Laurent ring F_p[y, y^-1].
# ---------------------------------------------------------------------------


def _y_inverse_mod(g):
    """Inverse of y modulo g, for g with nonzero constant term."""
    p = g.p
    c0_inv = pow(g.constant(), p - 2, p)
    tail = Poly(p, g.coeffs[1:])  # (g - g(0)) / y
    return tail.scale((-c0_inv) % p)


def laurent_mod(f, g):
    """Unique residue of a LaurentPoly modulo g*R_y, of degree < deg g.

    Requires g monic with nonzero constant term (so y is invertible mod g).
    """
    if g.degree == 0:
        return Poly.zero(g.p)
    if f.is_zero():
        return Poly.zero(g.p)
    a = f.offset
    if a >= 0:
        return f.body.shift(a) % g
    r = f.body % g
    y_inv = _y_inverse_mod(g)
    step = -a
    # Square-and-multiply for y^{-step} mod g.
    power = y_inv
    while step:
        if step & 1:
            r = (r * power) % g
        power = (power * power) % g
        step >>= 1
    return r


def laurent_exact_div(f, g):
    """Quotient f / g in the Laurent ring; f must be divisible by g."""
    if f.is_zero():
        return LaurentPoly.zero(f.p)
    q, rem = divmod(f.body, g)
    if not rem.is_zero():
        raise ArithmeticError("inexact Laurent division")
    return LaurentPoly(f.p, f.offset, q)


class CanonicalForm:
    """Canonical Laurent-Hermite presentation of a subgroup at a fixed level."""

    __slots__ = ("p", "n", "level", "ncols", "rows", "pivots")

    def __init__(self, p, n, level, rows, pivots):
        self.p = p
        self.n = n
        self.level = level
        self.ncols = n * level
        self.rows = rows
        self.pivots = pivots

    @property
    def rank(self):
        return len(self.rows)

    def key(self):
        return (
            self.p,
            self.level,
            self.pivots,
            tuple(tuple((e.offset, e.body.coeffs) for e in row) for row in self.rows),
        )

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def reduce(self, cols):
        """Canonical residual of a column vector modulo the row span."""
        v = list(cols)
        for row, c in zip(self.rows, self.pivots):
            if v[c].is_zero():
                continue
            pivot = row[c].body  # pivot entries are normalized polynomials
            r = laurent_mod(v[c], pivot)
            diff = v[c] - LaurentPoly.from_poly(r)
            if diff.is_zero():
                continue
            q = laurent_exact_div(diff, pivot)
            for j in range(c, self.ncols):
                if not row[j].is_zero():
                    v[j] = v[j] - q * row[j]
        return v

    def contains(self, cols):
        # Later rows never touch an earlier pivot column, so a nonzero
        # residue there decides the answer immediately.
        v = list(cols)
        for row, c in zip(self.rows, self.pivots):
            if v[c].is_zero():
                continue
            pivot = row[c].body
            r = laurent_mod(v[c], pivot)
            if not r.is_zero():
                return False
            q = laurent_exact_div(v[c], pivot)
            for j in range(c, self.ncols):
                if not row[j].is_zero():
                    v[j] = v[j] - q * row[j]
        return all(e.is_zero() for e in v)


def _width(entry):
    return entry.body.degree


def laurent_hermite_form(p, n, level, generator_cols):
    """Echelonize Laurent rows into the canonical form described above."""
    ncols = n * level
    rows = [list(r) for r in generator_cols if any(not e.is_zero() for e in r)]
    pivots = []
    next_row = 0
    for col in range(ncols):
        while True:
            live = [i for i in range(next_row, len(rows)) if not rows[i][col].is_zero()]
            if not live:
                break
            best = min(live, key=lambda i: _width(rows[i][col]))
            rows[next_row], rows[best] = rows[best], rows[next_row]
            if len(live) == 1:
                break
            pivot_entry = rows[next_row][col]
            for i in range(next_row + 1, len(rows)):
                entry = rows[i][col]
                if entry.is_zero():
                    continue
                # One width-reduction step: entry - q*pivot has smaller width.
                q0, _ = divmod(entry.body, pivot_entry.body)
                q = LaurentPoly(p, entry.offset - pivot_entry.offset, q0)
                if q.is_zero():
                    continue
                for j in range(col, ncols):
                    if not rows[next_row][j].is_zero():
                        rows[i][j] = rows[i][j] - q * rows[next_row][j]
        if next_row < len(rows) and not rows[next_row][col].is_zero():
            # Normalize the pivot by a Laurent unit: monic, offset zero.
            entry = rows[next_row][col]
            inv = pow(entry.body.leading(), p - 2, p)
            shift = -entry.offset
            rows[next_row] = [
                e.scale(inv).shifted(shift) if not e.is_zero() else e
                for e in rows[next_row]
            ]
            pivots.append(col)
            next_row += 1
    rows = rows[:next_row]
    # Reduce entries above each pivot to the canonical residue.
    for idx, col in enumerate(pivots):
        pivot = rows[idx][col].body
        for i in range(idx):
            entry = rows[i][col]
            if entry.is_zero():
                continue
            r = laurent_mod(entry, pivot)
            diff = entry - LaurentPoly.from_poly(r)
            if diff.is_zero():
                continue
            q = laurent_exact_div(diff, pivot)
            for j in range(col, ncols):
                if not rows[idx][j].is_zero():
                    rows[i][j] = rows[i][j] - q * rows[idx][j]
    rows = tuple(tuple(row) for row in rows)
    return CanonicalForm(p, n, level, rows, tuple(pivots))


def _divisors(m):
    out = [d for d in range(1, m + 1) if m % d == 0]
    return out


class Submodule:
    """Additive subgroup of R^n closed under x^{±period}, given by generators."""

    __slots__ = ("p", "n", "period", "gens", "_forms")

    def __init__(self, n, p, period, gens=()):
        check_prime(p)
        if n < 1:
            raise DomainError("ambient rank must be >= 1")
        if period < 1:
            raise DomainError("period must be >= 1")
        gens = tuple(g for g in gens if not g.is_zero())
        for g in gens:
            if g.p != p or g.n != n:
                raise ContextError("generator from a different ambient module")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "_forms", {})

    def __setattr__(self, *a):
        raise AttributeError("Submodule is immutable")

    @classmethod
    def zero(cls, n, p):
        return cls(n, p, 1, ())

    @classmethod
    def full(cls, n, p):
        return cls(n, p, 1, tuple(LaurentVector.unit(n, p, i) for i in range(n)))

    def is_zero(self):
        return not self.gens

    # -- canonical forms ----------------------------------------------------

    def form(self, level):
        """Canonical form at a level that the stored period divides."""
        if level % self.period:
            raise DomainError(
                f"level {level} is not a multiple of the stored period {self.period}"
            )
        cached = self._forms.get(level)
        if cached is not None:
            return cached
        reps = level // self.period
        rows = []
        for g in self.gens:
            for k in range(reps):
                rows.append(vectorize(g.shifted(k * self.period), level))
        form = laurent_hermite_form(self.p, self.n, level, rows)
        self._forms[level] = form
        return form

    def generator_matrix(self, level):
        """Rescaled generator presentation as a PolyMatrix over F_p[y].

        Rows are the period-expanded generators split across exponent classes,
        normalized row-wise by a power of the unit y to clear denominators.
        """
        if level % self.period:
            raise DomainError(
                f"level {level} is not a multiple of the stored period {self.period}"
            )
        reps = level // self.period
        rows = []
        for g in self.gens:
            for k in range(reps):
                cols = vectorize(g.shifted(k * self.period), level)
                vals = [e.offset for e in cols if not e.is_zero()]
                lift = -min(vals) if vals and min(vals) < 0 else 0
                row = []
                for e in cols:
                    if e.is_zero():
                        row.append(Poly.zero(self.p))
                    else:
                        shifted = e.shifted(lift)
                        row.append(shifted.body.shift(shifted.offset))
                rows.append(row)
        return PolyMatrix(self.p, rows)

    # -- membership, containment, equality ----------------------------------

    def contains_vector(self, w):
        if w.p != self.p or w.n != self.n:
            raise ContextError("vector from a different ambient module")
        if w.is_zero():
            return True
        if self.is_zero():
            return False
        return self.form(self.period).contains(vectorize(w, self.period))

    def reduce_vector(self, w):
        """Canonical representative of w modulo this subgroup."""
        if self.is_zero():
            return w
        cols = self.form(self.period).reduce(vectorize(w, self.period))
        return unvectorize(cols, self.n, self.period, self.p)

    def _common_level(self, other):
        g = gcd(self.period, other.period)
        return self.period // g * other.period

    def contains_submodule(self, other):
        if other.p != self.p or other.n != self.n:
            raise ContextError("subgroups of different ambient modules")
        if other.is_zero():
            return True
        if self.is_zero():
            return False
        level = self._common_level(other)
        form = self.form(level)
        reps = level // other.period
        for g in other.gens:
            for k in range(reps):
                if not form.contains(vectorize(g.shifted(k * other.period), level)):
                    return False
        return True

    def equals(self, other):
        if other.p != self.p or other.n != self.n:
            return False
        level = self._common_level(other)
        return self.form(level) == other.form(level)

    def canonical_key(self):
        e = self.minimal_period()
        return self.with_period(e).form(e).key()

    # -- period manipulation -------------------------------------------------

    def shifted(self, k):
        """x^k * U, presented at the same period."""
        return Submodule(self.n, self.p, self.period, (g.shifted(k) for g in self.gens))

    def scaled(self, f):
        """f * U for a nonzero scalar polynomial f."""
        return Submodule(self.n, self.p, self.period, (g.scaled(f) for g in self.gens))

    def has_period(self, s):
        """Exact check of x^s U = U."""
        if s < 1:
            raise DomainError("periods are positive")
        if s % self.period == 0:
            return True
        return self.shifted(s).equals(self)

    def with_period(self, new_period):
        """Re-present at another verified period.

        A finer period keeps the generator set (the coarser span is the same
        group once closure under the finer shift holds); a coarser period
        expands generators across the shift classes; anything else routes
        through the gcd, under which the group is also closed.
        """
        if new_period == self.period:
            return self
        if not self.has_period(new_period):
            raise PreconditionError(f"x^{new_period} U != U")
        if self.period % new_period == 0:
            return Submodule(self.n, self.p, new_period, self.gens)
        if new_period % self.period == 0:
            reps = new_period // self.period
            gens = [
                g.shifted(k * self.period) for g in self.gens for k in range(reps)
            ]
            return Submodule(self.n, self.p, new_period, gens)
        g = gcd(new_period, self.period)
        return Submodule(self.n, self.p, g, self.gens).with_period(new_period)

    def minimal_period(self, s=None):
        """Least e with x^e U = U; it divides any known period s."""
        if s is None:
            s = self.period
        elif not self.has_period(s):
            raise PreconditionError(f"x^{s} U != U: {s} is not a period of U")
        if self.is_zero():
            return 1
        for d in _divisors(s):
            if d == s or self.shifted(d).equals(self):
                return d
        return s

    # -- rank invariants ------------------------------------------------------

    def rank(self):
        """Module rank of U under the stored-period action."""
        return self.form(self.period).rank

    def rescaled_rank(self, m):
        """Rank of U as a module where x acts as x^m; requires x^m U = U."""
        if not self.has_period(m):
            raise PreconditionError(f"x^{m} U != U: cannot rescale by {m}")
        if m % self.period == 0:
            return self.form(m).rank
        return self.with_period(gcd(m, self.period)).form(m).rank

    def canonical(self):
        """Equivalent presentation at the minimal period, canonical generators."""
        e = self.minimal_period()
        base = self.with_period(e)
        form = base.form(e)
        gens = tuple(unvectorize(row, self.n, e, self.p) for row in form.rows)
        canon = Submodule(self.n, self.p, e, gens)
        canon._forms[e] = form
        return canon


@dataclass(frozen=True)
class InvariantReport:
    """Minimal period e, rank at that period, and the deficiency n*e - rank."""

    e: int
    rank: int
    deficiency: int


def invariant_report(U, s=None):
    """Compute (e, rk_e, n*e - rk_e) from any known period s."""
    e = U.minimal_period(s)
    rk = U.rescaled_rank(e)
    return InvariantReport(e=e, rank=rk, deficiency=U.n * e - rk)


# ---------------------------------------------------------------------------
# Counting and enumerating finite-codimension submodules of R^k.
# ---------------------------------------------------------------------------


def count_submodules(p, k, codim):
    """Number of submodules of R^k with F_p-codimension ``codim`` (exact)."""
    check_prime(p)
    if k < 1:
        raise DomainError("k must be >= 1")
    if codim < 0:
        raise DomainError("codimension must be >= 0")
    if codim == 0:
        return 1
    return p ** (codim * k) - p ** ((codim - 1) * k)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _int_to_poly(p, value, length):
    coeffs = []
    for _ in range(length):
        value, c = divmod(value, p)
        coeffs.append(c)
    return Poly(p, coeffs)


def submodules_of_codimension(p, k, codim, budget=ENUMERATION_BUDGET):
    """All submodules of R^k of F_p-codimension ``codim``, canonical order.

    Enumerates canonical upper-triangular Laurent-Hermite matrices directly:
    monic diagonal entries with nonzero constant term whose degrees sum to
    ``codim``, entries above a pivot free of degree below the pivot's.
    """
    check_prime(p)
    total = count_submodules(p, k, codim)
    if total > budget:
        raise ResourceBudgetError(
            f"enumeration of {total} submodules exceeds budget {budget}",
            requested=total,
        )
    out = []
    for degs in _compositions(codim, k):
        diag_choices = []
        for d in degs:
            if d == 0:
                diag_choices.append([Poly.one(p)])
            else:
                polys = []
                for c0 in range(1, p):
                    for mid in range(p ** (d - 1)):
                        coeffs = [c0]
                        v = mid
                        for _ in range(d - 1):
                            v, c = divmod(v, p)
                            coeffs.append(c)
                        coeffs.append(1)
                        polys.append(Poly(p, coeffs, normalize=False))
                diag_choices.append(polys)
        above_counts = [p ** (degs[i] * i) for i in range(k)]
        for diag in itertools.product(*diag_choices):
            for above_idx in itertools.product(*(range(c) for c in above_counts)):
                rows = [[Poly.zero(p)] * k for _ in range(k)]
                for i in range(k):
                    rows[i][i] = diag[i]
                for col in range(k):
                    d = degs[col]
                    if d == 0 or col == 0:
                        continue
                    v = above_idx[col]
                    for row in range(col):
                        v, entry = divmod(v, p**d)
                        rows[row][col] = _int_to_poly(p, entry, d)
                gens = tuple(
                    unvectorize(
                        [LaurentPoly.from_poly(e) for e in row], k, 1, p
                    )
                    for row in rows
                )
                out.append(Submodule(k, p, 1, gens))
    return out


# ---------------------------------------------------------------------------
# Constructions: subgroups with prescribed (period, rescaled rank).
# ---------------------------------------------------------------------------


def _codim_one_candidates(p, ncols):
    """Canonical codimension-1 forms of the rank-``ncols`` module, lex order."""
    for pos in range(ncols):
        for c0 in range(1, p):
            for above in range(p**pos):
                rows = []
                v = above
                above_entries = []
                for _ in range(pos):
                    v, e = divmod(v, p)
                    above_entries.append(e)
                for j in range(ncols):
                    row = [LaurentPoly.zero(p)] * ncols
                    if j == pos:
                        row[j] = LaurentPoly.from_poly(Poly(p, (c0, 1)))
                    else:
                        row[j] = LaurentPoly.one(p)
                        if j < pos and above_entries[j]:
                            row[pos] = LaurentPoly.monomial(p, 0, above_entries[j])
                    rows.append(row)
                yield rows


def _full_rank_piece(n, p, b):
    """Subgroup of R^n with x^b-period exactly b and finite codimension.

    Searches codimension-1 canonical forms in lexicographic order and returns
    the first whose minimal period is exactly b.
    """
    ncols = n * b
    for rows in _codim_one_candidates(p, ncols):
        gens = tuple(unvectorize(row, n, b, p) for row in rows)
        candidate = Submodule(n, p, b, gens)
        if candidate.minimal_period(b) == b:
            return candidate
    raise ArithmeticError("no codimension-1 subgroup of exact period found")


def construct_with_invariants(n, p, b, r):
    """Additive subgroup U of R^n with minimal period b and rescaled rank r.

    ``0 < r <= n*b``.  For r = n*b (and b > 1) this is the codimension-1
    search; for smaller r it is a coordinatewise sum of one-coordinate
    pieces, using rank additivity.
    """
    check_prime(p)
    if not 0 < r <= n * b:
        raise DomainError(f"rescaled rank {r} outside (0, {n * b}]")
    if b == 1:
        gens = tuple(LaurentVector.unit(n, p, i) for i in range(r))
        return Submodule(n, p, 1, gens)
    full, rem = divmod(r, b)
    if full == n:
        return _full_rank_piece(n, p, b)
    gens = []
    for coord in range(full):
        piece = _full_rank_piece(1, p, b)
        for g in piece.gens:
            coords = [LaurentPoly.zero(p)] * n
            coords[coord] = g.coords[0]
            gens.append(LaurentVector(p, coords))
    if rem:
        for i in range(rem):
            gens.append(LaurentVector.unit(n, p, full, exponent=i))
    return Submodule(n, p, b, gens)


def vanish_sequence(U, count):
    """U_m = f_m * U along the non-unit irreducibles; tends to the zero subgroup."""
    return [U.scaled(f) for f in enumerate_irreducibles(U.p, count)]


def approach_sequence(U, b, r_target, count, s=None):
    """Strictly larger subgroups converging to U with prescribed invariants.

    Returns U_m with U ⊂ U_m, minimal period e(U)*b, deficiency
    n*e(U_m) - rk(U_m) equal to ``r_target``, and membership of any fixed
    vector outside U eventually failing.  Requires the deficiency of U to be
    positive and ``r_target < deficiency(U) * b``.
    """
    n, p = U.n, U.p
    report = invariant_report(U, s)
    e, r_u = report.e, report.deficiency
    if r_u <= 0:
        raise DomainError(
            f"deficiency of U must be positive: n*e - rk = {n}*{e} - {report.rank} = {r_u}"
        )
    if r_target < 0:
        raise DomainError(f"target deficiency must be >= 0, got {r_target}")
    if r_target >= r_u * b:
        raise DomainError(
            f"target deficiency must satisfy r_target < deficiency*b: "
            f"{r_target} >= {r_u}*{b} = {r_u * b}"
        )
    base = U.with_period(e)
    form = base.form(e)
    ncols = n * e
    pivot_set = set(form.pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    n_free = len(free_cols)  # equals the deficiency r_u
    # Build the prescribed-invariant subgroup in the free quotient coordinates.
    quotient_piece = construct_with_invariants(n_free, p, b, n_free * b - r_target)
    base_gens = []
    for row in form.rows:
        g = unvectorize(row, n, e, p)
        for j in range(b):
            base_gens.append(g.shifted(j * e))
    out = []
    for f in enumerate_irreducibles(p, count):
        gens = list(base_gens)
        for t in quotient_piece.scaled(f).gens:
            cols = [LaurentPoly.zero(p)] * ncols
            for a, entry in enumerate(t.coords):
                cols[free_cols[a]] = entry
            gens.append(unvectorize(cols, n, e, p))
        out.append(Submodule(n, p, e * b, gens))
    return out
