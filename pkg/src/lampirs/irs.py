"""Exact finite-window calculus for shift-invariant measures on lamp subgroups.

A window [i, j] of sites carries the finite coordinate space F_p^(n*(j-i+1));
subgroups of the window are F_p-subspaces stored in reduced echelon form, so
each subgroup has one representative.  A measure on subgroups of the lamp
group is handled purely through its window marginals, which are exact
finitely supported rational distributions.

The ergodic approximants mu_m are built from the window-[0, m-1] marginal:
independent blocks of length m laid side by side with a uniformly random
phase.  Their marginals, stationarity, and distance to the approximated
measure are all computed exactly; Monte Carlo appears only in the seeded
samplers, with explicit statistical tolerances.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, gcd

from .algebra import LaurentPoly, check_prime
from .errors import ContextError, DomainError, ResourceBudgetError
from .fplinalg import rref, right_nullspace, span_contains, span_intersect_coordinates
from .lamplighter import SITE_EXPONENT_SIGN
from .rng import SplitMix64
from .submodules import LaurentVector, vectorize

SUBSPACE_BUDGET = 200_000
WINDOW_DIM_BUDGET = 24  # exact marginals stay finitely supported well past this


def _cumulative_table(items):
    """Common denominator and integer cumulative thresholds for exact sampling."""
    den = 1
    for _, prob in items:
        den = den * prob.denominator // gcd(den, prob.denominator)
    acc, table = 0, []
    for ws, prob in items:
        acc += int(prob * den)
        table.append((acc, ws))
    return den, table


def _leq_with_sqrt_tolerance(value, bound, tol_sq):
    """value <= bound + sqrt(tol_sq), compared exactly in rationals."""
    excess = value - bound
    return excess <= 0 or excess * excess <= tol_sq


def gaussian_binomial(d, k, p):
    """Number of k-dimensional subspaces of F_p^d (exact integer)."""
    num = den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (k - i) - 1
    return num // den


def count_subspaces(p, d):
    return sum(gaussian_binomial(d, k, p) for k in range(d + 1))


class WindowSubgroup:
    """Subgroup of the window coordinate space, reduced-echelon basis."""

    __slots__ = ("p", "n", "lo", "hi", "rows")

    def __init__(self, p, n, lo, hi, rows, reduce=True):
        check_prime(p)
        if hi < lo:
            raise DomainError("empty window")
        dim = n * (hi - lo + 1)
        if reduce:
            rows, _ = rref(rows, p)
        rows = tuple(tuple(r) for r in rows)
        for r in rows:
            if len(r) != dim:
                raise DomainError("basis row of wrong width")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("WindowSubgroup is immutable")

    @property
    def width(self):
        return self.hi - self.lo + 1

    @property
    def space_dim(self):
        return self.n * self.width

    @property
    def dim(self):
        return len(self.rows)

    @classmethod
    def zero(cls, p, n, lo, hi):
        return cls(p, n, lo, hi, (), reduce=False)

    @classmethod
    def full(cls, p, n, lo, hi):
        d = n * (hi - lo + 1)
        rows = tuple(
            tuple(1 if i == j else 0 for j in range(d)) for i in range(d)
        )
        return cls(p, n, lo, hi, rows, reduce=False)

    def key(self):
        return (self.dim, self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, WindowSubgroup)
            and (self.p, self.n, self.lo, self.hi) == (other.p, other.n, other.lo, other.hi)
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.p, self.n, self.lo, self.hi, self.rows))

    def coord_index(self, site, component=0):
        return (site - self.lo) * self.n + component

    def transported(self, new_lo):
        """Same subgroup pattern relabelled to start at ``new_lo``."""
        return WindowSubgroup(
            self.p, self.n, new_lo, new_lo + self.width - 1, self.rows, reduce=False
        )

    def project(self, lo, hi):
        """Intersection with the coordinate subspace of the subwindow [lo, hi]."""
        if lo < self.lo or hi > self.hi or hi < lo:
            raise DomainError("subwindow not nested in window")
        keep = [
            self.coord_index(site, c)
            for site in range(lo, hi + 1)
            for c in range(self.n)
        ]
        inside = span_intersect_coordinates(self.rows, keep, self.p, self.space_dim)
        width = (hi - lo + 1) * self.n
        offset = (lo - self.lo) * self.n
        rows = tuple(r[offset : offset + width] for r in inside)
        return WindowSubgroup(self.p, self.n, lo, hi, rows, reduce=False)

    def intersect_sites(self, sites):
        """Intersection with the span of an arbitrary subset of sites (full width)."""
        keep = [
            self.coord_index(site, c) for site in sorted(sites) for c in range(self.n)
        ]
        rows = span_intersect_coordinates(self.rows, keep, self.p, self.space_dim)
        return WindowSubgroup(self.p, self.n, self.lo, self.hi, rows, reduce=False)

    def embedded(self, lo, hi):
        """The same subgroup inside a larger window (zero outside)."""
        if lo > self.lo or hi < self.hi:
            raise DomainError("target window must contain the window")
        left = (self.lo - lo) * self.n
        right = (hi - self.hi) * self.n
        rows = tuple((0,) * left + r + (0,) * right for r in self.rows)
        return WindowSubgroup(self.p, self.n, lo, hi, rows, reduce=False)

    def sum_with(self, other):
        """Subgroup generated jointly with another on the same window."""
        if (self.p, self.n, self.lo, self.hi) != (other.p, other.n, other.lo, other.hi):
            raise ContextError("window mismatch")
        return WindowSubgroup(self.p, self.n, self.lo, self.hi, self.rows + other.rows)

    def contains(self, vec):
        reduced, pivots = rref(self.rows, self.p)
        return span_contains(reduced, pivots, vec, self.p)

    def to_vector_list(self):
        """Basis rows as lamp configurations (Laurent vectors)."""
        out = []
        for row in self.rows:
            coords = [LaurentPoly.zero(self.p)] * self.n
            for idx, c in enumerate(row):
                if c:
                    site = self.lo + idx // self.n
                    comp = idx % self.n
                    coords[comp] = coords[comp] + LaurentPoly.monomial(
                        self.p, SITE_EXPONENT_SIGN * site, c
                    )
            out.append(LaurentVector(self.p, coords))
        return out


def enumerate_subspaces(p, d, budget=SUBSPACE_BUDGET):
    """Every subspace of F_p^d as an echelon row tuple, no duplicates.

    Documented desk budgets: p = 2 up to d = 6, p = 3 up to d = 4.
    """
    check_prime(p)
    total = count_subspaces(p, d)
    if total > budget:
        raise ResourceBudgetError(
            f"{total} subspaces of F_{p}^{d} exceed budget {budget}", requested=total
        )
    out = [()]
    for k in range(1, d + 1):
        for pivots in itertools.combinations(range(d), k):
            free_positions = []
            for row_idx, pc in enumerate(pivots):
                for col in range(pc + 1, d):
                    if col not in pivots:
                        free_positions.append((row_idx, col))
            for assignment in itertools.product(range(p), repeat=len(free_positions)):
                rows = [[0] * d for _ in range(k)]
                for row_idx, pc in enumerate(pivots):
                    rows[row_idx][pc] = 1
                for (row_idx, col), value in zip(free_positions, assignment):
                    rows[row_idx][col] = value
                out.append(tuple(tuple(r) for r in rows))
    if len(out) != total:
        raise ArithmeticError("subspace enumeration does not match the count")
    return out


class WindowDistribution:
    """Exact finitely supported distribution over window subgroups."""

    __slots__ = ("p", "n", "lo", "hi", "atoms", "_cum")

    def __init__(self, p, n, lo, hi, atoms, check=True):
        self.p = p
        self.n = n
        self.lo = lo
        self.hi = hi
        merged = {}
        for ws, prob in atoms.items() if isinstance(atoms, dict) else atoms:
            prob = Fraction(prob)
            if prob < 0:
                raise DomainError("negative probability")
            if prob == 0:
                continue
            if (ws.p, ws.n, ws.lo, ws.hi) != (p, n, lo, hi):
                raise ContextError("atom on a different window")
            merged[ws] = merged.get(ws, Fraction(0)) + prob
        self.atoms = merged
        self._cum = None
        if check and sum(merged.values(), Fraction(0)) != 1:
            raise DomainError("probabilities must sum to 1")

    @classmethod
    def point(cls, ws):
        return cls(ws.p, ws.n, ws.lo, ws.hi, {ws: Fraction(1)})

    def sorted_items(self):
        return sorted(self.atoms.items(), key=lambda kv: kv[0].key())

    def support(self):
        return list(self.atoms)

    def prob(self, ws):
        return self.atoms.get(ws, Fraction(0))

    def map_support(self, fn, lo, hi):
        out = {}
        for ws, prob in self.atoms.items():
            img = fn(ws)
            out[img] = out.get(img, Fraction(0)) + prob
        return WindowDistribution(self.p, self.n, lo, hi, out)

    def project(self, lo, hi):
        """Exact pushforward under intersection with a nested subwindow."""
        return self.map_support(lambda ws: ws.project(lo, hi), lo, hi)

    def transported(self, new_lo):
        return self.map_support(
            lambda ws: ws.transported(new_lo), new_lo, new_lo + self.hi - self.lo
        )

    def convolve_disjoint(self, other, lo, hi):
        """Distribution of independent direct sums inside the window [lo, hi]."""
        out = {}
        for ws1, p1 in self.atoms.items():
            e1 = ws1.embedded(lo, hi)
            for ws2, p2 in other.atoms.items():
                e2 = ws2.embedded(lo, hi)
                combined = e1.sum_with(e2)
                out[combined] = out.get(combined, Fraction(0)) + p1 * p2
        return WindowDistribution(self.p, self.n, lo, hi, out)

    def mixed_with(self, other, weight_self, weight_other):
        if (self.p, self.n, self.lo, self.hi) != (other.p, other.n, other.lo, other.hi):
            raise ContextError("window mismatch in mixture")
        out = dict(self.atoms)
        for ws, prob in out.items():
            out[ws] = prob * weight_self
        for ws, prob in other.atoms.items():
            out[ws] = out.get(ws, Fraction(0)) + prob * weight_other
        return WindowDistribution(self.p, self.n, self.lo, self.hi, out)

    def __eq__(self, other):
        return (
            isinstance(other, WindowDistribution)
            and (self.p, self.n, self.lo, self.hi)
            == (other.p, other.n, other.lo, other.hi)
            and self.atoms == other.atoms
        )

    def sample(self, rng):
        """Exact draw: one uniform integer below the common denominator."""
        if self._cum is None:
            self._cum = _cumulative_table(self.sorted_items())
        den, table = self._cum
        ticket = rng.below(den)
        for acc, ws in table:
            if ticket < acc:
                return ws
        return table[-1][1]


def tv_distance(d1, d2):
    """L1 distance between two distributions on the same window (exact)."""
    if (d1.p, d1.n, d1.lo, d1.hi) != (d2.p, d2.n, d2.lo, d2.hi):
        raise DomainError("distributions on different windows")
    keys = set(d1.atoms) | set(d2.atoms)
    return sum((abs(d1.prob(k) - d2.prob(k)) for k in keys), Fraction(0))


# ---------------------------------------------------------------------------
# Measures given by their window marginals.
# ---------------------------------------------------------------------------


def window_of_submodule(U, lo, hi):
    """Exact intersection of a presented subgroup with a site window.

    Membership reduction against the canonical form is F_p-linear, so the
    intersection is the kernel of the residual map on the window space.
    """
    n, p = U.n, U.p
    width = hi - lo + 1
    dim = n * width
    if U.is_zero():
        return WindowSubgroup.zero(p, n, lo, hi)
    level = U.period
    form = U.form(level)
    residuals = []
    for site in range(lo, hi + 1):
        for comp in range(n):
            vec = LaurentVector.unit(n, p, comp, exponent=SITE_EXPONENT_SIGN * site)
            residuals.append(form.reduce(vectorize(vec, level)))
    # Encode residuals over a common exponent window to get an F_p matrix.
    min_exp, max_exp = 0, 0
    for res in residuals:
        for entry in res:
            if not entry.is_zero():
                min_exp = min(min_exp, entry.min_exp)
                max_exp = max(max_exp, entry.max_exp)
    span = max_exp - min_exp + 1
    ncols = form.ncols
    matrix = []
    for res in residuals:
        row = [0] * (ncols * span)
        for col, entry in enumerate(res):
            for exp, c in entry.terms():
                row[col * span + (exp - min_exp)] = c
        matrix.append(row)
    # Kernel of w -> residual(w): combinations of rows summing to zero.
    transposed = [
        [matrix[i][j] for i in range(dim)] for j in range(ncols * span)
    ]
    kernel = right_nullspace(transposed, p, dim)
    return WindowSubgroup(p, n, lo, hi, kernel, reduce=False)


class SubgroupMeasure:
    """Measure on lamp subgroups accessed through exact window marginals."""

    def __init__(self, marginal_fn, tag, invariant, atoms=None):
        self._marginal_fn = marginal_fn
        self.tag = tag
        self.invariant = invariant
        self.atoms = atoms
        self._cache = {}

    def marginal(self, lo, hi):
        key = (lo, hi)
        if key not in self._cache:
            self._cache[key] = self._marginal_fn(lo, hi)
        return self._cache[key]

    @classmethod
    def point(cls, U):
        invariant = U.has_period(1)

        def marginal(lo, hi):
            return WindowDistribution.point(window_of_submodule(U, lo, hi))

        return cls(marginal, "point-mass", invariant, atoms=((Fraction(1), U),))

    @classmethod
    def mixture(cls, weighted_atoms):
        atoms = tuple((Fraction(w), U) for w, U in weighted_atoms)
        if sum((w for w, _ in atoms), Fraction(0)) != 1:
            raise DomainError("mixture weights must sum to 1")
        if not atoms:
            raise DomainError("mixture needs at least one atom")
        n, p = atoms[0][1].n, atoms[0][1].p

        def marginal(lo, hi):
            out = {}
            for w, U in atoms:
                ws = window_of_submodule(U, lo, hi)
                out[ws] = out.get(ws, Fraction(0)) + w
            return WindowDistribution(p, n, lo, hi, out)

        # Invariant when the weighted multiset of atoms is shift-stable.
        def shift_key(U):
            return U.canonical_key()

        weights = {}
        shifted_weights = {}
        for w, U in atoms:
            weights[shift_key(U)] = weights.get(shift_key(U), Fraction(0)) + w
            k2 = shift_key(U.shifted(1))
            shifted_weights[k2] = shifted_weights.get(k2, Fraction(0)) + w
        invariant = weights == shifted_weights
        return cls(marginal, "mixture", invariant, atoms=atoms)

    def check_consistency(self, lo, hi, sub_lo, sub_hi):
        """Spot-check: projecting a marginal matches the smaller marginal."""
        outer = self.marginal(lo, hi).project(sub_lo, sub_hi)
        inner = self.marginal(sub_lo, sub_hi)
        return outer == inner


def block_shift_term_marginal(mu, m, k, lo, hi):
    """Window marginal of the k-th shifted block-tiling term of mu_m.

    Blocks of length m start at sites congruent to -k mod m and carry
    independent copies of the window-[0, m-1] marginal of mu.
    """
    if not 0 <= k < m:
        raise DomainError("shift class k must satisfy 0 <= k < m")
    block_law = mu.marginal(0, m - 1)
    pieces = []
    start = lo - ((lo + k) % m)
    while start <= hi:
        run_lo = max(lo, start)
        run_hi = min(hi, start + m - 1)
        local = block_law.project(run_lo - start, run_hi - start)
        pieces.append(local.transported(run_lo))
        start += m
    result = None
    for piece in pieces:
        if result is None:
            result = piece.map_support(lambda ws: ws.embedded(lo, hi), lo, hi)
        else:
            result = result.convolve_disjoint(piece, lo, hi)
    return result


def block_average_marginal(mu, m, lo, hi):
    """Exact window marginal of the shift-averaged block measure mu_m."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if not mu.invariant:
        raise DomainError("the block construction requires a shift-invariant measure")
    sample = mu.marginal(0, m - 1)
    dim = sample.n * max(m, hi - lo + 1)
    if dim > WINDOW_DIM_BUDGET:
        raise ResourceBudgetError(
            f"window dimension {dim} exceeds the desk budget {WINDOW_DIM_BUDGET}",
            requested=dim,
        )
    out = {}
    p = n = None
    share = Fraction(1, m)
    for k in range(m):
        term = block_shift_term_marginal(mu, m, k, lo, hi)
        p, n = term.p, term.n
        for ws, prob in term.atoms.items():
            out[ws] = out.get(ws, Fraction(0)) + prob * share
    return WindowDistribution(p, n, lo, hi, out)


def block_average_measure(mu, m):
    """mu_m as a measure object (marginals computed exactly on demand)."""

    def marginal(lo, hi):
        return block_average_marginal(mu, m, lo, hi)

    return SubgroupMeasure(marginal, f"block-average(m={m})", True)


def convergence_report(mu, m, j):
    """Exact distance of the mu_m window-[0, j] marginal from mu's.

    PASS requires the conservative bound 2(j+1)/m; whether the literal
    bound 2j/m also held is reported separately.
    """
    approx = block_average_marginal(mu, m, 0, j)
    target = mu.marginal(0, j)
    tv = tv_distance(approx, target)
    literal = Fraction(2 * j, m)
    conservative = Fraction(2 * (j + 1), m)
    return {
        "m": m,
        "j": j,
        "tv": tv,
        "literal_bound": literal,
        "conservative_bound": conservative,
        "pass": tv <= conservative,
        "literal_bound_held": tv <= literal,
    }


def sample_block_average_window(mu, m, lo, hi, rng, _cache=None):
    """One draw from the mu_m window marginal: random phase, independent blocks."""
    k = rng.below(m)
    block_law = mu.marginal(0, m - 1)
    result = None
    start = lo - ((lo + k) % m)
    while start <= hi:
        run_lo = max(lo, start)
        run_hi = min(hi, start + m - 1)
        block = block_law.sample(rng)
        key = (block, run_lo - start, run_hi - start, run_lo)
        piece = _cache.get(key) if _cache is not None else None
        if piece is None:
            piece = block.project(run_lo - start, run_hi - start).transported(run_lo)
            piece = piece.embedded(lo, hi)
            if _cache is not None:
                _cache[key] = piece
        result = piece if result is None else result.sum_with(piece)
        start += m
    return result


def empirical_distribution(p, n, lo, hi, counts, trials):
    atoms = {ws: Fraction(c, trials) for ws, c in counts.items() if c}
    return WindowDistribution(p, n, lo, hi, atoms)


def sampler_law_report(mu, m, lo, hi, trials, seed):
    """Empirical law of the seeded sampler against the exact marginal."""
    rng = SplitMix64(seed)
    exact = block_average_marginal(mu, m, lo, hi)
    counts = {}
    piece_cache = {}
    for _ in range(trials):
        ws = sample_block_average_window(mu, m, lo, hi, rng, _cache=piece_cache)
        counts[ws] = counts.get(ws, 0) + 1
    empirical = empirical_distribution(exact.p, exact.n, lo, hi, counts, trials)
    tv = tv_distance(empirical, exact)
    support = len(exact.atoms)
    # sqrt bound kept exact: compare squares instead of taking roots.
    tolerance_sq = Fraction(9 * support, trials)
    return {
        "trials": trials,
        "tv": tv,
        "support": support,
        "tolerance_sq": tolerance_sq,
        "within_tolerance": _leq_with_sqrt_tolerance(tv, Fraction(0), tolerance_sq),
        "empirical": empirical,
        "exact": exact,
    }


# ---------------------------------------------------------------------------
# Splicing two measures along a random site partition (majority sets).
# ---------------------------------------------------------------------------


def majority_symmetric_difference(n_ai):
    """Exact measure of (majority window) XOR (its shift): central binomial mass."""
    if n_ai < 1 or n_ai % 2 == 0:
        raise DomainError("the majority window length must be odd")
    half = (n_ai - 1) // 2
    return Fraction(comb(n_ai - 1, half), 2**n_ai)


def splice_measures(mu1, mu2, n_ai, lo, hi, trials, seed):
    """Empirical law of splicing two subgroup measures along majority sets.

    A site g joins the first part when the fair-coin word on sites
    [g, g + n_ai) has more ones than zeros (n_ai odd, so exactly measure 1/2);
    the spliced subgroup keeps the first sample's lamps on those sites and
    the second sample's lamps elsewhere.  Returns (empirical, target, report)
    where target is the even mixture of the two window marginals.
    """
    if n_ai % 2 == 0:
        raise DomainError("n_ai must be odd so the majority set has measure 1/2")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = SplitMix64(seed)
    marg1 = mu1.marginal(lo, hi)
    marg2 = mu2.marginal(lo, hi)
    p, n = marg1.p, marg1.n
    width = hi - lo + 1
    coin_len = width - 1 + n_ai
    den1, table1 = _cumulative_table(marg1.sorted_items())
    den2, table2 = _cumulative_table(marg2.sorted_items())

    def draw(rng, den, table):
        ticket = rng.below(den)
        for acc, ws in table:
            if ticket < acc:
                return ws
        return table[-1][1]

    half = n_ai // 2
    counts = {}
    all_first = 0
    all_second = 0
    key_cache = {}
    for trial in range(trials):
        stream = rng.fork(n_ai, trial)
        ws1 = draw(stream, den1, table1)
        ws2 = draw(stream, den2, table2)
        coins = stream.bits(coin_len)
        mask = 0
        for cell in range(width):
            window_word = (coins >> cell) & ((1 << n_ai) - 1)
            if window_word.bit_count() > half:
                mask |= 1 << cell
        if mask == (1 << width) - 1:
            all_first += 1
        if mask == 0:
            all_second += 1
        key = (ws1, ws2, mask)
        spliced = key_cache.get(key)
        if spliced is None:
            first_sites = [lo + c for c in range(width) if (mask >> c) & 1]
            second_sites = [lo + c for c in range(width) if not (mask >> c) & 1]
            part1 = ws1.intersect_sites(first_sites) if first_sites else None
            part2 = ws2.intersect_sites(second_sites) if second_sites else None
            if part1 is None:
                spliced = part2
            elif part2 is None:
                spliced = part1
            else:
                spliced = part1.sum_with(part2)
            key_cache[key] = spliced
        counts[spliced] = counts.get(spliced, 0) + 1
    empirical = empirical_distribution(p, n, lo, hi, counts, trials)
    target = marg1.mixed_with(marg2, Fraction(1, 2), Fraction(1, 2))
    tv = tv_distance(empirical, target)
    lambda_first = Fraction(all_first, trials)
    lambda_second = Fraction(all_second, trials)
    defect = 2 * (1 - lambda_first - lambda_second)
    support = len(set(target.atoms) | set(empirical.atoms))
    tolerance_sq = Fraction(9 * support, trials)
    report = {
        "n_ai": n_ai,
        "trials": trials,
        "tv": tv,
        "lambda_all_first": lambda_first,
        "lambda_all_second": lambda_second,
        "boundary_defect_bound": defect,
        "mc_tolerance_sq": tolerance_sq,
        "within_bound": _leq_with_sqrt_tolerance(tv, defect, tolerance_sq),
        "majority_sym_diff_exact": majority_symmetric_difference(n_ai),
    }
    return empirical, target, report


def majority_invariance_estimate(n_ai, trials, seed):
    """Empirical measure of (majority set) XOR (shifted majority set)."""
    rng = SplitMix64(seed)
    hits = 0
    half = n_ai // 2
    for _ in range(trials):
        coins = rng.bits(n_ai + 1)
        w1 = coins & ((1 << n_ai) - 1)
        w2 = coins >> 1
        if (w1.bit_count() > half) != (w2.bit_count() > half):
            hits += 1
    return Fraction(hits, trials)
