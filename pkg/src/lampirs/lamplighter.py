"""The lamplighter group on (Z/pZ)^n lamps, its elements and subgroup triples.

A group element is a pair (v, s): a finitely supported lamp configuration
v in R^n together with a mover position s in Z.  Multiplication is
(v, s)(w, t) = (v + x^s w, s + t) and inversion (v, s)^-1 = (-x^-s v, -s).

Shift convention (global, fixed once): multiplying a configuration by x
moves the lamp at site i+1 to site i, so the delta configuration at site k
is the Laurent monomial x^-k.  ``delta_site`` and ``site_of_exponent`` are
the only places this sign appears.

A subgroup not inside the lamp group is encoded by a triple (s, U, v):
s generates the image of the projection to Z, U is the intersection with
the lamp group (closed under x^{±s}), and (v, s) is any element hitting s.
For subgroups of the lamp group, s = 0 and v = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import LaurentPoly, check_prime
from .errors import ContextError, DomainError, PreconditionError
from .submodules import LaurentVector, invariant_report

SITE_EXPONENT_SIGN = -1  # site k <-> Laurent exponent -k


def delta_site(n, p, site, component=0, value=1):
    """Configuration with a single lamp set at the given site."""
    return LaurentVector.unit(n, p, component, exponent=SITE_EXPONENT_SIGN * site, coeff=value)


def site_of_exponent(exponent):
    return SITE_EXPONENT_SIGN * exponent


class GroupElement:
    """Element (lamps, shift) of the lamplighter group."""

    __slots__ = ("n", "p", "lamps", "shift")

    def __init__(self, lamps, shift):
        object.__setattr__(self, "n", lamps.n)
        object.__setattr__(self, "p", lamps.p)
        object.__setattr__(self, "lamps", lamps)
        object.__setattr__(self, "shift", int(shift))

    def __setattr__(self, *a):
        raise AttributeError("GroupElement is immutable")

    @classmethod
    def identity(cls, n, p):
        return cls(LaurentVector.zero(n, p), 0)

    def is_identity(self):
        return self.shift == 0 and self.lamps.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.shift == other.shift
            and self.lamps == other.lamps
        )

    def __hash__(self):
        return hash((self.shift, self.lamps))

    def __mul__(self, other):
        if self.n != other.n or self.p != other.p:
            raise ContextError("elements of different lamplighter groups")
        return GroupElement(
            self.lamps + other.lamps.shifted(self.shift), self.shift + other.shift
        )

    def inverse(self):
        return GroupElement((-self.lamps).shifted(-self.shift), -self.shift)

    def __repr__(self):
        from .formats import format_vector

        return f"GroupElement({format_vector(self.lamps)}, {self.shift})"


def multiply(g, h):
    return g * h


def power(g, k):
    """g^k via the closed form (v, s)^k = ((1 + x^s + ... + x^{s(k-1)}) v, k s)."""
    if k == 0:
        return GroupElement.identity(g.n, g.p)
    if k < 0:
        return power(g.inverse(), -k)
    if g.shift == 0:
        return GroupElement(g.lamps.scaled(k % g.p), 0)
    factor = LaurentPoly.zero(g.p)
    for i in range(k):
        factor = factor + LaurentPoly.monomial(g.p, g.shift * i)
    return GroupElement(g.lamps.scaled(factor), k * g.shift)


def conjugate_element(g, h):
    """g h g^{-1}, computed directly from the group law."""
    return g * h * g.inverse()


class SubgroupTriple:
    """Subgroup encoded as (s, U, v); validated on construction."""

    __slots__ = ("n", "p", "s", "lamps", "v", "_powers")

    def __init__(self, s, lamps, v=None, check=True):
        s = int(s)
        if s < 0:
            raise DomainError("s must be >= 0")
        n, p = lamps.n, lamps.p
        check_prime(p)
        if v is None:
            v = LaurentVector.zero(n, p)
        if v.p != p or v.n != n:
            raise ContextError("v from a different ambient module")
        if check:
            if s == 0:
                if not v.is_zero():
                    raise DomainError("triples with s = 0 must have v = 0")
            elif not lamps.has_period(s):
                raise PreconditionError(f"x^{s} U != U: invalid triple")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "lamps", lamps)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "_powers", {})

    def __setattr__(self, *a):
        raise AttributeError("SubgroupTriple is immutable")

    def _marker_power(self, k):
        cached = self._powers.get(k)
        if cached is None:
            cached = power(GroupElement(self.v, self.s), k)
            self._powers[k] = cached
        return cached

    # -- projections ---------------------------------------------------------

    @property
    def shift_projection(self):
        """Generator of the image of the projection to Z."""
        return self.s

    @property
    def lamp_intersection(self):
        """Intersection with the lamp subgroup."""
        return self.lamps

    # -- membership and equality ----------------------------------------------

    def contains_element(self, g):
        """Exact membership test for a group element."""
        if g.n != self.n or g.p != self.p:
            raise ContextError("element of a different lamplighter group")
        if self.s == 0:
            return g.shift == 0 and self.lamps.contains_vector(g.lamps)
        if g.shift % self.s:
            return False
        k = g.shift // self.s
        residue = g * self._marker_power(-k)
        return self.lamps.contains_vector(residue.lamps)

    def canonical(self):
        """Canonical form: U at its minimal period, v reduced modulo U."""
        U = self.lamps.canonical()
        v = U.reduce_vector(self.v) if self.s else LaurentVector.zero(self.n, self.p)
        return SubgroupTriple(self.s, U, v, check=False)

    def same_subgroup(self, other):
        if (self.n, self.p, self.s) != (other.n, other.p, other.s):
            return False
        return self.lamps.equals(other.lamps) and self.lamps.contains_vector(
            self.v - other.v
        )

    def contains_subgroup(self, other):
        """Does this subgroup contain ``other``?  Exact, by the triple criteria.

        Writing self = (s', U', v') and other = (s, U, v): requires s' | s,
        U ⊆ U', and v ≡ (1 + x^{s'} + ... + x^{s - s'}) v' modulo U'.
        """
        if other.n != self.n or other.p != self.p:
            raise ContextError("subgroups of different lamplighter groups")
        if other.s == 0:
            return self.lamps.contains_submodule(other.lamps)
        if self.s == 0:
            return False
        if other.s % self.s:
            return False
        if not self.lamps.contains_submodule(other.lamps):
            return False
        t = other.s // self.s
        factor = LaurentPoly.zero(self.p)
        for i in range(t):
            factor = factor + LaurentPoly.monomial(self.p, self.s * i)
        return self.lamps.contains_vector(other.v - self.v.scaled(factor))

    def conjugated(self, g):
        """The conjugate subgroup g V g^{-1}, canonical.

        Closed form: for g = (w, u) the triple becomes
        (s, x^u U, x^u v + (1 - x^s) w).
        """
        if g.n != self.n or g.p != self.p:
            raise ContextError("element of a different lamplighter group")
        new_lamps = self.lamps.shifted(g.shift)
        if self.s == 0:
            return SubgroupTriple(0, new_lamps.canonical(), None, check=False)
        one = LaurentPoly.one(self.p)
        factor = one - LaurentPoly.monomial(self.p, self.s)
        new_v = self.v.shifted(g.shift) + g.lamps.scaled(factor)
        return SubgroupTriple(self.s, new_lamps, new_v, check=False).canonical()

    def poset_encoding(self):
        """Pair (t, r): shift generator over lamp period, and lamp deficiency."""
        if self.s == 0:
            raise DomainError(
                "s = 0 subgroups live in the perfect kernel and are not encoded"
            )
        report = invariant_report(self.lamps, self.s)
        return (self.s // report.e, report.deficiency)

    def invariants(self):
        """(s, e, rk, deficiency, t, r) for reporting."""
        report = invariant_report(self.lamps, self.s if self.s else None)
        t = self.s // report.e if self.s else 0
        return {
            "s": self.s,
            "e": report.e,
            "rk": report.rank,
            "r": report.deficiency,
            "t": t,
            "r_encoding": report.deficiency,
        }

    def __repr__(self):
        from .formats import format_vector

        return (
            f"SubgroupTriple(s={self.s}, gens={len(self.lamps.gens)},"
            f" v={format_vector(self.v)})"
        )


def cylinder_contains(triple, inside, avoid):
    """Basic clopen-set test: all of ``inside`` members, none of ``avoid``."""
    return all(triple.contains_element(g) for g in inside) and not any(
        triple.contains_element(g) for g in avoid
    )


def ball_configurations(n, p, support_radius):
    """All lamp configurations supported on sites [-support_radius, support_radius]."""
    width = 2 * support_radius + 1
    total = p ** (n * width)
    for code in range(total):
        v = code
        vec_coords = []
        for _ in range(n):
            poly = LaurentPoly.zero(p)
            for j in range(width):
                v, c = divmod(v, p)
                if c:
                    exponent = SITE_EXPONENT_SIGN * (j - support_radius)
                    poly = poly + LaurentPoly.monomial(p, exponent, c)
            vec_coords.append(poly)
        yield LaurentVector(p, vec_coords)


@dataclass
class ConvergenceResult:
    """Outcome of a finite-window convergence certification."""

    stabilized: bool
    index: int | None
    witness: GroupElement | None
    witnesses_checked: int
    horizon: int

    def to_json(self):
        from .formats import format_vector

        data = {
            "stabilized": self.stabilized,
            "index": self.index,
            "witnesses_checked": self.witnesses_checked,
            "horizon": self.horizon,
        }
        if self.witness is not None:
            data["witness"] = {
                "lamps": format_vector(self.witness.lamps),
                "shift": self.witness.shift,
            }
        return data


def certify_convergence(provider, limit, support_radius, shift_bound, horizon):
    """Membership stabilization on a finite ball of witnesses.

    The witness set is every (w, t) with support(w) within
    [-support_radius, support_radius] and |t| <= shift_bound.  Returns the
    least index m0 <= horizon from which every witness's membership in the
    m-th subgroup agrees with its membership in ``limit``, or a failure
    naming a witness that still disagrees at the horizon.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    n, p = limit.n, limit.p
    configs = list(ball_configurations(n, p, support_radius))
    shifts = list(range(-shift_bound, shift_bound + 1))
    witnesses = [GroupElement(w, t) for t in shifts for w in configs]
    triples = [provider(m) for m in range(1, horizon + 1)]
    shared_marker = (
        limit.s > 0
        and p == 2
        and all(t.s == limit.s and t.v == limit.v for t in triples)
    )
    last_disagreement = [0] * len(witnesses)
    if shared_marker:
        # All subgroups share the (v, s) marker, so the lamp residue of a
        # witness (w, t) is w + d_t with d_t fixed per shift, and membership
        # is F_2-linear in w: evaluate it through bit tables instead of
        # repeating Laurent reductions per witness.
        _certify_linear_f2(
            limit, triples, witnesses, configs, shifts, support_radius,
            last_disagreement,
        )
    else:
        limit_membership = [limit.contains_element(g) for g in witnesses]
        for m, triple in enumerate(triples, start=1):
            for idx, g in enumerate(witnesses):
                if triple.contains_element(g) != limit_membership[idx]:
                    last_disagreement[idx] = m
    worst = max(last_disagreement) if witnesses else 0
    if worst >= horizon:
        bad = witnesses[last_disagreement.index(worst)]
        return ConvergenceResult(False, None, bad, len(witnesses), horizon)
    return ConvergenceResult(True, max(1, worst + 1), None, len(witnesses), horizon)


def _residual_bits(form, cols_list):
    """Encode Laurent residuals as bitmask ints over a shared position table."""
    residuals = [form.reduce(cols) for cols in cols_list]
    positions = {}
    masks = []
    for res in residuals:
        mask = 0
        for col, entry in enumerate(res):
            for exp, _ in entry.terms():
                key = (col, exp)
                if key not in positions:
                    positions[key] = len(positions)
                mask |= 1 << positions[key]
        masks.append(mask)
    return masks


def _certify_linear_f2(
    limit, triples, witnesses, configs, shifts, support_radius, last_disagreement
):
    from .submodules import vectorize

    n, p, s = limit.n, limit.p, limit.s
    width = 2 * support_radius + 1
    dim = n * width
    # Basis order must match ball_configurations: coordinate-major, site
    # j - support_radius at bit position i*width + j.
    levels = sorted({limit.lamps.period} | {t.lamps.period for t in triples})
    basis = [
        LaurentVector.unit(
            n, p, i, exponent=SITE_EXPONENT_SIGN * (j - support_radius)
        )
        for i in range(n)
        for j in range(width)
    ]
    basis_cols = {lv: [vectorize(b, lv) for b in basis] for lv in levels}
    all_forms = [(limit.lamps.form(limit.lamps.period), limit.lamps.period)] + [
        (t.lamps.form(t.lamps.period), t.lamps.period) for t in triples
    ]
    n_configs = len(configs)
    for t_idx, t in enumerate(shifts):
        if t % s:
            continue
        d_t = (GroupElement(LaurentVector.zero(n, p), t) * limit._marker_power(
            -(t // s)
        )).lamps
        d_cols = {lv: vectorize(d_t, lv) for lv in levels}
        tables = []
        for form, level in all_forms:
            masks = _residual_bits(form, basis_cols[level] + [d_cols[level]])
            tables.append((masks[:dim], masks[dim]))
        limit_rows, limit_target = tables[0]
        base_idx = t_idx * n_configs
        for code in range(n_configs):
            acc_limit = limit_target
            bits = code
            pos = 0
            while bits:
                if bits & 1:
                    acc_limit ^= limit_rows[pos]
                bits >>= 1
                pos += 1
            in_limit = acc_limit == 0
            for m in range(1, len(triples) + 1):
                rows, target = tables[m]
                acc = target
                bits = code
                pos = 0
                while bits:
                    if bits & 1:
                        acc ^= rows[pos]
                    bits >>= 1
                    pos += 1
                if (acc == 0) != in_limit:
                    last_disagreement[base_idx + code] = m
