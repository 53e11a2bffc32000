"""Derivative levels of finite posets and the divisor-product encoding order.

The derivative of a set with a strict transitive relation removes its
minimal elements; the level of an element is the step at which it becomes
minimal.  Applied to the order on pairs (t, r) given by

    (t', r') < (t, r)   iff   t' divides t  and  t' r' < t r,

finite downward-closed truncations certify that the levels are unbounded
along the chain (2, 1), (4, 1), (8, 1), ...; each element's level matches
the closed form t*r (0 when r = 0), which is verified against the direct
iteration rather than assumed.
"""

from __future__ import annotations

from .errors import ConsistencyError, DomainError
from .submodules import approach_sequence


def poset_less(a, b):
    """Strict order on encoding pairs: divisibility plus product comparison."""
    (t1, r1), (t2, r2) = a, b
    return t2 % t1 == 0 and t1 * r1 < t2 * r2


class FinitePoset:
    """Finite carrier with a strict transitive relation, validated at build."""

    def __init__(self, elements, less, validate=True):
        self.elements = list(elements)
        self.less = less
        if validate:
            self._validate()

    def _validate(self):
        els = self.elements
        for a in els:
            if self.less(a, a):
                raise DomainError(f"relation is not irreflexive at {a!r}")
        for a in els:
            for b in els:
                if not self.less(a, b):
                    continue
                for c in els:
                    if self.less(b, c) and not self.less(a, c):
                        raise DomainError(
                            f"relation is not transitive: {a!r} < {b!r} < {c!r}"
                        )


def truncation(t_max, product_max):
    """Downward-closed finite piece of the encoding order.

    Elements: pairs (t, r) with 1 <= t <= t_max, r >= 0 and t*r <= product_max.
    Anything below such a pair is again such a pair, so levels computed inside
    agree with levels in the infinite order.
    """
    if t_max < 1 or product_max < 0:
        raise DomainError("bad truncation bounds")
    elements = [
        (t, r)
        for t in range(1, t_max + 1)
        for r in range(0, product_max // t + 1)
    ]
    return FinitePoset(elements, poset_less)


def cb_levels(poset):
    """Level of each element under iterated removal of minimal elements."""
    remaining = set(poset.elements)
    levels = {}
    level = 0
    while remaining:
        minimal = [
            x for x in remaining if not any(poset.less(y, x) for y in remaining)
        ]
        if not minimal:
            raise ConsistencyError("no minimal element in a finite strict order")
        for x in minimal:
            levels[x] = level
        remaining.difference_update(minimal)
        level += 1
    return levels


def level_closed_form(point):
    """Conjectured level t*r (0 for r = 0); must match cb_levels on truncations."""
    t, r = point
    return 0 if r == 0 else t * r


def unbounded_rank_certificate(product_max_list):
    """Levels grow without bound along the chain (2^i, 1): finite certificate.

    For each bound B, compute all levels on the truncation (t <= B, t*r <= B)
    and report the maximum level, the levels of the chain points inside, and
    whether every level matches the closed form.
    """
    bounds = list(product_max_list)
    if bounds != sorted(bounds) or len(set(bounds)) != len(bounds):
        raise DomainError("bounds must be strictly increasing")
    stages = []
    chain_levels = {}
    closed_form_ok = True
    for bound in bounds:
        poset = truncation(bound, bound)
        levels = cb_levels(poset)
        for point, lvl in levels.items():
            if lvl != level_closed_form(point):
                closed_form_ok = False
        chain = {}
        power = 2
        while power <= bound:
            chain[power] = levels[(power, 1)]
            chain_levels[power] = levels[(power, 1)]
            power *= 2
        stages.append(
            {
                "bound": bound,
                "elements": len(poset.elements),
                "max_level": max(levels.values()),
                "chain_levels": {str(k): v for k, v in sorted(chain.items())},
            }
        )
    ordered = [chain_levels[k] for k in sorted(chain_levels)]
    strictly_increasing = all(a < b for a, b in zip(ordered, ordered[1:]))
    max_levels = [st["max_level"] for st in stages]
    return {
        "stages": stages,
        "chain_strictly_increasing": strictly_increasing,
        "max_levels_nondecreasing": all(
            a <= b for a, b in zip(max_levels, max_levels[1:])
        ),
        "closed_form_matches": closed_form_ok,
    }


def build_approach_sequence(triple, target, count):
    """Subgroups with encoding ``target`` converging to the given subgroup.

    Requires target < encoding(triple) in the divisor-product order.  With
    (t*e, U, v) the triple and b = t/t', the lamp parts come from
    :func:`approach_sequence` and the shift data is kept fixed, so every
    output has the requested encoding and the sequence converges.
    """
    from .lamplighter import SubgroupTriple

    source = triple.poset_encoding()
    if not poset_less(target, source):
        raise DomainError(
            f"target {target} is not strictly below the encoding {source}"
        )
    t, _ = source
    t_target, r_target = target
    b = t // t_target
    lamp_parts = approach_sequence(
        triple.lamps, b, r_target, count, s=triple.s
    )
    return [
        SubgroupTriple(triple.s, U_m, triple.v, check=False) for U_m in lamp_parts
    ]


def classify_limit(sequence, limit):
    """Group a convergent sequence by encoding and check the limit constraints.

    Every group (t', r') must satisfy t' | t and t'r' <= t*r for the limit's
    encoding (t, r), with strict inequality unless the group's tail
    stabilizes to the limit subgroup.  A violation raises ConsistencyError.
    """
    t, r = limit.poset_encoding()
    order = []
    groups = {}
    for idx, triple in enumerate(sequence):
        enc = triple.poset_encoding()
        if enc not in groups:
            groups[enc] = []
            order.append(enc)
        groups[enc].append(idx)
    report = []
    for enc in order:
        t_g, r_g = enc
        indices = groups[enc]
        # The group stabilizes when its tail consists of copies of the limit.
        trailing_equal = 0
        for idx in reversed(indices):
            if sequence[idx].same_subgroup(limit):
                trailing_equal += 1
            else:
                break
        stabilizes = trailing_equal > 0
        divisibility_ok = t % t_g == 0
        product = t_g * r_g
        bound_ok = product <= t * r
        strict = product < t * r
        if not divisibility_ok or not bound_ok:
            raise ConsistencyError(
                f"subsequence with encoding {enc} violates the limit "
                f"constraints against {(t, r)}"
            )
        if not stabilizes and not strict:
            raise ConsistencyError(
                f"non-stabilizing subsequence with encoding {enc} must have "
                f"t'r' strictly below t*r = {t * r}"
            )
        report.append(
            {
                "t": t_g,
                "r": r_g,
                "size": len(indices),
                "divides": divisibility_ok,
                "product_bound_ok": bound_ok,
                "strict": strict,
                "stabilizes": stabilizes,
            }
        )
    return {"limit_encoding": {"t": t, "r": r}, "groups": report}
