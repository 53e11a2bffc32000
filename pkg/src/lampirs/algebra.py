"""Exact arithmetic over F_p[x] and the Laurent ring F_p[x, x^-1].

Coefficients are machine integers reduced modulo a prime p; there is no
floating point anywhere in this package.  Polynomials are stored as
coefficient tuples in ascending degree with no trailing zeros, so equal
polynomials are equal tuples.  A Laurent polynomial is a pair
(offset, body) representing x^offset * body where the body has a nonzero
constant term; this normalizes away the unit group {c * x^k} of the
Laurent ring and makes canonical forms unique.

The degree of the zero polynomial is the sentinel ``None``, never a number.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import ContextError, DomainError

PRIME_BOUND = 1 << 16


@lru_cache(maxsize=None)
def check_prime(p):
    """Validate a modulus: prime and below the documented desk-scale bound."""
    if not isinstance(p, int) or p < 2:
        raise DomainError(f"modulus must be an integer >= 2, got {p!r}")
    if p >= PRIME_BOUND:
        raise DomainError(f"modulus {p} exceeds the supported bound 2^16")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise DomainError(f"modulus {p} is not prime (divisible by {d})")
        d += 1
    return p


def _same_p(a, b):
    if a.p != b.p:
        raise ContextError(f"mixed moduli: {a.p} and {b.p}")


class Poly:
    """Polynomial over F_p: ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs=(), normalize=True):
        check_prime(p)
        if normalize:
            coeffs = [c % p for c in coeffs]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, p, coeffs):
        # Internal: coefficients already reduced mod p; only strip trailing zeros.
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def zero(cls, p):
        return cls(p, (), normalize=False)

    @classmethod
    def one(cls, p):
        return cls(p, (1,), normalize=False)

    @classmethod
    def x(cls, p):
        return cls(p, (0, 1), normalize=False)

    @classmethod
    def monomial(cls, p, k, c=1):
        if k < 0:
            raise DomainError("Poly exponents are nonnegative; use LaurentPoly")
        c %= p
        if c == 0:
            return cls.zero(p)
        return cls(p, (0,) * k + (c,), normalize=False)

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def constant(self):
        return self.coeffs[0] if self.coeffs else 0

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __add__(self, other):
        _same_p(self, other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return Poly._raw(self.p, out)

    def __neg__(self):
        return Poly(self.p, tuple((-c) % self.p for c in self.coeffs), normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        _same_p(self, other)
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + a * b) % self.p
        return Poly._raw(self.p, out)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.p
        if c == 0:
            return Poly.zero(self.p)
        if c == 1:
            return self
        return Poly(
            self.p, tuple((c * a) % self.p for a in self.coeffs), normalize=False
        )

    def shift(self, k):
        """Multiply by x^k, k >= 0."""
        if k < 0:
            raise DomainError("negative shift on Poly; use LaurentPoly")
        if not self.coeffs or k == 0:
            return self
        return Poly(self.p, (0,) * k + self.coeffs, normalize=False)

    def __divmod__(self, other):
        _same_p(self, other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = pow(other.leading(), p - 2, p)
        q = [0] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                factor = (c * inv_lead) % p
                q[i - db] = factor
                for j, bc in enumerate(other.coeffs):
                    rem[i - db + j] = (rem[i - db + j] - factor * bc) % p
        return Poly._raw(p, q), Poly._raw(p, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        """True iff self divides other exactly."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self):
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return self.scale(pow(lead, self.p - 2, self.p))

    def __repr__(self):
        return f"Poly({self.p}, {format_poly_plain(self)!r})"


def format_poly_plain(f, var="x"):
    """Human-readable form, ascending exponents: ``1+x^2+2x^3``."""
    if f.is_zero():
        return "0"
    terms = []
    for k, c in enumerate(f.coeffs):
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}{var}" if k == 1 else f"{head}{var}^{k}")
    return "+".join(terms)


def poly_gcd(a, b):
    """Monic gcd in F_p[x]; gcd(0, 0) = 0."""
    _same_p(a, b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def geometric_series(t, step, p):
    """1 + x^step + x^(2*step) + ... + x^((t-1)*step), for t, step >= 1."""
    if t < 1 or step < 1:
        raise DomainError("geometric_series requires t >= 1 and step >= 1")
    coeffs = [0] * ((t - 1) * step + 1)
    for i in range(t):
        coeffs[i * step] = 1
    return Poly(p, coeffs)


def monic_polys(p, degree):
    """All monic polynomials of exact degree, ascending in base-p encoding."""
    if degree == 0:
        yield Poly.one(p)
        return
    for idx in range(p**degree):
        coeffs = []
        v = idx
        for _ in range(degree):
            v, c = divmod(v, p)
            coeffs.append(c)
        coeffs.append(1)
        yield Poly(p, coeffs, normalize=False)


def is_irreducible(f):
    """Trial-division irreducibility test (exhaustive, exact)."""
    d = f.degree
    if d is None or d == 0:
        return False
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for g in monic_polys(f.p, e):
            if g.divides(f):
                return False
    return True


def enumerate_irreducibles(p, count):
    """First ``count`` monic irreducibles in (degree, encoding) order.

    The polynomial x is excluded: it is a unit in the Laurent ring, so
    multiplying a subgroup by it changes nothing.
    """
    check_prime(p)
    if count < 1:
        raise DomainError("count must be >= 1")
    found = []
    degree = 1
    while len(found) < count:
        for f in monic_polys(p, degree):
            if f.constant() == 0:
                continue  # divisible by the unit x; for degree 1 this is x itself
            if is_irreducible(f):
                found.append(f)
                if len(found) == count:
                    break
        degree += 1
    return found


class LaurentPoly:
    """Element x^offset * body of F_p[x, x^-1], body with nonzero constant term."""

    __slots__ = ("p", "offset", "body")

    def __init__(self, p, offset=0, body=None, normalize=True):
        check_prime(p)
        if body is None:
            body = Poly.zero(p)
        if normalize:
            if body.is_zero():
                offset = 0
            else:
                val = 0
                while body.coeffs[val] == 0:
                    val += 1
                if val:
                    body = Poly(p, body.coeffs[val:], normalize=False)
                    offset += val
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "body", body)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def zero(cls, p):
        return cls(p, 0, Poly.zero(p), normalize=False)

    @classmethod
    def one(cls, p):
        return cls(p, 0, Poly.one(p), normalize=False)

    @classmethod
    def from_poly(cls, f):
        return cls(f.p, 0, f)

    @classmethod
    def monomial(cls, p, k, c=1):
        c %= p
        if c == 0:
            return cls.zero(p)
        return cls(p, k, Poly(p, (c,), normalize=False), normalize=False)

    def is_zero(self):
        return self.body.is_zero()

    def __bool__(self):
        return bool(self.body)

    @property
    def min_exp(self):
        """Lowest exponent with nonzero coefficient, or None if zero."""
        return self.offset if self.body else None

    @property
    def max_exp(self):
        return self.offset + self.body.degree if self.body else None

    def coeff(self, k):
        return self.body.coeff(k - self.offset)

    def terms(self):
        """Yield (exponent, coefficient) pairs, ascending, nonzero only."""
        for i, c in enumerate(self.body.coeffs):
            if c:
                yield self.offset + i, c

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.p == other.p
            and self.offset == other.offset
            and self.body == other.body
        )

    def __hash__(self):
        return hash((self.p, self.offset, self.body))

    def __add__(self, other):
        _same_p(self, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        off = min(self.offset, other.offset)
        a = self.body.shift(self.offset - off)
        b = other.body.shift(other.offset - off)
        return LaurentPoly(self.p, off, a + b)

    def __neg__(self):
        return LaurentPoly(self.p, self.offset, -self.body, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Poly):
            other = LaurentPoly.from_poly(other)
        _same_p(self, other)
        return LaurentPoly(self.p, self.offset + other.offset, self.body * other.body)

    __rmul__ = __mul__

    def scale(self, c):
        b = self.body.scale(c)
        if b.is_zero():
            return LaurentPoly.zero(self.p)
        return LaurentPoly(self.p, self.offset, b, normalize=False)

    def shifted(self, k):
        """Multiply by x^k (any sign): offset adjustment only."""
        if self.is_zero() or k == 0:
            return self
        return LaurentPoly(self.p, self.offset + k, self.body, normalize=False)

    def __repr__(self):
        from .formats import format_laurent

        return f"LaurentPoly({self.p}, {format_laurent(self)!r})"


class PolyMatrix:
    """Rectangular grid of Poly entries over a common modulus."""

    __slots__ = ("p", "rows", "cols", "entries")

    def __init__(self, p, entries):
        check_prime(p)
        entries = tuple(tuple(e for e in row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        for row in entries:
            if len(row) != cols:
                raise DomainError("ragged matrix")
            for e in row:
                if e.p != p:
                    raise ContextError("matrix entry with mismatched modulus")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, p, n):
        one, zero = Poly.one(p), Poly.zero(p)
        return cls(p, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.p == other.p
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.p, self.entries))

    def __repr__(self):
        body = "; ".join(
            ", ".join(format_poly_plain(e) for e in row) for row in self.entries
        )
        return f"PolyMatrix({self.p}, [{body}])"


def hermite_normal_form(matrix):
    """Row-style echelon canonical form over F_p[x].

    Returns (H, rank).  Pivots are monic, entries above each pivot are
    reduced modulo it, and the row space equals the input's row space.
    Zero rows are moved to the bottom and kept so H has the input shape.
    """
    p = matrix.p
    rows = [list(r) for r in matrix.entries]
    ncols = matrix.cols
    pivot_row = 0
    pivots = []
    for col in range(ncols):
        while True:
            live = [i for i in range(pivot_row, len(rows)) if not rows[i][col].is_zero()]
            if not live:
                break
            best = min(live, key=lambda i: rows[i][col].degree)
            rows[pivot_row], rows[best] = rows[best], rows[pivot_row]
            if len(live) == 1 and best != pivot_row:
                continue
            done = True
            for i in range(pivot_row + 1, len(rows)):
                if rows[i][col].is_zero():
                    continue
                q = rows[i][col] // rows[pivot_row][col]
                if not q.is_zero():
                    for j in range(col, ncols):
                        rows[i][j] = rows[i][j] - q * rows[pivot_row][j]
                if not rows[i][col].is_zero():
                    done = False
            if done:
                break
        if pivot_row < len(rows) and not rows[pivot_row][col].is_zero():
            lead = rows[pivot_row][col].leading()
            if lead != 1:
                inv = pow(lead, p - 2, p)
                rows[pivot_row] = [e.scale(inv) for e in rows[pivot_row]]
            pivots.append((pivot_row, col))
            pivot_row += 1
    # Reduce entries above each pivot modulo the pivot, in pivot order.
    for r, c in pivots:
        piv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // piv
            if not q.is_zero():
                for j in range(c, ncols):
                    rows[i][j] = rows[i][j] - q * rows[r][j]
    rank = len(pivots)
    return PolyMatrix(p, rows), rank
