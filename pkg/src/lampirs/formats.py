"""Textual and JSON formats for polynomials, vectors, subgroup presentations.

Polynomial text: ``1+x^2+2x^5`` (ascending exponents).  A Laurent element
with a nonzero offset is written with a unit prefix, ``x^-3*(1+x^2)``; the
parser additionally accepts inline negative exponents such as ``x^-1+1``.
Duplicate exponents are rejected.

Vector text: ``[poly, poly, ...]``; the brackets may be omitted when the
ambient rank is 1.

Subgroup presentation block::

    n=<n> e=<e> p=<p>
    <generator vector>          (one per line)

Subgroup-triple file: an ``s=<s>`` line, a presentation block, then a
``v=<vector>`` line.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .algebra import LaurentPoly, format_poly_plain
from .errors import FormatError
from .submodules import LaurentVector, Submodule

SCHEMA_TRIPLE = "lampirs.triple.v1"
SCHEMA_DISTRIBUTION = "lampirs.window-distribution.v1"
SCHEMA_MEASURE = "lampirs.measure.v1"

_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(-?\d+))?)?$")


def format_laurent(f):
    """Canonical text: plain body, with an ``x^k*(...)`` prefix if k != 0."""
    if f.is_zero():
        return "0"
    body = format_poly_plain(f.body)
    if f.offset == 0:
        return body
    return f"x^{f.offset}*({body})"


def format_vector(v):
    return "[" + ", ".join(format_laurent(c) for c in v.coords) + "]"


def parse_poly(text, p, line=None):
    """Parse a (Laurent) polynomial; returns a LaurentPoly."""
    text = text.strip().replace(" ", "")
    if not text:
        raise FormatError("empty polynomial", line)
    offset = 0
    m = re.match(r"^x\^(-?\d+)\*\((.*)\)$", text)
    if m:
        offset = int(m.group(1))
        text = m.group(2)
    if text == "0":
        return LaurentPoly.zero(p)
    terms = {}
    for raw in text.split("+"):
        m = _TERM_RE.match(raw)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise FormatError(f"bad term {raw!r}", line)
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            exp = 0
        elif m.group(3) is not None:
            exp = int(m.group(3))
        else:
            exp = 1
        if exp in terms:
            raise FormatError(f"duplicate exponent {exp} in {text!r}", line)
        terms[exp] = coeff % p
    out = LaurentPoly.zero(p)
    for exp, c in terms.items():
        out = out + LaurentPoly.monomial(p, exp, c)
    return out.shifted(offset)


def parse_vector(text, n, p, line=None):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise FormatError("unbalanced brackets in vector", line)
        parts = _split_top_level(text[1:-1], line)
    else:
        parts = [text]
    if len(parts) != n:
        raise FormatError(f"vector has {len(parts)} coordinates, expected {n}", line)
    return LaurentVector(p, (parse_poly(part, p, line) for part in parts))


def _split_top_level(body, line):
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError("unbalanced parentheses", line)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if not parts or any(not s.strip() for s in parts):
        raise FormatError("empty vector coordinate", line)
    return parts


def format_submodule(U):
    lines = [f"n={U.n} e={U.period} p={U.p}"]
    lines.extend(format_vector(g) for g in U.gens)
    return "\n".join(lines) + "\n"


def parse_submodule_lines(lines, start_line=1):
    """Parse a presentation block; returns (Submodule, lines consumed)."""
    if not lines:
        raise FormatError("missing presentation header", start_line)
    header = lines[0].strip()
    m = re.match(r"^n=(\d+)\s+e=(\d+)\s+p=(\d+)$", header)
    if not m:
        raise FormatError(f"bad presentation header {header!r}", start_line)
    n, e, p = (int(m.group(i)) for i in (1, 2, 3))
    gens = []
    consumed = 1
    for offset, raw in enumerate(lines[1:], start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("v=") or "=" in stripped.split("[")[0]:
            break
        gens.append(parse_vector(stripped, n, p, start_line + offset))
        consumed += 1
    return Submodule(n, p, e, gens), consumed


def format_triple(triple):
    out = [f"s={triple.s}"]
    out.append(format_submodule(triple.lamps).rstrip("\n"))
    out.append(f"v={format_vector(triple.v)}")
    return "\n".join(out) + "\n"


def parse_triple(text):
    from .lamplighter import SubgroupTriple

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].strip().startswith("s="):
        raise FormatError("triple file must start with an s= line", 1)
    try:
        s = int(lines[0].strip()[2:])
    except ValueError as exc:
        raise FormatError(f"bad s value {lines[0].strip()!r}", 1) from exc
    U, consumed = parse_submodule_lines(lines[1:], start_line=2)
    v_index = 1 + consumed
    if v_index >= len(lines) or not lines[v_index].strip().startswith("v="):
        raise FormatError("missing v= line", v_index + 1)
    v = parse_vector(lines[v_index].strip()[2:], U.n, U.p, v_index + 1)
    return SubgroupTriple(s, U, v)


def triple_to_json(triple):
    return {
        "schema": SCHEMA_TRIPLE,
        "s": triple.s,
        "n": triple.n,
        "p": triple.p,
        "e": triple.lamps.period,
        "gens": [format_vector(g) for g in triple.lamps.gens],
        "v": format_vector(triple.v),
    }


def triple_from_json(data):
    from .lamplighter import SubgroupTriple

    n, p, e = data["n"], data["p"], data["e"]
    U = Submodule(n, p, e, (parse_vector(g, n, p) for g in data["gens"]))
    return SubgroupTriple(data["s"], U, parse_vector(data["v"], n, p))


def fraction_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s):
    return Fraction(s)


def basis_row_str(row, p):
    if p < 10:
        return "".join(str(c) for c in row)
    return ",".join(str(c) for c in row)


def parse_basis_row(s, p):
    if p < 10:
        return tuple(int(ch) for ch in s)
    return tuple(int(tok) for tok in s.split(","))


def distribution_to_json(dist):
    items = []
    for ws, prob in dist.sorted_items():
        items.append(
            {
                "basis": [basis_row_str(row, dist.p) for row in ws.rows],
                "probability": fraction_str(prob),
            }
        )
    return {
        "schema": SCHEMA_DISTRIBUTION,
        "window": [dist.lo, dist.hi],
        "n": dist.n,
        "p": dist.p,
        "atoms": items,
    }


def measure_from_json(data):
    """Mixture-of-presentations measure description."""
    from .irs import SubgroupMeasure

    n, p = data["n"], data["p"]
    atoms = []
    for entry in data["atoms"]:
        weight = parse_fraction(entry["weight"])
        period = entry.get("period", 1)
        U = Submodule(n, p, period, (parse_vector(g, n, p) for g in entry["gens"]))
        atoms.append((weight, U))
    return SubgroupMeasure.mixture(atoms)


def measure_to_json(atoms, n, p):
    return {
        "schema": SCHEMA_MEASURE,
        "n": n,
        "p": p,
        "atoms": [
            {
                "weight": fraction_str(w),
                "period": U.period,
                "gens": [format_vector(g) for g in U.gens],
            }
            for w, U in atoms
        ],
    }


def canonical_json(obj):
    """Deterministic JSON bytes: sorted keys, no whitespace variation."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
