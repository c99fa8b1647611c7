"""Sparse exact-integer polynomials over the genus-g variable layout.

The genus-g Tutte polynomial of a matroid uses one (x, y) pair per chosen
subset plus one quadruple (x-cap, y-cap, x-cup, y-cup) per unordered pair of
subsets.  Variables are kept in a fixed canonical order so that exponent
vectors are comparable across polynomials of the same genus:

    x1 .. xg, y1 .. yg, then for (i, j) with i < j in lexicographic order:
    xI{i}_{j}, yI{i}_{j}, xU{i}_{j}, yU{i}_{j}

Coefficients are arbitrary-precision integers (Fractions appear transiently
during exact rational evaluation).  All arithmetic is exact; nothing here
does I/O except the explicit (de)serialization helpers.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Exponents = Tuple[int, ...]


class LayoutMismatch(ValueError):
    """Two polynomials with different genus layouts were combined."""


class ParseError(ValueError):
    """Canonical polynomial text did not parse."""


class VarLayout:
    """Canonical variable ordering for a fixed genus g >= 1.

    >>> VarLayout(2).names
    ['x1', 'x2', 'y1', 'y2', 'xI1_2', 'yI1_2', 'xU1_2', 'yU1_2']
    """

    __slots__ = ("g", "names", "nvars", "_pair_base")

    def __init__(self, g: int):
        if g < 1:
            raise ValueError("genus must be >= 1, got %r" % (g,))
        self.g = g
        names = ["x%d" % i for i in range(1, g + 1)]
        names += ["y%d" % i for i in range(1, g + 1)]
        self._pair_base = {}
        base = 2 * g
        for i, j in combinations(range(1, g + 1), 2):
            self._pair_base[(i, j)] = base
            names += [
                "xI%d_%d" % (i, j),
                "yI%d_%d" % (i, j),
                "xU%d_%d" % (i, j),
                "yU%d_%d" % (i, j),
            ]
            base += 4
        self.names = names
        self.nvars = base

    def x(self, i: int) -> int:
        """Index of x_i, 1-based i."""
        if not 1 <= i <= self.g:
            raise IndexError(i)
        return i - 1

    def y(self, i: int) -> int:
        if not 1 <= i <= self.g:
            raise IndexError(i)
        return self.g + i - 1

    def _pair(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        try:
            return self._pair_base[(i, j)]
        except KeyError:
            raise IndexError((i, j)) from None

    def x_cap(self, i: int, j: int) -> int:
        return self._pair(i, j)

    def y_cap(self, i: int, j: int) -> int:
        return self._pair(i, j) + 1

    def x_cup(self, i: int, j: int) -> int:
        return self._pair(i, j) + 2

    def y_cup(self, i: int, j: int) -> int:
        return self._pair(i, j) + 3

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def __eq__(self, other) -> bool:
        return isinstance(other, VarLayout) and other.g == self.g

    def __hash__(self) -> int:
        return hash(("VarLayout", self.g))

    def __repr__(self) -> str:
        return "VarLayout(g=%d)" % self.g


def _check_same_layout(a: "SparsePoly", b: "SparsePoly") -> None:
    if a.layout != b.layout:
        raise LayoutMismatch("genus %d vs %d" % (a.layout.g, b.layout.g))


class SparsePoly:
    """Immutable sparse polynomial: exponent vector -> coefficient.

    For example the genus-1 polynomial x + y is

    >>> L = VarLayout(1)
    >>> p = SparsePoly(L, {(1, 0): 1, (0, 1): 1})
    >>> p.canonical_str()
    'x1 + y1'
    """

    __slots__ = ("layout", "terms")

    def __init__(self, layout: VarLayout, terms: Mapping[Exponents, int] | None = None):
        self.layout = layout
        clean: Dict[Exponents, int] = {}
        if terms:
            n = layout.nvars
            for exps, coef in terms.items():
                if len(exps) != n:
                    raise ValueError(
                        "exponent vector length %d, layout needs %d" % (len(exps), n)
                    )
                if coef:
                    key = tuple(int(e) for e in exps)
                    if any(e < 0 for e in key):
                        raise ValueError("negative exponent in %r" % (key,))
                    clean[key] = clean.get(key, 0) + coef
                    if not clean[key]:
                        del clean[key]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, layout: VarLayout) -> "SparsePoly":
        return cls(layout, {})

    @classmethod
    def const(cls, layout: VarLayout, c: int) -> "SparsePoly":
        return cls(layout, {(0,) * layout.nvars: c})

    @classmethod
    def var(cls, layout: VarLayout, index: int, power: int = 1) -> "SparsePoly":
        exps = [0] * layout.nvars
        exps[index] = power
        return cls(layout, {tuple(exps): 1})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = SparsePoly.const(self.layout, other)
        _check_same_layout(self, other)
        out = dict(self.terms)
        for exps, coef in other.terms.items():
            s = out.get(exps, 0) + coef
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return SparsePoly._raw(self.layout, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.layout, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = SparsePoly.const(self.layout, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SparsePoly.zero(self.layout)
            return SparsePoly._raw(
                self.layout, {e: c * other for e, c in self.terms.items()}
            )
        _check_same_layout(self, other)
        out: Dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        return SparsePoly._raw(self.layout, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = SparsePoly.const(self.layout, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    @classmethod
    def _raw(cls, layout: VarLayout, terms: Dict[Exponents, int]) -> "SparsePoly":
        p = object.__new__(cls)
        p.layout = layout
        p.terms = terms
        return p

    # -- queries -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self.layout == other.layout
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.layout, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def coefficient_mass(self) -> int:
        """Plain sum of all coefficients (equals the tuple count for R^(g))."""
        return sum(self.terms.values())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __repr__(self) -> str:
        s = self.canonical_str()
        if len(s) > 60:
            s = s[:57] + "..."
        return "SparsePoly(g=%d, %s)" % (self.layout.g, s)

    # -- substitution ------------------------------------------------------

    def shift(self, deltas: Mapping[int, int]) -> "SparsePoly":
        """Substitute v -> v + delta for each variable index in `deltas`.

        Done one variable at a time with binomial expansion, which keeps the
        intermediate term count close to the final one.
        """
        terms = self.terms
        for v, d in deltas.items():
            if not d:
                continue
            out: Dict[Exponents, int] = {}
            for exps, coef in terms.items():
                e = exps[v]
                if not e:
                    s = out.get(exps, 0) + coef
                    if s:
                        out[exps] = s
                    else:
                        del out[exps]
                    continue
                pre = exps[:v]
                post = exps[v + 1 :]
                dk = 1
                for k in range(e, -1, -1):
                    c = coef * comb(e, k) * dk
                    dk *= d
                    key = pre + (k,) + post
                    s = out.get(key, 0) + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
            terms = out
        return SparsePoly._raw(self.layout, dict(terms))

    def shift_all(self, d: int) -> "SparsePoly":
        return self.shift({v: d for v in range(self.layout.nvars)})

    def substitute(self, values: Mapping[int, Fraction | int]) -> "SparsePoly":
        """Partially evaluate: variable index -> exact rational value.

        The result keeps the same layout with the substituted variables'
        exponents zeroed.  Coefficients stay integers when the values are
        integers; otherwise they become Fractions (callers that need an
        integer polynomial should finish with `as_integer`).
        """
        vals = {v: Fraction(val) for v, val in values.items()}
        out: Dict[Exponents, object] = {}
        for exps, coef in self.terms.items():
            factor = Fraction(1)
            key = list(exps)
            for v, val in vals.items():
                e = exps[v]
                if e:
                    factor *= val**e
                    key[v] = 0
            c = coef * factor
            if c:
                k = tuple(key)
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        cleaned: Dict[Exponents, object] = {}
        for k, c in out.items():
            if isinstance(c, Fraction) and c.denominator == 1:
                c = int(c)
            if c:
                cleaned[k] = c
        return SparsePoly._raw(self.layout, cleaned)

    def as_integer(self) -> "SparsePoly":
        out = {}
        for k, c in self.terms.items():
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("non-integer coefficient %s at %r" % (c, k))
                c = int(c)
            out[k] = c
        return SparsePoly._raw(self.layout, out)

    def scale(self, factor: Fraction | int) -> "SparsePoly":
        factor = Fraction(factor)
        out = {}
        for k, c in self.terms.items():
            s = c * factor
            if s:
                out[k] = int(s) if s.denominator == 1 else s
        return SparsePoly._raw(self.layout, out)

    def evaluate(self, values: Sequence[Fraction | int]) -> Fraction:
        if len(values) != self.layout.nvars:
            raise ValueError("need %d values" % self.layout.nvars)
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for exps, coef in self.terms.items():
            t = Fraction(coef)
            for v, e in zip(vals, exps):
                if e:
                    t *= v**e
            total += t
        return total

    def restrict_layout(self, target: VarLayout, var_map: Mapping[int, int]) -> "SparsePoly":
        """Re-express on `target` by mapping variable indices old -> new.

        Every variable not in `var_map` must have exponent 0 in every term.
        Used to compare a partially evaluated genus-2 polynomial against a
        genus-1 one.
        """
        out: Dict[Exponents, int] = {}
        for exps, coef in self.terms.items():
            key = [0] * target.nvars
            for v, e in enumerate(exps):
                if not e:
                    continue
                if v not in var_map:
                    raise ValueError(
                        "variable %s has nonzero exponent but no mapping"
                        % self.layout.names[v]
                    )
                key[var_map[v]] += e
            k = tuple(key)
            s = out.get(k, 0) + coef
            if s:
                out[k] = s
            else:
                del out[k]
        return SparsePoly._raw(target, out)

    # -- serialization -----------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Exponents, int]]:
        return sorted(self.terms.items())

    def canonical_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.layout.names
        parts: List[str] = []
        for exps, coef in self.sorted_terms():
            factors = []
            for v, e in enumerate(exps):
                if e == 1:
                    factors.append(names[v])
                elif e:
                    factors.append("%s^%d" % (names[v], e))
            mag = abs(coef)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not parts:
                parts.append(body if coef > 0 else "-" + body)
            else:
                parts.append(("+ " if coef > 0 else "- ") + body)
        return " ".join(parts)

    @classmethod
    def parse(cls, layout: VarLayout, text: str) -> "SparsePoly":
        """Inverse of canonical_str (accepts any term order / whitespace)."""
        s = text.strip()
        if s == "0":
            return cls.zero(layout)
        name_to_idx = {n: i for i, n in enumerate(layout.names)}
        token = re.compile(r"[A-Za-z][A-Za-z0-9_]*(\^\d+)?|\d+|[+\-*]")
        pos = 0
        terms: Dict[Exponents, int] = {}
        sign = 1
        pending: List[str] = []

        def flush(chunk: List[str], sgn: int):
            if not chunk:
                raise ParseError("empty term in %r" % text)
            coef = sgn
            exps = [0] * layout.nvars
            for piece in chunk:
                if piece.isdigit():
                    coef *= int(piece)
                    continue
                if "^" in piece:
                    name, _, power = piece.partition("^")
                    e = int(power)
                else:
                    name, e = piece, 1
                if name not in name_to_idx:
                    raise ParseError("unknown variable %r" % name)
                exps[name_to_idx[name]] += e
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + coef
            if not terms[key]:
                del terms[key]

        expecting_term = True
        for m in token.finditer(s):
            t = m.group(0)
            if s[pos : m.start()].strip():
                raise ParseError("garbage at offset %d in %r" % (pos, text))
            pos = m.end()
            if t == "+" or t == "-":
                if pending:
                    flush(pending, sign)
                    pending = []
                    sign = 1
                if expecting_term and t == "-":
                    sign = -sign
                elif expecting_term:
                    raise ParseError("misplaced %r at offset %d" % (t, m.start()))
                else:
                    sign = -1 if t == "-" else 1
                expecting_term = True
            elif t == "*":
                if not pending:
                    raise ParseError("misplaced '*' at offset %d" % m.start())
            else:
                pending.append(t)
                expecting_term = False
        if s[pos:].strip():
            raise ParseError("garbage at end of %r" % text)
        if pending:
            flush(pending, sign)
        elif expecting_term:
            raise ParseError("dangling sign in %r" % text)
        return cls(layout, terms)

    def to_json(self) -> str:
        obj = {
            "g": self.layout.g,
            "terms": [
                {"exps": list(exps), "coef": str(coef)}
                for exps, coef in self.sorted_terms()
            ],
        }
        return json.dumps(obj, separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SparsePoly":
        try:
            obj = json.loads(text)
            layout = VarLayout(int(obj["g"]))
            terms = {
                tuple(int(e) for e in t["exps"]): int(t["coef"]) for t in obj["terms"]
            }
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ParseError("bad polynomial JSON: %s" % exc) from None
        return cls(layout, terms)


def linear_rank(polys: Iterable[SparsePoly]) -> int:
    """Rank over Q of a family of polynomials viewed as coefficient vectors."""
    polys = list(polys)
    if not polys:
        return 0
    layout = polys[0].layout
    for p in polys:
        _check_same_layout(polys[0], p)
    monomials = sorted({e for p in polys for e in p.terms})
    col = {e: i for i, e in enumerate(monomials)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monomials)
        for e, c in p.terms.items():
            row[col[e]] = Fraction(c)
        rows.append(row)
    rank = 0
    ncols = len(monomials)
    pivot_col = 0
    for _ in range(len(rows)):
        while pivot_col < ncols:
            pivot_row = None
            for r in range(rank, len(rows)):
                if rows[r][pivot_col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                pivot_col += 1
                continue
            rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
            pv = rows[rank][pivot_col]
            for r in range(len(rows)):
                if r != rank and rows[r][pivot_col]:
                    f = rows[r][pivot_col] / pv
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
            rank += 1
            pivot_col += 1
            break
        else:
            break
    return rank
