"""The four Lie algebras, their elements, and the bracket.

Each algebra is a basis {e_i} over an integer index domain together with a
structure-constant rule:

  witt        all integers,       [e_i, e_j] = (j-i) e_{i+j}
  wplus       integers >= 1,      same rule
  wplus_ext   integers >= 0,      same rule (wplus with e_0 adjoined; the
                                  home of inner-derivation witnesses for wplus)
  thin        integers >= 1,      [e_1, e_n] = e_{n+1} and
                                  [e_n, e_1] = -e_{n+1} for n >= 2,
                                  every other basis bracket zero

Elements are finitely-supported rational combinations of basis vectors.
wplus embeds in wplus_ext index-wise; the embedding is explicit via
`Element.in_algebra`, never implicit.  All values are immutable and all
operations pure.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import IndexOutOfDomain, MixedAlgebras, ParseError
from .linalg import Rational, SparseVector, Window, format_rational

# basis rule: (i, j) -> list of (index, integer coefficient) of [e_i, e_j]
BasisRule = Callable[[int, int], list[tuple[int, int]]]


def _witt_rule(i: int, j: int) -> list[tuple[int, int]]:
    return [] if i == j else [(i + j, j - i)]


def _thin_rule(i: int, j: int) -> list[tuple[int, int]]:
    if i == 1 and j >= 2:
        return [(j + 1, 1)]
    if j == 1 and i >= 2:
        return [(i + 1, -1)]
    return []


class Algebra(enum.Enum):
    """Identifies an algebra: index domain plus bracket rule."""

    WITT = "witt"
    WPLUS = "wplus"
    WPLUS_EXT = "wplus_ext"
    THIN = "thin"

    @property
    def min_index(self) -> int | None:
        """Smallest legal basis index; None when unbounded below."""
        return {"witt": None, "wplus": 1, "wplus_ext": 0, "thin": 1}[self.value]

    def contains_index(self, i: int) -> bool:
        lo = self.min_index
        return lo is None or i >= lo

    @property
    def basis_rule(self) -> BasisRule:
        return _thin_rule if self is Algebra.THIN else _witt_rule

    @classmethod
    def from_name(cls, name: str) -> Algebra:
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(a.value for a in cls)
            raise ParseError(f"unknown algebra {name!r} (expected one of: {valid})") from None

    def __str__(self) -> str:
        return self.value


class Element:
    """Finitely-supported member of one algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs: SparseVector | Mapping[int, Rational | int]):
        if not isinstance(coeffs, SparseVector):
            coeffs = SparseVector(coeffs)
        for i in coeffs.support():
            if not algebra.contains_index(i):
                raise IndexOutOfDomain(f"index {i} not in the {algebra} index domain")
        self.algebra = algebra
        self.coeffs = coeffs

    @classmethod
    def zero(cls, algebra: Algebra) -> Element:
        return cls(algebra, SparseVector.zero())

    @classmethod
    def basis(cls, algebra: Algebra, index: int) -> Element:
        return cls(algebra, SparseVector.unit(index))

    def coefficient(self, index: int) -> Fraction:
        return self.coeffs.get(index)

    def support(self) -> list[int]:
        return self.coeffs.support()

    def support_bound(self) -> int:
        """max |i| over the support; 0 for the zero element."""
        sup = self.support()
        return max(abs(i) for i in sup) if sup else 0

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def in_algebra(self, target: Algebra) -> Element:
        """The same combination read in another algebra's index domain."""
        if target is self.algebra:
            return self
        return Element(target, self.coeffs)

    def _require_same(self, other: Element) -> None:
        if self.algebra is not other.algebra:
            raise MixedAlgebras(f"{self.algebra} element mixed with {other.algebra} element")

    def __add__(self, other: Element) -> Element:
        self._require_same(other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: Element) -> Element:
        self._require_same(other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> Element:
        return Element(self.algebra, -self.coeffs)

    def scale(self, c: Rational | int) -> Element:
        return Element(self.algebra, self.coeffs.scale(c))

    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.algebra, self.coeffs))

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({self.algebra}, {format_element(self)!r})"


def bracket(x: Element, y: Element) -> Element:
    """Lie bracket [x, y], the bilinear extension of the basis rule."""
    if x.algebra is not y.algebra:
        raise MixedAlgebras(f"bracket of {x.algebra} element with {y.algebra} element")
    rule = x.algebra.basis_rule
    out: dict[int, Fraction] = {}
    for i, ci in x.coeffs.items():
        for j, cj in y.coeffs.items():
            for k, c in rule(i, j):
                out[k] = out.get(k, Fraction(0)) + ci * cj * c
    return Element(x.algebra, out)


@dataclass(frozen=True)
class JacobiResult:
    passed: bool
    counterexample: tuple[int, int, int] | None = None
    residual: SparseVector | None = None


def jacobi_check(algebra: Algebra, window: Window, rule: BasisRule | None = None) -> JacobiResult:
    """Exhaustively check [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0
    over all ordered basis triples in the window.

    The window must lie inside the algebra's index domain.  An alternative
    basis rule may be injected (to exercise the failure path); the first
    violating triple in lexicographic order is reported.
    """
    if not algebra.contains_index(window.lo):
        raise IndexOutOfDomain(f"window {window} leaves the {algebra} index domain")
    rule = rule or algebra.basis_rule
    idx = window.indices()
    for i in idx:
        for j in idx:
            for k in idx:
                residual: dict[int, int] = {}
                for a, inner, b in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, c1 in rule(inner, b):
                        for h, c2 in rule(a, m):
                            residual[h] = residual.get(h, 0) + c1 * c2
                if any(residual.values()):
                    return JacobiResult(False, (i, j, k), SparseVector(residual))
    return JacobiResult(True)


_TERM_RE = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)\*)?e_(-?\d+)")


def parse_element(text: str, algebra: Algebra) -> Element:
    """Parse the element grammar: a signed sum of `c*e_k` terms ("0" for zero).

    Whitespace is ignored; a missing coefficient means 1; indices must lie
    in the algebra's domain.
    """
    compact = re.sub(r"\s+", "", text)
    if compact in ("0", "+0", "-0"):
        return Element.zero(algebra)
    if not compact:
        raise ParseError("empty element text")
    out: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(compact):
        m = _TERM_RE.match(compact, pos)
        if not m or (not first and m.group(1) == ""):
            raise ParseError(f"bad element text {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(2):
            num, _, den = m.group(2).partition("/")
            if den and int(den) == 0:
                raise ParseError(f"zero denominator in {text!r}")
            coeff = Fraction(int(num), int(den) if den else 1)
        else:
            coeff = Fraction(1)
        k = int(m.group(3))
        if not algebra.contains_index(k):
            raise ParseError(f"index {k} not allowed in {algebra}: {text!r}")
        out[k] = out.get(k, Fraction(0)) + sign * coeff
        pos = m.end()
        first = False
    return Element(algebra, out)


def format_element(x: Element) -> str:
    """Render in the element grammar, terms by ascending index ("0" if zero)."""
    terms = x.coeffs.items()
    if not terms:
        return "0"
    parts: list[str] = []
    for n, (k, c) in enumerate(terms):
        mag = abs(c)
        body = f"e_{k}" if mag == 1 else f"{format_rational(mag)}*e_{k}"
        if n == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
