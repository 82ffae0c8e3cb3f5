"""Exact linear algebra over the rationals on integer-indexed sparse vectors.

Scalars are `fractions.Fraction` (arbitrary-precision, always in lowest
terms with positive denominator), re-exported here as `Rational`.  Vectors
are finitely supported maps from integer index to nonzero scalar.  Systems
are solved over an explicit closed index window; results are stable under
window enlargement once the window contains every relevant support.

Everything in this module is immutable after construction and every
function is pure, so concurrent use needs no coordination.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import ParseError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Rational:
    """Parse "p", "-p" or "p/q" into a Rational in lowest terms."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(value: Rational) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(Fraction(value))


class SparseVector:
    """Immutable finitely-supported vector: integer index -> nonzero Rational.

    Zero entries are never stored, so equality of entry sets is equality
    of vectors.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, Rational | int] | None = None):
        cleaned: dict[int, Fraction] = {}
        if entries:
            for idx, val in entries.items():
                val = Fraction(val)
                if val != 0:
                    cleaned[int(idx)] = val
        self._entries = cleaned

    @classmethod
    def unit(cls, index: int) -> SparseVector:
        return cls({index: Fraction(1)})

    @classmethod
    def zero(cls) -> SparseVector:
        return cls()

    def get(self, index: int) -> Fraction:
        return self._entries.get(index, Fraction(0))

    __getitem__ = get

    def items(self) -> list[tuple[int, Fraction]]:
        """Entries as (index, value) pairs, index ascending."""
        return sorted(self._entries.items())

    def support(self) -> list[int]:
        return sorted(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._entries))

    def __add__(self, other: SparseVector) -> SparseVector:
        out = dict(self._entries)
        for idx, val in other._entries.items():
            out[idx] = out.get(idx, Fraction(0)) + val
        return SparseVector(out)

    def __sub__(self, other: SparseVector) -> SparseVector:
        return self + (-other)

    def __neg__(self) -> SparseVector:
        return SparseVector({i: -v for i, v in self._entries.items()})

    def scale(self, c: Rational | int) -> SparseVector:
        c = Fraction(c)
        if c == 0:
            return SparseVector()
        return SparseVector({i: c * v for i, v in self._entries.items()})

    __rmul__ = scale

    def dot(self, other: SparseVector) -> Fraction:
        if len(other._entries) < len(self._entries):
            self, other = other, self
        total = Fraction(0)
        for idx, val in self._entries.items():
            total += val * other._entries.get(idx, Fraction(0))
        return total

    def leading_index(self) -> int:
        """Smallest index carrying a nonzero entry."""
        if not self._entries:
            raise ValueError("zero vector has no leading index")
        return min(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {format_rational(v)}" for i, v in self.items())
        return f"SparseVector({{{body}}})"


@dataclass(frozen=True, order=True)
class Window:
    """Closed integer index range lo..hi (both inclusive)."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window {self.lo}:{self.hi}")

    @classmethod
    def parse(cls, text: str) -> Window:
        """Parse "a:b" (inclusive; either bound may be negative)."""
        m = re.match(r"^(-?\d+):(-?\d+)$", text.strip())
        if not m:
            raise ParseError(f"not a window: {text!r} (expected a:b)")
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise ParseError(f"empty window: {text!r}")
        return cls(lo, hi)

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, index: int) -> bool:
        return self.lo <= index <= self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def contains_vector(self, v: SparseVector) -> bool:
        return all(i in self for i in v.support())

    def __str__(self) -> str:
        return f"{self.lo}:{self.hi}"


def _rref(vectors: Iterable[SparseVector], window: Window) -> list[SparseVector]:
    """Reduced row echelon form: monic pivots at strictly increasing leading
    indices, pivot positions eliminated from every other row."""
    pending = [dict(v.items()) for v in vectors if not v.is_zero()]
    basis: list[tuple[int, dict[int, Fraction]]] = []  # (pivot index, row)
    for col in window.indices():
        hit = None
        for row in pending:
            if row.get(col):
                hit = row
                break
        if hit is None:
            continue
        pending.remove(hit)
        inv = 1 / hit[col]
        hit = {i: inv * v for i, v in hit.items()}
        for _, row in basis:
            f = row.get(col)
            if f:
                for i, v in hit.items():
                    row[i] = row.get(i, Fraction(0)) - f * v
                    if row[i] == 0:
                        del row[i]
        nxt = []
        for row in pending:
            f = row.get(col)
            if f:
                for i, v in hit.items():
                    row[i] = row.get(i, Fraction(0)) - f * v
                    if row[i] == 0:
                        del row[i]
            if row:
                nxt.append(row)
        pending = nxt
        basis.append((col, hit))
    return [SparseVector(row) for _, row in basis]


class Subspace:
    """Linear subspace of the vectors supported in a window, stored as a
    canonical reduced-echelon basis.  Equal spans compare equal."""

    __slots__ = ("basis", "window")

    def __init__(self, vectors: Iterable[SparseVector], window: Window):
        vectors = list(vectors)
        for v in vectors:
            if not window.contains_vector(v):
                raise ValueError(f"vector support {v.support()} escapes window {window}")
        self.basis = _rref(vectors, window)
        self.window = window

    @classmethod
    def zero(cls, window: Window) -> Subspace:
        return cls([], window)

    @classmethod
    def full(cls, window: Window) -> Subspace:
        return cls([SparseVector.unit(i) for i in window.indices()], window)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: SparseVector) -> bool:
        rem = v
        for b in self.basis:
            c = rem.get(b.leading_index())
            if c != 0:
                rem = rem - b.scale(c)
        return rem.is_zero()

    def rewindow(self, window: Window) -> Subspace:
        """Same span, declared over a (usually larger) window."""
        return Subspace(self.basis, window)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.basis == other.basis

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, window={self.window})"


@dataclass(frozen=True)
class UniqueSolution:
    solution: SparseVector


@dataclass(frozen=True)
class ParametricSolution:
    particular: SparseVector
    kernel: Subspace


@dataclass(frozen=True)
class Inconsistent:
    pass


def _eliminate(rows: list[SparseVector], rhs: list[Rational], window: Window):
    """Forward/back elimination of the augmented system.

    Returns (pivot column -> reduced row, pivot column -> rhs value) with
    monic pivots and pivot columns cleared everywhere else, or Inconsistent.
    """
    work = [(dict(r.items()), Fraction(b)) for r, b in zip(rows, rhs)]
    pivots: dict[int, dict[int, Fraction]] = {}
    values: dict[int, Fraction] = {}
    for row, b in work:
        for col in sorted(pivots):
            f = row.get(col)
            if f:
                for i, v in pivots[col].items():
                    row[i] = row.get(i, Fraction(0)) - f * v
                    if row[i] == 0:
                        del row[i]
                b -= f * values[col]
        if not row:
            if b != 0:
                return None
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {i: inv * v for i, v in row.items()}
        b *= inv
        for col, prow in pivots.items():
            f = prow.get(lead)
            if f:
                for i, v in row.items():
                    prow[i] = prow.get(i, Fraction(0)) - f * v
                    if prow[i] == 0:
                        del prow[i]
                values[col] -= f * b
        pivots[lead] = row
        values[lead] = b
    return pivots, values


def solve_linear_system(
    rows: list[SparseVector], rhs: list[Rational], window: Window
) -> UniqueSolution | ParametricSolution | Inconsistent:
    """Solve <row, x> = rhs entry for each row, for x supported in window.

    The full affine solution set is returned: a unique vector, a particular
    solution plus kernel, or Inconsistent when no solution exists (a result,
    not an error).
    """
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs lengths differ")
    for r in rows:
        if not window.contains_vector(r):
            raise ValueError(f"row support {r.support()} escapes window {window}")
    outcome = _eliminate(rows, rhs, window)
    if outcome is None:
        return Inconsistent()
    pivots, values = outcome
    particular = SparseVector({col: values[col] for col in pivots})
    kern = _kernel_from_pivots(pivots, window)
    if kern.dim == 0:
        return UniqueSolution(particular)
    return ParametricSolution(particular, kern)


def _kernel_from_pivots(pivots: dict[int, dict[int, Fraction]], window: Window) -> Subspace:
    free = [i for i in window.indices() if i not in pivots]
    vectors = []
    for f in free:
        entries = {f: Fraction(1)}
        for col, row in pivots.items():
            c = row.get(f)
            if c:
                entries[col] = -c
        vectors.append(SparseVector(entries))
    return Subspace(vectors, window)


def kernel_basis(rows: list[SparseVector], window: Window) -> Subspace:
    """Canonical basis of {v supported in window : <row, v> = 0 for all rows}."""
    for r in rows:
        if not window.contains_vector(r):
            raise ValueError(f"row support {r.support()} escapes window {window}")
    outcome = _eliminate(rows, [Fraction(0)] * len(rows), window)
    assert outcome is not None  # homogeneous systems are consistent
    pivots, _ = outcome
    return _kernel_from_pivots(pivots, window)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces declared over the same window.

    Computed as the orthogonal complement of the sum of the two orthogonal
    complements, which stays inside the shared window.
    """
    if a.window != b.window:
        raise ValueError(f"window mismatch: {a.window} vs {b.window}")
    a_perp = kernel_basis(a.basis, a.window)
    b_perp = kernel_basis(b.basis, b.window)
    return kernel_basis(a_perp.basis + b_perp.basis, a.window)
