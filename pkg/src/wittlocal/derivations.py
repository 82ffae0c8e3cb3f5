"""Derivations as finite tables of basis images.

A linear map on one of the algebras is stored as a table over a truncation
window: one image element per basis index.  On top of that this module
provides

  * Leibniz-law checking at a given depth,
  * extension of a candidate derivation from images of the two generators
    e_1, e_2 (wplus and thin are generated by them), with every alternative
    bracket relation re-derived and cross-checked,
  * the solver for the full space of generator-image pairs that extend
    consistently,
  * closed-form recovery of the inner element behind a derivation (wplus
    derivations are inner with witness in wplus_ext; witt derivations are
    inner in witt),
  * the explicit two-parameter family of thin-algebra derivations.

Tables are immutable; every function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebras import Algebra, Element, bracket, format_element
from .errors import (
    IndexOutOfDomain,
    MixedAlgebras,
    NotADerivation,
    ParseError,
    TruncationTooSmall,
)
from .linalg import (
    Rational,
    SparseVector,
    Subspace,
    Window,
    format_rational,
    kernel_basis,
    parse_rational,
)


class LinearMapTable:
    """A linear map given by the images of every basis index in a window.

    Images may be supported outside the window; callers decide whether that
    matters.  Missing images are a construction error, never an implicit
    zero.
    """

    __slots__ = ("algebra", "window", "images")

    def __init__(self, algebra: Algebra, window: Window, images: Mapping[int, Element]):
        lo = algebra.min_index
        if lo is not None and window.lo < lo:
            raise IndexOutOfDomain(f"window {window} leaves the {algebra} index domain")
        table: dict[int, Element] = {}
        for k in window.indices():
            if k not in images:
                raise TruncationTooSmall(f"no image for basis index {k} in window {window}")
            img = images[k]
            if img.algebra is not algebra:
                raise MixedAlgebras(f"image of e_{k} lives in {img.algebra}, table in {algebra}")
            table[k] = img
        for k in images:
            if k not in window:
                raise TruncationTooSmall(f"image index {k} outside declared window {window}")
        self.algebra = algebra
        self.window = window
        self.images = table

    @classmethod
    def zero(cls, algebra: Algebra, window: Window) -> LinearMapTable:
        z = Element.zero(algebra)
        return cls(algebra, window, {k: z for k in window.indices()})

    def image(self, k: int) -> Element:
        if k not in self.window:
            raise TruncationTooSmall(f"basis index {k} outside truncation {self.window}")
        return self.images[k]

    def apply(self, x: Element) -> Element:
        """Extend the table by linearity to x."""
        if x.algebra is not self.algebra:
            raise MixedAlgebras(f"applying a {self.algebra} table to a {x.algebra} element")
        out = Element.zero(self.algebra)
        for k, c in x.coeffs.items():
            out = out + self.image(k).scale(c)
        return out

    def in_algebra(self, target: Algebra) -> LinearMapTable:
        return LinearMapTable(
            target, self.window, {k: v.in_algebra(target) for k, v in self.images.items()}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMapTable):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.window == other.window
            and self.images == other.images
        )

    def __repr__(self) -> str:
        return f"LinearMapTable({self.algebra}, {self.window}, {len(self.images)} images)"


def ad(a: Element, window: Window) -> LinearMapTable:
    """The inner map x -> [a, x], tabulated on the window's basis indices."""
    if a.algebra.min_index is not None and window.lo < a.algebra.min_index:
        raise IndexOutOfDomain(f"window {window} leaves the {a.algebra} index domain")
    images = {k: bracket(a, Element.basis(a.algebra, k)) for k in window.indices()}
    return LinearMapTable(a.algebra, window, images)


@dataclass(frozen=True)
class LeibnizResult:
    passed: bool
    pairs_checked: int
    pair: tuple[int, int] | None = None
    residual: Element | None = None


def leibniz_check(table: LinearMapTable, degree_bound: int) -> LeibnizResult:
    """Check D([e_i,e_j]) = [D(e_i),e_j] + [e_i,D(e_j)] exactly.

    Pairs run over i <= j with i, j, i+j all inside the truncation and
    |i|, |j| <= degree_bound (the (j, i) case is the negation of (i, j)).
    The first violation is reported with its residual
    D([e_i,e_j]) - [D(e_i),e_j] - [e_i,D(e_j)].  An empty pair set means
    the truncation cannot support the requested depth.
    """
    win = table.window
    alg = table.algebra
    rule = alg.basis_rule
    checked = 0
    failure: tuple[tuple[int, int], Element] | None = None
    for i in win.indices():
        if abs(i) > degree_bound:
            continue
        ei = Element.basis(alg, i)
        for j in win.indices():
            if j < i or abs(j) > degree_bound or (i + j) not in win:
                continue
            checked += 1
            if failure is not None:
                continue
            lhs = Element.zero(alg)
            for k, c in rule(i, j):
                lhs = lhs + table.image(k).scale(c)
            rhs = bracket(table.image(i), Element.basis(alg, j)) + bracket(ei, table.image(j))
            residual = lhs - rhs
            if not residual.is_zero():
                failure = ((i, j), residual)
    if checked == 0:
        raise TruncationTooSmall(
            f"no checkable pairs: truncation {win} cannot support depth {degree_bound}"
        )
    if failure is not None:
        return LeibnizResult(False, checked, failure[0], failure[1])
    return LeibnizResult(True, checked)


@dataclass(frozen=True)
class InconsistentExtension:
    """Generator images that do not extend to a derivation: the first
    bracket relation whose re-derivation disagrees, with the residual."""

    relation: tuple[int, int]
    residual: Element

    def describe(self) -> str:
        i, j = self.relation
        return f"inconsistent at ({i}, {j}): residual = {format_element(self.residual)}"


def _generated_algebra(algebra: Algebra) -> None:
    if algebra not in (Algebra.WPLUS, Algebra.THIN):
        raise ValueError(f"{algebra} is not handled by generator extension")


def _extend_images(
    algebra: Algebra, img_e1: Element, img_e2: Element, truncation: int
) -> dict[int, Element]:
    """Images of e_1..e_N forced by the recursion e_{k} = [e_1, e_{k-1}]
    (rescaled by the structure constant for wplus)."""
    e1 = Element.basis(algebra, 1)
    images = {1: img_e1, 2: img_e2}
    for k in range(3, truncation + 1):
        forced = bracket(images[1], Element.basis(algebra, k - 1)) + bracket(e1, images[k - 1])
        if algebra is Algebra.WPLUS:
            forced = forced.scale(Fraction(1, k - 2))
        images[k] = forced
    return images


def _cross_relations(algebra: Algebra, truncation: int):
    """Bracket relations not used by the defining recursion, in lexicographic
    order.  For wplus every [e_i,e_j] with i >= 2 and i+j inside the
    truncation; for thin every vanishing bracket [e_i,e_j], i >= 2."""
    for i in range(2, truncation + 1):
        for j in range(i + 1, truncation + 1):
            if algebra is Algebra.WPLUS and i + j > truncation:
                continue
            yield (i, j)


def _relation_residual(
    algebra: Algebra, images: dict[int, Element], i: int, j: int
) -> Element:
    lhs = Element.zero(algebra)
    for k, c in algebra.basis_rule(i, j):
        lhs = lhs + images[k].scale(c)
    rhs = bracket(images[i], Element.basis(algebra, j)) + bracket(
        Element.basis(algebra, i), images[j]
    )
    return lhs - rhs


def extend_from_generators(
    algebra: Algebra, img_e1: Element, img_e2: Element, truncation: int
) -> LinearMapTable | InconsistentExtension:
    """Extend candidate generator images to a full derivation table.

    Images of e_3..e_N are forced by the bracket recursion from e_1; every
    alternative relation within reach is then re-derived and has to agree
    exactly.  A disagreement is a semantic outcome, not an error.
    """
    _generated_algebra(algebra)
    if truncation < 3:
        raise ValueError("truncation must be at least 3")
    if img_e1.algebra is not algebra or img_e2.algebra is not algebra:
        raise MixedAlgebras("generator images must live in the target algebra")
    images = _extend_images(algebra, img_e1, img_e2, truncation)
    for i, j in _cross_relations(algebra, truncation):
        residual = _relation_residual(algebra, images, i, j)
        if not residual.is_zero():
            return InconsistentExtension((i, j), residual)
    return LinearMapTable(algebra, Window(1, truncation), images)


# Coordinate labels for the generator-image pair, in reporting order.
def _coordinate_layout(algebra: Algebra, n: int) -> tuple[list[tuple[int, int]], list[str]]:
    """Unknown coordinates as (generator, index) pairs plus display names.

    alpha_i is the e_i coefficient of the e_1 image (i = 1..n).  beta_i is
    the e_i coefficient of the e_2 image; for thin it runs to n, for wplus
    to n+1 because the e_2 image of an inner derivation with witness
    supported in 0..n-1 reaches grade n+1.
    """
    beta_hi = n if algebra is Algebra.THIN else n + 1
    coords = [(1, i) for i in range(1, n + 1)] + [(2, i) for i in range(1, beta_hi + 1)]
    names = [f"alpha_{i}" for i in range(1, n + 1)] + [
        f"beta_{i}" for i in range(1, beta_hi + 1)
    ]
    return coords, names


@dataclass(frozen=True)
class DerivationSpace:
    """Solved space of generator-image pairs that extend to derivations.

    `space` is a canonical subspace over the coordinates named in
    `coordinates`; each basis vector converts back to generator images via
    `generator_images`.
    """

    algebra: Algebra
    support_bound: int
    depth: int
    coordinates: list[str]
    space: Subspace
    _coords: list[tuple[int, int]]

    @property
    def dim(self) -> int:
        return self.space.dim

    def generator_images(self, vector: SparseVector) -> tuple[Element, Element]:
        """Convert a coordinate vector of `space` into (e_1 image, e_2 image)."""
        by_gen: dict[int, dict[int, Fraction]] = {1: {}, 2: {}}
        for pos, value in vector.items():
            gen, idx = self._coords[pos]
            by_gen[gen][idx] = value
        return Element(self.algebra, by_gen[1]), Element(self.algebra, by_gen[2])


def derivation_space_basis(
    algebra: Algebra, support_bound: int, consistency_depth: int | None = None
) -> DerivationSpace:
    """Solve for all generator-image pairs that extend to a derivation.

    The pair (e_1 image, e_2 image) ranges over the coordinate space of
    `_coordinate_layout`; every cross relation up to the consistency depth
    (default 2n+3, the smallest bound that forces all coefficient
    exclusions for support bound n) is imposed as a linear constraint.
    The residual of each relation is linear in the pair, so constraint rows
    are assembled by evaluating the extension on each unit input.

    For thin, the e_1 coefficient of the e_2 image is solved for and comes
    out identically zero; it is dropped from the reported coordinates.
    """
    _generated_algebra(algebra)
    if support_bound < 1:
        raise ValueError("support bound must be at least 1")
    min_depth = 2 * support_bound + 3
    depth = consistency_depth if consistency_depth is not None else min_depth
    if depth < min_depth:
        raise ValueError(f"consistency depth {depth} below required {min_depth}")
    coords, names = _coordinate_layout(algebra, support_bound)
    relations = list(_cross_relations(algebra, depth))
    # residual grades of relation r under unit input t
    columns: list[list[Element]] = []
    for gen, idx in coords:
        img = {1: Element.zero(algebra), 2: Element.zero(algebra)}
        img[gen] = Element.basis(algebra, idx)
        images = _extend_images(algebra, img[1], img[2], depth)
        columns.append([_relation_residual(algebra, images, i, j) for i, j in relations])
    rows: list[SparseVector] = []
    for r in range(len(relations)):
        grades = sorted({g for col in columns for g in col[r].support()})
        for g in grades:
            rows.append(SparseVector({t: columns[t][r].coefficient(g) for t in range(len(coords))}))
    window = Window(0, len(coords) - 1)
    solved = kernel_basis(rows, window)
    if algebra is Algebra.THIN:
        solved, coords, names = _drop_thin_beta1(solved, coords, names)
    return DerivationSpace(algebra, support_bound, depth, names, solved, coords)


def _drop_thin_beta1(space: Subspace, coords, names):
    """Remove the beta_1 coordinate after checking it vanishes on the space."""
    pos = coords.index((2, 1))
    for v in space.basis:
        if v.get(pos) != 0:
            raise NotADerivation("solver produced a nonzero e_1 coefficient in the e_2 image")
    remap = lambda p: p if p < pos else p - 1
    vectors = [SparseVector({remap(i): c for i, c in v.items()}) for v in space.basis]
    coords = coords[:pos] + coords[pos + 1 :]
    names = names[:pos] + names[pos + 1 :]
    reduced = Subspace(vectors, Window(0, len(coords) - 1))
    return reduced, coords, names


def recover_inner_wplus(table: LinearMapTable) -> Element:
    """Recover the wplus_ext element a with [a, -] equal to a wplus derivation.

    a is read off in closed form from the e_1 and e_2 images: the e_1
    coefficient of D(e_1) gives the e_0 component, the e_3 coefficient of
    D(e_2) gives the e_1 component, and each higher e_i coefficient of
    D(e_1) contributes -1/(i-2) at e_{i-1}.  The result is then verified
    against the whole table, index by index; any disagreement (for example
    a nonzero e_2 coefficient in D(e_1), which no derivation admits) raises
    NotADerivation.
    """
    if table.algebra is not Algebra.WPLUS:
        raise MixedAlgebras(f"expected a wplus table, got {table.algebra}")
    d1, d2 = table.image(1), table.image(2)
    span = max(d1.support() + d2.support(), default=0)
    if table.window.lo != 1 or table.window.hi < 2 * span + 3:
        raise TruncationTooSmall(
            f"truncation {table.window} below required 1:{2 * span + 3}"
        )
    entries = {0: d1.coefficient(1), 1: d2.coefficient(3)}
    for i in d1.support():
        if i >= 3:
            entries[i - 1] = -d1.coefficient(i) / (i - 2)
    a = Element(Algebra.WPLUS_EXT, entries)
    for k in table.window.indices():
        expected = bracket(a, Element.basis(Algebra.WPLUS_EXT, k))
        if expected != table.image(k).in_algebra(Algebra.WPLUS_EXT):
            raise NotADerivation(f"table is not inner: mismatch at e_{k}")
    return a


def recover_inner_witt(table: LinearMapTable) -> Element:
    """Recover the witt element a with [a, -] equal to a witt derivation.

    The e_0 image determines every component of a except the e_0 one
    ([a, e_0] has -j times the e_j coefficient of a at grade j), and the
    e_0 component is the e_1 coefficient of D(e_1).  Verified against the
    whole table.
    """
    if table.algebra is not Algebra.WITT:
        raise MixedAlgebras(f"expected a witt table, got {table.algebra}")
    win = table.window
    if win.lo != -win.hi or win.hi < 1:
        raise TruncationTooSmall(f"window {win} is not symmetric around 0 (or misses 0, 1)")
    d0 = table.image(0)
    if d0.coefficient(0) != 0:
        raise NotADerivation("D(e_0) has an e_0 component, which no [a, e_0] produces")
    entries = {j: -d0.coefficient(j) / j for j in d0.support()}
    entries[0] = table.image(1).coefficient(1)
    a = Element(Algebra.WITT, entries)
    for k in win.indices():
        if bracket(a, Element.basis(Algebra.WITT, k)) != table.image(k):
            raise NotADerivation(f"table is not inner: mismatch at e_{k}")
    return a


class ThinDerivationParams:
    """Parameters of a thin-algebra derivation: the e_1 image coefficients
    (alpha, indices >= 1) and the e_2 image coefficients (beta, indices
    >= 2; an e_1 component is impossible and structurally excluded)."""

    __slots__ = ("alpha", "beta")

    def __init__(
        self,
        alpha: Mapping[int, Rational | int] | None = None,
        beta: Mapping[int, Rational | int] | None = None,
    ):
        self.alpha = {int(i): Fraction(c) for i, c in (alpha or {}).items() if c != 0}
        self.beta = {int(i): Fraction(c) for i, c in (beta or {}).items() if c != 0}
        for i in self.alpha:
            if i < 1:
                raise ValueError(f"alpha index {i} below 1")
        for i in self.beta:
            if i < 2:
                raise ValueError(f"beta index {i} below 2")

    @classmethod
    def from_generator_images(cls, img_e1: Element, img_e2: Element) -> ThinDerivationParams:
        """Read parameters off candidate generator images (the e_2 image
        must have no e_1 component)."""
        if img_e2.coefficient(1) != 0:
            raise NotADerivation("the e_2 image of a thin derivation has no e_1 component")
        return cls(dict(img_e1.coeffs.items()), dict(img_e2.coeffs.items()))

    @property
    def max_index(self) -> int:
        return max([1, *self.alpha, *self.beta])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThinDerivationParams):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    def __repr__(self) -> str:
        return f"ThinDerivationParams(alpha={self.alpha}, beta={self.beta})"


def thin_derivation(params: ThinDerivationParams, truncation: int) -> LinearMapTable:
    """The thin derivation with the given parameters, tabulated on 1..N:

        D(e_1) = sum alpha_i e_i
        D(e_2) = sum beta_i e_i
        D(e_j) = ((j-2) alpha_1 + beta_2) e_j + sum_{i>=3} beta_i e_{i+j-2}

    for j >= 3.  Always a derivation (asserted in the test suite, not
    re-verified per call).
    """
    if truncation < 3:
        raise ValueError("truncation must be at least 3")
    alpha1 = params.alpha.get(1, Fraction(0))
    beta2 = params.beta.get(2, Fraction(0))
    images: dict[int, Element] = {
        1: Element(Algebra.THIN, params.alpha),
        2: Element(Algebra.THIN, params.beta),
    }
    for j in range(3, truncation + 1):
        entries = {j: (j - 2) * alpha1 + beta2}
        for i, c in params.beta.items():
            if i >= 3:
                entries[i + j - 2] = entries.get(i + j - 2, Fraction(0)) + c
        images[j] = Element(Algebra.THIN, entries)
    return LinearMapTable(Algebra.THIN, Window(1, truncation), images)


def inner_image_formula_check(a: Element, j: int) -> Element:
    """[a, e_j] straight from the structure constants, for a wplus_ext
    witness acting on a wplus basis vector.  The single source of truth for
    what an inner derivation does to e_j."""
    if j < 1:
        raise IndexOutOfDomain(f"basis index {j} below 1")
    if a.algebra is not Algebra.WPLUS_EXT:
        a = a.in_algebra(Algebra.WPLUS_EXT)
    return bracket(a, Element.basis(Algebra.WPLUS_EXT, j))


# -- JSON wire format for map tables -----------------------------------------

_ALGEBRA_NAMES = {a.value: a for a in Algebra}


def table_to_json(table: LinearMapTable) -> dict:
    """Schema: {"algebra": name, "truncation": {"min": lo, "max": hi},
    "images": {"k": [[index, "p/q"], ...], ...}} with every index in the
    truncation present explicitly."""
    return {
        "algebra": table.algebra.value,
        "truncation": {"min": table.window.lo, "max": table.window.hi},
        "images": {
            str(k): [[i, format_rational(c)] for i, c in table.image(k).coeffs.items()]
            for k in table.window.indices()
        },
    }


def table_from_json(data: object) -> LinearMapTable:
    if not isinstance(data, dict):
        raise ParseError("map JSON must be an object")
    try:
        algebra = _ALGEBRA_NAMES[data["algebra"]]
        trunc = data["truncation"]
        window = Window(int(trunc["min"]), int(trunc["max"]))
        raw_images = data["images"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed map JSON: {exc}") from exc
    if not isinstance(raw_images, dict):
        raise ParseError("map JSON images must be an object")
    images: dict[int, Element] = {}
    for key, terms in raw_images.items():
        try:
            k = int(key)
        except ValueError:
            raise ParseError(f"non-integer image key {key!r}") from None
        if not isinstance(terms, list):
            raise ParseError(f"image of e_{k} must be a list of [index, rational] pairs")
        entries: dict[int, Fraction] = {}
        for term in terms:
            if not isinstance(term, (list, tuple)) or len(term) != 2:
                raise ParseError(f"image term {term!r} is not an [index, rational] pair")
            idx, coeff = term
            if not isinstance(idx, int):
                raise ParseError(f"image term index {idx!r} is not an integer")
            entries[idx] = entries.get(idx, Fraction(0)) + parse_rational(str(coeff))
        try:
            images[k] = Element(algebra, entries)
        except IndexOutOfDomain as exc:
            raise ParseError(str(exc)) from exc
    missing = [k for k in window.indices() if k not in images]
    if missing:
        raise ParseError(f"missing image keys inside the truncation: {missing}")
    extra = [k for k in images if k not in window]
    if extra:
        raise ParseError(f"image keys outside the truncation: {extra}")
    return LinearMapTable(algebra, window, images)
