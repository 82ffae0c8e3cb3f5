"""2-local derivation machinery.

A 2-local derivation is a (possibly nonlinear) map that agrees with some
genuine derivation on every pair of elements, the derivation being allowed
to depend on the pair.  This module provides

  * the thin-algebra map `thin_delta` (strip the e_1 component when one is
    present, zero otherwise), a 2-local derivation that is not additive,
  * per-pair witness construction for it, and verification of any
    witness certificate against any candidate map,
  * the rigidity computation for witt and wplus: the witness for a pair
    (e_k, x) is pinned to the centralizer of e_k once the map kills e_k,
    so the possible values at x form a forced subspace; intersecting the
    forced subspaces of two well-chosen probes leaves only zero.

The rigidity operations never quantify over all 2-local maps; they verify
the finite forced-space instances that the general statement reduces to.
Witnesses on wplus are drawn from wplus_ext.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebras import Algebra, Element, bracket
from .derivations import LinearMapTable, ThinDerivationParams, thin_derivation
from .errors import MixedAlgebras, WindowTooSmall
from .linalg import SparseVector, Subspace, Window, kernel_basis, subspace_intersection

DeltaMap = Callable[[Element], Element]


def thin_delta(x: Element) -> Element:
    """The non-additive 2-local derivation on thin: zero when x has no e_1
    component, otherwise x with the e_1 component removed."""
    if x.algebra is not Algebra.THIN:
        raise MixedAlgebras(f"thin_delta on a {x.algebra} element")
    if x.coefficient(1) == 0:
        return Element.zero(Algebra.THIN)
    return x - Element.basis(Algebra.THIN, 1).scale(x.coefficient(1))


@dataclass(frozen=True)
class WitnessCertificate:
    """A derivation (or the element generating an inner one) claimed to
    agree with a 2-local map at both members of a pair.  Never trusted:
    `verify_pair` recomputes both agreements."""

    x: Element
    y: Element
    case: str
    witness: Element | LinearMapTable

    def apply(self, target: Element) -> Element:
        if isinstance(self.witness, LinearMapTable):
            return self.witness.apply(target)
        a = self.witness
        lifted = target.in_algebra(a.algebra)
        return bracket(a, lifted).in_algebra(target.algebra)


def thin_witness(x: Element, y: Element) -> WitnessCertificate:
    """Witness derivation for a thin pair under `thin_delta`.

    Case split on which of the two e_1 coefficients vanish: both (zero
    derivation), exactly one (send e_1 to the tail of whichever member has
    an e_1 component, rescaled by that component; kill everything else),
    or neither (the identity above e_1).
    """
    if x.algebra is not Algebra.THIN or y.algebra is not Algebra.THIN:
        raise MixedAlgebras("thin_witness needs two thin elements")
    x1, y1 = x.coefficient(1), y.coefficient(1)
    depth = max(3, x.support_bound(), y.support_bound())
    if x1 == 0 and y1 == 0:
        case, params = "zero", ThinDerivationParams()
    elif x1 == 0 or y1 == 0:
        case = "e1-scaled"
        driver, d1 = (x, x1) if y1 == 0 else (y, y1)
        params = ThinDerivationParams(
            alpha={k: c / d1 for k, c in driver.coeffs.items() if k >= 2}
        )
    else:
        case, params = "tail-identity", ThinDerivationParams(beta={2: 1})
    return WitnessCertificate(x, y, case, thin_derivation(params, depth))


@dataclass(frozen=True)
class PairVerification:
    passed: bool
    residual_x: Element
    residual_y: Element


def verify_pair(delta: DeltaMap, cert: WitnessCertificate) -> PairVerification:
    """Check that the certificate's witness reproduces delta at both pair
    members, exactly.  Residuals are delta(member) - witness(member)."""
    rx = delta(cert.x) - cert.apply(cert.x)
    ry = delta(cert.y) - cert.apply(cert.y)
    return PairVerification(rx.is_zero() and ry.is_zero(), rx, ry)


@dataclass(frozen=True)
class AdditivityResult:
    violated: bool
    residual: Element


def additivity_violation(delta: DeltaMap, x: Element, y: Element) -> AdditivityResult:
    """Residual delta(x+y) - delta(x) - delta(y); nonzero residual means
    delta is not additive (hence not a derivation)."""
    residual = delta(x + y) - delta(x) - delta(y)
    return AdditivityResult(not residual.is_zero(), residual)


def centralizer(algebra: Algebra, t: Element, window: Window) -> Subspace:
    """All elements a supported in the window with [a, t] = 0, as a
    canonical subspace over the window's coordinates."""
    if algebra.min_index is not None and window.lo < algebra.min_index:
        raise WindowTooSmall(f"window {window} leaves the {algebra} index domain")
    t = t.in_algebra(algebra)
    rule = algebra.basis_rule
    rows_by_grade: dict[int, dict[int, Fraction]] = {}
    for g in window.indices():
        for j, cj in t.coeffs.items():
            for h, c in rule(g, j):
                row = rows_by_grade.setdefault(h, {})
                row[g] = row.get(g, Fraction(0)) + cj * c
    rows = [SparseVector(r) for _, r in sorted(rows_by_grade.items())]
    return kernel_basis(rows, window)


def _witness_algebra(algebra: Algebra) -> Algebra:
    return Algebra.WPLUS_EXT if algebra is Algebra.WPLUS else algebra


def forced_image_space(
    algebra: Algebra, probe: int, x: Element, window: Window
) -> Subspace:
    """Every value a 2-local map can take at x once it kills e_probe.

    A witness for the pair (e_probe, x) must centralize e_probe, so the
    candidate values are spanned by [a, x] for a in that centralizer
    (witnesses for wplus live in wplus_ext).  The span is returned over
    the grade hull of the computed images.
    """
    walg = _witness_algebra(algebra)
    if not algebra.contains_index(probe):
        raise WindowTooSmall(f"probe index {probe} outside the {algebra} domain")
    cent = centralizer(walg, Element.basis(walg, probe), window)
    lifted = x.in_algebra(walg)
    images = [bracket(Element(walg, v), lifted).coeffs for v in cent.basis]
    return _span_over_hull(images)


def _span_over_hull(vectors: list[SparseVector]) -> Subspace:
    support = sorted({i for v in vectors for i in v.support()})
    if not support:
        return Subspace.zero(Window(0, 0))
    return Subspace(vectors, Window(support[0], support[-1]))


@dataclass(frozen=True)
class RigidityTrace:
    """Record of one rigidity run: the target element, the probe indices,
    the forced value space per probe, and their intersection (all over a
    shared grade window).  Zero intersection certifies that a 2-local map
    killing every probe also kills the target."""

    target: Element
    probes: list[int]
    forced: list[Subspace]
    intersection: Subspace

    @property
    def rigid(self) -> bool:
        return self.intersection.dim == 0


def _rigidity_from_probes(
    algebra: Algebra, x: Element, probes: list[int], window: Window
) -> RigidityTrace:
    for p in probes:
        if p not in window:
            raise WindowTooSmall(f"witness window {window} misses probe index {p}")
    spaces = [forced_image_space(algebra, p, x, window) for p in probes]
    hull_indices = [i for s in spaces for i in (s.window.lo, s.window.hi)]
    hull = Window(min(hull_indices), max(hull_indices))
    spaces = [s.rewindow(hull) for s in spaces]
    meet = spaces[0]
    for s in spaces[1:]:
        meet = subspace_intersection(meet, s)
    return RigidityTrace(x, probes, spaces, meet)


def rigidity_check(algebra: Algebra, x: Element, window: Window) -> RigidityTrace:
    """Rigidity for an arbitrary nonzero target.

    Probes are the lowest generator index (0 for witt, 1 for wplus) plus
    one index beyond twice the target's support bound, so the two forced
    spaces live in disjoint grade ranges and can only meet in zero.
    """
    if algebra not in (Algebra.WITT, Algebra.WPLUS):
        raise ValueError(f"rigidity is implemented for witt and wplus, not {algebra}")
    if x.algebra is not algebra:
        raise MixedAlgebras(f"target lives in {x.algebra}, expected {algebra}")
    if x.is_zero():
        raise ValueError("rigidity target must be nonzero")
    far = 2 * x.support_bound() + 1
    probes = [0, far] if algebra is Algebra.WITT else [1, far]
    return _rigidity_from_probes(algebra, x, probes, window)


def basis_rigidity_check(algebra: Algebra, i: int, window: Window) -> RigidityTrace:
    """Rigidity for a single basis vector, probed at the two generators
    (e_0, e_1 for witt, excluding targets 0 and 1; e_1, e_2 for wplus,
    targets from 3 up)."""
    if algebra is Algebra.WITT:
        if i in (0, 1):
            raise ValueError("witt basis rigidity applies to indices other than 0 and 1")
        probes = [0, 1]
    elif algebra is Algebra.WPLUS:
        if i < 3:
            raise ValueError("wplus basis rigidity applies to indices 3 and up")
        probes = [1, 2]
    else:
        raise ValueError(f"rigidity is implemented for witt and wplus, not {algebra}")
    return _rigidity_from_probes(algebra, Element.basis(algebra, i), probes, window)
