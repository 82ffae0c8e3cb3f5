"""Shared test utilities: seeded random elements and independent oracles."""

from fractions import Fraction
from random import Random

from wittlocal import Algebra, Element, SparseVector


def rand_rational(rng: Random, max_num=3, max_den=3, allow_zero=True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if allow_zero or q != 0:
            return q


def rand_element(
    rng: Random,
    algebra: Algebra,
    indices,
    max_terms=4,
    max_num=3,
    max_den=3,
    nonzero=False,
) -> Element:
    indices = list(indices)
    while True:
        chosen = rng.sample(indices, k=min(rng.randint(1, max_terms), len(indices)))
        entries = {
            i: rand_rational(rng, max_num, max_den, allow_zero=False) for i in chosen
        }
        # thin out randomly so sparser supports appear too
        entries = {i: c for i, c in entries.items() if rng.random() < 0.8}
        elt = Element(algebra, entries)
        if not (nonzero and elt.is_zero()):
            return elt


def raw_thin_leibniz_rows(n: int, depth: int) -> tuple[list[SparseVector], int]:
    """Constraint rows of the Leibniz law for thin-algebra maps, built from
    scratch on the basis rule: one unknown per image coefficient d[k][g]
    (k = 1..depth; the two generator images capped at grade n), one row per
    (pair, grade).  Independent of the generator-extension machinery."""

    def rule(i, j):
        if i == 1 and j >= 2:
            return [(j + 1, 1)]
        if j == 1 and i >= 2:
            return [(i + 1, -1)]
        return []

    grade_cap = depth + n
    ids: dict[tuple[int, int], int] = {}
    for k in range(1, depth + 1):
        cap = n if k <= 2 else grade_cap
        for g in range(1, cap + 1):
            ids[(k, g)] = len(ids)

    def support(k):
        return range(1, (n if k <= 2 else grade_cap) + 1)

    rows = []
    for i in range(1, depth + 1):
        for j in range(i + 1, depth + 1):
            lhs = rule(i, j)
            if any(h > depth for h, _ in lhs):
                continue  # image of e_h not among the unknowns
            per_grade: dict[int, dict[int, int]] = {}

            def add(grade, unknown, c):
                row = per_grade.setdefault(grade, {})
                row[unknown] = row.get(unknown, 0) + c

            for h, c in lhs:
                for g in support(h):
                    add(g, ids[(h, g)], c)
            for g in support(i):
                for h, c in rule(g, j):
                    add(h, ids[(i, g)], -c)
            for g in support(j):
                for h, c in rule(i, g):
                    add(h, ids[(j, g)], -c)
            for row in per_grade.values():
                vec = SparseVector({t: Fraction(c) for t, c in row.items()})
                if not vec.is_zero():
                    rows.append(vec)
    return rows, len(ids)
