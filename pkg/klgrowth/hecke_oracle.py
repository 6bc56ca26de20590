"""
Canonical basis of the Hecke algebra, built without the mu-recursion.

Elements of the Hecke algebra are dicts {w: Laurent polynomial in v} over the
standard basis H_w, with

    H_w H_s = H_ws                      if ws > w
    H_w H_s = H_ws + (v^-1 - v) H_w     if ws < w.

The canonical element of w is obtained from C_{ws} * (H_s + v) by subtracting
integer multiples of lower canonical elements until every coefficient below
the top lies in v Z[v]. Then P_{y,w}(q) has q^k coefficient equal to the
v^(l(w)-l(y)-2k) coefficient of the H_y term of C_w.

Slow and only meant as an independent check of KLTable.
"""

from __future__ import annotations

from klgrowth.klcore import LaurentFreePoly, ONE
from klgrowth.weylaff import GroupTable

HeckeElement = dict[int, LaurentFreePoly]

V = LaurentFreePoly.monomial(1)
V_INV_MINUS_V = LaurentFreePoly.from_dict({-1: 1, 1: -1})


def _add(target: HeckeElement, w: int, p: LaurentFreePoly) -> None:
    total = target.get(w, LaurentFreePoly()) + p
    if total:
        target[w] = total
    else:
        target.pop(w, None)


def times_canonical_generator(table: GroupTable, h: HeckeElement, s: int) -> HeckeElement:
    """h * (H_s + v)."""
    out: HeckeElement = {}
    for w, p in h.items():
        ws = table.right[w][s]
        _add(out, ws, p)
        if table.lengths[ws] < table.lengths[w]:
            _add(out, w, p * V_INV_MINUS_V)
        _add(out, w, p * V)
    return out


def canonical_basis(table: GroupTable) -> dict[int, HeckeElement]:
    """Canonical element of every w in the table, in the standard basis."""
    basis: dict[int, HeckeElement] = {0: {0: ONE}}
    for w in range(1, len(table)):
        s = table.right_descents(w)[0]
        h = times_canonical_generator(table, basis[table.right[w][s]], s)
        # subtracting C_y only touches strictly shorter elements
        for length in range(table.lengths[w] - 1, -1, -1):
            for y in sorted(y for y in h if table.lengths[y] == length):
                c = h[y].coeff(0) if y in h else 0
                if c:
                    for z, p in basis[y].items():
                        _add(h, z, p * (-c))
        basis[w] = h
    return basis


def kl_polynomials(table: GroupTable) -> dict[int, dict[int, LaurentFreePoly]]:
    """Columns x -> {y: P_{y,x}} read off the canonical basis."""
    columns = {}
    for w, h in canonical_basis(table).items():
        col = {}
        for y, p in h.items():
            d = table.lengths[w] - table.lengths[y]
            col[y] = LaurentFreePoly.from_dict({(d - e) // 2: c for e, c in p.terms})
        columns[w] = col
    return columns
