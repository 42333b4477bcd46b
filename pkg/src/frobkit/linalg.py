"""Sparse Gaussian elimination over any of the coefficient fields."""

from __future__ import annotations


def _echelon(F, rows, rhs):
    """Reduced echelon form; returns (pivots, order, consistent)."""
    pivots = {}           # pivot column -> (row dict with unit pivot, rhs)
    order = []
    consistent = True
    for row, b in zip(rows, rhs):
        row = {j: c for j, c in row.items() if not F.is_zero(c)}
        row, b = _eliminate(F, row, b, pivots)
        if not row:
            if not F.is_zero(b):
                consistent = False
            continue
        col = min(row)
        inv = F.inv(row[col])
        row = {j: F.mul(c, inv) for j, c in row.items()}
        b = F.mul(b, inv)
        # keep stored rows free of the new pivot column
        for pc in order:
            prow, pb = pivots[pc]
            c = prow.get(col)
            if c is not None:
                pivots[pc] = _axpy(F, prow, pb, row, b, c)
        pivots[col] = (row, b)
        order.append(col)
    return pivots, order, consistent


def solve(field, rows, rhs, ncols):
    """Solve ``sum_j rows[i][j] * u_j = rhs[i]`` for all i.

    ``rows`` is a list of dicts column -> coefficient.  Returns a particular
    solution (free columns zero) or None when the system is inconsistent.
    """
    pivots, order, ok = _echelon(field, rows, rhs)
    if not ok:
        return None
    sol = [field.zero] * ncols
    for col in order:
        sol[col] = pivots[col][1]
    return sol


def rank(field, rows):
    return len(_echelon(field, rows, [field.zero] * len(rows))[1])


def _eliminate(F, row, b, pivots):
    # stored pivot rows contain no other pivot column, so one pass suffices
    for col in [c for c in row if c in pivots]:
        c = row.get(col)
        if c is not None:
            prow, pb = pivots[col]
            row, b = _axpy(F, row, b, prow, pb, c)
    return row, b


def _axpy(F, row, b, prow, pb, c):
    """row - c * prow."""
    out = dict(row)
    for j, v in prow.items():
        w = F.sub(out.get(j, F.zero), F.mul(c, v))
        if F.is_zero(w):
            out.pop(j, None)
        else:
            out[j] = w
    return out, F.sub(b, F.mul(c, pb))
