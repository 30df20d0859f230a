"""Exact row reduction over the rationals.

Matrices here are at most a few dozen rows of sparse symbol vectors, so a
plain Fraction elimination is both fast enough and auditable.
"""

from fractions import Fraction


def to_rows(vectors, columns):
    """Dense Fraction rows of ``vectors`` in the coordinates ``columns``.

    Raises KeyError naming the first symbol outside ``columns``.
    """
    index = {c: j for j, c in enumerate(columns)}
    rows = []
    for v in vectors:
        row = [Fraction(0)] * len(columns)
        for sym, coef in v.items():
            if sym not in index:
                raise KeyError(sym)
            row[index[sym]] = Fraction(coef)
        rows.append(row)
    return rows


def echelon(rows):
    """Reduced row echelon form.

    Returns ``(reduced, pivots)``; ``pivots[r]`` is the pivot column of
    reduced row ``r``. The input is not modified.
    """
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(echelon(rows)[1]) if rows else 0


def nullspace(rows, ncols):
    """Basis of ``{x : rows @ x = 0}`` as Fraction lists."""
    reduced, pivots = echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -reduced[r][f]
        basis.append(x)
    return basis


def solve_combination(rows, target):
    """Coefficients ``c`` with ``sum c_i rows[i] == target``, or None.

    Works on the transposed system, so the answer is exact and is checked
    by multiplying back.
    """
    n = len(rows)
    if n == 0:
        return None if any(target) else []
    ncols = len(target)
    aug = [[rows[i][j] for i in range(n)] + [target[j]] for j in range(ncols)]
    reduced, pivots = echelon(aug)
    if n in pivots:
        return None
    coef = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        coef[c] = reduced[r][n]
    back = [sum(coef[i] * rows[i][j] for i in range(n)) for j in range(ncols)]
    if back != list(target):
        return None
    return coef
