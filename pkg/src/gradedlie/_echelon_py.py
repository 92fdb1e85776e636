"""Pure-Python integer Gauss-Jordan kernel.

This is the reference implementation of the elimination loop that every
exact linear-algebra operation in the package reduces to.  A compiled twin
with identical semantics lives in ``_echelon_cy.pyx``; ``_echelon`` picks
one at import time.  Both must produce bit-identical row states.

The kernel works on dense rows of Python ints (arbitrary precision).  Rows
are kept primitive (content 1) after every modification, pivot entries are
kept positive, and elimination is full (Gauss-Jordan, zeros above and below
each pivot), so dividing each pivot row by its pivot entry yields the unique
reduced row echelon form over the rationals.
"""

from math import gcd

KERNEL_NAME = "python"


def _normalize_row(row, ncols):
    """Divide ``row`` by its content in place; return True if nonzero."""
    g = 0
    for k in range(ncols):
        g = gcd(g, row[k])
        if g == 1:
            return True
    if g == 0:
        return False
    for k in range(ncols):
        row[k] //= g
    return True


def echelon(rows, ncols, pivot_cols):
    """Full integer Gauss-Jordan elimination, in place.

    ``rows`` is a list of length-``ncols`` lists of ints; only the first
    ``pivot_cols`` columns are eligible as pivot columns (trailing columns
    ride along, e.g. an augmented right-hand side).  Returns the list of
    pivot columns.  On return, row r (r < rank) is primitive with a positive
    entry at its pivot column and zeros elsewhere in every pivot column;
    rows beyond the rank are identically zero in the pivot column range.
    """
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(pivot_cols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        if prow[c] < 0:
            for k in range(ncols):
                prow[k] = -prow[k]
        _normalize_row(prow, ncols)
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            irow = rows[i]
            q = irow[c]
            if q == 0:
                continue
            for k in range(ncols):
                irow[k] = p * irow[k] - q * prow[k]
            _normalize_row(irow, ncols)
        pivots.append(c)
        r += 1
    return pivots
