# cython: language_level=3
"""Compiled twin of ``_echelon_py``.

Same algorithm, same row states, same pivot list; the speedup comes from
removing interpreter overhead around the elimination loops.  Entries stay
Python ints, so arbitrary precision is preserved.
"""

from math import gcd

KERNEL_NAME = "cython"


cdef bint _normalize_row(list row, Py_ssize_t ncols):
    cdef Py_ssize_t k
    g = 0
    for k in range(ncols):
        g = gcd(g, row[k])
        if g == 1:
            return True
    if g == 0:
        return False
    for k in range(ncols):
        row[k] = row[k] // g
    return True


def echelon(list rows, Py_ssize_t ncols, Py_ssize_t pivot_cols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, k, piv
    cdef list prow, irow
    pivots = []
    for c in range(pivot_cols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if (<list>rows[i])[c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = <list>rows[r]
        if prow[c] < 0:
            for k in range(ncols):
                prow[k] = -prow[k]
        _normalize_row(prow, ncols)
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            irow = <list>rows[i]
            q = irow[c]
            if q == 0:
                continue
            for k in range(ncols):
                irow[k] = p * irow[k] - q * prow[k]
            _normalize_row(irow, ncols)
        pivots.append(c)
        r += 1
    return pivots
