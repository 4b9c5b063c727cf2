"""Thin Fraction-in, Fraction-out wrappers around sympy's DomainMatrix over QQ."""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _dm(rows, ncols=None):
    rows = [list(r) for r in rows]
    nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows]
    return DomainMatrix(data, (len(rows), nc), QQ)


def _back(x):
    return Fraction(int(x.numerator), int(x.denominator))


def _rows(dm):
    return [[_back(x) for x in r] for r in dm.to_list()]


def rref(rows, ncols):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], ()
    R, pivots = _dm(rows, ncols).rref()
    out = _rows(R)[:len(pivots)]
    return out, tuple(pivots)


def inverse(rows):
    return _rows(_dm(rows).inv())


def matmul(a, b):
    return _rows(_dm(a) * _dm(b))


def solve(rows, rhs):
    """Unique solution x of A x = rhs (raises ValueError if singular)."""
    A = _dm(rows)
    b = _dm([[v] for v in rhs])
    try:
        x = A.inv() * b
    except Exception as exc:  # sympy raises DMNonInvertibleMatrixError
        raise ValueError("singular system") from exc
    return [r[0] for r in _rows(x)]


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])
