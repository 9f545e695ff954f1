"""
Exact linear algebra over QQ for integer and rational row data.

Everything here is a thin layer over sympy's DomainMatrix so that the cone
kernel and the ring computations share one exact backend. Vectors are plain
tuples of Python ints (or Fractions where noted).
"""
from fractions import Fraction
from functools import reduce
from math import gcd

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def to_qq(x):
    if isinstance(x, int):
        return QQ(x)
    return QQ(int(x.numerator), int(x.denominator))


def to_fraction(x):
    """Converts a QQ element or sympy Rational to a Fraction."""
    if isinstance(x, int):
        return Fraction(x)
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    return Fraction(int(x.numerator), int(x.denominator))


def qq_matrix(rows, ncols):
    return DomainMatrix([[to_qq(x) for x in row] for row in rows], (len(rows), ncols), QQ)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def is_zero(v):
    return all(x == 0 for x in v)


def primitive(v):
    """
    Scales a rational vector to the primitive integer vector on the same ray.
    The zero vector is returned unchanged (as ints).
    """
    fracs = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fracs), 1)
    ints = [int(f * den) for f in fracs]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def sign_normalized(v):
    """Primitive vector whose first nonzero entry is positive."""
    p = primitive(v)
    for x in p:
        if x != 0:
            return p if x > 0 else tuple(-y for y in p)
    return p


def rank(rows, ncols):
    if not rows:
        return 0
    return qq_matrix(rows, ncols).rank()


def rref(rows, ncols):
    """
    Reduced row echelon form over QQ.

    Returns:
        tuple: (nonzero rows as lists of Fractions, pivot column tuple)
    """
    if not rows:
        return [], ()
    reduced, pivots = qq_matrix(rows, ncols).rref()
    entries = reduced.to_Matrix().tolist()
    out = [[to_fraction(x) for x in entries[i]] for i in range(len(pivots))]
    return out, tuple(pivots)


def row_space_basis(rows, ncols):
    """
    Canonical integral basis of the row space: RREF rows scaled to primitive
    integer vectors. Two row sets span the same space iff the results agree.
    """
    reduced, _ = rref(rows, ncols)
    return [primitive(r) for r in reduced]


def nullspace(rows, ncols):
    """Primitive integer basis of {x : <r, x> = 0 for every row r}."""
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -reduced[i][f]
        basis.append(primitive(x))
    return basis


def solve_unique(columns, target):
    """
    Solves sum_i c_i * columns[i] = target for linearly independent columns.

    Returns:
        list of Fraction, or None when target is outside the span.
    """
    k = len(columns)
    n = len(target)
    if k == 0:
        return [] if is_zero(target) else None
    augmented = [[columns[i][r] for i in range(k)] + [target[r]] for r in range(n)]
    reduced, pivots = rref(augmented, k + 1)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise ValueError("columns are linearly dependent")
    return [reduced[i][k] for i in range(k)]


def reduce_modulo(v, basis_rref, pivots):
    """
    Normal form of v modulo the span of an RREF basis: subtract multiples of
    the basis rows until every pivot coordinate of v vanishes.
    """
    out = [Fraction(x) for x in v]
    for row, p in zip(basis_rref, pivots):
        c = out[p]
        if c != 0:
            out = [a - c * b for a, b in zip(out, row)]
    return out
