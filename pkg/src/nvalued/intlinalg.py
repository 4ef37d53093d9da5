"""Exact integer and rational linear algebra.

Everything here runs on Python's arbitrary-precision integers and
``fractions.Fraction``; there is no floating point anywhere.  The module
provides the two normal forms used by the rest of the package (row-style
Hermite and Smith), a canonical representation of sublattices of Z^q,
coset enumeration inside a fundamental box, and dense rational solving.

Conventions
-----------
* Integer matrices are lists (or tuples) of rows of ints.
* Hermite normal form is *row-style*: a unimodular U with ``U @ M = H``,
  pivots positive, entries above each pivot reduced into ``[0, pivot)``,
  zero rows at the bottom.  Equal row spans produce identical H, which is
  what makes lattice equality a plain tuple comparison.
* A :class:`Sublattice` always stores its basis in HNF with zero rows
  stripped, so it is the canonical form of the subgroup it spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product


class SingularMatrixError(ValueError):
    """A square rational system had no unique solution."""


class InfiniteIndexError(ValueError):
    """Coset enumeration was requested for a lattice of deficient rank."""


class _Infinite:
    """Symbolic infinity for lattice indices and Reidemeister counts.

    Deliberately not a float: it absorbs addition with ints, compares
    bigger than every int, and serializes as the string "infinite".
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinite"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("nvalued-infinite")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITE


# ---------------------------------------------------------------------------
# integer vector/matrix helpers


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u):
    return tuple(-a for a in u)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if inner else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(mat):
    """Row-style HNF of an integer matrix.

    Returns ``(H, U)`` with U unimodular and ``U @ M = H``.  Pivot entries
    are positive, entries above a pivot lie in ``[0, pivot)``, and zero
    rows sink to the bottom.  H is the unique such form of the row span.
    """
    m = [list(map(int, row)) for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity_matrix(rows)
    r = 0
    for c in range(cols):
        # gcd elimination below row r in column c
        while True:
            pivots = [i for i in range(r, rows) if m[i][c] != 0]
            if not pivots:
                break
            best = min(pivots, key=lambda i: (abs(m[i][c]), i))
            if best != r:
                m[r], m[best] = m[best], m[r]
                u[r], u[best] = u[best], u[r]
            done = True
            for i in range(r + 1, rows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    for j in range(cols):
                        m[i][j] -= q * m[r][j]
                    for j in range(rows):
                        u[i][j] -= q * u[r][j]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < rows and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    for j in range(cols):
                        m[i][j] -= q * m[r][j]
                    for j in range(rows):
                        u[i][j] -= q * u[r][j]
            r += 1
            if r == rows:
                break
    return m, u


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(mat):
    """Invariant factors d_1 | d_2 | ... of an integer matrix.

    Elementary row and column operations with pivot selection by minimal
    absolute value; adequate for the small dense matrices this package
    meets.  Returns a list of length min(rows, cols), zeros at the end
    when the rank is deficient.
    """
    a = [list(map(int, row)) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    size = min(rows, cols)
    factors = []
    k = 0
    while k < size:
        pivot = None
        for i in range(k, rows):
            for j in range(k, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[k], a[pi] = a[pi], a[k]
        for row in a:
            row[k], row[pj] = row[pj], row[k]
        while True:
            # clear column k
            dirty = False
            for i in range(k + 1, rows):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    for j in range(k, cols):
                        a[i][j] -= q * a[k][j]
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        dirty = True
            if dirty:
                continue
            # clear row k
            for j in range(k + 1, cols):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    for i in range(k, rows):
                        a[i][j] -= q * a[i][k]
                    if a[k][j] != 0:
                        for i in range(k, rows):
                            a[i][k], a[i][j] = a[i][j], a[i][k]
                        dirty = True
            if not dirty:
                break
        # enforce divisibility of the remaining block by the pivot
        offender = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if a[i][j] % a[k][k] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(k, cols):
                a[k][j] += a[offender][j]
            continue
        factors.append(abs(a[k][k]))
        k += 1
    factors.extend([0] * (size - len(factors)))
    return factors


# ---------------------------------------------------------------------------
# sublattices of Z^q


@dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^q in canonical row-HNF basis (zero rows stripped).

    Two sublattices are equal as subgroups iff their dataclass fields
    compare equal.
    """

    ambient_dim: int
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __repr__(self):
        rows = ", ".join(str(list(r)) for r in self.basis)
        return f"Sublattice(dim={self.ambient_dim}, basis=[{rows}])"


def lattice_from_generators(vectors, ambient_dim) -> Sublattice:
    """Canonicalize the subgroup of Z^q generated by ``vectors``."""
    vectors = [tuple(map(int, v)) for v in vectors]
    for v in vectors:
        if len(v) != ambient_dim:
            raise ValueError(f"generator {v} does not have length {ambient_dim}")
    if not vectors:
        return Sublattice(ambient_dim, ())
    h, _ = hermite_normal_form(vectors)
    rows = tuple(tuple(r) for r in h if any(r))
    return Sublattice(ambient_dim, rows)


def lattice_index(lat: Sublattice):
    """Group index [Z^q : L]; INFINITE when the rank is deficient."""
    if lat.rank < lat.ambient_dim:
        return INFINITE
    factors = smith_normal_form([list(r) for r in lat.basis])
    idx = 1
    for d in factors:
        idx *= d
    return idx


def lattice_contains(lat: Sublattice, v) -> bool:
    """Exact membership test by triangular reduction against the HNF basis."""
    if len(v) != lat.ambient_dim:
        raise ValueError("vector has wrong length")
    w = list(map(int, v))
    for row in lat.basis:
        j = next(k for k, x in enumerate(row) if x != 0)
        if w[j] % row[j] != 0:
            return False
        q = w[j] // row[j]
        if q:
            for k in range(j, lat.ambient_dim):
                w[k] -= q * row[k]
    return all(x == 0 for x in w)


def _hnf_diagonal(lat: Sublattice):
    if lat.rank < lat.ambient_dim:
        raise InfiniteIndexError(f"lattice has rank {lat.rank} < {lat.ambient_dim}")
    # full-rank row HNF of a square basis is upper triangular
    return [lat.basis[i][i] for i in range(lat.ambient_dim)]


def coset_representatives(lat: Sublattice):
    """All cosets of Z^q / L, as the lex-ordered integer points of the
    fundamental box [0, d_1) x ... x [0, d_q) of the HNF diagonal."""
    diag = _hnf_diagonal(lat)
    return [tuple(p) for p in product(*(range(d) for d in diag))]


def coset_reduce(lat: Sublattice, v):
    """Canonical representative of the coset v + L.

    Works for any rank: greedy floor reduction of each pivot coordinate
    against the HNF basis is a complete invariant of the coset.  For
    full-rank lattices the result lies in the fundamental box, matching
    :func:`coset_representatives`.
    """
    w = list(map(int, v))
    for row in lat.basis:
        j = next(k for k, x in enumerate(row) if x != 0)
        q = w[j] // row[j]
        if q:
            for k in range(j, lat.ambient_dim):
                w[k] -= q * row[k]
    return tuple(w)


# ---------------------------------------------------------------------------
# rational dense linear algebra


def as_fraction_matrix(mat):
    return [[Fraction(x) for x in row] for row in mat]


def frac_identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def frac_mat_vec(a, v):
    return tuple(sum((row[k] * v[k] for k in range(len(v))), Fraction(0)) for row in a)


def frac_mat_mul(a, b):
    inner = len(b)
    cols = len(b[0]) if inner else 0
    return [
        [sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
        for i in range(len(a))
    ]


def rational_det(mat) -> Fraction:
    a = as_fraction_matrix(mat)
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                factor = a[i][c] * inv
                for j in range(c, n):
                    a[i][j] -= factor * a[c][j]
    return det


def solve_rational(mat, rhs):
    """Unique exact solution of ``A x = b`` for square nonsingular A.

    Raises :class:`SingularMatrixError` when det(A) = 0.
    """
    a = as_fraction_matrix(mat)
    n = len(a)
    b = [Fraction(x) for x in rhs]
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_rational needs a square system")
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("coefficient matrix is singular")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            b[c], b[piv] = b[piv], b[c]
        inv = 1 / a[c][c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                factor = a[i][c] * inv
                for j in range(c, n):
                    a[i][j] -= factor * a[c][j]
                b[i] -= factor * b[c]
    return tuple(b[i] / a[i][i] for i in range(n))


def rational_inverse(mat):
    a = as_fraction_matrix(mat)
    n = len(a)
    cols = frac_identity(n)
    # solve against all unit vectors at once
    aug = [a[i] + cols[i] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is not invertible")
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def rational_left_kernel(mat):
    """Basis (list of Fraction row vectors) of { y : y @ A = 0 }.

    Computed as the null space of A^T by reduced row echelon over Q.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    # transpose: cols x rows
    t = [[Fraction(mat[i][j]) for i in range(rows)] for j in range(cols)]
    m, n = cols, rows
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if t[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            t[r], t[piv] = t[piv], t[r]
        inv = 1 / t[r][c]
        t[r] = [x * inv for x in t[r]]
        for i in range(m):
            if i != r and t[i][c] != 0:
                factor = t[i][c]
                t[i] = [x - factor * y for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        y = [Fraction(0)] * n
        y[f] = Fraction(1)
        for i, c in enumerate(pivots):
            y[c] = -t[i][f]
        basis.append(tuple(y))
    return basis


def clear_denominators(vec):
    """Scale a rational vector to a primitive-ish integer vector."""
    from math import gcd, lcm

    denom = 1
    for x in vec:
        denom = lcm(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)
