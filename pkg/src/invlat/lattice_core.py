"""Exact integer-lattice foundation.

Full-rank sublattices of Z^m in a canonical column-style Hermite form,
kernels of congruence systems, membership and coset arithmetic, and the
trivial/duplicate-coordinate cleanup that the degree-bound theory assumes.

Everything here runs on Python's arbitrary-precision integers.  No floats,
no numpy: canonical forms and indices must be exact no matter how large the
entries get.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


class InvalidSystemError(ValueError):
    """Malformed congruence system (bad moduli, ragged or out-of-range rows)."""


class AllColumnsRemovedError(ValueError):
    """Every coordinate was trivial or duplicate; nothing is left to keep."""


def l1norm(v):
    return sum(abs(x) for x in v)


def weight(v):
    """Coordinate sum of a vector (the signed degree of the monomial a ↦ x^a)."""
    return sum(v)


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def det_int(rows):
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(rows)
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf_columns(vectors, dimension):
    """Column-style Hermite form of the span of *vectors* inside Z^dimension.

    Returns (columns, pivot_rows).  The columns are a basis of the spanned
    sublattice, one per pivot row and in pivot-row order, lower triangular:
    column j is zero above its pivot row, the pivot entry is positive, and
    every entry below a pivot is reduced into [0, pivot of that row).  For a
    full-rank input pivot_rows == [0..dimension-1] and the form is the unique
    canonical basis, so structural equality decides lattice equality.
    """
    work = [list(v) for v in vectors if any(v)]
    if any(len(v) != dimension for v in work):
        raise ValueError("vector length does not match dimension")
    pivots = []
    for row in range(dimension):
        carrier = None
        rest = []
        for col in work:
            if col[row] == 0:
                rest.append(col)
                continue
            if carrier is None:
                carrier = col
                continue
            a, b = carrier[row], col[row]
            if b % a == 0:
                q = b // a
                for k in range(row, dimension):
                    col[k] -= q * carrier[k]
            else:
                g, x, y = xgcd(a, b)
                aa, bb = a // g, b // g
                for k in range(row, dimension):
                    s, t = carrier[k], col[k]
                    carrier[k] = x * s + y * t
                    col[k] = aa * t - bb * s
            if any(col[k] for k in range(row + 1, dimension)):
                rest.append(col)
        if carrier is not None and carrier[row] < 0:
            carrier = [-t for t in carrier]
        pivots.append(carrier)
        work = rest
    cols = [c for c in pivots if c is not None]
    pivot_rows = [r for r, c in enumerate(pivots) if c is not None]
    # reduce entries below each diagonal into [0, pivot of their row)
    for j, col in enumerate(cols):
        for i in range(j + 1, len(cols)):
            ri = pivot_rows[i]
            q = col[ri] // cols[i][ri]
            if q:
                for k in range(ri, dimension):
                    col[k] -= q * cols[i][k]
    return [tuple(c) for c in cols], pivot_rows


def integer_kernel(rows, ncols):
    """Z-basis of {x in Z^ncols : M x = 0} for the integer matrix with *rows*.

    Column elimination on M while the same operations run on an identity
    block; the transform columns sitting over eliminated-to-zero columns of M
    are a basis of the kernel lattice (not merely a spanning set).
    """
    ncon = len(rows)
    cols = []
    for j in range(ncols):
        mpart = [rows[i][j] for i in range(ncon)]
        tpart = [1 if k == j else 0 for k in range(ncols)]
        cols.append((mpart, tpart))
    for row in range(ncon):
        carrier = None
        rest = []
        for mc, tc in cols:
            if mc[row] == 0:
                rest.append((mc, tc))
                continue
            if carrier is None:
                carrier = (mc, tc)
                continue
            a, b = carrier[0][row], mc[row]
            if b % a == 0:
                q = b // a
                for k in range(ncon):
                    mc[k] -= q * carrier[0][k]
                for k in range(ncols):
                    tc[k] -= q * carrier[1][k]
            else:
                g, x, y = xgcd(a, b)
                aa, bb = a // g, b // g
                for k in range(ncon):
                    s, t = carrier[0][k], mc[k]
                    carrier[0][k] = x * s + y * t
                    mc[k] = aa * t - bb * s
                for k in range(ncols):
                    s, t = carrier[1][k], tc[k]
                    carrier[1][k] = x * s + y * t
                    tc[k] = aa * t - bb * s
            rest.append((mc, tc))
        cols = rest
    return [tuple(tc) for mc, tc in cols]


@dataclass(frozen=True)
class CongruenceSystem:
    """A finite list of congruences sum_j A[i][j] * a_j = 0 (mod moduli[i]).

    Coefficients are stored reduced into [0, n_i); the constructor rejects
    anything else rather than silently normalising.  Row i of *coefficients*
    belongs to modulus moduli[i]; column j collects the residues of the j-th
    coordinate, one per modulus, and is the character of that coordinate.
    """

    moduli: tuple
    coefficients: tuple

    def __post_init__(self):
        if not isinstance(self.moduli, tuple) or not isinstance(self.coefficients, tuple):
            raise InvalidSystemError("moduli and coefficients must be tuples")
        if len(self.moduli) == 0:
            raise InvalidSystemError("at least one modulus is required")
        if any(not isinstance(n, int) or n < 2 for n in self.moduli):
            raise InvalidSystemError("moduli must be integers >= 2")
        if len(self.coefficients) != len(self.moduli):
            raise InvalidSystemError("one coefficient row per modulus")
        if len(self.coefficients) == 0 or any(len(row) == 0 for row in self.coefficients):
            raise InvalidSystemError("empty coefficient rows are not allowed")
        m = len(self.coefficients[0])
        for n_i, row in zip(self.moduli, self.coefficients):
            if not isinstance(row, tuple) or len(row) != m:
                raise InvalidSystemError("coefficient rows must be tuples of equal length")
            for a in row:
                if not isinstance(a, int) or not 0 <= a < n_i:
                    raise InvalidSystemError(
                        f"coefficient {a!r} is not reduced into [0, {n_i})")

    @property
    def r(self):
        return len(self.moduli)

    @property
    def m(self):
        return len(self.coefficients[0])

    def column(self, j):
        """Residue tuple of coordinate j across all moduli."""
        return tuple(row[j] for row in self.coefficients)

    def label(self, v):
        """Coset label of v: the residue tuple of the congruence values."""
        if len(v) != self.m:
            raise ValueError("vector length does not match the system")
        return tuple(
            sum(a * x for a, x in zip(row, v)) % n
            for n, row in zip(self.moduli, self.coefficients)
        )

    def to_jsonable(self):
        return {"moduli": list(self.moduli),
                "coefficients": [list(r) for r in self.coefficients]}

    def to_json(self):
        return json.dumps(self.to_jsonable())

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidSystemError(f"not valid JSON: {e}") from None
        if not isinstance(data, dict) or set(data) != {"moduli", "coefficients"}:
            raise InvalidSystemError('expected an object with "moduli" and "coefficients"')
        try:
            moduli = tuple(data["moduli"])
            coefficients = tuple(tuple(row) for row in data["coefficients"])
        except TypeError:
            raise InvalidSystemError("moduli/coefficients have the wrong shape") from None
        return cls(moduli, coefficients)


def coset_label(system, v):
    return system.label(v)


@dataclass(frozen=True)
class LatticeBasis:
    """Canonical basis of a full-rank sublattice of Z^dimension.

    columns is the column-style Hermite form described in hnf_columns, so two
    LatticeBasis values are equal exactly when they present the same lattice.
    The determinant of the columns equals +index.
    """

    dimension: int
    columns: tuple
    index: int

    @classmethod
    def from_generators(cls, vectors, dimension=None):
        vectors = [tuple(v) for v in vectors]
        if dimension is None:
            if not vectors:
                raise ValueError("cannot infer dimension from an empty generator list")
            dimension = len(vectors[0])
        cols, pivot_rows = hnf_columns(vectors, dimension)
        if len(cols) != dimension:
            raise ValueError(
                f"generators span rank {len(cols)} < {dimension}; need a full-rank lattice")
        index = math.prod(cols[i][i] for i in range(dimension))
        return cls(dimension, tuple(cols), index)

    @classmethod
    def identity(cls, dimension):
        cols = tuple(
            tuple(1 if k == j else 0 for k in range(dimension)) for j in range(dimension)
        )
        return cls(dimension, cols, 1)

    def __contains__(self, v):
        if len(v) != self.dimension:
            raise ValueError("vector length does not match dimension")
        r = list(v)
        for i, col in enumerate(self.columns):
            q, rem = divmod(r[i], col[i])
            if rem:
                return False
            if q:
                for k in range(i, self.dimension):
                    r[k] -= q * col[k]
        return True

    def contains(self, v):
        return v in self

    def reduce(self, v):
        """Canonical coset representative of v in the box prod [0, d_i).

        Two vectors are congruent modulo the lattice iff they reduce equally,
        which makes the reduced tuple a coset key for a bare lattice.
        """
        if len(v) != self.dimension:
            raise ValueError("vector length does not match dimension")
        r = list(v)
        for i, col in enumerate(self.columns):
            q = r[i] // col[i]
            if q:
                for k in range(i, self.dimension):
                    r[k] -= q * col[k]
        return tuple(r)

    def coords(self, v):
        """Integer coordinates of a lattice member over the canonical columns."""
        r = list(v)
        out = []
        for i, col in enumerate(self.columns):
            q, rem = divmod(r[i], col[i])
            if rem:
                raise ValueError("vector is not in the lattice")
            out.append(q)
            if q:
                for k in range(i, self.dimension):
                    r[k] -= q * col[k]
        return out

    def to_json(self):
        return json.dumps(
            {
                "dimension": self.dimension,
                "columns": [list(c) for c in self.columns],
                "index": self.index,
            }
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        rebuilt = cls.from_generators(
            [tuple(c) for c in data["columns"]], dimension=data["dimension"]
        )
        if rebuilt.index != data["index"]:
            raise ValueError("stored index does not match the column data")
        return rebuilt


def from_congruences(system) -> LatticeBasis:
    """Kernel lattice {a : A a = 0 mod n, row by row} of a congruence system.

    Solved exactly: (a, k) with A a + diag(n) k = 0 over Z is an integer
    kernel computation, and projecting to the a-block generates the lattice.
    The index always equals the order of the subgroup the coefficient columns
    generate inside the direct sum of the Z_{n_i}.
    """
    m, r = system.m, system.r
    rows = []
    for i in range(r):
        row = list(system.coefficients[i]) + [0] * r
        row[m + i] = system.moduli[i]
        rows.append(row)
    kernel = integer_kernel(rows, m + r)
    projected = [v[:m] for v in kernel]
    return LatticeBasis.from_generators(projected, dimension=m)


def is_generating(L, vectors):
    """True iff *vectors* all lie in L and generate it over Z."""
    vs = [tuple(v) for v in vectors]
    if any(len(v) != L.dimension for v in vs):
        raise ValueError("vector length does not match dimension")
    if not all(v in L for v in vs):
        return False
    cols, _ = hnf_columns(vs, L.dimension)
    if len(cols) != L.dimension:
        return False
    return math.prod(cols[i][i] for i in range(L.dimension)) == L.index


@dataclass(frozen=True)
class TrivialDuplicateReport:
    trivial_indices: tuple
    duplicate_pairs: tuple

    @property
    def clean(self):
        return not self.trivial_indices and not self.duplicate_pairs


def detect_trivial_or_duplicate(L) -> TrivialDuplicateReport:
    """Find coordinates acting trivially and pairs acting identically.

    e_i in L means coordinate i carries the trivial character; e_i - e_j in L
    means coordinates i and j carry equal characters.  Indices are 0-based.
    """
    m = L.dimension
    trivial = []
    for i in range(m):
        e = tuple(1 if k == i else 0 for k in range(m))
        if e in L:
            trivial.append(i)
    pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            d = tuple((1 if k == i else 0) - (1 if k == j else 0) for k in range(m))
            if d in L:
                pairs.append((i, j))
    return TrivialDuplicateReport(tuple(trivial), tuple(pairs))


def drop_trivial_and_duplicates(system) -> CongruenceSystem:
    """Remove zero columns and repeated columns (first occurrence kept).

    The degree bounds of the kernel lattice are unchanged by this cleanup;
    raising AllColumnsRemovedError means the representation was entirely
    trivial and there is no lattice left worth asking about.
    """
    keep = []
    seen = set()
    for j in range(system.m):
        col = system.column(j)
        if not any(col):
            continue
        if col in seen:
            continue
        seen.add(col)
        keep.append(j)
    if not keep:
        raise AllColumnsRemovedError("every column is trivial or duplicate")
    rows = tuple(tuple(row[j] for j in keep) for row in system.coefficients)
    return CongruenceSystem(system.moduli, rows)


class GeneratedLattice:
    """Mutable echelon accumulator for the sublattice generated so far.

    Rows are kept keyed by pivot position with positive pivots; adding a
    vector reduces it against the rows, gcd-updating pivots on the way down.
    The product of the pivots is the index once the rank is full.  Used for
    incremental generation testing in shell searches.
    """

    def __init__(self, dimension):
        self.dimension = dimension
        self._by_pivot = {}

    @property
    def rank(self):
        return len(self._by_pivot)

    @property
    def index(self):
        if self.rank != self.dimension:
            return None
        return math.prod(self._by_pivot[j][j] for j in range(self.dimension))

    def __contains__(self, vec):
        v = list(vec)
        for j in range(self.dimension):
            if not v[j]:
                continue
            row = self._by_pivot.get(j)
            if row is None or v[j] % row[j]:
                return False
            q = v[j] // row[j]
            for k in range(j, self.dimension):
                v[k] -= q * row[k]
        return True

    def add(self, vec):
        v = list(vec)
        for j in range(self.dimension):
            if not v[j]:
                continue
            row = self._by_pivot.get(j)
            if row is None:
                if v[j] < 0:
                    v = [-t for t in v]
                self._by_pivot[j] = v
                return
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                for k in range(j, self.dimension):
                    v[k] -= q * row[k]
            else:
                g, x, y = xgcd(a, b)
                aa, bb = a // g, b // g
                for k in range(j, self.dimension):
                    s, t = row[k], v[k]
                    row[k] = x * s + y * t
                    v[k] = aa * t - bb * s
