"""Geometry of numbers for L1 balls against a full-rank lattice.

Successive minima by exhaustive shell search, the Minkowski product test,
short bases refined from minima witnesses, and the completion of m - 1 short
independent vectors to a genuine basis via the determinant linear form.  The
rational steps (coordinates across a hyperplane, root enclosures) all run on
fractions.Fraction; nothing is floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .ball_enum import shell_points
from .degree_bounds import CapExceededError
from .lattice_core import det_int, integer_kernel, is_generating, l1norm, xgcd


class DependentInputError(ValueError):
    """The supplied vectors are linearly dependent."""


class NoSolutionError(ValueError):
    """No integer solution exists (inputs were not from the lattice)."""


class _RankTracker:
    """Incremental rank of a growing set of integer vectors, exact over Q."""

    def __init__(self, dimension):
        self.dimension = dimension
        self._rows = {}

    def try_add(self, vec):
        v = [Fraction(t) for t in vec]
        for j in range(self.dimension):
            if not v[j]:
                continue
            row = self._rows.get(j)
            if row is None:
                inv = 1 / v[j]
                self._rows[j] = [t * inv for t in v]
                return True
            coef = v[j]
            for k in range(j, self.dimension):
                v[k] -= coef * row[k]
        return False

    @property
    def rank(self):
        return len(self._rows)


@dataclass(frozen=True)
class SuccessiveMinima:
    """values[i] is the least radius reaching i+1 independent lattice vectors."""

    values: tuple
    witnesses: tuple


def successive_minima(L, cap=None) -> SuccessiveMinima:
    """Exact successive minima of the L1 ball against L.

    Shells are scanned outward; any member that enlarges the span of the
    vectors collected so far is kept, so the shell radius at the i-th
    collection is exactly the i-th minimum.  index * e_i always lies in L,
    which makes index a safe default cap.
    """
    m = L.dimension
    if cap is None:
        cap = L.index
    tracker = _RankTracker(m)
    values = []
    witnesses = []
    for d in range(1, cap + 1):
        for v in shell_points(m, d, "all"):
            if v not in L:
                continue
            if tracker.try_add(v):
                values.append(d)
                witnesses.append(v)
                if len(values) == m:
                    return SuccessiveMinima(tuple(values), tuple(witnesses))
    raise CapExceededError("successive_minima", cap)


@dataclass(frozen=True)
class MinkowskiCheck:
    minima: SuccessiveMinima
    product: int
    bound: int
    ok: bool


def minkowski_check(L, sm=None) -> MinkowskiCheck:
    """Second-theorem product test specialised to the cross-polytope.

    The L1 unit ball has volume 2^m / m!, so the product of the minima is at
    most m! * index.  Always true; returned as evidence, not assumed.  sm
    may carry minima already computed for L; otherwise they are recomputed.
    """
    if sm is None:
        sm = successive_minima(L)
    product = math.prod(sm.values)
    bound = math.factorial(L.dimension) * L.index
    return MinkowskiCheck(sm, product, bound, product <= bound)


def _solve_fractions(columns, target):
    """Solve sum_j x_j columns[j] = target over Q; needs independent columns."""
    k = len(columns)
    n = len(target)
    aug = [[Fraction(columns[j][r]) for j in range(k)] + [Fraction(target[r])] for r in range(n)]
    pivot_rows = []
    for c in range(k):
        pr = None
        for r in range(n):
            if r not in pivot_rows and aug[r][c]:
                pr = r
                break
        if pr is None:
            raise DependentInputError("columns are linearly dependent")
        pivot_rows.append(pr)
        inv = 1 / aug[pr][c]
        aug[pr] = [t * inv for t in aug[pr]]
        for r in range(n):
            if r != pr and aug[r][c]:
                coef = aug[r][c]
                aug[r] = [a - coef * b for a, b in zip(aug[r], aug[pr])]
    for r in range(n):
        if r not in pivot_rows and aug[r][k]:
            raise NoSolutionError("target is outside the span of the columns")
    return [aug[pivot_rows[c]][k] for c in range(k)]


def _solve_integer_combo(values, target):
    """Deterministic integer x with sum x_k values[k] = target, via running gcds."""
    g = 0
    coeffs = []
    for v in values:
        g2, a, b = xgcd(g, v)
        coeffs = [a * t for t in coeffs]
        coeffs.append(b)
        g = g2
    if g == 0:
        if target == 0:
            return [0] * len(values)
        raise NoSolutionError("all values are zero")
    if target % g:
        raise NoSolutionError(f"{target} is not a multiple of gcd {g}")
    scale = target // g
    return [t * scale for t in coeffs]


def _functional_preimage(f):
    """Integer y with f . y = 1; requires gcd of the entries to be 1."""
    g = 0
    y = [0] * len(f)
    coeffs = []
    for v in f:
        g2, a, b = xgcd(g, v)
        coeffs = [a * t for t in coeffs]
        coeffs.append(b)
        g = g2
    if g != 1:
        raise NoSolutionError("functional is not primitive")
    return coeffs


@dataclass(frozen=True)
class MahlerBasis:
    vectors: tuple
    norms: tuple
    minima: SuccessiveMinima


def mahler_basis(L) -> MahlerBasis:
    """Basis of L with the i-th vector inside span of the first i minima
    witnesses and norm at most i * lambda_i; determinant forced to +index.

    Classical refinement: for each i the lattice points inside the span of
    the first i witnesses form a saturated rank-i sublattice; the partial
    basis extends across it, and the extension is shifted by the rounding
    box around v_i / a_i to stay short.  The i * lambda_i ceiling is checked
    and a violation raises, rather than returning a silently weaker basis.
    """
    m = L.dimension
    sm = successive_minima(L)
    ucoords = [L.coords(v) for v in sm.witnesses]
    basis_x = []
    basis_amb = []
    for i in range(1, m + 1):
        if i < m:
            perp = integer_kernel(ucoords[:i], m)
            K = integer_kernel([list(w) for w in perp], m)
        else:
            K = [tuple(1 if k == j else 0 for k in range(m)) for j in range(m)]
        cs = [[int(t) for t in _solve_fractions(K, bx)] for bx in basis_x]
        yv = [int(t) for t in _solve_fractions(K, ucoords[i - 1])]
        if cs:
            fs = integer_kernel([list(c) for c in cs], i)
            if len(fs) != 1:
                raise DependentInputError("partial basis degenerated")
            f = list(fs[0])
        else:
            f = [1] + [0] * (i - 1)
        a_i = sum(a * b for a, b in zip(f, yv))
        if a_i < 0:
            f = [-t for t in f]
            a_i = -a_i
        if a_i == 0:
            raise DependentInputError("minima witness fell into the previous span")
        y0 = _functional_preimage(f)
        if cs:
            delta = [Fraction(yv[k], a_i) - y0[k] for k in range(i)]
            s = _solve_fractions(cs, delta)
            options = []
            for sj in s:
                fl = math.floor(sj)
                options.append((fl,) if fl == sj else (fl, fl + 1))
            best = None
            for zs in itertools.product(*options):
                y = list(y0)
                for z, c in zip(zs, cs):
                    for k in range(i):
                        y[k] += z * c[k]
                x = [sum(y[k] * K[k][r] for k in range(i)) for r in range(m)]
                amb = tuple(
                    sum(x[k] * L.columns[k][r] for k in range(m)) for r in range(m)
                )
                cand = (l1norm(amb), amb, x)
                if best is None or cand < best:
                    best = cand
            _, amb, x = best
        else:
            x = [sum(y0[k] * K[k][r] for k in range(i)) for r in range(m)]
            amb = tuple(sum(x[k] * L.columns[k][r] for k in range(m)) for r in range(m))
        lead = next((t for t in amb if t != 0), 0)
        if lead < 0:
            amb = tuple(-t for t in amb)
            x = [-t for t in x]
        basis_x.append(x)
        basis_amb.append(amb)
    d = det_int([[basis_amb[c][r] for c in range(m)] for r in range(m)])
    if abs(d) != L.index:
        raise RuntimeError("refined vectors do not form a basis; construction bug")
    if d < 0:
        basis_amb[-1] = tuple(-t for t in basis_amb[-1])
    norms = tuple(l1norm(b) for b in basis_amb)
    for i, nm in enumerate(norms, start=1):
        if nm > i * sm.values[i - 1]:
            raise RuntimeError(
                f"basis vector {i} has norm {nm} > {i} * minimum {sm.values[i - 1]}")
    return MahlerBasis(tuple(basis_amb), norms, sm)


@dataclass(frozen=True)
class DeterminantForm:
    """Integer linear form w -> det(b_1, ..., b_{m-1}, w) as a coefficient row."""

    coefficients: tuple

    def apply(self, w):
        return sum(a * x for a, x in zip(self.coefficients, w))


def determinant_form(vectors, dimension=None) -> DeterminantForm:
    """Cofactor expansion of det with the m - 1 given columns fixed.

    The j-th coefficient is (-1)^(j+1+m) times the minor that deletes row j,
    so applying the form to any w gives the full determinant with w as the
    last column.  All-zero coefficients mean the inputs were dependent.
    """
    vs = [tuple(v) for v in vectors]
    if dimension is None:
        if not vs:
            raise ValueError("need the dimension for an empty vector list")
        dimension = len(vs[0])
    if len(vs) != dimension - 1 or any(len(v) != dimension for v in vs):
        raise ValueError("expected m - 1 vectors of length m")
    coeffs = []
    for j in range(dimension):
        minor = [[vs[c][r] for c in range(dimension - 1)]
                 for r in range(dimension) if r != j]
        sign = -1 if (j + 1 + dimension) % 2 else 1
        coeffs.append(sign * det_int(minor))
    if not any(coeffs):
        raise DependentInputError("vectors are linearly dependent")
    return DeterminantForm(tuple(coeffs))


@dataclass(frozen=True)
class BasisCompletion:
    """Completion b* of m - 1 short lattice vectors to a basis of L.

    dstar is the signed dominant coefficient of the determinant form, picked
    as the largest absolute value with ties to the smallest index;
    dstar_at_least_index records the degenerate regime |D*| >= index.
    """

    bstar: tuple
    dstar: int
    dstar_index: int
    norm_bound: Fraction
    dstar_at_least_index: bool
    form: DeterminantForm


def complete_basis_short(L, short_vectors) -> BasisCompletion:
    """Complete m - 1 independent short members of L to a basis of L.

    b* is found inside the affine hyperplane {w : D . w = index}: take the
    deterministic c in L with D . c = index, then shift by the floor of the
    rational coordinates of (index / D*) e_{j*} - c over the given vectors.
    That pins ||b*||_1 <= index / |D*| + sum of the given norms, and makes
    det(b_1, ..., b_{m-1}, b*) = +index exactly.
    """
    m = L.dimension
    bs = [tuple(v) for v in short_vectors]
    if len(bs) != m - 1:
        raise ValueError("expected m - 1 vectors")
    for v in bs:
        if v not in L:
            raise NoSolutionError("short vectors must lie in the lattice")
    form = determinant_form(bs, m)
    D = form.coefficients
    dstar_index = max(range(m), key=lambda j: abs(D[j]))
    dstar = D[dstar_index]
    images = [form.apply(col) for col in L.columns]
    x = _solve_integer_combo(images, L.index)
    c = [sum(x[k] * L.columns[k][r] for k in range(m)) for r in range(m)]
    diff = [Fraction(L.index, dstar) - c[r] if r == dstar_index else Fraction(-c[r])
            for r in range(m)]
    ts = _solve_fractions(bs, diff) if bs else []
    bstar = list(c)
    for t, b in zip(ts, bs):
        ft = math.floor(t)
        if ft:
            for r in range(m):
                bstar[r] += ft * b[r]
    bstar = tuple(bstar)
    if form.apply(bstar) != L.index:
        raise RuntimeError("completion missed the determinant target; construction bug")
    norm_bound = Fraction(L.index, abs(dstar)) + sum(l1norm(b) for b in bs)
    if l1norm(bstar) > norm_bound:
        raise RuntimeError("completion exceeded its norm bound; construction bug")
    return BasisCompletion(
        bstar, dstar, dstar_index, norm_bound, abs(dstar) >= L.index, form)


@dataclass(frozen=True)
class GenDegBasis:
    """Full short basis: m - 1 refined vectors plus the hyperplane completion."""

    vectors: tuple
    norms: tuple
    max_norm: int
    bound: int
    within_bound: bool
    completion: BasisCompletion


def gen_deg_basis(L) -> GenDegBasis:
    """Basis of L assembled from the minima refinement and b*.

    bound is ceil(index / ceil(m / 2)); within_bound reports whether the
    construction met it on this lattice (guaranteed only asymptotically, so
    it is a flag and not an assertion).
    """
    m = L.dimension
    if m == 1:
        short = []
    else:
        short = list(mahler_basis(L).vectors[: m - 1])
    comp = complete_basis_short(L, short)
    vectors = tuple(short) + (comp.bstar,)
    norms = tuple(l1norm(v) for v in vectors)
    bound = -(-L.index // ((m + 1) // 2))
    max_norm = max(norms)
    return GenDegBasis(vectors, norms, max_norm, bound, max_norm <= bound, comp)


def effective_minima_bounds(dimension, index):
    """Rational upper enclosures for the norms of the refined basis vectors.

    For i = 1 .. m-1 the i-th entry dominates i * lambda_i under the standing
    hypothesis that the lattice has no norm-1 points and at most floor(m/2)
    norm-2 points.  Roots are rounded outward on a 10^-6 grid, so the values
    are true upper bounds.
    """
    m = dimension
    if m < 2:
        raise ValueError("bounds are defined for dimension >= 2")
    half = m // 2
    fact = math.factorial(m)
    out = []
    for i in range(1, m):
        if i <= half:
            q = Fraction(fact * index, 2 ** (i - 1))
        else:
            q = Fraction(fact * index, 2 ** half * 3 ** (i - 1 - half))
        out.append(i * _ceil_root(q, m - i + 1))
    return tuple(out)


def _ceil_root(q, e, scale=10 ** 6):
    """Smallest k / scale with (k / scale)^e >= q, exactly."""
    target = scale ** e * q.numerator
    den = q.denominator
    hi = 1
    while hi ** e * den < target:
        hi *= 2
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** e * den >= target:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, scale)


def dual_pair_lift(L, pairs, vectors):
    """Push a generating set into the nonnegative orthant using pair sums.

    pairs must partition the coordinate set into two-element blocks whose
    indicator sums e_i + e_j lie in L (inverse-closed coordinates).  Each
    vector a is shifted by -min(a_i, a_j, 0) along each pair sum, which never
    increases the L1 norm; the shifted vectors together with the pair sums
    generate whatever the input generated.
    """
    m = L.dimension
    blocks = [tuple(sorted(p)) for p in pairs]
    flat = sorted(i for p in blocks for i in p)
    if flat != list(range(m)) or any(len(set(p)) != 2 for p in blocks):
        raise ValueError("pairs must partition {0..m-1} into 2-element blocks")
    units = []
    for i, j in blocks:
        u = tuple(1 if k in (i, j) else 0 for k in range(m))
        if u not in L:
            raise ValueError(f"pair sum e_{i} + e_{j} is not in the lattice")
        units.append(u)
    lifted = []
    for a in vectors:
        a = tuple(a)
        if a not in L:
            raise ValueError("vectors to lift must lie in the lattice")
        b = list(a)
        for i, j in blocks:
            c = -min(a[i], a[j], 0)
            if c:
                b[i] += c
                b[j] += c
        if min(b) < 0 or l1norm(b) > l1norm(a):
            raise RuntimeError("lift violated its own contract; construction bug")
        lifted.append(tuple(b))
    out = tuple(lifted) + tuple(units)
    if not is_generating(L, out):
        raise ValueError("input vectors did not generate the lattice")
    return out
