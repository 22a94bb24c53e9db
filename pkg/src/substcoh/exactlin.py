"""Exact integer/rational linear algebra.

Everything here works with arbitrary-precision rationals (fractions.Fraction);
no floating point is used anywhere.  Provides Smith normal form, Hermite-style
canonical lattice bases, eventual ranges, lattice saturation, and a feasibility
solver for systems of linear forms constrained to localized rings Z[1/m].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

Vec = tuple  # tuple of Fraction


def vec(entries) -> Vec:
    return tuple(Fraction(x) for x in entries)


def dot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in u)


def is_zero_vec(u: Vec) -> bool:
    return all(x == 0 for x in u)


class Mat:
    """Immutable matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        rows = tuple(tuple(Fraction(x) for x in row) for row in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]) if rows else 0)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Mat is immutable")

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r: int, c: int) -> "Mat":
        return Mat([[0] * c for _ in range(r)])

    @staticmethod
    def from_cols(cols) -> "Mat":
        cols = [vec(c) for c in cols]
        if not cols:
            return Mat([])
        return Mat([[c[i] for c in cols] for i in range(len(cols[0]))])

    def col(self, j: int) -> Vec:
        return tuple(self.data[i][j] for i in range(self.rows))

    def row(self, i: int) -> Vec:
        return self.data[i]

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def t(self) -> "Mat":
        return Mat([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other):
        return isinstance(other, Mat) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return "Mat(%r)" % ([[str(x) for x in row] for row in self.data],)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Mat([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat([[-x for x in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in product")
            ot = other.t().data
            return Mat([[sum((a * b for a, b in zip(row, col)), Fraction(0))
                         for col in ot] for row in self.data])
        return Mat([[Fraction(other) * x for x in row] for row in self.data])

    __rmul__ = __mul__

    def apply(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.data)

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.data for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def power(self, k: int) -> "Mat":
        if not self.is_square():
            raise ValueError("power of non-square matrix")
        if k < 0:
            return self.inverse().power(-k)
        result = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def rref(self):
        """Reduced row echelon form.  Returns (Mat, pivot column indices)."""
        m = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Mat(m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant of non-square matrix")
        m = [list(row) for row in self.data]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != c:
                m[c], m[pivot] = m[pivot], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det

    def inverse(self) -> "Mat":
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = Mat([list(self.data[i]) + [1 if i == j else 0 for j in range(n)]
                   for i in range(n)])
        red, pivots = aug.rref()
        if list(pivots[:n]) != list(range(n)):
            raise ValueError("matrix is singular")
        return Mat([row[n:] for row in red.data])

    def solve(self, b: Vec):
        """One exact solution x of self @ x = b, or None if inconsistent."""
        aug = Mat([list(row) + [bb] for row, bb in zip(self.data, b)])
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for r, c in enumerate(pivots):
            x[c] = red.data[r][self.cols]
        return tuple(x)

    def kernel_basis(self):
        """Canonical basis of the right kernel (from the RREF free columns)."""
        red, pivots = self.rref()
        pivset = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivset:
                continue
            v = [Fraction(0)] * self.cols
            v[free] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -red.data[r][free]
            basis.append(tuple(v))
        return basis

    def column_space_basis(self):
        """Canonical (row-echelon) basis of the column space."""
        red, pivots = self.t().rref()
        return [red.data[i] for i in range(len(pivots))]

    def int_rows(self):
        if not self.is_integer():
            raise ValueError("integer matrix expected")
        return [[int(x) for x in row] for row in self.data]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = S with S diagonal, d1 | d2 | ..., U and V unimodular."""

    U: Mat
    S: Mat
    V: Mat

    @property
    def diagonal(self):
        return tuple(int(self.S.data[i][i]) for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: Mat) -> SmithDecomposition:
    """Smith normal form of an integer matrix, exact."""
    m = A.int_rows()
    nr, nc = A.rows, A.cols
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        m[dst] = [a + f * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in m:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nr, nc):
        # find smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            done = True
            for i in range(t + 1, nr):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t] != 0:
                        done = False
            for j in range(t + 1, nc):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j] != 0:
                        done = False
            if done:
                # ensure pivot divides every remaining entry
                offender = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if m[i][j] % m[t][t] != 0:
                            offender = (i, j)
                            break
                    if offender:
                        break
                if offender is None:
                    break
                add_row(offender[0], t, 1)
                best = (t, t)
            else:
                best = min(((i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j] != 0),
                           key=lambda ij: abs(m[ij[0]][ij[1]]))
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithDecomposition(U=Mat(U), S=Mat(m), V=Mat(V))


def hermite_rows(rows) -> tuple:
    """Canonical (row-style Hermite) basis of the integer row span.

    Pivots are positive, entries above a pivot lie in [0, pivot); zero rows
    are dropped.  The result is the unique HNF basis of the lattice the rows
    generate, which makes all lattice-valued outputs byte-stable.
    """
    work = [[int(x) for x in r] for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    basis = []
    r = 0
    for c in range(ncols):
        idx = [i for i in range(r, len(work)) if work[i][c] != 0]
        if not idx:
            continue
        # gcd out the column below r via euclidean row ops
        while len(idx) > 1:
            idx.sort(key=lambda i: abs(work[i][c]))
            i0 = idx[0]
            for i in idx[1:]:
                q = work[i][c] // work[i0][c]
                work[i] = [a - q * b for a, b in zip(work[i], work[i0])]
            idx = [i for i in idx if work[i][c] != 0]
        i0 = idx[0]
        work[r], work[i0] = work[i0], work[r]
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0 and i > r:
                q = work[i][c] // work[r][c]
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        # reduce earlier rows above this pivot
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return tuple(tuple(x) for x in work[:r] if any(x))


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Free Z-module given by a linearly independent basis in Q^ambient."""

    ambient: int
    basis: tuple  # tuple of Vec, linearly independent
    saturated: bool = False

    def __post_init__(self):
        if self.basis:
            M = Mat(self.basis)
            if M.rank() != len(self.basis):
                raise ValueError("lattice basis is linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> Mat:
        """Basis vectors as columns (ambient x rank)."""
        return Mat.from_cols(self.basis) if self.basis else Mat.zero(self.ambient, 0)


def _integerize_rows(rows):
    out = []
    for r in rows:
        d = lcm(*[Fraction(x).denominator for x in r]) if r else 1
        row = [int(Fraction(x) * d) for x in r]
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        out.append(row)
    return out


def saturate(L: Lattice) -> Lattice:
    """Basis of (rational span of L) intersected with Z^ambient, canonical."""
    if not L.basis:
        return Lattice(L.ambient, (), saturated=True)
    B = Mat.from_cols(_integerize_rows(L.basis))  # scaling columns keeps the span
    snf = smith_normal_form(B)
    r = snf.rank
    Uinv = snf.U.inverse()
    gens = [Uinv.col(i) for i in range(r)]
    basis = hermite_rows(gens)
    return Lattice(L.ambient, tuple(vec(b) for b in basis), saturated=True)


def lattice_from_span(ambient: int, vectors) -> Lattice:
    """Saturated lattice spanned (over Q, then intersected with Z^n)."""
    vs = [vec(v) for v in vectors if not is_zero_vec(vec(v))]
    if not vs:
        return Lattice(ambient, (), saturated=True)
    # reduce to an independent subset first
    red, pivots = Mat(vs).t().rref()
    indep = [vs[j] for j in pivots]
    return saturate(Lattice(ambient, tuple(indep)))


def primitive_vector(v: Vec) -> Vec:
    """Primitive integer vector on the ray/line of v, sign-canonicalized."""
    v = vec(v)
    if is_zero_vec(v):
        raise ValueError("zero vector has no primitive representative")
    d = lcm(*[x.denominator for x in v])
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return vec(ints)


# ---------------------------------------------------------------------------
# Eventual range
# ---------------------------------------------------------------------------

def eventual_range(A: Mat):
    """Largest subspace on which the square matrix A acts invertibly.

    Returns (basis, a_tilde): `basis` is an N x r matrix whose columns span
    the column space of A^N over Q (canonical echelon choice), and `a_tilde`
    is the invertible r x r matrix of A restricted to that span.
    """
    if not A.is_square():
        raise ValueError("eventual range needs a square matrix")
    N = A.rows
    if N == 0:
        return Mat([]), Mat([])
    B = A.power(N)
    cols = B.column_space_basis()
    if not cols:
        return Mat.zero(N, 0), Mat([])
    P = Mat.from_cols(cols)
    r = P.cols
    # solve P * a_tilde = A * P column by column
    AP = A * P
    at_cols = []
    for j in range(r):
        x = P.solve(AP.col(j))
        if x is None:
            raise ArithmeticError("eventual range is not A-invariant (bug)")
        at_cols.append(x)
    a_tilde = Mat.from_cols(at_cols)
    if a_tilde.det() == 0:
        raise ArithmeticError("restriction to eventual range is singular (bug)")
    return P, a_tilde


# ---------------------------------------------------------------------------
# Localized feasibility solver
# ---------------------------------------------------------------------------

def factorize(n: int) -> dict:
    """Prime factorization by trial division (desk-scale inputs)."""
    n = abs(int(n))
    out = {}
    if n in (0, 1):
        return out
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational; raises on zero."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def in_z_localized(x: Fraction, m: int) -> bool:
    """True iff x lies in Z[1/m] (denominators supported on primes of m)."""
    d = Fraction(x).denominator
    m = abs(int(m))
    if m == 0:
        m = 1
    while d > 1:
        g = gcd(d, m)
        if g == 1:
            return False
        while d % g == 0:
            d //= g
    return True


def strip_primes(x: Fraction, m: int) -> Fraction:
    """Remove all prime factors of m from numerator and denominator of x."""
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    m = abs(int(m))
    if m > 1:
        for p in factorize(m):
            while num % p == 0:
                num //= p
            while den % p == 0:
                den //= p
    return Fraction(num, den)


def zinv_gcd(values, m: int) -> Fraction:
    """Canonical positive generator of the Z[1/m]-module the values generate."""
    stripped = [abs(strip_primes(Fraction(v), m)) for v in values if v != 0]
    if not stripped:
        return Fraction(0)
    num = 0
    den = 1
    for s in stripped:
        num = gcd(num, s.numerator)
        den = lcm(den, s.denominator)
    return Fraction(num, den)


@dataclass(frozen=True)
class LocalizedConstraint:
    """Requires form . t + offset to lie in Z[1/modulus]."""

    form: Vec
    modulus: int
    offset: Fraction = Fraction(0)

    def value(self, t: Vec) -> Fraction:
        return dot(self.form, t) + self.offset

    def satisfied(self, t: Vec) -> bool:
        return in_z_localized(self.value(t), self.modulus)


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Witness that no candidate satisfies the constraint system.

    `combination` is an integer vector over the constraint list whose pairing
    with the constraint forms vanishes on the feasible affine subspace, while
    the paired constants have negative p-adic valuation at `prime`.
    """

    reason: str
    prime: int | None = None
    constraint_index: int | None = None
    combination: tuple | None = None
    constant: Fraction | None = None


class LocalizedSolveError(RuntimeError):
    pass


def _affine_solution_space(equalities, dim):
    """Particular solution + kernel columns of the equality system."""
    if not equalities:
        return vec([0] * dim), Mat.identity(dim)
    rows = [vec(f) for f, _ in equalities]
    rhs = vec([r for _, r in equalities])
    E = Mat(rows)
    t0 = E.solve(rhs)
    if t0 is None:
        return None, None
    kern = E.kernel_basis()
    N = Mat.from_cols(kern) if kern else Mat.zero(dim, 0)
    return t0, N


def _p_part(x: Fraction, p: int) -> Fraction:
    """Representative of x mod Z_(p): fractional part supported at p only."""
    den = x.denominator
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    if e == 0:
        return Fraction(0)
    pe = p ** e
    # x = num / (pe * den); p-part = (num * den^{-1} mod pe) / pe
    num = x.numerator % (pe * den)
    inv = pow(den, -1, pe)
    return Fraction((x.numerator * inv) % pe, pe)


def _solve_mod_prime_power(A_rows, c, p, h):
    """Solve A sigma = c (mod p^h) over the integers; None if unsolvable.

    A_rows: integer matrix rows; c: integer vector.
    """
    A = Mat(A_rows)
    snf = smith_normal_form(A)
    ph = p ** h
    uc = [int(x) % ph for x in snf.U.apply(vec(c))]
    diag = snf.diagonal
    z = [0] * A.cols
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if uc[i] % ph != 0:
                return None
            continue
        a = min(valuation(Fraction(d), p) if d else h, h)
        if uc[i] % (p ** a) != 0:
            return None
        mod = p ** (h - a)
        if mod == 1:
            z[i] = 0
            continue
        dd = d // (p ** a)
        z[i] = ((uc[i] // (p ** a)) * pow(dd % mod, -1, mod)) % mod
    sigma = snf.V.apply(vec(z))
    return [int(x) for x in sigma]


def solve_localized(constraints, normalization=None, equalities=(), max_denominator_exp=48):
    """Find exact rational t with every linear form in its localized ring.

    constraints: iterable of LocalizedConstraint (or (form, modulus) pairs).
    normalization: optional (form, value) pair, an affine equality.
    equalities: extra (form, value) equality pairs.

    Returns (witness, None) or (None, InfeasibilityCertificate).
    """
    cons = []
    for c in constraints:
        if not isinstance(c, LocalizedConstraint):
            form, modulus = c
            c = LocalizedConstraint(vec(form), int(modulus))
        cons.append(c)
    eqs = list(equalities)
    if normalization is not None:
        eqs.append(normalization)
    dims = [len(c.form) for c in cons] + [len(vec(f)) for f, _ in eqs]
    if not dims:
        return (), None
    dim = dims[0]
    if any(d != dim for d in dims):
        raise ValueError("inconsistent dimensions across constraints")
    eqs = [(vec(f), Fraction(r)) for f, r in eqs]

    t0, N = _affine_solution_space(eqs, dim)
    if t0 is None:
        return None, InfeasibilityCertificate(reason="inconsistent normalization")

    nfree = N.cols
    Nt = N.t()
    reduced = []  # (alpha over free vars, beta, modulus)
    for c in cons:
        alpha = Nt.apply(c.form) if nfree else ()
        beta = dot(c.form, t0) + c.offset
        reduced.append((vec(alpha), beta, abs(c.modulus) if c.modulus else 1))

    # no free unknowns: each constraint is a direct membership check
    if nfree == 0 or all(is_zero_vec(a) for a, _, _ in reduced):
        for k, (_, beta, m) in enumerate(reduced):
            if not in_z_localized(beta, m):
                p = next(p for p in sorted(factorize(beta.denominator)) if m % p != 0)
                comb = tuple(Fraction(1 if i == k else 0) for i in range(len(cons)))
                return None, InfeasibilityCertificate(
                    reason="constraint %d violated at prime %d" % (k, p),
                    prime=p, constraint_index=k, combination=comb, constant=beta)
        return t0, None

    relevant = set()
    for alpha, beta, _ in reduced:
        for x in list(alpha) + [beta]:
            if x != 0:
                relevant.update(factorize(Fraction(x).denominator))
    relevant = sorted(relevant)

    local_solutions = {}
    for p in relevant:
        active = [k for k, (_, _, m) in enumerate(reduced) if m % p != 0]
        if not active:
            continue
        Mrows = [reduced[k][0] for k in active]
        bvec = vec([reduced[k][1] for k in active])
        cert = _check_p_feasible(Mrows, bvec, p, active, len(cons))
        if cert is not None:
            return None, cert
        local_solutions[p] = _find_p_witness(Mrows, bvec, p, nfree, max_denominator_exp)

    # CRT-combine the per-prime witnesses, enlarging margins until exact
    for margin in (1, 4, 16, 64):
        s = _crt_combine(local_solutions, nfree, reduced, margin)
        t = vadd(t0, N.apply(s)) if nfree else t0
        if all(LocalizedConstraint(c.form, c.modulus, c.offset).satisfied(t) for c in cons):
            return t, None
    raise LocalizedSolveError("failed to assemble a verified witness")


def _check_p_feasible(Mrows, bvec, p, active, ncons):
    """None if b is in Z_(p)^K + column span; else a certificate."""
    K = len(Mrows)
    # rows spanning the left kernel {w : w M = 0}
    Mmat = Mat(Mrows) if Mrows and len(Mrows[0]) else Mat.zero(K, 0)
    if Mmat.cols == 0:
        Wrows = [tuple(Fraction(1 if i == j else 0) for j in range(K)) for i in range(K)]
    else:
        Wrows = Mmat.t().kernel_basis()
    if not Wrows:
        return None
    Wint = Mat(_integerize_rows(Wrows))
    y = Wint.apply(bvec)
    snf = smith_normal_form(Wint)
    uy = snf.U.apply(y)
    diag = snf.diagonal
    UW = snf.U * Wint
    for i in range(Wint.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            continue
        zi = uy[i] / d
        if zi != 0 and valuation(zi, p) < 0:
            # dual-lattice certificate row: p-integral, kills the column span
            comb_active = [x / d for x in UW.row(i)]
            comb = [Fraction(0)] * ncons
            for pos, k in enumerate(active):
                comb[k] = comb_active[pos]
            kidx = next(active[pos] for pos, x in enumerate(comb_active) if x != 0)
            return InfeasibilityCertificate(
                reason="p-adically infeasible combination at prime %d" % p,
                prime=p, constraint_index=kidx, combination=tuple(comb), constant=zi)
    return None


def _find_p_witness(Mrows, bvec, p, nfree, cap):
    """s with denominator a power of p making all active forms p-integral."""
    e = 0
    for row in Mrows:
        for x in row:
            if x != 0:
                e = max(e, -valuation(x, p))
    for x in bvec:
        if x != 0:
            e = max(e, -valuation(x, p))
    for g in range(cap + 1):
        h = g + e
        if h == 0:
            return vec([0] * nfree)
        ph = p ** h
        A_rows = []
        for row in Mrows:
            A_rows.append([_mod_lift(x * p ** e, p, ph) for x in row])
        c = [_mod_lift(-b * p ** (g + e), p, ph) for b in bvec]
        sigma = _solve_mod_prime_power(A_rows, c, p, h)
        if sigma is not None:
            return vec([Fraction(x, p ** g) for x in sigma])
    raise LocalizedSolveError("denominator cap exhausted at prime %d" % p)


def _mod_lift(x: Fraction, p: int, ph: int) -> int:
    """Integer representative of a p-integral rational modulo ph."""
    den = x.denominator
    if gcd(den, p) != 1:
        raise LocalizedSolveError("internal: non p-integral coefficient")
    return (x.numerator * pow(den, -1, ph)) % ph


def _crt_combine(local_solutions, nfree, reduced, margin):
    if not local_solutions:
        return vec([0] * nfree)
    primes = sorted(local_solutions)
    gs = {}
    nums = {}
    for p in primes:
        s_p = local_solutions[p]
        g = max((-valuation(x, p) for x in s_p if x != 0), default=0)
        gs[p] = g
        nums[p] = [int(x * p ** g) for x in s_p]
    Q = 1
    for p in primes:
        Q *= p ** gs[p]
    extra = {}
    for p in primes:
        e = 0
        for alpha, beta, _ in reduced:
            for x in alpha:
                if x != 0:
                    e = max(e, -valuation(x, p))
        extra[p] = e + margin
    n = [0] * nfree
    for i in range(nfree):
        residues = []
        moduli = []
        for p in primes:
            mod = p ** (gs[p] + extra[p])
            target = ((Q // p ** gs[p]) * nums[p][i]) % mod
            residues.append(target)
            moduli.append(mod)
        n[i] = _crt(residues, moduli)
    return vec([Fraction(x, Q) for x in n])


def _crt(residues, moduli):
    x = 0
    m = 1
    for r, mod in zip(residues, moduli):
        g = gcd(m, mod)
        if (r - x) % g != 0:
            raise LocalizedSolveError("CRT inconsistency (bug)")
        l = m // g * mod
        diff = ((r - x) // g) * pow((m // g) % (mod // g), -1, mod // g) % (mod // g)
        x = (x + m * diff) % l
        m = l
    return x


def verify_certificate(cons, certificate: InfeasibilityCertificate, equalities=(), normalization=None) -> bool:
    """Independently re-check a prime obstruction certificate."""
    if certificate.prime is None:
        # inconsistent equalities: re-solve
        eqs = list(equalities)
        if normalization is not None:
            eqs.append(normalization)
        dims = [len(vec(f)) for f, _ in eqs]
        t0, _ = _affine_solution_space([(vec(f), Fraction(r)) for f, r in eqs], dims[0])
        return t0 is None
    p = certificate.prime
    cons = list(cons)
    if certificate.combination is None:
        return False
    comb = certificate.combination
    if len(comb) != len(cons):
        return False
    # combination must be p-integral and only involve constraints active at p
    for ck, c in zip(comb, cons):
        if ck != 0:
            if ck.denominator % p == 0:
                return False
            if c.modulus % p == 0:
                return False
    eqs = [(vec(f), Fraction(r)) for f, r in list(equalities) + ([normalization] if normalization else [])]
    dim = len(cons[0].form)
    t0, N = _affine_solution_space(eqs, dim)
    if t0 is None:
        return False
    # combined form must vanish on the feasible subspace
    combined = vec([sum((ck * c.form[i] for ck, c in zip(comb, cons)), Fraction(0))
                    for i in range(dim)])
    if N.cols:
        for j in range(N.cols):
            if dot(combined, N.col(j)) != 0:
                return False
    constant = sum((ck * (dot(c.form, t0) + c.offset) for ck, c in zip(comb, cons)), Fraction(0))
    return constant != 0 and valuation(constant, p) < 0
