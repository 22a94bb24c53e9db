"""Arithmetic in Q(lambda) for an algebraic dilation lambda.

Elements are polynomials in lambda with rational coefficients, reduced modulo
the (monic, integer) minimal polynomial.  Just enough field arithmetic for
left eigenvectors and tau values; nothing fancier.
"""

from __future__ import annotations

from fractions import Fraction


def _poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
    return _poly_trim(q), _poly_trim(a)


class NFElem:
    """Element of Q[x]/(minpoly), with minpoly monic over Z, ascending coeffs."""

    __slots__ = ("minpoly", "coeffs")

    def __init__(self, minpoly, coeffs):
        minpoly = tuple(int(c) for c in minpoly)
        if minpoly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        deg = len(minpoly) - 1
        cs = [Fraction(c) for c in coeffs]
        if len(cs) >= len(minpoly):
            _, cs = _poly_divmod(cs, [Fraction(c) for c in minpoly])
        cs = cs + [Fraction(0)] * (deg - len(cs))
        self.minpoly = minpoly
        self.coeffs = tuple(cs[:deg])

    @staticmethod
    def root(minpoly):
        return NFElem(minpoly, (0, 1))

    @staticmethod
    def const(minpoly, q):
        return NFElem(minpoly, (Fraction(q),))

    def _wrap(self, other):
        if isinstance(other, NFElem):
            if other.minpoly != self.minpoly:
                raise ValueError("mixed number fields")
            return other
        return NFElem.const(self.minpoly, other)

    def __add__(self, other):
        o = self._wrap(other)
        return NFElem(self.minpoly, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.minpoly, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        return NFElem(self.minpoly, _poly_mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended euclid: r0 = minpoly, r1 = self
        r0 = [Fraction(c) for c in self.minpoly]
        r1 = _poly_trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            s = [a - b for a, b in
                 zip(s0 + [Fraction(0)] * max(0, len(_poly_mul(q, s1)) - len(s0)),
                     _poly_mul(q, s1) + [Fraction(0)] * max(0, len(s0) - len(_poly_mul(q, s1))))]
            r0, r1 = r1, r
            s0, s1 = s1, _poly_trim(s)
        # r0 is the gcd, a nonzero constant since minpoly is irreducible
        if len(r0) != 1:
            raise ArithmeticError("minimal polynomial is not irreducible")
        c = r0[0]
        return NFElem(self.minpoly, [x / c for x in s0])

    def __truediv__(self, other):
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        try:
            o = self._wrap(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.minpoly, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return "NFElem(%s)" % (" + ".join(
            "%s*x^%d" % (c, i) for i, c in enumerate(self.coeffs) if c != 0) or "0")

    def approx(self, root: float) -> float:
        return float(sum(float(c) * root ** i for i, c in enumerate(self.coeffs)))

    @property
    def rational_part(self):
        """The element as a Fraction if it is rational, else None."""
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None


def nf_kernel_basis(rows):
    """Kernel basis of a matrix with NFElem entries (Gaussian elimination)."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    pivset = set(pivots)
    minpoly = rows[0][0].minpoly
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [NFElem.const(minpoly, 0) for _ in range(ncols)]
        v[free] = NFElem.const(minpoly, 1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][free]
        basis.append(v)
    return basis
