"""Direct limit groups G = ⋃_n Ã⁻ⁿΣ with exact element arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy

from .exactlin import (Lattice, Mat, dot, hermite_rows, is_zero_vec,
                       lattice_from_span, primitive_vector, smith_normal_form,
                       vec, vsub)


class NotDiagonalizable(RuntimeError):
    pass


class DLGroup:
    """The group ⋃_n Ã⁻ⁿΣ inside the eventual range.

    `er_action` is the invertible action Ã in ambient (ER) coordinates and
    `lattice` the full-rank lattice Σ.  Optional `presentation` carries the
    stage-0 data needed by embed(); optional `inclusion` maps the ambient
    coordinates of a subgroup into its parent's ambient space.
    """

    def __init__(self, er_action: Mat, lattice: Lattice, presentation=None,
                 inclusion: Mat | None = None):
        if not er_action.is_square() or er_action.rows != lattice.ambient:
            raise ValueError("action/lattice dimension mismatch")
        if lattice.rank != lattice.ambient:
            raise ValueError("Sigma must have full rank in the ambient space")
        self.er_action = er_action
        self.lattice = lattice
        self.presentation = presentation
        self.inclusion = inclusion
        self.dim = er_action.rows
        if self.dim:
            if er_action.det() == 0:
                raise ValueError("action must be invertible on the eventual range")
            B = lattice.basis_matrix()
            self._basis = B
            self._basis_inv = B.inverse()
            self.action_on_sigma = self._basis_inv * er_action * B
            if not self.action_on_sigma.is_integer():
                raise ValueError("action does not map Sigma into itself")
        else:
            self._basis = self._basis_inv = Mat([])
            self.action_on_sigma = Mat([])

    def sigma_coords(self, x) -> tuple:
        return self._basis_inv.apply(vec(x))

    def from_sigma_coords(self, s) -> tuple:
        return self._basis.apply(vec(s))

    def membership(self, x):
        """Smallest n with Ãⁿx ∈ Σ, or None.

        Iterates the residue of the Σ-coordinates modulo 1; the residues have
        denominators dividing the initial ones, so the orbit is finite and a
        revisit certifies non-membership.
        """
        if self.dim == 0:
            return 0 if is_zero_vec(vec(x)) else None
        r = tuple(c - c.__floor__() for c in self.sigma_coords(x))
        seen = set()
        n = 0
        while True:
            if all(c == 0 for c in r):
                return n
            if r in seen:
                return None
            seen.add(r)
            r = tuple(c - c.__floor__() for c in self.action_on_sigma.apply(r))
            n += 1

    def element(self, value) -> "DLElement":
        return DLElement(self, vec(value))

    def zero(self) -> "DLElement":
        return DLElement(self, vec([0] * self.dim))

    def embed(self, v) -> "DLElement":
        """ι of a stage-0 class vector v ∈ Z^N: value = Ã⁻ᵐ(Aᵐ v), m = N."""
        pres = self.presentation
        if pres is None:
            raise ValueError("group has no stage-0 presentation attached")
        m = pres.rank
        w = pres.action.power(m).apply(vec(v))
        c = pres.er_coordinates(w)
        return self.element(self.er_action.power(-m).apply(c))

    def is_finitely_generated(self) -> bool:
        if self.dim == 0:
            return True
        return abs(self.action_on_sigma.det()) == 1

    def char_poly_coeffs(self, matrix=None) -> tuple:
        M = self.er_action if matrix is None else matrix
        if M.rows == 0:
            return (1,)
        sm = sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M.data[i][j]))
        x = sympy.Symbol("x")
        return tuple(int(c) for c in reversed(sm.charpoly(x).all_coeffs()))

    def decompose(self) -> "Decomposition":
        """Eigen-decomposition H¹ ≅ ⊕ Z[1/λᵢ]·Lᵢ + coset representatives.

        Requires the action to be diagonalizable with rational (hence integer)
        eigenvalues; otherwise raises NotDiagonalizable.
        """
        if self.dim == 0:
            return Decomposition(lines=(), index=1, coset_reps=(vec([]),))
        A = self.action_on_sigma
        sm = sympy.Matrix(A.rows, A.cols, lambda i, j: sympy.Rational(A.data[i][j]))
        x = sympy.Symbol("x")
        charpoly = sympy.Poly(sm.charpoly(x).as_expr(), x)
        factors = sympy.factor_list(charpoly.as_expr())[1]
        eigen = []
        for fac, _ in factors:
            p = sympy.Poly(fac, x)
            if p.degree() != 1:
                raise NotDiagonalizable("irrational eigenvalue %s" % fac)
            root = sympy.Rational(-p.nth(0), p.nth(1))
            if root.q != 1:
                raise ArithmeticError("rational eigenvalue of an integer matrix must be an integer")
            eigen.append(int(root))
        eigen = sorted(set(eigen), reverse=True)
        lines = []
        all_gens = []
        total_rank = 0
        for lam in eigen:
            K = Mat([[A.data[i][j] - (lam if i == j else 0) for j in range(A.cols)]
                     for i in range(A.rows)])
            kern = K.kernel_basis()
            if not kern:
                raise ArithmeticError("charpoly root with empty eigenspace (bug)")
            L = lattice_from_span(self.dim, kern)  # saturated in Sigma-coords
            total_rank += L.rank
            gens_er = tuple(self.from_sigma_coords(b) for b in L.basis)
            lines.append(EigenLine(eigenvalue=lam, ring_base=abs(lam),
                                   generators_sigma=L.basis, generators=gens_er))
            all_gens.extend(L.basis)
        if total_rank != self.dim:
            raise NotDiagonalizable("minimal polynomial is not squarefree")
        M = Mat.from_cols(all_gens)
        index = abs(int(M.det()))
        snf = smith_normal_form(M)
        Uinv = snf.U.inverse()
        reps = []
        diag = snf.diagonal
        counters = [0] * len(diag)
        while True:
            y = vec(counters)
            reps.append(self.from_sigma_coords(Uinv.apply(y)))
            i = len(diag) - 1
            while i >= 0:
                counters[i] += 1
                if counters[i] < diag[i]:
                    break
                counters[i] = 0
                i -= 1
            if i < 0:
                break
        return Decomposition(lines=tuple(lines), index=index, coset_reps=tuple(reps))

    def subgroup_line(self, v):
        """G ∩ Qv for an eigenvector v of Ã; always Z[1/λᵥ]·u with u the
        primitive generator of Σ ∩ Qv.  Returns (line group, λᵥ, u)."""
        v = vec(v)
        if is_zero_vec(v):
            raise ValueError("zero vector spans no line")
        av = self.er_action.apply(v)
        j = next(i for i, c in enumerate(v) if c != 0)
        lam = av[j] / v[j]
        if self.er_action.apply(v) != tuple(lam * c for c in v):
            raise ValueError("vector is not an eigenvector of the action")
        if lam.denominator != 1:
            raise ArithmeticError("rational eigenvalue of an integer action must be an integer")
        s = primitive_vector(self.sigma_coords(v))
        u = self.from_sigma_coords(s)
        line = DLGroup(er_action=Mat([[lam]]),
                       lattice=Lattice(1, (vec([1]),), saturated=True),
                       inclusion=Mat.from_cols([u]))
        return line, int(lam), u

    def random_member(self, rng, max_level=6, coeff_bound=9) -> "DLElement":
        """Seeded pseudorandom member: Ã⁻ⁿ(integer Σ-combination)."""
        n = rng.randrange(max_level + 1)
        s = vec([rng.randrange(-coeff_bound, coeff_bound + 1) for _ in range(self.dim)])
        x = self.from_sigma_coords(s)
        return self.element(self.er_action.power(-n).apply(x))


@dataclass(frozen=True)
class EigenLine:
    eigenvalue: int
    ring_base: int           # Z[1/ring_base]; base 1 means plain Z
    generators_sigma: tuple  # primitive basis of Σ ∩ eigenspace, Σ-coords
    generators: tuple        # the same in ambient ER coordinates


@dataclass(frozen=True)
class Decomposition:
    lines: tuple
    index: int
    coset_reps: tuple


class DLElement:
    __slots__ = ("group", "value", "_level")

    def __init__(self, group: DLGroup, value):
        self.group = group
        self.value = vec(value)
        self._level = -1  # computed lazily

    @property
    def level(self):
        if self._level == -1:
            self._level = self.group.membership(self.value)
            if self._level is None:
                raise ValueError("value %r is not a member of the group" % (self.value,))
        return self._level

    def is_member(self) -> bool:
        if self._level == -1:
            lvl = self.group.membership(self.value)
            self._level = lvl if lvl is not None else None
        return self._level is not None

    def __add__(self, other):
        if not isinstance(other, DLElement) or other.group is not self.group:
            raise ValueError("elements belong to different groups")
        return DLElement(self.group, tuple(a + b for a, b in zip(self.value, other.value)))

    def __neg__(self):
        return DLElement(self.group, tuple(-a for a in self.value))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return DLElement(self.group, tuple(c * a for a in self.value))

    def __eq__(self, other):
        return isinstance(other, DLElement) and self.group is other.group \
            and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "DLElement(%s)" % (tuple(str(c) for c in self.value),)
