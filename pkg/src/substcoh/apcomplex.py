"""One-dimensional Anderson-Putnam complexes and the induced H^1 presentation."""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import (Lattice, Mat, lattice_from_span, eventual_range,
                       smith_normal_form, vec)
from .substitution import (CollaredSystem, Substitution, collar,
                           collared_two_factors, incidence_matrix)


class NotCellular(RuntimeError):
    pass


class DisconnectedComplex(RuntimeError):
    pass


@dataclass(frozen=True)
class APComplex:
    edges: tuple          # edge labels, in order
    vertex_count: int
    delta: Mat            # vertices x edges boundary matrix
    tails: tuple          # vertex index per edge
    heads: tuple


def build_bouquet(s: Substitution) -> APComplex:
    """Wedge of one loop per letter; valid when the substitution forces its
    border through a common prefix or suffix."""
    n = len(s.alphabet)
    return APComplex(edges=s.alphabet, vertex_count=1,
                     delta=Mat.zero(1, n), tails=(0,) * n, heads=(0,) * n)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        self.parent[self.find(i)] = self.find(j)


def build_collared(cs: CollaredSystem) -> APComplex:
    """Edges are collared tiles; the head of e is glued to the tail of e'
    whenever ee' is an allowed 2-factor of the collared language."""
    edges = cs.alphabet
    idx = {e: i for i, e in enumerate(edges)}
    n = len(edges)
    # endpoint slots: 2i = tail of edge i, 2i+1 = head of edge i
    uf = _UnionFind(2 * n)
    for (e1, e2) in collared_two_factors(cs.base, cs):
        uf.union(2 * idx[e1] + 1, 2 * idx[e2])
    reps = {}
    for slot in range(2 * n):
        r = uf.find(slot)
        if r not in reps:
            reps[r] = len(reps)
    tails = tuple(reps[uf.find(2 * i)] for i in range(n))
    heads = tuple(reps[uf.find(2 * i + 1)] for i in range(n))
    V = len(reps)
    delta = [[0] * n for _ in range(V)]
    for i in range(n):
        delta[heads[i]][i] += 1
        delta[tails[i]][i] -= 1
    # connectedness of the underlying graph
    guf = _UnionFind(V)
    for i in range(n):
        guf.union(tails[i], heads[i])
    if len({guf.find(v) for v in range(V)}) != 1:
        raise DisconnectedComplex("AP complex is disconnected")
    return APComplex(edges=edges, vertex_count=V, delta=Mat(delta),
                     tails=tails, heads=heads)


def build_ap_complex(s: Substitution, route: str):
    """route 'bouquet' or 'collared'; returns (APComplex, sigma, system)."""
    if route == "bouquet":
        return build_bouquet(s), incidence_matrix(s), s
    if route == "collared":
        cs = collar(s)
        sub = cs.as_substitution()
        return build_collared(cs), incidence_matrix(sub), cs
    raise ValueError("unknown route %r" % route)


@dataclass(frozen=True)
class CohPresentation:
    """H^1(Y) = Z^E / im(delta^T) with the substitution-induced endomorphism.

    Quotient coordinates are q(x) = (U x)[r:] where U D V = S is the Smith
    form of D = delta^T and r its rank; the action A is the corresponding
    block of U sigma^T U^{-1}.
    """

    rank: int            # N = rank of H^1(Y)
    action: Mat          # A, N x N integer
    quotient_map: Mat    # N x E integer, x -> class coordinates
    er_basis: Mat        # N x d, columns span ER(A)
    er_action: Mat       # d x d invertible
    sigma_lattice: Lattice  # Sigma = ER(A) ∩ Z^N, in ER coordinates

    def class_of_cochain(self, x) -> tuple:
        return self.quotient_map.apply(vec(x))

    def er_coordinates(self, v) -> tuple:
        """ER coordinates of a class vector already lying in ER(A)."""
        c = self.er_basis.solve(vec(v))
        if c is None:
            raise ValueError("vector is not in the eventual range")
        return c


def h1_presentation(Y: APComplex, sigma: Mat) -> CohPresentation:
    E = len(Y.edges)
    D = Y.delta.t()  # E x V
    snf = smith_normal_form(D)
    r = snf.rank
    if any(d not in (0, 1) for d in snf.diagonal):
        raise ArithmeticError("torsion in edge-cochain quotient (impossible for a graph)")
    U = snf.U  # E x E unimodular; im D = U^{-1}(Z^r x 0)
    B = U * sigma.t() * U.inverse()
    if not B.is_integer():
        raise NotCellular("induced action is not integral on the quotient")
    for i in range(r, E):
        for j in range(r):
            if B.data[i][j] != 0:
                raise NotCellular("substitution action does not preserve im delta^T")
    N = E - r
    A = Mat([[B.data[i][j] for j in range(r, E)] for i in range(r, E)])
    Q = Mat([U.data[i] for i in range(r, E)]) if N else Mat.zero(0, E)
    P, a_tilde = eventual_range(A)
    sat = lattice_from_span(P.cols, [])
    if P.cols:
        # Sigma = (column span of P) ∩ Z^N, expressed in P-coordinates
        sat_ambient = lattice_from_span(N, P.columns())
        coords = []
        for b in sat_ambient.basis:
            c = P.solve(b)
            if c is None:
                raise ArithmeticError("saturation left the ER span (bug)")
            coords.append(c)
        sat = Lattice(P.cols, tuple(coords), saturated=True)
    return CohPresentation(rank=N, action=A, quotient_map=Q, er_basis=P,
                           er_action=a_tilde, sigma_lattice=sat)
