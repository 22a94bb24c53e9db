import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from substcoh.dirlimit import DLGroup, NotDiagonalizable
from substcoh.exactlin import Lattice, Mat, vec

Z2 = Lattice(2, (vec([1, 0]), vec([0, 1])), saturated=True)

NONSPLIT = DLGroup(Mat([[1, 2], [3, 0]]), Z2)     # det -6
PERDOUBLE = DLGroup(Mat([[1, 1], [2, 0]]), Z2)    # det -2
FIB = DLGroup(Mat([[1, 1], [1, 0]]), Z2)          # det -1


def test_membership_examples():
    assert NONSPLIT.membership((1, 0)) == 0
    # A(-1, 3/2) = (2, -3)
    assert NONSPLIT.membership((-1, F(3, 2))) == 1
    # (1/3, 0) cycles: A(1/3,0) = (1/3, 1) = (1/3, 0) mod 1
    assert NONSPLIT.membership((F(1, 3), 0)) is None
    assert NONSPLIT.membership((0, 0)) == 0


def test_membership_brute_force_oracle():
    rng = random.Random(7)
    A = NONSPLIT.er_action
    for _ in range(200):
        x = vec([F(rng.randrange(-6, 7), rng.choice([1, 2, 3, 4, 6]))
                 for _ in range(2)])
        n = NONSPLIT.membership(x)
        y = x
        hits = []
        for k in range(21):
            if all(c.denominator == 1 for c in y):
                hits.append(k)
            y = A.apply(y)
        if n is None:
            assert not hits
        else:
            assert hits and hits[0] == n


def test_element_arithmetic_and_level():
    g = NONSPLIT
    a = g.element((-1, F(3, 2)))
    b = g.element((1, F(-1, 2)))
    assert a.level == 1
    assert (a + b).value == (0, 1)
    assert (a + b).level == 0
    assert (-a).level == 1
    assert (a - a).level == 0
    assert a.scale(2).level == 0  # 2a = (-2, 3) is already integral
    with pytest.raises(ValueError):
        g.element((F(1, 3), 0)).level


def test_is_finitely_generated():
    assert not NONSPLIT.is_finitely_generated()   # |det| = 6
    assert not PERDOUBLE.is_finitely_generated()  # |det| = 2
    assert FIB.is_finitely_generated()            # |det| = 1
    trivial = DLGroup(Mat([]), Lattice(0, (), saturated=True))
    assert trivial.is_finitely_generated()


def test_decompose_nonsplit():
    dec = NONSPLIT.decompose()
    assert dec.index == 5
    assert len(dec.coset_reps) == 5
    by_eig = {l.eigenvalue: l for l in dec.lines}
    assert set(by_eig) == {3, -2}
    assert by_eig[3].generators == ((F(1), F(1)),)
    assert by_eig[3].ring_base == 3
    g = by_eig[-2].generators[0]
    assert tuple(abs(c) for c in g) == (F(2), F(3))  # ±(2, -3)
    assert by_eig[-2].ring_base == 2
    # coset reps exhaust Sigma modulo the span of the eigen-generators
    span = Mat.from_cols([by_eig[3].generators_sigma[0],
                          by_eig[-2].generators_sigma[0]])
    residues = set()
    for r in dec.coset_reps:
        x = span.solve(vec(NONSPLIT.sigma_coords(r)))
        residues.add(tuple(c - c.__floor__() for c in x))
    assert len(residues) == 5


def test_decompose_perdouble():
    dec = PERDOUBLE.decompose()
    assert dec.index == 3
    by_eig = {l.eigenvalue: l for l in dec.lines}
    assert set(by_eig) == {2, -1}
    assert by_eig[2].generators == ((F(1), F(1)),)
    assert by_eig[-1].ring_base == 1  # plain Z summand
    assert tuple(abs(c) for c in by_eig[-1].generators[0]) == (F(1), F(2))


def test_decompose_refuses_irrational():
    with pytest.raises(NotDiagonalizable):
        FIB.decompose()  # x^2 - x - 1 has no rational roots
    with pytest.raises(NotDiagonalizable):
        DLGroup(Mat([[2, 1], [0, 2]]), Z2).decompose()  # defective


def test_subgroup_line():
    line, lam, u = NONSPLIT.subgroup_line((2, 2))
    assert lam == 3
    assert u == (F(1), F(1))  # primitive in Sigma, not the input scaling
    assert line.membership((F(1, 3),)) == 1
    assert line.membership((F(1, 2),)) is None
    assert line.inclusion.apply(vec([1])) == u
    line, lam, u = NONSPLIT.subgroup_line((2, -3))
    assert lam == -2
    assert line.membership((F(1, 2),)) == 1
    with pytest.raises(ValueError):
        NONSPLIT.subgroup_line((1, 0))  # not an eigenvector


def test_random_member_deterministic_and_valid():
    a = [NONSPLIT.random_member(random.Random(3)) for _ in range(5)]
    b = [NONSPLIT.random_member(random.Random(3)) for _ in range(5)]
    assert [x.value for x in a] == [x.value for x in b]
    rng = random.Random(11)
    for _ in range(50):
        assert NONSPLIT.random_member(rng).is_member()


small = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_membership_chain_property(data):
    # if x is a member at level n then Ax is a member at level <= max(n-1, 0)
    A = Mat([[data.draw(small) for _ in range(2)] for _ in range(2)])
    if A.det() == 0:
        return
    G = DLGroup(A, Z2)
    x = vec([F(data.draw(small), data.draw(st.sampled_from([1, 2, 3])))
             for _ in range(2)])
    n = G.membership(x)
    m = G.membership(A.apply(x))
    if n is not None:
        assert m is not None and m <= max(n - 1, 0)
    # integral vectors are always members at level 0
    z = vec([data.draw(small), data.draw(small)])
    assert G.membership(z) == 0
