import random
from fractions import Fraction as F

import pytest

from substcoh.apcomplex import build_ap_complex, h1_presentation
from substcoh.dirlimit import DLGroup
from substcoh.exactlin import Lattice, Mat, vec
from substcoh.spectral import (EigenvalueGroupDescriptor, InvariantFailure,
                               UnsupportedEigenvalueGroup, check_invariants,
                               eigenvalue_group, inf_membership, tau_data,
                               theta_image)
from substcoh.substitution import parse_substitution, pf_data, incidence_matrix


def build(text, route):
    s = parse_substitution(text)
    Y, sigma, _ = build_ap_complex(s, route)
    pres = h1_presentation(Y, sigma)
    G = DLGroup(er_action=pres.er_action, lattice=pres.sigma_lattice,
                presentation=pres)
    pf = pf_data(incidence_matrix(s))
    return s, pf, G


NONSPLIT = build("a -> abb\nb -> aaa\n", "bouquet")
PERDOUBLE = build("a -> ab\nb -> aa\n", "bouquet")
THUEMORSE = build("a -> ab\nb -> ba\n", "collared")
FIBONACCI = build("a -> ab\nb -> a\n", "bouquet")


def pm(v, w):
    return v == w or v == tuple(-c for c in w)


def test_eigenvalue_group_modes():
    assert eigenvalue_group(*NONSPLIT).mode == "IntegerDilation"
    assert eigenvalue_group(*NONSPLIT).dilation == 3
    assert eigenvalue_group(*PERDOUBLE).dilation == 2
    assert eigenvalue_group(*THUEMORSE).dilation == 2
    d = eigenvalue_group(*FIBONACCI)
    assert d.mode == "IrreduciblePisot"
    assert d.minpoly == (-1, -1, 1)
    assert "rank 2" in d.describe()


def test_eigenvalue_group_unsupported_modes():
    # non-constant length, irreducible x^2 - x - 3: second root < -1, not Pisot
    d = eigenvalue_group(*build("a -> abbb\nb -> a\n", "bouquet"))
    assert d.mode == "Unsupported"
    assert "E = 0" in d.reason
    # non-constant length, reducible charpoly (x-2)(x+1): out of scope
    d = eigenvalue_group(*build("a -> abb\nb -> a\n", "bouquet"))
    assert d.mode == "Unsupported"
    assert "Host" in d.reason


def test_theta_image_nonsplit():
    s, pf, G = NONSPLIT
    desc = eigenvalue_group(s, pf, G)
    assert desc.g_theta.value == (F(1), F(1))
    ti = theta_image(G, desc)
    assert ti.eigenvalue == 3
    assert pm(ti.generator, (F(1), F(1)))
    assert abs(ti.unit_ratio) == 1
    assert ti.saturated
    # theta(E) membership through the line group
    assert ti.line.membership((F(1, 9),)) == 2
    assert ti.line.membership((F(1, 2),)) is None


def test_theta_image_thue_morse():
    s, pf, G = THUEMORSE
    desc = eigenvalue_group(s, pf, G)
    ti = theta_image(G, desc)
    assert ti.eigenvalue == 2
    assert ti.saturated
    # the class is Sigma-primitive here (ratio a Z[1/2]-unit)
    assert _is_two_unit(ti.unit_ratio)
    # and is an eigenvector with the dilation eigenvalue
    g = desc.g_theta.value
    assert G.er_action.apply(g) == tuple(2 * c for c in g)


def _is_two_unit(x):
    from substcoh.exactlin import strip_primes
    return abs(strip_primes(F(x), 2)) == 1


def test_tau_nonsplit():
    s, pf, G = NONSPLIT
    desc = eigenvalue_group(s, pf, G)
    td = tau_data(G, desc)
    assert td.nu == (F(3, 5), F(2, 5))
    assert td.freq_generator == F(1, 5) and td.freq_base == 3
    assert td.inf_rank == 1
    assert pm(tuple(td.inf.inclusion.col(0)), (F(2), F(-3)))
    assert td.inf.er_action.data[0][0] == -2
    # tau(A^{-n} v) = (1/5) 3^{-n} (3 v1 + 2 v2) on a sweep
    for n in range(6):
        for v1 in range(-4, 5):
            for v2 in range(-4, 5):
                x = G.er_action.power(-n).apply(vec([v1, v2]))
                assert td.tau(x) == F(3 * v1 + 2 * v2, 5 * 3 ** n)


def test_tau_perdouble():
    s, pf, G = PERDOUBLE
    td = tau_data(G, eigenvalue_group(s, pf, G))
    assert td.nu == (F(2, 3), F(1, 3))
    assert td.freq_generator == F(1, 3) and td.freq_base == 2
    assert td.inf_rank == 1
    assert pm(tuple(td.inf.inclusion.col(0)), (F(1), F(-2)))
    assert td.inf.er_action.data[0][0] == -1  # Inf is a plain Z


def test_tau_thue_morse():
    s, pf, G = THUEMORSE
    td = tau_data(G, eigenvalue_group(s, pf, G))
    assert td.freq_generator == F(1, 3) and td.freq_base == 2
    assert td.inf_rank == 1
    assert abs(td.inf.er_action.data[0][0]) == 1
    assert td.tau(vec(td.inf.inclusion.col(0))) == 0


def test_tau_published_thue_morse_coordinates():
    # the published model: action [[0,1],[2,1]] on Z^2 with the length class
    # at (2,4); nu comes out as (1/6,1/6) and tau(A^{-n}(v1,v2)) =
    # (1/6) 2^{-n} (v1+v2), frequency module (1/3) Z[1/2], Inf = Z(1,-1)
    Z2 = Lattice(2, (vec([1, 0]), vec([0, 1])), saturated=True)
    G = DLGroup(Mat([[0, 1], [2, 1]]), Z2)
    desc = EigenvalueGroupDescriptor(mode="IntegerDilation", dilation=2,
                                     g_theta=G.element((2, 4)))
    td = tau_data(G, desc)
    assert td.nu == (F(1, 6), F(1, 6))
    assert td.freq_generator == F(1, 3) and td.freq_base == 2
    assert pm(tuple(td.inf.inclusion.col(0)), (F(1), F(-1)))
    for n in range(5):
        x = G.er_action.power(-n).apply(vec([3, -1]))
        assert td.tau(x) == F(2, 6 * 2 ** n)
    ti = theta_image(G, desc)
    assert ti.saturated  # ratio 2 is a unit in Z[1/2]
    assert ti.unit_ratio == 2 and pm(ti.generator, (F(1), F(2)))


def test_tau_fibonacci_pisot():
    s, pf, G = FIBONACCI
    desc = eigenvalue_group(s, pf, G)
    td = tau_data(G, desc)
    assert td.nu is None and td.inf is None and td.inf_rank == 0
    # tau is additive and injective on rationals: values lie in Z[phi]
    a = td.tau(vec([1, 0]))
    b = td.tau(vec([0, 1]))
    assert td.tau(vec([2, 3])) == a + a + b + b + b
    assert not (a - b).is_zero()


def test_inf_membership():
    s, pf, G = NONSPLIT
    td = tau_data(G, eigenvalue_group(s, pf, G))
    assert inf_membership(td.inf, (2, -3))
    assert inf_membership(td.inf, (F(1), F(-3, 2)))    # (1/2)(2,-3), base 2
    assert not inf_membership(td.inf, (F(2, 3), F(-1)))  # 1/3 not in Z[1/2]
    assert not inf_membership(td.inf, (1, 1))
    assert inf_membership(None, (0, 0))
    assert not inf_membership(None, (1, 0))


def test_check_invariants_pass():
    for s, pf, G in (NONSPLIT, PERDOUBLE, THUEMORSE, FIBONACCI):
        desc = eigenvalue_group(s, pf, G)
        td = tau_data(G, desc)
        report = check_invariants(G, desc, td, random.Random(0))
        assert report.passed, report.checks


def test_check_invariants_catch_mutation():
    # corrupt the action: the theorem identities must fail loudly
    s, pf, G = NONSPLIT
    desc = eigenvalue_group(s, pf, G)
    td = tau_data(G, desc)
    Z2 = Lattice(2, (vec([1, 0]), vec([0, 1])), saturated=True)
    G_bad = DLGroup(Mat([[1, 2], [3, 1]]), Z2)
    try:
        report = check_invariants(G_bad, desc, td, random.Random(0))
    except ValueError:
        return  # detected: the class is no longer an eigenvector
    assert not report.passed


def test_tau_data_rejects_unsupported():
    trip = build("a -> abb\nb -> a\n", "bouquet")
    desc = eigenvalue_group(*trip)
    with pytest.raises(UnsupportedEigenvalueGroup):
        tau_data(trip[2], desc)
    with pytest.raises(UnsupportedEigenvalueGroup):
        theta_image(trip[2], desc)
