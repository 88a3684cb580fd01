from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wreathwords.exactnum import CycloNumber
from wreathwords.groups import builtin
from wreathwords.oracle import WreathElement, evaluate
from wreathwords.stable import (FunctionSyntaxError, MultiPartition, StableFunction, a_to_ind_basis,
                                ind_power_to_a, parse_multipartition, parse_stable, power_twist, sInd_basis)

GROUPS = ["trivial", "cyclic2", "cyclic3", "sym3"]


def test_basis_sizes():
    C2 = builtin("cyclic2")
    assert len(sInd_basis(C2, 3, 0)) == 18
    assert len(sInd_basis(builtin("trivial"), 4, 1)) == 1 + 2 + 3 + 5
    assert [lam.text(C2.char_names) for lam in sInd_basis(C2, 1, 0)] == ["1", "sInd{phi0:[1]}", "sInd{phi1:[1]}"]


def test_multipartition_operations():
    lam = MultiPartition([(0, 2), (1, 1), (0, 1)])
    assert lam.size == 4
    assert lam.parts == ((0, 2), (0, 1), (1, 1))
    assert lam.scaled(3).size == 12
    assert lam.remove([0]).parts == ((0, 1), (1, 1))
    assert (lam * MultiPartition([(1, 1)])).size == 5


def test_parser_examples():
    C2 = builtin("cyclic2")
    f = parse_stable("Ind(phi1)^2 + 2*Ind(phi0)^(2) - 1/2", C2)
    assert f.degree == 2
    assert f.constant_term() == Fraction(-1, 2)
    assert f == parse_stable("sInd{phi1:[1,1]} + 2*sInd{phi0:[2]} - 1/2", C2)
    assert parse_multipartition("sInd{phi0:[2,1]; phi1:[1]}", C2).size == 4
    S3 = builtin("sym3")
    assert parse_stable("Ind(std)", S3) == StableFunction.ind(S3, 2)


@pytest.mark.parametrize("text", ["Ind(phi9)", "Ind(phi0", "a[5,7]", "Ind(phi0)^(0)", "Ind(phi0)^-1", "2 +"])
def test_parser_errors(text):
    with pytest.raises(FunctionSyntaxError):
        parse_stable(text, builtin("cyclic2"))


def test_cycle_counter_in_sInd_basis():
    C2 = builtin("cyclic2")
    f = StableFunction.a(C2, 2, 1).to_sInd()
    expected = (StableFunction.ind(C2, 0, 2) - StableFunction.ind(C2, 1, 2)) * Fraction(1, 4)
    assert f == expected
    assert a_to_ind_basis(C2, 2, 1) == expected


@pytest.mark.parametrize("name", GROUPS)
def test_basis_round_trip(name):
    G = builtin(name)
    for lam in sInd_basis(G, 3, 0):
        f = StableFunction.sInd(G, lam)
        assert f.to_a().to_sInd() == f


@pytest.mark.parametrize("name", GROUPS)
def test_cycle_counters_round_trip(name):
    G = builtin(name)
    for t in (1, 2, 3):
        for c in range(G.num_classes):
            a = StableFunction.a(G, t, c)
            assert a.to_sInd().to_a() == a


@st.composite
def elements(draw, names=("cyclic2", "cyclic3", "sym3")):
    G = builtin(draw(st.sampled_from(names)))
    n = draw(st.integers(1, 7))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return G, WreathElement.random(G, n, rng)


@given(elements(), st.data())
@settings(max_examples=60, deadline=None)
def test_both_bases_evaluate_alike(ge, data):
    G, g = ge
    basis = sInd_basis(G, 3, 1)
    lam = basis[data.draw(st.integers(0, len(basis) - 1))]
    f = StableFunction.sInd(G, lam)
    assert evaluate(f, g) == evaluate(f.to_a(), g)


@given(elements(), st.integers(1, 3), st.data())
@settings(max_examples=40, deadline=None)
def test_power_twist_matches_element_power(ge, k, data):
    G, g = ge
    basis = sInd_basis(G, 2, 1)
    f = StableFunction.sInd(G, basis[data.draw(st.integers(0, len(basis) - 1))])
    assert evaluate(power_twist(f, k), g) == evaluate(f, g**k)


@given(elements())
@settings(max_examples=40, deadline=None)
def test_products_evaluate_pointwise(ge):
    G, g = ge
    f = StableFunction.ind(G, 1) + 2
    h = StableFunction.ind(G, 0, 2)
    assert evaluate(f * h, g) == evaluate(f, g) * evaluate(h, g)
    assert evaluate(f - h, g) == evaluate(f, g) - evaluate(h, g)
    assert evaluate(f.conj(), g) == evaluate(f, g).conj()


def test_ind_power_expansion():
    C3 = builtin("cyclic3")
    f = ind_power_to_a(C3, 1, 2)
    g = StableFunction.ind(C3, 1, 2).to_a()
    assert f == g


def test_degree_and_constant():
    C2 = builtin("cyclic2")
    f = StableFunction.ind(C2, 0) ** 3 + 5
    assert f.degree == 3
    assert f.constant_term() == 5
    assert StableFunction.constant(C2, 0).is_zero()
    assert (StableFunction.ind(C2, 0) * 0).is_zero()


def test_conj_on_cyclic3():
    C3 = builtin("cyclic3")
    f = StableFunction.ind(C3, 1) * CycloNumber.zeta(3)
    g = f.conj()
    assert g == StableFunction.ind(C3, 2) * CycloNumber.zeta(3, 2)
