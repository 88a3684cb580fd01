import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wreathwords.exactnum import CycloNumber
from wreathwords.freegrp import Word
from wreathwords.groups import (ClassFunction, GroupError, GroupTable, builtin, check_character_table,
                                cyclic, cyclic_expectation_closed_form, group_to_json,
                                inner_product, load_group, power_class, power_twist_class_fn, sym3, trivial,
                                words_expectation)


def test_builtin_names():
    assert builtin("cyclic2").order == 2
    assert builtin("C3").order == 3
    assert builtin("s3") is builtin("sym3")
    assert builtin("trivial").order == 1
    with pytest.raises(GroupError):
        builtin("quaternion")


def test_sym3_structure():
    G = sym3()
    assert G.order == 6
    assert [len(c) for c in G.classes] == [1, 3, 2]
    assert G.char_names == ["phi0", "sgn", "std"]
    assert [[v.to_fraction() for v in chi.values] for chi in G.characters] == [[1, 1, 1], [1, -1, 1], [2, 0, -1]]
    assert G.exponent == 6
    check_character_table(G)


@pytest.mark.parametrize("G", [trivial(), cyclic(2), cyclic(3), cyclic(4), cyclic(6), sym3()],
                         ids=lambda G: G.name)
def test_character_orthogonality(G):
    check_character_table(G)
    assert list(G.characters[0].values) == [CycloNumber.rational(1)] * G.num_classes


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        GroupTable([[0, 1], [1, 1]])
    # Latin square that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        GroupTable(bad)
    G = cyclic(3)
    with pytest.raises(GroupError):
        G.set_characters([[1, 1, 1], [1, 1, 1], [1, 1, 1]])


def test_power_classes_sym3():
    G = sym3()
    transpositions = next(c for c in G.classes if len(c) == 3)
    three_cycles = next(c for c in G.classes if len(c) == 2)
    assert power_class(G, transpositions, 2) == 0
    assert power_class(G, three_cycles, 2) == three_cycles.id
    assert power_class(G, three_cycles, 3) == 0
    std = G.characters[2]
    twisted = power_twist_class_fn(std, 2)
    assert [v.to_fraction() for v in twisted.values] == [2, 2, -1]


def test_inner_products():
    G = cyclic(3)
    chi = G.characters
    assert inner_product(chi[1], chi[1]) == 1
    assert inner_product(chi[1], chi[2]) == 0
    f = chi[1] + chi[2]
    assert inner_product(f, f) == 2
    assert inner_product(f * f.conj(), ClassFunction(G, [1, 1, 1])) == 2


def test_group_file_round_trip(tmp_path):
    G = sym3()
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(group_to_json(G)))
    H = load_group(str(path))
    assert H.order == 6 and H.num_classes == 3
    assert [c.values for c in H.characters] == [c.values for c in G.characters]


def test_group_file_from_perm_gens_and_class_reps():
    # rows listed in the column order identity, 3-cycle, transposition
    data = {"name": "s3", "perm_gens": [[1, 0, 2], [1, 2, 0]],
            "char_table": {"conductor": 1,
                           "rows": [[1, 1, 1], [2, -1, 0], [1, 1, -1]],
                           "names": ["one", "std", "sign"]}}
    with pytest.raises(GroupError):
        load_group(data)
    G = load_group({"perm_gens": data["perm_gens"]})
    assert G.order == 6 and G.characters is None
    three = next(c for c in G.classes if len(c) == 2).rep
    trans = next(c for c in G.classes if len(c) == 3).rep
    G = load_group(dict(data, class_reps=[0, three, trans]))
    std = G.characters[G.char_names.index("std")]
    assert std.values[G.class_of[trans]] == 0
    assert std.values[G.class_of[three]] == -1
    check_character_table(G)


def test_bad_group_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(GroupError):
        load_group(str(bad))
    with pytest.raises(GroupError):
        load_group({"name": "x"})
    with pytest.raises(GroupError):
        load_group({"cayley": [[0, 1], [1, 0]], "order": 3})


def brute_words_expectation(G, words, rank, zetas):
    acc = CycloNumber.rational(0)
    for beta in itertools.product(range(G.order), repeat=rank):
        term = CycloNumber.rational(1)
        for w, z in zip(words, zetas):
            g = G.identity
            for x in w:
                h = beta[abs(x) - 1]
                g = G.mul[g, h if x > 0 else G.inv[h]]
            term = term * z(g)
        acc = acc + term
    return acc / G.order**rank


word_lists = st.lists(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=5), min_size=1, max_size=2)


@given(word_lists, st.sampled_from(["cyclic2", "cyclic3", "sym3"]), st.data())
@settings(max_examples=40, deadline=None)
def test_words_expectation_matches_brute_force(words, name, data):
    G = builtin(name)
    zetas = [G.characters[data.draw(st.integers(0, G.num_classes - 1))] for _ in words]
    words = [tuple(w) for w in words]
    assert words_expectation(G, words, 2, zetas) == brute_words_expectation(G, words, 2, zetas)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=8), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_cyclic_closed_form(letters, m):
    # for a faithful character of C_m, E[chi(w)] is 1 iff m divides every letter exponent sum
    G = cyclic(m)
    val = words_expectation(G, [tuple(letters)], 2, [G.characters[1]])
    assert val == cyclic_expectation_closed_form(Word(letters, 2), m)


def test_commutator_measure_on_sym3():
    # E[chi([a,b])] = 1/chi(1) for irreducible chi
    G = sym3()
    for chi in G.characters:
        val = words_expectation(G, [(1, 2, -1, -2)], 2, [chi])
        assert val == 1 / chi.values[0]


def test_numpy_table_types():
    G = sym3()
    assert isinstance(G.mul, np.ndarray)
    assert all(G.mul[g, G.inv[g]] == G.identity for g in range(G.order))
