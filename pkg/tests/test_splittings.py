"""Splitting validation, enumeration, and the extension machinery."""

from __future__ import annotations

import itertools

import pytest

import dsets as D
from dsets import DSet, InputError, Splitting

import _oracles as O


def _as_cellsets(splittings):
    return {frozenset(frozenset(sec) for sec in s.sectors) for s in splittings}


# ---------------------------------------------------------------------------
# Splitting type


def test_splitting_structural_equality():
    assert Splitting.build([{0, 1}, {2, 3}]) == Splitting.build([[3, 2], [1, 0]])
    assert Splitting.build([{0, 1}, {2, 3}]).kind == "edge"
    assert Splitting.build([{0}, {1}, {2}]).kind == "node"


def test_splitting_rejects_overlap_and_empty():
    with pytest.raises(InputError):
        Splitting.build([{0, 1}, {1, 2}])
    with pytest.raises(InputError):
        Splitting.build([{0}, set()])


def test_splitting_json_round_trip():
    s = Splitting.build([{2, 0}, {1}, {3, 4}])
    assert Splitting.from_json(s.to_json()) == s


def test_splitting_json_bare_list():
    # the splittings CLI payload lists partitions without the wrapper object
    s = Splitting.from_json("[[0, 2], [1], [3, 4]]")
    assert s == Splitting.build([{0, 2}, {1}, {3, 4}])
    with pytest.raises(InputError):
        Splitting.from_json('"not a partition"')


# ---------------------------------------------------------------------------
# is_splitting


def test_is_splitting_cat4(catalogue):
    cat4 = catalogue["CAT4"].dset
    ok, witness = D.is_splitting(cat4, [{0, 1}, {2, 3}])
    assert ok and witness is None

    ok, witness = D.is_splitting(cat4, [{0, 2}, {1, 3}])
    assert not ok
    assert witness["kind"] == "separation_fails"
    a, b = witness["pair"]
    c, e = witness["other"]
    assert not cat4.holds(a, b, c, e)


def test_is_splitting_star4_singletons(catalogue):
    star4 = catalogue["STAR4"].dset
    ok, _ = O.splitting_ok(star4, [{0}, {1}, {2}, {3}])
    assert ok
    assert D.is_splitting(star4, [{0}, {1}, {2}, {3}])[0]


def test_is_splitting_requires_partition(catalogue):
    cat4 = catalogue["CAT4"].dset
    with pytest.raises(InputError):
        D.is_splitting(cat4, [{0, 1}, {1, 2, 3}])
    ok, witness = D.is_splitting(cat4, [{0, 1}, {2}])
    assert not ok and witness["kind"] == "ground_mismatch"


def test_is_splitting_agrees_with_oracle_exhaustively(catalogue):
    for name in ("CAT4", "FLW4", "CAT5"):
        d = catalogue[name].dset
        for cells in O.set_partitions(sorted(d.elements)):
            if len(cells) < 2:
                continue
            expected, _ = O.splitting_ok(d, cells)
            got, _ = D.is_splitting(d, [set(c) for c in cells])
            assert got == expected, (name, cells)


# ---------------------------------------------------------------------------
# enumerate_splittings


def test_enumerate_cat4(catalogue):
    cat4 = catalogue["CAT4"].dset
    found = D.enumerate_splittings(cat4)
    assert len(found) == 7
    assert sum(1 for s in found if s.kind == "node") == 2
    assert sum(1 for s in found if s.kind == "edge") == 5
    assert _as_cellsets(found) == O.brute_splittings(cat4)


def test_enumerate_flw4(catalogue):
    flw4 = catalogue["FLW4"].dset
    expected = O.brute_splittings(flw4)
    assert _as_cellsets(D.enumerate_splittings(flw4, method="brute")) == expected
    assert _as_cellsets(D.enumerate_splittings(flw4, method="tree")) == expected
    # one all-singleton node splitting plus the four leaf cuts
    assert len(expected) == 5


def test_enumerate_two_element():
    d = DSet(2)
    found = D.enumerate_splittings(d)
    assert len(found) == 1
    assert found[0].as_sorted_lists() == [[0], [1]]


def test_enumerate_routes_agree(catalogue):
    for name in ("CAT5", "MIX", "CAT4E"):
        d = catalogue[name].dset
        brute = _as_cellsets(D.enumerate_splittings(d, method="brute"))
        tree = _as_cellsets(D.enumerate_splittings(d, method="tree"))
        assert brute == tree


def test_enumerate_rejects_unknown_method(catalogue):
    with pytest.raises(InputError):
        D.enumerate_splittings(catalogue["CAT4"].dset, method="magic")


# ---------------------------------------------------------------------------
# branch


def test_branch_examples(catalogue):
    assert D.branch(catalogue["CAT4"].dset, 2, 0, 1) == [3]
    assert D.branch(catalogue["STAR4"].dset, 0, 1, 2) == []
    assert D.branch(catalogue["CAT5"].dset, 4, 0, 1) == [2, 3]


def test_branch_requires_distinct(catalogue):
    with pytest.raises(InputError):
        D.branch(catalogue["CAT4"].dset, 0, 0, 1)


# ---------------------------------------------------------------------------
# induced_splitting


def test_induced_cat4e(catalogue):
    d = catalogue["CAT4E"].dset
    got = D.induced_splitting(d, [0, 1, 2, 3], 4)
    assert got == Splitting.build([{0}, {1}, {2, 3}])


def test_induced_cat5(catalogue):
    got = D.induced_splitting(catalogue["CAT5"].dset, [0, 1, 2, 3], 4)
    assert got == Splitting.build([{0, 1, 2}, {3}])


def test_induced_flw4(catalogue):
    got = D.induced_splitting(catalogue["FLW4"].dset, [0, 1, 2], 3)
    assert got == Splitting.build([{0}, {1}, {2}])


def test_induced_requires_outside_element(catalogue):
    with pytest.raises(InputError):
        D.induced_splitting(catalogue["CAT4"].dset, [0, 1, 2], 2)


# ---------------------------------------------------------------------------
# complementary


def test_complementary_cat6(catalogue):
    d = catalogue["CAT6"].dset
    s = Splitting.build([{0, 1, 2}, {3, 4}])
    assert D.complementary(d, s, {0, 1, 2}, 0) == 2
    # 1 genuinely fails: D(01;23) separates the pair 0,1 across the cut
    assert d.holds(0, 1, 2, 3)


def test_complementary_cat4(catalogue):
    d = catalogue["CAT4"].dset
    s = Splitting.build([{0, 1}, {2, 3}])
    assert D.complementary(d, s, {0, 1}, 0) == 1


def test_complementary_singleton_sector(catalogue):
    d = catalogue["FLW4"].dset
    s = Splitting.build([{0}, {1}, {2}, {3}])
    assert D.complementary(d, s, {0}, 0) == 0


def test_complementary_checks_membership(catalogue):
    d = catalogue["CAT4"].dset
    s = Splitting.build([{0, 1}, {2, 3}])
    with pytest.raises(InputError):
        D.complementary(d, s, {0, 1}, 2)


# ---------------------------------------------------------------------------
# extend_by_point


def test_extend_star3_all_singletons(catalogue):
    star3 = catalogue["FLW3"].dset
    out = D.extend_by_point(star3, Splitting.build([{0}, {1}, {2}]))
    assert out.n == 4
    assert out.positives == frozenset()


def test_extend_cat4_edge_matches_subdivided_tree(catalogue):
    out = D.extend_by_point(catalogue["CAT4"].dset, Splitting.build([{0, 1}, {2, 3}]))
    assert out.positives == catalogue["CAT4M"].dset.positives


def test_extend_cat4_node_matches_extra_leaf(catalogue):
    out = D.extend_by_point(
        catalogue["CAT4"].dset, Splitting.build([{0}, {1}, {2, 3}])
    )
    assert out.positives == catalogue["CAT4E"].dset.positives


def test_extend_induces_input_back(catalogue):
    d = catalogue["CAT5"].dset
    for s in D.enumerate_splittings(d):
        grown = D.extend_by_point(d, s)
        assert D.check_axioms(grown).core_pass
        assert D.induced_splitting(grown, range(d.n), d.n) == s


# ---------------------------------------------------------------------------
# extend_splitting


def test_extend_splitting_new_singleton(catalogue):
    d = catalogue["CAT4E"].dset
    got = D.extend_splitting(d, {0, 1, 2, 3}, Splitting.build([{0}, {1}, {2, 3}]))
    assert got == Splitting.build([{0}, {1}, {2, 3}, {4}])


def test_extend_splitting_edge_default_policy(catalogue):
    d = catalogue["CAT4E"].dset
    got = D.extend_splitting(d, {0, 1, 2, 3}, Splitting.build([{0, 1}, {2, 3}]))
    assert got == Splitting.build([{0, 1, 4}, {2, 3}])


def test_extend_splitting_full_subset_identity(catalogue):
    d = catalogue["CAT4"].dset
    s = Splitting.build([{0, 1}, {2, 3}])
    assert D.extend_splitting(d, {0, 1, 2, 3}, s) == s


def test_extend_splitting_recovers_restricted_node(catalogue):
    # restricting the left node splitting of CAT5 to {0,1,2} loses the tail;
    # extension must rebuild it whichever way the tail is fed back in
    d = catalogue["CAT5"].dset
    full = Splitting.build([{0}, {1}, {2, 3, 4}])
    restricted = Splitting.build([{0}, {1}, {2}])
    for order in itertools.permutations([3, 4]):
        assert D.extend_splitting(d, {0, 1, 2}, restricted, order=order) == full


# ---------------------------------------------------------------------------
# one_sector


def test_one_sector_cat4(catalogue):
    d = catalogue["CAT4"].dset
    at_n1 = Splitting.build([{0}, {1}, {2, 3}])
    at_n2 = Splitting.build([{0, 1}, {2}, {3}])
    assert D.one_sector(d, at_n1, at_n2) == frozenset({0, 1})
    assert D.one_sector(d, at_n2, at_n1) == frozenset({2, 3})


def test_one_sector_refinement_case(catalogue):
    d = catalogue["FLW4"].dset
    node = Splitting.build([{0}, {1}, {2}, {3}])
    edge = Splitting.build([{0}, {1, 2, 3}])
    assert D.one_sector(d, node, edge) == frozenset({1, 2, 3})


def test_one_sector_requires_distinct(catalogue):
    s = Splitting.build([{0, 1}, {2, 3}])
    with pytest.raises(InputError):
        D.one_sector(catalogue["CAT4"].dset, s, s)


# ---------------------------------------------------------------------------
# regularity, true edges, density


def test_is_regular(catalogue):
    assert D.is_regular(catalogue["CAT4"].dset) == (True, 3)
    assert D.is_regular(catalogue["FLW5"].dset) == (True, 5)
    assert D.is_regular(catalogue["MIX"].dset) == (False, None)


def test_true_edge_splitting(catalogue):
    cat4 = catalogue["CAT4"].dset
    assert not D.is_true_edge_splitting(cat4, [{0, 1}, {2, 3}])
    assert not D.is_true_edge_splitting(cat4, [{0}, {1, 2, 3}])
    # the node splitting at n1 refines the spine cut, so the cut is not true
    node = Splitting.build([{0}, {1}, {2, 3}])
    cut = Splitting.build([{0, 1}, {2, 3}])
    assert all(any(sec <= big for big in cut.sectors) for sec in node.sectors)


def test_true_edge_two_element_has_singletons():
    # both sectors of the unique 2-element splitting are singletons, which
    # the no-singleton reading rejects
    assert not D.is_true_edge_splitting(DSet(2), [{0}, {1}])


def test_density_witnesses_cat4(catalogue):
    assert D.density_witnesses(catalogue["CAT4"].dset, 0, 1, 2, 3) == []


def test_density_witnesses_cat5x(catalogue):
    d = catalogue["CAT5X"].dset
    expected = [
        v
        for v in range(d.n)
        if d.holds(v, 1, 3, 4)
        and d.holds(0, v, 3, 4)
        and d.holds(0, 1, v, 4)
        and d.holds(0, 1, 3, v)
    ]
    got = D.density_witnesses(d, 0, 1, 3, 4)
    assert got == expected
    assert 5 in got


def test_density_witnesses_degenerate_quad(catalogue):
    assert D.density_witnesses(catalogue["FLW4"].dset, 0, 0, 1, 2) == []


def test_density_requires_premise(catalogue):
    with pytest.raises(InputError):
        D.density_witnesses(catalogue["FLW4"].dset, 0, 1, 2, 3)
