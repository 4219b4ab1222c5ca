import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksn.condition_z import brute_force_z, build_incidence, check_z, minimal_violation
from ksn.errors import GroupingAmbiguity, SizeError


def test_duplicate_rows():
    row = [0.5, 3.5, 6.5, 9.5, 12.5]
    sysm = build_incidence([row, row])
    assert sysm.s_counts == [1] * 5
    assert sysm.matrix == [[1, 1]] * 5


def test_all_distinct_is_stacked_identity():
    table = [[3 * k + j / 10 for k in range(5)] for j in range(4)]
    sysm = build_incidence(table)
    ident = [[int(i == j) for j in range(4)] for i in range(4)]
    assert sysm.matrix == ident * 5
    rep = check_z(sysm)
    assert rep.rank == 4 and rep.nullspace_dim == 0 and rep.z_satisfied
    assert rep.witness is None and rep.solvable_for_all_F


def test_single_block_two_groups():
    sysm = build_incidence([[1], [1], [2], [2]], "rational")
    assert sysm.matrix == [[1, 1, 0, 0], [0, 0, 1, 1]]


def test_rational_rejects_tolerance():
    with pytest.raises(ValueError):
        build_incidence([[Fraction(1)]], "rational", 1e-9)


def test_float_tolerance_merges_and_flags_ambiguity():
    base = 1.0
    merged = build_incidence([[base], [base + 5e-13]])
    assert merged.s_counts == [1]
    assert merged.keys[0][0] == (base, base + 5e-13)
    with pytest.raises(GroupingAmbiguity):
        build_incidence([[base], [base + 5e-12]])
    assert build_incidence([[base], [base + 5e-11]]).s_counts == [2]
    assert build_incidence([[base], [base + 5e-13]], tolerance=0).s_counts == [2]


def test_coincident_pair_witness():
    rep = check_z(build_incidence([[1, 2, 3], [1, 2, 3]], "rational"))
    assert rep.witness == (1, -1) and not rep.z_satisfied
    assert rep.rank == 1 and not rep.solvable_for_all_F


def test_single_block_pattern_witness():
    table = [[1], [1], [2], [2]]
    sysm = build_incidence(table, "rational")
    rep = check_z(sysm)
    assert not rep.z_satisfied and rep.rank == 2 and rep.nullspace_dim == 2
    assert all(rep.witness) and all(v == 0 for v in sysm.residual(rep.witness))
    oracle = brute_force_z(table)
    assert oracle.rank == 2 and not oracle.z_satisfied


def test_brute_force_small_cases():
    assert brute_force_z([[7, 8, 9]]).z_satisfied
    assert brute_force_z([]).z_satisfied
    assert brute_force_z([[1, 2], [1, 2]]).witness == (1, -1)
    with pytest.raises(SizeError):
        brute_force_z([[j] for j in range(11)])


def test_rank_deficient_but_no_full_witness():
    # pair (0,1) coincides, point 2 is pinned by its singleton groups
    rep = check_z(build_incidence([[1, 5], [1, 5], [2, 6]], "rational"))
    assert rep.rank == 2 and rep.z_satisfied and not rep.solvable_for_all_F
    assert rep.nullspace == ((1, -1, 0),)


def test_four_cycle_needs_two_blocks():
    # block 0 pairs {0,1},{2,3}; block 1 pairs {0,2},{1,3}
    table = [[1, 5], [1, 6], [2, 5], [2, 6]]
    rep = check_z(build_incidence(table, "rational"))
    assert rep.witness == (1, -1, -1, 1)


def test_minimal_violation_pair():
    table = [[1, 5], [2, 7], [1, 5], [3, 8]]
    assert minimal_violation(table) == ([0, 2], [1, -1])


def test_minimal_violation_absent():
    assert minimal_violation([[j, 10 + j] for j in range(6)]) is None


def test_minimal_violation_four_cycle_among_distinct():
    cycle = [[1, 5], [1, 6], [2, 5], [2, 6]]
    table = cycle + [[10, 20], [11, 21], [12, 22]]
    subset, mu = minimal_violation(table)
    assert subset == [0, 1, 2, 3]
    # exhaustive oracle: no smaller subset is a closed path
    from itertools import combinations
    for size in (2, 3):
        for sub in combinations(range(7), size):
            assert brute_force_z([table[j] for j in sub]).z_satisfied
    assert not brute_force_z([table[j] for j in subset]).z_satisfied


tables = st.integers(1, 8).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda width: st.lists(st.lists(st.integers(0, 2), min_size=width, max_size=width),
                               min_size=n, max_size=n)))


@settings(max_examples=300, deadline=None)
@given(tables)
def test_check_z_agrees_with_oracle(table):
    rep = check_z(build_incidence(table, "rational"))
    oracle = brute_force_z(table)
    assert rep.z_satisfied == oracle.z_satisfied
    assert rep.rank == oracle.rank
    assert rep.nullspace_dim == oracle.nullspace_dim


@settings(max_examples=200, deadline=None)
@given(tables)
def test_witness_and_nullspace_valid(table):
    sysm = build_incidence(table, "rational")
    rep = check_z(sysm)
    for vec in rep.nullspace:
        assert all(v == 0 for v in sysm.residual(vec))
    assert rep.rank + rep.nullspace_dim == rep.n
    if rep.witness is not None:
        assert all(rep.witness)
        assert all(v == 0 for v in sysm.residual(rep.witness))


@settings(max_examples=200, deadline=None)
@given(tables, st.data())
def test_witness_persists_when_points_are_added(table, data):
    rep = check_z(build_incidence(table, "rational"))
    if rep.witness is None:
        return
    width = len(table[0])
    extra = data.draw(st.lists(st.lists(st.integers(0, 3), min_size=width, max_size=width),
                               min_size=1, max_size=3))
    bigger = build_incidence(table + extra, "rational")
    padded = list(rep.witness) + [0] * len(extra)
    assert all(v == 0 for v in bigger.residual(padded))


def test_large_generic_system_is_fast():
    rng = random.Random(0)
    table = [[3 * k + rng.random() for k in range(5)] for _ in range(3000)]
    rep = check_z(build_incidence(table))
    assert rep.rank == 3000
