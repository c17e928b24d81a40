"""Group table tests.

Light's associativity test is cross-validated against the full cubic scan
(done here in numpy, independently of the package code), and invariant
factors are checked against a from-scratch oracle that merges prime powers.
"""

import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heckefusion.exactnum import Cyclotomic, QmodZ
from heckefusion.groups import (
    AbelianStructure,
    GroupTableError,
    MultChar,
    TableGroup,
    abelian_quotient,
    cyclic_group,
    heisenberg_coords,
    heisenberg_group,
    heisenberg_index,
    product_group,
    quotient,
    semidirect_from_automorphisms,
    semidirect_product,
    subgroup_table,
)


def brute_force_associative(table: np.ndarray) -> bool:
    # full n^3 scan, independent of the generating-set shortcut in the package
    return np.array_equal(table[table, :], table[:, table])


def s3() -> TableGroup:
    return semidirect_product(cyclic_group(3), cyclic_group(2), [[0, 1, 2], [0, 2, 1]])


# a loop of order 5: two-sided identity, two-sided inverses, but every
# element squares to the identity, which no group of order 5 allows
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


# ----------------------------------------------------------- validation


def test_light_agrees_with_cubic_scan_on_groups():
    for G in (cyclic_group(1), cyclic_group(7), heisenberg_group(2), heisenberg_group(3), s3()):
        assert brute_force_associative(G.table)  # oracle accepts
        TableGroup(G.table)  # package accepts (build re-runs all checks)


def test_light_rejects_nonassociative_loop():
    table = np.array(LOOP5)
    assert not brute_force_associative(table)  # oracle confirms the defect
    with pytest.raises(GroupTableError, match="associativity"):
        TableGroup(table)


def test_rejects_missing_identity():
    with pytest.raises(GroupTableError, match="identity"):
        TableGroup([[1, 1], [1, 1]])


def test_identity_found_off_zero():
    # Z/2 written with the identity at index 1
    G = TableGroup([[1, 0], [0, 1]])
    assert G.identity == 1
    assert G.inv(0) == 0


def test_rejects_out_of_range_entries():
    with pytest.raises(GroupTableError, match="range"):
        TableGroup([[0, 1], [1, 5]])


def test_rejects_nonsquare():
    with pytest.raises(GroupTableError, match="square"):
        TableGroup([[0, 1, 2], [1, 2, 0]])


def test_rejects_corrupted_cyclic_table():
    table = cyclic_group(6).table.copy()
    table[3, 4], table[3, 5] = table[3, 5], table[3, 4]
    with pytest.raises(GroupTableError):
        TableGroup(table)


def test_generating_set_greedy_choices():
    assert cyclic_group(12).generating_set() == [1]
    # greedy picks (0,0,1), then (0,1,0), then (1,0,0)
    G = heisenberg_group(3)
    gens = G.generating_set()
    assert gens == [1, 3, 9]
    assert set(G.subgroup_closure(gens)) == set(range(27))


# ----------------------------------------------------------- operations


def test_basic_ops_cyclic():
    G = cyclic_group(10)
    assert G.identity == 0
    assert G.mul(7, 8) == 5
    assert G.inv(3) == 7
    assert G.power(3, 4) == 2
    assert G.power(3, -1) == 7
    assert G.power(3, 0) == 0
    assert G.element_order(2) == 5
    assert G.element_order(0) == 1


def test_heisenberg_multiplication_and_coords():
    m = 3
    G = heisenberg_group(m)
    assert G.order == 27
    for x in range(m):
        for y in range(m):
            for z in range(m):
                i = heisenberg_index(m, x, y, z)
                assert heisenberg_coords(m, i) == (x, y, z)
    a = heisenberg_index(m, 1, 0, 0)
    b = heisenberg_index(m, 0, 1, 0)
    # (1,0,0)*(0,1,0) = (1,1,1), (0,1,0)*(1,0,0) = (1,1,0)
    assert G.mul(a, b) == heisenberg_index(m, 1, 1, 1)
    assert G.mul(b, a) == heisenberg_index(m, 1, 1, 0)


def test_heisenberg_commutators_exhaustive():
    # [(x,y,z), (x',y',z')] = (0, 0, x*y' - x'*y) over Z/3
    m = 3
    G = heisenberg_group(m)
    for a in range(G.order):
        x1, y1, _ = heisenberg_coords(m, a)
        for b in range(G.order):
            x2, y2, _ = heisenberg_coords(m, b)
            expected = heisenberg_index(m, 0, 0, x1 * y2 - x2 * y1)
            assert G.commutator(a, b) == expected


def test_heisenberg_center_and_exponent():
    G3 = heisenberg_group(3)
    assert G3.center() == (0, 1, 2)
    assert all(G3.element_order(a) == 3 for a in range(1, 27))
    G9 = heisenberg_group(9)
    assert G9.center() == tuple(range(9))
    assert G9.element_order(heisenberg_index(9, 1, 0, 0)) == 9
    assert G9.element_order(heisenberg_index(9, 1, 1, 0)) == 9
    assert G9.element_order(heisenberg_index(9, 3, 3, 0)) == 3


def test_commutator_subgroup_of_heisenberg_is_center():
    G = heisenberg_group(3)
    all_elems = range(G.order)
    assert G.commutator_subgroup(all_elems, all_elems) == (0, 1, 2)


def test_subgroup_predicates():
    G = s3()
    rotations = (0, 1, 2)
    assert G.is_subgroup(rotations)
    assert G.is_normal(rotations)
    reflection = (0, 3)
    assert G.is_subgroup(reflection)
    assert not G.is_normal(reflection)
    assert not G.is_subgroup((1, 2))  # no identity
    assert G.subgroup_closure([3]) == (0, 3)
    assert G.subgroup_closure([1, 3]) == (0, 1, 2, 3, 4, 5)


def test_center_of_semidirect_with_inversion():
    G = semidirect_product(
        heisenberg_group(3),
        cyclic_group(2),
        [list(range(27)), _negate_xy_perm(3)],
    )
    assert G.order == 54
    assert G.center() == (0, 1, 2)


def _negate_xy_perm(m):
    return [
        heisenberg_index(m, -x, -y, z)
        for i in range(m**3)
        for (x, y, z) in (heisenberg_coords(m, i),)
    ]


def test_semidirect_rejects_non_automorphism():
    # transposition of two non-identity elements of Z/3 is not an automorphism
    with pytest.raises(GroupTableError, match="automorphism"):
        semidirect_product(cyclic_group(4), cyclic_group(2), [[0, 1, 2, 3], [0, 2, 1, 3]])


def test_semidirect_rejects_nontrivial_identity_action():
    with pytest.raises(GroupTableError, match="identity"):
        semidirect_product(cyclic_group(3), cyclic_group(2), [[0, 2, 1], [0, 1, 2]])


def test_semidirect_rejects_non_homomorphism():
    # order-4 automorphism of Z/5 (x -> 2x) assigned to an order-2 twist slot
    with pytest.raises(GroupTableError, match="homomorphism"):
        semidirect_product(cyclic_group(5), cyclic_group(2), [[0, 1, 2, 3, 4], [0, 2, 4, 1, 3]])


def test_product_group_layout():
    G = product_group(cyclic_group(2), cyclic_group(3))
    assert G.order == 6
    # (a,b)*(a',b') = (a+a', b+b'); index a*3+b
    assert G.mul(1 * 3 + 2, 1 * 3 + 2) == 0 * 3 + 1
    assert G.element_order(1 * 3 + 1) == 6


# ----------------------------------------------------------- quotients


def test_quotient_heisenberg_by_center():
    G = heisenberg_group(3)
    q = quotient(G, G.center())
    assert q.group.order == 9
    assert len(q.cosets) == 9
    assert q.cosets[0] == (0, 1, 2)
    assert q.representatives[0] == 0
    # projection is constant on cosets and hits every quotient index
    for i, coset in enumerate(q.cosets):
        for g in coset:
            assert q.projection[g] == i
    # quotient of Heis(3) by its center is elementary abelian of order 9
    qa = AbelianStructure(q.group, range(9))
    assert qa.invariant_factors == (3, 3)


def test_quotient_requires_normal():
    G = s3()
    with pytest.raises(GroupTableError, match="normal"):
        quotient(G, (0, 3))


def test_quotient_s3_by_rotations():
    q = quotient(s3(), (0, 1, 2))
    assert q.group.order == 2
    assert q.cosets == ((0, 1, 2), (3, 4, 5))


# ------------------------------------------------- abelian structure


def test_invariant_factors_of_standard_groups():
    assert AbelianStructure(cyclic_group(1), [0]).invariant_factors == ()
    assert AbelianStructure(cyclic_group(12), range(12)).invariant_factors == (12,)
    z2z4 = product_group(cyclic_group(2), cyclic_group(4))
    assert AbelianStructure(z2z4, range(8)).invariant_factors == (2, 4)
    z6 = product_group(cyclic_group(2), cyclic_group(3))
    assert AbelianStructure(z6, range(6)).invariant_factors == (6,)
    z222 = product_group(product_group(cyclic_group(2), cyclic_group(2)), cyclic_group(2))
    assert AbelianStructure(z222, range(8)).invariant_factors == (2, 2, 2)


def test_abelian_structure_of_subgroup():
    G = cyclic_group(12)
    sub = AbelianStructure(G, [0, 3, 6, 9])
    assert sub.invariant_factors == (4,)
    assert sub.element(sub.exponents(9)) == 9


def test_abelian_structure_rejects_nonabelian():
    with pytest.raises(GroupTableError, match="abelian"):
        AbelianStructure(s3(), range(6))


def test_exponent_coordinates_are_bijective():
    z2z4 = product_group(cyclic_group(2), cyclic_group(4))
    a = AbelianStructure(z2z4, range(8))
    seen = set()
    for g in range(8):
        e = a.exponents(g)
        assert a.element(e) == g
        seen.add(e)
    assert len(seen) == 8


def _prime_power_parts(n):
    parts = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            parts[d] = parts.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        parts[n] = parts.get(n, 0) + 1
    return parts


def expected_invariant_factors(cyclic_orders):
    # independent oracle: merge prime powers, largest first per prime
    by_prime = defaultdict(list)
    for n in cyclic_orders:
        for p, e in _prime_power_parts(n).items():
            by_prime[p].append(p**e)
    slots = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * slots
    for p, powers in by_prime.items():
        for i, q in enumerate(sorted(powers, reverse=True)):
            factors[i] *= q
    return tuple(sorted(f for f in factors if f > 1))


@settings(deadline=None, max_examples=25)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9]), min_size=1, max_size=3))
def test_invariant_factors_match_prime_power_oracle(orders):
    total = math.prod(orders)
    if total > 80:
        return
    G = cyclic_group(orders[0])
    for n in orders[1:]:
        G = product_group(G, cyclic_group(n))
    got = AbelianStructure(G, range(total)).invariant_factors
    assert got == expected_invariant_factors(orders)


# ----------------------------------------------------------- characters


def test_character_group_of_cyclic_5():
    a = AbelianStructure(cyclic_group(5), range(5))
    chars = a.characters()
    assert len(chars) == 5
    assert chars[0].is_trivial()
    # orthogonality, exactly
    for i, chi in enumerate(chars):
        for j, psi in enumerate(chars):
            total = Cyclotomic.zero()
            for g in range(5):
                total = total + chi.root(g) * psi.root(g).conjugate()
            assert total.as_rational() == (5 if i == j else 0)


def test_characters_are_distinct_and_multiplicative():
    z2z4 = product_group(cyclic_group(2), cyclic_group(4))
    a = AbelianStructure(z2z4, range(8))
    chars = a.characters()
    assert len(chars) == 8
    assert len({c.key() for c in chars}) == 8


def test_character_on_subgroup():
    a = AbelianStructure(cyclic_group(4), [0, 2])
    chi = a.character([1])
    assert chi(0) == QmodZ(0)
    assert chi(2) == QmodZ("1/2")
    assert chi.root(2).as_rational() == Fraction(-1)


def test_multchar_rejects_non_homomorphism():
    G = cyclic_group(4)
    with pytest.raises(ValueError, match="multiplicative"):
        MultChar(G, range(4), {0: QmodZ(0), 1: QmodZ("1/4"), 2: QmodZ("3/4"), 3: QmodZ("1/2")})


def test_multchar_rejects_wrong_domain():
    G = cyclic_group(4)
    with pytest.raises(ValueError, match="cover"):
        MultChar(G, range(4), {0: QmodZ(0), 2: QmodZ("1/2")})


# ----------------------------------------------------------- serialization


def test_json_round_trip():
    G = s3()
    data = G.to_json()
    H = TableGroup.from_json(data)
    assert np.array_equal(G.table, H.table)
    assert G.labels == H.labels
    assert data["order"] == 6
    assert data["mul"] == G.table.tolist()


def test_json_keeps_designated_subgroups():
    G = heisenberg_group(3)
    data = G.to_json()
    assert data["designated_subgroups"] == {"center": [0, 1, 2]}
    H = TableGroup.from_json(data)
    assert H.designated_subgroups == {"center": (0, 1, 2)}


# ----------------------------------------------------------- construction guards


@pytest.mark.parametrize("m", [6, 10, 12, 15])
def test_heisenberg_needs_prime_power_modulus(m):
    with pytest.raises(ValueError, match="prime power"):
        heisenberg_group(m)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 8, 9])
def test_heisenberg_accepts_prime_powers(m):
    assert heisenberg_group(m).order == m**3


def test_heisenberg_designates_center():
    G = heisenberg_group(3)
    assert G.designated_subgroups["center"] == (0, 1, 2)
    assert set(G.designated_subgroups["center"]) == set(G.center())


def test_designated_subgroups_must_be_subgroups():
    with pytest.raises(GroupTableError, match="subgroup"):
        TableGroup(cyclic_group(4).table, designated_subgroups={"bad": (0, 1)})


# ----------------------------------------------------------- semidirect by automorphisms


def test_semidirect_from_automorphisms_identity_and_sigma():
    base = heisenberg_group(3)
    sigma = _negate_xy_perm(3)
    ident = list(range(27))
    G = semidirect_from_automorphisms(base, [ident, sigma])
    assert G.order == 54
    assert brute_force_associative(G.table)
    # base sits as the designated block, regardless of argument order
    G2 = semidirect_from_automorphisms(base, [sigma, ident])
    assert G2.designated_subgroups["base"] == G.designated_subgroups["base"]
    base_block = G.designated_subgroups["base"]
    sub, back = subgroup_table(G, base_block)
    assert np.array_equal(sub.table, base.table)
    assert back == sorted(base_block)


def test_semidirect_from_automorphisms_propagates_center():
    base = heisenberg_group(3)
    G = semidirect_from_automorphisms(base, [list(range(27)), _negate_xy_perm(3)])
    shift = min(G.designated_subgroups["base"])
    assert G.designated_subgroups["center"] == tuple(shift + i for i in range(3))


def test_semidirect_from_automorphisms_order_21():
    # Z/7 acted on by multiplication by 2, an automorphism of order 3
    base = cyclic_group(7)
    doubling = [(2 * g) % 7 for g in range(7)]
    quadrupling = [(4 * g) % 7 for g in range(7)]
    G = semidirect_from_automorphisms(base, [list(range(7)), doubling, quadrupling])
    assert G.order == 21
    assert brute_force_associative(G.table)
    assert len(G.center()) == 1  # nonabelian of order pq has trivial center


def test_semidirect_from_automorphisms_rejects_non_closed():
    base = cyclic_group(7)
    doubling = [(2 * g) % 7 for g in range(7)]
    with pytest.raises(GroupTableError, match="closed"):
        semidirect_from_automorphisms(base, [list(range(7)), doubling])


def test_semidirect_from_automorphisms_rejects_non_automorphism():
    base = cyclic_group(4)
    shift = [(g + 1) % 4 for g in range(4)]  # translation, not an automorphism
    with pytest.raises(GroupTableError, match="automorphism"):
        semidirect_from_automorphisms(base, [list(range(4)), shift])


# ----------------------------------------------------------- subgroup extraction


def test_subgroup_table_of_center():
    G = heisenberg_group(3)
    sub, back = subgroup_table(G, [0, 1, 2])
    assert back == [0, 1, 2]
    assert np.array_equal(sub.table, cyclic_group(3).table)


def test_subgroup_table_rejects_non_subgroup():
    G = cyclic_group(6)
    with pytest.raises(GroupTableError, match="subgroup"):
        subgroup_table(G, [0, 1])


def test_abelian_quotient_heis3_over_center():
    G = heisenberg_group(3)
    center = list(range(3))
    data = abelian_quotient(G, range(27), center)
    assert data.size == 9
    assert data.structure.invariant_factors == (3, 3)
    assert len(data.characters()) == 9
    # cosets partition the subgroup and are given in ambient indices
    seen = sorted(g for c in data.cosets for g in c)
    assert seen == list(range(27))
    assert data.coset_index_of(data.representatives[4]) == 4


def test_abelian_quotient_of_proper_subgroup():
    # K = {(3a, 3b, z)} inside Heis(9), K/N with N the center
    m = 9
    K = [heisenberg_index(m, 3 * a, 3 * b, z) for a in range(3) for b in range(3)
         for z in range(9)]
    N = [heisenberg_index(m, 0, 0, z) for z in range(9)]
    data = abelian_quotient(heisenberg_group(m), K, N)
    assert data.size == 9
    assert data.structure.invariant_factors == (3, 3)


def test_abelian_quotient_rejects_nonabelian():
    G = heisenberg_group(3)
    with pytest.raises(GroupTableError, match="abelian"):
        abelian_quotient(G, range(27), [0])
