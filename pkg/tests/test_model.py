"""Tests for admissible data validation and the orbit census.

The orbit partition and the support decision are checked against a brute
force oracle that walks the full action (every pair (h, n), not just
generators) on the small fixtures, and against closed-form expectations on
the modulus-9 family where the full walk would be slow.
"""

import json
from fractions import Fraction

import pytest

from heckefusion.exactnum import QmodZ
from heckefusion.groups import (
    MultChar,
    TableGroup,
    cyclic_group,
    heisenberg_coords,
    heisenberg_group,
    heisenberg_index,
    semidirect_from_automorphisms,
)
from heckefusion.model import ModelDatum, ModelError, validate_datum


# ----------------------------------------------------------- fixtures


def center_char(G: TableGroup, denominator: int) -> MultChar:
    """z -> z / denominator on the designated center, additively mod 1."""
    center = G.designated_subgroups["center"]
    base = min(center)
    values = {g: QmodZ(Fraction(g - base, denominator)) for g in center}
    return MultChar(G, center, values)


def heis3_faithful() -> ModelDatum:
    G = heisenberg_group(3)
    return ModelDatum(G, range(27), range(3), center_char(G, 3), name="heis3-faithful")


def heis9_order3() -> ModelDatum:
    G = heisenberg_group(9)
    return ModelDatum(G, range(729), range(9), center_char(G, 3), name="heis9-order3")


def _negate_xy(m: int) -> list[int]:
    return [
        heisenberg_index(m, -x, -y, z)
        for i in range(m**3)
        for (x, y, z) in (heisenberg_coords(m, i),)
    ]


def _negate_yz(m: int) -> list[int]:
    return [
        heisenberg_index(m, x, -y, -z)
        for i in range(m**3)
        for (x, y, z) in (heisenberg_coords(m, i),)
    ]


def sigma_group(m: int, twist) -> TableGroup:
    base = heisenberg_group(m)
    return semidirect_from_automorphisms(base, [list(range(m**3)), twist(m)])


def heis3_sigma() -> ModelDatum:
    G = sigma_group(3, _negate_xy)
    H = G.designated_subgroups["base"]
    N = G.designated_subgroups["center"]
    chi = MultChar(G, N, {g: QmodZ(Fraction(g - min(N), 3)) for g in N})
    return ModelDatum(G, H, N, chi, name="heis3-sigma")


def heis9_sigma() -> ModelDatum:
    G = sigma_group(9, _negate_xy)
    H = G.designated_subgroups["base"]
    N = G.designated_subgroups["center"]
    chi = MultChar(G, N, {g: QmodZ(Fraction(g - min(N), 3)) for g in N})
    return ModelDatum(G, H, N, chi, name="heis9-sigma")


# ----------------------------------------------------------- oracles


def full_action_orbits(G: TableGroup, H, N):
    """Orbit partition from the complete move set, via union-find."""
    parent = list(range(G.order))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x in range(G.order):
        for h in H:
            hx = G.conj(h, x)
            for n in N:
                a, b = find(x), find(G.mul(n, hx))
                if a != b:
                    parent[a] = b
    groups = {}
    for x in range(G.order):
        groups.setdefault(find(x), []).append(x)
    return sorted(frozenset(v) for v in groups.values())


def full_action_supported(G: TableGroup, H, N, chi, members) -> bool:
    """Propagate the chi factor along every edge of one orbit; True if consistent."""
    base = min(members)
    factor = {base: QmodZ(0)}
    frontier = [base]
    while frontier:
        x = frontier.pop()
        for h in H:
            hx = G.conj(h, x)
            for n in N:
                y = G.mul(n, hx)
                fy = factor[x] + chi(n)
                if y in factor:
                    if factor[y] != fy:
                        return False
                else:
                    factor[y] = fy
                    frontier.append(y)
    assert set(factor) == set(members)
    return True


# ----------------------------------------------------------- validation


def test_valid_datum_report_is_clean():
    d = heis3_faithful()
    rep = d.report
    assert rep.ok
    assert [c.name for c in rep.checks] == [
        "h-subgroup",
        "n-subgroup",
        "h-normal",
        "n-normal",
        "n-inside-h",
        "commutators-inside-n",
        "character-domain",
        "character-multiplicative",
        "character-invariant",
    ]
    assert rep.warnings == []
    assert rep.info["pairing_radical_order"] == 3
    assert rep.info["radical_mod_n_order"] == 1
    assert rep.info["radical_equals_n"] is True
    assert rep.info["isogeny_condition"] == "vacuous for finite groups"


def test_report_serializes_to_json():
    rep = heis3_faithful().report
    data = json.loads(json.dumps(rep.to_json()))
    assert data["ok"] is True
    assert len(data["checks"]) == 9
    assert all(c["passed"] for c in data["checks"])


def test_rejects_non_normal_h():
    # S3 with H a non-normal order-2 subgroup
    G = semidirect_from_automorphisms(cyclic_group(3), [[0, 1, 2], [0, 2, 1]])
    flip = next(g for g in range(6) if g != 0 and G.mul(g, g) == 0 and g not in (2, 4))
    H = (0, flip)
    chi = MultChar(G, (0,), {0: QmodZ(0)})
    rep = validate_datum(G, H, (0,), chi)
    assert not rep.ok
    assert rep.first_failure().name == "h-normal"


def test_rejects_n_outside_h():
    G = cyclic_group(12)
    chi = MultChar(G, (0, 4, 8), {0: QmodZ(0), 4: QmodZ("1/3"), 8: QmodZ("2/3")})
    rep = validate_datum(G, (0, 6), (0, 4, 8), chi)
    assert not rep.ok
    fail = rep.first_failure()
    assert fail.name == "n-inside-h"
    assert fail.witness == {"element": "4"}


def test_rejects_commutators_escaping_n():
    G = heisenberg_group(3)
    chi = MultChar(G, (0,), {0: QmodZ(0)})
    rep = validate_datum(G, range(27), (0,), chi)
    assert not rep.ok
    fail = rep.first_failure()
    assert fail.name == "commutators-inside-n"
    assert set(fail.witness) == {"a", "b"}


def test_rejects_character_on_wrong_domain():
    G = heisenberg_group(3)
    chi = MultChar(G, (0,), {0: QmodZ(0)})
    rep = validate_datum(G, range(27), range(3), chi)
    assert not rep.ok
    assert rep.first_failure().name == "character-domain"


def test_rejects_non_multiplicative_character():
    G = heisenberg_group(3)
    bad = MultChar(
        G, range(3), {0: QmodZ(0), 1: QmodZ("1/3"), 2: QmodZ("1/3")}, check=False
    )
    rep = validate_datum(G, range(27), range(3), bad)
    assert not rep.ok
    assert rep.first_failure().name == "character-multiplicative"


def test_rejects_non_invariant_character():
    # twisting by (x, y, z) -> (x, -y, -z) inverts the center, so a faithful
    # central character cannot be invariant under the extension
    G = sigma_group(3, _negate_yz)
    H = G.designated_subgroups["base"]
    N = G.designated_subgroups["center"]
    chi = MultChar(G, N, {g: QmodZ(Fraction(g - min(N), 3)) for g in N})
    rep = validate_datum(G, H, N, chi)
    assert not rep.ok
    fail = rep.first_failure()
    assert fail.name == "character-invariant"
    assert set(fail.witness) == {"g", "n", "chi(n)", "chi(g n g^-1)"}
    with pytest.raises(ModelError, match="character-invariant"):
        ModelDatum(G, H, N, chi)


def test_trivial_character_widens_radical_with_warning():
    G = heisenberg_group(3)
    chi = MultChar(G, range(3), {g: QmodZ(0) for g in range(3)})
    d = ModelDatum(G, range(27), range(3), chi)
    rep = d.report
    assert rep.ok
    assert rep.info["pairing_radical_order"] == 27
    assert rep.info["radical_equals_n"] is False
    assert len(rep.warnings) == 1
    assert "radical order 27" in rep.warnings[0]
    # everything is supported once chi forgets the commutators
    assert all(o.supported for o in d.coset_orbits())
    assert d.support_locus() == tuple(range(27))


# ----------------------------------------------------------- commutator geometry


def test_commutator_cocycle_rule():
    # c_{g1 g2}(h) = c_{g1}(h) * g1 c_{g2}(h) g1^{-1}, exhaustively on order 54
    d = heis3_sigma()
    G = d.group
    for h in d.H:
        for g1 in range(G.order):
            c1 = d.commutator_value(h, g1)
            for g2 in range(G.order):
                lhs = d.commutator_value(h, G.mul(g1, g2))
                rhs = G.mul(c1, G.conj(g1, d.commutator_value(h, g2)))
                assert lhs == rhs


def test_h_stabilizer_constant_on_cosets():
    d = heis3_sigma()
    G = d.group
    for g in range(G.order):
        stab = d.h_stabilizer(g)
        for h0 in d.H:
            assert d.h_stabilizer(G.mul(h0, g)) == stab


def test_h_stabilizer_conjugates_along_orbit():
    d = heis3_faithful()
    G = d.group
    for g in (5, 13, 26):
        stab = set(d.h_stabilizer(g))
        for h in d.H:
            moved = G.conj(h, g)
            assert set(d.h_stabilizer(moved)) == {G.conj(h, s) for s in stab}


def test_stabilizer_pairs_fix_the_point():
    d = heis3_sigma()
    G = d.group
    for g in (0, 4, 27, 40):
        pairs = d.stabilizer_pairs(g)
        assert len(pairs) == len(d.h_stabilizer(g))
        for h, n in pairs:
            assert n in set(d.N)
            assert G.mul(n, G.conj(h, g)) == g


def test_h_stabilizer_inside_h_is_everything():
    # commutators of H land in N, so every h keeps g in its N-coset
    d = heis3_faithful()
    for g in d.H:
        assert d.h_stabilizer(g) == d.H


def test_h_stabilizer_of_twist_is_n():
    d = heis3_sigma()
    sigma = 27  # first element of the nontrivial coset
    assert d.h_stabilizer(sigma) == d.N


def test_commutator_dual_map_values():
    d = heis9_order3()
    h = heisenberg_index(9, 1, 0, 0)
    chi_h = d.commutator_dual_map(h, check=False)
    for x in (heisenberg_index(9, 0, 1, 0), heisenberg_index(9, 2, 5, 7)):
        c = d.group.commutator(h, x)
        assert chi_h(x) == d.chi(c)
    assert chi_h(heisenberg_index(9, 0, 1, 0)) == QmodZ("1/3")
    assert chi_h(heisenberg_index(9, 0, 3, 0)) == QmodZ(0)


def test_commutator_dual_map_is_multiplicative():
    d = heis3_faithful()
    for h in (1, 5, 13):
        d.commutator_dual_map(h, check=True)  # raises if not a character


def test_pairing_radical_matches_dual_map_kernels():
    d = heis3_faithful()
    rad = set(d.H)
    for h in d.H:
        chi_h = d.commutator_dual_map(h, check=False)
        rad &= {x for x in d.H if chi_h(x).is_zero()}
    assert tuple(sorted(rad)) == d.pairing_radical()
    assert d.pairing_radical() == d.N


def test_pairing_radical_of_order3_character():
    d = heis9_order3()
    rad = d.pairing_radical()
    assert len(rad) == 81
    coords = {heisenberg_coords(9, g) for g in rad}
    assert coords == {(x, y, z) for x in (0, 3, 6) for y in (0, 3, 6) for z in range(9)}


# ----------------------------------------------------------- orbits vs oracle


@pytest.mark.parametrize("make", [heis3_faithful, heis3_sigma])
def test_orbit_partition_matches_full_action_oracle(make):
    d = make()
    expected = full_action_orbits(d.group, d.H, d.N)
    got = sorted(frozenset(o.members) for o in d.coset_orbits())
    assert got == expected


@pytest.mark.parametrize("make", [heis3_faithful, heis3_sigma])
def test_support_matches_full_propagation_oracle(make):
    d = make()
    for o in d.coset_orbits():
        expect = full_action_supported(d.group, d.H, d.N, d.chi, o.members)
        assert o.supported == expect


def test_factors_satisfy_every_edge():
    # the stored factor map must be consistent with all moves, not only the
    # generator moves used during the walk
    d = heis3_sigma()
    G = d.group
    for o in d.supported_orbits():
        f = o.factors
        for x in o.members:
            for h in d.H:
                hx = G.conj(h, x)
                for n in d.N:
                    assert f[G.mul(n, hx)] == f[x] + d.chi(n)


def test_unsupported_orbits_have_no_factors():
    d = heis3_faithful()
    for o in d.coset_orbits():
        assert (o.factors is None) == (not o.supported)


def test_orbit_stabilizer_counting():
    for d in (heis3_faithful(), heis3_sigma()):
        total = len(d.H) * len(d.N)
        for o in d.coset_orbits():
            assert len(o.members) * len(o.h_stabilizer) == total


def test_orbits_partition_the_group():
    d = heis3_sigma()
    seen = sorted(x for o in d.coset_orbits() for x in o.members)
    assert seen == list(range(d.group.order))
    for o in d.coset_orbits():
        assert o.base == min(o.members)


def test_orbits_respect_cosets():
    d = heis3_sigma()
    q = d.coset_quotient()
    for o in d.coset_orbits():
        cosets = {int(q.projection[x]) for x in o.members}
        assert cosets == {o.coset}


def test_heis9_orbits_are_fibers_of_xy():
    # conjugation only moves the central coordinate, so each orbit is the
    # full fiber over (x, y); support needs both coordinates divisible by 3
    d = heis9_order3()
    orbits = d.coset_orbits()
    assert len(orbits) == 81
    for o in orbits:
        coords = {heisenberg_coords(9, g) for g in o.members}
        xs = {c[0] for c in coords}
        ys = {c[1] for c in coords}
        assert len(xs) == 1 and len(ys) == 1
        assert len(coords) == 9
        x, y = xs.pop(), ys.pop()
        assert o.supported == (x % 3 == 0 and y % 3 == 0)


def test_heis9_support_locus_is_the_radical():
    d = heis9_order3()
    assert d.support_locus() == d.pairing_radical()


# ----------------------------------------------------------- census


def test_census_heis3_faithful():
    c = heis3_faithful().census()
    assert c["name"] == "heis3-faithful"
    assert c["group_order"] == 27
    assert c["h_order"] == 27
    assert c["n_order"] == 3
    assert c["n_cosets"] == 1
    assert c["totals"] == {"n_orbits": 9, "n_supported": 1, "support_size": 3}
    assert c["radical"] == {"order": 3, "mod_n_order": 1, "equals_n": True}
    coset = c["cosets"][0]
    assert coset["n_orbits"] == 9
    assert coset["n_supported"] == 1
    assert coset["orbit_sizes"] == [3] * 9
    assert coset["stabilizer_orders"] == [27] * 9
    assert coset["supported_bases"] == ["0,0,0"]


def test_census_heis9_order3():
    c = heis9_order3().census()
    assert c["n_cosets"] == 1
    assert c["totals"] == {"n_orbits": 81, "n_supported": 9, "support_size": 81}
    assert c["radical"] == {"order": 81, "mod_n_order": 9, "equals_n": False}
    coset = c["cosets"][0]
    assert coset["orbit_sizes"] == [9] * 81
    assert coset["stabilizer_orders"] == [729] * 81


def test_census_heis3_sigma():
    c = heis3_sigma().census()
    assert c["group_order"] == 54
    assert c["n_cosets"] == 2
    assert c["totals"] == {"n_orbits": 10, "n_supported": 2, "support_size": 30}
    assert c["radical"] == {"order": 3, "mod_n_order": 1, "equals_n": True}
    base_coset, twist_coset = c["cosets"]
    assert base_coset["n_orbits"] == 9
    assert base_coset["n_supported"] == 1
    assert twist_coset["n_orbits"] == 1
    assert twist_coset["n_supported"] == 1
    assert twist_coset["orbit_sizes"] == [27]
    assert twist_coset["stabilizer_orders"] == [3]


def test_census_heis9_sigma_stress():
    c = heis9_sigma().census()
    assert c["group_order"] == 1458
    assert c["n_cosets"] == 2
    assert c["totals"] == {"n_orbits": 82, "n_supported": 10, "support_size": 810}
    base_coset, twist_coset = c["cosets"]
    assert base_coset["n_supported"] == 9
    assert twist_coset["orbit_sizes"] == [729]
    assert twist_coset["stabilizer_orders"] == [9]
    assert twist_coset["n_supported"] == 1


def test_census_is_json_serializable():
    c = heis3_sigma().census()
    round_tripped = json.loads(json.dumps(c, sort_keys=True))
    assert round_tripped["totals"]["n_supported"] == 2
