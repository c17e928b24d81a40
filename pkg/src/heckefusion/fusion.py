"""Graded fusion rings with a group action, rigidity certificates, and
equivariantization.

A GradedFusionRing is the integer shadow of a fusion category: labels for
the simples, non-negative structure constants, a candidate dual involution,
a grading by a finite group Gamma, and an action of Gamma permuting the
labels.  validate_ring checks the ring axioms exhaustively and report-style;
certify_rigidity issues ring-level certificates only, since coherence
diagrams have no table shadow.

Equivariantization follows the orbit/stabilizer route: new simples are
pairs (orbit, character of the abelian stabilizer) and multiplicities are
stabilizer character averages over orbits of label triples.  This is a
deliberately different organization from the convolution-side table, so the
two can cross-check each other on shared data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactnum import Cyclotomic
from .groups import AbelianStructure, GroupTableError, TableGroup, cyclic_group
from .metric import MetricGroup, Verdict

__all__ = [
    "FusionError",
    "GradedFusionRing",
    "RigidityCertificate",
    "validate_ring",
    "grading_is_faithful",
    "check_rigid_hypotheses",
    "certify_rigidity",
    "equivariantize",
    "from_metric_group",
    "from_hecke",
]


class FusionError(ValueError):
    """Malformed ring data or a request outside the table model."""


def _passed(detail: str = "") -> Verdict:
    return Verdict(ok=True, detail=detail)


def _failed(witness: dict, detail: str) -> Verdict:
    return Verdict(ok=False, witness=witness, detail=detail)


def _identity_perms(gamma: TableGroup, rank: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(range(rank)) for _ in range(gamma.order))


class GradedFusionRing:
    """Integer fusion coefficients with dual, grading, and Gamma-action.

    The constructor checks shapes only; mathematical axioms are the business
    of validate_ring so that deliberately corrupted rings can be built and
    diagnosed with witnesses.
    """

    def __init__(
        self,
        labels,
        unit: str,
        n,
        dual,
        gamma: TableGroup | None = None,
        grading=None,
        action=None,
    ):
        self.labels = tuple(str(s) for s in labels)
        if len(set(self.labels)) != len(self.labels):
            raise FusionError("labels must be distinct")
        if unit not in self.labels:
            raise FusionError("unit label is not among the labels")
        self.unit = unit
        self.unit_index = self.labels.index(unit)
        r = len(self.labels)
        arr = np.asarray(n, dtype=np.int64)
        if arr.shape != (r, r, r):
            raise FusionError("structure constants must be a rank x rank x rank cube")
        if (arr < 0).any():
            i, j, k = (int(v) for v in np.argwhere(arr < 0)[0])
            raise FusionError(
                f"negative coefficient at ({self.labels[i]}, {self.labels[j]}, "
                f"{self.labels[k]})"
            )
        self.n = arr
        self.dual = tuple(int(d) for d in dual)
        if len(self.dual) != r:
            raise FusionError("dual must assign one label per label")
        self.gamma = gamma if gamma is not None else cyclic_group(1)
        if grading is None:
            grading = (self.gamma.identity,) * r
        self.grading = tuple(int(g) for g in grading)
        if len(self.grading) != r:
            raise FusionError("grading must assign one degree per label")
        if any(not 0 <= g < self.gamma.order for g in self.grading):
            raise FusionError("grading degree out of range")
        if action is None:
            action = _identity_perms(self.gamma, r)
        self.action = tuple(tuple(int(x) for x in perm) for perm in action)
        if len(self.action) != self.gamma.order:
            raise FusionError("action must cover every group element")
        if any(len(perm) != r for perm in self.action):
            raise FusionError("action permutations must cover every label")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        lab = self.labels
        glab = self.gamma.labels
        triples = [
            [i, j, k, int(self.n[i, j, k])]
            for i in range(self.rank)
            for j in range(self.rank)
            for k in range(self.rank)
            if self.n[i, j, k]
        ]
        return {
            "labels": list(lab),
            "unit": self.unit,
            "dual": {lab[i]: lab[d] for i, d in enumerate(self.dual)},
            "grading": {lab[i]: glab[g] for i, g in enumerate(self.grading)},
            "N": triples,
            "action": {
                glab[c]: {lab[i]: lab[perm[i]] for i in range(self.rank)}
                for c, perm in enumerate(self.action)
            },
        }


# ------------------------------------------------------------------ validation


def grading_is_faithful(r: GradedFusionRing) -> bool:
    """Every degree is hit by some simple."""
    return set(r.grading) == set(range(r.gamma.order))


def validate_ring(r: GradedFusionRing) -> Verdict:
    """All ring axioms, exhaustively, with a labeled witness on failure."""
    lab = r.labels
    rank = r.rank
    if sorted(r.dual) != list(range(rank)):
        return _failed({"dual": list(r.dual)}, "dual is not a permutation")
    for i in range(rank):
        if r.dual[r.dual[i]] != i:
            return _failed({"simple": lab[i]}, "dual is not an involution")
    u = r.unit_index
    eye = np.eye(rank, dtype=np.int64)
    if not np.array_equal(r.n[u], eye):
        i, k = (int(v) for v in np.argwhere(r.n[u] != eye)[0])
        return _failed({"simple": lab[i], "target": lab[k]}, "left unit law fails")
    if not np.array_equal(r.n[:, u, :], eye):
        i, k = (int(v) for v in np.argwhere(r.n[:, u, :] != eye)[0])
        return _failed({"simple": lab[i], "target": lab[k]}, "right unit law fails")
    left = np.einsum("ijm,mkl->ijkl", r.n, r.n)
    right = np.einsum("jkm,iml->ijkl", r.n, r.n)
    if not np.array_equal(left, right):
        i, j, k, _ = (int(v) for v in np.argwhere(left != right)[0])
        return _failed(
            {"x": lab[i], "y": lab[j], "z": lab[k]},
            "associativity fails on this triple",
        )
    mul = r.gamma.mul
    for i, j, k in np.argwhere(r.n):
        if r.grading[k] != mul(r.grading[int(i)], r.grading[int(j)]):
            return _failed(
                {"x": lab[int(i)], "y": lab[int(j)], "z": lab[int(k)]},
                "grading is not multiplicative",
            )
    glab = r.gamma.labels
    for c, perm in enumerate(r.action):
        if sorted(perm) != list(range(rank)):
            return _failed({"gamma": glab[c]}, "action is not a permutation")
    if r.action[r.gamma.identity] != tuple(range(rank)):
        return _failed({"gamma": glab[r.gamma.identity]}, "identity must act trivially")
    for a in range(r.gamma.order):
        for b in range(r.gamma.order):
            composed = tuple(r.action[a][r.action[b][i]] for i in range(rank))
            if r.action[mul(a, b)] != composed:
                return _failed(
                    {"gamma_a": glab[a], "gamma_b": glab[b]},
                    "action is not a homomorphism",
                )
    inv = r.gamma.inv
    for c, perm in enumerate(r.action):
        if perm[u] != u:
            return _failed({"gamma": glab[c]}, "action must fix the unit")
        for i in range(rank):
            if perm[r.dual[i]] != r.dual[perm[i]]:
                return _failed(
                    {"gamma": glab[c], "simple": lab[i]},
                    "action does not commute with dual",
                )
            expected = mul(mul(c, r.grading[i]), inv(c))
            if r.grading[perm[i]] != expected:
                return _failed(
                    {"gamma": glab[c], "simple": lab[i]},
                    "action does not conjugate the grading",
                )
        moved = r.n[np.ix_(perm, perm, perm)]
        if not np.array_equal(moved, r.n):
            i, j, k = (int(v) for v in np.argwhere(moved != r.n)[0])
            return _failed(
                {"gamma": glab[c], "x": lab[i], "y": lab[j], "z": lab[k]},
                "action does not preserve the fusion coefficients",
            )
    return _passed(
        f"all axioms hold on {rank} simples; grading faithful: "
        f"{grading_is_faithful(r)}"
    )


# ------------------------------------------------------------------ rigidity


def check_rigid_hypotheses(r: GradedFusionRing) -> Verdict:
    """Duality multiplicities and pointedness of the trivial component.

    Collects every failure instead of stopping at the first, so a corrupted
    ring reports all offending simples at once.
    """
    lab = r.labels
    u = r.unit_index
    failures: list[dict] = []
    for m in range(r.rank):
        row = r.n[m, :, u]
        d = r.dual[m]
        if row[d] != 1 or row.sum() != 1:
            failures.append(
                {
                    "condition": "iii",
                    "simple": lab[m],
                    "unit_multiplicities": {
                        lab[y]: int(row[y]) for y in np.flatnonzero(row)
                    },
                }
            )
    for x in range(r.rank):
        if r.grading[x] != r.gamma.identity:
            continue
        prod = r.n[x, r.dual[x], :]
        if prod[u] != 1 or prod.sum() != 1:
            failures.append(
                {
                    "condition": "iv",
                    "simple": lab[x],
                    "product": {lab[k]: int(prod[k]) for k in np.flatnonzero(prod)},
                }
            )
    if failures:
        return _failed({"failures": failures}, f"{len(failures)} hypothesis failures")
    return _passed("duality multiplicities and pointed trivial component hold")


@dataclass(frozen=True)
class RigidityCertificate:
    """Ring-level certificate: absorption sets per simple, or a refusal.

    Certifies the numerical duality conditions only; it says nothing about
    categorical coherence.
    """

    ok: bool
    invertibles: tuple[str, ...]
    simples: dict[str, dict[str, list[str]]]
    witness: dict | None = None
    detail: str = ""
    note: str = "ring-level certificate"

    def to_json(self) -> dict:
        out: dict = {
            "note": self.note,
            "ok": self.ok,
            "invertibles": list(self.invertibles),
            "simples": self.simples,
            "detail": self.detail,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _refused(witness: dict, detail: str) -> RigidityCertificate:
    return RigidityCertificate(
        ok=False, invertibles=(), simples={}, witness=witness, detail=detail
    )


def certify_rigidity(r: GradedFusionRing) -> RigidityCertificate:
    """Verify the invertible-occurrence lemma and emit absorption sets.

    For each simple M and each invertible X the multiplicity of X in
    M * dual(M) must be 1 exactly when X absorbs into M on the left, and
    symmetrically in dual(M) * M for right absorption.
    """
    valid = validate_ring(r)
    if not valid.ok:
        return _refused(
            {"stage": "validate_ring", **(valid.witness or {})}, valid.detail
        )
    hyp = check_rigid_hypotheses(r)
    if not hyp.ok:
        return _refused({"stage": "hypotheses", **(hyp.witness or {})}, hyp.detail)
    lab = r.labels
    u = r.unit_index
    invertibles = [x for x in range(r.rank) if r.grading[x] == r.gamma.identity]

    def absorbs_left(x: int, m: int) -> bool:
        row = r.n[x, m, :]
        return row[m] == 1 and row.sum() == 1

    def absorbs_right(m: int, y: int) -> bool:
        row = r.n[m, y, :]
        return row[m] == 1 and row.sum() == 1

    simples: dict[str, dict[str, list[str]]] = {}
    for m in range(r.rank):
        d = r.dual[m]
        a_set = [x for x in invertibles if absorbs_left(x, m)]
        b_set = [y for y in invertibles if absorbs_right(m, y)]
        for x in invertibles:
            expected = 1 if x in a_set else 0
            found = int(r.n[m, d, x])
            if found != expected:
                return _refused(
                    {
                        "simple": lab[m],
                        "invertible": lab[x],
                        "side": "left",
                        "expected": expected,
                        "found": found,
                    },
                    "occurrence lemma fails in M * dual(M)",
                )
            expected = 1 if x in b_set else 0
            found = int(r.n[d, m, x])
            if found != expected:
                return _refused(
                    {
                        "simple": lab[m],
                        "invertible": lab[x],
                        "side": "right",
                        "expected": expected,
                        "found": found,
                    },
                    "occurrence lemma fails in dual(M) * M",
                )
        simples[lab[m]] = {
            "A": [lab[x] for x in a_set],
            "B": [lab[y] for y in b_set],
        }
    return RigidityCertificate(
        ok=True,
        invertibles=tuple(lab[x] for x in invertibles),
        simples=simples,
        detail=f"occurrence lemma verified for {r.rank} simples "
        f"against {len(invertibles)} invertibles",
    )


# ------------------------------------------------------------------ equivariantization


def equivariantize(r: GradedFusionRing, cocycles=None) -> GradedFusionRing:
    """Orbit/character simples with stabilizer-averaged multiplicities.

    New simples are pairs (Gamma-orbit, character of the base point's
    stabilizer); the multiplicity of a triple is a sum over Gamma-orbits of
    label triples of N at the orbit representative times the average of the
    three transported characters over the joint stabilizer.  Stabilizers
    must be abelian; 2-cocycle data beyond the trivial one is refused since
    the table model carries nothing to pin the projective multiplicities.
    """
    if cocycles is not None:
        if not isinstance(cocycles, dict) or any(
            v != "trivial" for v in cocycles.values()
        ):
            raise FusionError(
                "non-trivial 2-cocycles are not determined by the table "
                "model; refusing to guess projective multiplicities"
            )
    valid = validate_ring(r)
    if not valid.ok:
        raise FusionError(f"ring is not valid: {valid.detail}, {valid.witness}")
    gamma = r.gamma
    if gamma.order == 1:
        return r

    rank = r.rank
    n_gamma = gamma.order
    seen = [False] * rank
    orbits: list[tuple[int, ...]] = []
    for i in range(rank):
        if seen[i]:
            continue
        members = {i}
        frontier = [i]
        while frontier:
            x = frontier.pop()
            for perm in r.action:
                y = perm[x]
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        for x in members:
            seen[x] = True
        orbits.append(tuple(sorted(members)))

    # per orbit: base point, sorted stabilizer, a transporter gamma per member
    simples = []
    labels = []
    transport: dict[int, int] = {}
    stab_of: dict[int, tuple[int, ...]] = {}
    for orbit in orbits:
        base = orbit[0]
        stab = tuple(c for c in range(n_gamma) if r.action[c][base] == base)
        stab_of[base] = stab
        for x in orbit:
            transport[x] = min(
                c for c in range(n_gamma) if r.action[c][base] == x
            )
        try:
            chars = AbelianStructure(gamma, stab).characters()
        except GroupTableError as err:
            raise FusionError(
                f"stabilizer of {r.labels[base]} is not abelian; projective "
                "character data would be required"
            ) from err
        for t, psi in enumerate(chars):
            simples.append((base, orbit, psi))
            labels.append(f"{r.labels[base]}|{t}")

    new_rank = len(simples)
    dimension = sum(len(orbit) ** 2 for _, orbit, _ in simples)
    if dimension != n_gamma * rank:
        raise FusionError(
            f"orbit/character bookkeeping is inconsistent: dimension "
            f"{dimension} != {n_gamma} * {rank}"
        )

    mul = gamma.mul
    inv = gamma.inv

    def conjugate_value(psi, member: int, c: int) -> Cyclotomic:
        # psi lives on the base stabilizer; transport c back along the
        # transporter of member
        a = transport[member]
        return psi.root(mul(inv(a), mul(c, a)))

    n_new = np.zeros((new_rank, new_rank, new_rank), dtype=np.int64)
    for ai, (b1, o1, psi1) in enumerate(simples):
        for bi, (b2, o2, psi2) in enumerate(simples):
            for ci, (b3, o3, psi3) in enumerate(simples):
                total = Cyclotomic.zero()
                for x, y, z in itertools.product(o1, o2, o3):
                    # process each Gamma-orbit of triples once, at its
                    # lexicographically least representative
                    images = [
                        (perm[x], perm[y], perm[z]) for perm in r.action
                    ]
                    if min(images) < (x, y, z):
                        continue
                    mult = int(r.n[x, y, z])
                    if not mult:
                        continue
                    joint = [
                        c
                        for c, img in enumerate(images)
                        if img == (x, y, z)
                    ]
                    avg = Cyclotomic.zero()
                    for c in joint:
                        avg = avg + (
                            conjugate_value(psi1, x, c)
                            * conjugate_value(psi2, y, c)
                            * conjugate_value(psi3, z, c).conjugate()
                        )
                    value = avg * Cyclotomic.from_rational(
                        Fraction(mult, len(joint))
                    )
                    total = total + value
                count = total.as_rational()
                if count is None or count.denominator != 1 or count < 0:
                    raise FusionError(
                        "equivariant multiplicity is not a nonnegative "
                        f"integer at ({labels[ai]}, {labels[bi]}, {labels[ci]})"
                    )
                n_new[ai, bi, ci] = int(count)

    unit_base = r.unit_index
    trivial_chars = AbelianStructure(gamma, stab_of[unit_base]).characters()
    if not trivial_chars[0].is_trivial():
        raise FusionError("character enumeration does not lead with the trivial one")
    unit_label = f"{r.labels[unit_base]}|0"

    dual_new = []
    for i in range(new_rank):
        col = n_new[i, :, labels.index(unit_label)]
        hits = np.flatnonzero(col)
        if len(hits) != 1 or col[hits[0]] != 1:
            raise FusionError(
                f"no unique dual for {labels[i]} in the equivariantized ring"
            )
        dual_new.append(int(hits[0]))

    out = GradedFusionRing(
        labels=labels,
        unit=unit_label,
        n=n_new,
        dual=dual_new,
    )
    check = validate_ring(out)
    if not check.ok:
        raise FusionError(
            f"equivariantized ring fails validation: {check.detail}, "
            f"{check.witness}"
        )
    return out


# ------------------------------------------------------------------ constructors


def from_metric_group(m: MetricGroup) -> GradedFusionRing:
    """Pointed ring on K: fusion is the group law, dual is negation."""
    elements = m.elements
    index = {x: i for i, x in enumerate(elements)}
    rank = len(elements)
    n = np.zeros((rank, rank, rank), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            n[i, j, index[m.add(x, y)]] = 1
    dual = [index[m.neg(x)] for x in elements]
    labels = [m.label(x) for x in elements]
    return GradedFusionRing(
        labels=labels, unit=m.label(m.zero), n=n, dual=dual
    )


def from_hecke(
    table,
    gamma: TableGroup | None = None,
    grading=None,
    action=None,
    dual=None,
) -> GradedFusionRing:
    """Ring from an integer convolution table.

    The table must already be in integer form (non-negative coefficients
    after the common-scalar split); the unit is detected from the table and
    the dual defaults to the unique unit-row partner.
    """
    n = np.asarray(table.n, dtype=np.int64)
    if (n < 0).any():
        raise FusionError("structure constants must be non-negative integers")
    rank = len(table.labels)
    eye = np.eye(rank, dtype=np.int64)
    units = [
        u
        for u in range(rank)
        if np.array_equal(n[u], eye) and np.array_equal(n[:, u, :], eye)
    ]
    if len(units) != 1:
        raise FusionError(f"table has {len(units)} unit candidates, expected 1")
    u = units[0]
    if dual is None:
        dual = []
        for i in range(rank):
            hits = np.flatnonzero(n[i, :, u])
            if len(hits) != 1 or n[i, hits[0], u] != 1:
                raise FusionError(
                    f"no unique dual partner for {table.labels[i]}"
                )
            dual.append(int(hits[0]))
    return GradedFusionRing(
        labels=table.labels,
        unit=table.labels[u],
        n=n,
        dual=dual,
        gamma=gamma,
        grading=grading,
        action=action,
    )
