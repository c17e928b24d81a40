"""Admissible group data and the orbit geometry of the twisting action.

A datum consists of a finite group G, normal subgroups N <= H, and a
character chi of N that is invariant under conjugation by all of G, with all
commutators of H landing in N.  The pair (H, N) acts on G by
(h, n): x -> n * h x h^{-1}, and the functions of interest transform by
chi(n) under that action.

This module validates data (with explicit witnesses on failure), computes
the orbit partition of each H-coset together with the chi-factor that
propagates along an orbit, decides which orbits support a nonzero
equivariant function, and summarizes everything as a census.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum import QmodZ
from .groups import MultChar, Quotient, TableGroup, quotient

__all__ = [
    "ModelError",
    "CheckResult",
    "ValidationReport",
    "ModelDatum",
    "validate_datum",
    "OrbitRecord",
]


class ModelError(ValueError):
    """The datum is not admissible."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> CheckResult | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "warnings": list(self.warnings),
            "info": self.info,
        }


def validate_datum(group: TableGroup, h_elems, n_elems, chi: MultChar) -> ValidationReport:
    """Run every admissibility check; never raises for a math failure."""
    rep = ValidationReport()
    H = tuple(sorted(set(h_elems)))
    N = tuple(sorted(set(n_elems)))
    lab = group.labels

    ok_h = group.is_subgroup(H)
    rep.checks.append(CheckResult("h-subgroup", ok_h, detail=f"|H| = {len(H)}"))
    ok_n = group.is_subgroup(N)
    rep.checks.append(CheckResult("n-subgroup", ok_n, detail=f"|N| = {len(N)}"))
    if not (ok_h and ok_n):
        return rep

    rep.checks.append(CheckResult("h-normal", group.is_normal(H)))
    rep.checks.append(CheckResult("n-normal", group.is_normal(N)))

    inside = set(N) <= set(H)
    wit = None
    if not inside:
        stray = min(set(N) - set(H))
        wit = {"element": lab[stray]}
    rep.checks.append(CheckResult("n-inside-h", inside, witness=wit))

    n_set = set(N)
    comm_ok, comm_wit = True, None
    for a in H:
        for b in H:
            if group.commutator(a, b) not in n_set:
                comm_ok, comm_wit = False, {"a": lab[a], "b": lab[b]}
                break
        if not comm_ok:
            break
    rep.checks.append(CheckResult("commutators-inside-n", comm_ok, witness=comm_wit))

    dom_ok = chi.elements == N
    rep.checks.append(
        CheckResult("character-domain", dom_ok, detail="character must be defined exactly on N")
    )
    if not dom_ok:
        return rep

    mult_ok, mult_wit = True, None
    for a in N:
        for b in N:
            if chi(group.mul(a, b)) != chi(a) + chi(b):
                mult_ok, mult_wit = False, {"a": lab[a], "b": lab[b]}
                break
        if not mult_ok:
            break
    rep.checks.append(CheckResult("character-multiplicative", mult_ok, witness=mult_wit))

    inv_ok, inv_wit = True, None
    if mult_ok:
        for g in range(group.order):
            for n in N:
                if chi(group.conj(g, n)) != chi(n):
                    inv_ok, inv_wit = False, {
                        "g": lab[g],
                        "n": lab[n],
                        "chi(n)": str(chi(n)),
                        "chi(g n g^-1)": str(chi(group.conj(g, n))),
                    }
                    break
            if not inv_ok:
                break
    rep.checks.append(CheckResult("character-invariant", inv_ok, witness=inv_wit))

    if rep.ok:
        radical = _pairing_radical(group, H, N, chi)
        rep.info["pairing_radical_order"] = len(radical)
        rep.info["radical_mod_n_order"] = len(radical) // len(N)
        rep.info["radical_equals_n"] = radical == N
        # the connectedness/isogeny hypothesis of the continuous theory has no
        # content for finite tables; recorded so reports stay comparable
        rep.info["isogeny_condition"] = "vacuous for finite groups"
        if radical != N:
            rep.warnings.append(
                "commutator pairing of H/N is degenerate beyond N: radical order "
                f"{len(radical)} > |N| = {len(N)}; the supported locus is larger than N"
            )
    return rep


def _pairing_radical(group: TableGroup, H, N, chi: MultChar) -> tuple[int, ...]:
    n_set = set(N)
    rad = []
    for a in H:
        if all(
            group.commutator(a, b) in n_set and chi(group.commutator(a, b)).is_zero()
            for b in H
        ):
            rad.append(a)
    return tuple(rad)


@dataclass(frozen=True)
class OrbitRecord:
    """One orbit of the twisting action inside a single H-coset.

    factors maps each member x to the class c with x = n * h * base * h^{-1}
    and chi(n) = c; it is None exactly when the orbit is unsupported (the
    propagation is then inconsistent).
    """

    coset: int
    base: int
    members: tuple[int, ...]
    h_stabilizer: tuple[int, ...]
    supported: bool
    factors: dict[int, QmodZ] | None


class ModelDatum:
    """A validated admissible datum (G, H, N, chi)."""

    def __init__(self, group: TableGroup, h_elems, n_elems, chi: MultChar, name: str = "",
                 check: bool = True):
        self.group = group
        self.H = tuple(sorted(set(h_elems)))
        self.N = tuple(sorted(set(n_elems)))
        self.chi = chi
        self.name = name
        if check:
            report = validate_datum(group, self.H, self.N, chi)
            if not report.ok:
                bad = report.first_failure()
                raise ModelError(f"datum not admissible: {bad.name} failed, witness {bad.witness}")
            self.report = report
        else:
            self.report = None
        self._orbits: list[OrbitRecord] | None = None
        self._coset_quotient: Quotient | None = None

    # -- coset structure ----------------------------------------------------

    def coset_quotient(self) -> Quotient:
        """G/H with its coset partition."""
        if self._coset_quotient is None:
            self._coset_quotient = quotient(self.group, self.H)
        return self._coset_quotient

    def commutator_value(self, h: int, g: int) -> int:
        """c_g(h) = h g h^{-1} g^{-1}, the displacement of g under h-conjugation."""
        return self.group.commutator(h, g)

    def h_stabilizer(self, g: int) -> tuple[int, ...]:
        """H_g = {h in H : c_g(h) in N}; constant along the orbit's coset."""
        n_set = set(self.N)
        return tuple(h for h in self.H if self.group.commutator(h, g) in n_set)

    def stabilizer_pairs(self, g: int) -> tuple[tuple[int, int], ...]:
        """The pairs (h, c_g(h)^{-1}) that fix g under the twisting action."""
        G = self.group
        return tuple((h, G.inv(G.commutator(h, g))) for h in self.h_stabilizer(g))

    def orbit_supported(self, g: int) -> bool:
        """True when chi kills every commutator displacement c_g(h), h in H_g."""
        return all(self.chi(self.group.commutator(h, g)).is_zero() for h in self.h_stabilizer(g))

    def commutator_dual_map(self, h: int, check: bool = True) -> MultChar:
        """The character x -> chi([h, x]) of H attached to an element h of H."""
        values = {}
        n_set = set(self.N)
        for x in self.H:
            c = self.group.commutator(h, x)
            if c not in n_set:
                raise ModelError(f"commutator [{h}, {x}] escapes N; datum violated")
            values[x] = self.chi(c)
        return MultChar(self.group, self.H, values, check=check)

    def pairing_radical(self) -> tuple[int, ...]:
        """Elements of H whose commutator displacement in H is chi-invisible."""
        return _pairing_radical(self.group, self.H, self.N, self.chi)

    # -- orbits ---------------------------------------------------------------

    def coset_orbits(self) -> list[OrbitRecord]:
        """All orbits of the twisting action on G, in increasing base order.

        Support is decided twice, independently: by chi-consistency of the
        factor propagation along orbit edges, and by the stabilizer criterion
        at the base.  The two must agree; disagreement would be a bug, not a
        property of the datum.
        """
        if self._orbits is not None:
            return self._orbits
        G = self.group
        q = self.coset_quotient()
        gens_h = G.subgroup_generators(self.H)
        gens_n = G.subgroup_generators(self.N)
        rows = G.rows()
        inv = G.inverse_list()
        conj_moves = [(rows[h], inv[h]) for h in gens_h]
        chi_n = [self.chi(n) for n in gens_n]
        visited = [False] * G.order
        orbits: list[OrbitRecord] = []
        for base in range(G.order):
            if visited[base]:
                continue
            factors: dict[int, QmodZ] = {base: QmodZ(0)}
            consistent = True
            stack = [base]
            visited[base] = True
            while stack:
                x = stack.pop()
                fx = factors[x]
                targets = []
                for row_h, ih in conj_moves:
                    targets.append((rows[row_h[x]][ih], fx))
                for n, cn in zip(gens_n, chi_n):
                    targets.append((rows[n][x], fx + cn))
                for y, fy in targets:
                    if y in factors:
                        if factors[y] != fy:
                            consistent = False
                    else:
                        factors[y] = fy
                        visited[y] = True
                        stack.append(y)
            members = tuple(sorted(factors))
            stab = self.h_stabilizer(base)
            supported = all(
                self.chi(G.commutator(h, base)).is_zero() for h in stab
            )
            if supported != consistent:
                raise AssertionError("support criteria disagree; internal error")
            orbits.append(
                OrbitRecord(
                    coset=int(q.projection[base]),
                    base=base,
                    members=members,
                    h_stabilizer=stab,
                    supported=supported,
                    factors=factors if supported else None,
                )
            )
        self._orbits = orbits
        return orbits

    def supported_orbits(self) -> list[OrbitRecord]:
        return [o for o in self.coset_orbits() if o.supported]

    def support_locus(self) -> tuple[int, ...]:
        """All elements lying in supported orbits, ascending."""
        out: list[int] = []
        for o in self.coset_orbits():
            if o.supported:
                out.extend(o.members)
        return tuple(sorted(out))

    # -- census -----------------------------------------------------------------

    def census(self) -> dict:
        """Per-coset orbit statistics, JSON-ready and deterministic."""
        q = self.coset_quotient()
        orbits = self.coset_orbits()
        lab = self.group.labels
        cosets = []
        for ci, coset_members in enumerate(q.cosets):
            mine = [o for o in orbits if o.coset == ci]
            cosets.append(
                {
                    "coset_index": ci,
                    "representative": lab[q.representatives[ci]],
                    "size": len(coset_members),
                    "n_orbits": len(mine),
                    "n_supported": sum(1 for o in mine if o.supported),
                    "orbit_sizes": [len(o.members) for o in mine],
                    "stabilizer_orders": [len(o.h_stabilizer) for o in mine],
                    "supported_bases": [lab[o.base] for o in mine if o.supported],
                }
            )
        radical = self.pairing_radical()
        return {
            "name": self.name,
            "group_order": self.group.order,
            "h_order": len(self.H),
            "n_order": len(self.N),
            "n_cosets": len(q.cosets),
            "cosets": cosets,
            "totals": {
                "n_orbits": len(orbits),
                "n_supported": sum(1 for o in orbits if o.supported),
                "support_size": len(self.support_locus()),
            },
            "radical": {
                "order": len(radical),
                "mod_n_order": len(radical) // len(self.N),
                "equals_n": radical == self.N,
            },
        }
