"""Convolution algebra of twisted equivariant functions on a finite group.

Functions transform by the central character under the orbit moves of a
ModelDatum: f(n * h x h^{-1}) = chi(n) f(x).  The unit for convolution on
the twisted subspace is the idempotent built from chi, and the simples of
the invariant function space are indexed by the supported orbits.  All
values are exact cyclotomic numbers, so every identity in this module is
checked as an equality, never numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .exactnum import Cyclotomic, root_of_unity
from .groups import AbelianStructure
from .model import ModelDatum

__all__ = [
    "HeckeError",
    "ModelViolationError",
    "EquivFn",
    "delta",
    "idempotent_e",
    "convolve",
    "translate",
    "conjugate_by",
    "dual",
    "pairing",
    "is_in_eD",
    "is_in_eDH",
    "is_in_eDG",
    "basis_eDH",
    "full_basis",
    "decompose",
    "FusionTable",
    "fusion_table",
    "k_subgroup",
    "k_coset_reps",
    "k_sub_m",
    "dual_convolve",
    "crossed_commute_check",
    "GammaAction",
    "gamma_action",
    "gamma_invariants",
    "EquivariantizedTable",
    "equivariantized_table",
]


class HeckeError(ValueError):
    """Misuse of the function algebra (datum mismatch, bad arguments)."""


class ModelViolationError(RuntimeError):
    """An identity the finite model guarantees failed to hold.

    This is never a property of the input datum; it means the implementation
    disagrees with itself and must not be silently ignored.
    """


def _as_cyclo(c) -> Cyclotomic:
    if isinstance(c, Cyclotomic):
        return c
    return Cyclotomic.from_rational(Fraction(c))


class EquivFn:
    """A sparse function from group elements to cyclotomic numbers.

    Only nonzero values are stored.  Instances are immutable by convention;
    all operations return new functions.
    """

    def __init__(self, datum: ModelDatum, values: dict[int, Cyclotomic]):
        self.datum = datum
        self.values = {g: v for g, v in values.items() if not v.is_zero()}
        order = datum.group.order
        for g in self.values:
            if not (0 <= g < order):
                raise HeckeError(f"element {g} outside the group")

    def __call__(self, g: int) -> Cyclotomic:
        return self.values.get(g, Cyclotomic.zero())

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.values))

    def is_zero(self) -> bool:
        return not self.values

    def scale(self, c) -> "EquivFn":
        c = _as_cyclo(c)
        return EquivFn(self.datum, {g: v * c for g, v in self.values.items()})

    def __add__(self, other: "EquivFn") -> "EquivFn":
        _same_datum(self, other)
        out = dict(self.values)
        for g, v in other.values.items():
            out[g] = out[g] + v if g in out else v
        return EquivFn(self.datum, out)

    def __sub__(self, other: "EquivFn") -> "EquivFn":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquivFn):
            return NotImplemented
        return self.datum is other.datum and self.values == other.values

    __hash__ = None

    def __repr__(self) -> str:
        return f"EquivFn(support={len(self.values)} of {self.datum.group.order})"

    def to_json(self) -> dict:
        lab = self.datum.group.labels
        entries = []
        for g in sorted(self.values):
            value = self.values[g].to_json()
            entries.append({"element": lab[g], **value})
        return {"values": entries}


def _same_datum(f: EquivFn, g: EquivFn) -> None:
    if f.datum is not g.datum:
        raise HeckeError("functions belong to different data")


# ---------------------------------------------------------------- basics


def delta(datum: ModelDatum, g: int) -> EquivFn:
    return EquivFn(datum, {g: Cyclotomic.one()})


def idempotent_e(datum: ModelDatum) -> EquivFn:
    """|N|^{-1} chi on N, zero elsewhere; the unit of the twisted algebra."""
    scale = Cyclotomic.from_rational(Fraction(1, len(datum.N)))
    return EquivFn(datum, {n: scale * root_of_unity(datum.chi(n)) for n in datum.N})


def convolve(f: EquivFn, g: EquivFn) -> EquivFn:
    """(f * g)(x) = sum_y f(y) g(y^{-1} x), summed over supp(f) x supp(g)."""
    _same_datum(f, g)
    table = f.datum.group.table
    acc: dict[int, Cyclotomic] = {}
    # sorted iteration fixes the accumulation order, so representatives of
    # cyclotomic values are reproducible run to run
    for y in sorted(f.values):
        fy = f.values[y]
        row = table[y]
        for z in sorted(g.values):
            x = int(row[z])
            term = fy * g.values[z]
            acc[x] = acc[x] + term if x in acc else term
    return EquivFn(f.datum, acc)


def translate(f: EquivFn, g: int, side: str) -> EquivFn:
    """Right translate f^g(x) = f(x g^{-1}); left translate (x) = f(g^{-1} x)."""
    G = f.datum.group
    if side == "right":
        return EquivFn(f.datum, {G.mul(y, g): v for y, v in f.values.items()})
    if side == "left":
        return EquivFn(f.datum, {G.mul(g, y): v for y, v in f.values.items()})
    raise HeckeError(f"side must be 'left' or 'right', not {side!r}")


def conjugate_by(f: EquivFn, g: int) -> EquivFn:
    """(g . f)(x) = f(g^{-1} x g)."""
    G = f.datum.group
    return EquivFn(f.datum, {G.conj(g, y): v for y, v in f.values.items()})


def dual(f: EquivFn) -> EquivFn:
    """f_dual(g) = conjugate(f(g^{-1})); satisfies (f*g)_dual = g_dual * f_dual."""
    G = f.datum.group
    return EquivFn(f.datum, {G.inv(y): v.conjugate() for y, v in f.values.items()})


def pairing(f: EquivFn, g: EquivFn) -> Cyclotomic:
    """<f, g> = sum_x f(x) conjugate(g(x))."""
    _same_datum(f, g)
    total = Cyclotomic.zero()
    for x in sorted(set(f.values) & set(g.values)):
        total = total + f.values[x] * g.values[x].conjugate()
    return total


# ---------------------------------------------------------------- membership


def is_in_eD(f: EquivFn) -> bool:
    """Left N-twisted equivariance, checked two ways that must agree."""
    d = f.datum
    G = d.group
    pointwise = True
    for g in f.support:
        fg = f.values[g]
        for n in d.N:
            if f(G.mul(n, g)) != root_of_unity(d.chi(n)) * fg:
                pointwise = False
                break
        if not pointwise:
            break
    absorbed = convolve(idempotent_e(d), f) == f
    if pointwise != absorbed:
        raise ModelViolationError(
            "N-equivariance and idempotent absorption disagree"
        )
    return pointwise


def _conjugation_invariant(f: EquivFn, generators) -> bool:
    G = f.datum.group
    return all(conjugate_by(f, h) == f for h in generators)


def is_in_eDH(f: EquivFn) -> bool:
    d = f.datum
    return is_in_eD(f) and _conjugation_invariant(f, d.group.subgroup_generators(d.H))


def is_in_eDG(f: EquivFn) -> bool:
    return is_in_eD(f) and _conjugation_invariant(f, f.datum.group.generating_set())


# ---------------------------------------------------------------- bases


def basis_eDH(datum: ModelDatum, coset: int) -> list[EquivFn]:
    """One function per supported orbit of the coset, |N|^{-1} at the base.

    The equivariance constraints only couple points inside one orbit, and on
    an orbit the solution space is one-dimensional when the chi factors are
    consistent and zero otherwise, so these functions are a basis of the
    constraint space on the coset.
    """
    n_cosets = len(datum.coset_quotient().cosets)
    if not (0 <= coset < n_cosets):
        raise HeckeError(f"coset index {coset} out of range ({n_cosets} cosets)")
    scale = Cyclotomic.from_rational(Fraction(1, len(datum.N)))
    out = []
    for o in datum.coset_orbits():
        if o.coset != coset or not o.supported:
            continue
        out.append(
            EquivFn(datum, {x: scale * root_of_unity(c) for x, c in o.factors.items()})
        )
    return out


def full_basis(datum: ModelDatum) -> list[EquivFn]:
    """Simples over every coset, in coset order."""
    n_cosets = len(datum.coset_quotient().cosets)
    out = []
    for c in range(n_cosets):
        out.extend(basis_eDH(datum, c))
    return out


def _orbit_coordinates(f: EquivFn) -> dict[int, Cyclotomic]:
    """Coordinates of f over the supported-orbit functions, by base value.

    Raises ModelViolationError if f is not in their span.
    """
    d = f.datum
    n_scale = _as_cyclo(len(d.N))
    inv_n = Cyclotomic.from_rational(Fraction(1, len(d.N)))
    coords = {}
    residual = dict(f.values)
    for o in d.coset_orbits():
        if not o.supported:
            continue
        c = f(o.base) * n_scale
        if c.is_zero():
            continue
        coords[o.base] = c
        for x, fac in o.factors.items():
            v = residual.get(x, Cyclotomic.zero()) - c * inv_n * root_of_unity(fac)
            if v.is_zero():
                residual.pop(x, None)
            else:
                residual[x] = v
    if residual:
        bad = min(residual)
        raise ModelViolationError(
            f"function does not decompose over the supported orbits; residue at "
            f"element {d.group.labels[bad]}"
        )
    return coords


def decompose(f: EquivFn, basis: list[EquivFn]) -> list[Cyclotomic]:
    """Exact coefficients of f over basis; error when f is not in the span."""
    if not basis:
        raise HeckeError("empty basis")
    target = _orbit_coordinates(f)
    cols = [_orbit_coordinates(b) for b in basis]
    rows = sorted(set(target) | {r for c in cols for r in c})
    # dense exact Gaussian elimination; sizes are tiny (<= number of orbits)
    mat = [[col.get(r, Cyclotomic.zero()) for col in cols] for r in rows]
    rhs = [target.get(r, Cyclotomic.zero()) for r in rows]
    n_rows, n_cols = len(mat), len(cols)
    piv_of_col: list[int | None] = [None] * n_cols
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if not mat[i][c].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        rhs[r], rhs[pivot] = rhs[pivot], rhs[r]
        inv = Cyclotomic.one() / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        rhs[r] = rhs[r] * inv
        for i in range(n_rows):
            if i != r and not mat[i][c].is_zero():
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
                rhs[i] = rhs[i] - factor * rhs[r]
        piv_of_col[c] = r
        r += 1
    for i in range(r, n_rows):
        if not rhs[i].is_zero():
            raise ModelViolationError("function is not in the span of the basis")
    coeffs = []
    for c in range(n_cols):
        if piv_of_col[c] is None:
            coeffs.append(Cyclotomic.zero())
        else:
            coeffs.append(rhs[piv_of_col[c]])
    check = None
    for b, c in zip(basis, coeffs):
        term = b.scale(c)
        check = term if check is None else check + term
    if check != f:
        raise ModelViolationError("decomposition failed to reconstruct the function")
    return coeffs


# ---------------------------------------------------------------- fusion table


@dataclass(frozen=True)
class FusionTable:
    """Integer structure constants with one scalar per product.

    basis[i] * basis[j] = scalars[i][j] * sum_k n[i, j, k] basis[k], exactly.
    """

    labels: tuple[str, ...]
    n: np.ndarray
    scalars: tuple[tuple[Cyclotomic, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        triples = [
            [i, j, k, int(self.n[i, j, k])]
            for i in range(self.rank)
            for j in range(self.rank)
            for k in range(self.rank)
            if self.n[i, j, k]
        ]
        return {
            "labels": list(self.labels),
            "N": triples,
            "scalars": [
                [i, j, self.scalars[i][j].to_json()]
                for i in range(self.rank)
                for j in range(self.rank)
            ],
        }


def _integerize(coeffs: list[Cyclotomic]) -> tuple[list[int], Cyclotomic]:
    """Split coefficients as scalar * nonnegative integers with gcd 1."""
    first = next((c for c in coeffs if not c.is_zero()), None)
    if first is None:
        return [0] * len(coeffs), Cyclotomic.one()
    ratios = []
    for c in coeffs:
        if c.is_zero():
            ratios.append(Fraction(0))
            continue
        q = (c / first).as_rational()
        if q is None or q <= 0:
            raise ModelViolationError(
                "product coefficients are not positive rational multiples of each "
                "other; no integer fusion table exists for this basis"
            )
        ratios.append(q)
    denom = lcm(*(r.denominator for r in ratios if r))
    ints = [int(r * denom) for r in ratios]
    common = gcd(*(i for i in ints if i))
    ints = [i // common for i in ints]
    scalar = first * Cyclotomic.from_rational(Fraction(common, denom))
    return ints, scalar


def fusion_table(basis: list[EquivFn]) -> FusionTable:
    """Structure constants of the convolution on the span of basis."""
    if not basis:
        raise HeckeError("empty basis")
    d = basis[0].datum
    lab = d.group.labels
    labels = tuple(lab[min(b.support)] for b in basis)
    r = len(basis)
    n = np.zeros((r, r, r), dtype=np.int64)
    scalars = []
    for i in range(r):
        row = []
        for j in range(r):
            coeffs = decompose(convolve(basis[i], basis[j]), basis)
            ints, scalar = _integerize(coeffs)
            n[i, j, :] = ints
            row.append(scalar)
        scalars.append(tuple(row))
    return FusionTable(labels=labels, n=n, scalars=tuple(scalars))


# ---------------------------------------------------------------- duality


def k_subgroup(datum: ModelDatum) -> tuple[int, ...]:
    """The subgroup of H supporting the invertible simples of the unit coset."""
    return datum.pairing_radical()


def k_coset_reps(datum: ModelDatum) -> list[int]:
    """Minimal representatives of the N-cosets inside the support subgroup."""
    return k_coset_reps_of(datum, k_subgroup(datum))


def k_sub_m(f: EquivFn) -> tuple[int, ...]:
    """{k in K : the right translate of f by k is a nonzero multiple of f}."""
    if f.is_zero():
        raise HeckeError("the zero function has no translation stabilizer")
    d = f.datum
    out = []
    base = min(f.support)
    for k in k_subgroup(d):
        moved = translate(f, k, "right")
        if set(moved.values) != set(f.values):
            continue
        ratio = moved.values[base] / f.values[base]
        if moved == f.scale(ratio):
            out.append(k)
    result = tuple(sorted(out))
    if not d.group.is_subgroup(result):
        raise ModelViolationError("translation stabilizer is not a subgroup")
    return result


def dual_convolve(f: EquivFn) -> dict[int, Cyclotomic]:
    """Coefficients c_k with dual(f) * f = sum c_k e^k over K-coset reps.

    Asserts the decomposition exists, that c_k is nonzero exactly for the
    N-cosets of the translation stabilizer of f, and that all nonzero
    coefficients are equal.
    """
    d = f.datum
    e = idempotent_e(d)
    reps = k_coset_reps(d)
    translates = [translate(e, k, "right") for k in reps]
    coeffs = decompose(convolve(dual(f), f), translates)
    stab = k_sub_m(f)
    stab_reps = set(k_coset_reps_of(d, stab))
    nonzero = {k for k, c in zip(reps, coeffs) if not c.is_zero()}
    if nonzero != stab_reps:
        raise ModelViolationError(
            "dual convolution support does not match the translation stabilizer"
        )
    values = [c for c in coeffs if not c.is_zero()]
    if not values or any(v != values[0] for v in values[1:]):
        raise ModelViolationError("dual convolution coefficients are not all equal")
    return {k: c for k, c in zip(reps, coeffs) if not c.is_zero()}


def k_coset_reps_of(datum: ModelDatum, subgroup) -> list[int]:
    G = datum.group
    seen = set()
    reps = []
    for k in subgroup:
        coset = frozenset(G.mul(n, k) for n in datum.N)
        if coset not in seen:
            seen.add(coset)
            reps.append(min(coset))
    return sorted(reps)


# ---------------------------------------------------------------- crossed braiding


def crossed_commute_check(f: EquivFn, g: EquivFn) -> bool:
    """f * g == (pullback of g by the coset representative of f) * f.

    f must be supported inside a single H-coset; g is expected to be
    H-conjugation equivariant for the identity to have a chance.
    """
    _same_datum(f, g)
    if f.is_zero():
        return True
    d = f.datum
    q = d.coset_quotient()
    cosets = {int(q.projection[x]) for x in f.support}
    if len(cosets) != 1:
        raise HeckeError("function is not supported in a single coset")
    gamma = q.representatives[cosets.pop()]
    return convolve(f, g) == convolve(conjugate_by(g, gamma), f)


# ---------------------------------------------------------------- invariants


@dataclass(frozen=True)
class GammaAction:
    """The measured action of G/H-conjugation on the simple basis.

    For coset representative gammas[c], conjugating basis[i] gives exactly
    scalars[c][i] * basis[perms[c][i]].
    """

    basis: tuple[EquivFn, ...]
    gammas: tuple[int, ...]
    perms: tuple[tuple[int, ...], ...]
    scalars: tuple[tuple[Cyclotomic, ...], ...]


def gamma_action(datum: ModelDatum, basis: list[EquivFn] | None = None) -> GammaAction:
    if basis is None:
        basis = full_basis(datum)
    by_support = {b.support: i for i, b in enumerate(basis)}
    q = datum.coset_quotient()
    gammas = tuple(int(r) for r in q.representatives)
    perms = []
    scalars = []
    for gamma in gammas:
        perm = []
        row = []
        for b in basis:
            moved = conjugate_by(b, gamma)
            j = by_support.get(moved.support)
            if j is None:
                raise ModelViolationError(
                    "conjugation does not permute the simple basis"
                )
            base = min(moved.support)
            ratio = moved.values[base] / basis[j].values[base]
            if moved != basis[j].scale(ratio):
                raise ModelViolationError(
                    "conjugation image is not proportional to a basis simple"
                )
            perm.append(j)
            row.append(ratio)
        perms.append(tuple(perm))
        scalars.append(tuple(row))
    act = GammaAction(
        basis=tuple(basis), gammas=gammas, perms=tuple(perms), scalars=tuple(scalars)
    )
    _check_action_is_representation(datum, act)
    return act


def _check_action_is_representation(datum: ModelDatum, act: GammaAction) -> None:
    """Composite conjugations must match the action of the product's coset."""
    qg = datum.coset_quotient().group
    for c1 in range(len(act.gammas)):
        for c2 in range(len(act.gammas)):
            c3 = qg.mul(c1, c2)
            for i in range(len(act.basis)):
                j = act.perms[c2][i]
                if act.perms[c3][i] != act.perms[c1][j]:
                    raise ModelViolationError("conjugation action fails to compose")
                combined = act.scalars[c2][i] * act.scalars[c1][j]
                if act.scalars[c3][i] != combined:
                    raise ModelViolationError(
                        "conjugation scalars fail the composition rule"
                    )


def gamma_invariants(
    datum: ModelDatum, basis: list[EquivFn] | None = None
) -> list[EquivFn]:
    """A basis of the G-conjugation invariant subspace of the simple span."""
    act = gamma_action(datum, basis)
    n = len(act.basis)
    seen = [False] * n
    out = []
    n_gamma = len(act.gammas)
    for start in range(n):
        if seen[start]:
            continue
        coeff: dict[int, Cyclotomic] = {start: Cyclotomic.one()}
        alive = True
        frontier = [start]
        while frontier:
            i = frontier.pop()
            seen[i] = True
            for c in range(n_gamma):
                j = act.perms[c][i]
                # invariance of sum a_i f_i forces a_j = a_i * scalar
                required = coeff[i] * act.scalars[c][i]
                if j in coeff:
                    if coeff[j] != required:
                        alive = False
                else:
                    coeff[j] = required
                    frontier.append(j)
        for i in coeff:
            seen[i] = True
        if not alive:
            continue
        total = None
        for i in sorted(coeff):
            term = act.basis[i].scale(coeff[i])
            total = term if total is None else total + term
        out.append(total)
    for f in out:
        if not is_in_eDG(f):
            raise ModelViolationError("claimed invariant is not G-invariant")
    _check_invariant_count(act, len(out))
    return out


def _check_invariant_count(act: GammaAction, count: int) -> None:
    """Character theory: dim of invariants = average trace of the action."""
    total = Cyclotomic.zero()
    for c in range(len(act.gammas)):
        for i in range(len(act.basis)):
            if act.perms[c][i] == i:
                total = total + act.scalars[c][i]
    avg = total * Cyclotomic.from_rational(Fraction(1, len(act.gammas)))
    value = avg.as_rational()
    if value is None or value != count:
        raise ModelViolationError(
            f"invariant count {count} disagrees with the trace average {value}"
        )


# ---------------------------------------------------------------- equivariantization


@dataclass(frozen=True)
class EquivariantizedTable:
    labels: tuple[str, ...]
    n: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        triples = [
            [i, j, k, int(self.n[i, j, k])]
            for i in range(self.rank)
            for j in range(self.rank)
            for k in range(self.rank)
            if self.n[i, j, k]
        ]
        return {"labels": list(self.labels), "N": triples}


def equivariantized_table(datum: ModelDatum) -> EquivariantizedTable:
    """Fusion table of the conjugation-equivariant simple objects.

    Simples are pairs (orbit of a basis simple under G/H, character of the
    orbit stabilizer); multiplicities come from averaging the permutation
    action over the quotient, with the measured fusion table underneath.
    """
    act = gamma_action(datum)
    table = fusion_table(list(act.basis))
    q = datum.coset_quotient()
    qg = q.group
    n_gamma = qg.order

    for c in range(n_gamma):
        for i in range(len(act.basis)):
            if act.perms[c][i] == i and not act.scalars[c][i].is_one():
                raise ModelViolationError(
                    "stabilizer acts with a nontrivial scalar; the plain "
                    "equivariantization table is not defined for this datum"
                )

    orbits = []
    seen = [False] * len(act.basis)
    for i in range(len(act.basis)):
        if seen[i]:
            continue
        orbit = {i}
        frontier = [i]
        while frontier:
            x = frontier.pop()
            for c in range(n_gamma):
                y = act.perms[c][x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        for x in orbit:
            seen[x] = True
        orbits.append(min(orbit))

    simples = []  # (basis index, stabilizer elements, character)
    labels = []
    for i in orbits:
        stab = tuple(c for c in range(n_gamma) if act.perms[c][i] == i)
        chars = AbelianStructure(qg, stab).characters()
        for t, psi in enumerate(chars):
            simples.append((i, stab, psi))
            labels.append(f"{table.labels[i]}|{t}")

    def transversal(stab: tuple[int, ...]) -> list[int]:
        reps = []
        covered = set()
        for c in range(n_gamma):
            coset = frozenset(qg.mul(c, s) for s in stab)
            if coset not in covered:
                covered.add(coset)
                reps.append(c)
        return reps

    r = len(simples)
    n = np.zeros((r, r, r), dtype=np.int64)
    inv_order = Cyclotomic.from_rational(Fraction(1, n_gamma))
    for a_idx, (i, stab_i, psi_i) in enumerate(simples):
        trans_i = transversal(stab_i)
        for b_idx, (j, stab_j, psi_j) in enumerate(simples):
            trans_j = transversal(stab_j)
            for c_idx, (k, stab_k, psi_k) in enumerate(simples):
                trans_k = transversal(stab_k)
                total = Cyclotomic.zero()
                for gamma in range(n_gamma):
                    for a in trans_i:
                        if act.perms[gamma][act.perms[a][i]] != act.perms[a][i]:
                            continue
                        for b in trans_j:
                            if act.perms[gamma][act.perms[b][j]] != act.perms[b][j]:
                                continue
                            for cc in trans_k:
                                if (
                                    act.perms[gamma][act.perms[cc][k]]
                                    != act.perms[cc][k]
                                ):
                                    continue
                                mult = int(
                                    table.n[
                                        act.perms[a][i],
                                        act.perms[b][j],
                                        act.perms[cc][k],
                                    ]
                                )
                                if not mult:
                                    continue
                                ga = qg.mul(qg.inv(a), qg.mul(gamma, a))
                                gb = qg.mul(qg.inv(b), qg.mul(gamma, b))
                                gc = qg.mul(qg.inv(cc), qg.mul(gamma, cc))
                                value = (
                                    psi_i.root(ga)
                                    * psi_j.root(gb)
                                    * psi_k.root(gc).conjugate()
                                )
                                total = total + value * _as_cyclo(mult)
                count = (total * inv_order).as_rational()
                if count is None or count.denominator != 1 or count < 0:
                    raise ModelViolationError(
                        "equivariant multiplicity is not a nonnegative integer"
                    )
                n[a_idx, b_idx, c_idx] = int(count)
    return EquivariantizedTable(labels=tuple(labels), n=n)
