"""Finite abelian groups with a quadratic form and their modular data.

A metric group is a finite abelian group K, presented by invariant factors,
together with a symmetric pairing B and a twist theta valued in Q/Z.  The
polarization identity theta(x+y) - theta(x) - theta(y) = B(x, y) ties the
two; the S and T matrices built from them satisfy the modular identities
exactly in the cyclotomic field whenever B is non-degenerate.

Convention: the S matrix entry at (x, y) is the root of unity of -B(x, y).
With the opposite sign the anomaly identity (S T)^3 = gauss * S^2 acquires
a spurious inversion permutation, so the minus sign is load-bearing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

from .exactnum import Cyclotomic, QmodZ, root_of_unity

__all__ = [
    "MetricError",
    "Verdict",
    "MetricGroup",
    "ModularData",
    "validate_polarization",
    "canonical_theta_odd",
    "gauss_sum",
    "modular_data",
    "check_modularity",
    "verlinde_check",
    "ribbon_check",
    "b_radical",
]


class MetricError(ValueError):
    """Malformed metric-group data."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive identity check."""

    ok: bool
    witness: dict | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _passed(detail: str = "") -> Verdict:
    return Verdict(ok=True, detail=detail)


def _failed(witness: dict, detail: str) -> Verdict:
    return Verdict(ok=False, witness=witness, detail=detail)


Element = tuple[int, ...]


class MetricGroup:
    """K = prod Z/d_i with a pairing B and a twist theta, both into Q/Z.

    Elements are coordinate tuples in lexicographic order.  The constructor
    only checks shapes; the mathematical identities are the business of
    validate_polarization and ribbon_check, so deliberately broken inputs
    can be constructed and diagnosed.
    """

    def __init__(
        self,
        invariant_factors,
        b: dict[tuple[Element, Element], QmodZ],
        theta: dict[Element, QmodZ],
    ):
        factors = tuple(int(d) for d in invariant_factors)
        if any(d <= 0 for d in factors):
            raise MetricError("invariant factors must be positive")
        self.invariant_factors = factors
        self.elements: tuple[Element, ...] = tuple(
            itertools.product(*(range(d) for d in factors))
        )
        elems = set(self.elements)
        if set(theta) != elems:
            raise MetricError("theta must be defined exactly on the group")
        if set(b) != {(x, y) for x in elems for y in elems}:
            raise MetricError("pairing must be defined exactly on all pairs")
        self.theta_map = {x: QmodZ(v) for x, v in theta.items()}
        self.b_map = {k: QmodZ(v) for k, v in b.items()}

    # -- group structure ------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.invariant_factors) if self.invariant_factors else 1

    @property
    def exponent(self) -> int:
        return lcm(*self.invariant_factors) if self.invariant_factors else 1

    @property
    def zero(self) -> Element:
        return tuple(0 for _ in self.invariant_factors)

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def label(self, x: Element) -> str:
        return ",".join(str(a) for a in x) if x else "0"

    # -- forms ------------------------------------------------------------

    def b(self, x: Element, y: Element) -> QmodZ:
        return self.b_map[(x, y)]

    def theta(self, x: Element) -> QmodZ:
        return self.theta_map[x]

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_gram(cls, invariant_factors, gram, theta=None) -> "MetricGroup":
        """B from a generator Gram matrix; theta defaults to the odd form."""
        factors = tuple(int(d) for d in invariant_factors)
        n = len(factors)
        rows = [[QmodZ(v) for v in row] for row in gram]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MetricError("Gram matrix shape must match the factor count")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise MetricError("Gram matrix must be symmetric")
                if not (factors[i] * rows[i][j]).is_zero():
                    raise MetricError(
                        f"Gram entry ({i},{j}) is not killed by the factor order"
                    )
        elements = tuple(itertools.product(*(range(d) for d in factors)))
        b = {}
        for x in elements:
            for y in elements:
                total = QmodZ(0)
                for i in range(n):
                    for j in range(n):
                        total = total + (x[i] * y[j]) * rows[i][j]
                b[(x, y)] = total
        if theta is None:
            return canonical_theta_odd(factors, b)
        return cls(factors, b, dict(theta))

    @classmethod
    def from_theta(cls, invariant_factors, theta) -> "MetricGroup":
        """Derive B by polarization from an explicit twist."""
        factors = tuple(int(d) for d in invariant_factors)
        elements = tuple(itertools.product(*(range(d) for d in factors)))
        theta = {x: QmodZ(v) for x, v in theta.items()}
        if set(theta) != set(elements):
            raise MetricError("theta must be defined exactly on the group")

        def add(x, y):
            return tuple((a + b) % d for a, b, d in zip(x, y, factors))

        b = {
            (x, y): theta[add(x, y)] - theta[x] - theta[y]
            for x in elements
            for y in elements
        }
        return cls(factors, b, theta)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "B_matrix_of_QmodZ": [
                [str(self.b_map[(x, y)]) for y in self.elements]
                for x in self.elements
            ],
            "theta_vector_of_QmodZ": [str(self.theta_map[x]) for x in self.elements],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MetricGroup":
        factors = tuple(int(d) for d in data["invariant_factors"])
        elements = tuple(itertools.product(*(range(d) for d in factors)))
        matrix = data["B_matrix_of_QmodZ"]
        vector = data["theta_vector_of_QmodZ"]
        if len(matrix) != len(elements) or len(vector) != len(elements):
            raise MetricError("serialized shapes do not match the factors")
        b = {}
        for i, x in enumerate(elements):
            if len(matrix[i]) != len(elements):
                raise MetricError("serialized shapes do not match the factors")
            for j, y in enumerate(elements):
                b[(x, y)] = QmodZ(matrix[i][j])
        theta = {x: QmodZ(vector[i]) for i, x in enumerate(elements)}
        return cls(factors, b, theta)


# ------------------------------------------------------------------ checks


def validate_polarization(m: MetricGroup) -> Verdict:
    """theta quadratic with polarization exactly B, checked on all pairs."""
    zero = m.zero
    if not m.theta(zero).is_zero():
        return _failed({"element": m.label(zero)}, "theta(0) != 0")
    for x in m.elements:
        if m.theta(m.neg(x)) != m.theta(x):
            return _failed(
                {"element": m.label(x)}, "theta is not invariant under inversion"
            )
    for x in m.elements:
        for y in m.elements:
            if m.theta(m.add(x, y)) - m.theta(x) - m.theta(y) != m.b(x, y):
                return _failed(
                    {"x": m.label(x), "y": m.label(y)},
                    "polarization identity fails",
                )
    # with the polarization identity in hand, symmetry and biadditivity of B
    # are forced; assert them anyway since B is stored separately
    for x in m.elements:
        for y in m.elements:
            if m.b(x, y) != m.b(y, x):
                return _failed(
                    {"x": m.label(x), "y": m.label(y)}, "pairing is not symmetric"
                )
            for z in m.elements:
                if m.b(m.add(x, y), z) != m.b(x, z) + m.b(y, z):
                    return _failed(
                        {"x": m.label(x), "y": m.label(y), "z": m.label(z)},
                        "pairing is not biadditive",
                    )
    return _passed(f"all {m.order}^2 pairs checked")


def canonical_theta_odd(invariant_factors, b) -> MetricGroup:
    """theta(x) = ((m+1)/2) B(x, x) for odd exponent m; refuses even m.

    On even-exponent groups a pairing has several inequivalent quadratic
    refinements, so no canonical choice exists and the caller must supply
    theta explicitly.
    """
    factors = tuple(int(d) for d in invariant_factors)
    exponent = lcm(*factors) if factors else 1
    if exponent % 2 == 0:
        raise MetricError(
            "exponent is even; there is no canonical twist, pass theta explicitly"
        )
    half = (exponent + 1) // 2
    elements = tuple(itertools.product(*(range(d) for d in factors)))
    theta = {x: half * b[(x, x)] for x in elements}
    return MetricGroup(factors, b, theta)


def gauss_sum(m: MetricGroup) -> Cyclotomic:
    total = Cyclotomic.zero()
    for x in m.elements:
        total = total + root_of_unity(m.theta(x))
    return total


def b_radical(m: MetricGroup) -> tuple[Element, ...]:
    """Elements pairing trivially with everything; (0,) iff B non-degenerate."""
    return tuple(
        x for x in m.elements if all(m.b(x, y).is_zero() for y in m.elements)
    )


# ------------------------------------------------------------------ modular data


@dataclass(frozen=True)
class ModularData:
    """Unnormalized S and T matrices over the exact cyclotomic field.

    s_tilde[i][j] is the root of unity of -B(x_i, x_j); the honest S matrix
    is s_tilde / sqrt(scale), kept symbolic to stay inside the field.
    """

    labels: tuple[str, ...]
    elements: tuple[Element, ...]
    factors: tuple[int, ...]
    t_diagonal: tuple[Cyclotomic, ...]
    s_tilde: tuple[tuple[Cyclotomic, ...], ...]
    scale: int

    @property
    def rank(self) -> int:
        return len(self.labels)

    def gauss(self) -> Cyclotomic:
        total = Cyclotomic.zero()
        for t in self.t_diagonal:
            total = total + t
        return total

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "scale": self.scale,
            "T": [t.to_json() for t in self.t_diagonal],
            "S_tilde": [[v.to_json() for v in row] for row in self.s_tilde],
        }


def modular_data(m: MetricGroup) -> ModularData:
    s = tuple(
        tuple(root_of_unity(-m.b(x, y)) for y in m.elements) for x in m.elements
    )
    return ModularData(
        labels=tuple(m.label(x) for x in m.elements),
        elements=m.elements,
        factors=m.invariant_factors,
        t_diagonal=tuple(root_of_unity(m.theta(x)) for x in m.elements),
        s_tilde=s,
        scale=m.order,
    )


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(n)), Cyclotomic.zero())
            for j in range(n)
        )
        for i in range(n)
    )


def check_modularity(d: ModularData) -> Verdict:
    """S unitarity against scale, then the anomaly cube, both exactly."""
    n = d.rank
    s = d.s_tilde
    conj_t = tuple(
        tuple(s[j][i].conjugate() for j in range(n)) for i in range(n)
    )
    product = _mat_mul(s, conj_t)
    scale = Cyclotomic.from_rational(Fraction(d.scale))
    for i in range(n):
        for j in range(n):
            expected = scale if i == j else Cyclotomic.zero()
            if product[i][j] != expected:
                return _failed(
                    {"row": d.labels[i], "col": d.labels[j]},
                    "S is not unitary against the scale; the pairing is degenerate",
                )
    st = tuple(
        tuple(s[i][j] * d.t_diagonal[j] for j in range(n)) for i in range(n)
    )
    cube = _mat_mul(_mat_mul(st, st), st)
    g = d.gauss()
    s2 = _mat_mul(s, s)
    for i in range(n):
        for j in range(n):
            if cube[i][j] != g * s2[i][j]:
                return _failed(
                    {"row": d.labels[i], "col": d.labels[j]},
                    "anomaly identity (S T)^3 = gauss * S^2 fails",
                )
    return _passed("unitarity and anomaly identities hold exactly")


def verlinde_check(d: ModularData) -> Verdict:
    """The S-matrix fusion expression must recover the group law delta."""
    n = d.rank
    s = d.s_tilde
    inv_scale = Cyclotomic.from_rational(Fraction(1, d.scale))
    index = {x: i for i, x in enumerate(d.elements)}

    def add(x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, d.factors))

    for ix, x in enumerate(d.elements):
        for iy, y in enumerate(d.elements):
            target = index[add(x, y)]
            for iz in range(n):
                total = Cyclotomic.zero()
                for w in range(n):
                    total = total + (
                        s[ix][w] * s[iy][w] * s[iz][w].conjugate() / s[0][w]
                    )
                value = total * inv_scale
                expected = (
                    Cyclotomic.one() if iz == target else Cyclotomic.zero()
                )
                if value != expected:
                    return _failed(
                        {
                            "x": d.labels[ix],
                            "y": d.labels[iy],
                            "z": d.labels[iz],
                        },
                        "Verlinde expression disagrees with the group law",
                    )
    return _passed(f"all {n}^3 triples recover the group law")


def ribbon_check(m: MetricGroup) -> Verdict:
    """Twist symmetry under duality and the balancing identity."""
    for x in m.elements:
        if m.theta(m.neg(x)) != m.theta(x):
            return _failed(
                {"element": m.label(x)},
                "twist differs on an element and its inverse",
            )
    for x in m.elements:
        for y in m.elements:
            if m.theta(m.add(x, y)) != m.theta(x) + m.theta(y) + m.b(x, y):
                return _failed(
                    {"x": m.label(x), "y": m.label(y)},
                    "balancing identity fails",
                )
    return _passed("twist/duality and balancing identities hold")
