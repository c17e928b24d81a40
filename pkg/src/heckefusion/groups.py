"""Finite groups as explicit multiplication tables.

Everything downstream works with a TableGroup: a dense n x n table of element
indices with a validated identity, inverses, and associativity.  Associativity
is verified with Light's test (all triples whose middle element lies in a
greedily grown generating set), which is equivalent to the full cubic scan for
a closed table with identity but far cheaper.

Subgroups are plain sorted tuples of element indices.  Quotients return a new
TableGroup plus the coset partition and projection.  AbelianStructure puts
invariant-factor coordinates on an abelian subgroup and enumerates its
character group exactly, with values in Q/Z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactnum import Cyclotomic, QmodZ, root_of_unity

__all__ = [
    "GroupTableError",
    "TableGroup",
    "Quotient",
    "quotient",
    "subgroup_table",
    "AbelianQuotientData",
    "abelian_quotient",
    "AbelianStructure",
    "MultChar",
    "cyclic_group",
    "product_group",
    "heisenberg_group",
    "heisenberg_index",
    "heisenberg_coords",
    "semidirect_product",
    "semidirect_from_automorphisms",
]

# dense tables get big fast; the cap keeps table memory in the hundreds of MB
MAX_ORDER = 10000


class GroupTableError(ValueError):
    """The provided table does not describe a group."""


class TableGroup:
    """A finite group given by its full multiplication table.

    table[a, b] is the index of the product a*b.  Constructors in this module
    always put the identity at index 0, but loaded tables may have it anywhere;
    it is located during validation.
    """

    def __init__(self, table, labels=None, check_associativity: bool = True,
                 designated_subgroups: dict | None = None):
        table = np.asarray(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise GroupTableError("multiplication table must be square")
        n = int(table.shape[0])
        if n == 0:
            raise GroupTableError("group must be nonempty")
        if n > MAX_ORDER:
            raise GroupTableError(f"order {n} exceeds the supported cap {MAX_ORDER}")
        if table.min() < 0 or table.max() >= n:
            raise GroupTableError("table entries out of range")
        self.table = table
        self.order = n
        self.labels = [str(i) for i in range(n)] if labels is None else [str(x) for x in labels]
        if len(self.labels) != n:
            raise GroupTableError("label count does not match order")
        self.identity = self._find_identity()
        self._inv = self._find_inverses()
        if check_associativity:
            self._check_associativity_light()
        self.designated_subgroups: dict[str, tuple[int, ...]] = {}
        for name, members in (designated_subgroups or {}).items():
            members = tuple(sorted(set(int(m) for m in members)))
            if not self.is_subgroup(members):
                raise GroupTableError(f"designated subset {name!r} is not a subgroup")
            self.designated_subgroups[name] = members
        self._rows: list[list[int]] | None = None

    # -- validation --------------------------------------------------------

    def _find_identity(self) -> int:
        rng = np.arange(self.order, dtype=np.int32)
        row_ok = (self.table == rng[None, :]).all(axis=1)
        col_ok = (self.table == rng[:, None]).all(axis=0)
        hits = np.flatnonzero(row_ok & col_ok)
        if hits.size != 1:
            raise GroupTableError("table has no two-sided identity")
        return int(hits[0])

    def _find_inverses(self) -> np.ndarray:
        e = self.identity
        inv = np.full(self.order, -1, dtype=np.int32)
        for a, b in np.argwhere(self.table == e):
            if inv[a] != -1 and inv[a] != b:
                raise GroupTableError(f"element {a} has multiple right inverses")
            inv[a] = b
        if (inv < 0).any():
            missing = int(np.flatnonzero(inv < 0)[0])
            raise GroupTableError(f"element {missing} has no right inverse")
        if not (self.table[inv, np.arange(self.order)] == e).all():
            bad = int(np.flatnonzero(self.table[inv, np.arange(self.order)] != e)[0])
            raise GroupTableError(f"element {bad}: right inverse is not a left inverse")
        return inv

    def generating_set(self) -> list[int]:
        """Greedy generating set: repeatedly adjoin the smallest missing index."""
        gens: list[int] = []
        closed = np.array([self.identity], dtype=np.int64)
        while closed.size < self.order:
            mask = np.ones(self.order, dtype=bool)
            mask[closed] = False
            g = int(np.flatnonzero(mask)[0])
            gens.append(g)
            closed = self._closure_indices(np.append(closed, g))
        return gens

    def _closure_indices(self, seed: np.ndarray) -> np.ndarray:
        cur = np.unique(seed)
        while True:
            prods = np.unique(self.table[np.ix_(cur, cur)])
            merged = np.union1d(cur, prods)
            if merged.size == cur.size:
                return merged
            cur = merged

    def _check_associativity_light(self) -> None:
        # a*(g*b) == (a*g)*b for all a, b and g in a generating set suffices:
        # elements satisfying it for all a, b are closed under products, and
        # the closure of the generators is everything.
        for g in self.generating_set():
            left = self.table[:, self.table[g, :]]
            right = self.table[self.table[:, g], :]
            if not np.array_equal(left, right):
                a, b = (int(v) for v in np.argwhere(left != right)[0])
                raise GroupTableError(
                    f"associativity fails: ({self.labels[a]}*{self.labels[g]})*{self.labels[b]}"
                    f" != {self.labels[a]}*({self.labels[g]}*{self.labels[b]})"
                )

    # -- basic operations ----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}"""
        return int(self.table[self.table[g, x], self._inv[g]])

    def commutator(self, a: int, b: int) -> int:
        """a b a^{-1} b^{-1}"""
        t = self.table
        return int(t[t[t[a, b], self._inv[a]], self._inv[b]])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        while k:
            if k & 1:
                out = int(self.table[out, a])
            a = int(self.table[a, a])
            k >>= 1
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def rows(self) -> list[list[int]]:
        """Plain python rows of the table, cached; faster in tight loops."""
        if self._rows is None:
            self._rows = self.table.tolist()
        return self._rows

    def inverse_list(self) -> list[int]:
        return self._inv.tolist()

    # -- subsets ----------------------------------------------------------

    def center(self) -> tuple[int, ...]:
        central = (self.table == self.table.T).all(axis=1)
        return tuple(int(i) for i in np.flatnonzero(central))

    def subgroup_closure(self, gens) -> tuple[int, ...]:
        seed = np.array(sorted(set(gens)) + [self.identity], dtype=np.int64)
        return tuple(int(i) for i in self._closure_indices(seed))

    def subgroup_generators(self, elems) -> list[int]:
        """Greedy generating set for a subgroup given by its members."""
        members = np.array(sorted(set(elems)), dtype=np.int64)
        gens: list[int] = []
        closed = np.array([self.identity], dtype=np.int64)
        while closed.size < members.size:
            missing = np.setdiff1d(members, closed)
            g = int(missing[0])
            gens.append(g)
            closed = self._closure_indices(np.append(closed, g))
        if not np.array_equal(closed, members):
            raise GroupTableError("elements do not form a subgroup")
        return gens

    def is_subgroup(self, elems) -> bool:
        s = sorted(set(elems))
        if not s or self.identity not in s:
            return False
        arr = np.array(s, dtype=np.int64)
        return bool(np.isin(self.table[np.ix_(arr, arr)], arr).all())

    def is_normal(self, elems) -> bool:
        if not self.is_subgroup(elems):
            return False
        s = np.array(sorted(set(elems)), dtype=np.int64)
        gs = self.table[:, s]
        conj = self.table[gs, self._inv[:, None]]
        return bool(np.isin(conj, s).all())

    def commutator_subgroup(self, a_elems, b_elems) -> tuple[int, ...]:
        """Subgroup generated by commutators [a, b] = a b a^{-1} b^{-1}."""
        comms = {self.commutator(a, b) for a in a_elems for b in b_elems}
        return self.subgroup_closure(comms)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "mul": self.table.tolist(),
            "designated_subgroups": {
                k: list(v) for k, v in sorted(self.designated_subgroups.items())
            },
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict, check_associativity: bool = True) -> "TableGroup":
        return cls(
            data["mul"],
            labels=data.get("labels"),
            check_associativity=check_associativity,
            designated_subgroups=data.get("designated_subgroups"),
        )

    def __repr__(self) -> str:
        return f"TableGroup(order={self.order})"


@dataclass(frozen=True)
class Quotient:
    """A quotient group together with its coset partition.

    Cosets are listed in increasing order of their smallest member, so the
    identity coset comes first whenever the identity has index 0.
    """

    group: TableGroup
    cosets: tuple[tuple[int, ...], ...]
    projection: np.ndarray
    representatives: tuple[int, ...]


def quotient(G: TableGroup, normal_elems) -> Quotient:
    ns = sorted(set(normal_elems))
    if not G.is_normal(ns):
        raise GroupTableError("quotient requires a normal subgroup")
    rows = G.rows()
    proj = np.full(G.order, -1, dtype=np.int32)
    cosets: list[tuple[int, ...]] = []
    for g in range(G.order):
        if proj[g] >= 0:
            continue
        row = rows[g]
        members = sorted(row[s] for s in ns)
        idx = len(cosets)
        for m in members:
            proj[m] = idx
        cosets.append(tuple(members))
    reps = tuple(c[0] for c in cosets)
    reps_arr = np.array(reps, dtype=np.int64)
    q_table = proj[G.table[np.ix_(reps_arr, reps_arr)]]
    labels = [f"[{G.labels[r]}]" for r in reps]
    Q = TableGroup(q_table, labels=labels)
    return Quotient(group=Q, cosets=tuple(cosets), projection=proj, representatives=reps)


def subgroup_table(G: TableGroup, elems) -> tuple[TableGroup, list[int]]:
    """A subgroup as its own TableGroup, plus the index map back into G."""
    members = sorted(set(elems))
    pos = {g: i for i, g in enumerate(members)}
    arr = np.array(members, dtype=np.int64)
    sub = G.table[np.ix_(arr, arr)]
    if not np.isin(sub, arr).all():
        raise GroupTableError("elements do not form a subgroup")
    local = np.vectorize(pos.__getitem__, otypes=[np.int32])(sub)
    return (
        TableGroup(local, labels=[G.labels[g] for g in members], check_associativity=False),
        members,
    )


@dataclass(frozen=True)
class AbelianQuotientData:
    """The abelian quotient H/N of subgroups of an ambient group.

    Cosets are given in ambient indices; `structure` carries invariant-factor
    coordinates and the character group of the quotient.
    """

    group: TableGroup
    cosets: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    structure: "AbelianStructure"

    @property
    def size(self) -> int:
        return self.group.order

    def coset_index_of(self, g: int) -> int:
        for i, c in enumerate(self.cosets):
            if g in c:
                return i
        raise KeyError(f"element {g} not in the subgroup underlying the quotient")

    def characters(self) -> list["MultChar"]:
        return self.structure.characters()


def abelian_quotient(G: TableGroup, h_elems, n_elems) -> AbelianQuotientData:
    """H/N with invariant factors and characters; errors if not abelian."""
    sub, back = subgroup_table(G, h_elems)
    back_pos = {g: i for i, g in enumerate(back)}
    n_local = sorted(back_pos[x] for x in set(n_elems))
    q = quotient(sub, n_local)
    structure = AbelianStructure(q.group, range(q.group.order))
    cosets = tuple(tuple(back[i] for i in c) for c in q.cosets)
    reps = tuple(back[r] for r in q.representatives)
    return AbelianQuotientData(group=q.group, cosets=cosets, representatives=reps,
                               structure=structure)


def _abelian_generator_orders(G: TableGroup) -> list[tuple[int, int]]:
    """Generators realizing G as a direct product of cyclic groups.

    Returns [(element, order), ...] with each order dividing the previous one.
    Assumes G abelian (checked by the caller).
    """
    if G.order == 1:
        return []
    orders = [G.element_order(a) for a in range(G.order)]
    d1 = max(orders)
    g1 = orders.index(d1)
    cyc = G.subgroup_closure([g1])
    q = quotient(G, cyc)
    log: dict[int, int] = {}
    p = G.identity
    for k in range(d1):
        log[p] = k
        p = G.mul(p, g1)
    out = [(g1, d1)]
    for qgen, d in _abelian_generator_orders(q.group):
        h = min(q.cosets[qgen])
        s = log[G.power(h, d)]
        if s:
            # shift the lift by a power of g1 so its order drops to d
            if s % d:
                raise GroupTableError("invariant-factor lift failed; group not abelian?")
            t = (-(s // d)) % (d1 // d)
            h = G.mul(h, G.power(g1, t))
        if G.power(h, d) != G.identity:
            raise GroupTableError("invariant-factor lift failed; group not abelian?")
        out.append((h, d))
    return out


class AbelianStructure:
    """Invariant-factor coordinates on an abelian subgroup of a TableGroup.

    Exposes generators g_1, ..., g_r with orders d_1 | d_2 | ... | d_r such
    that every element factors uniquely as a product of generator powers, a
    two-way map between elements and exponent tuples, and the full character
    group in a deterministic (lexicographic) order.
    """

    def __init__(self, group: TableGroup, elements):
        elems = tuple(sorted(set(elements)))
        if not group.is_subgroup(elems):
            raise GroupTableError("elements do not form a subgroup")
        self.group = group
        self.elements = elems
        pos = {g: i for i, g in enumerate(elems)}
        arr = np.array(elems, dtype=np.int64)
        sub_table = group.table[np.ix_(arr, arr)]
        if not np.array_equal(sub_table, sub_table.T):
            raise GroupTableError("subgroup is not abelian")
        local = np.vectorize(pos.__getitem__, otypes=[np.int32])(sub_table)
        sub = TableGroup(local, labels=[group.labels[g] for g in elems], check_associativity=False)
        pairs = _abelian_generator_orders(sub)
        pairs.reverse()  # ascending divisibility: d_1 | d_2 | ... | d_r
        self.invariant_factors = tuple(d for _, d in pairs)
        self.generators = tuple(elems[g] for g, _ in pairs)
        exps_of: dict[int, tuple[int, ...]] = {}
        for exps in itertools.product(*[range(d) for d in self.invariant_factors]):
            g = group.identity
            for gen, e in zip(self.generators, exps):
                g = group.mul(g, group.power(gen, e))
            if g in exps_of:
                raise GroupTableError("generator factorization is not unique")
            exps_of[g] = exps
        if len(exps_of) != len(elems) or set(exps_of) != set(elems):
            raise GroupTableError("generators do not span the subgroup")
        self._exps_of = exps_of

    @property
    def size(self) -> int:
        return len(self.elements)

    def exponents(self, g: int) -> tuple[int, ...]:
        return self._exps_of[g]

    def element(self, exps) -> int:
        g = self.group.identity
        for gen, d, e in zip(self.generators, self.invariant_factors, exps):
            g = self.group.mul(g, self.group.power(gen, e % d))
        return g

    def character(self, char_exps) -> "MultChar":
        """The character sending generator g_i to the class char_exps[i] / d_i."""
        ce = tuple(char_exps)
        if len(ce) != len(self.invariant_factors):
            raise ValueError("character exponent count does not match generator count")
        values = {}
        for g, exps in self._exps_of.items():
            values[g] = QmodZ(
                sum(Fraction(a * e, d) for a, e, d in zip(ce, exps, self.invariant_factors))
            )
        return MultChar(self.group, self.elements, values)

    def characters(self) -> list["MultChar"]:
        """All characters, ordered lexicographically by exponent tuple."""
        return [
            self.character(ce)
            for ce in itertools.product(*[range(d) for d in self.invariant_factors])
        ]


class MultChar:
    """A homomorphism from a subgroup of a TableGroup to Q/Z, written additively."""

    def __init__(self, group: TableGroup, elements, values: dict[int, QmodZ], check: bool = True):
        self.group = group
        self.elements = tuple(sorted(set(elements)))
        self.values = {g: QmodZ(v) for g, v in values.items()}
        if check:
            if set(self.values) != set(self.elements):
                raise ValueError("character values must cover exactly the domain")
            if not group.is_subgroup(self.elements):
                raise ValueError("character domain is not a subgroup")
            for a in self.elements:
                for b in self.elements:
                    if self.values[group.mul(a, b)] != self.values[a] + self.values[b]:
                        raise ValueError(
                            f"not multiplicative at ({group.labels[a]}, {group.labels[b]})"
                        )

    def __call__(self, g: int) -> QmodZ:
        return self.values[g]

    def root(self, g: int) -> Cyclotomic:
        """The value as an exact root of unity."""
        return root_of_unity(self.values[g])

    def is_trivial(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def key(self) -> tuple:
        """Hashable canonical form (domain with values), for dedup and sorting."""
        return tuple((g, str(self.values[g])) for g in self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultChar):
            return NotImplemented
        return self.elements == other.elements and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        vals = ", ".join(f"{self.group.labels[g]}:{self.values[g]}" for g in self.elements[:6])
        more = ", ..." if len(self.elements) > 6 else ""
        return f"MultChar({vals}{more})"


# -- constructors ------------------------------------------------------------


def cyclic_group(n: int) -> TableGroup:
    if n < 1:
        raise ValueError("order must be positive")
    rng = np.arange(n, dtype=np.int32)
    table = (rng[:, None] + rng[None, :]) % n
    return TableGroup(table, labels=[str(i) for i in range(n)])


def product_group(A: TableGroup, B: TableGroup) -> TableGroup:
    """Direct product; element (a, b) has index a*|B| + b."""
    nb = B.order
    table = (
        A.table[:, None, :, None].astype(np.int64) * nb + B.table[None, :, None, :]
    ).reshape(A.order * nb, A.order * nb)
    labels = [f"{la}|{lb}" for la in A.labels for lb in B.labels]
    return TableGroup(table, labels=labels)


def heisenberg_index(m: int, x: int, y: int, z: int) -> int:
    return (x % m) * m * m + (y % m) * m + (z % m)


def heisenberg_coords(m: int, i: int) -> tuple[int, int, int]:
    return (i // (m * m), (i // m) % m, i % m)


def _is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
        p += 1
    return True  # m itself is prime


def heisenberg_group(m: int) -> TableGroup:
    """Upper unitriangular 3x3 matrices over Z/m, for a prime power m.

    Element (x, y, z) has index x*m^2 + y*m + z and multiplication
    (x, y, z)*(x', y', z') = (x+x', y+y', z+z'+x*y').  The center
    {(0, 0, z)} is designated as "center".
    """
    if not _is_prime_power(m):
        raise ValueError(f"modulus must be a prime power, got {m}")
    n = m * m * m
    idx = np.arange(n, dtype=np.int64)
    x, y, z = idx // (m * m), (idx // m) % m, idx % m
    x1, y1 = x[:, None], y[:, None]
    z1 = z[:, None]
    x2, y2, z2 = x[None, :], y[None, :], z[None, :]
    table = ((x1 + x2) % m) * m * m + ((y1 + y2) % m) * m + ((z1 + z2 + x1 * y2) % m)
    labels = [f"{a},{b},{c}" for a, b, c in zip(x.tolist(), y.tolist(), z.tolist())]
    return TableGroup(
        table, labels=labels, designated_subgroups={"center": tuple(range(m))}
    )


def semidirect_product(base: TableGroup, twist: TableGroup, action) -> TableGroup:
    """Semidirect product of `base` by `twist` acting through `action`.

    action[t] is the permutation of base indices giving the automorphism for
    twist element t.  Element (t, h) has index t*|base| + h and multiplication
    (t, h)*(t', h') = (t*t', h * action[t](h')).  The action must send the
    twist identity to the identity permutation and be a homomorphism into the
    automorphism group; both are checked.
    """
    n, k = base.order, twist.order
    perms = np.array([np.asarray(action[t], dtype=np.int64) for t in range(k)])
    if perms.shape != (k, n):
        raise GroupTableError("action must give one base permutation per twist element")
    if not np.array_equal(perms[twist.identity], np.arange(n)):
        raise GroupTableError("twist identity must act trivially")
    for t in range(k):
        p = perms[t]
        if not np.array_equal(np.sort(p), np.arange(n)):
            raise GroupTableError(f"action of twist element {t} is not a permutation")
        if not np.array_equal(p[base.table], base.table[np.ix_(p, p)]):
            raise GroupTableError(f"action of twist element {t} is not an automorphism")
    for t in range(k):
        for u in range(k):
            if not np.array_equal(perms[twist.mul(t, u)], perms[t][perms[u]]):
                raise GroupTableError("action is not a homomorphism from the twist group")
    table = np.empty((k * n, k * n), dtype=np.int64)
    for t in range(k):
        for u in range(k):
            block = base.table[:, perms[t]]
            table[t * n : (t + 1) * n, u * n : (u + 1) * n] = twist.mul(t, u) * n + block
    labels = [f"{tl}|{bl}" for tl in twist.labels for bl in base.labels]
    shift = twist.identity * n
    designated = {"base": tuple(range(shift, shift + n))}
    for name, members in base.designated_subgroups.items():
        if name != "base":
            designated[name] = tuple(shift + m for m in members)
    return TableGroup(table, labels=labels, designated_subgroups=designated)


def semidirect_from_automorphisms(base: TableGroup, automorphisms) -> TableGroup:
    """Semidirect product of `base` by an explicit list of automorphisms.

    The list must be closed under composition (it then forms a group and
    contains the identity automatically).  The identity permutation is moved
    to position 0 and the rest keep their given order, so the copy of `base`
    sits at indices 0..|base|-1 and is designated as "base"; designated
    subgroups of `base` (such as "center") carry over by index.
    """
    perms = [tuple(int(v) for v in p) for p in automorphisms]
    if not perms:
        raise GroupTableError("need at least one automorphism")
    n = base.order
    ident = tuple(range(n))
    seen = set(perms)
    if len(seen) != len(perms):
        raise GroupTableError("duplicate automorphisms in the list")
    for p in perms:
        for q in perms:
            comp = tuple(p[q[i]] for i in range(n))
            if comp not in seen:
                raise GroupTableError("automorphism list is not closed under composition")
    if ident in seen:
        perms.remove(ident)
    perms.insert(0, ident)
    pos = {p: i for i, p in enumerate(perms)}
    k = len(perms)
    twist_table = [
        [pos[tuple(perms[t][perms[u][i]] for i in range(n))] for u in range(k)]
        for t in range(k)
    ]
    twist = TableGroup(twist_table, labels=[f"s{t}" for t in range(k)])
    return semidirect_product(base, twist, perms)
