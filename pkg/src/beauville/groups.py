"""Finite groups as dense Cayley tables, and the basic algorithms on them."""

from __future__ import annotations

import logging
from collections import deque
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .elements import ElementSet
from .errors import OrderCapExceeded

log = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 5000
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 200
ASSOCIATIVITY_SAMPLES = 10_000


class ConjugacyClass(NamedTuple):
    rep: int
    elements: ElementSet


class GroupTable:
    """A finite group on element indices ``0..n-1`` with identity ``0``.

    ``mult[a, b]`` is the index of ``a*b`` and ``inv[a]`` the index of the
    inverse of ``a``.  Tables built by :func:`table_from_actions` also carry
    a breadth-first spanning tree (``parent``, ``parent_gen``) such that
    ``mult[parent[b], generators[parent_gen[b]]] == b``; homomorphisms and
    word rendering use it.

    Instances are immutable: the arrays are flagged read-only.
    """

    def __init__(
        self,
        mult: np.ndarray,
        generators: Sequence[int],
        label: str = "",
        generator_names: Sequence[str] | None = None,
        parent: np.ndarray | None = None,
        parent_gen: np.ndarray | None = None,
        coords: np.ndarray | None = None,
    ):
        mult = np.ascontiguousarray(mult, dtype=np.int32)
        n = mult.shape[0]
        if mult.shape != (n, n) or n < 1:
            raise ValueError("mult must be a non-empty square table")
        inv = np.empty(n, dtype=np.int32)
        rows, cols = np.nonzero(mult == 0)
        if len(rows) != n:
            raise ValueError("identity 0 must appear exactly once per row")
        inv[rows] = cols
        for arr in (mult, inv):
            arr.flags.writeable = False
        self.mult = mult
        self.inv = inv
        self.order = n
        self.identity = 0
        self.generators = tuple(int(g) for g in generators)
        if generator_names is None:
            generator_names = [f"g{i + 1}" for i in range(len(self.generators))]
        if len(generator_names) != len(self.generators):
            raise ValueError("one name per generator required")
        self.generator_names = tuple(generator_names)
        self.label = label
        for name, arr in (("parent", parent), ("parent_gen", parent_gen), ("coords", coords)):
            if arr is not None:
                arr = np.array(arr, dtype=np.int64)
                arr.flags.writeable = False
            setattr(self, name, arr)

    def __repr__(self):
        return f"GroupTable(order={self.order}, label={self.label!r})"

    def __len__(self):
        return self.order

    def mul(self, *elements: int) -> int:
        out = 0
        for e in elements:
            out = int(self.mult[out, e])
        return out

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        out, base = 0, int(x)
        while k:
            if k & 1:
                out = int(self.mult[out, base])
            base = int(self.mult[base, base])
            k >>= 1
        return out

    def conjugate(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return int(self.mult[self.mult[self.inv[g], x], g])

    def commutator(self, x: int, y: int) -> int:
        return self.mul(int(self.inv[x]), int(self.inv[y]), x, y)

    def all(self) -> ElementSet:
        return ElementSet.full(self.order)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        everything = np.arange(n)
        cur = everything.copy()
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.mult[cur, everything]
            k += 1
        orders.flags.writeable = False
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    @cached_property
    def class_of(self) -> np.ndarray:
        """Conjugacy class number of each element (classes numbered by rep)."""
        n = self.order
        out = np.full(n, -1, dtype=np.int64)
        everything = np.arange(n)
        cls = 0
        for x in range(n):
            if out[x] >= 0:
                continue
            conj = self.mult[self.mult[self.inv, x], everything]
            out[conj] = cls
            cls += 1
        out.flags.writeable = False
        return out

    @cached_property
    def class_reps(self) -> np.ndarray:
        _, first = np.unique(self.class_of, return_index=True)
        reps = np.sort(first)
        reps.flags.writeable = False
        return reps

    @cached_property
    def class_sizes(self) -> np.ndarray:
        sizes = np.bincount(self.class_of)
        sizes.flags.writeable = False
        return sizes

    def validate(self, rng: np.random.Generator | None = None) -> None:
        """Check the group axioms; raises ``AssertionError`` on failure.

        Associativity is exhaustive up to order 200 and sampled above.
        """
        n, m = self.order, self.mult
        ident = np.arange(n)
        assert np.array_equal(m[0], ident) and np.array_equal(m[:, 0], ident), "identity law"
        assert (m[ident, self.inv] == 0).all(), "inverse law"
        srt = np.sort(m, axis=1)
        assert (srt == ident).all(), "rows are not permutations"
        srt = np.sort(m, axis=0)
        assert (srt == ident[:, None]).all(), "columns are not permutations"
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
            for c in range(n):
                assert np.array_equal(m[m[:, :], c], m[:, m[:, c]]), "associativity"
        else:
            rng = rng or np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, ASSOCIATIVITY_SAMPLES))
            assert np.array_equal(m[m[a, b], c], m[a, m[b, c]]), "associativity (sampled)"
        assert len(subgroup_generated(self, self.generators)) == n, "generators do not generate"


def table_from_actions(
    actions: Sequence[np.ndarray],
    identity: int,
    *,
    label: str = "",
    generator_names: Sequence[str] | None = None,
    cap: int = DEFAULT_ORDER_CAP,
    raw_coords: np.ndarray | None = None,
) -> tuple[GroupTable, np.ndarray]:
    """Build a table from right multiplication by generators on raw labels.

    ``actions[k][r]`` is the raw label of ``r * g_k``.  Elements reachable from
    ``identity`` are renumbered breadth-first (identity first, generators in
    order).  Returns the table and the map raw label -> new index (``-1`` for
    unreachable labels).
    """
    actions = [np.asarray(a, dtype=np.int64) for a in actions]
    raw_n = len(actions[0]) if actions else identity + 1
    lists = [a.tolist() for a in actions]
    new_index = [-1] * raw_n
    new_index[identity] = 0
    order = [identity]
    parent = [-1]
    parent_gen = [-1]
    queue = deque([identity])
    while queue:
        r = queue.popleft()
        pr = new_index[r]
        for k, act in enumerate(lists):
            s = act[r]
            if new_index[s] < 0:
                new_index[s] = len(order)
                order.append(s)
                parent.append(pr)
                parent_gen.append(k)
                if len(order) > cap:
                    raise OrderCapExceeded(f"group order exceeds cap {cap}")
                queue.append(s)
    n = len(order)
    new_index = np.array(new_index, dtype=np.int64)
    order_arr = np.array(order, dtype=np.int64)
    right = [new_index[act[order_arr]] for act in actions]
    gens = [int(new_index[act[identity]]) for act in actions]
    # rows of the transposed table: column b of mult is right[gen(b)] applied to column parent(b)
    cols = np.empty((n, n), dtype=np.int32)
    cols[0] = np.arange(n)
    for b in range(1, n):
        cols[b] = right[parent_gen[b]][cols[parent[b]]]
    mult = np.ascontiguousarray(cols.T)
    coords = None if raw_coords is None else np.asarray(raw_coords)[order_arr]
    table = GroupTable(
        mult,
        gens,
        label=label,
        generator_names=generator_names,
        parent=np.array(parent),
        parent_gen=np.array(parent_gen),
        coords=coords,
    )
    return table, new_index


def renumber(mult: np.ndarray, generators: Sequence[int], **kwargs) -> tuple[GroupTable, np.ndarray]:
    """Canonically renumber a raw multiplication table (identity anywhere)."""
    mult = np.asarray(mult)
    n = mult.shape[0]
    ident = int(np.flatnonzero((mult == np.arange(n)).all(axis=1))[0])
    actions = [mult[:, g] for g in generators]
    if not actions:
        actions = [np.arange(n)]
    table, new_index = table_from_actions(actions, ident, **kwargs)
    return table, new_index


def element_order(G: GroupTable, x: int) -> int:
    return int(G.element_orders[x])


def cyclic_subgroup(G: GroupTable, x: int) -> ElementSet:
    powers = [0]
    cur = int(x)
    while cur != 0:
        powers.append(cur)
        cur = int(G.mult[cur, x])
    return ElementSet.from_indices(G.order, powers)


def powers_of(G: GroupTable, x: int) -> list[int]:
    """``[x, x^2, ..., x^ord = e]``."""
    out = [int(x)]
    while out[-1] != 0:
        out.append(int(G.mult[out[-1], x]))
    return out


def closure_flags(G: GroupTable, seeds) -> np.ndarray:
    """Boolean membership of the subgroup generated by ``seeds``."""
    n = G.order
    member = np.zeros(n, dtype=bool)
    member[0] = True
    gens = np.unique(np.asarray(list(seeds), dtype=np.int64))
    gens = gens[gens != 0]
    if gens.size == 0:
        return member
    frontier = np.array([0])
    mult = G.mult
    while frontier.size:
        nxt = mult[frontier[:, None], gens[None, :]].ravel()
        nxt = nxt[~member[nxt]]
        if not nxt.size:
            break
        nxt = np.unique(nxt)
        member[nxt] = True
        frontier = nxt
    return member


def subgroup_generated(G: GroupTable, seeds) -> ElementSet:
    return ElementSet.from_flags(closure_flags(G, seeds))


def conjugates(G: GroupTable, x: int) -> np.ndarray:
    everything = np.arange(G.order)
    return np.unique(G.mult[G.mult[G.inv, x], everything])


def conjugacy_classes(G: GroupTable) -> list[ConjugacyClass]:
    out = []
    for c, rep in enumerate(G.class_reps):
        flags = G.class_of == c
        out.append(ConjugacyClass(int(rep), ElementSet.from_flags(flags)))
    return out


def center(G: GroupTable) -> ElementSet:
    flags = (G.mult == G.mult.T).all(axis=1)
    return ElementSet.from_flags(flags)


def normal_closure(G: GroupTable, seeds) -> ElementSet:
    seeds = [int(s) for s in seeds]
    if not seeds:
        return ElementSet.identity_only(G.order)
    conj = np.unique(np.concatenate([conjugates(G, s) for s in seeds]))
    return ElementSet.from_flags(closure_flags(G, conj))


def is_subgroup(G: GroupTable, S: ElementSet) -> bool:
    idx = S.indices()
    if 0 not in S:
        return False
    flags = S.flags()
    return bool(flags[G.mult[idx[:, None], idx[None, :]]].all()) and bool(flags[G.inv[idx]].all())


def is_normal(G: GroupTable, S: ElementSet) -> bool:
    """Closure of ``S`` under conjugation by every element (``S`` any subset)."""
    idx = S.indices()
    flags = S.flags()
    everything = np.arange(G.order)
    conj = G.mult[G.mult[G.inv[:, None], idx[None, :]], everything[:, None]]
    return bool(flags[conj].all())


def order_spectrum(G: GroupTable) -> dict[int, int]:
    vals, counts = np.unique(G.element_orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}
