"""Group constructors: cyclic groups, permutation closures, products, quotients."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .elements import ElementSet
from .errors import (
    ActionNotHomomorphic,
    InvalidPermutation,
    NotAnAutomorphism,
    NotNormal,
    NotSubgroup,
    OrderCapExceeded,
)
from .groups import DEFAULT_ORDER_CAP, GroupTable, is_normal, is_subgroup, table_from_actions

EXHAUSTIVE_ACTION_LIMIT = 64
ACTION_SAMPLES = 4096


def cyclic_group(n: int, cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    if n > cap:
        raise OrderCapExceeded(f"C({n}) exceeds order cap {cap}")
    table, _ = table_from_actions([(np.arange(n) + 1) % n], 0, label=f"C({n})", cap=cap)
    return table


def trivial_group() -> GroupTable:
    return cyclic_group(1)


def permutation_images(degree: int, perm) -> np.ndarray:
    """0-based image array of a permutation on ``1..degree``.

    ``perm`` is either one-line notation (a sequence of ints, the images of
    1..degree) or a sequence of disjoint cycles (each a sequence of points).
    """
    perm = list(perm)
    if perm and all(isinstance(p, (int, np.integer)) for p in perm):
        images = [int(p) - 1 for p in perm]
        if len(images) != degree or sorted(images) != list(range(degree)):
            raise InvalidPermutation(f"{perm} is not a bijection on 1..{degree}")
        return np.array(images, dtype=np.int64)
    images = list(range(degree))
    seen: set[int] = set()
    for cycle in perm:
        cycle = [int(p) for p in cycle]
        for p in cycle:
            if not 1 <= p <= degree:
                raise InvalidPermutation(f"point {p} outside 1..{degree}")
            if p in seen:
                raise InvalidPermutation(f"point {p} repeated in {perm}")
            seen.add(p)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a - 1] = b - 1
    return np.array(images, dtype=np.int64)


def closure_from_permutations(
    degree: int,
    generator_permutations: Sequence,
    *,
    cap: int = DEFAULT_ORDER_CAP,
    label: str = "",
    generator_names: Sequence[str] | None = None,
) -> GroupTable:
    """The group generated by permutations of ``1..degree``.

    Products act on the right: ``(p*q)(i) = q(p(i))``.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    gens = [permutation_images(degree, g) for g in generator_permutations]
    if not gens:
        gens = [np.arange(degree)]
    identity = np.arange(degree, dtype=np.int64)
    index = {identity.tobytes(): 0}
    elements = [identity]
    actions: list[list[int]] = [[] for _ in gens]
    queue = deque([0])
    while queue:
        r = queue.popleft()
        p = elements[r]
        for k, g in enumerate(gens):
            q = g[p]
            key = q.tobytes()
            s = index.get(key)
            if s is None:
                s = len(elements)
                if s >= cap:
                    raise OrderCapExceeded(f"permutation group exceeds order cap {cap}")
                index[key] = s
                elements.append(q)
                queue.append(s)
            actions[k].append(s)
    table, _ = table_from_actions(
        [np.array(a) for a in actions], 0, label=label, generator_names=generator_names, cap=cap
    )
    return table


def _merge_names(*groups: GroupTable) -> list[str] | None:
    names = [nm for G in groups for nm in G.generator_names]
    if len(set(names)) == len(names):
        return names
    return None


def direct_product(G: GroupTable, H: GroupTable, cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """``G x H`` with element coordinates recorded in ``coords``.

    With coprime orders and two generators on each side the product gets the
    two paired generators ``(g1, h1), (g2, h2)``; otherwise the embedded
    generators of both factors.
    """
    nG, nH = G.order, H.order
    N = nG * nH
    if N > cap:
        raise OrderCapExceeded(f"direct product order {N} exceeds cap {cap}")
    raw = np.arange(N)
    g_of, h_of = raw // nH, raw % nH
    coords = np.stack([g_of, h_of], axis=1)
    label = f"{G.label} x {H.label}"

    def actions_for(pairs):
        return [G.mult[g_of, g] * nH + H.mult[h_of, h] for g, h in pairs]

    if math.gcd(nG, nH) == 1 and len(G.generators) == 2 and len(H.generators) == 2:
        pairs = list(zip(G.generators, H.generators))
        table, _ = table_from_actions(actions_for(pairs), 0, label=label, cap=cap, raw_coords=coords)
        if table.order == N:
            return table
    pairs = [(g, 0) for g in G.generators] + [(0, h) for h in H.generators]
    table, _ = table_from_actions(
        actions_for(pairs), 0, label=label, generator_names=_merge_names(G, H), cap=cap, raw_coords=coords
    )
    return table


def extend_to_endomorphism(G: GroupTable, images: Sequence[int]) -> np.ndarray:
    """Map every element along ``G``'s spanning tree given generator images.

    The result is a homomorphism only if the assignment respects the
    relations of ``G``; callers check that.
    """
    if G.parent is None:
        raise ValueError("group table has no spanning tree")
    if len(images) != len(G.generators):
        raise ValueError("need one image per generator")
    phi = np.zeros(G.order, dtype=np.int64)
    parent, parent_gen = G.parent, G.parent_gen
    mult = G.mult
    for b in range(1, G.order):
        phi[b] = mult[phi[parent[b]], images[parent_gen[b]]]
    return phi


def is_homomorphism(src: GroupTable, tgt: GroupTable, phi: np.ndarray) -> bool:
    return bool(np.array_equal(phi[src.mult], tgt.mult[phi[:, None], phi[None, :]]))


def semidirect_product(
    base: GroupTable,
    actor: GroupTable,
    action: Sequence[Sequence[int]],
    *,
    cap: int = DEFAULT_ORDER_CAP,
    label: str = "",
    rng: np.random.Generator | None = None,
) -> GroupTable:
    """``base : actor`` where actor generator ``j`` maps base generator ``i``
    to ``action[j][i]``.

    Multiplication is ``(b1, a1)(b2, a2) = (b1 * phi_a1(b2), a1 * a2)``.
    """
    nB, nA = base.order, actor.order
    if nB * nA > cap:
        raise OrderCapExceeded(f"semidirect product order {nB * nA} exceeds cap {cap}")
    if len(action) != len(actor.generators):
        raise ActionNotHomomorphic(
            f"action gives {len(action)} automorphisms for {len(actor.generators)} actor generators"
        )
    gen_auts = []
    for j, images in enumerate(action):
        if len(images) != len(base.generators):
            raise NotAnAutomorphism(f"actor generator {j + 1}: expected {len(base.generators)} images")
        phi = extend_to_endomorphism(base, [int(i) for i in images])
        if len(np.unique(phi)) != nB or not is_homomorphism(base, base, phi):
            raise NotAnAutomorphism(f"actor generator {j + 1}: images do not define an automorphism")
        gen_auts.append(phi)

    # Phi[a] is the automorphism for actor element a; Phi[a1 a2] = Phi[a1] o Phi[a2]
    Phi = np.empty((nA, nB), dtype=np.int64)
    Phi[0] = np.arange(nB)
    if actor.parent is None:
        raise ValueError("actor table has no spanning tree")
    for a in range(1, nA):
        Phi[a] = Phi[actor.parent[a]][gen_auts[actor.parent_gen[a]]]
    if nA <= EXHAUSTIVE_ACTION_LIMIT:
        a1, a2 = np.meshgrid(np.arange(nA), np.arange(nA), indexing="ij")
        a1, a2 = a1.ravel(), a2.ravel()
    else:
        rng = rng or np.random.default_rng(0)
        a1, a2 = rng.integers(0, nA, size=(2, ACTION_SAMPLES))
    lhs = Phi[actor.mult[a1, a2]]
    rhs = np.take_along_axis(Phi[a1], Phi[a2], axis=1)
    if not np.array_equal(lhs, rhs):
        raise ActionNotHomomorphic("the assigned automorphisms do not respect the actor's relations")

    raw = np.arange(nB * nA)
    a_of, b_of = raw // nB, raw % nB
    gens = [(b, 0) for b in base.generators] + [(0, a) for a in actor.generators]
    actions = [base.mult[b_of, Phi[a_of, b0]] + nB * actor.mult[a_of, a0] for b0, a0 in gens]
    table, _ = table_from_actions(
        actions,
        0,
        label=label or f"({base.label}) : ({actor.label})",
        generator_names=_merge_names(base, actor),
        cap=cap,
    )
    return table


@dataclass(frozen=True, eq=False)
class QuotientMap:
    source: GroupTable
    target: GroupTable
    image: np.ndarray
    kernel: ElementSet

    def __call__(self, g: int) -> int:
        return int(self.image[g])


def quotient(G: GroupTable, N: ElementSet, *, label: str = "") -> QuotientMap:
    """``G -> G/N`` with cosets represented by their minimum element index."""
    if N.n != G.order:
        raise ValueError("normal subgroup belongs to a different group")
    if not is_subgroup(G, N):
        raise NotSubgroup("kernel candidate is not a subgroup")
    if not is_normal(G, N):
        raise NotNormal("kernel candidate is not closed under conjugation")
    nidx = N.indices()
    reps = G.mult[:, nidx].min(axis=1).astype(np.int64)
    actions = [reps[G.mult[:, g]] for g in G.generators] or [reps]
    target, new_index = table_from_actions(
        actions,
        0,
        label=label or f"{G.label} / N",
        generator_names=list(G.generator_names) if G.generators else None,
    )
    image = new_index[reps]
    image.flags.writeable = False
    return QuotientMap(G, target, image, N)
