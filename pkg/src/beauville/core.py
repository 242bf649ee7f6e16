"""Sigma sets of generating pairs, Beauville structures and the Beauville dimension.

For a pair ``(x, y)`` the carrier ``sigma(x, y)`` is the union of all
conjugates of the cyclic subgroups generated by ``x``, ``y`` and ``xy``.  The
conjugates of ``<g>`` form the union of the conjugacy classes of the powers
of ``g``; that set depends only on the conjugacy class of the cyclic
subgroup ``<g>``, so it is computed once per class and a carrier is the OR
of three precomputed bitmasks.
"""

from __future__ import annotations

import enum
import logging
import math
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .constructions import QuotientMap
from .elements import ElementSet, mask_from_flags, mask_from_indices
from .errors import (
    DegenerateTrivialGroup,
    EmptyFamily,
    ImagesNotStructure,
    NotGenerating,
    NotTwoGenerated,
    PremiseFailed,
)
from .groups import GroupTable, closure_flags, cyclic_subgroup, element_order

log = logging.getLogger(__name__)

PRODUCING_PAIRS_CAP = 16


@dataclass(frozen=True)
class GeneratingPair:
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, G: GroupTable, x: int, y: int) -> "GeneratingPair":
        return cls(int(x), int(y), int(G.inv[G.mult[x, y]]))

    def triple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class SigmaRecord:
    carrier: ElementSet
    canonical_pair: GeneratingPair
    producing_pairs: tuple[GeneratingPair, ...]
    pair_count: int  # ordered generating pairs of the whole group with this carrier


class Classification(str, enum.Enum):
    NOT_A_STRUCTURE = "not-a-structure"
    DERIVED = "derived"
    NON_DERIVED = "non-derived"
    MINIMAL = "minimal"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class StructureFamily:
    pairs: tuple[GeneratingPair, ...]
    sigma_carriers: tuple[ElementSet, ...]
    classification: Classification

    @property
    def is_structure(self) -> bool:
        return self.classification is not Classification.NOT_A_STRUCTURE

    def intersection(self) -> ElementSet:
        return _intersection(self.sigma_carriers)


@dataclass(frozen=True, eq=False)
class DimensionResult:
    d: int
    witness: StructureFamily | None
    blocking_element: int | None
    certificate: tuple[tuple[int, int], ...]
    records: tuple[SigmaRecord, ...] = field(repr=False)

    @property
    def sigma_count(self) -> int:
        return len(self.records)


def _intersection(sets: Sequence[ElementSet]) -> ElementSet:
    out = sets[0]
    for s in sets[1:]:
        out = out & s
    return out


# --- per-group caches -------------------------------------------------------

_caches: "weakref.WeakKeyDictionary[GroupTable, dict]" = weakref.WeakKeyDictionary()


def _cache(G: GroupTable) -> dict:
    c = _caches.get(G)
    if c is None:
        c = _caches[G] = {}
    return c


@dataclass(frozen=True, eq=False)
class _PowerClasses:
    kid: np.ndarray  # element -> id of the conjugacy class of <element>
    masks: tuple[int, ...]  # id -> bitmask of all conjugates of <element>


def _power_classes(G: GroupTable) -> _PowerClasses:
    cache = _cache(G)
    if "power_classes" in cache:
        return cache["power_classes"]
    n = G.order
    class_of = G.class_of
    order = np.argsort(class_of, kind="stable")
    bounds = np.searchsorted(class_of[order], np.arange(len(G.class_reps) + 1))
    class_masks = [mask_from_indices(order[bounds[c]:bounds[c + 1]], n) for c in range(len(G.class_reps))]
    ids: dict[int, int] = {}
    masks: list[int] = []
    kid_of_class = np.empty(len(G.class_reps), dtype=np.int64)
    for c, r in enumerate(G.class_reps):
        m = 0
        cur = int(r)
        seen = set()
        while True:
            cc = int(class_of[cur])
            if cc not in seen:
                seen.add(cc)
                m |= class_masks[cc]
            if cur == 0:
                break
            cur = int(G.mult[cur, r])
        if m not in ids:
            ids[m] = len(masks)
            masks.append(m)
        kid_of_class[c] = ids[m]
    pc = _PowerClasses(kid_of_class[class_of], tuple(masks))
    pc.kid.flags.writeable = False
    cache["power_classes"] = pc
    return pc


# --- sigma sets and generation ---------------------------------------------


def sigma(G: GroupTable, x: int, y: int) -> ElementSet:
    """Union of the conjugates of ``<x>``, ``<y>`` and ``<xy>`` (identity included)."""
    pc = _power_classes(G)
    xy = int(G.mult[x, y])
    k = pc.kid
    return ElementSet(G.order, pc.masks[k[x]] | pc.masks[k[y]] | pc.masks[k[xy]])


def is_generating_pair(G: GroupTable, x: int, y: int) -> bool:
    return bool(closure_flags(G, [x, y]).all())


def _cyclic_generators(G: GroupTable, y: int) -> np.ndarray:
    o = element_order(G, y)
    out = [y]
    cur = y
    for k in range(2, o):
        cur = int(G.mult[cur, y])
        if math.gcd(k, o) == 1:
            out.append(cur)
    return np.array(out, dtype=np.int64)


def generating_partners(G: GroupTable, x: int) -> np.ndarray:
    """Boolean array over ``y``: does ``(x, y)`` generate ``G``?

    Whenever ``<x, y>`` is a proper subgroup ``H`` every ``y`` in ``H`` is
    settled at once; when it is all of ``G`` so is every ``y'`` in
    ``<x> Y <x>`` with ``Y`` the generators of ``<y>``.
    """
    n = G.order
    cyc = cyclic_subgroup(G, x)
    memo = _cache(G).setdefault("partners", {})
    if cyc.mask in memo:  # x and its coprime powers have the same partners
        return memo[cyc.mask]
    if len(cyc) == n:
        status = np.ones(n, dtype=np.int8)
    elif x == 0 and not _is_cyclic(G):
        status = np.full(n, 2, dtype=np.int8)
    else:
        status = np.zeros(n, dtype=np.int8)  # 0 unknown, 1 generating, 2 not
        _settle(G, x, cyc.indices(), status)
    out = status == 1
    out.flags.writeable = False
    memo[cyc.mask] = out
    return out


def _settle(G: GroupTable, x: int, cx: np.ndarray, status: np.ndarray) -> None:
    n = G.order
    status[cx] = 2
    mult = G.mult
    for y in range(n):
        if status[y]:
            continue
        H = closure_flags(G, [x, y])
        if H.all():
            left = mult[np.ix_(cx, _cyclic_generators(G, y))].ravel()
            status[mult[np.ix_(left, cx)].ravel()] = 1
        else:
            status[H] = 2


def _is_cyclic(G: GroupTable) -> bool:
    return bool((G.element_orders == G.order).any())


def _partial_records(G: GroupTable, x: int) -> list[tuple[int, list[int], int]]:
    """Carriers produced by pairs ``(x, y)``: ``(mask, first ys, count)``."""
    pc = _power_classes(G)
    ys = np.flatnonzero(generating_partners(G, x))
    if not ys.size:
        return []
    kid = pc.kid
    K = len(pc.masks)
    trip = np.sort(np.stack([np.full(ys.size, kid[x]), kid[ys], kid[G.mult[x, ys]]]), axis=0)
    codes = (trip[0] * K + trip[1]) * K + trip[2]
    uniq, inverse = np.unique(codes, return_inverse=True)
    carrier_of_code = []
    for u in uniq.tolist():
        a, rest = divmod(u, K * K)
        b, c = divmod(rest, K)
        carrier_of_code.append(pc.masks[a] | pc.masks[b] | pc.masks[c])
    distinct = {}
    cid_of_code = np.array([distinct.setdefault(m, len(distinct)) for m in carrier_of_code])
    cid = cid_of_code[inverse]
    out = []
    for m, c in distinct.items():
        sel = ys[cid == c]
        out.append((m, sel[:PRODUCING_PAIRS_CAP].tolist(), int(sel.size)))
    return out


def enumerate_sigma_records(G: GroupTable, workers: int = 1) -> list[SigmaRecord]:
    """One record per distinct carrier over all generating pairs of ``G``.

    ``x`` runs over conjugacy-class representatives only; carriers are
    invariant under simultaneous conjugation, and every ordered pair is
    conjugate to one whose first entry is a representative.  Records are
    ordered by carrier size, then by sorted element indices.  The result
    does not depend on ``workers``.
    """
    cache = _cache(G)
    if "records" in cache:
        return cache["records"]
    reps = [int(r) for r in G.class_reps]
    sizes = G.class_sizes
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda x: _partial_records(G, x), reps))
    else:
        partials = [_partial_records(G, x) for x in reps]
    acc: dict[int, list] = {}
    for c, (x, part) in enumerate(zip(reps, partials)):
        weight = int(sizes[G.class_of[x]])
        for mask, ys, count in part:
            entry = acc.setdefault(mask, [[], 0])
            need = PRODUCING_PAIRS_CAP - len(entry[0])
            entry[0].extend((x, y) for y in ys[:need])
            entry[1] += weight * count
    if not acc:
        raise NotTwoGenerated(f"{G.label or 'group'} of order {G.order} has no generating pair")
    records = []
    for mask, (pairs, count) in acc.items():
        gp = tuple(GeneratingPair.of(G, x, y) for x, y in pairs)
        records.append(SigmaRecord(ElementSet(G.order, mask), gp[0], gp, count))
    records.sort(key=lambda r: (len(r.carrier), tuple(r.carrier)))
    cache["records"] = records
    return records


# --- exact minimum "cover" search ------------------------------------------


def prune_supersets(masks: Sequence[int]) -> list[int]:
    """Indices of carriers that contain no other carrier as a proper subset."""
    keep = []
    for i, m in enumerate(masks):
        if not any(o != m and o & ~m == 0 for o in masks):
            keep.append(i)
    return keep


def _search(masks: Sequence[int], order: Sequence[int], k: int, full: int) -> list[int] | None:
    """First family (in ``order``) of at most ``k`` carriers meeting only in the identity.

    Branches on which carrier excludes the smallest surviving non-identity
    element, so the search is complete.
    """
    failed: set[tuple[int, int]] = set()

    def rec(current: int, left: int, chosen: list[int]) -> list[int] | None:
        rest = current & ~1
        if not rest:
            return chosen
        if left == 0 or (current, left) in failed:
            return None
        low = rest & -rest
        for i in order:
            if masks[i] & low:
                continue
            found = rec(current & masks[i], left - 1, chosen + [i])
            if found is not None:
                return found
        failed.add((current, left))
        return None

    return rec(full, k, [])


def minimum_family(masks: Sequence[int], n: int, *, max_size: int | None = None, prune: bool = True):
    """Smallest set of carrier indices with trivial intersection, or ``None``.

    Sizes are tried in increasing order from 2 up to ``max_size``.
    """
    if not masks:
        return None
    idx = prune_supersets(masks) if prune else list(range(len(masks)))
    order = sorted(idx, key=lambda i: (masks[i].bit_count(), i))
    full = (1 << n) - 1
    limit = len(idx) if max_size is None else min(max_size, len(idx))
    for k in range(2, limit + 1):
        found = _search(masks, order, k, full)
        if found is not None:
            return sorted(found)
    return None


def beauville_dimension(G: GroupTable, *, workers: int = 1, prune: bool = True) -> DimensionResult:
    """Exact Beauville dimension with a witness family or a blocking element."""
    if G.order == 1:
        raise DegenerateTrivialGroup("the trivial group's single carrier is already trivial; d is undefined")
    records = enumerate_sigma_records(G, workers=workers)
    masks = [r.carrier.mask for r in records]
    common = masks[0]
    for m in masks[1:]:
        common &= m
    if common & ~1:
        low = common & ~1
        blocking = (low & -low).bit_length() - 1
        return DimensionResult(1, None, blocking, (), tuple(records))
    chosen = minimum_family(masks, G.order, prune=prune)
    assert chosen is not None, "carriers meet trivially, so some family must work"
    pairs = tuple(records[i].canonical_pair for i in chosen)
    carriers = tuple(records[i].carrier for i in chosen)
    witness = StructureFamily(pairs, carriers, Classification.MINIMAL)
    return DimensionResult(len(chosen), witness, None, make_certificate(carriers), tuple(records))


def make_certificate(carriers: Sequence[ElementSet]) -> tuple[tuple[int, int], ...]:
    """For each non-identity element of the union, the first carrier excluding it."""
    union = 0
    for c in carriers:
        union |= c.mask
    out = []
    for e in ElementSet(carriers[0].n, union & ~1):
        for i, c in enumerate(carriers):
            if e not in c:
                out.append((e, i))
                break
        else:
            raise ValueError(f"element {e} lies in every carrier")
    return tuple(out)


def verify_certificate(G: GroupTable, result: DimensionResult) -> bool:
    """Re-check a result's witness: generation, carriers, and the exclusion list."""
    if result.d == 1:
        b = result.blocking_element
        return b is not None and b != 0 and all(b in r.carrier for r in result.records)
    w = result.witness
    if w is None or len(w.pairs) != result.d:
        return False
    for p, c in zip(w.pairs, w.sigma_carriers):
        if not is_generating_pair(G, p.x, p.y) or sigma(G, p.x, p.y) != c:
            return False
    union = 0
    for c in w.sigma_carriers:
        union |= c.mask
    covered = set()
    for e, i in result.certificate:
        if e == 0 or e in w.sigma_carriers[i]:
            return False
        covered.add(e)
    return covered == set(ElementSet(G.order, union & ~1))


# --- structures -------------------------------------------------------------


def check_structure(G: GroupTable, pairs: Sequence[GeneratingPair | tuple[int, int]]) -> StructureFamily:
    """Classify a family of generating pairs.

    Two-pair structures are reported as minimal.  For more pairs the family
    is derived when some proper subfamily already meets trivially, minimal
    when no structure with fewer pairs exists anywhere in ``G``, and
    non-derived otherwise.
    """
    if not pairs:
        raise EmptyFamily("a structure needs at least one generating pair")
    gps = tuple(p if isinstance(p, GeneratingPair) else GeneratingPair.of(G, *p) for p in pairs)
    for p in gps:
        if not is_generating_pair(G, p.x, p.y):
            raise NotGenerating(f"pair ({p.x}, {p.y}) does not generate the group")
    carriers = tuple(sigma(G, p.x, p.y) for p in gps)
    n = len(gps)
    if not _intersection(carriers).is_trivial():
        cls = Classification.NOT_A_STRUCTURE
    elif n == 1:
        raise DegenerateTrivialGroup("a single carrier meets trivially only in the trivial group")
    elif n == 2:
        cls = Classification.MINIMAL
    elif any(_intersection(carriers[:i] + carriers[i + 1:]).is_trivial() for i in range(n)):
        cls = Classification.DERIVED
    else:
        masks = [r.carrier.mask for r in enumerate_sigma_records(G)]
        smaller = minimum_family(masks, G.order, max_size=n - 1)
        cls = Classification.NON_DERIVED if smaller is not None else Classification.MINIMAL
    return StructureFamily(gps, carriers, cls)


def iter_structures(
    G: GroupTable, *, minimal_only: bool = True, limit: int | None = None
) -> Iterator[StructureFamily]:
    """Non-derived structures built from distinct carriers, smallest first.

    With ``minimal_only`` only families of size ``d`` are produced.  Families
    are listed in lexicographic order of record indices within each size.
    """
    records = enumerate_sigma_records(G)
    result = beauville_dimension(G)
    if result.d == 1:
        return
    masks = [r.carrier.mask for r in records]
    sizes = [result.d] if minimal_only else range(result.d, len(records) + 1)
    produced = 0
    for k in sizes:
        for combo in combinations(range(len(records)), k):
            inter = (1 << G.order) - 1
            for i in combo:
                inter &= masks[i]
            if inter & ~1:
                continue
            if k > 2 and any(_trivial_without(masks, combo, j) for j in range(k)):
                continue
            cls = Classification.MINIMAL if k == result.d else Classification.NON_DERIVED
            yield StructureFamily(
                tuple(records[i].canonical_pair for i in combo),
                tuple(records[i].carrier for i in combo),
                cls,
            )
            produced += 1
            if limit is not None and produced >= limit:
                return


def _trivial_without(masks, combo, j) -> bool:
    inter = -1
    for t, i in enumerate(combo):
        if t != j:
            inter &= masks[i]
    return not inter & ~1


# --- quotients --------------------------------------------------------------


def is_faithfully_represented(q: QuotientMap, g: int) -> bool:
    """``<g>`` meets the kernel trivially; checked both ways and asserted equal."""
    by_kernel = (cyclic_subgroup(q.source, g) & q.kernel).is_trivial()
    by_order = element_order(q.source, g) == element_order(q.target, q(g))
    if by_kernel != by_order:
        raise AssertionError("faithfulness criteria disagree; the quotient map is inconsistent")
    return by_kernel


def lift_structure(q: QuotientMap, source_pairs: Sequence[GeneratingPair | tuple[int, int]]) -> StructureFamily:
    """Verify the lifting premises and classify the source family.

    Premises: every image pair generates the target, the images form a
    structure there, and at least one source triple is faithfully
    represented.  Only ``2 <= d(source) <= len(pairs)`` follows; the exact
    dimension must be computed separately.
    """
    G, H = q.source, q.target
    gps = tuple(p if isinstance(p, GeneratingPair) else GeneratingPair.of(G, *p) for p in source_pairs)
    if not gps:
        raise EmptyFamily("nothing to lift")
    images = tuple(GeneratingPair.of(H, q(p.x), q(p.y)) for p in gps)
    for p in images:
        if not is_generating_pair(H, p.x, p.y):
            raise PremiseFailed("image pairs generate the quotient", f"({p.x}, {p.y})")
    if not any(all(is_faithfully_represented(q, g) for g in p.triple()) for p in gps):
        raise PremiseFailed("some triple is faithfully represented")
    image_family = check_structure(H, images)
    if not image_family.is_structure:
        raise ImagesNotStructure("the image carriers do not meet trivially in the quotient")
    family = check_structure(G, gps)
    if not family.is_structure:
        raise AssertionError("lifted family is not a structure although the lifting premises hold")
    return family
