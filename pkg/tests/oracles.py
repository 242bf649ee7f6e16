"""Independent reference implementations used only by the tests.

Everything here works from the raw multiplication table with plain Python
sets and follows the definitions literally: no class representatives, no
power-class masks, no carrier pruning.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


class Naive:
    def __init__(self, G):
        self.n = G.order
        self.mult = G.mult.tolist()
        self.inv = [0] * self.n
        for a in range(self.n):
            self.inv[a] = self.mult[a].index(0)
        self._conj_powers = {}

    def closure(self, seeds) -> frozenset:
        found = {0}
        frontier = [0]
        seeds = list(seeds)
        while frontier:
            nxt = []
            for a in frontier:
                for s in seeds:
                    b = self.mult[a][s]
                    if b not in found:
                        found.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(found)

    def powers(self, g) -> list[int]:
        out, cur = [0], g
        while cur != 0:
            out.append(cur)
            cur = self.mult[cur][g]
        return out

    def conjugates_of_powers(self, g) -> frozenset:
        """``{ h^-1 (g^i) h : i, h }``."""
        if g not in self._conj_powers:
            m, inv = self.mult, self.inv
            self._conj_powers[g] = frozenset(
                m[m[inv[h]][p]][h] for p in self.powers(g) for h in range(self.n)
            )
        return self._conj_powers[g]

    def sigma(self, x, y) -> frozenset:
        xy = self.mult[x][y]
        return self.conjugates_of_powers(x) | self.conjugates_of_powers(y) | self.conjugates_of_powers(xy)

    def generating_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in range(self.n) if len(self.closure([x, y])) == self.n]

    def carriers(self) -> set[frozenset]:
        return {self.sigma(x, y) for x, y in self.generating_pairs()}

    def center(self) -> frozenset:
        return frozenset(a for a in range(self.n) if all(self.mult[a][b] == self.mult[b][a] for b in range(self.n)))


def brute_dimension(G) -> int | None:
    """Beauville dimension by exhaustive search over all distinct carriers.

    Returns ``None`` when the group has no generating pair.
    """
    nv = Naive(G)
    carriers = sorted(nv.carriers(), key=sorted)
    if not carriers:
        return None
    common = frozenset.intersection(*carriers)
    if len(common) > 1:
        return 1
    for k in range(2, len(carriers) + 1):
        if _exists_family(carriers, k):
            return k
    raise AssertionError("unreachable: all carriers together meet trivially")


def _exists_family(carriers, k) -> bool:
    def rec(start, depth, inter):
        if depth == k:
            return len(inter) == 1
        for i in range(start, len(carriers) - (k - depth) + 1):
            if rec(i + 1, depth + 1, inter & carriers[i]):
                return True
        return False

    return rec(0, 0, frozenset(range(max(map(max, carriers)) + 1)))


def order_spectrum_of_product(spec_g: dict[int, int], spec_h: dict[int, int]) -> dict[int, int]:
    from math import lcm

    out: dict[int, int] = {}
    for a, ca in spec_g.items():
        for b, cb in spec_h.items():
            out[lcm(a, b)] = out.get(lcm(a, b), 0) + ca * cb
    return out


@lru_cache(maxsize=None)
def sympy_fp_order(generators: tuple[str, ...], relators: tuple[str, ...]) -> int:
    """Order via sympy's own coset enumeration."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    F, *gens = free_group(",".join(generators))
    env = dict(zip(generators, gens))
    rels = [eval(r.replace("^", "**"), {}, env) for r in relators]  # test-only, trusted literals
    return FpGroup(F, rels).order()


def sympy_perm_order(degree: int, cycles: list[list[list[int]]]) -> int:
    from sympy.combinatorics import Permutation, PermutationGroup

    perms = [Permutation([[p - 1 for p in c] for c in cyc], size=degree) for cyc in cycles]
    return PermutationGroup(perms).order()


def all_subsets_trivial(sets) -> list[tuple[int, ...]]:
    """Index tuples of subfamilies (size >= 2) whose intersection is {identity}."""
    out = []
    for k in range(2, len(sets) + 1):
        for combo in combinations(range(len(sets)), k):
            if len(frozenset.intersection(*(sets[i] for i in combo))) == 1:
                out.append(combo)
    return out
