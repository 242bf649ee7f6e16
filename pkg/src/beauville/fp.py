"""Finitely presented groups realized by coset enumeration over the trivial subgroup.

The enumerator is HLT-style: relators are traced from every live coset in
creation order, defining new cosets as needed.  Each new table entry is a
deduction that is propagated by scanning the relator conjugates starting at
that entry; coincidences are merged with a union-find forwarding array.
When the live-coset count passes half the limit a lookahead pass (scanning
without defining) runs before enumeration continues.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CosetLimitExceeded, UnknownGenerator
from .groups import DEFAULT_ORDER_CAP, GroupTable, table_from_actions
from .words import Word

log = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 100_000


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        known = set(self.generators)
        for r in self.relators:
            missing = r.names() - known
            if missing:
                raise UnknownGenerator(f"relator uses undeclared generator(s) {sorted(missing)}")

    def letters(self, w: Word) -> list[int]:
        """Column indices of ``w``: generator ``i`` is ``2i``, its inverse ``2i+1``."""
        pos = {g: i for i, g in enumerate(self.generators)}
        return [2 * pos[n] + (0 if e > 0 else 1) for n, e in w.letters()]


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A complete coset table: ``rows[c][2i]`` is ``c * g_i`` and
    ``rows[c][2i+1]`` is ``c * g_i^-1``; coset 0 is the subgroup itself."""

    presentation: Presentation
    rows: np.ndarray
    defined: int

    @property
    def live(self) -> int:
        return int(self.rows.shape[0])

    def is_complete(self) -> bool:
        return bool((self.rows >= 0).all())


class _Enumerator:
    def __init__(self, p: Presentation, max_cosets: int):
        self.ncols = 2 * len(p.generators)
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.fwd = [0]
        self.live = 1
        self.deductions: list[tuple[int, int]] = []
        rels = [p.letters(r) for r in p.relators]
        self.rels = [r for r in rels if r]
        conj: dict[int, list[list[int]]] = {x: [] for x in range(self.ncols)}
        seen = set()
        for r in self.rels:
            inv = [x ^ 1 for x in reversed(r)]
            for w in (r, inv):
                for k in range(len(w)):
                    rot = tuple(w[k:] + w[:k])
                    if rot not in seen:
                        seen.add(rot)
                        conj[rot[0]].append(list(rot))
        self.conj = conj
        self.lookahead_at = max_cosets // 2

    def rep(self, k: int) -> int:
        fwd = self.fwd
        root = k
        while fwd[root] != root:
            root = fwd[root]
        while fwd[k] != root:
            fwd[k], k = root, fwd[k]
        return root

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise CosetLimitExceeded(
                f"coset enumeration exceeded {self.max_cosets} live cosets "
                "(group may be infinite or the limit too low)"
            )
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.fwd.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.deductions.append((c, x))

    def scan(self, c: int, w: list[int], fill: bool) -> None:
        t = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j:
                nf = t[f][w[i]]
                if nf < 0:
                    break
                f = nf
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                nb = t[b][w[j] ^ 1]
                if nb < 0:
                    break
                b = nb
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                self.deductions.append((f, w[i]))
                return
            if not fill:
                return
            self.define(f, w[i])

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if l < k:
            k, l = l, k
        self.fwd[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        t = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = t[e]
            for x in range(self.ncols):
                f = row[x]
                if f < 0:
                    continue
                xi = x ^ 1
                if t[f][xi] == e:
                    t[f][xi] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][x] >= 0:
                    self._merge(f1, t[e1][x], queue)
                elif t[f1][xi] >= 0:
                    self._merge(e1, t[f1][xi], queue)
                else:
                    t[e1][x] = f1
                    t[f1][xi] = e1
                    self.deductions.append((e1, x))

    def process_deductions(self) -> None:
        t, fwd = self.table, self.fwd
        while self.deductions:
            a, x = self.deductions.pop()
            if fwd[a] != a:
                continue
            for w in self.conj[x]:
                self.scan(a, w, fill=False)
                if fwd[a] != a:
                    break
            b = t[a][x] if fwd[a] == a else -1
            if b >= 0 and fwd[b] == b:
                for w in self.conj[x ^ 1]:
                    self.scan(b, w, fill=False)
                    if fwd[b] != b:
                        break

    def lookahead(self) -> None:
        before = self.live
        c = 0
        while c < len(self.table):
            for w in self.rels:
                if self.fwd[c] != c:
                    break
                self.scan(c, w, fill=False)
                self.process_deductions()
            c += 1
        log.debug("lookahead: %d -> %d live cosets", before, self.live)
        self.lookahead_at = self.live + (self.max_cosets - self.live) // 2

    def run(self) -> None:
        c = 0
        while c < len(self.table):
            for w in self.rels:
                if self.fwd[c] != c:
                    break
                self.scan(c, w, fill=True)
                self.process_deductions()
                if self.live > self.lookahead_at:
                    self.lookahead()
            if self.fwd[c] == c:
                for x in range(self.ncols):
                    if self.fwd[c] == c and self.table[c][x] < 0:
                        self.define(c, x)
                        self.process_deductions()
            c += 1

    def compact(self) -> np.ndarray:
        live = [c for c in range(len(self.table)) if self.fwd[c] == c]
        new = {c: i for i, c in enumerate(live)}
        rows = np.array([[new[self.rep(v)] for v in self.table[c]] for c in live], dtype=np.int64)
        return rows


def todd_coxeter(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of the trivial subgroup; the live count is ``|G|``."""
    enum = _Enumerator(p, max_cosets)
    enum.run()
    rows = enum.compact()
    table = CosetTable(p, rows, defined=len(enum.table))
    if not table.is_complete():
        raise AssertionError("coset enumeration finished with an incomplete table")
    log.debug("enumerated %d cosets (%d defined)", table.live, table.defined)
    return table


def realize(p: Presentation, table: CosetTable, *, label: str = "", cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """The group acting regularly on the cosets of the trivial subgroup."""
    actions = [table.rows[:, 2 * i] for i in range(len(p.generators))]
    G, _ = table_from_actions(actions, 0, label=label, generator_names=p.generators, cap=cap)
    return G


def finitely_presented(
    generators: Sequence[str],
    relators: Sequence[Word],
    *,
    max_cosets: int = DEFAULT_MAX_COSETS,
    cap: int = DEFAULT_ORDER_CAP,
    label: str = "",
) -> GroupTable:
    p = Presentation(tuple(generators), tuple(relators))
    return realize(p, todd_coxeter(p, max_cosets), label=label, cap=cap)
