"""Free-group words over named generators."""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import UnboundGenerator
from .groups import GroupTable


class Word(tuple):
    """A freely reduced word: a tuple of ``(name, exponent)`` syllables.

    Adjacent syllables always have different names and exponents are never
    zero, so two words are equal iff they are equal in the free group.
    """

    def __new__(cls, syllables: Iterable[tuple[str, int]] = ()):
        return super().__new__(cls, _reduce(syllables))

    @classmethod
    def gen(cls, name: str, exponent: int = 1) -> "Word":
        return cls([(name, exponent)])

    def __mul__(self, other: "Word") -> "Word":
        return Word(tuple(self) + tuple(other))

    def inverse(self) -> "Word":
        return Word((n, -e) for n, e in reversed(self))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(tuple(self) * k)

    def names(self) -> set[str]:
        return {n for n, _ in self}

    def length(self) -> int:
        return sum(abs(e) for _, e in self)

    def letters(self) -> list[tuple[str, int]]:
        """Expanded letters, each ``(name, +1 | -1)``."""
        out = []
        for n, e in self:
            out.extend([(n, 1 if e > 0 else -1)] * abs(e))
        return out

    def __repr__(self):
        return f"Word({render_word(self)!r})"


def _reduce(syllables) -> tuple:
    out: list[list] = []
    for name, exp in syllables:
        exp = int(exp)
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([name, exp])
    return tuple((n, e) for n, e in out)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def _render_syllables(w) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in w)


def render_word(w: Word) -> str:
    """Render with ``*`` and ``^``; a word that is a proper power ``u^k`` of a
    multi-syllable word is written ``(u)^k``."""
    if not w:
        return "1"
    syl = tuple(w)
    L = len(syl)
    for p in range(2, L // 2 + 1):
        if L % p == 0 and syl[:p] * (L // p) == syl:
            return f"({_render_syllables(syl[:p])})^{L // p}"
    return _render_syllables(syl)


def evaluate_word(G: GroupTable, assignment: Mapping[str, int], w: Word) -> int:
    out = 0
    for name, exp in w:
        try:
            g = assignment[name]
        except KeyError:
            raise UnboundGenerator(f"generator {name!r} has no assigned element") from None
        out = int(G.mult[out, G.power(int(g), exp)])
    return out


def generator_assignment(G: GroupTable) -> dict[str, int]:
    return dict(zip(G.generator_names, G.generators))
