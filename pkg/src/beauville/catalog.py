"""Named presets, bundled fixture rows, and parametrised families for scans."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterator

# Classic groups as permutation closures.  Points are 1-based.
PRESETS: dict[str, str] = {
    "S3": "perm(3; (1 2 3), (1 2))",
    "S4": "perm(4; (1 2 3 4), (1 2))",
    "A4": "perm(4; (1 2 3), (2 3 4))",
    "D8": "perm(4; (1 2 3 4), (1 3))",
    "Q8": "perm(8; (1 2 3 4)(5 6 7 8), (1 5 3 7)(2 8 4 6))",
    "SL2(3)": "perm(8; (1 4 7)(2 8 5), (3 4 5)(6 8 7))",
    "S5": "perm(5; (1 2 3 4 5), (1 2))",
    "A5": "perm(5; (1 2 3 4 5), (1 2 3))",
    "S6": "perm(6; (1 2 3 4 5 6), (1 2))",
    "A6": "perm(6; (1 2 3 4 5), (4 5 6))",
    "PSL3(2)": "perm(7; (1 2 3 4 5 6 7), (1 2)(3 6))",
}

_PRESET_TOKEN = re.compile(r"@([A-Za-z][A-Za-z0-9]*(?:\(\d+\))?)")


def expand_presets(text: str) -> str:
    """Replace ``@NAME`` tokens by their perm specs; a bare preset name is
    accepted as the whole spec."""
    stripped = text.strip()
    if stripped in PRESETS:
        return PRESETS[stripped]

    def sub(m: re.Match) -> str:
        name = m.group(1)
        if name not in PRESETS:
            raise KeyError(f"unknown preset @{name}; known: {', '.join(PRESETS)}")
        return f"({PRESETS[name]})"

    return _PRESET_TOKEN.sub(sub, text)


@dataclass(frozen=True)
class FixtureRow:
    expected_d: int
    spec: str
    provenance: str
    expected_order: int | None = None


def load_fixtures(suite: str = "paper-tables") -> list[FixtureRow]:
    """Rows of ``data/<suite>.tsv``: ``d <tab> spec <tab> provenance``.

    The provenance column starts with ``(order, id)`` when the row comes from
    a table; the order in it is checked too.
    """
    name = suite.replace("-", "_") + ".tsv"
    try:
        text = resources.files("beauville").joinpath("data", name).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise KeyError(f"no fixture suite {suite!r}") from None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{name}:{lineno}: expected 3 tab-separated fields")
        d, spec, prov = parts
        m = re.match(r"\((\d+),", prov)
        rows.append(FixtureRow(int(d), spec, prov, int(m.group(1)) if m else None))
    return rows


# --- families ---------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def power_actions(n: int, m: int) -> list[int]:
    """Exponents ``k`` in ``2..n-1`` with ``k^m = 1 (mod n)``: the non-trivial
    power automorphisms of ``C(n)`` of order dividing ``m``."""
    return [k for k in range(2, n) if math.gcd(k, n) == 1 and pow(k, m, n) == 1]


def cube_root_of_unity(p: int) -> int | None:
    """Smallest ``t != 1`` with ``t^3 = 1 (mod p)``."""
    roots = power_actions(p, 3)
    return roots[0] if roots else None


@dataclass(frozen=True)
class Member:
    family: str
    params: tuple[int, ...]
    spec: str
    order: int


def _cnxcn(n: int) -> Iterator[Member]:
    yield Member("CnxCn", (n,), f"C({n}) x C({n})", n * n)


def _abelian(n: int) -> Iterator[Member]:
    for m in range(1, n + 1):
        if n % m == 0:
            yield Member("abelian", (m, n), f"C({m}) x C({n})", m * n)


def _thm8(p: int) -> Iterator[Member]:
    if is_prime(p) and p % 3 == 1:
        t = cube_root_of_unity(p)
        yield Member("thm8", (p,), f"C(3) x sd(C({p}), C(3), [{t}])", 9 * p)


def _dihedral(n: int) -> Iterator[Member]:
    if n >= 3:
        yield Member("dihedral", (n,), f"sd(C({n}), C(2), [{n - 1}])", 2 * n)


def _metacyclic(n: int) -> Iterator[Member]:
    """``C(n) : C(m)`` for every ``m`` dividing the order of a power action."""
    for m in range(2, n):
        for k in power_actions(n, m):
            if pow(k, m, n) == 1 and all(pow(k, e, n) != 1 for e in range(1, m)):
                yield Member("metacyclic", (n, m, k), f"sd(C({n}), C({m}), [{k}])", n * m)


def _cqxcpcq(p: int) -> Iterator[Member]:
    """``C(q) x (C(p) : C(q))`` for primes ``q`` dividing ``p - 1``."""
    if not is_prime(p):
        return
    for q in range(2, p):
        if is_prime(q) and (p - 1) % q == 0:
            k = power_actions(p, q)[0]
            yield Member("cqxcpcq", (q, p), f"C({q}) x sd(C({p}), C({q}), [{k}])", q * q * p)


def _c3xcnc3(n: int) -> Iterator[Member]:
    """``C(3) x (C(n) : C(3))`` for every power action (``n`` need not be prime)."""
    for k in power_actions(n, 3):
        yield Member("c3xcnc3", (n, k), f"C(3) x sd(C({n}), C(3), [{k}])", 9 * n)


def _c3xcncnc3(n: int) -> Iterator[Member]:
    """``C(3) x ((C(n) x C(n)) : C(3))`` with ``(a, b) -> (b, a^-1 b^-1)``."""
    if n >= 2:
        yield Member("c3xcncnc3", (n,), f"C(3) x sd(C({n}) x C({n}), C(3), [a -> b, b -> a^-1*b^-1])", 9 * n * n)


FAMILIES: dict[str, tuple[Callable[[int], Iterator[Member]], range, str]] = {
    "CnxCn": (_cnxcn, range(2, 32), "C(n) x C(n)"),
    "abelian": (_abelian, range(2, 64), "C(m) x C(n), m | n"),
    "thm8": (_thm8, range(7, 112), "C(3) x (C(p) : C(3)), p prime, p = 1 mod 3"),
    "dihedral": (_dihedral, range(3, 500), "C(n) : C(2) by inversion"),
    "metacyclic": (_metacyclic, range(3, 64), "C(n) : C(m) by every faithful power action"),
    "cqxcpcq": (_cqxcpcq, range(3, 112), "C(q) x (C(p) : C(q)), primes q | p - 1"),
    "c3xcnc3": (_c3xcnc3, range(7, 112), "C(3) x (C(n) : C(3)), every power action"),
    "c3xcncnc3": (_c3xcncnc3, range(2, 11), "C(3) x ((C(n) x C(n)) : C(3))"),
}


def parse_range(text: str) -> range:
    """``"a..b"`` (inclusive) or a single integer."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"bad range {text!r}; use N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return range(lo, hi + 1)


def family_members(name: str, params: range | list[int] | None = None, *, max_order: int | None = None) -> list[Member]:
    try:
        fn, default, _ = FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    out = []
    for n in params if params is not None else default:
        for m in fn(n):
            if max_order is None or m.order <= max_order:
                out.append(m)
    return out
