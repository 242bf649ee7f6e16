"""Constructible groups used across the test suite."""

from __future__ import annotations

from functools import lru_cache

from beauville.catalog import PRESETS, family_members
from beauville.dsl import build

P243_4 = "fp(x,y; x^9, y^9, [x,y]^3, [x^3,y], [x,y^3], (x*y^2)^3, (x^2*y)^3, (y*x)^3*x^3*y^3)"
P243_4_RELATION = "fp(x,y; x^9, y^9, [x,y]^3, [x^3,y], [x,y^3], (x*y^2)^3, (x^2*y)^3, (y*x)^3*y^-3*x^-3)"
P729_9 = "fp(x,y; x^9, y^9, [x,y]^3, [x^3,y], [x,y^3], (x*y^2)^3, (x^2*y)^3)"
P729_34 = (
    "fp(x,y; x^3, y^3, (y^2*x*y^2*x^2)^3, (y^2*x^2*y*x^2)^3, (y^2*x^2*y*x)^3, "
    "(y^2*x)^2*y*x*(y*x^2)^2*(y*x)^2)"
)
P81_9 = "fp(s,t; s^3, t^3, (s*t)^3, s*t^2*(s*t^2*s^2*t)^2*s^2*t)"
N729_34 = ["(y*x)^3", "y*x*y^2*x*(y*x^2)^3*y^2*x*y"]
HEISENBERG27 = "sd(C(3) x C(3), C(3), [a -> a, b -> a*b])"


def small_specs(max_order: int = 100) -> list[str]:
    """Specs of constructible groups of order at most ``max_order``; not all
    are 2-generated."""
    specs: list[str] = []
    for fam, params in [
        ("abelian", range(2, max_order + 1)),
        ("dihedral", range(3, max_order // 2 + 1)),
        ("metacyclic", range(3, max_order // 2 + 1)),
        ("cqxcpcq", range(3, max_order)),
        ("thm8", range(7, max_order)),
    ]:
        specs += [m.spec for m in family_members(fam, params, max_order=max_order)]
    for name in ("S3", "S4", "A4", "D8", "Q8", "SL2(3)", "A5"):
        specs.append(PRESETS[name])
    specs += [
        HEISENBERG27,
        "sd(C(9), C(3), [4])",
        "sd(C(3) x C(3), C(3), [a -> b, b -> a^-1*b^-1])",
        "C(3) x @A4",
        "C(2) x @A4",
        "C(2) x @S4",
        "C(3) x @S3",
        "C(3) x @Q8",
        "sd(C(9), C(9), [4])",
        "C(9) x C(9)",
        P81_9,
        "sd(C(2) x C(2), C(9), [a -> b, b -> a*b])",
        "sd(C(5) x C(5), C(3), [a -> b, b -> a^-1*b^-1])",
        "sd(C(4) x C(4), C(3), [a -> b, b -> a^-1*b^-1])",
    ]
    out, seen = [], set()
    for s in specs:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


@lru_cache(maxsize=None)
def group(spec: str):
    from beauville.catalog import expand_presets

    return build(expand_presets(spec))
