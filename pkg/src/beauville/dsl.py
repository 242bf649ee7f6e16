"""A small text language for group constructions.

Grammar::

    spec    := term ("x" term)*                 left-associated direct product
    term    := "C(" int ")"
             | "perm(" int ";" perms ")"
             | "sd(" spec "," spec "," "[" actions "]" ")"
             | "fp(" names ";" words ")"
             | "quot(" spec ";" words ")"
             | "(" spec ")"
    perms   := perm ("," perm)*                 perm := cycle+ | "()"
    cycle   := "(" int+ ")"
    actions := block (";" block)*               one block per actor generator
    block   := int | name "->" word ("," name "->" word)*
    word    := factor (["*"] factor)*
    factor  := atom ["^" ["-"] int]
    atom    := name | "1" | "(" word ")" | "[" word "," word "]"

In ``sd`` actions the base generators are named ``a, b, c, ...`` in the
order of the base group's designated generators; an integer block ``k``
sends every base generator to its ``k``-th power and an omitted base
generator is fixed.  Commutators expand to ``u^-1 v^-1 u v``.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Union

from .constructions import (
    closure_from_permutations,
    cyclic_group,
    direct_product,
    quotient,
    semidirect_product,
)
from .errors import (
    ActionNotHomomorphic,
    ArityError,
    NotAnAutomorphism,
    SemidirectNonexistent,
    SpecSyntaxError,
    UnknownGenerator,
)
from .fp import DEFAULT_MAX_COSETS, finitely_presented
from .groups import DEFAULT_ORDER_CAP, GroupTable, normal_closure
from .words import Word, commutator, evaluate_word, generator_assignment, render_word

BASE_LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Direct:
    left: "GroupSpec"
    right: "GroupSpec"


# an action block is either an int (power shorthand) or ((letter, word), ...)
ActionBlock = Union[int, tuple]


@dataclass(frozen=True)
class Semidirect:
    base: "GroupSpec"
    actor: "GroupSpec"
    actions: tuple


@dataclass(frozen=True)
class Perm:
    degree: int
    generators: tuple  # of tuples of cycles, each cycle a tuple of points


@dataclass(frozen=True)
class FP:
    generators: tuple
    relators: tuple


@dataclass(frozen=True)
class Quotient:
    inner: "GroupSpec"
    normal_seeds: tuple


GroupSpec = Union[Cyclic, Direct, Semidirect, Perm, FP, Quotient]


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<punct>[()\[\],;*^-])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecSyntaxError("unexpected character", line, pos - line_start + 1, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, cls=SpecSyntaxError, tok=None):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col, tok.text or "<end of input>")

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def expect(self, text) -> _Tok:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def integer(self, what="integer", minimum=1) -> int:
        t = self.tok
        if t.kind != "int":
            raise self.error(f"expected {what}")
        self.i += 1
        v = int(t.text)
        if v < minimum:
            raise self.error(f"{what} must be >= {minimum}", tok=t)
        return v

    def name(self) -> str:
        t = self.tok
        if t.kind != "name":
            raise self.error("expected a generator name")
        self.i += 1
        return t.text

    # spec level

    def spec(self) -> GroupSpec:
        node = self.term()
        while self.tok.kind == "name" and self.tok.text == "x":
            self.i += 1
            node = Direct(node, self.term())
        return node

    def term(self) -> GroupSpec:
        t = self.tok
        if self.accept("("):
            node = self.spec()
            self.expect(")")
            return node
        if t.kind != "name":
            raise self.error("expected a group term")
        head = t.text
        self.i += 1
        self.expect("(")
        if head == "C":
            node = Cyclic(self.integer("cyclic order"))
        elif head == "perm":
            node = self.perm_body()
        elif head == "sd":
            node = self.sd_body()
        elif head == "fp":
            node = self.fp_body()
        elif head == "quot":
            inner = self.spec()
            self.expect(";")
            seeds = self.word_list()
            if isinstance(inner, FP):
                _check_names(seeds, set(inner.generators), self, t)
            node = Quotient(inner, seeds)
        else:
            raise self.error(f"unknown constructor {head!r}", tok=t)
        if self.at(",") or self.at(";"):
            raise self.error(f"too many arguments to {head}", ArityError)
        self.expect(")")
        return node

    def perm_body(self) -> Perm:
        degree = self.integer("degree")
        self.expect(";")
        gens = [self.perm_generator(degree)]
        while self.accept(","):
            gens.append(self.perm_generator(degree))
        return Perm(degree, tuple(gens))

    def perm_generator(self, degree) -> tuple:
        cycles = []
        start = self.tok
        while self.at("("):
            self.i += 1
            points = []
            while not self.at(")"):
                pt = self.tok
                p = self.integer("point")
                if p > degree:
                    raise self.error(f"point {p} exceeds degree {degree}", tok=pt)
                points.append(p)
                self.accept(",")
            self.expect(")")
            if points:
                cycles.append(tuple(points))
        if start is self.tok:
            raise self.error("expected a permutation in cycle notation")
        flat = [p for c in cycles for p in c]
        if len(set(flat)) != len(flat):
            raise self.error("cycles of one permutation must be disjoint", tok=start)
        return tuple(cycles)

    def sd_body(self) -> Semidirect:
        base = self.spec()
        self.expect(",")
        actor = self.spec()
        self.expect(",")
        self.expect("[")
        blocks = [self.action_block()]
        while self.accept(";"):
            blocks.append(self.action_block())
        self.expect("]")
        return Semidirect(base, actor, tuple(blocks))

    def action_block(self):
        if self.tok.kind == "int":
            return self.integer("power", minimum=0)
        if self.accept("-"):
            return -self.integer("power", minimum=0)
        maps = []
        seen = set()
        while True:
            t = self.tok
            key = self.name()
            if len(key) != 1 or key not in BASE_LETTERS:
                raise self.error("base generators are named a, b, c, ...", UnknownGenerator, tok=t)
            if key in seen:
                raise self.error(f"base generator {key!r} mapped twice", tok=t)
            seen.add(key)
            self.expect("->")
            w = self.word()
            _check_names((w,), set(BASE_LETTERS), self, t)
            maps.append((key, w))
            if not self.accept(","):
                break
        return tuple(maps)

    def fp_body(self) -> FP:
        start = self.tok
        names = [self.name()]
        while self.accept(","):
            names.append(self.name())
        if len(set(names)) != len(names):
            raise self.error("duplicate generator name", tok=start)
        self.expect(";")
        rels = self.word_list()
        _check_names(rels, set(names), self, start)
        return FP(tuple(names), rels)

    # word level

    def word_list(self) -> tuple:
        if self.at(")"):
            return ()
        words = [self.word()]
        while self.accept(","):
            words.append(self.word())
        return tuple(words)

    def word(self) -> Word:
        w = self.factor()
        while True:
            if self.accept("*"):
                w = w * self.factor()
            elif self.tok.kind in ("name", "int") or self.at("(") or self.at("["):
                w = w * self.factor()
            else:
                return w

    def factor(self) -> Word:
        w = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            w = w ** (sign * self.integer("exponent", minimum=0))
        return w

    def atom(self) -> Word:
        t = self.tok
        if t.kind == "name":
            self.i += 1
            return Word.gen(t.text)
        if t.kind == "int":
            if t.text != "1":
                raise self.error("only 1 may appear as a number inside a word")
            self.i += 1
            return Word()
        if self.accept("("):
            w = self.word()
            self.expect(")")
            return w
        if self.accept("["):
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator(u, v)
        raise self.error("expected a word")


def _check_names(words, known, parser, tok):
    for w in words:
        missing = w.names() - known
        if missing:
            raise parser.error(f"undeclared generator(s) {sorted(missing)}", UnknownGenerator, tok=tok)


def parse_spec(text: str) -> GroupSpec:
    p = _Parser(text)
    node = p.spec()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return node


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return w


def _render_words(words) -> str:
    return ", ".join(render_word(w) for w in words)


def render_spec(spec: GroupSpec) -> str:
    if isinstance(spec, Cyclic):
        return f"C({spec.n})"
    if isinstance(spec, Direct):
        right = render_spec(spec.right)
        if isinstance(spec.right, Direct):
            right = f"({right})"
        return f"{render_spec(spec.left)} x {right}"
    if isinstance(spec, Perm):
        gens = []
        for g in spec.generators:
            gens.append("".join("(" + " ".join(map(str, c)) + ")" for c in g) or "()")
        return f"perm({spec.degree}; {', '.join(gens)})"
    if isinstance(spec, Semidirect):
        blocks = []
        for b in spec.actions:
            if isinstance(b, int):
                blocks.append(str(b))
            else:
                blocks.append(", ".join(f"{k} -> {render_word(w)}" for k, w in b))
        return f"sd({render_spec(spec.base)}, {render_spec(spec.actor)}, [{'; '.join(blocks)}])"
    if isinstance(spec, FP):
        return f"fp({', '.join(spec.generators)}; {_render_words(spec.relators)})"
    if isinstance(spec, Quotient):
        return f"quot({render_spec(spec.inner)}; {_render_words(spec.normal_seeds)})"
    raise TypeError(f"not a group spec: {spec!r}")


def build(
    spec: GroupSpec | str,
    *,
    cap: int = DEFAULT_ORDER_CAP,
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> GroupTable:
    """Construct the group a spec describes; its label is the rendered spec."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    label = render_spec(spec)
    if isinstance(spec, Cyclic):
        return cyclic_group(spec.n, cap=cap)
    if isinstance(spec, Direct):
        G = direct_product(build(spec.left, cap=cap, max_cosets=max_cosets),
                           build(spec.right, cap=cap, max_cosets=max_cosets), cap=cap)
        G.label = label
        return G
    if isinstance(spec, Perm):
        return closure_from_permutations(spec.degree, spec.generators, cap=cap, label=label)
    if isinstance(spec, FP):
        return finitely_presented(spec.generators, spec.relators, max_cosets=max_cosets, cap=cap, label=label)
    if isinstance(spec, Quotient):
        G = build(spec.inner, cap=cap, max_cosets=max_cosets)
        assignment = generator_assignment(G)
        seeds = [evaluate_word(G, assignment, w) for w in spec.normal_seeds]
        return quotient(G, normal_closure(G, seeds), label=label).target
    if isinstance(spec, Semidirect):
        return _build_semidirect(spec, label, cap, max_cosets)
    raise TypeError(f"not a group spec: {spec!r}")


def _build_semidirect(spec: Semidirect, label, cap, max_cosets) -> GroupTable:
    base = build(spec.base, cap=cap, max_cosets=max_cosets)
    actor = build(spec.actor, cap=cap, max_cosets=max_cosets)
    k = len(base.generators)
    if k > len(BASE_LETTERS):
        raise ArityError(f"base has {k} generators; at most {len(BASE_LETTERS)} can be named")
    if len(spec.actions) != len(actor.generators):
        raise ArityError(
            f"sd action has {len(spec.actions)} blocks but the actor has {len(actor.generators)} generators"
        )
    letters = BASE_LETTERS[:k]
    assignment = dict(zip(letters, base.generators))
    images = []
    shorthand = False
    for block in spec.actions:
        if isinstance(block, int):
            shorthand = True
            images.append([base.power(g, block) for g in base.generators])
            continue
        mapping = dict(block)
        unknown = set(mapping) - set(letters)
        for w in mapping.values():
            unknown |= w.names() - set(letters)
        if unknown:
            raise UnknownGenerator(f"base has generators {', '.join(letters)}; got {sorted(unknown)}")
        images.append([
            evaluate_word(base, assignment, mapping[ch]) if ch in mapping else g
            for ch, g in zip(letters, base.generators)
        ])
    try:
        return semidirect_product(base, actor, images, cap=cap, label=label)
    except (NotAnAutomorphism, ActionNotHomomorphic) as exc:
        if shorthand:
            raise SemidirectNonexistent(
                f"power action in {label} is not an automorphism action: {exc} "
                "(a nontrivial Cn : Cm power action exists iff gcd(phi(n), m) > 1)"
            ) from exc
        raise
