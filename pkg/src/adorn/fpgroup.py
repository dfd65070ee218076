"""Words and presentations of finitely presented groups.

A word is a sequence of letters ``(g, s)`` where ``g`` is a generator index
and ``s`` is +1 or -1.  Presentations store their relators freely and
cyclically reduced, rotated to a canonical least rotation (comparing a word
against its inverse as well), so equal relators compare equal as ``Word``
values.

The ASCII grammar accepted by :func:`parse_presentation`::

    presentation := "<" gens "|" relators ">"
    gens         := [ name ("," name)* ]
    relators     := [ relator ("," relator)* ]
    relator      := word | word "=" word        (u = v is stored as u v^-1)
    word         := term+
    term         := name ["^" integer] | "(" word ")" ["^" integer]

Whitespace is insignificant; integers may be negative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class PresentationSyntaxError(ValueError):
    """Raised on malformed presentation text; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


Letter = tuple[int, int]


class Word:
    """Immutable word in the free group on indexed generators.

    Multiplication concatenates without reducing; use :func:`free_reduce`
    when a reduced representative is needed.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = tuple(letters)

    @staticmethod
    def gen(index: int, sign: int = 1) -> "Word":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return Word(((index, sign),))

    def inverse(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sum(self, gen: int) -> int:
        return sum(s for g, s in self.letters if g == gen)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)!r})"


EMPTY_WORD = Word()


def free_reduce(w: Word) -> Word:
    """Cancel all adjacent ``g g^-1`` pairs.  Idempotent, length-non-increasing."""
    out: list[Letter] = []
    for g, s in w.letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return Word(out)


def cyclically_reduce(w: Word) -> Word:
    """Freely reduce, then strip cancelling first/last letters.

    The result is conjugate to the input and both freely and cyclically
    reduced.
    """
    letters = list(free_reduce(w).letters)
    i, j = 0, len(letters)
    while j - i >= 2:
        g1, s1 = letters[i]
        g2, s2 = letters[j - 1]
        if g1 == g2 and s1 == -s2:
            i += 1
            j -= 1
        else:
            break
    return Word(letters[i:j])


def _letter_key(letter: Letter) -> tuple[int, int]:
    g, s = letter
    return (g, 0 if s > 0 else 1)


def _word_key(letters: tuple[Letter, ...]) -> tuple[tuple[int, int], ...]:
    return tuple(_letter_key(l) for l in letters)


def canonical_relator(w: Word) -> Word:
    """Cyclically reduce and rotate to the least rotation of ``w`` or ``w^-1``.

    Relators are only defined up to cyclic rotation and inversion, so this
    canonical representative makes duplicate detection a plain equality test.
    """
    w = cyclically_reduce(w)
    n = len(w)
    if n == 0:
        return w
    best: tuple[Letter, ...] | None = None
    for base in (w.letters, w.inverse().letters):
        for i in range(n):
            cand = base[i:] + base[:i]
            if best is None or _word_key(cand) < _word_key(best):
                best = cand
    return Word(best)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class GroupPresentation:
    """A finite presentation: generator names plus relator words.

    Relators are stored freely and cyclically reduced in canonical rotation;
    words that reduce to the identity are dropped at construction.
    """

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str = field(default="", compare=False)

    def __init__(self, generator_names: Iterable[str], relators: Iterable[Word] = (),
                 name: str = ""):
        names = tuple(generator_names)
        if len(set(names)) != len(names):
            raise ValueError(f"generator names not pairwise distinct: {names}")
        for nm in names:
            if not _NAME_RE.match(nm):
                raise ValueError(f"invalid generator name: {nm!r}")
        rels = []
        for r in relators:
            if r.max_generator() >= len(names):
                raise ValueError(
                    f"relator uses generator index {r.max_generator()} "
                    f"but presentation has {len(names)} generators")
            r = canonical_relator(r)
            if len(r):
                rels.append(r)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(rels))
        object.__setattr__(self, "name", name)

    @property
    def n_generators(self) -> int:
        return len(self.generator_names)

    @property
    def n_relators(self) -> int:
        return len(self.relators)

    @property
    def total_relator_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def word_str(self, w: Word) -> str:
        return format_word(w, self.generator_names)

    def __str__(self) -> str:
        return format_presentation(self)

    def with_name(self, name: str) -> "GroupPresentation":
        return GroupPresentation(self.generator_names, self.relators, name=name)

    def with_relators(self, extra: Iterable[Word], name: str | None = None) -> "GroupPresentation":
        """Quotient presentation: same generators, added relators."""
        return GroupPresentation(self.generator_names,
                                 self.relators + tuple(extra),
                                 name=self.name if name is None else name)


@dataclass(frozen=True)
class SimplificationCaps:
    """Resource bounds for Tietze simplification; all strictly positive."""

    max_generators: int = 64
    max_total_relator_length: int = 65536
    max_passes: int = 32

    def __post_init__(self):
        if min(self.max_generators, self.max_total_relator_length, self.max_passes) <= 0:
            raise ValueError("simplification caps must be strictly positive")


DEFAULT_SIMPLIFICATION_CAPS = SimplificationCaps()


class Simplified(NamedTuple):
    presentation: GroupPresentation
    hit_caps: bool


# ---------------------------------------------------------------------------
# parsing / printing


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>-?\d+)|(?P<sym>[<>,|^()=])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.gen_index: dict[str, int] = {}

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str) -> None:
        kind, val, pos = self.next()
        if kind != "sym" or val != sym:
            raise PresentationSyntaxError(f"expected {sym!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> GroupPresentation:
        self.expect_sym("<")
        names = self.parse_gen_list()
        self.gen_index = {nm: i for i, nm in enumerate(names)}
        self.expect_sym("|")
        relators = self.parse_relator_list(names)
        self.expect_sym(">")
        kind, val, pos = self.peek()
        if kind != "end":
            raise PresentationSyntaxError(f"trailing input {val!r}", pos)
        return GroupPresentation(names, relators, name=self.text.strip())

    def parse_gen_list(self) -> tuple[str, ...]:
        names: list[str] = []
        kind, val, pos = self.peek()
        if kind == "sym" and val == "|":
            return ()
        while True:
            kind, val, pos = self.next()
            if kind != "name":
                raise PresentationSyntaxError(f"expected generator name, found {val!r}", pos)
            if val in names:
                raise PresentationSyntaxError(f"duplicate generator name {val!r}", pos)
            names.append(val)
            kind, val, pos = self.peek()
            if kind == "sym" and val == ",":
                self.next()
                continue
            return tuple(names)

    def parse_relator_list(self, names: tuple[str, ...]) -> list[Word]:
        kind, val, pos = self.peek()
        if kind == "sym" and val == ">":
            return []
        if not names:
            raise PresentationSyntaxError(
                "empty generator list with non-empty relator", pos)
        relators = []
        while True:
            relators.append(self.parse_relator())
            kind, val, pos = self.peek()
            if kind == "sym" and val == ",":
                self.next()
                continue
            return relators

    def parse_relator(self) -> Word:
        left = self.parse_word()
        kind, val, _ = self.peek()
        if kind == "sym" and val == "=":
            self.next()
            right = self.parse_word()
            return left * right.inverse()
        return left

    def parse_word(self) -> Word:
        letters: list[Letter] = []
        first = True
        while True:
            kind, val, pos = self.peek()
            if kind == "name" or (kind == "sym" and val == "("):
                letters.extend(self.parse_term().letters)
                first = False
            elif first:
                raise PresentationSyntaxError(f"expected a word, found {val or 'end of input'!r}", pos)
            else:
                return Word(letters)

    def parse_term(self) -> Word:
        kind, val, pos = self.next()
        if kind == "name":
            if val not in self.gen_index:
                raise PresentationSyntaxError(f"undeclared generator {val!r}", pos)
            base = Word.gen(self.gen_index[val])
        elif kind == "sym" and val == "(":
            base = self.parse_word()
            self.expect_sym(")")
        else:
            raise PresentationSyntaxError(f"expected generator or '(', found {val!r}", pos)
        kind, val, pos = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise PresentationSyntaxError(f"expected integer exponent, found {val!r}", pos)
            return base ** int(val)
        return base


def parse_presentation(text: str) -> GroupPresentation:
    """Parse ``< a, b | a^2, (a b)^3 >`` style presentation text."""
    return _Parser(text).parse()


def format_word(w: Word, names: Iterable[str]) -> str:
    """Render a word with exponent-collapsed runs, e.g. ``a^2 b^-1``."""
    names = tuple(names)
    if not len(w):
        return "1"
    parts = []
    run_gen, run_exp = w.letters[0][0], w.letters[0][1]
    for g, s in w.letters[1:]:
        if g == run_gen and (run_exp > 0) == (s > 0):
            run_exp += s
        else:
            parts.append((run_gen, run_exp))
            run_gen, run_exp = g, s
    parts.append((run_gen, run_exp))
    return " ".join(
        names[g] if e == 1 else f"{names[g]}^{e}" for g, e in parts)


def format_presentation(p: GroupPresentation) -> str:
    left = ", ".join(p.generator_names)
    right = ", ".join(p.word_str(r) for r in p.relators)
    if left and right:
        return f"< {left} | {right} >"
    if left:
        return f"< {left} | >"
    return "< | >"


# ---------------------------------------------------------------------------
# Tietze simplification


def _substitute(w: Word, gen: int, repl: Word) -> Word:
    out: list[Letter] = []
    inv = repl.inverse()
    for g, s in w.letters:
        if g == gen:
            out.extend(repl.letters if s > 0 else inv.letters)
        else:
            out.append((g, s))
    return Word(out)


def _dedupe(rels: list[Word]) -> list[Word]:
    seen: set[Word] = set()
    out = []
    for r in rels:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def _elimination_candidates(rels: list[Word], n_gens: int):
    """All (cost, relator-length, gen, relator-index) for generators occurring
    exactly once in some relator; lowest key applied first."""
    occ = [0] * n_gens
    for r in rels:
        for g, _ in r:
            occ[g] += 1
    cands = []
    for ri, r in enumerate(rels):
        counts: dict[int, int] = {}
        for g, _ in r:
            counts[g] = counts.get(g, 0) + 1
        for g, c in counts.items():
            if c == 1:
                elsewhere = occ[g] - 1
                cost = elsewhere * (len(r) - 2) - len(r)
                cands.append((cost, len(r), g, ri))
    cands.sort()
    return cands


def _eliminate(rels: list[Word], gen: int, ri: int) -> list[Word]:
    r = rels[ri]
    k = next(i for i, (g, _) in enumerate(r.letters) if g == gen)
    rot = r.letters[k:] + r.letters[:k]
    sign = rot[0][1]
    rest = Word(rot[1:])
    repl = rest.inverse() if sign > 0 else rest
    out = []
    for i, s in enumerate(rels):
        if i == ri:
            continue
        s2 = canonical_relator(_substitute(s, gen, repl))
        if len(s2):
            out.append(s2)
    return out


def _cyclic_subword_sources(s: Word, length: int) -> dict[tuple[Letter, ...], Word]:
    """Subwords of the given length of the cyclic words ``s`` and ``s^-1``,
    mapped to the inverse of their cyclic complement (a shorter equivalent)."""
    out: dict[tuple[Letter, ...], Word] = {}
    n = len(s)
    for base in (s.letters, s.inverse().letters):
        doubled = base + base
        for i in range(n):
            u = doubled[i:i + length]
            v = doubled[i + length:i + n]
            if u not in out:
                out[u] = Word(v).inverse()
    return out


def _subword_pass(rels: list[Word]) -> tuple[list[Word], bool]:
    """Replace long shared subwords (length >= 3, and more than half of the
    source relator) by the shorter complement; total length strictly drops."""
    for ri in range(len(rels)):
        r = rels[ri]
        for sj in range(len(rels)):
            s = rels[sj]
            if sj == ri or len(s) > len(r) or len(s) < 4:
                continue
            low = max(3, len(s) // 2 + 1)
            for length in range(min(len(s) - 1, len(r)), low - 1, -1):
                sources = _cyclic_subword_sources(s, length)
                for i in range(len(r) - length + 1):
                    u = r.letters[i:i + length]
                    if u in sources:
                        repl = sources[u]
                        new = Word(r.letters[:i] + repl.letters + r.letters[i + length:])
                        new = canonical_relator(new)
                        out = list(rels)
                        if len(new):
                            out[ri] = new
                        else:
                            del out[ri]
                        return out, True
    return rels, False


def tietze_simplify(p: GroupPresentation,
                    caps: SimplificationCaps = DEFAULT_SIMPLIFICATION_CAPS) -> Simplified:
    """Deterministic presentation simplification within resource caps.

    Each pass runs, in order: trivial-relator deletion, duplicate deletion
    (up to rotation and inversion), elimination of generators occurring
    exactly once in some relator (cheapest substitution first, skipped if it
    would push the total relator length over the cap), and replacement of
    shared subwords of length >= 3 by shorter complements.  Passes repeat to
    a fixed point or until a cap is hit; the result is flagged ``hit_caps``
    when it is not known to be fully simplified.
    """
    alive = list(range(p.n_generators))
    rels = [canonical_relator(r) for r in p.relators]
    rels = [r for r in rels if len(r)]
    hit = False

    passes = 0
    changed = True
    while changed:
        if passes >= caps.max_passes:
            hit = True
            break
        passes += 1
        changed = False

        before = len(rels)
        rels = _dedupe([r for r in rels if len(r)])
        if len(rels) != before:
            changed = True

        while True:
            cands = _elimination_candidates(rels, p.n_generators)
            cands = [c for c in cands if c[2] in alive]
            applied = False
            for cost, _, g, ri in cands:
                new_rels = _eliminate(rels, g, ri)
                if sum(len(r) for r in new_rels) > caps.max_total_relator_length:
                    hit = True  # a legal elimination was blocked by the cap
                    continue
                rels = _dedupe(new_rels)
                alive.remove(g)
                applied = changed = True
                break
            if not applied:
                break

        rels, subbed = _subword_pass(rels)
        if subbed:
            changed = True

    remap = {g: i for i, g in enumerate(alive)}
    final = [Word((remap[g], s) for g, s in r) for r in rels]
    final.sort(key=lambda w: (len(w), _word_key(w.letters)))
    out = GroupPresentation(tuple(p.generator_names[g] for g in alive), final,
                            name=p.name)
    if out.n_generators > caps.max_generators:
        hit = True
    if out.total_relator_length > caps.max_total_relator_length:
        hit = True
    return Simplified(out, hit)
