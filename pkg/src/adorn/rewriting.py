"""Presentations of finite-index subgroups from coset tables.

Given a complete coset table for a subgroup H, the Schreier generators are
one per non-tree edge of the coset graph (the tree being the BFS transversal
tree), and relators are obtained by rewriting every relator of the ambient
group once per coset.  The raw presentation has exactly
``n_cosets * n_generators - (n_cosets - 1)`` generators; it is then passed
through Tietze simplification.
"""

from __future__ import annotations

from typing import NamedTuple

from .cosets import CosetTable, IncompleteTable
from .fpgroup import (DEFAULT_SIMPLIFICATION_CAPS, GroupPresentation,
                      SimplificationCaps, Simplified, Word, cyclically_reduce,
                      free_reduce, tietze_simplify)


class _Transversal(NamedTuple):
    words: tuple[Word, ...]
    tree: frozenset[tuple[int, int]]  # (coset, gen) edges used by the BFS tree


def _bfs_transversal(t: CosetTable) -> _Transversal:
    if not t.complete:
        raise IncompleteTable("transversal requires a complete coset table")
    reps: list[Word | None] = [None] * t.n_cosets
    reps[0] = Word()
    tree: set[tuple[int, int]] = set()
    queue = [0]
    qi = 0
    while qi < len(queue):
        a = queue[qi]
        qi += 1
        for g in range(t.n_generators):
            for s in (1, -1):
                b = t.act(a, g, s)
                if reps[b] is None:
                    reps[b] = reps[a] * Word.gen(g, s)
                    tree.add((a, g) if s > 0 else (b, g))
                    queue.append(b)
    return _Transversal(tuple(reps), frozenset(tree))


def schreier_transversal(t: CosetTable) -> tuple[Word, ...]:
    """Breadth-first shortest-lex coset representatives; prefix-closed,
    with the empty word representing coset 0 (the subgroup)."""
    return _bfs_transversal(t).words


def _rewrite(t: CosetTable, tree: frozenset[tuple[int, int]],
             gen_index: dict[tuple[int, int], int], w: Word, start: int) -> Word:
    """Rewrite (transversal[start]) w (transversal[end])^-1 over Schreier
    generators; tree edges contribute nothing."""
    c = start
    out = []
    for g, s in w:
        if s > 0:
            if (c, g) not in tree:
                out.append((gen_index[(c, g)], 1))
            c = t.act(c, g, 1)
        else:
            c2 = t.act(c, g, -1)
            if (c2, g) not in tree:
                out.append((gen_index[(c2, g)], -1))
            c = c2
    return Word(out)


def rewrite_presentation(p: GroupPresentation, t: CosetTable) -> GroupPresentation:
    """Raw subgroup presentation on Schreier generators, before simplification."""
    words, tree = _bfs_transversal(t)
    gen_index: dict[tuple[int, int], int] = {}
    names = []
    for a in range(t.n_cosets):
        for g in range(p.n_generators):
            if (a, g) not in tree:
                gen_index[(a, g)] = len(names)
                names.append(f"x{len(names)}")
    relators = []
    for r in p.relators:
        for a in range(t.n_cosets):
            w = cyclically_reduce(_rewrite(t, tree, gen_index, r, a))
            if len(w):
                relators.append(w)
    return GroupPresentation(tuple(names), relators,
                             name=f"[{p.name or 'G'} : index {t.n_cosets}]")


def subgroup_word(p: GroupPresentation, t: CosetTable, w: Word) -> Word:
    """Express a word lying in the subgroup in terms of its Schreier
    generators (matching :func:`rewrite_presentation` numbering)."""
    words, tree = _bfs_transversal(t)
    if t.word_act(0, w) != 0:
        raise ValueError("word does not lie in the subgroup of coset 0")
    gen_index: dict[tuple[int, int], int] = {}
    k = 0
    for a in range(t.n_cosets):
        for g in range(p.n_generators):
            if (a, g) not in tree:
                gen_index[(a, g)] = k
                k += 1
    return free_reduce(_rewrite(t, tree, gen_index, w, 0))


def reidemeister_schreier(p: GroupPresentation, t: CosetTable,
                          caps: SimplificationCaps = DEFAULT_SIMPLIFICATION_CAPS,
                          ) -> Simplified:
    """Subgroup presentation from a complete coset table, simplified.

    The ``hit_caps`` flag marks a partially simplified result.
    """
    return tietze_simplify(rewrite_presentation(p, t), caps)
