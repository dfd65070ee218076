"""Coset tables for finite-index subgroups.

``todd_coxeter`` is a deduction-stack (Felsch-style) enumerator with full
coincidence handling; ``commutator_coset_table`` builds the table of the
commutator subgroup directly from a finite abelianization, without
enumeration.

Columns pair each generator with its inverse: column ``2*g`` is the action
of generator ``g``, column ``2*g + 1`` its inverse.  Coset 0 is always the
subgroup itself and numbering follows first definition, so tables are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .abelian import abelianization_data
from .fpgroup import GroupPresentation, Word


class CapExceeded(RuntimeError):
    """Enumeration did not close within caps; the index may be infinite."""


class InfiniteIndex(ValueError):
    """The requested subgroup has infinite index (positive abelianization rank)."""


class IncompleteTable(ValueError):
    """Operation requires a complete coset table."""


@dataclass(frozen=True)
class EnumerationCaps:
    max_cosets: int = 20000
    max_deductions: int = 2_000_000

    def __post_init__(self):
        if self.max_cosets <= 0 or self.max_deductions <= 0:
            raise ValueError("enumeration caps must be strictly positive")


DEFAULT_ENUMERATION_CAPS = EnumerationCaps()


def _col(gen: int, sign: int) -> int:
    return 2 * gen + (0 if sign > 0 else 1)


def _inv(col: int) -> int:
    return col ^ 1


def word_cols(w: Word) -> tuple[int, ...]:
    return tuple(_col(g, s) for g, s in w)


class CosetTable:
    """Permutation action of the generators on the cosets of a subgroup."""

    __slots__ = ("n_cosets", "n_generators", "rows", "complete")

    def __init__(self, n_generators: int, rows: Sequence[Sequence[int | None]],
                 complete: bool = True):
        self.n_generators = n_generators
        self.rows = tuple(tuple(r) for r in rows)
        self.n_cosets = len(self.rows)
        self.complete = complete
        for r in self.rows:
            if len(r) != 2 * n_generators:
                raise ValueError("row width does not match generator count")

    def act(self, coset: int, gen: int, sign: int = 1) -> int | None:
        return self.rows[coset][_col(gen, sign)]

    def word_act(self, coset: int, w: Word) -> int | None:
        for g, s in w:
            coset = self.rows[coset][_col(g, s)]
            if coset is None:
                return None
        return coset

    def permutation(self, gen: int, sign: int = 1) -> tuple[int, ...]:
        if not self.complete:
            raise IncompleteTable("permutations require a complete table")
        c = _col(gen, sign)
        return tuple(row[c] for row in self.rows)

    def verify(self, p: GroupPresentation,
               subgroup_gens: Iterable[Word] = ()) -> None:
        """Assert the structural invariants of a complete table (test aid)."""
        assert self.complete
        n = self.n_cosets
        for g in range(self.n_generators):
            fwd = self.permutation(g, 1)
            bwd = self.permutation(g, -1)
            assert sorted(fwd) == list(range(n)), f"generator {g} is not a permutation"
            assert all(bwd[fwd[i]] == i for i in range(n)), f"generator {g} inverse mismatch"
        # transitivity
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for c in frontier:
                for x in self.rows[c]:
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        assert len(seen) == n, "action is not transitive"
        for r in p.relators:
            for c in range(n):
                assert self.word_act(c, r) == c, "relator does not act trivially"
        for w in subgroup_gens:
            assert self.word_act(0, w) == 0, "subgroup generator moves coset 0"


class _Enumerator:
    def __init__(self, n_gens: int, relators: Sequence[Word], caps: EnumerationCaps):
        self.ncols = 2 * n_gens
        self.caps = caps
        self.table: list[list[int | None]] = [[None] * self.ncols]
        self.p = [0]  # union-find over cosets; rep is the least member
        self.defined = 1
        self.deductions: list[tuple[int, int]] = []
        self.deductions_done = 0
        # scans indexed by leading column: every rotation of every relator
        self.edp: list[list[tuple[int, ...]]] = [[] for _ in range(self.ncols)]
        for r in relators:
            cols = word_cols(r)
            for i in range(len(cols)):
                rot = cols[i:] + cols[:i]
                self.edp[rot[0]].append(rot)

    def rep(self, c: int) -> int:
        p = self.p
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, alpha: int, col: int) -> None:
        if self.defined >= self.caps.max_cosets:
            raise CapExceeded(f"coset limit {self.caps.max_cosets} reached")
        beta = len(self.table)
        self.table.append([None] * self.ncols)
        self.p.append(beta)
        self.defined += 1
        self.set_edge(alpha, col, beta)

    def set_edge(self, a: int, col: int, b: int) -> None:
        self.table[a][col] = b
        self.table[b][_inv(col)] = a
        self.deductions.append((a, col))
        self.deductions.append((b, _inv(col)))

    def merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self.merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            dead = queue[qi]
            qi += 1
            row = self.table[dead]
            for col in range(self.ncols):
                delta = row[col]
                if delta is None:
                    continue
                # detach the mirror edge before re-rooting
                if self.table[delta][_inv(col)] == dead:
                    self.table[delta][_inv(col)] = None
                row[col] = None
                mu, nu = self.rep(dead), self.rep(delta)
                target = self.table[mu][col]
                back = self.table[nu][_inv(col)]
                if target is not None:
                    self.merge(nu, target, queue)
                elif back is not None:
                    self.merge(mu, back, queue)
                else:
                    self.table[mu][col] = nu
                    self.table[nu][_inv(col)] = mu
                    self.deductions.append((mu, col))
                    self.deductions.append((nu, _inv(col)))

    def scan(self, alpha: int, cols: tuple[int, ...]) -> None:
        f = alpha
        i, j = 0, len(cols) - 1
        b = alpha
        while i <= j:
            d = self.table[f][cols[i]]
            if d is None:
                break
            f = self.rep(d)
            i += 1
        if i > j:
            if f != b:
                self.coincidence(f, b)
            return
        while j >= i:
            d = self.table[b][_inv(cols[j])]
            if d is None:
                break
            b = self.rep(d)
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif j == i:
            self.set_edge(f, cols[i], b)
        # gap of length >= 2: no information

    def scan_and_fill(self, alpha: int, cols: tuple[int, ...]) -> None:
        if not cols:
            return
        f = alpha
        i, j = 0, len(cols) - 1
        b = alpha
        while True:
            while i <= j:
                d = self.table[f][cols[i]]
                if d is None:
                    break
                f = self.rep(d)
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                d = self.table[b][_inv(cols[j])]
                if d is None:
                    break
                b = self.rep(d)
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                self.set_edge(f, cols[i], b)
                return
            self.define(f, cols[i])

    def process_deductions(self) -> None:
        while self.deductions:
            self.deductions_done += 1
            if self.deductions_done > self.caps.max_deductions:
                raise CapExceeded(f"deduction limit {self.caps.max_deductions} reached")
            a, col = self.deductions.pop()
            a = self.rep(a)
            if self.table[a][col] is None:
                continue  # edge removed by a coincidence
            for rot in self.edp[col]:
                self.scan(a, rot)
                a = self.rep(a)
                if self.table[a][col] is None:
                    break

    def run(self, subgroup_gens: Sequence[Word]) -> CosetTable:
        for w in subgroup_gens:
            self.scan_and_fill(0, word_cols(w))
            self.process_deductions()
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                col = 0
                while col < self.ncols and self.p[alpha] == alpha:
                    if self.table[alpha][col] is None:
                        self.define(alpha, col)
                        self.process_deductions()
                    col += 1
            alpha += 1
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        index = {c: i for i, c in enumerate(live)}
        rows = []
        for c in live:
            row = self.table[c]
            assert all(x is not None for x in row)
            rows.append([index[self.rep(x)] for x in row])
        return CosetTable(self.ncols // 2, rows, complete=True)


def todd_coxeter(p: GroupPresentation, subgroup_gens: Sequence[Word] = (),
                 caps: EnumerationCaps = DEFAULT_ENUMERATION_CAPS) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by the given words.

    Raises :class:`CapExceeded` when the enumeration does not close within
    caps (infinite index, or caps too small).
    """
    for w in subgroup_gens:
        if w.max_generator() >= p.n_generators:
            raise ValueError("subgroup generator uses an unknown generator")
    return _Enumerator(p.n_generators, p.relators, caps).run(tuple(subgroup_gens))


def commutator_coset_table(p: GroupPresentation) -> CosetTable:
    """Coset table of the commutator subgroup, built from G/[G,G].

    Requires the abelianization to be finite (rank 0).  Cosets are the
    elements of the abelian quotient, enumerated in mixed-radix order over
    the torsion coordinates; each generator acts by adding its image.
    """
    data = abelianization_data(p)
    inv = data.invariants
    if inv.rank > 0:
        raise InfiniteIndex(
            f"abelianization has rank {inv.rank}; commutator subgroup has infinite index")
    moduli = inv.torsion
    k = len(moduli)
    n = inv.order()
    assert n is not None

    weights = [1] * k
    for i in range(k - 2, -1, -1):
        weights[i] = weights[i + 1] * moduli[i + 1]

    def encode(coords: tuple[int, ...]) -> int:
        return sum(c * w for c, w in zip(coords, weights))

    elements = list(product(*(range(m) for m in moduli)))

    rows = []
    for coords in elements:
        row: list[int | None] = [None] * (2 * p.n_generators)
        for g in range(p.n_generators):
            img = data.torsion_images[g]
            fwd = tuple((c + x) % m for c, x, m in zip(coords, img, moduli))
            bwd = tuple((c - x) % m for c, x, m in zip(coords, img, moduli))
            row[_col(g, 1)] = encode(fwd)
            row[_col(g, -1)] = encode(bwd)
        rows.append(row)
    assert len(rows) == n
    return CosetTable(p.n_generators, rows, complete=True)
