"""Exact integer linear algebra over relator exponent matrices.

Everything runs on Python bignums: Smith normal form pivots blow up well
past machine precision even for small presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fpgroup import GroupPresentation


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, entries row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return IntMatrix(r, c, tuple(x for row in rows for x in row))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0
                                     for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.at(i, j)
                               for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.at(i, i) for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class AbelianInvariants:
    """Finitely generated abelian group: free rank plus torsion divisor chain.

    ``torsion`` entries are >= 2 and each divides the next; the group is
    finite exactly when ``rank`` is zero.
    """

    rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisor chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion entries must be >= 2")

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " ⊕ ".join(parts) if parts else "trivial"


TRIVIAL_INVARIANTS = AbelianInvariants(0, ())


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Diagonalize ``m`` over Z: returns (d, u, v) with d = u * m * v.

    u and v are unimodular; d is diagonal with non-negative entries forming
    a divisor chain.  Pivots are chosen by minimal non-zero absolute value,
    ties broken by lowest row then lowest column, for reproducibility.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row[dst] += k * row[src]
        arow, asrc = a[dst], a[src]
        for j in range(nc):
            arow[j] += k * asrc[j]
        urow, usrc = u[dst], u[src]
        for j in range(nr):
            urow[j] += k * usrc[j]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def find_pivot(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(nr, nc):
        pos = find_pivot(t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        if a[t][t] < 0:
            negate_row(t)

        clean = True
        for i in range(t + 1, nr):
            if a[i][t]:
                add_row(t, i, -(a[i][t] // a[t][t]))
                if a[i][t]:
                    clean = False
        for j in range(t + 1, nc):
            if a[t][j]:
                add_col(t, j, -(a[t][j] // a[t][t]))
                if a[t][j]:
                    clean = False
        if not clean:
            continue  # smaller remainders appeared; re-pick the pivot

        # enforce the divisor chain: pivot must divide the whole submatrix
        stray = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            add_row(stray, t, 1)
            continue
        t += 1

    d = IntMatrix.from_rows(a) if nr else IntMatrix(0, nc, ())
    return (d,
            IntMatrix.from_rows(u) if nr else IntMatrix(0, 0, ()),
            IntMatrix.from_rows(v) if nc else IntMatrix(0, 0, ()))


def relator_matrix(p: GroupPresentation) -> IntMatrix:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    rows = []
    for r in p.relators:
        row = [0] * p.n_generators
        for g, s in r:
            row[g] += s
        rows.append(row)
    if not rows:
        return IntMatrix(0, p.n_generators, ())
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class AbelianizationData:
    """Invariants of G/[G,G] together with the generator images.

    ``free_images[j]`` are the coordinates of generator j in the Z^rank part;
    ``torsion_images[j]`` the residues in the Z/t_i coordinates (same order
    as ``invariants.torsion``).
    """

    invariants: AbelianInvariants
    free_images: tuple[tuple[int, ...], ...]
    torsion_images: tuple[tuple[int, ...], ...]


def abelianization_data(p: GroupPresentation) -> AbelianizationData:
    n = p.n_generators
    mat = relator_matrix(p).transpose()  # generators x relators
    d, u, _v = smith_normal_form(mat)
    diag = list(d.diagonal()) + [0] * (n - min(mat.rows, mat.cols))
    free_rows = [i for i in range(n) if diag[i] == 0]
    torsion_rows = [i for i in range(n) if diag[i] >= 2]
    invariants = AbelianInvariants(len(free_rows),
                                   tuple(diag[i] for i in torsion_rows))
    free_images = tuple(tuple(u.at(i, j) for i in free_rows) for j in range(n))
    torsion_images = tuple(tuple(u.at(i, j) % diag[i] for i in torsion_rows)
                           for j in range(n))
    return AbelianizationData(invariants, free_images, torsion_images)


def abelianization(p: GroupPresentation) -> AbelianInvariants:
    """Invariants of the cokernel of the relator exponent matrix."""
    return abelianization_data(p).invariants


def is_perfect(p: GroupPresentation) -> bool:
    """True when the abelianization is trivial (the group equals its
    commutator subgroup)."""
    return abelianization(p).is_trivial()


def exterior_square_rank(r: int) -> int:
    """Rank of the exterior square of a free abelian group of rank r."""
    return r * (r - 1) // 2


def word_exponent_images(p: GroupPresentation, data: AbelianizationData,
                         word) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Image of a word in the abelianization, as (free coords, torsion coords)."""
    free = [0] * data.invariants.rank
    tors = [0] * len(data.invariants.torsion)
    for g, s in word:
        for k, x in enumerate(data.free_images[g]):
            free[k] += s * x
        for k, x in enumerate(data.torsion_images[g]):
            tors[k] += s * x
    moduli = data.invariants.torsion
    return tuple(free), tuple(t % m for t, m in zip(tors, moduli))
