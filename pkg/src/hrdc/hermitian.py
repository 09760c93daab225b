"""Hermitian matrices and forms over F_{q^2}, rank, and exact character sums."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from hrdc.field_tower import FieldTower, TableField, fq2_from_json, fq2_to_json

Rows = tuple[tuple[int, ...], ...]


def matrix_rank(rows: Sequence[Sequence[int]], F: TableField) -> int:
    """Rank over ``F`` by Gaussian elimination, pivoting on the first nonzero."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    mul, sub, inv = F.mul_table, F.sub_table, F.inv_table
    nrows, ncols = len(M), len(M[0])
    rank = 0
    for c in range(ncols):
        piv = rank
        while piv < nrows and M[piv][c] == 0:
            piv += 1
        if piv == nrows:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        scale = mul[inv[M[rank][c]]]
        prow = [scale[x] for x in M[rank]]
        for r in range(rank + 1, nrows):
            f = M[r][c]
            if f:
                mf = mul[f]
                M[r] = [sub[a][mf[b]] for a, b in zip(M[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: TableField) -> Rows:
    add, mul = F.add_table, F.mul_table
    cols = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in cols:
            s = 0
            for a, b in zip(row, col):
                if a and b:
                    s = add[s][mul[a][b]]
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


def conj_transpose(rows: Sequence[Sequence[int]], F: TableField) -> Rows:
    """A* over F_{q^2}: entrywise x -> x^q, then transpose."""
    conj = F.frobenius_table
    return tuple(tuple(conj[x] for x in col) for col in zip(*rows))


@dataclass(frozen=True, order=True)
class HermitianMatrix:
    """An n x n matrix over F_{q^2} with A* = A.

    Entries are F_{q^2} ints of ``tower``.  Ordering compares the rows,
    which is the canonical order used for sorting codes.
    """

    rows: Rows
    tower: FieldTower = field(compare=False, repr=False, hash=False)

    def __post_init__(self):
        if conj_transpose(self.rows, self.tower.fq2) != self.rows:
            raise ValueError("matrix is not Hermitian")

    @classmethod
    def trusted(cls, rows: Rows, tower: FieldTower) -> HermitianMatrix:
        """Skip the Hermitian check (callers that build by construction)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "tower", tower)
        return obj

    @classmethod
    def zero(cls, n: int, tower: FieldTower) -> HermitianMatrix:
        return cls.trusted(tuple((0,) * n for _ in range(n)), tower)

    @classmethod
    def identity(cls, n: int, tower: FieldTower) -> HermitianMatrix:
        return cls.trusted(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), tower)

    @classmethod
    def diagonal_rank(cls, n: int, i: int, tower: FieldTower) -> HermitianMatrix:
        """diag(1, ..., 1, 0, ..., 0) with i ones."""
        return cls.trusted(tuple(tuple(int(r == c and r < i) for c in range(n)) for r in range(n)), tower)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __add__(self, other: HermitianMatrix) -> HermitianMatrix:
        add = self.tower.fq2.add_table
        return HermitianMatrix.trusted(
            tuple(tuple(add[a][b] for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.tower)

    def __sub__(self, other: HermitianMatrix) -> HermitianMatrix:
        sub = self.tower.fq2.sub_table
        return HermitianMatrix.trusted(
            tuple(tuple(sub[a][b] for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.tower)

    def __neg__(self) -> HermitianMatrix:
        neg = self.tower.fq2.neg_table
        return HermitianMatrix.trusted(tuple(tuple(neg[a] for a in r) for r in self.rows), self.tower)

    def scale(self, c: int) -> HermitianMatrix:
        """Multiply by an F_q scalar (stays Hermitian)."""
        if c >= self.tower.q:
            raise ValueError("Hermitian matrices are only closed under F_q scalars")
        row = self.tower.fq2.mul_table[c]
        return HermitianMatrix.trusted(tuple(tuple(row[a] for a in r) for r in self.rows), self.tower)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def rank(self) -> int:
        return matrix_rank(self.rows, self.tower.fq2)

    def congruent(self, P: Sequence[Sequence[int]]) -> HermitianMatrix:
        """P A P*."""
        F = self.tower.fq2
        return HermitianMatrix.trusted(matmul(matmul(P, self.rows, F), conj_transpose(P, F), F), self.tower)

    def to_json(self) -> list:
        return [[fq2_to_json(self.tower, x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj: list, tower: FieldTower) -> HermitianMatrix:
        return cls(tuple(tuple(fq2_from_json(tower, x) for x in r) for r in obj), tower)


def rank(A: HermitianMatrix) -> int:
    return A.rank()


def hermitian_count(n: int, q: int) -> int:
    return q ** (n * n)


def iter_hermitian(n: int, tower: FieldTower) -> Iterator[HermitianMatrix]:
    """All of X(n, q): diagonal over F_q, strict upper triangle over F_{q^2}."""
    q, q2 = tower.q, tower.fq2.order
    conj = tower.fq2.frobenius_table
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in itertools.product(range(q), repeat=n):
        for offd in itertools.product(range(q2), repeat=len(upper)):
            M = [[0] * n for _ in range(n)]
            for i, d in enumerate(diag):
                M[i][i] = d
            for (i, j), v in zip(upper, offd):
                M[i][j] = v
                M[j][i] = conj[v]
            yield HermitianMatrix.trusted(tuple(tuple(r) for r in M), tower)


# ---------------------------------------------------------------------------
# forms on F_{q^2n}


@dataclass(frozen=True)
class HermitianForm:
    """H(x, y) = Tr(sum of c * x^(q^e1) * y^(q^e2)) over the terms (c, e1, e2).

    ``c`` is a raw top-level element of ``tower``.
    """

    terms: tuple[tuple[tuple[int, ...], int, int], ...]
    tower: FieldTower = field(repr=False)

    def evaluate_raw(self, x, y) -> int:
        t = self.tower
        total = t.zero
        for c, e1, e2 in self.terms:
            if not any(c):
                continue
            total = t.add_raw(total, t.mul_raw(c, t.mul_raw(t.frob_raw(x, e1), t.frob_raw(y, e2))))
        return t.trace_raw(total)


def _basis_powers(t: FieldTower) -> list[list[tuple[int, ...]]]:
    """frob[e][i] = xi_i^(q^e) for e < 2n."""
    cached = getattr(t, "_basis_powers_cache", None)
    if cached is None:
        cached = [[t.frob_raw(b, e) for b in t.basis] for e in range(2 * t.n)]
        t._basis_powers_cache = cached
    return cached


def gram_rows(H: HermitianForm) -> Rows:
    t = H.tower
    n = t.n
    bp = _basis_powers(t)
    out = [[0] * n for _ in range(n)]
    for c, e1, e2 in H.terms:
        if not any(c):
            continue
        e1 %= 2 * n
        e2 %= 2 * n
        for i in range(n):
            left = t.mul_raw(c, bp[e1][i])
            for j in range(n):
                v = t.trace_raw(t.mul_raw(left, bp[e2][j]))
                out[i][j] = t.fq2.add_table[out[i][j]][v]
    return tuple(tuple(r) for r in out)


def form_to_matrix(H: HermitianForm) -> HermitianMatrix:
    """Gram matrix (H(xi_i, xi_j)) in the polynomial basis xi_i = beta^i."""
    rows = gram_rows(H)
    try:
        return HermitianMatrix(rows, H.tower)
    except ValueError:
        raise ValueError("form evaluates to a non-Hermitian Gram matrix") from None


def radical_dim(H: HermitianForm) -> int:
    """dim over F_{q^2} of {x : H(x, xi_j) = 0 for all j}.

    With x = sum x_i xi_i the conditions read sum_i x_i H(xi_i, xi_j) = 0,
    one linear equation per j, each evaluated through the form itself.
    """
    t = H.tower
    n = t.n
    system = [[H.evaluate_raw(t.basis[i], t.basis[j]) for i in range(n)] for j in range(n)]
    return n - matrix_rank(system, t.fq2)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CyclotomicInteger:
    """sum_t counts[t] * zeta_p^t in Z[zeta_p]."""

    counts: tuple[int, ...]

    @classmethod
    def zero(cls, p: int) -> CyclotomicInteger:
        return cls((0,) * p)

    @property
    def p(self) -> int:
        return len(self.counts)

    def __add__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        return CyclotomicInteger(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def shift(self, c: int) -> CyclotomicInteger:
        """Add ``c`` to every coordinate; the value is unchanged since 1 + zeta + ... = 0."""
        return CyclotomicInteger(tuple(a + c for a in self.counts))

    def normalized(self) -> CyclotomicInteger:
        return self.shift(-min(self.counts))

    def is_rational(self) -> bool:
        return len(set(self.counts[1:])) <= 1

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self.counts} is not a rational integer")
        if self.p == 1:
            return self.counts[0]
        return self.counts[0] - self.counts[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicInteger) or other.p != self.p:
            return NotImplemented
        diff = [a - b for a, b in zip(self.counts, other.counts)]
        return len(set(diff)) == 1

    def __hash__(self) -> int:
        return hash(self.normalized().counts)


def cyc_to_int(z: CyclotomicInteger) -> int:
    return z.to_int()


def pairing(A: HermitianMatrix, B: HermitianMatrix) -> int:
    """Exponent t in [0, p) with <A, B> = zeta_p^t, t = Tr_{F_q/F_p}(tr(A* B))."""
    if A.n != B.n or A.tower.fq2 is not B.tower.fq2:
        raise ValueError("pairing needs matrices of equal size over one field")
    F = A.tower.fq2
    conj, add, mul = F.frobenius_table, F.add_table, F.mul_table
    # tr(A* B) = sum over all entries of conj(A_rc) * B_rc
    s = 0
    for ra, rb in zip(A.rows, B.rows):
        for a, b in zip(ra, rb):
            if a and b:
                s = add[s][mul[conj[a]][b]]
    if s >= A.tower.q:
        raise ValueError("tr(A*B) is not in F_q; inputs are not Hermitian")
    return A.tower.fq.abs_trace_table[s]


def char_sum(S: Iterable[HermitianMatrix], B: HermitianMatrix) -> CyclotomicInteger:
    counts = [0] * B.tower.p
    for A in S:
        counts[pairing(A, B)] += 1
    return CyclotomicInteger(tuple(counts))


# ---------------------------------------------------------------------------
# serialization (JSON lines, header carries the tower)

CODE_FORMAT = "hrdc-code/1"


def header_json(tower: FieldTower, n: int, meta: dict | None = None) -> dict:
    out = {"format": CODE_FORMAT, "tower": tower.descriptor(), "n": n}
    if meta:
        out["meta"] = meta
    return out
