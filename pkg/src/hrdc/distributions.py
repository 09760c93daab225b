"""Inner and dual distributions of subsets of X(n, q), designs and dual codes."""

from __future__ import annotations

import functools
import random
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from hrdc.eigen import QTable, neg_q_binomial, q_explicit
from hrdc.errors import CapExceeded, InvariantViolation
from hrdc.field_tower import FieldTower
from hrdc.hermitian import HermitianMatrix, iter_hermitian, pairing

ENUMERATION_CAP = 2**20
ADDITIVITY_PROBES = 64


class FpSpan:
    """Incremental row echelon basis over F_p for membership and rank."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, list[int]] = {}  # pivot column -> row with 1 at pivot

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        p = self.p
        for c, row in self.rows.items():
            f = v[c]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v

    def insert(self, v: Sequence[int]) -> bool:
        """Add ``v``; True when it was independent of the current span."""
        r = self.reduce(v)
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            return False
        inv = pow(r[piv], -1, self.p)
        r = [(x * inv) % self.p for x in r]
        for c, row in self.rows.items():
            if row[piv]:
                f = row[piv]
                self.rows[c] = [(a - f * b) % self.p for a, b in zip(row, r)]
        self.rows[piv] = r
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def prime_coords(A: HermitianMatrix) -> list[int]:
    """F_p coordinates of the upper triangle (which determines A)."""
    F = A.tower.fq2
    out: list[int] = []
    for i, row in enumerate(A.rows):
        for x in row[i:]:
            out.extend(F.prime_digits(x))
    return out


class CodeSet:
    """A deduplicated, canonically sorted set of Hermitian matrices."""

    def __init__(self, matrices: Iterable[HermitianMatrix], tower: FieldTower, n: int | None = None):
        mats = sorted(set(matrices))
        if n is None:
            if not mats:
                raise ValueError("cannot infer n from an empty code")
            n = mats[0].n
        for A in mats:
            if A.n != n or A.tower.fq2 is not tower.fq2:
                raise ValueError("all matrices must share n and the field")
        self.tower = tower
        self.n = n
        self.matrices: tuple[HermitianMatrix, ...] = tuple(mats)
        self._index = {A: k for k, A in enumerate(mats)}

    @property
    def q(self) -> int:
        return self.tower.q

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __contains__(self, A) -> bool:
        return A in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, CodeSet) and self.matrices == other.matrices

    def __hash__(self) -> int:
        return hash(self.matrices)

    @functools.cached_property
    def generators(self) -> list[HermitianMatrix] | None:
        """An F_p-basis of the code when it is additive, else None."""
        return _additive_basis(self)

    @property
    def is_additive(self) -> bool:
        return self.generators is not None


def _is_power(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


def _additive_basis(Y: CodeSet) -> list[HermitianMatrix] | None:
    mats = Y.matrices
    if not mats:
        return None
    zero = HermitianMatrix.zero(Y.n, Y.tower)
    p = Y.tower.p
    if zero not in Y or not _is_power(len(mats), p):
        return None
    # cheap rejection on random differences
    rng = random.Random(len(mats))
    for _ in range(min(ADDITIVITY_PROBES, len(mats) ** 2)):
        A, B = rng.choice(mats), rng.choice(mats)
        if A - B not in Y:
            return None
    # exact: a basis of size log_p |Y| whose span is Y
    target = 0
    while p**target < len(mats):
        target += 1
    span = FpSpan(p)
    basis = []
    for A in mats:
        if span.insert(prime_coords(A)):
            basis.append(A)
            if len(basis) > target:
                return None
    if len(basis) != target:
        return None
    if set(span_elements(basis, Y.tower, Y.n)) != set(mats):
        return None
    return basis


def span_elements(basis: Sequence[HermitianMatrix], tower: FieldTower, n: int):
    """All F_p-combinations of ``basis``."""
    out = [HermitianMatrix.zero(n, tower)]
    for B in basis:
        multiples = [B.scale(c) for c in range(1, tower.p)]
        out = out + [A + M for M in multiples for A in out]
    return out


# ---------------------------------------------------------------------------
# distributions

Distribution = tuple[Fraction, ...]


def rank_census(matrices: Iterable[HermitianMatrix], n: int) -> list[int]:
    counts = [0] * (n + 1)
    for A in matrices:
        counts[A.rank()] += 1
    return counts


def pairwise_inner_distribution(Y: CodeSet) -> Distribution:
    counts = [0] * (Y.n + 1)
    mats = Y.matrices
    for a, A in enumerate(mats):
        counts[0] += 1
        for B in mats[a + 1:]:
            counts[(A - B).rank()] += 2
    return tuple(Fraction(c, len(mats)) for c in counts)


def inner_distribution(Y: CodeSet) -> Distribution:
    """(A_0, ..., A_n); rank census when Y is additive, else all pairs."""
    if len(Y) == 0:
        raise ValueError("inner distribution of an empty set")
    if Y.is_additive:
        return tuple(Fraction(c) for c in rank_census(Y.matrices, Y.n))
    return pairwise_inner_distribution(Y)


def dual_distribution(D: Sequence[Fraction], T: QTable) -> Distribution:
    """A'_k = sum_i Q_k(i) A_i."""
    n = len(D) - 1
    if T.n != n:
        raise ValueError(f"distribution has n={n} but table has n={T.n}")
    out = tuple(sum((Fraction(T.rows[k][i]) * D[i] for i in range(n + 1)), Fraction(0)) for k in range(n + 1))
    if any(x < 0 for x in out):
        raise InvariantViolation(f"negative dual distribution entry: {out}")
    return out


def min_distance(D: Sequence[Fraction]) -> int:
    """Largest d with A_1 = ... = A_{d-1} = 0; a singleton gives n + 1."""
    n = len(D) - 1
    for i in range(1, n + 1):
        if D[i] != 0:
            return i
    return n + 1


def design_strength(Dp: Sequence[Fraction]) -> int:
    n = len(Dp) - 1
    for k in range(1, n + 1):
        if Dp[k] != 0:
            return k - 1
    return n


def dual_code(Y: CodeSet, cap: int = ENUMERATION_CAP) -> CodeSet:
    """{B in X : <A, B> = 1 for all A in Y} for additive Y."""
    gens = Y.generators
    if gens is None:
        raise ValueError("dual code needs an additive code")
    size = Y.q ** (Y.n * Y.n)
    if size > cap:
        raise CapExceeded("enumeration", f"|X| = {size} exceeds cap {cap}")
    return CodeSet((B for B in iter_hermitian(Y.n, Y.tower) if all(pairing(A, B) == 0 for A in gens)),
                   Y.tower, Y.n)


def thm33_distribution(n: int, d: int, q: int, size: int) -> Distribution:
    """Inner distribution forced on a d-code that is also an (n-d)-design."""
    if not 1 <= d <= n:
        raise ValueError(f"d={d} outside [1, {n}]")
    B = functools.partial(neg_q_binomial, q=q)
    A = [Fraction(0)] * (n + 1)
    A[0] = Fraction(1)
    for i in range(n):
        s = Fraction(0)
        for j in range(i, n - d + 1):
            s += ((-1) ** (j - i) * (-q) ** comb(j - i, 2) * B(j, i) * B(n, j)
                  * (Fraction(size, q ** (n * j)) * (-1) ** ((n + 1) * j) - 1))
        A[n - i] = s
    if any(x < 0 for x in A):
        raise ValueError(f"parameters give a negative entry: {A}")
    if sum(A) != size:
        raise ValueError(f"entries sum to {sum(A)}, not {size}")
    return tuple(A)


def fraction_json(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def analyze(Y: CodeSet) -> dict:
    """Summary used by the CLI: size, additivity, distributions, d, t."""
    D = inner_distribution(Y)
    Dp = dual_distribution(D, q_explicit(Y.n, Y.q))
    return {
        "size": len(Y),
        "n": Y.n,
        "q": Y.q,
        "additive": Y.is_additive,
        "inner": [fraction_json(x) for x in D],
        "dual": [fraction_json(x) for x in Dp],
        "min_distance": min_distance(D),
        "design_strength": design_strength(Dp),
    }


def whole_space(n: int, tower: FieldTower, cap: int = ENUMERATION_CAP) -> CodeSet:
    if tower.q ** (n * n) > cap:
        raise CapExceeded("enumeration", "whole space exceeds cap")
    return CodeSet(iter_hermitian(n, tower), tower, n)

