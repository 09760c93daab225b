"""Eigenvalues Q_k(i) of the Hermitian matrix scheme, in exact integers.

Three independent routes produce the same table: the closed form in
negative q-binomials, the two-parameter recurrence seeded with Q_0(i) = 1
and Q_k(0) = |X_k|, and brute-force character sums over X(n, q).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Literal

from hrdc.errors import CapExceeded
from hrdc.field_tower import prime_power, tower_for_q
from hrdc.hermitian import CyclotomicInteger, HermitianMatrix, iter_hermitian, pairing

DIRECT_CAP = 2**20

Method = Literal["explicit", "recurrence", "direct"]


@functools.lru_cache(maxsize=None)
def neg_q_binomial(m: int, l: int, q: int) -> int:
    """prod_{i=1}^{l} ((-q)^(m-i+1) - 1) / ((-q)^i - 1), for m, l >= 0."""
    if m < 0 or l < 0:
        raise ValueError("neg_q_binomial needs m, l >= 0")
    if m < l:
        # the factor at i = m + 1 vanishes
        return 0
    val = Fraction(1)
    b = -q
    for i in range(1, l + 1):
        val *= Fraction(b ** (m - i + 1) - 1, b**i - 1)
    if val.denominator != 1:
        raise ArithmeticError(f"[{m} over {l}] at q={q} is not integral")
    return val.numerator


def count_rank(n: int, q: int, k: int) -> int:
    """|X_k|, the number of n x n Hermitian matrices of rank k."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    b = -q
    prod = 1
    for j in range(k):
        prod *= b**n + b**j
    return (-1) ** k * neg_q_binomial(n, k, q) * prod


@dataclass(frozen=True)
class QTable:
    n: int
    q: int
    rows: tuple[tuple[int, ...], ...]  # rows[k][i] = Q_k(i)
    method: str = field(default="explicit", compare=False)

    def __getitem__(self, ki: tuple[int, int]) -> int:
        k, i = ki
        return self.rows[k][i]

    def column_sums(self) -> list[int]:
        return [sum(self.rows[k][i] for k in range(self.n + 1)) for i in range(self.n + 1)]

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "method": self.method, "rows": [list(r) for r in self.rows]}

    def to_csv(self) -> str:
        head = "k," + ",".join(f"i={i}" for i in range(self.n + 1))
        lines = [head] + [f"{k}," + ",".join(str(v) for v in row) for k, row in enumerate(self.rows)]
        return "\n".join(lines) + "\n"


def _require_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")


def q_explicit(n: int, q: int) -> QTable:
    _require_n(n)
    B = functools.partial(neg_q_binomial, q=q)
    rows = []
    for k in range(n + 1):
        row = []
        for i in range(n + 1):
            s = sum(B(n - j, n - k) * B(n - i, j) * (-q) ** (comb(k - j, 2) + n * j) for j in range(k + 1))
            row.append((-1) ** k * s)
        rows.append(tuple(row))
    return QTable(n, q, tuple(rows), "explicit")


@functools.lru_cache(maxsize=None)
def _recurrence_rows(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((1,),)
    prev = _recurrence_rows(n - 1, q)
    Q = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        Q[0][i] = 1
    for k in range(n + 1):
        Q[k][0] = count_rank(n, q, k)
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            Q[k][i] = Q[k][i - 1] + (-q) ** (2 * n - i) * prev[k - 1][i - 1]
    return tuple(tuple(r) for r in Q)


def q_recurrence(n: int, q: int) -> QTable:
    _require_n(n)
    return QTable(n, q, _recurrence_rows(n, q), "recurrence")


def direct_sums(n: int, q: int, representatives: list[HermitianMatrix] | None = None,
                cap: int = DIRECT_CAP) -> list[list[CyclotomicInteger]]:
    """Cyclotomic sums[k][i] of <A, B_i> over A of rank k.

    B_i defaults to diag(1,..,1,0,..,0) with i ones.
    """
    if q ** (n * n) > cap:
        raise CapExceeded("enumeration", f"|X({n},{q})| = {q ** (n * n)} exceeds cap {cap}")
    p, _ = prime_power(q)
    t = tower_for_q(q, n)
    reps = representatives or [HermitianMatrix.diagonal_rank(n, i, t) for i in range(n + 1)]
    counts = [[[0] * p for _ in range(n + 1)] for _ in range(n + 1)]
    for A in iter_hermitian(n, t):
        k = A.rank()
        row = counts[k]
        for i, B in enumerate(reps):
            row[i][pairing(A, B)] += 1
    return [[CyclotomicInteger(tuple(c)) for c in row] for row in counts]


def q_direct(n: int, q: int, cap: int = DIRECT_CAP) -> QTable:
    _require_n(n)
    sums = direct_sums(n, q, cap=cap)
    rows = tuple(tuple(z.to_int() for z in row) for row in sums)
    return QTable(n, q, rows, "direct")


def eigen_table(n: int, q: int, method: Method = "explicit") -> QTable:
    return {"explicit": q_explicit, "recurrence": q_recurrence, "direct": q_direct}[method](n, q)


# ---------------------------------------------------------------------------
# identities


@dataclass
class IdentityReport:
    n: int
    q: int
    checked: dict[str, int] = field(default_factory=dict)
    failure: tuple[str, dict] | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def to_json(self) -> dict:
        return {
            "n": self.n, "q": self.q, "ok": self.ok, "checked": self.checked,
            "failure": None if self.failure is None else {"identity": self.failure[0], **self.failure[1]},
        }


def verify_identities(n: int, q: int, table: QTable | None = None) -> IdentityReport:
    """Check the inversion system, the delta inversion, the q-binomial
    theorem at small integer points, and the Pascal rule; stop at the first
    failure."""
    T = table if table is not None else q_explicit(n, q)
    B = functools.partial(neg_q_binomial, q=q)
    rep = IdentityReport(n, q)

    def fail(name: str, **where) -> IdentityReport:
        rep.failure = (name, where)
        return rep

    # (a) sum_{k<=j} [n-k over n-j] Q_k(i) = (-1)^((n+1)j) q^(nj) [n-i over j]
    count = 0
    for i in range(n + 1):
        for j in range(n + 1):
            lhs = sum(B(n - k, n - j) * T.rows[k][i] for k in range(j + 1))
            rhs = (-1) ** ((n + 1) * j) * q ** (n * j) * B(n - i, j)
            count += 1
            if lhs != rhs:
                return fail("inversion_system", i=i, j=j, lhs=lhs, rhs=rhs)
    rep.checked["inversion_system"] = count

    # (b) delta inversion
    count = 0
    for i in range(n + 1):
        for k in range(i, n + 1):
            s = sum((-1) ** (j - i) * (-q) ** comb(j - i, 2) * B(j, i) * B(k, j) for j in range(i, k + 1))
            count += 1
            if s != int(k == i):
                return fail("delta_inversion", i=i, k=k, value=s)
    rep.checked["delta_inversion"] = count

    # (c) q-binomial theorem at integer points
    count = 0
    for h in range(n + 1):
        for x in range(-3, 4):
            for y in range(-3, 4):
                lhs = sum((-q) ** comb(h - j, 2) * B(h, j) * x**j * y ** (h - j) for j in range(h + 1))
                rhs = 1
                for j in range(h):
                    rhs *= x + (-q) ** j * y
                count += 1
                if lhs != rhs:
                    return fail("q_binomial_theorem", h=h, x=x, y=y, lhs=lhs, rhs=rhs)
    rep.checked["q_binomial_theorem"] = count

    # (d) [n-i+1 over j] - (-q)^(n-i-j+1) [n-i over j-1] = [n-i over j]
    count = 0
    for i in range(n + 1):
        for j in range(1, n - i + 2):
            e = n - i - j + 1
            lhs = B(n - i + 1, j) - Fraction(-q) ** e * B(n - i, j - 1)
            count += 1
            if lhs != B(n - i, j):
                return fail("pascal", i=i, j=j)
    rep.checked["pascal"] = count

    # table invariants
    for i in range(n + 1):
        if T.rows[0][i] != 1:
            return fail("initial_row", i=i)
    for k in range(n + 1):
        if T.rows[k][0] != count_rank(n, q, k):
            return fail("initial_column", k=k)
    for i, s in enumerate(T.column_sums()):
        if s != (q ** (n * n) if i == 0 else 0):
            return fail("column_sum", i=i, value=s)
    rep.checked["table_invariants"] = 3 * (n + 1)
    return rep
