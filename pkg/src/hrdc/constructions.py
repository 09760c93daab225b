"""Constructions of d-codes in X(n, q).

The trace-form families (opposite parity and odd/odd) are F_p-linear in
their parameters, so each code is generated as the F_p-span of the Gram
matrices of the forms attached to an F_p-basis of the parameter space.
Tests compare this against direct evaluation over the full parameter
space for the small cases.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from hrdc.distributions import CodeSet, FpSpan
from hrdc.errors import CapExceeded, InvariantViolation
from hrdc.field_tower import FieldTower, subfield_fqn, subfield_fqn_basis, tower_for_q
from hrdc.hermitian import HermitianForm, HermitianMatrix, Rows, conj_transpose, gram_rows, matmul

MATRIX_CAP = 2**22

FAMILIES = ("thm41", "thm42", "zero-diag", "sym-dn", "thm43")

Params = Sequence[tuple[int, ...]]


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise CapExceeded("matrices", f"construction would produce {size} matrices, cap is {cap}")


# ---------------------------------------------------------------------------
# forms


def thm41_form(t: FieldTower, params: Params) -> HermitianForm:
    """Tr(sum_j a_j x y^(q^(2j-1)) + a_j^q x^(q^(2j)) y^q), j = 1..len(params)."""
    terms = []
    for j, a in enumerate(params, start=1):
        terms.append((tuple(a), 0, 2 * j - 1))
        terms.append((t.frob_raw(a, 1), 2 * j, 1))
    return HermitianForm(tuple(terms), t)


def thm42_form(t: FieldTower, a0: tuple[int, ...], params: Params) -> HermitianForm:
    """Tr(a_0 x y^(q^n) + sum_j a_j x y^(q^(n-2j)) + a_j^q x^(q^(n-2j+1)) y^q)."""
    n = t.n
    terms = [(tuple(a0), 0, n)]
    for j, a in enumerate(params, start=1):
        terms.append((tuple(a), 0, n - 2 * j))
        terms.append((t.frob_raw(a, 1), n - 2 * j + 1, 1))
    return HermitianForm(tuple(terms), t)


def _check_thm41(n: int, d: int) -> None:
    if not 1 <= d <= n - 1 or (n - d) % 2 != 1:
        raise ValueError(f"thm41 needs 1 <= d <= n-1 with n-d odd, got n={n}, d={d}")


def _check_thm42(n: int, d: int) -> None:
    if not 1 <= d <= n or n % 2 == 0 or d % 2 == 0:
        raise ValueError(f"thm42 needs odd n, d with 1 <= d <= n, got n={n}, d={d}")


def _top_prime_basis(t: FieldTower) -> list[tuple[int, ...]]:
    dim = 2 * t.n * t.m
    return [t.from_prime_coords_raw([int(i == k) for i in range(dim)]) for k in range(dim)]


def thm41_generators(n: int, d: int, q: int) -> tuple[FieldTower, list[Rows]]:
    """Gram matrices for an F_p-basis of the parameter space."""
    _check_thm41(n, d)
    t = tower_for_q(q, n)
    count = (n - d + 1) // 2
    gens = []
    for j in range(count):
        for e in _top_prime_basis(t):
            params = [t.zero] * count
            params[j] = e
            gens.append(gram_rows(thm41_form(t, params)))
    return t, gens


def thm42_generators(n: int, d: int, q: int) -> tuple[FieldTower, list[Rows]]:
    _check_thm42(n, d)
    t = tower_for_q(q, n)
    count = (n - d) // 2
    gens = []
    for e in subfield_fqn_basis(t):
        gens.append(gram_rows(thm42_form(t, e, [t.zero] * count)))
    for j in range(count):
        for e in _top_prime_basis(t):
            params = [t.zero] * count
            params[j] = e
            gens.append(gram_rows(thm42_form(t, t.zero, params)))
    return t, gens


def iter_thm41_params(n: int, d: int, q: int) -> Iterator[Params]:
    """All parameter tuples, lexicographic in the element index of a_1, a_2, ..."""
    t = tower_for_q(q, n)
    count = (n - d + 1) // 2
    for idx in itertools.product(range(t.top_order), repeat=count):
        yield [t.from_index_raw(i) for i in idx]


def iter_thm42_params(n: int, d: int, q: int) -> Iterator[tuple[tuple[int, ...], Params]]:
    t = tower_for_q(q, n)
    count = (n - d) // 2
    sub = [x.value for x in subfield_fqn(t)]
    for a0 in sub:
        for idx in itertools.product(range(t.top_order), repeat=count):
            yield a0, [t.from_index_raw(i) for i in idx]


# ---------------------------------------------------------------------------
# spans


def iter_span(gens: Sequence[Rows], t: FieldTower) -> Iterator[Rows]:
    """All F_p-combinations of the generator matrices, depth first."""
    n = len(gens[0]) if gens else t.n
    p = t.p
    F = t.fq2
    add, mul = F.add_table, F.mul_table
    flat = [tuple(x for r in g for x in r) for g in gens]
    multiples = [[tuple(mul[c][x] for x in g) for c in range(p)] for g in flat]

    def rec(k: int, acc: tuple[int, ...]):
        if k == len(flat):
            yield tuple(acc[i * n:(i + 1) * n] for i in range(n))
            return
        for vec in multiples[k]:
            yield from rec(k + 1, tuple(add[a][b] for a, b in zip(acc, vec)))

    yield from rec(0, (0,) * (n * n))


def _span_code(gens: list[Rows], t: FieldTower, n: int, expected: int, cap: int) -> CodeSet:
    _check_cap(expected, cap)
    Y = CodeSet((HermitianMatrix.trusted(r, t) for r in iter_span(gens, t)), t, n)
    if len(Y) != expected:
        raise InvariantViolation(f"expected {expected} distinct matrices, got {len(Y)}")
    return Y


def span_census(gens: Sequence[Rows], t: FieldTower, n: int) -> list[int]:
    """Rank histogram of the span without materializing it."""
    from hrdc.hermitian import matrix_rank

    counts = [0] * (n + 1)
    for rows in iter_span(gens, t):
        counts[matrix_rank(rows, t.fq2)] += 1
    return counts


def construct_thm41(n: int, d: int, q: int, cap: int = MATRIX_CAP) -> CodeSet:
    """Additive d-code of size q^(n(n-d+1)) for n - d odd."""
    _check_thm41(n, d)
    _check_cap(q ** (n * (n - d + 1)), cap)
    t, gens = thm41_generators(n, d, q)
    return _span_code(gens, t, n, q ** (n * (n - d + 1)), cap)


def construct_thm42(n: int, d: int, q: int, cap: int = MATRIX_CAP) -> CodeSet:
    """Additive d-code of size q^(n(n-d+1)) for n, d odd."""
    _check_thm42(n, d)
    _check_cap(q ** (n * (n - d + 1)), cap)
    t, gens = thm42_generators(n, d, q)
    return _span_code(gens, t, n, q ** (n * (n - d + 1)), cap)


def construct_zero_diag(n: int, q: int, cap: int = MATRIX_CAP) -> CodeSet:
    """All Hermitian matrices with zero diagonal."""
    if n < 2:
        raise ValueError("zero-diagonal code needs n >= 2")
    _check_cap(q ** (n * (n - 1)), cap)
    t = tower_for_q(q, n)
    conj = t.fq2.frobenius_table
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def gen():
        for vals in itertools.product(range(t.fq2.order), repeat=len(upper)):
            M = [[0] * n for _ in range(n)]
            for (i, j), v in zip(upper, vals):
                M[i][j] = v
                M[j][i] = conj[v]
            yield HermitianMatrix.trusted(tuple(tuple(r) for r in M), t)

    return CodeSet(gen(), t, n)


def subfield_fq_basis(t: FieldTower) -> list[tuple[int, ...]]:
    """F_q-basis of F_{q^n} inside F_{q^2n}: greedy over the sorted subfield."""
    span = FpSpan(t.p)
    fq_units = [t.p**k for k in range(t.m)]  # F_p-basis of F_q
    basis = []
    for x in subfield_fqn(t):
        if not any(x.value):
            continue
        vecs = [t.prime_coords_raw(t.scale_raw(c, x.value)) for c in fq_units]
        # the span is an F_q-space, so F_q x meets it trivially iff x is outside it
        if not any(span.reduce(vecs[0])):
            continue
        for v in vecs:
            span.insert(v)
        basis.append(x.value)
        if len(basis) == t.n:
            break
    return basis


def _trace_to_fq(t: FieldTower, z: tuple[int, ...]) -> int:
    """Tr_{F_q^n / F_q}(z) = sum_{k<n} z^(q^k) for z in F_{q^n}."""
    s, y = t.zero, z
    for _ in range(t.n):
        s = t.add_raw(s, y)
        y = t.frob_raw(y, 1)
    if any(s[1:]) or s[0] >= t.q:
        raise InvariantViolation("trace left F_q")
    return s[0]


def symmetric_gram(t: FieldTower, a: tuple[int, ...], basis: Sequence[tuple[int, ...]]) -> Rows:
    return tuple(
        tuple(_trace_to_fq(t, t.mul_raw(a, t.mul_raw(ei, ej))) for ej in basis) for ei in basis)


def construct_symmetric_dn(n: int, q: int, cap: int = MATRIX_CAP) -> CodeSet:
    """q^n symmetric F_q-matrices (x, y) -> Tr(a x y), every nonzero one nonsingular."""
    _check_cap(q**n, cap)
    t = tower_for_q(q, n)
    basis = subfield_fq_basis(t)
    gens = [symmetric_gram(t, e, basis) for e in subfield_fqn_basis(t)]
    return _span_code(gens, t, n, q**n, cap)


def multiplication_matrix(t: FieldTower, a: tuple[int, ...]) -> Rows:
    """Matrix of x -> a x on F_{q^2h} over F_{q^2} in the polynomial basis (column j = a beta^j)."""
    cols = [t.mul_raw(a, b) for b in t.basis]
    return tuple(tuple(col[i] for col in cols) for i in range(t.n))


def construct_spread_set(half_n: int, q: int, cap: int = MATRIX_CAP) -> list[Rows]:
    """The (q^2)^half_n multiplication matrices of F_{q^(2 half_n)} over F_{q^2}."""
    _check_cap(q ** (2 * half_n), cap)
    t = tower_for_q(q, half_n)
    return [multiplication_matrix(t, x) for x in t.iter_top_raw()]


def construct_thm43(n: int, q: int, cap: int = MATRIX_CAP) -> CodeSet:
    """Non-additive n-code of size q^n + 1 for even n."""
    if n < 2 or n % 2:
        raise ValueError(f"thm43 needs even n >= 2, got {n}")
    _check_cap(q**n + 1, cap)
    h = n // 2
    t = tower_for_q(q, n)
    F = t.fq2
    ident = tuple(tuple(int(i == j) for j in range(h)) for i in range(h))
    zero = tuple((0,) * h for _ in range(h))

    def block(tl: Rows, tr: Rows, bl: Rows, br: Rows) -> Rows:
        return tuple(a + b for a, b in zip(tl, tr)) + tuple(a + b for a, b in zip(bl, br))

    mats = []
    for A in construct_spread_set(h, q, cap):
        As = conj_transpose(A, F)
        mats.append(HermitianMatrix(block(ident, As, A, matmul(A, As, F)), t))
    mats.append(HermitianMatrix(block(zero, zero, zero, ident), t))
    Y = CodeSet(mats, t, n)
    if len(Y) != q**n + 1:
        raise InvariantViolation("spread-set code has colliding members")
    return Y


def construct(family: str, n: int, q: int, d: int | None = None, cap: int = MATRIX_CAP) -> CodeSet:
    if family == "thm41":
        return construct_thm41(n, _need_d(d), q, cap)
    if family == "thm42":
        return construct_thm42(n, _need_d(d), q, cap)
    if family == "zero-diag":
        return construct_zero_diag(n, q, cap)
    if family == "sym-dn":
        return construct_symmetric_dn(n, q, cap)
    if family == "thm43":
        return construct_thm43(n, q, cap)
    raise ValueError(f"unknown family {family!r}")


def family_distance(family: str, n: int, d: int | None) -> int:
    return {"zero-diag": 2, "sym-dn": n, "thm43": n}.get(family, d if d is not None else 0)


def family_generators(family: str, n: int, q: int, d: int | None = None) -> tuple[FieldTower, list[Rows]]:
    """Generators of an additive family, for streaming censuses."""
    if family == "thm41":
        return thm41_generators(n, _need_d(d), q)
    if family == "thm42":
        return thm42_generators(n, _need_d(d), q)
    if family == "sym-dn":
        t = tower_for_q(q, n)
        basis = subfield_fq_basis(t)
        return t, [symmetric_gram(t, e, basis) for e in subfield_fqn_basis(t)]
    if family == "zero-diag":
        t = tower_for_q(q, n)
        gens = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(2 * t.m):
                    v = t.p**k
                    M = [[0] * n for _ in range(n)]
                    M[i][j] = v
                    M[j][i] = t.fq2.frobenius_table[v]
                    gens.append(tuple(tuple(r) for r in M))
        return t, gens
    raise ValueError(f"family {family!r} is not additive")


def _need_d(d: int | None) -> int:
    if d is None:
        raise ValueError("this family needs --d")
    return d
