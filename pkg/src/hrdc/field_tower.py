"""Finite field tower F_p < F_q < F_{q^2} < F_{q^{2n}}.

The two lower extension steps (F_q and F_{q^2}) are small and use dense
lookup tables; elements are plain ints that encode the coefficient vector
over the level below in radix ``|base|``, least significant first.  With
this encoding the prime field elements are 0..p-1 at every level and F_q
sits inside F_{q^2} as the ints below q.

The top field F_{q^{2n}} is a polynomial extension of F_{q^2} by a monic
irreducible of degree n, so its elements are length-n tuples over F_{q^2}
and F_{q^2} embeds as the constant polynomials.
"""

from __future__ import annotations

import functools
import itertools
import json
import logging
import os
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from hrdc.errors import CapExceeded

log = logging.getLogger(__name__)

DEFAULT_DEGREE_CAP = 64
# dense tables are quadratic in the field order
TABLE_ORDER_CAP = 1024

LEVELS = ("q", "q2", "top")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, m)`` with ``q == p**m``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, m


# ---------------------------------------------------------------------------
# table-backed fields


class TableField:
    """A field of order at most TABLE_ORDER_CAP with dense operation tables.

    ``base`` is None for a prime field.  Otherwise elements encode
    polynomials over ``base`` modulo ``modulus`` (ascending coefficients).
    """

    def __init__(self, p: int, base: TableField | None = None, modulus: Sequence[int] | None = None):
        self.p = p
        self.base = base
        if base is None:
            self.degree = 1
            self.order = p
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            assert modulus is not None and modulus[-1] == 1
            self.degree = len(modulus) - 1
            self.order = base.order ** self.degree
            self.modulus = tuple(modulus)
        if self.order > TABLE_ORDER_CAP:
            raise CapExceeded("table-order", f"field of order {self.order} exceeds table cap {TABLE_ORDER_CAP}")
        self._build_tables()

    def _build_tables(self) -> None:
        order = self.order
        if self.base is None:
            p = self.p
            self.add_table = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.sub_table = [[(a - b) % p for b in range(p)] for a in range(p)]
            self.mul_table = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            B = self.base
            deg = self.degree
            digits = [self.to_coeffs(a) for a in range(order)]
            enc = self.from_coeffs
            badd, bsub = B.add_table, B.sub_table
            self.add_table = [
                [enc([badd[x][y] for x, y in zip(da, db)]) for db in digits] for da in digits
            ]
            self.sub_table = [
                [enc([bsub[x][y] for x, y in zip(da, db)]) for db in digits] for da in digits
            ]
            # multiplication through a primitive element's log/exp tables
            gen_poly = None
            for g in range(1, order):
                if self._poly_order(digits[g]) == order - 1:
                    gen_poly = digits[g]
                    break
            assert gen_poly is not None, "no primitive element found"
            exp = [0] * (order - 1)
            logt = [0] * order
            cur = [1] + [0] * (deg - 1)
            for e in range(order - 1):
                v = enc(cur)
                exp[e] = v
                logt[v] = e
                cur = _poly_mulmod(cur, gen_poly, self.modulus, B)
            mul = [[0] * order for _ in range(order)]
            for a in range(1, order):
                la = logt[a]
                row = mul[a]
                for b in range(1, order):
                    row[b] = exp[(la + logt[b]) % (order - 1)]
            self.mul_table = mul
        self.neg_table = [self.sub_table[0][a] for a in range(order)]
        inv = [0] * order
        for a in range(1, order):
            row = self.mul_table[a]
            inv[a] = row.index(1)
        self.inv_table = inv

    def _poly_order(self, poly: list[int]) -> int:
        """Multiplicative order of a nonzero residue, by brute force."""
        if not any(poly):
            return 0
        one = [1] + [0] * (self.degree - 1)
        cur = list(poly)
        k = 1
        while cur != one:
            cur = _poly_mulmod(cur, poly, self.modulus, self.base)
            k += 1
            if k > self.order:
                return 0
        return k

    def to_coeffs(self, a: int) -> list[int]:
        if self.base is None:
            return [a]
        b = self.base.order
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, b)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if self.base is None:
            return coeffs[0]
        b = self.base.order
        v = 0
        for c in reversed(coeffs):
            v = v * b + c
        return v

    def prime_digits(self, a: int) -> list[int]:
        """Coordinates of ``a`` over F_p (radix-p digits of the encoding)."""
        out = []
        for _ in range(_log_int(self.order, self.p)):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def power(self, a: int, e: int) -> int:
        result = 1
        mul = self.mul_table
        while e:
            if e & 1:
                result = mul[result][a]
            a = mul[a][a]
            e >>= 1
        return result

    @functools.cached_property
    def frobenius_table(self) -> list[int]:
        """x -> x^|base| (the generator of Gal(self/base))."""
        b = self.base.order if self.base is not None else self.order
        return [self.power(a, b) for a in range(self.order)]

    @functools.cached_property
    def abs_trace_table(self) -> list[int]:
        """Absolute trace to F_p: sum of x^(p^k) for k < log_p(order)."""
        e = _log_int(self.order, self.p)
        out = []
        for a in range(self.order):
            s, x = 0, a
            for _ in range(e):
                s = self.add_table[s][x]
                x = self.power(x, self.p)
            assert s < self.p
            out.append(s)
        return out

    def __repr__(self) -> str:
        return f"TableField(order={self.order}, modulus={list(self.modulus)})"


def _log_int(n: int, b: int) -> int:
    e = 0
    while n > 1:
        n //= b
        e += 1
    return e


# ---------------------------------------------------------------------------
# polynomial arithmetic over a TableField (lists of ints, ascending degree)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], F: TableField) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    mul, add = F.mul_table, F.add_table
    for i, x in enumerate(a):
        if x == 0:
            continue
        mx = mul[x]
        for j, y in enumerate(b):
            if y:
                out[i + j] = add[out[i + j]][mx[y]]
    return out


def _poly_mod(a: Sequence[int], f: Sequence[int], F: TableField) -> list[int]:
    """Remainder of ``a`` modulo monic ``f``; result padded to deg(f)."""
    a = list(a)
    d = len(f) - 1
    sub, mul = F.sub_table, F.mul_table
    for top in range(len(a) - 1, d - 1, -1):
        c = a[top]
        if c == 0:
            continue
        mc = mul[c]
        shift = top - d
        for j in range(d + 1):
            if f[j]:
                a[shift + j] = sub[a[shift + j]][mc[f[j]]]
    a = a[:d]
    return a + [0] * (d - len(a))


def _poly_mulmod(a, b, f, F: TableField) -> list[int]:
    return _poly_mod(_poly_mul(a, b, F), f, F)


def _poly_powmod(a: Sequence[int], e: int, f: Sequence[int], F: TableField) -> list[int]:
    d = len(f) - 1
    result = [1] + [0] * (d - 1)
    base = _poly_mod(a, f, F)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, F)
        base = _poly_mulmod(base, base, f, F)
        e >>= 1
    return result


def _poly_divmod_general(a: list[int], b: list[int], F: TableField) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv_table[b[-1]]
    q = [0] * max(len(a) - len(b) + 1, 0)
    mul, sub = F.mul_table, F.sub_table
    while len(a) >= len(b) and a:
        c = mul[a[-1]][inv_lead]
        shift = len(a) - len(b)
        q[shift] = c
        mc = mul[c]
        for j, y in enumerate(b):
            a[shift + j] = sub[a[shift + j]][mc[y]]
        _trim(a)
    return q, a


def _poly_gcd(a: list[int], b: list[int], F: TableField) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod_general(a, b, F)
        a, b = b, r
    return a


def _has_root(f: Sequence[int], F: TableField) -> bool:
    mul, add = F.mul_table, F.add_table
    for x in range(F.order):
        acc = 0
        for c in reversed(f):
            acc = add[mul[acc][x]][c]
        if acc == 0:
            return True
    return False


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Sequence[int], F: TableField) -> bool:
    """Irreducibility of a monic polynomial over ``F``.

    Root test up to degree 3, Rabin's test above.
    """
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    if d <= 3:
        return not _has_root(f, F)
    Q = F.order
    x = [0, 1] + [0] * (d - 2)

    def frob_power(k: int) -> list[int]:
        cur = x
        for _ in range(k):
            cur = _poly_powmod(cur, Q, f, F)
        return cur

    if frob_power(d) != x:
        return False
    for r in _prime_factors(d):
        h = frob_power(d // r)
        diff = [F.sub_table[a][b] for a, b in zip(h, x)]
        g = _poly_gcd(list(f), diff, F)
        if len(g) != 1:
            return False
    return True


def _cache_path() -> Path | None:
    d = os.environ.get("HRDC_CACHE_DIR")
    return Path(d) / "moduli.json" if d else None


def smallest_irreducible(F: TableField, degree: int, key: str | None = None) -> list[int]:
    """Lexicographically smallest monic irreducible of ``degree`` over ``F``.

    Candidates are ascending coefficient lists ``[c0, ..., c_{d-1}, 1]``
    scanned with c0 most significant.  ``key`` enables the on-disk cache
    in ``$HRDC_CACHE_DIR``.
    """
    path = _cache_path()
    cache: dict[str, list[int]] = {}
    if key and path and path.exists():
        try:
            cache = json.loads(path.read_text())
        except (OSError, ValueError):
            cache = {}
        if key in cache:
            return list(cache[key])
    for coeffs in itertools.product(range(F.order), repeat=degree):
        f = list(coeffs) + [1]
        if is_irreducible(f, F):
            if key and path:
                cache[key] = f
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(json.dumps(cache, sort_keys=True))
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def base_fields(p: int, m: int) -> tuple[TableField, TableField, TableField]:
    """(F_p, F_q, F_{q^2}) with deterministic moduli."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    Fp = TableField(p)
    if m == 1:
        Fq = Fp
    else:
        Fq = TableField(p, Fp, smallest_irreducible(Fp, m, key=f"{p}^1:{m}"))
    Fq2 = TableField(p, Fq, smallest_irreducible(Fq, 2, key=f"{p}^{m}:2"))
    return Fp, Fq, Fq2


# ---------------------------------------------------------------------------
# the tower


class FieldTower:
    """Immutable arithmetic context for F_p < F_q < F_{q^2} < F_{q^{2n}}.

    Build through :func:`build_tower`.  Raw top-level elements are tuples
    of n F_{q^2}-ints; the ``*_raw`` methods operate on those directly and
    are what the hot loops use.
    """

    def __init__(self, p: int, m: int, n: int):
        self.p, self.m, self.n = p, m, n
        self.q = p**m
        self.fp, self.fq, self.fq2 = base_fields(p, m)
        self.top_modulus = tuple(smallest_irreducible(self.fq2, n, key=f"{p}^{2 * m}:{n}"))
        self.moduli = (tuple(self.fq.modulus), tuple(self.fq2.modulus), self.top_modulus)
        self.top_order = self.q ** (2 * n)
        # images of the polynomial basis under x -> x^q
        if n > 1:
            self.beta = tuple(1 if i == 1 else 0 for i in range(n))
        else:
            # degree-1 step: the adjoined root of x + c0 is -c0
            self.beta = (self.fq2.neg_table[self.top_modulus[0]],)
        beta = self.beta
        self.basis = tuple(self.pow_raw(beta, j) for j in range(n))
        self.frob_basis = tuple(self.pow_raw(b, self.q) for b in self.basis)
        # Tr(beta^j) for the F_{q^2}-linear trace functional
        self.trace_basis = tuple(self._trace_by_definition(b) for b in self.basis)

    # -- raw top-level arithmetic -----------------------------------------
    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.n - 1)

    def add_raw(self, a, b):
        add = self.fq2.add_table
        return tuple(add[x][y] for x, y in zip(a, b))

    def sub_raw(self, a, b):
        sub = self.fq2.sub_table
        return tuple(sub[x][y] for x, y in zip(a, b))

    def neg_raw(self, a):
        neg = self.fq2.neg_table
        return tuple(neg[x] for x in a)

    def scale_raw(self, c: int, a):
        row = self.fq2.mul_table[c]
        return tuple(row[x] for x in a)

    def mul_raw(self, a, b):
        return tuple(_poly_mulmod(a, b, self.top_modulus, self.fq2))

    def pow_raw(self, a, e: int):
        if e < 0:
            a, e = self.inv_raw(a), -e
        return tuple(_poly_powmod(a, e, self.top_modulus, self.fq2))

    def inv_raw(self, a):
        """Inverse via extended Euclid on the representative polynomial."""
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        F = self.fq2
        r0, r1 = list(self.top_modulus), _trim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            qt, r = _poly_divmod_general(r0, r1, F)
            s = _poly_sub(s0, _poly_mul(qt, s1, F), F)
            r0, r1, s0, s1 = r1, r, s1, s
        c = F.inv_table[r1[0]]
        return tuple(_poly_mod([F.mul_table[c][x] for x in s1], self.top_modulus, F))

    def frob_raw(self, x, k: int = 1):
        """x -> x^(q^k), applied as k steps of the semilinear Frobenius table."""
        conj = self.fq2.frobenius_table
        add, mul = self.fq2.add_table, self.fq2.mul_table
        fb = self.frob_basis
        n = self.n
        for _ in range(k % (2 * n)):
            out = [0] * n
            for j, c in enumerate(x):
                if c:
                    mc = mul[conj[c]]
                    for i, y in enumerate(fb[j]):
                        if y:
                            out[i] = add[out[i]][mc[y]]
            x = tuple(out)
        return tuple(x)

    def trace_raw(self, x) -> int:
        """Relative trace F_{q^2n} -> F_{q^2} via the precomputed functional."""
        add, mul = self.fq2.add_table, self.fq2.mul_table
        s = 0
        for c, t in zip(x, self.trace_basis):
            s = add[s][mul[c][t]]
        return s

    def _trace_by_definition(self, x) -> int:
        s = self.zero
        y = x
        for _ in range(self.n):
            s = self.add_raw(s, y)
            y = self.pow_raw(y, self.q * self.q)
        assert all(c == 0 for c in s[1:]), "trace left the base field"
        return s[0]

    def index_raw(self, x) -> int:
        v, b = 0, self.fq2.order
        for c in reversed(x):
            v = v * b + c
        return v

    def from_index_raw(self, idx: int):
        b = self.fq2.order
        out = []
        for _ in range(self.n):
            idx, r = divmod(idx, b)
            out.append(r)
        return tuple(out)

    def iter_top_raw(self) -> Iterator[tuple[int, ...]]:
        for idx in range(self.top_order):
            yield self.from_index_raw(idx)

    def prime_coords_raw(self, x) -> list[int]:
        """Coordinates over F_p of a top-level element (2nm of them)."""
        out: list[int] = []
        for c in x:
            out.extend(self.fq2.prime_digits(c))
        return out

    def from_prime_coords_raw(self, coords: Sequence[int]):
        k = 2 * self.m
        out = []
        for j in range(self.n):
            digs = coords[j * k:(j + 1) * k]
            v = 0
            for d in reversed(digs):
                v = v * self.p + d
            out.append(v)
        return tuple(out)

    # -- public element API ---------------------------------------------
    def element(self, level: str, value) -> FieldElement:
        return FieldElement(self, level, _normalize(self, level, value))

    def elements(self, level: str) -> list[FieldElement]:
        if level == "top":
            return [FieldElement(self, "top", x) for x in self.iter_top_raw()]
        return [FieldElement(self, level, v) for v in range(self.level_order(level))]

    def level_order(self, level: str) -> int:
        return {"q": self.q, "q2": self.q * self.q, "top": self.top_order}[level]

    def random_element(self, level: str, rng: random.Random) -> FieldElement:
        idx = rng.randrange(self.level_order(level))
        if level == "top":
            return FieldElement(self, "top", self.from_index_raw(idx))
        return FieldElement(self, level, idx)

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "moduli": [list(f) for f in self.moduli]}

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTower) and (self.p, self.m, self.n, self.moduli) == (
            other.p, other.m, other.n, other.moduli)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.n, self.moduli))

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, m={self.m}, n={self.n})"

    def __reduce__(self):
        return (build_tower, (self.p, self.m, self.n))


def _poly_sub(a, b, F: TableField) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([F.sub_table[x][y] for x, y in zip(a, b)])


def _normalize(t: FieldTower, level: str, value):
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if level == "top":
        value = tuple(value)
        if len(value) != t.n or any(not 0 <= c < t.fq2.order for c in value):
            raise ValueError(f"bad top-level element {value!r}")
        return value
    if not 0 <= value < t.level_order(level):
        raise ValueError(f"value {value} out of range for level {level}")
    return int(value)


@functools.lru_cache(maxsize=None)
def _build_tower_cached(p: int, m: int, n: int) -> FieldTower:
    return FieldTower(p, m, n)


def build_tower(p: int, m: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> FieldTower:
    """Deterministic tower for F_p < F_{p^m} < F_{p^2m} < F_{p^2mn}."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if 2 * n * m > degree_cap:
        raise CapExceeded("degree", f"total degree {2 * n * m} exceeds cap {degree_cap}")
    return _build_tower_cached(p, m, n)


def tower_for_q(q: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> FieldTower:
    p, m = prime_power(q)
    return build_tower(p, m, n, degree_cap)


def tower_from_descriptor(desc: dict) -> FieldTower:
    t = build_tower(int(desc["p"]), int(desc["m"]), int(desc["n"]))
    if "moduli" in desc and [list(f) for f in t.moduli] != [list(f) for f in desc["moduli"]]:
        raise ValueError("descriptor moduli do not match the deterministic tower")
    return t


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FieldElement:
    tower: FieldTower = field(repr=False)
    level: str
    value: int | tuple[int, ...]

    @property
    def coeffs(self) -> list[int]:
        """Coefficient vector over the immediate base field."""
        t = self.tower
        if self.level == "top":
            return list(self.value)
        if self.level == "q2":
            return t.fq2.to_coeffs(self.value)
        return t.fq.to_coeffs(self.value)

    def is_zero(self) -> bool:
        return not any(self.value) if self.level == "top" else self.value == 0

    def __add__(self, other):
        return arith(self, other, "add")

    def __sub__(self, other):
        return arith(self, other, "sub")

    def __mul__(self, other):
        return arith(self, other, "mul")

    def __truediv__(self, other):
        return arith(self, other, "div")

    def __neg__(self):
        t = self.tower
        if self.level == "top":
            return FieldElement(t, "top", t.neg_raw(self.value))
        return FieldElement(t, self.level, t.fq2.neg_table[self.value])

    def __pow__(self, e: int):
        t = self.tower
        if self.level == "top":
            return FieldElement(t, "top", t.pow_raw(self.value, e))
        if e < 0:
            if self.value == 0:
                raise ZeroDivisionError("inverse of zero")
            return FieldElement(t, self.level, t.fq2.power(t.fq2.inv_table[self.value], -e))
        return FieldElement(t, self.level, t.fq2.power(self.value, e))

    def to_json(self):
        """Nested coefficient arrays down to F_p ints.

        An F_q element is an int when m == 1 and a list of m ints otherwise.
        """
        t = self.tower

        def fq_json(v: int):
            return v if t.m == 1 else t.fq.to_coeffs(v)

        def fq2_json(v: int):
            return [fq_json(c) for c in t.fq2.to_coeffs(v)]

        if self.level == "q":
            return fq_json(self.value)
        if self.level == "q2":
            return fq2_json(self.value)
        return [fq2_json(c) for c in self.value]


def fq2_from_json(t: FieldTower, obj) -> int:
    def fq(v) -> int:
        if t.m == 1:
            if not isinstance(v, int) or not 0 <= v < t.p:
                raise ValueError(f"bad F_q coefficient {v!r}")
            return v
        if len(v) != t.m or any(not 0 <= c < t.p for c in v):
            raise ValueError(f"bad F_q coefficient {v!r}")
        return t.fq.from_coeffs(v)

    if len(obj) != 2:
        raise ValueError(f"bad F_q^2 element {obj!r}")
    return t.fq2.from_coeffs([fq(c) for c in obj])


def fq2_to_json(t: FieldTower, v: int):
    return FieldElement(t, "q2", v).to_json()


def _check_pair(a: FieldElement, b: FieldElement) -> None:
    if a.tower != b.tower or a.level != b.level:
        raise ValueError(f"level mismatch: {a.level} vs {b.level}")


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    _check_pair(a, b)
    t = a.tower
    if a.level == "top":
        if op == "add":
            v = t.add_raw(a.value, b.value)
        elif op == "sub":
            v = t.sub_raw(a.value, b.value)
        elif op == "mul":
            v = t.mul_raw(a.value, b.value)
        elif op == "div":
            v = t.mul_raw(a.value, t.inv_raw(b.value))
        else:
            raise ValueError(f"unknown op {op!r}")
        return FieldElement(t, "top", v)
    F = t.fq2
    x, y = a.value, b.value
    if op == "add":
        v = F.add_table[x][y]
    elif op == "sub":
        v = F.sub_table[x][y]
    elif op == "mul":
        v = F.mul_table[x][y]
    elif op == "div":
        if y == 0:
            raise ZeroDivisionError("division by zero")
        v = F.mul_table[x][F.inv_table[y]]
    else:
        raise ValueError(f"unknown op {op!r}")
    return FieldElement(t, a.level, v)


def frobenius_q(x: FieldElement, k: int) -> FieldElement:
    """x^(q^k) for a top-level element, 0 <= k < 2n."""
    if x.level != "top":
        raise ValueError("frobenius_q expects a top-level element")
    t = x.tower
    if not 0 <= k < 2 * t.n:
        raise ValueError(f"k={k} outside [0, {2 * t.n})")
    return FieldElement(t, "top", t.frob_raw(x.value, k))


def conjugate(x: FieldElement) -> FieldElement:
    """x -> x^q on F_{q^2}."""
    if x.level != "q2":
        raise ValueError("conjugate expects an F_q^2 element")
    return FieldElement(x.tower, "q2", x.tower.fq2.frobenius_table[x.value])


def relative_trace(x: FieldElement) -> FieldElement:
    if x.level != "top":
        raise ValueError("relative_trace expects a top-level element")
    return FieldElement(x.tower, "q2", x.tower.trace_raw(x.value))


def embed(x: FieldElement) -> FieldElement:
    """F_q or F_{q^2} element as a constant of the top field."""
    if x.level not in ("q", "q2"):
        raise ValueError("embed expects an F_q or F_q^2 element")
    t = x.tower
    return FieldElement(t, "top", (x.value,) + (0,) * (t.n - 1))


def nullspace_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : M v = 0} over F_p, reduced so that pivots are free vars."""
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] % p), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(v * inv) % p for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] % p:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-M[i][fc]) % p
        basis.append(v)
    return basis


def subfield_fqn_basis(t: FieldTower) -> list[tuple[int, ...]]:
    """F_p-basis (raw elements) of the kernel of x -> x^(q^n) - x."""
    dim = 2 * t.n * t.m
    cols = []
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        x = t.from_prime_coords_raw(e)
        y = t.sub_raw(t.frob_raw(x, t.n), x)
        cols.append(t.prime_coords_raw(y))
    rows = [[cols[c][r] for c in range(dim)] for r in range(dim)]
    kernel = nullspace_mod_p(rows, dim, t.p)
    assert len(kernel) == t.n * t.m
    return [t.from_prime_coords_raw(v) for v in kernel]


def subfield_fqn(t: FieldTower) -> list[FieldElement]:
    """The q^n elements of F_{q^2n} fixed by x -> x^(q^n), sorted by index."""
    basis = subfield_fqn_basis(t)
    elems = {t.zero}
    for b in basis:
        multiples = [t.scale_raw(c, b) for c in range(1, t.p)]
        elems |= {t.add_raw(x, mb) for x in elems for mb in multiples}
    return [FieldElement(t, "top", x) for x in sorted(elems, key=t.index_raw)]
