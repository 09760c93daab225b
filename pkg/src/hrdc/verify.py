"""Built-in verification suites driven by ``hrdc verify``."""

from __future__ import annotations

from fractions import Fraction

from hrdc.bounds import bound_additive, check_code
from hrdc.constructions import construct
from hrdc.distributions import (
    dual_code, dual_distribution, inner_distribution, pairwise_inner_distribution, thm33_distribution,
)
from hrdc.eigen import q_direct, q_explicit, q_recurrence, verify_identities

SUITES = ("identities", "constructions", "distributions")

# family, n, d, q, additive
CONSTRUCTION_MATRIX = [
    ("thm41", 2, 1, 2, True),
    ("thm41", 3, 2, 2, True),
    ("thm41", 4, 3, 2, True),
    ("thm41", 3, 2, 3, True),
    ("thm42", 1, 1, 3, True),
    ("thm42", 3, 1, 2, True),
    ("thm42", 3, 3, 2, True),
    ("thm42", 3, 3, 3, True),
    ("thm42", 5, 3, 2, True),
    ("zero-diag", 2, 2, 2, True),
    ("zero-diag", 3, 2, 2, True),
    ("zero-diag", 2, 2, 3, True),
    ("sym-dn", 2, 2, 2, True),
    ("sym-dn", 3, 3, 2, True),
    ("sym-dn", 4, 4, 2, True),
    ("sym-dn", 2, 2, 3, True),
    ("thm43", 2, 2, 2, False),
    ("thm43", 2, 2, 3, False),
    ("thm43", 4, 4, 2, False),
]

X32_DISTRIBUTIONS = {(1, 0, 21, 42), (1, 0, 29, 34), (1, 0, 37, 26), (1, 0, 45, 18)}


def suite_identities() -> list[dict]:
    failures = []
    for n in range(1, 7):
        for q in (2, 3, 4, 5):
            if q_explicit(n, q) != q_recurrence(n, q):
                failures.append({"check": "explicit_vs_recurrence", "n": n, "q": q})
            rep = verify_identities(n, q)
            if not rep.ok:
                failures.append({"check": "identities", **rep.to_json()})
    for n, q in ((1, 2), (1, 3), (2, 2), (2, 3)):
        if q_direct(n, q) != q_explicit(n, q):
            failures.append({"check": "direct_vs_explicit", "n": n, "q": q})
    return failures


def suite_constructions() -> list[dict]:
    failures = []
    for family, n, d, q, additive in CONSTRUCTION_MATRIX:
        Y = construct(family, n, q, d)
        where = {"family": family, "n": n, "d": d, "q": q}
        expected = q**n + 1 if family == "thm43" else bound_additive(n, d, q)
        if len(Y) != expected:
            failures.append({"check": "size", **where, "size": len(Y), "expected": expected})
        if Y.is_additive != additive:
            failures.append({"check": "additivity", **where})
        rep = check_code(Y, d)
        if not rep["ok"]:
            failures.append({"check": "check_code", **where, "failures": rep["failures"]})
        if (family, n, d, q) == ("thm41", 3, 2, 2):
            D = tuple(int(x) for x in inner_distribution(Y))
            if D not in X32_DISTRIBUTIONS:
                failures.append({"check": "x32_distribution", **where, "inner": list(D)})
    return failures


def suite_distributions() -> list[dict]:
    failures = []
    for family, n, d, q, additive in CONSTRUCTION_MATRIX:
        if q ** (n * (n - d + 1)) > 2**12:
            continue
        Y = construct(family, n, q, d)
        where = {"family": family, "n": n, "d": d, "q": q}
        if additive and inner_distribution(Y) != pairwise_inner_distribution(Y):
            failures.append({"check": "census_vs_pairs", **where})
        D = inner_distribution(Y)
        Dp = dual_distribution(D, q_explicit(n, q))
        if additive and any((x / len(Y)).denominator != 1 for x in Dp):
            failures.append({"check": "dual_divisibility", **where})
        if d % 2 == 1 and additive and len(Y) == bound_additive(n, d, q):
            if D != thm33_distribution(n, d, q, len(Y)):
                failures.append({"check": "forced_distribution", **where})
    Y = construct("zero-diag", 2, 2, 2)
    Yp = dual_code(Y)
    Dp = dual_distribution(inner_distribution(Y), q_explicit(2, 2))
    if len(Y) * len(Yp) != 16:
        failures.append({"check": "dual_size"})
    if inner_distribution(Yp) != tuple(x / len(Y) for x in Dp):
        failures.append({"check": "dual_inner"})
    # the dual of the dual's distribution is |Y^perp| = |X| / |Y| times Y's
    back = dual_distribution(inner_distribution(Yp), q_explicit(2, 2))
    if back != tuple(Fraction(16, len(Y)) * x for x in inner_distribution(Y)):
        failures.append({"check": "biduality"})
    return failures


def run_suite(name: str) -> list[dict]:
    return {"identities": suite_identities, "constructions": suite_constructions,
            "distributions": suite_distributions}[name]()
