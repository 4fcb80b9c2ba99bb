"""Shared brute-force oracles.

Nothing here touches the table machinery of ``hermrel.field``: the oracle
field multiplies polynomials schoolbook-style and reduces by long division.
"""
from __future__ import annotations

import random

import pytest

from hermrel.field import parse_field


class NaiveField:
    """F_{p^n} on the same integer codes, with no tables at all."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.modulus = list(modulus)
        self.n = len(self.modulus) - 1
        self.q = p**self.n

    def poly(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.n)]

    def code(self, poly) -> int:
        return sum(c * self.p**i for i, c in enumerate(poly))

    def add(self, a: int, b: int) -> int:
        return self.code([(x + y) % self.p for x, y in zip(self.poly(a), self.poly(b))])

    def neg(self, a: int) -> int:
        return self.code([(-x) % self.p for x in self.poly(a)])

    def mul(self, a: int, b: int) -> int:
        x, y = self.poly(a), self.poly(b)
        prod = [0] * (2 * self.n - 1)
        for i, c in enumerate(x):
            for j, d in enumerate(y):
                prod[i + j] = (prod[i + j] + c * d) % self.p
        for k in range(len(prod) - 1, self.n - 1, -1):
            c = prod[k]
            if c:
                for i, m in enumerate(self.modulus):
                    prod[k - self.n + i] = (prod[k - self.n + i] - c * m) % self.p
        return self.code(prod[: self.n])

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def frob(self, a: int) -> int:
        return self.pow(a, round(self.q**0.5))

    def form(self, A, P, Q=None) -> int:
        """P^(r) A Q^t, with Q defaulting to P."""
        Q = P if Q is None else Q
        Pr = [self.frob(x) for x in P]
        acc = 0
        for i in range(3):
            for j in range(3):
                acc = self.add(acc, self.mul(self.mul(Pr[i], A[3 * i + j]), Q[j]))
        return acc


def naive(F) -> NaiveField:
    return NaiveField(F.p, F.modulus)


def naive_points(F):
    """All normalized points of P^2(F_q), built without the library."""
    q = F.q
    return [(1, y, z) for y in range(q) for z in range(q)] + [(0, 1, z) for z in range(q)] + [(0, 0, 1)]


def random_invertible(F, rng: random.Random):
    from hermrel import projective as pj

    while True:
        A = tuple(rng.randrange(F.q) for _ in range(9))
        if pj.det(F, A):
            return pj.normalize(F, A)


@pytest.fixture(params=["2^2", "3^2", "2^4", "5^2"])
def small_field(request):
    return parse_field(request.param)


@pytest.fixture
def F4():
    return parse_field("2^2")


@pytest.fixture
def F9():
    return parse_field("3^2")
