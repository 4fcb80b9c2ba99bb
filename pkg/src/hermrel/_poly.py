"""Dense polynomials over GF(p) as coefficient lists, lowest degree first.

Only what is needed to test a field modulus for irreducibility.
"""
from __future__ import annotations


def trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return trim([(x - y) % p for x, y in zip(a, b)])


def divmod_(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    rem = a[:]
    while len(rem) >= len(b):
        c = rem[-1] * inv % p
        shift = len(rem) - len(b)
        quo[shift] = c
        for i, bc in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * bc) % p
        rem = trim(rem)
    return trim(quo), rem


def mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return divmod_(prod, f, p)[1]


def powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = divmod_(a, f, p)[1]
    while e:
        if e & 1:
            result = mulmod(result, base, f, p)
        base = mulmod(base, base, f, p)
        e >>= 1
    return result


def gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` over GF(p)."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if sub(powmod(x, p**n, f, p), x, p):
        return False
    for ell in prime_factors(n):
        h = sub(powmod(x, p ** (n // ell), f, p), x, p)
        if len(gcd(f, h, p)) > 1:
            return False
    return True
