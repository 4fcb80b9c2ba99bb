"""Finite fields F_q of square order q = p^(2m), elements coded as integers.

An element c0 + c1*t + ... + c_{n-1}*t^(n-1) of F_p[t]/(modulus) is stored as
the integer c0 + c1*p + ... + c_{n-1}*p^(n-1).  Multiplication goes through
exp/log tables of a fixed generator.  Every table has a plain-list copy for
scalar work and a numpy copy for batched work.
"""
from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass

import numpy as np

from . import _poly
from .errors import (
    EmbeddingUnavailableError,
    FieldTooLargeError,
    NonPrimeError,
    NormNotOneError,
    ReducibleModulusError,
    ZeroInputError,
)

DEFAULT_MAX_Q = 1 << 20
MAX_EXTENSION_BASE_Q = 49

# thresholds for the optional addition tables (p odd)
_SCALAR_ADD_TABLE_MAX_Q = 729
_VECTOR_ADD_TABLE_MAX_Q = 2401

_SPEC_RE = re.compile(r"^\s*(\d+)\^(\d+)(?::(\d+))?\s*$")


def max_q() -> int:
    """Field-size budget, raised through the HERMREL_MAX_Q environment variable."""
    value = os.environ.get("HERMREL_MAX_Q")
    return int(value) if value else DEFAULT_MAX_Q


def modulus_code(coeffs, p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


def modulus_coeffs(code: int, p: int) -> list[int]:
    out = []
    while code:
        code, d = divmod(code, p)
        out.append(d)
    return out


def _format_poly(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


class Field:
    """The finite field F_{p^n} with n even.

    Do not instantiate directly; use :func:`build_field` or :func:`parse_field`,
    which cache instances.  A Field is immutable once built.
    """

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = tuple(modulus)
        self.modulus_code = modulus_code(modulus, p)
        self.sqrt_q = p ** (n // 2)
        q, order = self.q, self.q - 1

        self.powers_of_p = np.array([p**i for i in range(n)], dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        self.digit_table = (codes[:, None] // self.powers_of_p[None, :]) % p

        self.generator = self._find_generator()
        exp = self._exp_table(self.generator)

        # Padded tables: log(0) points past the live range so products with
        # zero land on zero entries without branching.
        zero_log = 2 * order
        exp_ext = np.zeros(4 * order + 1, dtype=np.int64)
        exp_ext[:order] = exp
        exp_ext[order : 2 * order] = exp
        log = np.empty(q, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        log[0] = zero_log
        self.np_exp = exp_ext
        self.np_log = log
        self._exp = exp_ext.tolist()
        self._log = log.tolist()
        self._order = order

        neg = (self.digit_table * (p - 1)) % p @ self.powers_of_p
        self.np_neg = neg
        self._neg = neg.tolist()

        r = self.sqrt_q
        frob = np.zeros(q, dtype=np.int64)
        frob[1:] = exp_ext[(log[1:] * r) % order]
        self.np_frob = frob
        self._frob = frob.tolist()

        self._add_table = None
        self._zech = None
        self.np_add_table = None
        if p != 2:
            if q <= _VECTOR_ADD_TABLE_MAX_Q:
                table = np.zeros((q, q), dtype=np.int64)
                for i in range(n):
                    col = self.digit_table[:, i]
                    table += ((col[:, None] + col[None, :]) % p) * p**i
                self.np_add_table = table.ravel()
                if q <= _SCALAR_ADD_TABLE_MAX_Q:
                    self._add_table = self.np_add_table.tolist()
            if self._add_table is None:
                one_plus = np.array([self._digit_add(1, int(e)) for e in exp], dtype=np.int64)
                zech = log[one_plus]
                zech[one_plus == 0] = -1
                self._zech = zech.tolist()

        self.subfield = tuple(sorted(a for a in range(q) if self._frob[a] == a))

    # ---- construction helpers -------------------------------------------

    def _code_to_poly(self, code: int) -> list[int]:
        return _poly.trim([int(d) for d in self.digit_table[code]])

    def _poly_to_code(self, poly) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(poly))

    def _find_generator(self) -> int:
        f = list(self.modulus)
        order = self.q - 1
        factors = _poly.prime_factors(order)
        for g in range(1, self.q):
            gp = self._code_to_poly(g)
            if _poly.powmod(gp, order, f, self.p) != [1]:
                continue
            if all(_poly.powmod(gp, order // ell, f, self.p) != [1] for ell in factors):
                return g
        raise AssertionError("no generator found; modulus not irreducible?")

    def _mul_matrix(self, code: int) -> np.ndarray:
        """n x n matrix over F_p of multiplication by ``code`` on digit vectors."""
        f = list(self.modulus)
        y = self._code_to_poly(code)
        cols = []
        for i in range(self.n):
            prod = _poly.mulmod(y, [0] * i + [1], f, self.p)
            cols.append(prod + [0] * (self.n - len(prod)))
        return np.array(cols, dtype=np.int64).T

    def _exp_table(self, g: int) -> np.ndarray:
        order = self.q - 1
        digits = np.zeros((1, self.n), dtype=np.int64)
        digits[0, 0] = 1
        step = g
        # doubling: multiply the block g^0..g^(k-1) by g^k to get g^k..g^(2k-1)
        while digits.shape[0] < order:
            mat = self._mul_matrix(step)
            digits = np.vstack([digits, (digits @ mat.T) % self.p])
            step = self._poly_to_code(
                _poly.mulmod(self._code_to_poly(step), self._code_to_poly(step), list(self.modulus), self.p)
            )
        return digits[:order] @ self.powers_of_p

    def _digit_add(self, a: int, b: int) -> int:
        da, db = self.digit_table[a], self.digit_table[b]
        return int(((da + db) % self.p) @ self.powers_of_p)

    # ---- identity ---------------------------------------------------------

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.n}:{self.modulus_code}"

    def __repr__(self) -> str:
        return f"Field(GF({self.p}^{self.n}), modulus {_format_poly(self.modulus)})"

    def __reduce__(self):
        return (parse_field, (self.spec,))

    # ---- scalar arithmetic -----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a * self.q + b]
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._order]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._exp[(-self._log[a]) % self._order]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self._order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def arith(self, kind: str, a: int, b: int) -> int:
        ops = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div, "pow": self.pow}
        try:
            op = ops[kind]
        except KeyError:
            raise ValueError(f"unknown operation {kind!r}") from None
        return op(a, b)

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroInputError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % self._order]

    def frob(self, a: int) -> int:
        """a -> a^sqrt(q)."""
        return self._frob[a]

    def trace(self, a: int) -> int:
        return self.add(a, self._frob[a])

    def norm(self, a: int) -> int:
        """a^(sqrt(q)+1).  The norm of 0 is reported as 0; callers filter zero."""
        return self.mul(a, self._frob[a])

    def in_subfield(self, a: int) -> bool:
        return self._frob[a] == a

    def sum(self, values) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, u, v) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add(acc, self._exp[self._log[a] + self._log[b]])
        return acc

    def power_map(self, e: int) -> list[int]:
        """List t with t[a] = a^e, for e >= 1."""
        return _power_map(self, e)

    # ---- vectorized arithmetic -------------------------------------------

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.np_add_table is not None:
            return self.np_add_table[a * self.q + b]
        da = self.digit_table[a]
        db = self.digit_table[b]
        return ((da + db) % self.p) @ self.powers_of_p

    def vneg(self, a):
        return self.np_neg[a]

    def vsub(self, a, b):
        return self.vadd(a, self.np_neg[b])

    def vmul(self, a, b):
        return self.np_exp[self.np_log[a] + self.np_log[b]]

    def vfrob(self, a):
        return self.np_frob[a]

    def vpow(self, a, e: int):
        a = np.asarray(a)
        out = self.np_exp[(self.np_log[a] * e) % self._order]
        return np.where(a == 0, 1 if e == 0 else 0, out)

    def digits(self, codes):
        return self.digit_table[codes]


@functools.lru_cache(maxsize=None)
def _power_map(field: Field, e: int) -> list[int]:
    return [0] + [field.pow(a, e) for a in range(1, field.q)]


@functools.lru_cache(maxsize=None)
def _smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    for low in range(p**n):
        coeffs = modulus_coeffs(low, p)
        coeffs = coeffs + [0] * (n - len(coeffs)) + [1]
        if _poly.is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


@functools.lru_cache(maxsize=None)
def _build(p: int, n: int, modulus: tuple[int, ...]) -> Field:
    return Field(p, n, modulus)


def build_field(p: int, m: int, modulus=None, *, limit: int | None = None) -> Field:
    """Build F_q with q = p^(2m).

    ``modulus`` may be a coefficient sequence (lowest degree first, monic,
    degree 2m) or its base-p integer code.  Without it the lexicographically
    smallest monic irreducible polynomial is used.
    """
    if not _poly.is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    if m < 1:
        raise ValueError("m must be positive")
    n = 2 * m
    limit = max_q() if limit is None else limit
    if p**n > limit:
        raise FieldTooLargeError(f"q = {p}^{n} exceeds the field-size budget {limit}")
    if modulus is not None:
        coeffs = modulus_coeffs(modulus, p) if isinstance(modulus, int) else [int(c) for c in modulus]
        coeffs = _poly.trim(coeffs)
        if len(coeffs) != n + 1 or coeffs[-1] != 1 or any(not 0 <= c < p for c in coeffs):
            raise ValueError(f"modulus must be monic of degree {n} over F_{p}")
        if not _poly.is_irreducible(coeffs, p):
            raise ReducibleModulusError(f"{_format_poly(coeffs)} is reducible over F_{p}")
        modulus = tuple(coeffs)
    else:
        modulus = _smallest_irreducible(p, n)
    return _build(p, n, modulus)


def parse_field(spec: str) -> Field:
    """Parse a field spec string ``"p^2m[:modulus-code]"``, e.g. ``"3^2"`` or ``"3^2:10"``."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ValueError(f"bad field spec {spec!r}; expected p^2m[:modulus-code]")
    p, n, code = int(match.group(1)), int(match.group(2)), match.group(3)
    if n % 2 or n == 0:
        raise ValueError(f"field order {p}^{n} is not an even prime power")
    return build_field(p, n // 2, int(code) if code is not None else None)


# ---- the three equations ----------------------------------------------------


def _subfield_basis(F: Field):
    theta = next(a for a in range(F.q) if not F.in_subfield(a))
    denom = F.inv(F.sub(theta, F.frob(theta)))

    def coords(z: int) -> tuple[int, int]:
        b = F.mul(F.sub(z, F.frob(z)), denom)
        return F.sub(z, F.mul(b, theta)), b

    return theta, coords


def solve_semilinear(F: Field, alpha: int, beta: int) -> list[int]:
    """All roots in F_q of X^sqrt(q) + alpha*X + beta = 0, sorted by code.

    z -> z^sqrt(q) + alpha*z is F_sqrt(q)-linear on F_q, a 2-dimensional
    F_sqrt(q)-space with basis (1, theta); the equation is solved as a 2x2
    linear system over the subfield.
    """
    if alpha == 0:
        raise ZeroInputError("alpha must be nonzero")
    theta, coords = _subfield_basis(F)
    col0 = coords(F.add(1, alpha))
    col1 = coords(F.add(F.frob(theta), F.mul(alpha, theta)))
    rhs = coords(F.neg(beta))
    m00, m10 = col0
    m01, m11 = col1

    det = F.sub(F.mul(m00, m11), F.mul(m01, m10))
    if det:
        a = F.div(F.sub(F.mul(rhs[0], m11), F.mul(m01, rhs[1])), det)
        b = F.div(F.sub(F.mul(m00, rhs[1]), F.mul(rhs[0], m10)), det)
        return [F.add(a, F.mul(b, theta))]

    rows = [(m00, m01, rhs[0]), (m10, m11, rhs[1])]
    pivot = next((r for r in rows if r[0] or r[1]), None)
    assert pivot is not None, "semilinear map cannot vanish identically"
    r0, r1, c = pivot
    for s0, s1, d in rows:
        # rank one: every row is a multiple of the pivot row
        lam = F.div(s0, r0) if r0 else F.div(s1, r1)
        if F.mul(lam, c) != d:
            return []
    if r0:
        a, b = F.div(c, r0), 0
    else:
        a, b = 0, F.div(c, r1)
    ka, kb = r1, F.neg(r0)
    base = F.add(a, F.mul(b, theta))
    kernel = F.add(ka, F.mul(kb, theta))
    return sorted(F.add(base, F.mul(s, kernel)) for s in F.subfield)


def solve_artin_schreier(F: Field, beta: int) -> list[int]:
    """All roots in F_q of X^sqrt(q) - X - beta = 0 (nonempty iff Tr beta = 0)."""
    return solve_semilinear(F, F.neg(1), F.neg(beta))


def solve_kummer(F: Field, beta: int) -> list[int]:
    """All roots in F_q^* of X^(sqrt(q)-1) = beta (nonempty iff Nm beta = 1)."""
    if beta == 0:
        raise ZeroInputError("beta must be nonzero")
    d = F.sqrt_q - 1
    k, rem = divmod(F.log(beta), d)
    if rem:
        return []
    step = F.sqrt_q + 1
    return sorted(F.exp(k + j * step) for j in range(d))


@dataclass(frozen=True)
class SpecialElements:
    trace_one: int
    norm_minus_one: int
    field: Field

    def rho(self, lam: int) -> int:
        """Smallest rho with rho^(1 - sqrt(q)) = lam, for Nm lam = 1."""
        F = self.field
        if lam == 0 or F.norm(lam) != 1:
            raise NormNotOneError(f"Nm({lam}) != 1")
        return solve_kummer(F, F.inv(lam))[0]


@functools.lru_cache(maxsize=None)
def special_elements(F: Field) -> SpecialElements:
    u = next(a for a in range(F.q) if F.trace(a) == 1)
    minus_one = F.neg(1)
    alpha = next(a for a in range(1, F.q) if F.norm(a) == minus_one)
    return SpecialElements(u, alpha, F)


def norm_preimages(F: Field, lam: int) -> list[int]:
    """All a with Nm a = lam, sorted by code; lam must lie in F_sqrt(q)^*."""
    if lam == 0 or not F.in_subfield(lam):
        raise ValueError(f"{lam} is not in the multiplicative group of the subfield")
    step = F.sqrt_q + 1
    k, rem = divmod(F.log(lam), step)
    assert rem == 0
    return sorted(F.exp(k + j * (F.sqrt_q - 1)) for j in range(step))


# ---- degree-2 extension -----------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    base: Field
    big: Field
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]


@functools.lru_cache(maxsize=None)
def extension(F: Field, degree: int = 2, *, max_base_q: int = MAX_EXTENSION_BASE_Q) -> Embedding:
    """F_{q^degree} together with the embedding of F_q into it.

    t is sent to the smallest-code root of the base modulus in the big field.
    """
    if F.q > max_base_q:
        raise EmbeddingUnavailableError(f"extension checks are capped at base q <= {max_base_q}")
    try:
        big = build_field(F.p, F.n * degree // 2)
    except FieldTooLargeError as exc:
        raise EmbeddingUnavailableError(str(exc)) from exc
    tau = None
    for x in range(big.q):
        acc = 0
        for c in reversed(F.modulus):
            acc = big.add(big.mul(acc, x), c)
        if acc == 0:
            tau = x
            break
    assert tau is not None
    powers = [big.pow(tau, i) for i in range(F.n)]
    table = []
    for a in range(F.q):
        acc = 0
        for d, tp in zip(F.digit_table[a].tolist(), powers):
            # d is an integer in [0, p), i.e. already a code of the prime subfield
            acc = big.add(acc, big.mul(d, tp))
        table.append(acc)
    return Embedding(F, big, tuple(table))
