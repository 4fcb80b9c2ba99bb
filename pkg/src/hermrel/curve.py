"""The curves (x^r, y^r, z^r) A (x, y, z)^t = 0 with r = sqrt(q) and A invertible."""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import projective as pj
from .errors import NotHermitianError, PointNotOnCurveError
from .field import Field, extension, special_elements


@functools.lru_cache(maxsize=None)
def _power_array(F: Field, e: int) -> np.ndarray:
    if e == F.sqrt_q:
        return F.np_frob
    return np.array(F.power_map(e), dtype=np.int64)


@functools.lru_cache(maxsize=None)
def monomial_table(F: Field, e: int) -> np.ndarray:
    """Array (N, 9): entry [j, 3i+k] is P_i^e * P_k for the j-th plane point P."""
    pts = pj.plane_points_array(F)
    pe = _power_array(F, e)[pts]
    cols = [F.vmul(pe[:, i], pts[:, k]) for i in range(3) for k in range(3)]
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class TangentDivisor:
    """Intersection of the curve with its tangent line at ``point``.

    On the line s*P + t*Q the form restricts to
    c0 s^(r+1) + c1 s^r t + c2 s t^r + c3 t^(r+1) with c0 = c1 = 0, so the
    divisor is r*P + P' where P' is the zero of c2 s + c3 t.
    """

    point: tuple
    line: tuple
    second: tuple
    coefficients: tuple
    multiplicity: int
    residual: tuple

    @property
    def is_inflexion(self) -> bool:
        return self.residual == self.point


class Curve:
    """A nonsingular curve C_A.

    ``field`` is the field the curve's points are taken from.  ``exponent``
    defaults to sqrt(q) of that field; a curve base-changed to an extension
    keeps the exponent of its field of definition.
    """

    def __init__(self, field: Field, matrix, *, exponent: int | None = None):
        self.field = field
        self.matrix = pj.to_pgl(field, matrix)
        self.exponent = field.sqrt_q if exponent is None else exponent
        self._pow = field._frob if self.exponent == field.sqrt_q else field.power_map(self.exponent)
        self._points = None

    @property
    def is_base(self) -> bool:
        return self.exponent == self.field.sqrt_q

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.field is other.field
            and self.matrix == other.matrix
            and self.exponent == other.exponent
        )

    def __hash__(self):
        return hash((self.field.spec, self.matrix, self.exponent))

    def __repr__(self):
        return f"Curve({self.field.spec}, [{pj.format_codes(self.matrix)}])"

    # ---- evaluation ------------------------------------------------------

    def _powered(self, P) -> tuple:
        pw = self._pow
        return (pw[P[0]], pw[P[1]], pw[P[2]])

    def bilinear(self, P, Q) -> int:
        """P^(r) A Q^t."""
        return self.field.dot(pj.vec_mat(self.field, self._powered(P), self.matrix), Q)

    def evaluate(self, P) -> int:
        return self.bilinear(P, P)

    def contains(self, P) -> bool:
        return self.evaluate(P) == 0

    def rational_points(self) -> list:
        """Points of the curve over ``field``, in plane-point order."""
        if self._points is None:
            F = self.field
            mono = monomial_table(F, self.exponent)
            acc = np.zeros(mono.shape[0], dtype=np.int64)
            for k, a in enumerate(self.matrix):
                if a:
                    acc = F.vadd(acc, F.vmul(np.int64(a), mono[:, k]))
            pts = pj.plane_points(F)
            self._points = [pts[j] for j in np.flatnonzero(acc == 0).tolist()]
        return list(self._points)

    def point_count(self) -> int:
        return len(self.rational_points())

    def m_invariant(self) -> int:
        """m with N = m*sqrt(q) + 1."""
        m, rem = divmod(self.point_count() - 1, self.exponent)
        if rem:
            raise ArithmeticError(f"N = {self.point_count()} is not 1 mod {self.exponent} for {self}")
        return m

    # ---- tangents and inflexions -----------------------------------------

    def _require_point(self, P) -> tuple:
        P = pj.normalize(self.field, P)
        if not self.contains(P):
            raise PointNotOnCurveError(f"{P} is not on {self}")
        return P

    def tangent_line(self, P) -> tuple:
        P = self._require_point(P)
        return pj.normalize(self.field, pj.vec_mat(self.field, self._powered(P), self.matrix))

    def tangent_divisor(self, P, second=None) -> TangentDivisor:
        F = self.field
        P = self._require_point(P)
        line = pj.normalize(F, pj.vec_mat(F, self._powered(P), self.matrix))
        if second is None:
            second = next(Q for Q in pj.line_points(F, line) if Q != P)
        else:
            second = pj.normalize(F, second)
            if second == P or not pj.incident(F, second, line):
                raise ValueError("second point must be another point of the tangent line")
        Q = second
        c = (self.bilinear(P, P), self.bilinear(P, Q), self.bilinear(Q, P), self.bilinear(Q, Q))
        c2, c3 = c[2], c[3]
        if c2 == 0 and c3 == 0:
            raise AssertionError(f"tangent line at {P} lies on {self}; curve is not irreducible")
        if c2 == 0:
            mult, residual = self.exponent + 1, P
        else:
            mult = self.exponent
            residual = pj.normalize(F, tuple(F.sub(F.mul(c3, a), F.mul(c2, b)) for a, b in zip(P, Q)))
        return TangentDivisor(P, line, Q, c, mult, residual)

    def is_inflexion(self, P) -> bool:
        return self.tangent_divisor(P).multiplicity == self.exponent + 1

    def inflexions(self) -> list:
        return [P for P in self.rational_points() if self.is_inflexion(P)]

    # ---- related curves --------------------------------------------------

    def _require_base(self, what: str):
        if not self.is_base:
            raise ValueError(f"{what} is only defined over the field of definition")

    def mirror(self) -> "Curve":
        self._require_base("the mirror curve")
        return Curve(self.field, pj.star(self.field, self.matrix))

    def dual(self) -> "Curve":
        """C with matrix (A^-1)^t, the curve traced by the tangent lines."""
        F = self.field
        return Curve(F, pj.transpose(pj.mat_inv(F, self.matrix)), exponent=self.exponent)

    def transform(self, T) -> "Curve":
        self._require_base("a change of coordinates")
        return Curve(self.field, pj.congruence_transform(self.field, self.matrix, T))

    def is_hermitian(self) -> bool:
        self._require_base("the Hermitian condition")
        return pj.normalize(self.field, pj.star(self.field, self.matrix)) == self.matrix

    def hermitian_lift(self) -> tuple:
        """A scalar multiple rho*A satisfying (rho*A)* = rho*A exactly."""
        F = self.field
        if not self.is_hermitian():
            raise NotHermitianError(f"{self} is not Hermitian")
        A = self.matrix
        lead = next(a for a in A if a)  # == 1 for a normalized matrix
        lam = F.div(next(s for s, a in zip(pj.star(F, A), A) if a), lead)
        rho = special_elements(F).rho(lam)
        return tuple(F.mul(rho, a) for a in A)

    def base_change(self, degree: int = 2) -> "Curve":
        self._require_base("base change")
        emb = extension(self.field, degree)
        return Curve(emb.big, tuple(emb(a) for a in self.matrix), exponent=self.exponent)

    # ---- reporting -------------------------------------------------------

    def report(self) -> dict:
        pts = self.rational_points()
        return {
            "A": list(self.matrix),
            "q": self.field.q,
            "N": len(pts),
            "points": [list(P) for P in pts],
            "inflexions": [list(P) for P in pts if self.is_inflexion(P)],
        }


def omega_matrix(omega: int) -> tuple:
    """x^r y + omega x y^r + z^(r+1)."""
    return (0, 1, 0, omega, 0, 0, 0, 0, 1)


def omega_curve(F: Field, omega: int) -> Curve:
    return Curve(F, omega_matrix(omega))


def diagonal_curve(F: Field, a: int, b: int, c: int) -> Curve:
    return Curve(F, pj.diag(a, b, c))
