"""Points, lines and 3x3 matrices over a Field.

Points and lines are 3-tuples of element codes scaled so the first nonzero
coordinate is 1; matrices are row-major 9-tuples.  A matrix scaled so its
first nonzero entry is 1 is the canonical representative of its class in
PGL(3, F_q), so equality of normalized tuples is projective equality.

Change of coordinates by T sends the form of A to the form of T* A T and a
point X (old coordinates) to T^-1 X (new coordinates).
"""
from __future__ import annotations

import functools
from typing import Iterator

import numpy as np

from .errors import ConcurrentLinesError, EqualPointsError, SingularMatrixError
from .field import Field

Point = tuple  # (x, y, z)
Line = tuple  # (u, v, w), incidence u*x + v*y + w*z = 0
Mat = tuple  # 9 codes, row-major

IDENTITY = (1, 0, 0, 0, 1, 0, 0, 0, 1)


def normalize(F: Field, v) -> tuple:
    """Scale ``v`` so that its first nonzero entry is 1."""
    for a in v:
        if a:
            if a == 1:
                return tuple(v)
            inv = F.inv(a)
            return tuple(F.mul(inv, b) for b in v)
    raise ValueError("the zero vector has no projective class")


def parse_codes(text: str, count: int, F: Field | None = None) -> tuple:
    """Parse ``count`` whitespace-separated decimal codes."""
    parts = text.replace(",", " ").split()
    if len(parts) != count:
        raise ValueError(f"expected {count} element codes, got {len(parts)}")
    codes = tuple(int(x) for x in parts)
    if F is not None and any(not 0 <= c < F.q for c in codes):
        raise ValueError(f"element codes must lie in [0, {F.q})")
    return codes


def format_codes(codes) -> str:
    return " ".join(str(c) for c in codes)


# ---- matrices ----------------------------------------------------------------


def mat_mul(F: Field, A: Mat, B: Mat) -> Mat:
    return tuple(
        F.dot(A[3 * i : 3 * i + 3], (B[j], B[3 + j], B[6 + j])) for i in range(3) for j in range(3)
    )


def mat_vec(F: Field, A: Mat, v) -> tuple:
    return tuple(F.dot(A[3 * i : 3 * i + 3], v) for i in range(3))


def vec_mat(F: Field, v, A: Mat) -> tuple:
    return tuple(F.dot(v, (A[j], A[3 + j], A[6 + j])) for j in range(3))


def transpose(A: Mat) -> Mat:
    return (A[0], A[3], A[6], A[1], A[4], A[7], A[2], A[5], A[8])


def frob_vec(F: Field, v) -> tuple:
    return tuple(F.frob(a) for a in v)


def star(F: Field, A: Mat) -> Mat:
    """Transpose of the entry-wise sqrt(q)-th power."""
    return transpose(frob_vec(F, A))


def det(F: Field, A: Mat) -> int:
    a, b, c, d, e, f, g, h, i = A
    mul, sub = F.mul, F.sub
    t1 = mul(a, sub(mul(e, i), mul(f, h)))
    t2 = mul(b, sub(mul(d, i), mul(f, g)))
    t3 = mul(c, sub(mul(d, h), mul(e, g)))
    return F.add(sub(t1, t2), t3)


def adjugate(F: Field, A: Mat) -> Mat:
    a, b, c, d, e, f, g, h, i = A
    mul, sub, neg = F.mul, F.sub, F.neg
    return (
        sub(mul(e, i), mul(f, h)), neg(sub(mul(b, i), mul(c, h))), sub(mul(b, f), mul(c, e)),
        neg(sub(mul(d, i), mul(f, g))), sub(mul(a, i), mul(c, g)), neg(sub(mul(a, f), mul(c, d))),
        sub(mul(d, h), mul(e, g)), neg(sub(mul(a, h), mul(b, g))), sub(mul(a, e), mul(b, d)),
    )  # fmt: skip


def mat_inv(F: Field, A: Mat) -> Mat:
    d = det(F, A)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    s = F.inv(d)
    return tuple(F.mul(s, x) for x in adjugate(F, A))


def to_pgl(F: Field, A: Mat) -> Mat:
    """Canonical PGL(3, F_q) representative of an invertible matrix."""
    A = tuple(A)
    if len(A) != 9:
        raise ValueError("a 3x3 matrix needs 9 entries")
    if det(F, A) == 0:
        raise SingularMatrixError("matrix is singular")
    return normalize(F, A)


def diag(a: int, b: int, c: int) -> Mat:
    return (a, 0, 0, 0, b, 0, 0, 0, c)


def congruence_transform(F: Field, A: Mat, T: Mat) -> Mat:
    """Normalized T* A T, the matrix of C_A in the coordinates given by T."""
    if det(F, T) == 0:
        raise SingularMatrixError("transform is singular")
    return normalize(F, mat_mul(F, mat_mul(F, star(F, T), A), T))


def same_class(F: Field, A: Mat, B: Mat) -> bool:
    return normalize(F, A) == normalize(F, B)


def pgl_order(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**3 - q**2) // (q - 1)


# ---- points and lines --------------------------------------------------------


@functools.lru_cache(maxsize=None)
def plane_points(F: Field) -> tuple:
    """All q^2+q+1 points: (1,*,*), then (0,1,*), then (0,0,1), codes ascending."""
    q = F.q
    pts = [(1, y, z) for y in range(q) for z in range(q)]
    pts += [(0, 1, z) for z in range(q)]
    pts.append((0, 0, 1))
    return tuple(pts)


@functools.lru_cache(maxsize=None)
def plane_points_array(F: Field) -> np.ndarray:
    return np.array(plane_points(F), dtype=np.int64)


@functools.lru_cache(maxsize=None)
def point_index(F: Field) -> dict:
    return {P: k for k, P in enumerate(plane_points(F))}


def incident(F: Field, P: Point, L: Line) -> bool:
    return F.dot(P, L) == 0


def cross(F: Field, u, v) -> tuple:
    mul, sub = F.mul, F.sub
    return (
        sub(mul(u[1], v[2]), mul(u[2], v[1])),
        sub(mul(u[2], v[0]), mul(u[0], v[2])),
        sub(mul(u[0], v[1]), mul(u[1], v[0])),
    )


def line_through(F: Field, P: Point, Q: Point) -> Line:
    c = cross(F, P, Q)
    if not any(c):
        raise EqualPointsError(f"{P} and {Q} are the same projective point")
    return normalize(F, c)


def meet(F: Field, L1: Line, L2: Line) -> Point:
    c = cross(F, L1, L2)
    if not any(c):
        raise EqualPointsError("the lines coincide")
    return normalize(F, c)


def line_points(F: Field, L: Line) -> Iterator[Point]:
    """Points of a line in the same order as :func:`plane_points`."""
    u, v, w = L
    q = F.q
    if w:
        winv = F.neg(F.inv(w))
        for y in range(q):
            yield (1, y, F.mul(winv, F.add(u, F.mul(v, y))))
    elif v:
        y = F.neg(F.div(u, v))
        for z in range(q):
            yield (1, y, z)
    if w:
        yield (0, 1, F.neg(F.div(v, w)))
    elif v == 0:
        for z in range(q):
            yield (0, 1, z)
    if w == 0:
        yield (0, 0, 1)


def frame_to_triangle(F: Field, L1: Line, L2: Line, L3: Line) -> Mat:
    """T such that, in the coordinates given by T, L1 = {y=0}, L2 = {x=0}, L3 = {z=0}.

    A line with dual coordinates l becomes l*T, so T is the inverse of the
    matrix with rows L2, L1, L3, scaled to its PGL representative.
    """
    rows = tuple(L2) + tuple(L1) + tuple(L3)
    if det(F, rows) == 0:
        raise ConcurrentLinesError("the three lines are concurrent or not distinct")
    return normalize(F, mat_inv(F, rows))


def point_image(F: Field, T: Mat, P: Point) -> Point:
    """Coordinates of P after the change of coordinates by T."""
    return normalize(F, mat_vec(F, mat_inv(F, T), P))


def line_image(F: Field, T: Mat, L: Line) -> Line:
    """Dual coordinates of L after the change of coordinates by T."""
    return normalize(F, vec_mat(F, L, T))
