"""Vectorized kernels over many matrices at once (rows of 9 element codes).

Point counting uses that the form P^(r) A P^t is F_p-linear in the entries
of A: with A written as 9*n base-p digits, the digit vectors of the form's
values at all N plane points are one integer matrix product away.
"""
from __future__ import annotations

import functools

import numpy as np

from . import projective as pj
from .curve import monomial_table
from .field import Field

_TRANSPOSE = np.array([0, 3, 6, 1, 4, 7, 2, 5, 8])


@functools.lru_cache(maxsize=None)
def _count_weights(F: Field) -> np.ndarray:
    """(9n, N*n) matrix W: digits(A) @ W = digits of the form at every point."""
    mono = monomial_table(F, F.sqrt_q)
    N = mono.shape[0]
    W = np.zeros((9 * F.n, N * F.n), dtype=np.float32)
    for k in range(9):
        for i in range(F.n):
            prod = F.vmul(mono[:, k], np.int64(F.p**i))
            W[k * F.n + i] = F.digit_table[prod].reshape(-1)
    return W


def on_curve_mask(F: Field, mats: np.ndarray) -> np.ndarray:
    """Boolean (B, N): plane point j lies on the curve of row b."""
    mats = np.asarray(mats, dtype=np.int64)
    digits = F.digit_table[mats].reshape(mats.shape[0], -1).astype(np.float32)
    values = digits @ _count_weights(F)
    values = np.remainder(values, F.p).reshape(mats.shape[0], -1, F.n)
    return ~values.any(axis=2)


def point_counts(F: Field, mats: np.ndarray) -> np.ndarray:
    return on_curve_mask(F, mats).sum(axis=1)


def inflexion_counts(F: Field, mats: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Number of rational inflexions of each curve, given its on-curve mask.

    A rational point P of C_A is an inflexion exactly when the tangent line
    P^(r) A coincides with the line (A P^t)^(r), the tangent of the mirror
    curve at P; the test is a vanishing cross product.
    """
    mats = np.asarray(mats, dtype=np.int64)
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        return np.zeros(mats.shape[0], dtype=np.int64)
    pts = pj.plane_points_array(F)[cols]
    A = mats[rows]
    pf = F.vfrob(pts)
    tangent = [_dot3(F, pf, A[:, [c, 3 + c, 6 + c]]) for c in range(3)]
    mirror = [F.vfrob(_dot3(F, A[:, 3 * i : 3 * i + 3], pts)) for i in range(3)]
    cr = _cross(F, tangent, mirror)
    flex = (cr[0] == 0) & (cr[1] == 0) & (cr[2] == 0)
    return np.bincount(rows[flex], minlength=mats.shape[0])


def _dot3(F: Field, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    acc = F.vmul(X[:, 0], Y[:, 0])
    acc = F.vadd(acc, F.vmul(X[:, 1], Y[:, 1]))
    return F.vadd(acc, F.vmul(X[:, 2], Y[:, 2]))


def _cross(F: Field, u, v):
    m, s = F.vmul, F.vsub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


def det_batch(F: Field, mats: np.ndarray) -> np.ndarray:
    a, b, c, d, e, f, g, h, i = (mats[:, k] for k in range(9))
    m, s = F.vmul, F.vsub
    t1 = m(a, s(m(e, i), m(f, h)))
    t2 = m(b, s(m(d, i), m(f, g)))
    t3 = m(c, s(m(d, h), m(e, g)))
    return F.vadd(s(t1, t2), t3)


def first_nonzero(mats: np.ndarray) -> np.ndarray:
    return np.argmax(mats != 0, axis=1)


def normalize_batch(F: Field, mats: np.ndarray) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    lead = mats[np.arange(mats.shape[0]), first_nonzero(mats)]
    inv = F.np_exp[(-F.np_log[lead]) % (F.q - 1)]
    return F.vmul(inv[:, None], mats)


def is_normalized(mats: np.ndarray) -> np.ndarray:
    return mats[np.arange(mats.shape[0]), first_nonzero(mats)] == 1


def star_batch(F: Field, mats: np.ndarray) -> np.ndarray:
    return F.vfrob(mats)[:, _TRANSPOSE]


def matmul_batch(F: Field, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    X = np.broadcast_to(X, np.broadcast_shapes(X.shape, Y.shape))
    Y = np.broadcast_to(Y, X.shape)
    out = np.empty(X.shape, dtype=np.int64)
    for i in range(3):
        for j in range(3):
            acc = F.vmul(X[:, 3 * i], Y[:, j])
            acc = F.vadd(acc, F.vmul(X[:, 3 * i + 1], Y[:, 3 + j]))
            out[:, 3 * i + j] = F.vadd(acc, F.vmul(X[:, 3 * i + 2], Y[:, 6 + j]))
    return out


def congruence_batch(F: Field, A, Ts: np.ndarray) -> np.ndarray:
    """T* A T for every row T (not normalized)."""
    Ts = np.asarray(Ts, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64).reshape(1, 9)
    return matmul_batch(F, star_batch(F, Ts), matmul_batch(F, A, Ts))


def proportional_to(F: Field, mats: np.ndarray, target) -> np.ndarray:
    """Rows that equal a nonzero multiple of the normalized matrix ``target``."""
    target = np.asarray(target, dtype=np.int64)
    k0 = int(np.argmax(target != 0))
    lam = mats[:, k0]
    return (lam != 0) & np.all(mats == F.vmul(lam[:, None], target[None, :]), axis=1)


def hermitian_mask(F: Field, mats: np.ndarray) -> np.ndarray:
    """Rows A (normalized) with A* = lambda*A."""
    mats = np.asarray(mats, dtype=np.int64)
    S = star_batch(F, mats)
    k0 = first_nonzero(mats)
    lam = S[np.arange(mats.shape[0]), k0]
    return (lam != 0) & np.all(S == F.vmul(lam[:, None], mats), axis=1)


def decode_tuples(F: Field, start: int, stop: int) -> np.ndarray:
    """Rows for raw indices start..stop-1, index = sum a_k q^(8-k)."""
    idx = np.arange(start, stop, dtype=np.int64)
    powers = F.q ** np.arange(8, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % F.q


def pgl_rows(F: Field, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalized invertible rows among raw indices [start, stop) and their indices."""
    rows = decode_tuples(F, start, stop)
    keep = is_normalized(rows) & (rows.any(axis=1))
    rows = rows[keep]
    idx = np.arange(start, stop, dtype=np.int64)[keep]
    inv = det_batch(F, rows) != 0
    return rows[inv], idx[inv]


@functools.lru_cache(maxsize=4)
def pgl_elements(F: Field) -> np.ndarray:
    """Every element of PGL(3, F_q) as a normalized row; only for tiny q."""
    total = F.q**9
    chunks = []
    step = 1 << 18
    for start in range(0, total, step):
        rows, _ = pgl_rows(F, start, min(start + step, total))
        chunks.append(rows)
    out = np.concatenate(chunks)
    out.setflags(write=False)
    return out
