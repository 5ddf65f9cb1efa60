"""Global unitary frame field on the sphere.

For every unit q = (x, y) in R^n x R the complexified tangent space of S^n is
trivialized through the differential of the immersion (x, y) -> (1 + iy) x
into C^n; the pulled-back standard basis, prepended with q itself and
orthonormalized, yields A(q) in U(n+1) with A(q) e_1 = q, smoothly in q.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class UnitaryFrame:
    q: np.ndarray
    matrix: np.ndarray
    unitarity_residual: float
    basepoint_residual: float


def _tangent_basis(q: np.ndarray) -> np.ndarray:
    """Columns j solve D iota (u, w) = f_j under the complexified tangency
    constraint <x, u> + y w = 0, where iota(x, y) = (1 + iy) x."""
    n = q.shape[0] - 1
    x, y = q[:n], float(q[n])
    cols = np.empty((n + 1, n), dtype=complex)
    denom_w = y + 1j * (2.0 * y * y - 1.0)  # never zero on the sphere
    denom_u = 1.0 + 1j * y
    for j in range(n):
        f = np.zeros(n)
        f[j] = 1.0
        w = -x[j] / denom_w
        u = (f - 1j * w * x) / denom_u
        cols[:n, j] = u
        cols[n, j] = w
    return cols


def sphere_unitary_frame(n: int, q: np.ndarray) -> UnitaryFrame:
    """Unitary matrix with first column q, varying smoothly over the sphere."""
    q = np.asarray(q, dtype=float)
    if q.shape != (n + 1,):
        raise InvalidInputError(f"q must be a vector of length {n + 1}")
    if abs(np.linalg.norm(q) - 1.0) > 1e-10:
        raise InvalidInputError("q must be a unit vector")

    cols = np.empty((n + 1, n + 1), dtype=complex)
    cols[:, 0] = q
    cols[:, 1:] = _tangent_basis(q)

    # modified Gram-Schmidt over C with q fixed first
    for j in range(n + 1):
        v = cols[:, j]
        for i in range(j):
            v = v - (np.conj(cols[:, i]) @ v) * cols[:, i]
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise InvalidInputError("frame vectors became linearly dependent")
        cols[:, j] = v / nrm

    gram = np.conj(cols.T) @ cols
    u_res = float(np.linalg.norm(gram - np.eye(n + 1)))
    b_res = float(np.linalg.norm(cols[:, 0] - q))
    return UnitaryFrame(q=q, matrix=cols, unitarity_residual=u_res, basepoint_residual=b_res)


@dataclass(frozen=True, eq=False)
class FrameFamilyReport:
    n: int
    mesh: float
    count: int
    max_unitarity_residual: float
    max_basepoint_residual: float
    continuity_modulus: float


def verify_frame_family(
    n: int, mesh: float = 1e-3, count: int = 500, seed: int = 0
) -> FrameFamilyReport:
    """Residuals at seeded random points plus a discrete continuity modulus
    max |A(q) - A(q')|_F / |q - q'| over pairs at distance about ``mesh``.

    Calling again with a halved mesh and the same seed probes the same base
    points, so the modulus should be stable under refinement.
    """
    rng = np.random.default_rng(seed)
    max_u = 0.0
    max_b = 0.0
    modulus = 0.0
    for _ in range(count):
        q = rng.standard_normal(n + 1)
        q /= np.linalg.norm(q)
        d = rng.standard_normal(n + 1)
        d -= (d @ q) * q
        dn = np.linalg.norm(d)
        if dn == 0.0:
            continue
        qp = q + mesh * d / dn
        qp /= np.linalg.norm(qp)
        fa = sphere_unitary_frame(n, q)
        fb = sphere_unitary_frame(n, qp)
        max_u = max(max_u, fa.unitarity_residual, fb.unitarity_residual)
        max_b = max(max_b, fa.basepoint_residual, fb.basepoint_residual)
        gap = float(np.linalg.norm(q - qp))
        if gap > 0.0:
            modulus = max(modulus, float(np.linalg.norm(fa.matrix - fb.matrix)) / gap)
    return FrameFamilyReport(
        n=n,
        mesh=mesh,
        count=count,
        max_unitarity_residual=max_u,
        max_basepoint_residual=max_b,
        continuity_modulus=modulus,
    )
