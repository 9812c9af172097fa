"""The two parametrized families of Hermitian Lie algebras.

Both families carry an abelian ideal and are described in an adapted
("admissible") unitary frame in which e_1 is transverse to the ideal.

* Almost abelian: abelian ideal of real codimension 1.  Parameters
  ``(lambda, v, A)`` with lambda real, v a complex (n-1)-vector and A a
  complex (n-1)x(n-1) matrix.  Every parameter choice satisfies Jacobi.

* J-invariant abelian ideal of complex codimension 1 (real codimension 2).
  Parameters ``(lambda, v, X, Y, Z)``; Jacobi is equivalent to the two
  quadratic constraints

      lambda (X* + Y) + [X*, Y] - Z conj(Z) = 0
      lambda Z - (Z X^T + Y Z) = 0.

Index dictionary (math index a in 2..n maps to frame index a-1 and to
parameter-block index a-2):

    almost abelian:  C[j,0,i] = -conj(A[j,i])   D[0,0,0] = lambda
                     D[0,i,0] = v[i]            D[j,i,0] = A[i,j]
    codimension 2:   C[j,0,i] = X[i,j]          D[0,0,0] = lambda
                     D[j,i,0] = Y[i,j]          D[0,i,j] = Z[i,j]
                     D[0,i,0] = v[i]
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import HermitianLieAlgebra
from .curvature import symmetrize, chern_curvature
from .errors import ConstraintError, FrameError
from .linalg import DEFAULT_TOL, adjoint, commutator, max_abs, random_complex, random_unitary

CONSTRAINT_TOL = 1.0e-8


def _vec(v, m: int, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (m,):
        raise ValueError(f"{name} must have length {m}, got {v.shape}")
    return v


def _mat(a, m: int, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (m, m):
        raise ValueError(f"{name} must be {m}x{m}, got {a.shape}")
    return a


# -- almost abelian ------------------------------------------------------------


@dataclass(frozen=True)
class AlmostAbelianParams:
    n: int
    lam: float
    v: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        m = self.n - 1
        if self.n < 1:
            raise ValueError("complex dimension must be at least 1")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "v", _vec(self.v, m, "v"))
        object.__setattr__(self, "A", _mat(self.A, m, "A"))


def build_almost_abelian(p: AlmostAbelianParams, tol: float = DEFAULT_TOL) -> HermitianLieAlgebra:
    n, m = p.n, p.n - 1
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    D[0, 0, 0] = p.lam
    for i in range(1, n):
        D[0, i, 0] = p.v[i - 1]
        for j in range(1, n):
            C[j, 0, i] = -np.conj(p.A[j - 1, i - 1])
            C[j, i, 0] = np.conj(p.A[j - 1, i - 1])
            D[j, i, 0] = p.A[i - 1, j - 1]
    return HermitianLieAlgebra(n, C, D, tol=tol)


@dataclass(frozen=True)
class FamilyClassification:
    unimodular: bool
    kahler: bool
    chern_flat: bool


def aa_classify(p: AlmostAbelianParams, tol: float = DEFAULT_TOL) -> FamilyClassification:
    scale = 1.0 + abs(p.lam) + max_abs(p.v) + max_abs(p.A)
    eff = tol * scale
    unimodular = abs(p.lam + 2.0 * np.trace(p.A).real) <= eff
    kahler = max_abs(p.v) <= eff and max_abs(p.A + adjoint(p.A)) <= eff
    chern_flat = (
        abs(p.lam) <= eff
        and max_abs(p.v) <= eff
        and max_abs(commutator(p.A, adjoint(p.A))) <= eff * scale
    )
    return FamilyClassification(unimodular, kahler, chern_flat)


def aa_closed_forms(p: AlmostAbelianParams) -> dict:
    """Closed-form torsion/curvature entries of an almost abelian instance.

    Keys follow the component layout of the generic engine: ``torsion_1``
    is T[0,0,i], ``torsion_block[i-1,j-1]`` is T[j,0,i], ``R_1111`` is
    R[0,0,0,0], ``R_11i1[i-1]`` is R[0,0,i,0] and ``R_11ij[i-1,j-1]`` is
    R[0,0,i,j].
    """
    A, v, lam = p.A, p.v, p.lam
    Ah = adjoint(A)
    return {
        "torsion_1": v.copy(),
        "torsion_block": A + np.conj(A.T),
        "R_1111": -2.0 * lam**2 - float(np.vdot(v, v).real),
        "R_11i1": -Ah @ v,
        "R_11ij": np.outer(v, v.conj()) + commutator(A, Ah) - lam * (A + Ah),
    }


def sample_almost_abelian(
    n: int, rng: np.random.Generator, unimodular: bool = True
) -> AlmostAbelianParams:
    """Complex-Gaussian parameters; the unimodular variant shifts the real
    part of diag(A) so that lambda + 2 Re tr(A) vanishes."""
    if n < 2:
        raise ValueError("sampling needs complex dimension at least 2")
    m = n - 1
    A = random_complex(rng, (m, m))
    v = random_complex(rng, (m,))
    lam = float(rng.standard_normal())
    if unimodular:
        A = A - ((lam + 2.0 * np.trace(A).real) / (2.0 * m)) * np.eye(m)
    return AlmostAbelianParams(n, lam, v, A)


def sample_unimodular_aa(n: int, rng: np.random.Generator) -> AlmostAbelianParams:
    return sample_almost_abelian(n, rng, unimodular=True)


def constant_lc_curvature_example(n: int) -> HermitianLieAlgebra:
    """The non-unimodular almost abelian instance (lambda=1, v=0, A=I).

    Its Levi-Civita holomorphic sectional curvature is the constant -2 in
    every complex dimension n >= 2, while the torsion entries T[i,0,i] = 2
    show the metric is not Kahler.
    """
    if n < 2:
        raise ValueError("the example needs complex dimension at least 2")
    m = n - 1
    return build_almost_abelian(
        AlmostAbelianParams(n, 1.0, np.zeros(m, dtype=complex), np.eye(m, dtype=complex))
    )


# -- J-invariant abelian ideal of codimension 2 --------------------------------


@dataclass(frozen=True)
class Codim2Params:
    n: int
    lam: float
    v: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        m = self.n - 1
        if self.n < 1:
            raise ValueError("complex dimension must be at least 1")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "v", _vec(self.v, m, "v"))
        for name in ("X", "Y", "Z"):
            object.__setattr__(self, name, _mat(getattr(self, name), m, name))

    def scale(self) -> float:
        return 1.0 + max_abs(self.X) + max_abs(self.Y) + max_abs(self.Z)


def codim2_constraint_residuals(p: Codim2Params) -> tuple[float, float]:
    Xh = adjoint(p.X)
    r1 = p.lam * (Xh + p.Y) + commutator(Xh, p.Y) - p.Z @ p.Z.conj()
    r2 = p.lam * p.Z - (p.Z @ p.X.T + p.Y @ p.Z)
    return max_abs(r1), max_abs(r2)


def build_codim2(p: Codim2Params, tol: float = DEFAULT_TOL) -> HermitianLieAlgebra:
    res = codim2_constraint_residuals(p)
    eff = CONSTRAINT_TOL * p.scale()
    if max(res) > eff:
        raise ConstraintError(res, eff)
    n = p.n
    C = np.zeros((n, n, n), dtype=complex)
    D = np.zeros((n, n, n), dtype=complex)
    D[0, 0, 0] = p.lam
    for i in range(1, n):
        D[0, i, 0] = p.v[i - 1]
        for j in range(1, n):
            C[j, 0, i] = p.X[i - 1, j - 1]
            C[j, i, 0] = -p.X[i - 1, j - 1]
            D[j, i, 0] = p.Y[i - 1, j - 1]
            D[0, i, j] = p.Z[i - 1, j - 1]
    return HermitianLieAlgebra(n, C, D, tol=tol)


def codim2_params_from_algebra(alg: HermitianLieAlgebra) -> Codim2Params:
    """Read (lambda, v, X, Y, Z) off the structure constants of an adapted frame."""
    n = alg.n
    lam = alg.D[0, 0, 0]
    if abs(lam.imag) > alg.tol * alg.scale():
        raise FrameError("frame is not adapted: D[0,0,0] is not real")
    return Codim2Params(
        n,
        lam.real,
        alg.D[0, 1:, 0],
        alg.C[1:, 0, 1:].T,
        np.array([[alg.D[j, i, 0] for j in range(1, n)] for i in range(1, n)]),
        alg.D[0, 1:, 1:],
    )


def codim2_classify(p: Codim2Params, tol: float = DEFAULT_TOL) -> FamilyClassification:
    scale = 1.0 + abs(p.lam) + max_abs(p.v) + p.scale()
    eff = tol * scale
    unimodular = abs(p.lam + np.trace(p.Y - p.X)) <= eff
    kahler = (
        max_abs(p.v) <= eff
        and max_abs(p.Z - p.Z.T) <= eff
        and max_abs(p.X - p.Y) <= eff
    )
    chern_flat = (
        abs(p.lam) <= eff
        and max_abs(p.v) <= eff
        and max_abs(p.Z) <= eff
        and max_abs(commutator(p.Y, adjoint(p.Y))) <= eff * scale
        and max_abs(commutator(p.Y, adjoint(p.X))) <= eff * scale
    )
    return FamilyClassification(unimodular, kahler, chern_flat)


def is_symmetric_part_diagonal(p: Codim2Params, tol: float = DEFAULT_TOL) -> bool:
    """Whether Z^T + Z is diagonal with real nonnegative entries."""
    S = p.Z.T + p.Z
    eff = tol * p.scale()
    off = S - np.diag(np.diagonal(S))
    d = np.diagonal(S)
    return max_abs(off) <= eff and max_abs(d.imag) <= eff and float(d.real.min(initial=0.0)) >= -eff


def codim2_closed_forms(p: Codim2Params, tol: float = DEFAULT_TOL) -> dict:
    """Closed-form torsion and curvature values of a codimension-2 instance.

    The ``Rrhat_iikk`` entry is only valid in a frame where Z^T + Z is
    diagonal (see :func:`admissible_normalize`); a FrameError is raised
    otherwise.  Keys mirror generic-engine components the same way as in
    :func:`aa_closed_forms`, with ``torsion_Z[i-1,j-1]`` = T[0,i,j].
    """
    if not is_symmetric_part_diagonal(p, tol):
        raise FrameError(
            "closed forms for the symmetrized Levi-Civita diagonal require "
            "Z^T + Z diagonal with nonnegative entries; normalize the frame first"
        )
    lam, v, X, Y, Z = p.lam, p.v, p.X, p.Y, p.Z
    B = Y - X
    Yh = adjoint(Y)
    Zc = Z.conj()
    v2 = float(np.vdot(v, v).real)
    m = p.n - 1

    sym = Z + Z.T
    rhat_iikk = 0.25 * np.abs(sym) ** 2
    np.fill_diagonal(rhat_iikk, np.abs(np.diagonal(Z)) ** 2)

    bb = np.abs(B) ** 2
    rrhat_iikk = -0.125 * (
        bb + bb.T + 2.0 * np.real(np.outer(np.diagonal(B), np.diagonal(B).conj()))
    )
    rr_iiii = np.abs(np.diagonal(Z)) ** 2 - 0.5 * np.abs(np.diagonal(B)) ** 2
    np.fill_diagonal(rrhat_iikk, rr_iiii)

    rhat_11ij = 0.25 * (
        np.outer(v, v.conj())
        + commutator(Y, Yh)
        - lam * (Y + Yh)
        - Z @ Zc
        - Z.T @ adjoint(Z)
        - Z.T @ Zc
    )
    tr_zzbar = complex(np.trace(Z @ Zc))
    sum_rhat_11ii = 0.25 * (
        v2 - lam * 2.0 * np.trace(Y).real - 2.0 * tr_zzbar.real - float(np.sum(np.abs(Z) ** 2))
    )
    return {
        "torsion_1": v.copy(),
        "torsion_Z": Z.T - Z,
        "torsion_block": Y - X,
        "R_1111": -2.0 * lam**2 - v2,
        "R_iiii": np.abs(np.diagonal(Z)) ** 2,
        "Rhat_iikk": rhat_iikk,
        "Rhat_11ij": rhat_11ij,
        "sum_Rhat_11ii": sum_rhat_11ii,
        "Rr_1111": -2.0 * lam**2 - 1.5 * v2,
        "Rr_iiii": rr_iiii,
        "Rrhat_iikk": rrhat_iikk,
        "sum_Rrhat_11ii": sum_rhat_11ii
        - 0.125 * (v2 + float(np.sum(bb)) + float(np.sum(np.abs(Z.T - Z) ** 2))),
        "trace_identity_residual": abs(tr_zzbar - lam * np.trace(adjoint(X) + Y)),
    }


def trace_identity_residual(p: Codim2Params) -> float:
    """|tr(Z conj(Z)) - lambda tr(X* + Y)|, a consequence of the constraints."""
    return float(abs(np.trace(p.Z @ p.Z.conj()) - p.lam * np.trace(adjoint(p.X) + p.Y)))


def admissible_normalize(p: Codim2Params, tol: float = DEFAULT_TOL) -> Codim2Params:
    """Equivalent parameters with Z^T + Z diagonal nonnegative and lambda >= 0.

    Applies the Takagi factorization of Z^T + Z as a unitary change of
    e_2..e_n and, when lambda < 0, a sign flip of e_1; the parameters are
    re-read from the transformed structure constants, so every curvature
    invariant is preserved by construction.
    """
    from .linalg import takagi

    alg = build_codim2(p, tol=tol)
    u_block, _ = takagi(p.Z.T + p.Z, tol=tol)
    U = np.zeros((p.n, p.n), dtype=complex)
    phase = -1.0 if p.lam < -tol else 1.0
    U[0, 0] = phase
    U[1:, 1:] = u_block
    q = codim2_params_from_algebra(alg.change_frame(U, tol=tol))
    # scrub roundoff so the normalized instance is exactly in convention
    S = q.Z.T + q.Z
    Z = q.Z - (S - np.diag(np.real(np.diagonal(S)))) / 2.0
    return Codim2Params(q.n, max(q.lam, 0.0) if abs(q.lam) <= tol else q.lam, q.v, q.X, q.Y, Z)


def sample_codim2(
    n: int, scheme: str, rng: np.random.Generator, unimodular: bool = False
) -> Codim2Params:
    """Seeded random solutions of the parameter constraints.

    Scheme A: lambda = 0, Z = 0, X and Y simultaneously diagonalized by a
    random unitary (so [X*, Y] = 0).  Scheme B: X, Y, Z all diagonal with
    real x_i, y_i = lambda - x_i and |z_i| = lambda with random phases.
    """
    if n < 2:
        raise ValueError("sampling needs complex dimension at least 2")
    m = n - 1
    v = random_complex(rng, (m,))
    if scheme == "A":
        q = random_unitary(m, rng)
        x = random_complex(rng, (m,))
        y = random_complex(rng, (m,))
        if unimodular:
            y = y - np.mean(y - x)
        X = q @ np.diag(x) @ adjoint(q)
        Y = q @ np.diag(y) @ adjoint(q)
        return Codim2Params(n, 0.0, v, X, Y, np.zeros((m, m), dtype=complex))
    if scheme == "B":
        lam = float(np.abs(rng.standard_normal()) + 0.1)
        x = rng.standard_normal(m)
        if unimodular:
            x = x + (n * lam / 2.0 - x.sum()) / m
        y = lam - x
        z = lam * np.exp(2j * np.pi * rng.random(m))
        return Codim2Params(
            n, lam, v, np.diag(x).astype(complex), np.diag(y).astype(complex), np.diag(z)
        )
    raise ValueError(f"unknown sampling scheme {scheme!r}; use 'A' or 'B'")


# -- cross-checks used by callers ----------------------------------------------


def chern_symmetrized(alg: HermitianLieAlgebra):
    return symmetrize(chern_curvature(alg))
