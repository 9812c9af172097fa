"""Lie algebras with left-invariant Hermitian structure.

A Hermitian Lie algebra of complex dimension n is stored through the
structure constants of a unitary (1,0)-frame e_1, ..., e_n:

    C[j, i, k] = <[e_i, e_k], conj(e_j)>      (the e_j-component of [e_i, e_k])
    D[j, i, k] = <[conj(e_j), e_k], e_i>

where <,> is the complex-bilinear extension of the metric, normalized so
that <e_i, conj(e_j)> = delta_ij.  Integrability of J is equivalent to
[e_i, e_j] having no (0,1)-part, so C and D determine all brackets:

    [e_i, e_j]       = sum_k C[k, i, j] e_k
    [e_i, conj(e_j)] = sum_k ( conj(D[i, k, j]) e_k - D[j, k, i] conj(e_k) )

Constructors validate antisymmetry of C (exactly, as stored) and the three
quadratic systems equivalent to the Jacobi identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameError, IntegrabilityError, JacobiError, StructureError
from .linalg import DEFAULT_TOL, is_unitary, max_abs

SQRT2 = np.sqrt(2.0)


def _as_tensor3(a, n: int, name: str) -> np.ndarray:
    t = np.asarray(a, dtype=complex)
    if t.shape != (n, n, n):
        raise StructureError(f"{name} must have shape ({n},{n},{n}), got {t.shape}")
    if not np.all(np.isfinite(t.view(float))):
        raise StructureError(f"{name} contains non-finite entries")
    return t


def jacobi_residual_tensors(C: np.ndarray, D: np.ndarray) -> tuple[float, float, float]:
    """Max-norm residuals of the three quadratic systems equivalent to Jacobi.

    System 1 couples C with itself (closure of the (1,0)-subalgebra), system 2
    couples C and D through holomorphic indices, system 3 through mixed ones.
    """
    Dc = D.conj()
    r1 = (
        np.einsum("sij,lsk->ijkl", C, C)
        + np.einsum("sjk,lsi->ijkl", C, C)
        + np.einsum("ski,lsj->ijkl", C, C)
    )
    r2 = (
        np.einsum("sik,ljs->ijkl", C, D)
        + np.einsum("sji,lsk->ijkl", D, D)
        - np.einsum("sjk,lsi->ijkl", D, D)
    )
    r3 = (
        np.einsum("sik,sjl->ijkl", C, Dc)
        - np.einsum("jsk,isl->ijkl", C, Dc)
        + np.einsum("jsi,ksl->ijkl", C, Dc)
        - np.einsum("lsi,kjs->ijkl", D, Dc)
        + np.einsum("lsk,ijs->ijkl", D, Dc)
    )
    return max_abs(r1), max_abs(r2), max_abs(r3)


@dataclass(frozen=True)
class HermitianLieAlgebra:
    """Immutable structure-constant data of a Hermitian Lie algebra."""

    n: int
    C: np.ndarray
    D: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        C = _as_tensor3(self.C, self.n, "C")
        D = _as_tensor3(self.D, self.n, "D")
        viol = np.abs(C + np.swapaxes(C, 1, 2))
        if viol.size and viol.max() > 0.0:
            j, i, k = np.unravel_index(int(np.argmax(viol)), viol.shape)
            raise StructureError(
                f"C is not antisymmetric in its lower indices at (j={j}, i={i}, k={k}): "
                f"C[j,i,k]={C[j, i, k]} vs -C[j,k,i]={-C[j, k, i]}"
            )
        res = jacobi_residual_tensors(C, D)
        jac_tol = self.tol * (1.0 + max_abs(C) + max_abs(D))
        if max(res) > jac_tol:
            raise JacobiError(res, jac_tol)
        C.setflags(write=False)
        D.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)

    # -- basic queries ------------------------------------------------------

    def jacobi_residual(self) -> tuple[float, float, float]:
        return jacobi_residual_tensors(self.C, self.D)

    def scale(self) -> float:
        return 1.0 + max_abs(self.C) + max_abs(self.D)

    def bracket(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Lie bracket of vectors given by 2n coefficients over (e_1..e_n, conj(e_1)..conj(e_n))."""
        n = self.n
        u = np.asarray(u, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if u.shape != (2 * n,) or w.shape != (2 * n,):
            raise ValueError(f"expected vectors of length {2 * n}")
        up, um = u[:n], u[n:]
        wp, wm = w[:n], w[n:]
        C, D = self.C, self.D
        Cc, Dc = C.conj(), D.conj()
        out_p = (
            np.einsum("i,j,kij->k", up, wp, C)
            + np.einsum("i,j,ikj->k", up, wm, Dc)
            - np.einsum("i,j,jki->k", um, wp, Dc)
        )
        out_m = (
            np.einsum("i,j,kij->k", um, wm, Cc)
            - np.einsum("i,j,jki->k", up, wm, D)
            + np.einsum("i,j,ikj->k", um, wp, D)
        )
        return np.concatenate([out_p, out_m])

    def ad_matrix(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ad_u on the complexified basis (columns are bracket(u, basis))."""
        n2 = 2 * self.n
        cols = [self.bracket(u, e) for e in np.eye(n2, dtype=complex)]
        return np.stack(cols, axis=1)

    def is_unimodular(self, tol: float | None = None) -> tuple[bool, float]:
        """Whether tr(ad_x) = 0 for all x, plus the largest |trace| over the basis."""
        tol = self.tol if tol is None else tol
        n2 = 2 * self.n
        worst = max(
            abs(np.trace(self.ad_matrix(e))) for e in np.eye(n2, dtype=complex)
        )
        return worst <= tol * self.scale(), float(worst)

    # -- frame changes ------------------------------------------------------

    def change_frame(self, U: np.ndarray, tol: float | None = None) -> "HermitianLieAlgebra":
        """Structure constants in the new unitary frame e'_a = sum_b U[a, b] e_b."""
        tol = self.tol if tol is None else tol
        U = np.asarray(U, dtype=complex)
        if U.shape != (self.n, self.n):
            raise FrameError(f"frame change must be {self.n}x{self.n}, got {U.shape}")
        if not is_unitary(U, tol):
            raise FrameError("frame change matrix is not unitary within tolerance")
        Uc = U.conj()
        C = np.einsum("jm,ip,kq,mpq->jik", Uc, U, U, self.C)
        D = np.einsum("jp,im,kq,pmq->jik", Uc, U, U, self.D)
        # enforce exact antisymmetry against summation-order noise
        C = (C - np.swapaxes(C, 1, 2)) / 2.0
        return HermitianLieAlgebra(self.n, C, D, tol=self.tol)


def new(n: int, C, D, tol: float = DEFAULT_TOL) -> HermitianLieAlgebra:
    """Validate and build an algebra from raw structure-constant tensors."""
    return HermitianLieAlgebra(int(n), np.array(C, dtype=complex), np.array(D, dtype=complex), tol=tol)


def abelian(n: int, tol: float = DEFAULT_TOL) -> HermitianLieAlgebra:
    z = np.zeros((n, n, n), dtype=complex)
    return HermitianLieAlgebra(n, z, z.copy(), tol=tol)


def conj_vector(u: np.ndarray) -> np.ndarray:
    """Coefficients of the conjugate of a complexified vector."""
    n = u.shape[0] // 2
    return np.concatenate([u[n:].conj(), u[:n].conj()])


# -- ingestion of real presentations -----------------------------------------


@dataclass(frozen=True)
class RealLieData:
    """A real Lie algebra with almost complex structure and compatible metric.

    ``f[c, a, b]`` is the x_c-component of [x_a, x_b] in the given basis,
    ``J`` the complex structure and ``G`` the inner product, both as real
    matrices in that same basis.
    """

    dim: int
    f: np.ndarray
    J: np.ndarray
    G: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = self.dim
        if m % 2 != 0:
            raise StructureError("real dimension must be even")
        f = np.asarray(self.f, dtype=float)
        J = np.asarray(self.J, dtype=float)
        G = np.asarray(self.G, dtype=float)
        if f.shape != (m, m, m):
            raise StructureError(f"f must have shape ({m},{m},{m}), got {f.shape}")
        if J.shape != (m, m) or G.shape != (m, m):
            raise StructureError("J and G must be square of the stated dimension")
        scale = 1.0 + max_abs(f)
        if max_abs(f + np.swapaxes(f, 1, 2)) > self.tol * scale:
            raise StructureError("real structure constants are not antisymmetric")
        if max_abs(J @ J + np.eye(m)) > self.tol * (1.0 + max_abs(J)) ** 2:
            raise StructureError("J^2 differs from -I")
        gs = 1.0 + max_abs(G)
        if max_abs(G - G.T) > self.tol * gs:
            raise StructureError("G is not symmetric")
        if np.linalg.eigvalsh((G + G.T) / 2.0).min() <= 0.0:
            raise StructureError("G is not positive definite")
        if max_abs(J.T @ G @ J - G) > self.tol * gs * (1.0 + max_abs(J)) ** 2:
            raise StructureError("J is not compatible with G")
        # store antisymmetrized constants so downstream brackets are exact
        f = (f - np.swapaxes(f, 1, 2)) / 2.0
        for a in (f, J, G):
            a.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "G", G)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("cab,a,b->c", self.f, x, y)

    def nijenhuis_residual(self) -> float:
        """Max-norm of [x,y] - [Jx,Jy] + J[Jx,y] + J[x,Jy] over basis pairs."""
        f, J = self.f, self.J
        t1 = f
        t2 = np.einsum("cab,ap,bq->cpq", f, J, J)
        t3 = np.einsum("dc,cab,ap->dpb", J, f, J)
        t4 = np.einsum("dc,cab,bq->daq", J, f, J)
        return max_abs(t1 - t2 + t3 + t4)


def _orthonormal_adapted_basis(data: RealLieData) -> np.ndarray:
    """Columns x_1, Jx_1, x_2, Jx_2, ... forming a G-orthonormal J-adapted basis."""
    m, G, J = data.dim, data.G, data.J
    basis = np.zeros((m, m))
    have = 0
    for cand in np.eye(m):
        if have == m:
            break
        x = cand.copy()
        span = basis[:, :have]
        if have:
            x = x - span @ (span.T @ (G @ x))
        norm2 = float(x @ G @ x)
        if norm2 < 1.0e-12:
            continue
        x = x / np.sqrt(norm2)
        basis[:, have] = x
        basis[:, have + 1] = J @ x
        have += 2
    if have != m:
        raise StructureError("failed to complete a J-adapted orthonormal basis")
    return basis


def from_real(data: RealLieData, tol: float | None = None) -> HermitianLieAlgebra:
    """Complexify a real presentation into unitary-frame structure constants.

    Builds a G-orthonormal basis x_1, Jx_1, ..., x_n, Jx_n, forms the unit
    (1,0)-vectors e_k = (x_k - i J x_k) / sqrt(2) and reads off C and D from
    brackets and the bilinear pairing.
    """
    tol = data.tol if tol is None else tol
    scale = 1.0 + max_abs(data.f)
    nres = data.nijenhuis_residual()
    if nres > tol * scale:
        raise IntegrabilityError(
            f"almost complex structure is not integrable (residual {nres:.3e})"
        )
    m = data.dim
    n = m // 2
    basis = _orthonormal_adapted_basis(data)
    e = (basis[:, 0::2] - 1j * basis[:, 1::2]) / SQRT2  # columns are e_1..e_n
    ebar = e.conj()
    G = data.G.astype(complex)

    # brackets of all frame pairs, as coefficient vectors in the original basis
    br = lambda a, b: np.einsum("cab,aI,bK->cIK", data.f.astype(complex), a, b)
    ee = br(e, e)        # [e_i, e_k]
    bare = br(ebar, e)   # [conj(e_j), e_k]

    C = np.einsum("cik,cj->jik", ee, G @ ebar)
    D = np.einsum("cjk,ci->jik", bare, G @ e)
    C = (C - np.swapaxes(C, 1, 2)) / 2.0
    return HermitianLieAlgebra(n, C, D, tol=tol)
