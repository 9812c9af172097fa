"""Chern and Levi-Civita curvature of a Hermitian Lie algebra.

Conventions.  Curvature components are always taken in the sign convention

    Rm(a, b, c, d) = < (grad_a grad_b - grad_b grad_a - grad_[a,b]) c, d >

with the bilinear pairing, so constant positive sectional curvature gives
Rm(x, y, y, x) > 0.  Mixed-type components are stored as rank-4 arrays
indexed ``[i, j, k, l]`` meaning the slots (e_i, conj(e_j), e_k, conj(e_l)).

The Chern connection of a left-invariant structure has constant
coefficients read off the structure constants:

    grad_{e_k} e_i       = sum_j D[j, i, k] e_j
    grad_{conj(e_k)} e_i = -sum_j conj(D[i, j, k]) e_j

which makes its torsion and curvature quadratic expressions in C and D.
The Levi-Civita curvature is computed twice: once from the Chern data via
torsion corrections, and once through the Koszul formula on a real
orthonormal basis, which serves as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SQRT2, HermitianLieAlgebra
from .linalg import DEFAULT_TOL, max_abs


# -- Chern connection, torsion, curvature -------------------------------------


def chern_connection(alg: HermitianLieAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """Connection coefficients (gamma, gamma_bar).

    ``gamma[j, i, k]`` is the e_j-component of grad_{e_k} e_i and equals
    D[j, i, k]; ``gamma_bar[j, i, k]``, the e_j-component of
    grad_{conj(e_k)} e_i, equals -conj(D[i, j, k]).
    """
    gamma = alg.D.copy()
    gamma_bar = -np.einsum("ijk->jik", alg.D.conj())
    return gamma, gamma_bar


@dataclass(frozen=True)
class TorsionTensor:
    """Chern torsion T[j, i, k] with covariant derivatives.

    ``Td[j, i, k, l]`` differentiates along e_l, ``Tdbar[j, i, k, l]`` along
    conj(e_l).
    """

    T: np.ndarray
    Td: np.ndarray
    Tdbar: np.ndarray

    def max_abs(self) -> float:
        return max_abs(self.T)


def chern_torsion(alg: HermitianLieAlgebra) -> TorsionTensor:
    C, D = alg.C, alg.D
    Dc = D.conj()
    T = -C - D + np.swapaxes(D, 1, 2)
    Td = (
        -np.einsum("jsk,sil->jikl", T, D)
        - np.einsum("jis,skl->jikl", T, D)
        + np.einsum("sik,jsl->jikl", T, D)
    )
    Tdbar = (
        np.einsum("jsk,isl->jikl", T, Dc)
        + np.einsum("jis,ksl->jikl", T, Dc)
        - np.einsum("sik,sjl->jikl", T, Dc)
    )
    return TorsionTensor(T, Td, Tdbar)


@dataclass(frozen=True)
class Curv4:
    """Rank-4 curvature block R[i, j, k, l] for slots (e_i, conj(e_j), e_k, conj(e_l))."""

    R: np.ndarray
    kind: str  # chern | chern-symmetrized | lc | lc-symmetrized

    def max_abs(self) -> float:
        return max_abs(self.R)

    def hermitian_residual(self) -> float:
        """Deviation from R[i,j,k,l] = conj(R[j,i,l,k])."""
        return max_abs(self.R - self.R.conj().transpose(1, 0, 3, 2))

    def pair_symmetry_residual(self) -> float:
        """Deviation from invariance under i<->k and j<->l (symmetrized kinds)."""
        r = max_abs(self.R - self.R.transpose(2, 1, 0, 3))
        return max(r, max_abs(self.R - self.R.transpose(0, 3, 2, 1)))


def chern_curvature(alg: HermitianLieAlgebra) -> Curv4:
    """All mixed components of the Chern curvature, quadratic in D."""
    D = alg.D
    Dc = D.conj()
    R = (
        np.einsum("ski,slj->ijkl", D, Dc)
        - np.einsum("lsi,ksj->ijkl", D, Dc)
        - np.einsum("jsi,kls->ijkl", D, Dc)
        - np.einsum("isj,lks->ijkl", Dc, D)
    )
    return Curv4(R, "chern")


def symmetrize(curv: Curv4) -> Curv4:
    """Average over i<->k and j<->l; the part of curvature H determines."""
    R = curv.R
    Rhat = (
        R + R.transpose(2, 1, 0, 3) + R.transpose(0, 3, 2, 1) + R.transpose(2, 3, 0, 1)
    ) / 4.0
    kind = curv.kind if curv.kind.endswith("-symmetrized") else curv.kind + "-symmetrized"
    return Curv4(Rhat, kind)


# -- Levi-Civita curvature from Chern data ------------------------------------


@dataclass(frozen=True)
class LCBlocks:
    """The three component families of the Levi-Civita curvature.

    ``mixed[i, j, k, l]``     slots (e_i, conj(e_j), e_k, conj(e_l))
    ``three_one[i, j, k, l]`` slots (e_i, e_j, e_k, conj(e_l))
    ``two_two[i, k, j, l]``   slots (e_i, e_k, conj(e_j), conj(e_l))
    """

    mixed: np.ndarray
    three_one: np.ndarray
    two_two: np.ndarray


def levi_civita_from_chern(alg: HermitianLieAlgebra) -> LCBlocks:
    """Levi-Civita curvature blocks via torsion corrections to the Chern data."""
    tor = chern_torsion(alg)
    T, Td, Tdbar = tor.T, tor.Td, tor.Tdbar
    Tc = T.conj()
    R = chern_curvature(alg).R

    mixed = (
        R
        + 0.5 * (np.einsum("likj->ijkl", Tdbar) + np.einsum("kjli->ijkl", Tdbar).conj())
        + 0.25
        * (
            np.einsum("sik,sjl->ijkl", T, Tc)
            - np.einsum("lis,kjs->ijkl", T, Tc)
            - np.einsum("jks,ils->ijkl", T, Tc)
        )
    )
    three_one = 0.5 * np.einsum("lijk->ijkl", Td) + 0.25 * (
        np.einsum("sjk,lsi->ijkl", T, T) - np.einsum("sik,lsj->ijkl", T, T)
    )
    two_two = 0.5 * (
        np.einsum("likj->ikjl", Tdbar) - np.einsum("jikl->ikjl", Tdbar)
    ) + 0.25 * (
        2.0 * np.einsum("sik,sjl->ikjl", T, Tc)
        + np.einsum("jis,kls->ikjl", T, Tc)
        + np.einsum("lks,ijs->ikjl", T, Tc)
        - np.einsum("lis,kjs->ikjl", T, Tc)
        - np.einsum("jks,ils->ikjl", T, Tc)
    )
    return LCBlocks(mixed=mixed, three_one=three_one, two_two=two_two)


def lc_symmetrized_correction(tor: TorsionTensor) -> np.ndarray:
    """Quadratic torsion term relating the two symmetrized curvatures.

    The symmetrized Levi-Civita block equals the symmetrized Chern block
    minus this tensor.
    """
    T, Tc = tor.T, tor.T.conj()
    return 0.125 * (
        np.einsum("jis,kls->ijkl", T, Tc)
        + np.einsum("lks,ijs->ijkl", T, Tc)
        + np.einsum("lis,kjs->ijkl", T, Tc)
        + np.einsum("jks,ils->ijkl", T, Tc)
    )


# -- Levi-Civita curvature via the Koszul formula (independent oracle) --------


def real_structure_constants(alg: HermitianLieAlgebra) -> np.ndarray:
    """Real structure constants f[c, a, b] on the orthonormal basis
    x_{2i} = (e_i + conj(e_i))/sqrt(2), x_{2i+1} = i (e_i - conj(e_i))/sqrt(2).
    """
    n = alg.n
    m = 2 * n
    X = np.zeros((m, m), dtype=complex)  # columns: coefficients over (e, conj(e))
    for a in range(n):
        X[a, 2 * a] = 1.0 / SQRT2
        X[n + a, 2 * a] = 1.0 / SQRT2
        X[a, 2 * a + 1] = 1j / SQRT2
        X[n + a, 2 * a + 1] = -1j / SQRT2
    brackets = np.zeros((m, m, m), dtype=complex)  # [., a, b] = bracket(x_a, x_b)
    for a in range(m):
        for b in range(a + 1, m):
            v = alg.bracket(X[:, a], X[:, b])
            brackets[:, a, b] = v
            brackets[:, b, a] = -v
    # pairing with x_c: <u, w> = sum(u_plus * w_minus + u_minus * w_plus)
    pair = np.concatenate([X[n:], X[:n]], axis=0)
    f = np.einsum("uab,uc->cab", brackets, pair)
    imag = max_abs(f.imag)
    if imag > alg.tol * alg.scale():
        raise ValueError(f"real structure constants have imaginary residue {imag:.3e}")
    return f.real


def riemann_from_real_constants(f: np.ndarray) -> np.ndarray:
    """Riemann tensor of the left-invariant metric making the basis orthonormal.

    Uses the Koszul formula 2<grad_a b, c> = <[a,b],c> - <[b,c],a> + <[c,a],b>
    and returns Rm[a, b, c, d] in the sign convention of this module.
    """
    gamma = 0.5 * (f - np.einsum("abc->cab", f) + np.einsum("abc->bca", f))
    # gamma[c, a, b]: x_c-component of grad_{x_a} x_b
    return (
        np.einsum("ebc,dae->abcd", gamma, gamma)
        - np.einsum("eac,dbe->abcd", gamma, gamma)
        - np.einsum("eab,dec->abcd", f, gamma)
    )


@dataclass(frozen=True)
class RealCurv:
    """Full real Levi-Civita curvature Rm[a, b, c, d] on the orthonormal 2n-basis."""

    Rm: np.ndarray

    def max_abs(self) -> float:
        return max_abs(self.Rm)

    def symmetry_residuals(self) -> dict[str, float]:
        Rm = self.Rm
        return {
            "antisym_first_pair": max_abs(Rm + Rm.transpose(1, 0, 2, 3)),
            "antisym_second_pair": max_abs(Rm + Rm.transpose(0, 1, 3, 2)),
            "pair_exchange": max_abs(Rm - Rm.transpose(2, 3, 0, 1)),
            "first_bianchi": max_abs(
                Rm + Rm.transpose(1, 2, 0, 3) + Rm.transpose(2, 0, 1, 3)
            ),
        }

    def _frame(self) -> np.ndarray:
        m = self.Rm.shape[0]
        n = m // 2
        P = np.zeros((n, m), dtype=complex)
        for i in range(n):
            P[i, 2 * i] = 1.0 / SQRT2
            P[i, 2 * i + 1] = -1j / SQRT2
        return P

    def mixed_block(self) -> Curv4:
        """Components on slots (e_i, conj(e_j), e_k, conj(e_l))."""
        P = self._frame()
        R = np.einsum("ia,jb,kc,ld,abcd->ijkl", P, P.conj(), P, P.conj(), self.Rm)
        return Curv4(R, "lc")

    def three_one_block(self) -> np.ndarray:
        """Components on slots (e_i, e_j, e_k, conj(e_l)), indexed [i, j, k, l]."""
        P = self._frame()
        return np.einsum("ia,jb,kc,ld,abcd->ijkl", P, P, P, P.conj(), self.Rm)

    def two_two_block(self) -> np.ndarray:
        """Components on slots (e_i, e_k, conj(e_j), conj(e_l)), indexed [i, k, j, l]."""
        P = self._frame()
        return np.einsum("ia,kb,jc,ld,abcd->ikjl", P, P, P.conj(), P.conj(), self.Rm)


def levi_civita_koszul(alg: HermitianLieAlgebra) -> RealCurv:
    return RealCurv(riemann_from_real_constants(real_structure_constants(alg)))


# -- holomorphic sectional curvature ------------------------------------------


def hol_sect(curv: Curv4 | np.ndarray, X: np.ndarray) -> float:
    """Holomorphic sectional curvature R(X, conj X, X, conj X) / |X|^4."""
    R = curv.R if isinstance(curv, Curv4) else curv
    X = np.asarray(X, dtype=complex)
    norm2 = float(np.vdot(X, X).real)
    if norm2 <= 0.0:
        raise ValueError("holomorphic sectional curvature needs a nonzero vector")
    val = np.einsum("i,j,k,l,ijkl->", X, X.conj(), X, X.conj(), R)
    return float(val.real) / norm2**2


def probe_vectors(n: int) -> list[np.ndarray]:
    """Unit probes: e_i, (e_i +- e_k)/sqrt2, (e_i +- i e_k)/sqrt2."""
    eye = np.eye(n, dtype=complex)
    probes = [eye[i] for i in range(n)]
    for i in range(n):
        for k in range(i + 1, n):
            for c in (1.0, -1.0, 1j, -1j):
                probes.append((eye[i] + c * eye[k]) / SQRT2)
    return probes


@dataclass(frozen=True)
class HVerdict:
    """Outcome of the constant-curvature test on a rank-4 block."""

    constant: bool
    c: float
    max_violation: float
    tol: float
    witness: tuple | None = None
    # witness = (index_tuple, X1, X2, h1, h2) for a non-constant verdict


def constant_H_detect(curv: Curv4, tol: float = DEFAULT_TOL) -> HVerdict:
    """Tensorial test for constant holomorphic sectional curvature.

    H is the constant c if and only if the symmetrized block equals
    (c/2) (delta_ij delta_kl + delta_il delta_kj).  The probe vectors are
    used only to attach a human-readable witness pair when the test fails.
    """
    Rhat = symmetrize(curv).R
    n = Rhat.shape[0]
    eye = np.eye(n)
    c = float(np.mean(np.real(np.einsum("iiii->i", Rhat)))) if n else 0.0
    target = 0.5 * c * (np.einsum("ij,kl->ijkl", eye, eye) + np.einsum("il,kj->ijkl", eye, eye))
    dev = np.abs(Rhat - target)
    violation = float(dev.max()) if dev.size else 0.0
    eff_tol = tol * (1.0 + max_abs(Rhat))
    if violation <= eff_tol:
        return HVerdict(True, c, violation, eff_tol)
    idx = tuple(int(t) for t in np.unravel_index(int(np.argmax(dev)), dev.shape))
    probes = probe_vectors(n)
    values = [hol_sect(curv, X) for X in probes]
    lo, hi = int(np.argmin(values)), int(np.argmax(values))
    witness = (idx, probes[lo], probes[hi], values[lo], values[hi])
    return HVerdict(False, c, violation, eff_tol, witness)


# -- coarse predicates ---------------------------------------------------------


@dataclass(frozen=True)
class Predicates:
    is_kahler: bool
    is_chern_flat: bool
    is_lc_flat: bool
    torsion_max: float
    chern_max: float
    lc_real_max: float


def predicates(alg: HermitianLieAlgebra, tol: float | None = None) -> Predicates:
    """Kahler / Chern-flat / Levi-Civita-flat by tensor norms.

    Levi-Civita flatness is decided on the full real curvature tensor, not
    on its complexified blocks.
    """
    tol = alg.tol if tol is None else tol
    eff = tol * alg.scale() ** 2
    t = chern_torsion(alg).max_abs()
    r = chern_curvature(alg).max_abs()
    rm = levi_civita_koszul(alg).max_abs()
    return Predicates(
        is_kahler=t <= eff,
        is_chern_flat=r <= eff,
        is_lc_flat=rm <= eff,
        torsion_max=t,
        chern_max=r,
        lc_real_max=rm,
    )
