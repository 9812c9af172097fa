import numpy as np
import pytest

from curvlab import curvature, families
from curvlab.errors import ConstraintError, FrameError
from curvlab.families import (
    AlmostAbelianParams,
    Codim2Params,
    aa_classify,
    aa_closed_forms,
    admissible_normalize,
    build_almost_abelian,
    build_codim2,
    codim2_classify,
    codim2_closed_forms,
    codim2_constraint_residuals,
    constant_lc_curvature_example,
    is_symmetric_part_diagonal,
    sample_almost_abelian,
    sample_codim2,
    sample_unimodular_aa,
    trace_identity_residual,
)
from curvlab.linalg import max_abs, random_complex


def aa_closed_form_deviation(p, alg):
    cf = aa_closed_forms(p)
    n = p.n
    T = curvature.chern_torsion(alg).T
    R = curvature.chern_curvature(alg).R
    block = np.array([[T[j, 0, i] for j in range(1, n)] for i in range(1, n)])
    return max(
        max_abs(cf["torsion_1"] - T[0, 0, 1:]),
        max_abs(cf["torsion_block"] - block),
        abs(cf["R_1111"] - R[0, 0, 0, 0]),
        max_abs(cf["R_11i1"] - R[0, 0, 1:, 0]),
        max_abs(cf["R_11ij"] - R[0, 0, 1:, 1:]),
    )


def codim2_closed_form_deviation(q):
    alg = build_codim2(q)
    cf = codim2_closed_forms(q)
    n = q.n
    idx = range(1, n)
    T = curvature.chern_torsion(alg).T
    chern = curvature.chern_curvature(alg)
    R, Rhat = chern.R, curvature.symmetrize(chern).R
    lc = curvature.levi_civita_koszul(alg).mixed_block()
    Rr, Rrhat = lc.R, curvature.symmetrize(lc).R
    block = np.array([[T[j, 0, i] for j in range(1, n)] for i in range(1, n)])
    return max(
        max_abs(cf["torsion_1"] - T[0, 0, 1:]),
        max_abs(cf["torsion_Z"] - T[0, 1:, 1:]),
        max_abs(cf["torsion_block"] - block),
        abs(cf["R_1111"] - R[0, 0, 0, 0]),
        max_abs(cf["R_iiii"] - np.array([R[i, i, i, i] for i in idx])),
        max_abs(cf["Rhat_iikk"] - np.array([[Rhat[i, i, k, k] for k in idx] for i in idx])),
        max_abs(cf["Rhat_11ij"] - Rhat[0, 0, 1:, 1:]),
        abs(cf["sum_Rhat_11ii"] - sum(Rhat[0, 0, i, i].real for i in idx)),
        abs(cf["Rr_1111"] - Rr[0, 0, 0, 0]),
        max_abs(cf["Rr_iiii"] - np.array([Rr[i, i, i, i] for i in idx])),
        max_abs(cf["Rrhat_iikk"] - np.array([[Rrhat[i, i, k, k] for k in idx] for i in idx])),
        abs(cf["sum_Rrhat_11ii"] - sum(Rrhat[0, 0, i, i].real for i in idx)),
    )


def offdiag_z_instance(x: float = 0.3) -> Codim2Params:
    """A valid n=3 instance whose Z has non-diagonal symmetric part."""
    z = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return Codim2Params(
        3, 1.0, np.array([0.2, -0.1j]),
        x * np.eye(2, dtype=complex), (1.0 - x) * np.eye(2, dtype=complex), z,
    )


# -- almost abelian ---------------------------------------------------------------


def test_build_aa_zero_is_abelian():
    alg = build_almost_abelian(AlmostAbelianParams(3, 0.0, np.zeros(2), np.zeros((2, 2))))
    assert max_abs(alg.C) == 0.0 and max_abs(alg.D) == 0.0


def test_build_aa_example_constants():
    alg = constant_lc_curvature_example(2)
    assert alg.D[0, 0, 0] == 1.0
    assert alg.D[1, 1, 0] == 1.0
    assert alg.C[1, 0, 1] == -1.0


def test_build_aa_random_always_jacobi(rng):
    for _ in range(10):
        p = AlmostAbelianParams(
            4, float(rng.standard_normal()), random_complex(rng, (3,)),
            random_complex(rng, (3, 3)),
        )
        alg = build_almost_abelian(p)
        assert max(alg.jacobi_residual()) <= 1e-12 * alg.scale()


def test_aa_classify_kahler_case(rng):
    a = random_complex(rng, (2, 2))
    skew = (a - a.conj().T) / 2.0
    cls = aa_classify(AlmostAbelianParams(3, 0.0, np.zeros(2), skew))
    assert cls.kahler


def test_aa_classify_example_not_unimodular():
    for n in (2, 4):
        p = AlmostAbelianParams(n, 1.0, np.zeros(n - 1), np.eye(n - 1))
        assert not aa_classify(p).unimodular
        assert abs(p.lam + 2 * np.trace(p.A).real - (2 * n - 1)) < 1e-12


def test_aa_classify_chern_flat_nonkahler():
    a = np.diag([1.0 + 1.0j, 2.0 - 0.5j])
    cls = aa_classify(AlmostAbelianParams(3, 0.0, np.zeros(2), a))
    assert cls.chern_flat and not cls.kahler
    alg = build_almost_abelian(AlmostAbelianParams(3, 0.0, np.zeros(2), a))
    preds = curvature.predicates(alg)
    assert preds.is_chern_flat and not preds.is_kahler


def test_aa_classification_agrees_with_generic(rng):
    for trial in range(12):
        p = sample_almost_abelian(3, rng, unimodular=bool(trial % 2))
        alg = build_almost_abelian(p)
        cls = aa_classify(p)
        preds = curvature.predicates(alg)
        uni, _ = alg.is_unimodular()
        assert cls.unimodular == uni
        assert cls.kahler == preds.is_kahler
        assert cls.chern_flat == preds.is_chern_flat


def test_aa_closed_forms_agree(rng):
    for trial in range(25):
        n = 2 + trial % 3
        p = sample_almost_abelian(n, rng, unimodular=bool(trial % 2))
        dev = aa_closed_form_deviation(p, build_almost_abelian(p))
        assert dev <= 1e-10 * (1.0 + max_abs(p.A) + max_abs(p.v)) ** 2


def test_aa_closed_forms_specific_values(rng):
    p = AlmostAbelianParams(3, 1.0, np.zeros(2), np.eye(2))
    cf = aa_closed_forms(p)
    assert cf["R_1111"] == -2.0
    v = random_complex(rng, (2,))
    a = random_complex(rng, (2, 2))
    p2 = AlmostAbelianParams(3, 0.5, v, a)
    assert max_abs(aa_closed_forms(p2)["R_11i1"] + a.conj().T @ v) < 1e-14
    p0 = AlmostAbelianParams(3, 0.0, np.zeros(2), np.zeros((2, 2)))
    cf0 = aa_closed_forms(p0)
    assert cf0["R_1111"] == 0.0 and max_abs(cf0["R_11ij"]) == 0.0


# -- samplers ----------------------------------------------------------------------


def test_sample_unimodular_aa_properties(rng):
    for n in (2, 3, 4):
        for _ in range(20):
            p = sample_unimodular_aa(n, rng)
            assert abs(p.lam + 2 * np.trace(p.A).real) < 1e-12
            alg = build_almost_abelian(p)
            assert max(alg.jacobi_residual()) <= 1e-10 * alg.scale()


def test_sample_codim2_scheme_a(rng):
    p = sample_codim2(3, "A", rng)
    assert codim2_constraint_residuals(p) <= (1e-13, 1e-13)
    assert p.lam == 0.0 and max_abs(p.Z) == 0.0


def test_sample_codim2_scheme_b(rng):
    p = sample_codim2(3, "B", rng)
    r1, r2 = codim2_constraint_residuals(p)
    assert max(r1, r2) < 1e-12
    assert np.allclose(np.abs(np.diagonal(p.Z)), p.lam)


def test_scheme_b_fixed_lambda_two():
    lam = 2.0
    x = np.array([1.0, -0.5])
    p = Codim2Params(
        3, lam, np.zeros(2), np.diag(x).astype(complex),
        np.diag(lam - x).astype(complex), np.diag([lam, lam * 1j]),
    )
    assert max(codim2_constraint_residuals(p)) < 1e-12
    build_codim2(p)


def test_scheme_b_lambda_zero_degenerate():
    x = np.array([0.7, -1.2])
    p = Codim2Params(
        3, 0.0, np.zeros(2), np.diag(x).astype(complex),
        np.diag(-x).astype(complex), np.zeros((2, 2), dtype=complex),
    )
    assert max(codim2_constraint_residuals(p)) == 0.0
    build_codim2(p)


def test_sample_codim2_unimodular(rng):
    for scheme in ("A", "B"):
        for _ in range(10):
            p = sample_codim2(3, scheme, rng, unimodular=True)
            assert codim2_classify(p).unimodular
            uni, _ = build_codim2(p).is_unimodular()
            assert uni


def test_sample_codim2_invalid_scheme(rng):
    with pytest.raises(ValueError, match="scheme"):
        sample_codim2(3, "C", rng)


# -- codim2 construction and classification -------------------------------------------


def test_build_codim2_zero_is_abelian():
    z = np.zeros((2, 2), dtype=complex)
    alg = build_codim2(Codim2Params(3, 0.0, np.zeros(2), z, z, z))
    assert max_abs(alg.C) == 0.0 and max_abs(alg.D) == 0.0


def test_build_codim2_rejects_unconstrained(rng):
    p = Codim2Params(
        3, 1.0, random_complex(rng, (2,)), random_complex(rng, (2, 2)),
        random_complex(rng, (2, 2)), random_complex(rng, (2, 2)),
    )
    with pytest.raises(ConstraintError) as exc:
        build_codim2(p)
    assert max(exc.value.residuals) > 0.01


def test_codim2_lambda_one_rest_zero_is_valid():
    z = np.zeros((2, 2), dtype=complex)
    p = Codim2Params(3, 1.0, np.zeros(2), z, z, z)
    assert max(codim2_constraint_residuals(p)) == 0.0
    build_codim2(p)
    assert not codim2_classify(p).unimodular


def test_codim2_classify_kahler(rng):
    # X = Y commuting normal pair, Z symmetric consistent with the constraints
    q = np.linalg.qr(random_complex(rng, (2, 2)))[0]
    x = q @ np.diag(random_complex(rng, (2,))) @ q.conj().T
    p = Codim2Params(3, 0.0, np.zeros(2), x, x.copy(), np.zeros((2, 2), dtype=complex))
    assert codim2_classify(p).kahler
    preds = curvature.predicates(build_codim2(p))
    assert preds.is_kahler


def test_codim2_classify_chern_flat():
    d = np.diag([1.0 + 2j, -0.5]).astype(complex)
    p = Codim2Params(3, 0.0, np.zeros(2), d, d.copy(), np.zeros((2, 2), dtype=complex))
    cls = codim2_classify(p)
    assert cls.chern_flat
    preds = curvature.predicates(build_codim2(p))
    assert preds.is_chern_flat


def test_codim2_classification_agrees_with_generic(rng):
    for trial in range(12):
        p = sample_codim2(3, "AB"[trial % 2], rng, unimodular=bool(trial % 3 == 0))
        cls = codim2_classify(p)
        alg = build_codim2(p)
        preds = curvature.predicates(alg)
        uni, _ = alg.is_unimodular()
        assert cls.unimodular == uni
        assert cls.kahler == preds.is_kahler
        assert cls.chern_flat == preds.is_chern_flat


# -- codim2 closed forms ----------------------------------------------------------------


def test_codim2_closed_forms_zero():
    z = np.zeros((2, 2), dtype=complex)
    cf = codim2_closed_forms(Codim2Params(3, 0.0, np.zeros(2), z, z, z))
    assert cf["R_1111"] == 0.0
    assert max_abs(cf["Rhat_11ij"]) == 0.0
    assert cf["trace_identity_residual"] == 0.0


def test_codim2_closed_forms_agree(rng):
    for trial in range(20):
        n = 2 + trial % 3
        p = sample_codim2(n, "AB"[trial % 2], rng, unimodular=bool(trial % 3 == 0))
        q = admissible_normalize(p)
        dev = codim2_closed_form_deviation(q)
        assert dev <= 1e-9 * q.scale() ** 2


def test_codim2_closed_forms_require_normalized_frame():
    p = offdiag_z_instance()
    assert not is_symmetric_part_diagonal(p)
    with pytest.raises(FrameError, match="normalize"):
        codim2_closed_forms(p)
    codim2_closed_forms(admissible_normalize(p))


def test_scheme_b_diagonal_curvature(rng):
    p = admissible_normalize(sample_codim2(3, "B", rng))
    alg = build_codim2(p)
    R = curvature.chern_curvature(alg).R
    for i in (1, 2):
        assert abs(R[i, i, i, i] - abs(p.Z[i - 1, i - 1]) ** 2) < 1e-10


def test_trace_identity_on_valid_instances(rng):
    for trial in range(30):
        p = sample_codim2(2 + trial % 3, "AB"[trial % 2], rng)
        assert trace_identity_residual(p) <= 1e-10 * p.scale() ** 2


def test_transpose_norm_identities(rng):
    # |Z^T - Z|^2 = 2|Z|^2 - 2 tr(Z conj(Z)) and the + version, for random Z
    for _ in range(100):
        m = int(rng.integers(1, 6))
        z = random_complex(rng, (m, m))
        z2 = float(np.sum(np.abs(z) ** 2))
        tr = float(np.trace(z @ z.conj()).real)
        minus = float(np.sum(np.abs(z.T - z) ** 2))
        plus = float(np.sum(np.abs(z.T + z) ** 2))
        assert abs(minus - (2 * z2 - 2 * tr)) < 1e-10 * (1 + z2)
        assert abs(plus - (2 * z2 + 2 * tr)) < 1e-10 * (1 + z2)


# -- admissible normalization -------------------------------------------------------------


def test_normalize_identity_on_normalized(rng):
    p = admissible_normalize(sample_codim2(3, "B", rng))
    q = admissible_normalize(p)
    assert max_abs(q.Z - p.Z) < 1e-9
    assert abs(q.lam - p.lam) < 1e-12


def test_normalize_offdiagonal_z():
    p = offdiag_z_instance()
    q = admissible_normalize(p)
    s = q.Z.T + q.Z
    assert max_abs(s - np.diag(np.diagonal(s))) < 1e-10
    assert np.all(np.diagonal(s).real >= -1e-12)
    # symmetric part of [[0,1],[1,0]] has singular values (2, 2)
    assert np.allclose(sorted(np.diagonal(s).real), [2.0, 2.0])


def test_normalize_flips_negative_lambda():
    z = np.zeros((2, 2), dtype=complex)
    p = Codim2Params(3, -1.5, np.array([0.3, 0.1j]), z, z, z)
    q = admissible_normalize(p)
    assert q.lam == 1.5
    assert max(codim2_constraint_residuals(q)) < 1e-12


def test_normalize_preserves_curvature_verdicts(rng):
    for trial in range(6):
        p = sample_codim2(3, "AB"[trial % 2], rng)
        q = admissible_normalize(p)
        a0, a1 = build_codim2(p), build_codim2(q)
        for block0, block1 in (
            (curvature.chern_curvature(a0), curvature.chern_curvature(a1)),
            (
                curvature.levi_civita_koszul(a0).mixed_block(),
                curvature.levi_civita_koszul(a1).mixed_block(),
            ),
        ):
            v0 = curvature.constant_H_detect(block0)
            v1 = curvature.constant_H_detect(block1)
            assert v0.constant == v1.constant
            assert abs(v0.c - v1.c) < 1e-9


# -- the example --------------------------------------------------------------------------


def test_example_full_classification():
    alg = constant_lc_curvature_example(2)
    verdict = curvature.constant_H_detect(curvature.levi_civita_koszul(alg).mixed_block())
    assert verdict.constant and abs(verdict.c + 2.0) < 1e-12
    preds = curvature.predicates(alg)
    assert not preds.is_kahler
    assert curvature.chern_torsion(alg).T[1, 0, 1] == 2.0


def test_example_dimension_independent(rng):
    for n in (2, 4):
        alg = constant_lc_curvature_example(n)
        mixed = curvature.levi_civita_koszul(alg).mixed_block()
        for _ in range(20):
            x = random_complex(rng, (n,))
            assert abs(curvature.hol_sect(mixed, x) + 2.0) < 1e-9


def test_example_rejects_small_dimension():
    with pytest.raises(ValueError):
        constant_lc_curvature_example(1)


def test_constant_zero_lc_implies_kahler_flat(rng):
    # the only sampled instances with constant LC curvature 0 are Kahler flat
    hits = 0
    for trial in range(20):
        if trial % 2:
            p = sample_almost_abelian(3, rng, unimodular=True)
            alg = build_almost_abelian(p)
        else:
            p = sample_codim2(3, "AB"[trial % 3 == 0], rng, unimodular=True)
            alg = build_codim2(p)
        verdict = curvature.constant_H_detect(
            curvature.levi_civita_koszul(alg).mixed_block()
        )
        if verdict.constant:
            hits += 1
            preds = curvature.predicates(alg)
            assert abs(verdict.c) < 1e-9
            assert preds.is_kahler and preds.is_lc_flat
    # generic samples are never constant; the loop mostly guards the implication
    a = random_complex(rng, (2, 2))
    skew = (a - a.conj().T) / 2.0
    alg = build_almost_abelian(AlmostAbelianParams(3, 0.0, np.zeros(2), skew))
    verdict = curvature.constant_H_detect(
        curvature.levi_civita_koszul(alg).mixed_block()
    )
    assert verdict.constant and abs(verdict.c) < 1e-12
    preds = curvature.predicates(alg)
    assert preds.is_kahler and preds.is_lc_flat
