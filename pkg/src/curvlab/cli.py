"""Command-line front end.

Subcommands: ``validate``, ``report`` (alias ``classify``), ``fuzz``,
``example``.  Exit codes: 0 success, 1 validation or property failure,
2 parse or usage error.  The default tolerance is 1e-9, overridable by the
``CURVLAB_TOL`` environment variable and the ``--tol`` flag.

Fuzz campaigns are deterministic: sample i draws from a generator seeded by
``SeedSequence(entropy=seed, spawn_key=(i,))``, so any reported instance can
be replayed from the seed and index alone.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curvature, families, reports
from .errors import ConstraintError, ParseError
from .linalg import DEFAULT_TOL, max_abs

FUZZ_DEVIATION_TOL = 1.0e-9


def _default_tol() -> float:
    raw = os.environ.get("CURVLAB_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        print(f"warning: ignoring malformed CURVLAB_TOL={raw!r}", file=sys.stderr)
        return DEFAULT_TOL


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


# -- validate --------------------------------------------------------------------


def cmd_validate(args) -> int:
    tol = args.tol
    try:
        inst = reports.load_instance(args.path, tol=tol)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    try:
        alg = reports.build_algebra(inst, tol=tol)
    except ConstraintError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        r1, r2 = exc.residuals
        print(f"constraint residuals: {r1:.6e}, {r2:.6e}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return 1
    r1, r2, r3 = alg.jacobi_residual()
    print(f"jacobi residuals: {r1:.6e}, {r2:.6e}, {r3:.6e}")
    if inst.format == "codim2":
        c1, c2 = families.codim2_constraint_residuals(inst.codim2_params)
        print(f"constraint residuals: {c1:.6e}, {c2:.6e}")
    print(f"valid instance (n={alg.n}, tolerance {tol:.3e})")
    return 0


# -- report ----------------------------------------------------------------------


def cmd_report(args) -> int:
    tol = args.tol
    try:
        inst = reports.load_instance(args.path, tol=tol)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    try:
        report = reports.classification_report(inst, tol=tol, connection=args.connection)
    except ValueError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return 1
    _emit(report, args.json)
    return 0


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(reports.dumps(payload))
    else:
        print(reports.render_report(payload))


# -- fuzz ------------------------------------------------------------------------


def _draw_instance(args, index: int):
    rng = _sample_rng(args.seed, index)
    if args.family == "aa":
        return families.sample_almost_abelian(args.dim, rng, unimodular=args.unimodular)
    return families.sample_codim2(args.dim, args.scheme, rng, unimodular=args.unimodular)


def _closed_form_deviation_aa(p, alg) -> float:
    cf = families.aa_closed_forms(p)
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


def _closed_form_deviation_codim2(p) -> float:
    q = families.admissible_normalize(p)
    alg = families.build_codim2(q)
    cf = families.codim2_closed_forms(q)
    n = q.n
    T = curvature.chern_torsion(alg).T
    chern = curvature.chern_curvature(alg)
    R = chern.R
    Rhat = curvature.symmetrize(chern).R
    lc = curvature.levi_civita_koszul(alg).mixed_block()
    Rr, Rrhat = lc.R, curvature.symmetrize(lc).R
    block = np.array([[T[j, 0, i] for j in range(1, n)] for i in range(1, n)])
    idx = range(1, n)
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
        cf["trace_identity_residual"],
    )


def _oracle_deviation(alg) -> float:
    lc = curvature.levi_civita_from_chern(alg)
    rc = curvature.levi_civita_koszul(alg)
    scale = 1.0 + rc.max_abs()
    return max(
        max_abs(lc.mixed - rc.mixed_block().R),
        max_abs(lc.three_one - rc.three_one_block()),
        max_abs(lc.two_two - rc.two_two_block()),
    ) / scale


def check_sample(params, tol: float) -> tuple[list[str], dict, list[str]]:
    """Run property checks on one sampled instance.

    Returns (violations, flags, notes); flags feed the summary counters.
    """
    violations: list[str] = []
    notes: list[str] = []
    is_aa = isinstance(params, families.AlmostAbelianParams)
    if is_aa:
        alg = families.build_almost_abelian(params, tol=tol)
        cls = families.aa_classify(params, tol)
        cf_dev = _closed_form_deviation_aa(params, alg)
    else:
        alg = families.build_codim2(params, tol=tol)
        cls = families.codim2_classify(params, tol)
        cf_dev = _closed_form_deviation_codim2(params)
        tr_res = families.trace_identity_residual(params)
        if tr_res > 1.0e-10 * alg.scale() ** 2:
            violations.append(f"trace identity residual {tr_res:.3e}")

    scale = alg.scale() ** 2
    if cf_dev > FUZZ_DEVIATION_TOL * scale:
        violations.append(f"closed-form deviation {cf_dev:.3e}")
    oracle_dev = _oracle_deviation(alg)
    if oracle_dev > FUZZ_DEVIATION_TOL:
        violations.append(f"curvature oracle deviation {oracle_dev:.3e}")

    preds = curvature.predicates(alg, tol)
    uni, _ = alg.is_unimodular(tol)
    if cls.unimodular != uni:
        violations.append(f"unimodularity mismatch: family {cls.unimodular} vs trace test {uni}")
    if cls.kahler != preds.is_kahler:
        violations.append(f"kahler mismatch: family {cls.kahler} vs torsion norm {preds.is_kahler}")
    if cls.chern_flat != preds.is_chern_flat:
        violations.append(
            f"chern-flat mismatch: family {cls.chern_flat} vs curvature norm {preds.is_chern_flat}"
        )

    chern_verdict = curvature.constant_H_detect(curvature.chern_curvature(alg), tol)
    if chern_verdict.constant:
        if abs(chern_verdict.c) > tol * scale or not preds.is_chern_flat:
            violations.append(
                f"constant Chern H with c={chern_verdict.c:.6g} on a non-flat instance"
            )
    elif preds.is_chern_flat:
        violations.append("Chern-flat instance not detected as constant(0)")

    lc_verdict = curvature.constant_H_detect(
        curvature.levi_civita_koszul(alg).mixed_block(), tol
    )
    kahler_flat = preds.is_kahler and preds.is_lc_flat
    if lc_verdict.constant:
        if abs(lc_verdict.c) <= tol * scale:
            if not kahler_flat:
                violations.append("constant LC H with c=0 on an instance that is not Kahler flat")
        elif uni:
            violations.append(
                f"constant LC H with c={lc_verdict.c:.6g} on a unimodular instance"
            )
        elif lc_verdict.c < 0:
            notes.append(
                f"constant negative LC holomorphic sectional curvature c={lc_verdict.c:.6g} "
                "on a non-unimodular, non-Kahler instance (expected phenomenon)"
            )
        else:
            violations.append(
                f"constant positive LC H with c={lc_verdict.c:.6g}"
            )
    elif kahler_flat:
        violations.append("Kahler-flat instance not detected as LC constant(0)")

    flags = {
        "unimodular": uni,
        "kahler": preds.is_kahler,
        "chern_flat": preds.is_chern_flat,
        "lc_flat": preds.is_lc_flat,
        "chern_constant": chern_verdict.constant,
        "lc_constant": lc_verdict.constant,
    }
    return violations, flags, notes


def cmd_fuzz(args) -> int:
    tol = args.tol
    counters = {
        "unimodular": 0, "kahler": 0, "chern_flat": 0, "lc_flat": 0,
        "chern_constant": 0, "lc_constant": 0,
    }
    failures = []
    all_notes = []
    total = 0
    for i in range(args.count):
        params = _draw_instance(args, i)
        total += 1
        try:
            violations, flags, notes = check_sample(params, tol)
        except ValueError as exc:
            violations, flags, notes = [f"construction failed: {exc}"], {}, []
        for key, val in flags.items():
            counters[key] += bool(val)
        for note in notes:
            all_notes.append({"sample": i, "note": note})
        if violations:
            failures.append({
                "sample": i,
                "violations": violations,
                "instance": reports.instance_document(params),
            })
    if args.inject_example:
        m = args.dim - 1
        params = families.AlmostAbelianParams(
            args.dim, 1.0, np.zeros(m, dtype=complex), np.eye(m, dtype=complex)
        )
        total += 1
        violations, flags, notes = check_sample(params, tol)
        for key, val in flags.items():
            counters[key] += bool(val)
        for note in notes:
            all_notes.append({"sample": "injected", "note": note})
        if violations:
            failures.append({
                "sample": "injected",
                "violations": violations,
                "instance": reports.instance_document(params),
            })

    summary = {
        "schema": "curvlab.fuzz/1",
        "family": args.family,
        "scheme": args.scheme if args.family == "codim2" else None,
        "unimodular_sampling": bool(args.unimodular),
        "count": total,
        "dim": args.dim,
        "seed": args.seed,
        "tol": float(tol),
        "counters": counters,
        "notes": all_notes,
        "violations": failures,
    }
    if args.json:
        print(reports.dumps(summary))
    else:
        print(
            f"fuzz {args.family} dim={args.dim} count={total} seed={args.seed} "
            f"unimodular={args.unimodular}"
        )
        for key, val in counters.items():
            print(f"  {key}: {val}")
        for note in all_notes:
            print(f"  note (sample {note['sample']}): {note['note']}")
        for failure in failures:
            print(f"  VIOLATION (sample {failure['sample']}):")
            for v in failure["violations"]:
                print(f"    - {v}")
            print(f"    instance: {reports.dumps(failure['instance'])}")
    return 1 if failures else 0


# -- example ---------------------------------------------------------------------


def cmd_example(args) -> int:
    if args.n < 2:
        print("usage error: the example needs complex dimension n >= 2", file=sys.stderr)
        return 2
    alg = families.constant_lc_curvature_example(args.n)
    inst = reports.parse_instance(
        reports.instance_document(
            families.AlmostAbelianParams(
                args.n, 1.0, np.zeros(args.n - 1), np.eye(args.n - 1)
            )
        ),
        tol=args.tol,
    )
    report = reports.classification_report(inst, tol=args.tol, connection=args.connection)
    _emit(report, args.json)

    failures = []
    lc = report["connections"].get("lc")
    if lc is not None and not (lc["constant"] and abs(lc["c"] + 2.0) <= 1.0e-8):
        failures.append(f"expected constant LC curvature -2, got {lc}")
    T = curvature.chern_torsion(alg).T
    if any(abs(T[i, 0, i] - 2.0) > 1.0e-12 for i in range(1, args.n)):
        failures.append("expected torsion entries T[i,0,i] = 2")
    if report["predicates"]["kahler"]:
        failures.append("expected a non-Kahler instance")
    if report["predicates"]["unimodular"]:
        failures.append("expected a non-unimodular instance")
    for f in failures:
        print(f"FAILED: {f}", file=sys.stderr)
    return 1 if failures else 0


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvlab",
        description="Curvature computations for left-invariant Hermitian structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    tol_default = _default_tol()

    def add_tol(p):
        p.add_argument("--tol", type=float, default=tol_default,
                       help="tolerance (default from CURVLAB_TOL or 1e-9)")

    p_val = sub.add_parser("validate", help="validate an instance file")
    p_val.add_argument("path")
    add_tol(p_val)
    p_val.set_defaults(func=cmd_validate)

    for name in ("report", "classify"):
        p_rep = sub.add_parser(name, help="classify an instance file")
        p_rep.add_argument("path")
        p_rep.add_argument("--connection", choices=("chern", "lc", "both"), default="both")
        p_rep.add_argument("--json", action="store_true")
        add_tol(p_rep)
        p_rep.set_defaults(func=cmd_report)

    p_fuzz = sub.add_parser("fuzz", help="run seeded property campaigns")
    p_fuzz.add_argument("--family", choices=("aa", "codim2"), default="aa")
    p_fuzz.add_argument("--scheme", choices=("A", "B"), default="B",
                        help="codim2 sampling scheme")
    p_fuzz.add_argument("--unimodular", action="store_true")
    p_fuzz.add_argument("--count", type=int, default=100)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--dim", type=int, default=3)
    p_fuzz.add_argument("--json", action="store_true")
    p_fuzz.add_argument("--inject-example", action="store_true",
                        help="append the constant-LC non-unimodular example to the campaign")
    add_tol(p_fuzz)
    p_fuzz.set_defaults(func=cmd_fuzz)

    p_ex = sub.add_parser("example", help="reproduce the constant-LC example")
    p_ex.add_argument("n", type=int)
    p_ex.add_argument("--connection", choices=("chern", "lc", "both"), default="both")
    p_ex.add_argument("--json", action="store_true")
    add_tol(p_ex)
    p_ex.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "dim", 2) < 2 and args.command == "fuzz":
        print("usage error: --dim must be at least 2", file=sys.stderr)
        return 2
    if getattr(args, "count", 0) < 0:
        print("usage error: --count must be nonnegative", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
