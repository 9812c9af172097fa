"""Instance files and classification reports.

An instance file is a JSON document with a ``format`` tag:

* ``generic``        n, C, D as nested arrays indexed [j][i][k]
* ``almost_abelian`` n, lambda, v, A
* ``codim2``         n, lambda, v, X, Y, Z
* ``real``           dim, f ([c][a][b], real floats), J, G

Complex numbers are always 2-element arrays ``[re, im]``.  Parsing failures
raise :class:`~curvlab.errors.ParseError` carrying a path into the document.
Reports are plain dicts with deterministic JSON serialization.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from numbers import Real

import numpy as np

from . import curvature, families
from .algebra import HermitianLieAlgebra, RealLieData, from_real, new
from .errors import ParseError
from .linalg import DEFAULT_TOL

FORMATS = ("generic", "almost_abelian", "codim2", "real")


# -- parsing -------------------------------------------------------------------


def _need(doc: dict, key: str, path: str):
    if key not in doc:
        raise ParseError(f"missing key {key!r}", path)
    return doc[key]


def _as_int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError("expected an integer", path)
    return x


def _as_float(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise ParseError("expected a real number", path)
    return float(x)


def _as_complex(x, path: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError("expected a complex number as [re, im]", path)
    return complex(_as_float(x[0], path + "[0]"), _as_float(x[1], path + "[1]"))


def _as_list(x, length: int, path: str) -> list:
    if not isinstance(x, list):
        raise ParseError("expected an array", path)
    if len(x) != length:
        raise ParseError(f"expected {length} entries, found {len(x)}", path)
    return x


def _cvector(x, m: int, path: str) -> np.ndarray:
    return np.array([_as_complex(e, f"{path}[{i}]") for i, e in enumerate(_as_list(x, m, path))])


def _cmatrix(x, m: int, path: str) -> np.ndarray:
    rows = _as_list(x, m, path)
    return np.array([_cvector(r, m, f"{path}[{i}]") for i, r in enumerate(rows)])


def _ctensor3(x, n: int, path: str) -> np.ndarray:
    outer = _as_list(x, n, path)
    return np.array([_cmatrix(p, n, f"{path}[{j}]") for j, p in enumerate(outer)])


def _rmatrix(x, m: int, path: str) -> np.ndarray:
    rows = _as_list(x, m, path)
    return np.array(
        [[_as_float(e, f"{path}[{i}][{j}]") for j, e in enumerate(_as_list(r, m, f"{path}[{i}]"))]
         for i, r in enumerate(rows)]
    )


def _rtensor3(x, m: int, path: str) -> np.ndarray:
    outer = _as_list(x, m, path)
    return np.array([_rmatrix(p, m, f"{path}[{c}]") for c, p in enumerate(outer)])


@dataclass
class Instance:
    """A parsed instance: its format tag, raw payload and canonical document."""

    format: str
    document: dict
    n: int
    aa_params: families.AlmostAbelianParams | None = None
    codim2_params: families.Codim2Params | None = None
    generic: tuple | None = None  # (n, C, D)
    real_data: RealLieData | None = None


def parse_instance(doc, tol: float = DEFAULT_TOL) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object", "$")
    fmt = _need(doc, "format", "$")
    if fmt not in FORMATS:
        raise ParseError(f"unknown format {fmt!r}; expected one of {FORMATS}", "$.format")

    if fmt == "real":
        dim = _as_int(_need(doc, "dim", "$"), "$.dim")
        if dim < 2 or dim % 2:
            raise ParseError("dim must be a positive even integer", "$.dim")
        f = _rtensor3(_need(doc, "f", "$"), dim, "$.f")
        J = _rmatrix(_need(doc, "J", "$"), dim, "$.J")
        G = _rmatrix(_need(doc, "G", "$"), dim, "$.G")
        data = RealLieData(dim, f, J, G, tol=tol)
        return Instance("real", canonical_document(doc), dim // 2, real_data=data)

    n = _as_int(_need(doc, "n", "$"), "$.n")
    if n < 1:
        raise ParseError("n must be a positive integer", "$.n")
    m = n - 1
    if fmt == "generic":
        C = _ctensor3(_need(doc, "C", "$"), n, "$.C")
        D = _ctensor3(_need(doc, "D", "$"), n, "$.D")
        return Instance("generic", canonical_document(doc), n, generic=(n, C, D))
    lam = _as_float(_need(doc, "lambda", "$"), "$.lambda")
    v = _cvector(_need(doc, "v", "$"), m, "$.v")
    if fmt == "almost_abelian":
        A = _cmatrix(_need(doc, "A", "$"), m, "$.A")
        return Instance(fmt, canonical_document(doc), n,
                        aa_params=families.AlmostAbelianParams(n, lam, v, A))
    X = _cmatrix(_need(doc, "X", "$"), m, "$.X")
    Y = _cmatrix(_need(doc, "Y", "$"), m, "$.Y")
    Z = _cmatrix(_need(doc, "Z", "$"), m, "$.Z")
    return Instance(fmt, canonical_document(doc), n,
                    codim2_params=families.Codim2Params(n, lam, v, X, Y, Z))


def load_instance(path: str, tol: float = DEFAULT_TOL) -> Instance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", "$") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", f"$:line {exc.lineno}") from exc
    return parse_instance(doc, tol=tol)


def build_algebra(inst: Instance, tol: float = DEFAULT_TOL) -> HermitianLieAlgebra:
    if inst.format == "generic":
        n, C, D = inst.generic
        return new(n, C, D, tol=tol)
    if inst.format == "almost_abelian":
        return families.build_almost_abelian(inst.aa_params, tol=tol)
    if inst.format == "codim2":
        return families.build_codim2(inst.codim2_params, tol=tol)
    return from_real(inst.real_data, tol=tol)


# -- serialization --------------------------------------------------------------


def _pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_cvector(v: np.ndarray) -> list:
    return [_pair(z) for z in v]


def encode_cmatrix(a: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in a]


def encode_ctensor3(t: np.ndarray) -> list:
    return [encode_cmatrix(p) for p in t]


def instance_document(obj) -> dict:
    """Canonical instance document for params, an algebra, or real data."""
    if isinstance(obj, families.AlmostAbelianParams):
        return {
            "format": "almost_abelian", "n": obj.n, "lambda": float(obj.lam),
            "v": encode_cvector(obj.v), "A": encode_cmatrix(obj.A),
        }
    if isinstance(obj, families.Codim2Params):
        return {
            "format": "codim2", "n": obj.n, "lambda": float(obj.lam),
            "v": encode_cvector(obj.v), "X": encode_cmatrix(obj.X),
            "Y": encode_cmatrix(obj.Y), "Z": encode_cmatrix(obj.Z),
        }
    if isinstance(obj, HermitianLieAlgebra):
        return {
            "format": "generic", "n": obj.n,
            "C": encode_ctensor3(obj.C), "D": encode_ctensor3(obj.D),
        }
    if isinstance(obj, RealLieData):
        return {
            "format": "real", "dim": obj.dim,
            "f": obj.f.tolist(), "J": obj.J.tolist(), "G": obj.G.tolist(),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_document(doc: dict) -> dict:
    """Round-trip through the canonical JSON encoding (sorted keys, plain floats)."""
    return json.loads(dumps(doc))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(doc: dict) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


# -- reports ---------------------------------------------------------------------


def _verdict_dict(v: curvature.HVerdict) -> dict:
    out = {
        "constant": bool(v.constant),
        "c": float(v.c),
        "max_violation": float(v.max_violation),
        "tol": float(v.tol),
        "witness": None,
    }
    if v.witness is not None:
        idx, x1, x2, h1, h2 = v.witness
        out["witness"] = {
            "component": list(idx),
            "X1": encode_cvector(x1), "X2": encode_cvector(x2),
            "H1": float(h1), "H2": float(h2),
        }
    return out


def classification_report(
    inst: Instance, tol: float = DEFAULT_TOL, connection: str = "both"
) -> dict:
    """Full deterministic classification of one instance."""
    alg = build_algebra(inst, tol=tol)
    preds = curvature.predicates(alg, tol)
    uni, worst_tr = alg.is_unimodular(tol)
    report: dict = {
        "schema": "curvlab.report/1",
        "digest": digest(inst.document),
        "format": inst.format,
        "n": alg.n,
        "tol": float(tol),
        "jacobi_residuals": list(alg.jacobi_residual()),
        "norms": {
            "torsion_max": preds.torsion_max,
            "chern_max": preds.chern_max,
            "lc_real_max": preds.lc_real_max,
        },
        "predicates": {
            "unimodular": uni,
            "max_ad_trace": worst_tr,
            "kahler": preds.is_kahler,
            "chern_flat": preds.is_chern_flat,
            "lc_flat": preds.is_lc_flat,
        },
        "instance": inst.document,
        "notes": [],
    }
    if inst.format == "codim2":
        report["constraint_residuals"] = list(
            families.codim2_constraint_residuals(inst.codim2_params)
        )
        report["trace_identity_residual"] = families.trace_identity_residual(inst.codim2_params)
        cls = families.codim2_classify(inst.codim2_params, tol)
        report["family"] = {
            "unimodular": cls.unimodular, "kahler": cls.kahler, "chern_flat": cls.chern_flat,
        }
    elif inst.format == "almost_abelian":
        cls = families.aa_classify(inst.aa_params, tol)
        report["family"] = {
            "unimodular": cls.unimodular, "kahler": cls.kahler, "chern_flat": cls.chern_flat,
        }

    connections = {}
    if connection in ("chern", "both"):
        connections["chern"] = _verdict_dict(
            curvature.constant_H_detect(curvature.chern_curvature(alg), tol)
        )
    if connection in ("lc", "both"):
        lc_verdict = curvature.constant_H_detect(
            curvature.levi_civita_koszul(alg).mixed_block(), tol
        )
        connections["lc"] = _verdict_dict(lc_verdict)
        if lc_verdict.constant and lc_verdict.c < -tol and not uni:
            report["notes"].append(
                "constant negative Levi-Civita holomorphic sectional curvature on a "
                "non-unimodular instance; such metrics are non-Kahler yet have constant "
                "H, an expected phenomenon outside the unimodular setting"
            )
    report["connections"] = connections
    return report


def render_report(report: dict) -> str:
    """Human-readable rendering of a classification report."""
    lines = [
        f"instance {report['format']} (n={report['n']})  digest {report['digest'][:16]}...",
        f"tolerance {report['tol']:.3e}",
        "jacobi residuals: " + ", ".join(f"{r:.3e}" for r in report["jacobi_residuals"]),
    ]
    if "constraint_residuals" in report:
        lines.append(
            "constraint residuals: "
            + ", ".join(f"{r:.3e}" for r in report["constraint_residuals"])
        )
    nm = report["norms"]
    lines.append(
        f"norms: |T|={nm['torsion_max']:.6g}  |R_chern|={nm['chern_max']:.6g}  "
        f"|Rm_lc|={nm['lc_real_max']:.6g}"
    )
    pr = report["predicates"]
    lines.append(
        f"predicates: unimodular={pr['unimodular']} (max |tr ad| = {pr['max_ad_trace']:.6g})  "
        f"kahler={pr['kahler']}  chern_flat={pr['chern_flat']}  lc_flat={pr['lc_flat']}"
    )
    if "family" in report:
        fm = report["family"]
        lines.append(
            f"family predicates: unimodular={fm['unimodular']}  kahler={fm['kahler']}  "
            f"chern_flat={fm['chern_flat']}"
        )
    for name, v in report.get("connections", {}).items():
        if v["constant"]:
            lines.append(f"{name}: constant holomorphic sectional curvature c = {v['c']:.9g}")
        else:
            w = v["witness"]
            lines.append(
                f"{name}: NOT constant (max component violation {v['max_violation']:.3e}); "
                f"witness H values {w['H1']:.6g} vs {w['H2']:.6g}"
            )
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)
