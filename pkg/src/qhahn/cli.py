"""Command-line entry point: run verification suites over parameter panels
and export matrices / function values with exact "num/den" serialization.

Exit codes: 0 = all selected checks pass (skips allowed), 1 = at least one
check failed, 2 = configuration or usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from fractions import Fraction

from . import __version__
from . import algebra, brf, gevp, wilson
from .operators import Basis, Operator, build_operator, verify_factorization
from .qcore import ConfigError, InvalidParams, QParams, frac_str, validate_params

__all__ = ["ConfigError", "main", "run_verify", "run_export", "SUITES"]


def _parse_scalar(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}: {exc}") from None


def _parse_qparams(entry: dict) -> QParams:
    try:
        raw = {k: entry[k] for k in ("q", "A", "B", "N")}
    except (KeyError, TypeError):
        raise ConfigError(f"instance needs keys q, A, B, N: {entry!r}") from None
    if not isinstance(raw["N"], int) or isinstance(raw["N"], bool):
        raise ConfigError(f"N must be an integer: {raw['N']!r}")
    return QParams(_parse_scalar(raw["q"]), _parse_scalar(raw["A"]),
                   _parse_scalar(raw["B"]), raw["N"])


def _parse_wilson(entry: dict) -> wilson.WilsonParams:
    try:
        raw = {k: entry[k] for k in ("q", "qa", "qc", "qd", "qe", "N")}
    except (KeyError, TypeError):
        raise ConfigError(f"wilson instance needs keys q, qa, qc, qd, qe, N: {entry!r}") from None
    if not isinstance(raw["N"], int) or isinstance(raw["N"], bool):
        raise ConfigError(f"N must be an integer: {raw['N']!r}")
    return wilson.WilsonParams(
        _parse_scalar(raw["q"]), _parse_scalar(raw["qa"]), _parse_scalar(raw["qc"]),
        _parse_scalar(raw["qd"]), _parse_scalar(raw["qe"]), raw["N"])


def _parse_hahn(entry: dict) -> wilson.HahnParams:
    try:
        raw = {k: entry[k] for k in ("alpha", "beta", "N")}
    except (KeyError, TypeError):
        raise ConfigError(f"hahn instance needs keys alpha, beta, N: {entry!r}") from None
    if not isinstance(raw["N"], int) or isinstance(raw["N"], bool):
        raise ConfigError(f"N must be an integer: {raw['N']!r}")
    return wilson.HahnParams(_parse_scalar(raw["alpha"]), _parse_scalar(raw["beta"]), raw["N"])


def _qparams_suite(checks):
    """Suite over the main q-Hahn panel; invalid instances are reported
    as skips (one entry per check), never silently dropped."""

    def run(config):
        reports = []
        for entry in config.get("instances", []):
            p = _parse_qparams(entry)
            guard = validate_params(p, p.N)
            if not guard.valid:
                reason = "; ".join(guard.issues())
                for check in checks:
                    reports.append({
                        "check": check.__name__.removeprefix("check_"),
                        "params": p.as_dict(), "status": "skip",
                        "reason": reason, "violations": [], "details": {},
                    })
                continue
            for check in checks:
                reports.append(check(p).as_dict())
        return reports

    return run


def _wilson_suite(config):
    reports = []
    for entry in config.get("wilson_instances", []):
        try:
            wp = _parse_wilson(entry)
        except InvalidParams as exc:
            reports.append({"check": "wilson_biorthogonality", "params": dict(entry),
                            "status": "skip", "reason": str(exc),
                            "violations": [], "details": {}})
            continue
        reports.append(wilson.check_wilson_biorthogonality(wp).as_dict())
    return reports


def _hahn_suite(config):
    reports = []
    for entry in config.get("hahn_instances", []):
        try:
            hp = _parse_hahn(entry)
        except InvalidParams as exc:
            reports.append({"check": "hahn_biorthogonality", "params": dict(entry),
                            "status": "skip", "reason": str(exc),
                            "violations": [], "details": {}})
            continue
        reports.append(wilson.check_hahn_biorthogonality(hp).as_dict())
    return reports


def _limits_suite(config):
    reports = []
    section = config.get("limits", {})
    if not isinstance(section, dict):
        raise ConfigError("limits section must be an object")
    wl = section.get("wilson")
    if wl is not None:
        p = _parse_qparams(wl.get("instance", {}))
        m_list = wl.get("m_list", [8, 12, 16, 20])
        if not all(isinstance(m, int) and not isinstance(m, bool) for m in m_list):
            raise ConfigError(f"m_list must be integers: {m_list!r}")
        qc = _parse_scalar(wl.get("qc", "3"))
        reports.append(wilson.wilson_limit_check(p, m_list, qc).as_dict())
    qt = section.get("qto1")
    if qt is not None:
        hp = _parse_hahn(qt.get("instance", {}))
        h_list = [_parse_scalar(h) for h in qt.get("h_list", ["1/8", "1/16", "1/32"])]
        reports.append(wilson.qto1_convergence_check(hp, h_list).as_dict())
    return reports


def check_casimir_rqhahn(p: QParams):
    return algebra.check_casimir("rqhahn", p)


def check_casimir_meta(p: QParams):
    return algebra.check_casimir("meta", p)


def check_potential_rqhahn(p: QParams):
    return algebra.check_potential("rqhahn", p)


def check_potential_meta(p: QParams):
    return algebra.check_potential("meta", p)


SUITES = {
    "gevp": _qparams_suite([
        gevp.check_gevp, verify_factorization, gevp.check_difference_equation,
        gevp.check_recurrence, gevp.check_tridiagonal_actions, gevp.check_contiguity,
    ]),
    "biortho": _qparams_suite([
        brf.check_weight, brf.check_biorthogonality, brf.check_partner,
        brf.check_partial_fractions,
    ]),
    "algebra": _qparams_suite([
        algebra.check_rqhahn_relations, algebra.check_meta_relations,
        algebra.check_structure_constants,
    ]),
    "casimir": _qparams_suite([check_casimir_rqhahn, check_casimir_meta]),
    "potential": _qparams_suite([check_potential_rqhahn, check_potential_meta]),
    "wilson": _wilson_suite,
    "hahn": _hahn_suite,
    "limits": _limits_suite,
}


def _json_default(obj):
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def run_verify(config_path: str, suite_names: list[str] | None, out_path: str | None) -> int:
    try:
        with open(config_path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise ConfigError("config root must be a JSON object")

    selected = suite_names if suite_names is not None else config.get("suites")
    if selected is None:
        selected = sorted(SUITES)
    if not selected:
        raise ConfigError("no suites selected")
    unknown = [s for s in selected if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suites {unknown}; available: {sorted(SUITES)}")

    suites: dict[str, list] = {}
    timing: dict[str, float] = {}
    t_total = time.monotonic()
    for name in sorted(set(selected)):
        t0 = time.monotonic()
        suites[name] = SUITES[name](config)
        timing[name] = time.monotonic() - t0

    counts = {"pass": 0, "fail": 0, "skip": 0}
    for reports in suites.values():
        for rep in reports:
            counts[rep["status"]] += 1
    payload = {
        "artifact": {"name": "qhahn", "version": __version__},
        "config_sha256": hashlib.sha256(raw).hexdigest(),
        "suites": suites,
        "summary": counts,
        "timing": {"per_suite_seconds": timing,
                   "total_seconds": time.monotonic() - t_total},
    }
    text = _dump_json(payload)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if counts["fail"] else 0


def _export_payload(what: str, which: str, p: QParams, basis: Basis) -> dict:
    if what == "matrix":
        try:
            op = Operator(which)
        except ValueError:
            raise ConfigError(f"--which must be one of X, Y, Z, V for matrices, got {which!r}") from None
        mat = build_operator(op, basis, p)
        return {"what": "matrix", "which": op.value, "basis": mat.basis.value,
                "params": p.as_dict(),
                "rows": [[frac_str(v) for v in row] for row in mat.rows()]}
    if what == "brf":
        try:
            n = int(which)
        except ValueError:
            raise ConfigError(f"--which must be an index n for brf, got {which!r}") from None
        if not 0 <= n <= p.N:
            raise ConfigError(f"brf index n={n} outside 0..{p.N}")
        vec = brf.brf_u(n, p)
        return {"what": "brf", "which": str(n), "params": p.as_dict(),
                "values": [frac_str(v) for v in vec.values]}
    if what == "weight":
        w = brf.weight_vector(p)
        return {"what": "weight", "which": "w", "params": p.as_dict(),
                "values": [frac_str(v) for v in w]}
    raise ConfigError(f"unknown export target {what!r}")


def _export_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\n")
    if payload["what"] == "matrix":
        for row in payload["rows"]:
            writer.writerow(row)
    else:
        writer.writerow(["x", "value"])
        for x, value in enumerate(payload["values"]):
            writer.writerow([str(x), value])
    return buf.getvalue()


def run_export(args: argparse.Namespace) -> int:
    parts = args.params.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--params must be q,A,B,N, got {args.params!r}")
    try:
        N = int(parts[3])
    except ValueError:
        raise ConfigError(f"N must be an integer, got {parts[3]!r}") from None
    p = QParams(_parse_scalar(parts[0]), _parse_scalar(parts[1]), _parse_scalar(parts[2]), N)
    guard = validate_params(p, p.N)
    if not guard.valid:
        raise InvalidParams("; ".join(guard.issues()))
    basis = Basis.POINT if args.basis == "point" else Basis.PHI
    payload = _export_payload(args.what, args.which, p, basis)
    text = _dump_json(payload) if args.format == "json" else _export_csv(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhahn",
        description="Exact verification harness for a q-Hahn biorthogonal system.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run verification suites over a parameter panel")
    p_verify.add_argument("--config", required=True, help="panel config JSON path")
    p_verify.add_argument("--suite", nargs="+", default=None, choices=sorted(SUITES),
                          help="suites to run (default: config's 'suites' or all)")
    p_verify.add_argument("--out", default=None, help="report path (default: stdout)")

    p_export = sub.add_parser("export", help="export a matrix or function values exactly")
    p_export.add_argument("--what", required=True, choices=["matrix", "brf", "weight"])
    p_export.add_argument("--which", default="w",
                          help="X|Y|Z|V for matrices, index n for brf (ignored for weight)")
    p_export.add_argument("--params", required=True, help="q,A,B,N with rationals as num/den")
    p_export.add_argument("--format", default="json", choices=["json", "csv"])
    p_export.add_argument("--basis", default="point", choices=["point", "phi"])
    p_export.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize everything else
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "verify":
            return run_verify(args.config, args.suite, args.out)
        return run_export(args)
    except (ConfigError, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
