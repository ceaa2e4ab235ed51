"""Command-line front end.

Exit codes (stable):

====  =========================================================
0     separable / verified certificate / checks passed
1     entangled / criterion refuses decomposition / check failed
2     inconclusive (p >= 2) / decomposition unsupported for p != 1
64    usage error (bad flags, unreadable input path)
65    malformed input or coefficients that are not a state
70    internal self-check failure
====  =========================================================

State files are JSON objects, one state per file::

    {"p": 1, "lambda": [0.7, 0.1, 0.1, 0.1]}
    {"p": 2, "omega": {"11": 0.5, "23": -0.25}}

Index strings hold ``p`` digits from ``0123`` and may not be all zeros.
Every float in the output is written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence, TextIO

import numpy as np

from bellsep import __version__
from bellsep import bell_model as bm
from bellsep import ensemble as ens
from bellsep import separability as sep
from bellsep import tensor_core as tc
from bellsep.bell_model import BellSpectrum, OmegaDiagonal
from bellsep.errors import BellsepError, CriterionViolatedError, NotAStateError

EXIT_OK = 0
EXIT_ENTANGLED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70

LAMBDA_SUM_TOL = 1e-9

VERDICT_EXIT = {
    sep.Verdict.SEPARABLE: EXIT_OK,
    sep.Verdict.ENTANGLED: EXIT_ENTANGLED,
    sep.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class InputError(Exception):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- formatting ---------------------------------------------------------------


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float rendered at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite number {obj!r}")
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def index_string(idx: Sequence[int]) -> str:
    return "".join(str(d) for d in idx)


def omega_to_json(omega: OmegaDiagonal) -> dict:
    vec = omega.vector()
    return {index_string(idx): float(vec[k]) for k, idx in enumerate(tc.multi_indices(omega.p)) if k}


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


# -- input --------------------------------------------------------------------


def read_state(path: str) -> OmegaDiagonal:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    return parse_state(data)


def parse_state(data: Any) -> OmegaDiagonal:
    if not isinstance(data, dict):
        raise InputError("state must be a JSON object")
    p = data.get("p")
    if isinstance(p, bool) or not isinstance(p, int) or not 1 <= p <= tc.MAX_QUBITS:
        raise InputError(f"'p' must be an integer in 1..{tc.MAX_QUBITS}")
    has_lambda = "lambda" in data
    has_omega = "omega" in data
    if has_lambda == has_omega:
        raise InputError("give exactly one of 'lambda' or 'omega'")
    if has_lambda:
        return _parse_lambda(p, data["lambda"])
    return _parse_omega(p, data["omega"])


def _number(x: Any, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise InputError(f"{what} must be a finite number, got {x!r}")
    return float(x)


def _parse_lambda(p: int, raw: Any) -> OmegaDiagonal:
    if p != 1:
        raise InputError("'lambda' input is only defined for p=1")
    if not isinstance(raw, list) or len(raw) != 4:
        raise InputError("'lambda' must be a list of 4 numbers")
    lam = [_number(x, "lambda entry") for x in raw]
    if abs(math.fsum(lam) - 1.0) > LAMBDA_SUM_TOL:
        raise InputError(f"'lambda' entries sum to {fmt(math.fsum(lam))}, not 1")
    if min(lam) < -1e-12:
        raise InputError(f"not a state: Bell weight {fmt(min(lam))} is negative", eigenvalue=min(lam))
    # renormalize the tolerated 1e-9 drift so the spectrum type accepts it
    total = math.fsum(lam)
    return bm.omega_from_lambdas(BellSpectrum(1, tuple(x / total for x in lam)))


def _parse_omega(p: int, raw: Any) -> OmegaDiagonal:
    if not isinstance(raw, dict):
        raise InputError("'omega' must be an object mapping index strings to numbers")
    coeffs = {}
    for key, value in raw.items():
        if len(key) != p or any(ch not in "0123" for ch in key):
            raise InputError(f"index string {key!r} must be {p} characters from '0123'")
        if set(key) == {"0"}:
            raise InputError(f"index string {key!r} is the identity term, which is fixed to 1")
        v = _number(value, f"omega[{key!r}]")
        if abs(v) > 1.0:
            raise InputError(f"not a state: |omega[{key!r}]| = {fmt(abs(v))} exceeds 1")
        coeffs[tuple(int(ch) for ch in key)] = v
    return OmegaDiagonal(p, coeffs)


def _require_state(omega: OmegaDiagonal) -> None:
    try:
        sep.require_state(omega)
    except NotAStateError as exc:
        raise InputError(f"not a state: density matrix eigenvalue {fmt(exc.eigenvalue)}", exc.eigenvalue) from None


# -- commands -----------------------------------------------------------------


def report_to_json(report: sep.SeparabilityReport, tol: float) -> dict:
    out = {
        "p": report.p,
        "omega": omega_to_json(report.omega),
        "criterion_sum": report.criterion_sum,
        "criterion_bound": report.criterion_bound,
        "criterion_verdict": report.criterion_verdict.value,
        "ppt_verdict": report.ppt_verdict.value,
        "ppt_spectrum": list(report.ppt_spectrum),
        "purity": report.purity,
        "tol": tol,
    }
    if report.p == 1:
        out["bell_weights"] = list(bm.bell_weights(report.omega))
    out["certificate"] = certificate_to_json(report.certificate, report.omega) if report.certificate else None
    return out


def certificate_to_json(dec: sep.SeparableDecomposition, omega: OmegaDiagonal) -> dict:
    residual = float(np.max(np.abs(dec.reconstruct() - bm.to_density_matrix(omega))))
    check = sep.verify_decomposition(dec, omega)
    s = sep.criterion_sum(omega)
    return {
        "weights": list(dec.weights),
        "local_a": [matrix_to_json(m) for m in dec.local_a],
        "local_b": [matrix_to_json(m) for m in dec.local_b],
        "local_eigenvalues_a": [tc.hermitian_eigenvalues(m).tolist() for m in dec.local_a],
        "local_eigenvalues_b": [tc.hermitian_eigenvalues(m).tolist() for m in dec.local_b],
        "local_eigenvalues_closed_form": list(sep.local_eigenvalues_closed_form(s)),
        "reconstruction_residual": residual,
        "verified": check.ok,
        "failure": check.reason,
    }


def _render_table(rows: Sequence[tuple[str, Any]], out: TextIO) -> None:
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        if isinstance(value, (list, tuple)):
            value = " ".join(fmt(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            value = fmt(value)
        out.write(f"{key:<{width}}  {value}\n")


def _render_matrix(m: np.ndarray) -> str:
    m = np.asarray(m, dtype=complex)
    rows = []
    for row in m:
        rows.append("[" + ", ".join(f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j" for z in row) + "]")
    return "[" + ", ".join(rows) + "]"


def cmd_analyze(args, out: TextIO) -> int:
    omega = read_state(args.file)
    _require_state(omega)
    report = sep.analyze(omega, args.tol)
    if args.json:
        out.write(dumps(report_to_json(report, args.tol)) + "\n")
    else:
        rows = [
            ("p", report.p),
            ("omega", ", ".join(f"{k}={fmt(v)}" for k, v in omega_to_json(omega).items())),
            ("criterion sum S", report.criterion_sum),
            ("criterion bound", report.criterion_bound),
            ("criterion verdict", report.criterion_verdict.value),
            ("ppt verdict", report.ppt_verdict.value),
            ("ppt spectrum", list(report.ppt_spectrum)),
            ("purity", report.purity),
            ("certificate", "present (run 'decompose' for details)" if report.certificate else "none"),
        ]
        _render_table(rows, out)
    return VERDICT_EXIT[report.criterion_verdict]


def cmd_decompose(args, out: TextIO, err: TextIO) -> int:
    omega = read_state(args.file)
    _require_state(omega)
    if omega.p != 1:
        err.write(f"error: explicit decompositions exist only for p=1 (got p={omega.p})\n")
        return EXIT_INCONCLUSIVE
    try:
        dec = sep.build_decomposition(omega)
    except CriterionViolatedError:
        s = sep.criterion_sum(omega)
        err.write(f"refused: criterion sum S={fmt(s)} exceeds 1, so the state is entangled\n")
        return EXIT_ENTANGLED
    doc = {"p": 1, "omega": omega_to_json(omega), "criterion_sum": sep.criterion_sum(omega)}
    doc.update(certificate_to_json(dec, omega))
    if args.json:
        out.write(dumps(doc) + "\n")
    else:
        rows = [
            ("omega", ", ".join(f"{k}={fmt(v)}" for k, v in doc["omega"].items())),
            ("criterion sum S", doc["criterion_sum"]),
            ("weights", doc["weights"]),
        ]
        for k, (a, b) in enumerate(zip(dec.local_a, dec.local_b), start=1):
            rows.append((f"rho_{k}^A", _render_matrix(a)))
            rows.append((f"rho_{k}^B", _render_matrix(b)))
        for k, (ea, eb) in enumerate(zip(doc["local_eigenvalues_a"], doc["local_eigenvalues_b"]), start=1):
            rows.append((f"eig rho_{k}^A", ea))
            rows.append((f"eig rho_{k}^B", eb))
        rows += [
            ("eig closed form", doc["local_eigenvalues_closed_form"]),
            ("reconstruction residual", doc["reconstruction_residual"]),
            ("verified", "yes" if doc["verified"] else f"no ({doc['failure']})"),
        ]
        _render_table(rows, out)
    return EXIT_OK if doc["verified"] else EXIT_SOFTWARE


def cmd_crosscheck(args, out: TextIO) -> int:
    summary = ens.crosscheck(args.p, args.n, args.seed, args.tol)
    doc = summary.to_dict()
    if args.json:
        out.write(dumps(doc) + "\n")
    else:
        rows = [("p", summary.p), ("samples", summary.n_samples), ("seed", summary.seed), ("tol", summary.tol)]
        rows += [(f"{c} / {q}", summary.counts[(c, q)]) for c, q in ens.CELL_ORDER]
        rows += [
            ("boundary samples", summary.boundary_count),
            ("off-boundary disagreements", summary.off_boundary_disagreements),
        ]
        _render_table(rows, out)
    if summary.p == 1 and summary.off_boundary_disagreements:
        return EXIT_ENTANGLED
    return EXIT_OK


def cmd_audit(args, out: TextIO) -> int:
    reports = [
        ens.necessary_condition_audit(args.p, args.n, args.terms, args.seed),
        ens.chain_audit(args.p, args.n, args.seed, args.terms),
    ]
    total = sum(r.violations for r in reports)
    if args.json:
        out.write(dumps({"audits": [r.to_dict() for r in reports], "violations": total}) + "\n")
    else:
        rows = [("p", args.p), ("samples", args.n), ("terms", args.terms), ("seed", args.seed)]
        for r in reports:
            for s in r.inequalities:
                rows.append((f"{r.name}.{s.name} checks", s.checks))
                rows.append((f"{r.name}.{s.name} violations", s.violations))
                rows.append((f"{r.name}.{s.name} min slack", s.min_slack))
                rows.append((f"{r.name}.{s.name} max slack", s.max_slack))
            for key, value in r.extra.items():
                rows.append((f"{r.name}.{key}", value))
        rows.append(("total violations", total))
        _render_table(rows, out)
    return EXIT_OK if total == 0 else EXIT_ENTANGLED


# -- entry point --------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _qubits(text: str) -> int:
    value = _positive_int(text)
    if value > tc.MAX_QUBITS:
        raise argparse.ArgumentTypeError(f"p must be at most {tc.MAX_QUBITS}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError("tolerance must be a non-negative finite number")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellsep", description="Separability analysis of Bell diagonal states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_an = sub.add_parser("analyze", help="criterion, PPT spectrum and verdict for one state")
    p_an.add_argument("file")
    p_an.add_argument("--tol", type=_tolerance, default=tc.BOUNDARY_TOL)
    p_an.add_argument("--json", action="store_true")

    p_de = sub.add_parser("decompose", help="explicit separable decomposition (p=1)")
    p_de.add_argument("file")
    p_de.add_argument("--json", action="store_true")

    p_cc = sub.add_parser("crosscheck", help="criterion vs PPT on random Bell diagonal states")
    p_cc.add_argument("--p", type=_qubits, default=1)
    p_cc.add_argument("--n", type=_positive_int, default=10000)
    p_cc.add_argument("--seed", type=_seed, default=ens.DEFAULT_SEED)
    p_cc.add_argument("--tol", type=_tolerance, default=tc.BOUNDARY_TOL)
    p_cc.add_argument("--json", action="store_true")

    p_au = sub.add_parser("audit", help="necessary-condition and proof-chain audits on separable states")
    p_au.add_argument("--p", type=_qubits, default=1)
    p_au.add_argument("--n", type=_positive_int, default=1000)
    p_au.add_argument("--terms", type=_positive_int, default=4)
    p_au.add_argument("--seed", type=_seed, default=ens.DEFAULT_SEED)
    p_au.add_argument("--json", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"bellsep: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return cmd_analyze(args, out)
        if args.command == "decompose":
            return cmd_decompose(args, out, err)
        if args.command == "crosscheck":
            return cmd_crosscheck(args, out)
        return cmd_audit(args, out)
    except UsageError as exc:
        err.write(f"bellsep: error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"bellsep: invalid input: {exc}\n")
        return EXIT_DATAERR
    except BellsepError as exc:
        err.write(f"bellsep: internal error: {exc}\n")
        return EXIT_SOFTWARE


def run() -> None:
    sys.exit(main())
