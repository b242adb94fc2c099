"""``dualdet`` command-line interface.

Every command writes one report (JSON by default).  Reports contain no
timing or host data, so identical arguments and inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import contextvars
import hashlib
import json
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import numpy as np

from . import __version__
from . import generate as gen
from .config import Tolerances, using
from .dcmat import DCMatrix, char_roots, charpoly, det, inverse, verify_eigenpair
from .dqmat import DQMatrix, dq_inverse, omega, omega_expand, qdet, solve_zblock, verify_right_eigenpair
from .errors import DualAlgebraError, NumericalPreconditionError, ParseError, ShapeError
from .io import plain_number, dumps, matrix_to_json, parse_matrix, result_scalar, scalar_from_json, scalar_to_json
from .scalar import DualReal
from .spectra import (
    Verdict,
    bloomfield_watson_check,
    cauchy_schwarz_check,
    dq_svd,
    herm_eig,
    herm_eig_dc,
    instance_digest,
    psd_det_inequalities,
    sturm_check,
)

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

SUITES: dict[str, Callable[[np.random.Generator], Verdict]] = {}


def _suite(name):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


def _size(rng: np.random.Generator) -> int:
    return int(rng.integers(2, 6))


def _closeness(theorem: str, err: float, scale: float, digest: str, rtol: float = 1e-8) -> Verdict:
    slack = rtol * max(1.0, scale) - err
    return Verdict(theorem, slack >= 0, (DualReal(slack, 0.0),), digest)


@_suite("sturm")
def _sturm(rng):
    m = _size(rng)
    A = gen.dc_hermitian(rng, m)
    k = int(rng.integers(1, m + 1))
    idx = sorted(int(i) for i in rng.choice(m, size=k, replace=False))
    return sturm_check(A, idx)


@_suite("bw")
def _bw(rng):
    m = _size(rng)
    A = gen.dc_psd(rng, m)
    k = int(rng.integers(1, m + 1))
    X = gen.dc_unitary(rng, m)[:, 0:k]
    return bloomfield_watson_check(A, X)


@_suite("cs")
def _cs(rng):
    m = _size(rng)
    n = int(rng.integers(1, m + 1))
    return cauchy_schwarz_check(gen.dc(rng, m, n), gen.dc(rng, m, n))


@_suite("psd-det")
def _psd_det(rng):
    m = _size(rng)
    D = gen.dc_psd(rng, 2 * m)
    return psd_det_inequalities(D[0:m, 0:m], D[m : 2 * m, m : 2 * m], D[0:m, m : 2 * m])


@_suite("qdet-mult")
def _qdet_mult(rng):
    m = _size(rng)
    A, B = gen.dq(rng, m), gen.dq(rng, m)
    lhs = qdet(A @ B)
    rhs = qdet(A) * qdet(B)
    err = max(abs(lhs.st - rhs.st), abs(lhs.in_ - rhs.in_))
    return _closeness("qdet-mult", err, max(abs(rhs.st), abs(rhs.in_)), instance_digest(A, B))


@_suite("omega-hom")
def _omega_hom(rng):
    a, b = gen.dual_quaternion(rng), gen.dual_quaternion(rng)
    err = 0.0
    for lhs, rhs in (
        (omega(a * b).expand(), (omega(a) * omega(b)).expand()),
        (omega(a * b).expand(), omega(a).expand() @ omega(b).expand()),
        (omega(a + b).expand(), omega(a).expand() + omega(b).expand()),
        (omega(a.conjugate()).expand(), omega(a).expand().H),
    ):
        err = max(err, float(np.max(np.abs(lhs.st - rhs.st))), float(np.max(np.abs(lhs.in_ - rhs.in_))))
    m = _size(rng)
    A, B = gen.dq(rng, m), gen.dq(rng, m)
    L, R = omega_expand(A @ B), omega_expand(A) @ omega_expand(B)
    err = max(err, float(np.max(np.abs(L.st - R.st))), float(np.max(np.abs(L.in_ - R.in_))))
    return _closeness("omega-hom", err, 10.0 * m, instance_digest(A, B), rtol=1e-12)


@_suite("charroots-vs-eigs")
def _charroots_vs_eigs(rng):
    m = _size(rng)
    A = gen.dc_hermitian(rng, m)
    lambdas = herm_eig_dc(A).lambdas
    roots = char_roots(A)
    margins = []
    ok = True
    for lam in lambdas:
        best = min(roots, key=lambda r: abs(r.lambda_st - lam.st))
        d_st = abs(best.lambda_st - lam.st)
        if best.kind == "unique":
            d_in = abs(best.lambda_in - lam.in_)
        else:
            d_in = 0.0 if best.kind == "free" else float("inf")
        tol = 1e-6 * max(1.0, abs(lam.st), abs(lam.in_))
        ok &= d_st <= tol and d_in <= tol
        margins.append(DualReal(tol - d_st, tol - d_in if np.isfinite(d_in) else -1.0))
    return Verdict("charroots-vs-eigs", ok, tuple(margins), instance_digest(A))


def run_suite(name: str, seed: int, n: int, threads: int = 1) -> dict:
    fn = SUITES[name]
    seeds = np.random.SeedSequence(seed).spawn(n)

    def one(ss):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return fn(np.random.default_rng(ss))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(contextvars.copy_context().run, one, ss) for ss in seeds]
            verdicts = [f.result() for f in futures]
    else:
        verdicts = [one(ss) for ss in seeds]
    worst = [v.worst_margin() for v in verdicts if v.margins]
    worst_margin = min(worst, key=lambda d: (d.st, d.in_)) if worst else None
    failed = [i for i, v in enumerate(verdicts) if not v.passed]
    return {
        "suite": name,
        "n": n,
        "passed": n - len(failed),
        "failed": failed,
        "worst_margin": scalar_to_json(worst_margin) if worst_margin is not None else None,
        "verdicts": [v.to_json() for v in verdicts],
    }


# single-matrix commands -------------------------------------------------------


def _one_input(args, count: int = 1):
    paths = args.input or []
    if len(paths) != count:
        raise ParseError(f"{args.command} needs exactly {count} --input file(s), got {len(paths)}")
    return [parse_matrix(p) for p in paths]


def _need(A, kind, command):
    if not isinstance(A, kind):
        want = "dc" if kind is DCMatrix else "dq"
        raise ParseError(f"{command} needs a '{want}' matrix")
    return A


def _roots_json(roots):
    out = []
    for r in roots:
        out.append(
            {
                "lambda_st": _pair(r.lambda_st),
                "status": r.kind,
                "lambda_in": None if r.lambda_in is None else _pair(r.lambda_in),
                "multiplicity": r.multiplicity,
            }
        )
    return out


def _pair(z) -> list:
    z = complex(z)
    return [plain_number(z.real), plain_number(z.imag)]


def _poly_json(coeffs):
    return [_pair(c) for c in coeffs]


def cmd_det(args):
    (A,) = _one_input(args)
    return {"det": result_scalar(det(_need(A, DCMatrix, "det")))}, []


def cmd_qdet(args):
    (A,) = _one_input(args)
    d = qdet(_need(A, DQMatrix, "qdet"))
    imag = max(abs(complex(d.st).imag), abs(complex(d.in_).imag))
    return {"qdet": scalar_to_json(d), "max_imag": imag}, []


def cmd_inverse(args):
    (A,) = _one_input(args)
    inv = dq_inverse(A) if isinstance(A, DQMatrix) else inverse(A)
    return {"inverse": matrix_to_json(inv)}, []


def cmd_charpoly(args):
    (A,) = _one_input(args)
    f = charpoly(_need(A, DCMatrix, "charpoly"))
    return {"g": _poly_json(f.g), "tau": _poly_json(f.tau)}, []


def cmd_charroots(args):
    (A,) = _one_input(args)
    roots = char_roots(_need(A, DCMatrix, "charroots"))
    found = [r for r in roots if r.exists]
    out: dict[str, Any] = {"roots": _roots_json(found), "rejected": _roots_json([r for r in roots if not r.exists])}
    if not found:
        out["diagnostic"] = "no characteristic root"
    return out, []


def cmd_eig(args):
    (A,) = _one_input(args)
    E = herm_eig(A)
    return {"lambdas": [scalar_to_json(x) for x in E.lambdas], "U": matrix_to_json(E.U)}, []


def cmd_svd(args):
    (A,) = _one_input(args)
    S = dq_svd(A)
    return {
        "sigmas": [scalar_to_json(x) for x in S.sigmas],
        "r": S.r,
        "s": S.s,
        "U": matrix_to_json(S.U),
        "V": matrix_to_json(S.V),
    }, []


def cmd_rank(args):
    (A,) = _one_input(args)
    S = dq_svd(A)
    return {"rank": S.s, "arank": S.r}, []


def _lambda(args):
    if args.lam is None:
        raise ParseError(f"{args.command} needs --lambda")
    try:
        return scalar_from_json(json.loads(args.lam))
    except json.JSONDecodeError as exc:
        raise ParseError(f"--lambda is not valid JSON: {exc.msg}") from exc


def cmd_verify_eig(args):
    A, x = _one_input(args, 2)
    lam = _lambda(args)
    res = verify_eigenpair(_need(A, DCMatrix, "verify-eig"), lam, _need(x, DCMatrix, "verify-eig"))
    bound = args.resid
    v = Verdict("eigenpair", res.st <= bound and abs(res.in_) <= bound, (DualReal(bound - res.st, bound - abs(res.in_)),), instance_digest(A, x))
    return {"residual": scalar_to_json(res)}, [v]


def cmd_verify_right_eig(args):
    A, x = _one_input(args, 2)
    lam = _lambda(args)
    res, f = verify_right_eigenpair(_need(A, DQMatrix, "verify-right-eig"), lam, _need(x, DQMatrix, "verify-right-eig"))
    bound = args.resid
    ok = res.st <= bound and abs(res.in_) <= bound
    v = Verdict("right-eigenpair", ok, (DualReal(bound - res.st, bound - abs(res.in_)),), instance_digest(A, x))
    return {"residual": scalar_to_json(res), "f_value": scalar_to_json(f)}, [v]


def cmd_solve(args):
    A, B = _one_input(args, 2)
    if isinstance(A, DQMatrix):
        X = solve_zblock(A, _need(B, DQMatrix, "solve"))
    else:
        X = inverse(A) @ _need(B, DCMatrix, "solve")
    return {"solution": matrix_to_json(X)}, []


def cmd_check(args):
    if args.input:
        raise ParseError("check suites generate their own instances; --input is not accepted")
    if args.n < 1:
        raise ParseError("--n must be positive")
    summary = run_suite(args.suite, args.seed, args.n, args.threads)
    verdicts = [
        Verdict(v["theorem"], v["pass"], tuple(DualReal(*m) for m in v["margins"]), v["instance_digest"])
        for v in summary["verdicts"]
    ]
    return summary, verdicts


COMMANDS = {
    "det": cmd_det,
    "qdet": cmd_qdet,
    "inverse": cmd_inverse,
    "charpoly": cmd_charpoly,
    "charroots": cmd_charroots,
    "eig": cmd_eig,
    "svd": cmd_svd,
    "rank": cmd_rank,
    "verify-eig": cmd_verify_eig,
    "verify-right-eig": cmd_verify_right_eig,
    "solve": cmd_solve,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualdet", description="Dual complex and dual quaternion matrix algebra.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("suite", nargs="?", choices=sorted(SUITES), help="theorem suite for `check`")
    p.add_argument("--input", action="append", help="matrix JSON file (repeat for multiple operands)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=100, help="number of random instances for `check`")
    p.add_argument("--threads", type=int, default=1, help="worker threads for `check` (output is unaffected)")
    p.add_argument("--lambda", dest="lam", help="dual scalar as JSON, for verify-eig / verify-right-eig")
    p.add_argument("--resid", type=float, default=1e-9, help="residual bound for eigenpair verification")
    p.add_argument("--tol-zero", type=float, default=Tolerances.tau_zero)
    p.add_argument("--tol-deriv", type=float, default=Tolerances.tau_deriv)
    p.add_argument("--cluster-rel", type=float, default=Tolerances.cluster_rel)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    return p


def _config(args) -> dict:
    return {
        "command": args.command,
        "suite": args.suite,
        "inputs": [hashlib.sha256(open(p, "rb").read()).hexdigest()[:16] for p in (args.input or [])],
        "seed": args.seed,
        "n": args.n if args.command == "check" else None,
        "tolerances": {"tau_zero": args.tol_zero, "tau_deriv": args.tol_deriv, "cluster_rel": args.cluster_rel},
        "resid": args.resid,
    }


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {json.dumps(v)}" if _flat(v) else f"{pad}-\n{_text(v, indent + 1)}" for v in obj)
    return f"{pad}{json.dumps(obj)}"


def _flat(v) -> bool:
    return not isinstance(v, (dict, list)) or (isinstance(v, list) and all(not isinstance(x, dict) for x in v) and len(json.dumps(v)) < 100)


def run(args) -> tuple[dict, int]:
    """Execute a parsed command and return (report, exit code)."""
    if args.command == "check" and args.suite is None:
        raise ParseError(f"check needs a suite: one of {', '.join(sorted(SUITES))}")
    if args.command != "check" and args.suite is not None:
        raise ParseError(f"unexpected positional argument {args.suite!r}")
    if args.threads < 1:
        raise ParseError("--threads must be at least 1")
    tol = Tolerances(tau_zero=args.tol_zero, tau_deriv=args.tol_deriv, cluster_rel=args.cluster_rel)
    config = _config(args)
    with using(tol), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results, verdicts = COMMANDS[args.command](args)
    report = {
        "command": args.command,
        "config": config,
        "config_digest": hashlib.sha256(dumps(config).encode()).hexdigest()[:16],
        "version": __version__,
        "results": results,
        "verdicts_passed": all(v.passed for v in verdicts),
    }
    return report, EXIT_OK if report["verdicts_passed"] else EXIT_VERDICT


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = run(args)
    except (ParseError, ShapeError, OSError, ValueError) as exc:
        if isinstance(exc, NumericalPreconditionError):
            print(f"dualdet: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
        print(f"dualdet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalPreconditionError as exc:
        print(f"dualdet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DualAlgebraError as exc:
        print(f"dualdet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(report) if args.format == "json" else _text(report) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
