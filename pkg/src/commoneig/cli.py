"""Command-line interface: ``commoneig <command> ...``.

Reports go to stdout as JSON and a short summary to stderr.  Exit status is
0 on success, 1 when no result was found within the configured bounds (or a
report fails verification) and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import formats
from .classical import (
    char_poly,
    complex_eigenspaces,
    eigenpairs_complex,
    nonneg_spectral_decomposition,
    perron_eigenpair,
    poly_roots,
)
from .cones import MaxCone, project
from .dense import DEFAULT_TOL, eig_residual, make_eigenpair, normalize
from .domains import Domain
from .errors import CommonEigError, InputError
from .semigroup import (
    SemigroupSpec,
    classify,
    closure,
    common_eigenvector,
    layer_k,
)
from .tropical import eigenvector_in_cone, max_cycle_mean, spectral_decomposition

OK, NO_RESULT, BAD_INPUT = 0, 1, 2


class _Failure(Exception):
    pass


def _emit(report: dict, summary: str) -> None:
    sys.stdout.write(formats.dumps(report) + "\n")
    print(summary, file=sys.stderr)


def _generators(paths):
    mats = [formats.read_matrix(p) for p in paths]
    domains = {d for _, d in mats}
    if len(domains) != 1:
        raise InputError("all generator files must share one domain")
    return [m for m, _ in mats], domains.pop()


def _pair_report(command, pair, domain, extra=None) -> dict:
    out = {
        "status": "ok",
        "command": command,
        "domain": domain.value,
        "classification": None,
        "lambda": formats.serialize_scalar(pair.lam, domain),
        "vector": formats.serialize_vector(pair.vector, domain),
        "lambdas": [formats.serialize_scalar(pair.lam, domain)],
        "residuals": [float(pair.residual)],
        "method": pair.method,
        "pathway": [],
        "warnings": [],
    }
    out.update(extra or {})
    return out


def _eig(args):
    A, d = formats.read_matrix(args.matrix)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"{args.matrix}: eigenproblems need a square matrix")
    if d is Domain.MAX_TIMES:
        pair = eigenvector_in_cone(MaxCone.orthant(A.shape[0]), A, args.tol)
    elif d is Domain.NONNEG:
        try:
            pair = perron_eigenpair(A, args.tol, args.max_iter)
        except CommonEigError:
            lam, U = nonneg_spectral_decomposition(A, args.tol)[0]
            pair = make_eigenpair(A, U[:, 0], lam, "classical", d, args.tol)
    else:
        pair = eigenpairs_complex(A, args.tol)[0]
    report = _pair_report("eig", pair, d, {"tol": args.tol})
    return report, f"eigenvalue {pair.lam:.12g} ({pair.method}), residual {pair.residual:.2e}"


def _spectrum(args):
    A, d = formats.read_matrix(args.matrix)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"{args.matrix}: spectra need a square matrix")
    entries = []
    if d is Domain.MAX_TIMES:
        mean, cert = max_cycle_mean(A)
        for lam, cone in spectral_decomposition(A, args.tol):
            entries.append({
                "lambda": lam,
                "witness": formats.serialize_vector(cone.generators[:, 0], d),
                "eigencone_generators": cone.size,
            })
        extra = {"critical_cycle": list(cert.cycle) if cert else None}
    else:
        roots = poly_roots(char_poly(A), args.tol, args.max_iter)
        for lam, N in complex_eigenspaces(A, args.tol):
            mult = int(np.sum(np.abs(roots - lam) <= 1e-6 * max(1.0, abs(lam))))
            entries.append({
                "lambda": formats.serialize_scalar(lam, Domain.COMPLEX),
                "algebraic_multiplicity": mult,
                "geometric_multiplicity": int(N.shape[1]),
                "witness": formats.serialize_vector(normalize(N[:, 0]), Domain.COMPLEX),
            })
        extra = {"roots": [formats.serialize_scalar(r, Domain.COMPLEX) for r in roots]}
        if d is Domain.NONNEG:
            extra["nonneg_eigenvalues"] = [
                {"lambda": float(lam), "witness": formats.serialize_vector(normalize(U[:, 0]), d)}
                for lam, U in nonneg_spectral_decomposition(A, args.tol)
            ]
    report = {"status": "ok", "command": "spectrum", "domain": d.value, "eigenvalues": entries, **extra}
    return report, f"{len(entries)} distinct eigenvalue(s)"


def _project(args):
    G, d = formats.read_matrix(args.generators)
    y, dy = formats.read_vector(args.vector)
    if d is not Domain.MAX_TIMES or dy is not Domain.MAX_TIMES:
        raise InputError("projection is defined for max-times cones")
    if y.shape[0] != G.shape[0]:
        raise InputError(f"vector has length {y.shape[0]}, generators have {G.shape[0]} rows")
    W = MaxCone(G)
    x = project(W, y)
    report = {"status": "ok", "command": "project", "domain": d.value, "vector": formats.serialize_vector(x, d)}
    return report, "projection computed"


def _spec(args, gens, d):
    return SemigroupSpec(d, gens, args.closure_cap, args.word_cap, args.quasi_bound, args.tol)


def _common_eig(args):
    gens, d = _generators(args.generators)
    spec = _spec(args, gens, d)
    r = common_eigenvector(spec)
    if max(r.residuals) > args.tol:
        raise _Failure("report failed its own verification")
    report = {
        "status": "ok",
        "command": "common-eig",
        "domain": d.value,
        "classification": str(r.classification),
        "vector": formats.serialize_vector(r.vector, d),
        "lambdas": [formats.serialize_scalar(l, d) for l in r.lambdas],
        "residuals": [float(x) for x in r.residuals],
        "pathway": r.pathway,
        "warnings": r.warnings,
        "tol": args.tol,
    }
    return report, f"{r.classification}: common eigenvector found, max residual {max(r.residuals):.2e}"


def _semigroup(args):
    gens, d = _generators(args.generators)
    spec = _spec(args, gens, d)
    c = closure(spec)
    cls = classify(spec, c)
    report = {
        "status": "ok",
        "command": "semigroup",
        "domain": d.value,
        "elements": len(c),
        "truncated": c.truncated,
        "max_min_length": max(c.min_length),
        "level_sizes": [len(L) for L in c.levels],
        "layer_sizes": [len(layer_k(c, k)) for k in range(1, spec.quasi_bound + 1)],
        "classification": str(cls),
        "warnings": ["closure truncated: layers are lower bounds"] if c.truncated else [],
    }
    return report, f"{len(c)} element(s), {cls}" + (" (truncated)" if c.truncated else "")


def _verify(args):
    data = formats._load(args.report)
    gens, d = _generators(args.generators)
    try:
        rd = Domain.parse(data["domain"])
        v = formats.decode_vector(data["vector"], rd)
        lambdas = [formats.decode_scalar(l, rd) for l in data["lambdas"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{args.report}: malformed report ({exc})") from None
    if rd is not d:
        raise InputError("report domain differs from the generators' domain")
    if len(lambdas) != len(gens):
        raise InputError(f"report has {len(lambdas)} eigenvalue(s) for {len(gens)} generator(s)")
    if any(g.shape != (v.size, v.size) for g in gens):
        raise InputError("generator sizes do not match the report vector")
    tol = args.tol if args.tol is not None else float(data.get("tol", DEFAULT_TOL))
    if not np.any(v):
        raise _Failure("report vector is zero")
    residuals = [float(eig_residual(A, v, lam, d)) for A, lam in zip(gens, lambdas)]
    passed = data.get("status") == "ok" and max(residuals) <= tol
    report = {"status": "ok" if passed else "failed", "command": "verify", "residuals": residuals, "tol": tol}
    if not passed:
        _emit(report, f"verification FAILED: max residual {max(residuals):.2e} > {tol:g}")
        return None
    return report, f"verified: max residual {max(residuals):.2e}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commoneig", description="Common eigenvectors of max-times, nonnegative and complex matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def tol(q, default=DEFAULT_TOL):
        q.add_argument("--tol", type=float, default=default, help="verification tolerance (default %(default)s)")

    def caps(q):
        q.add_argument("--closure-cap", type=int, default=512)
        q.add_argument("--word-cap", type=int, default=12)
        q.add_argument("--quasi-bound", type=int, default=8)
        tol(q)

    q = sub.add_parser("eig", help="one eigenpair of a matrix")
    q.add_argument("matrix")
    tol(q)
    q.add_argument("--max-iter", type=int, default=10000)
    q.set_defaults(func=_eig)

    q = sub.add_parser("spectrum", help="all eigenvalues with witness vectors")
    q.add_argument("matrix")
    tol(q)
    q.add_argument("--max-iter", type=int, default=10000)
    q.set_defaults(func=_spectrum)

    q = sub.add_parser("project", help="greatest element of a max cone below a vector")
    q.add_argument("generators")
    q.add_argument("vector")
    q.set_defaults(func=_project)

    q = sub.add_parser("common-eig", help="common eigenvector of a generated semigroup")
    q.add_argument("generators", nargs="+")
    caps(q)
    q.set_defaults(func=_common_eig)

    q = sub.add_parser("semigroup", help="closure statistics and classification")
    q.add_argument("generators", nargs="+")
    caps(q)
    q.set_defaults(func=_semigroup)

    q = sub.add_parser("verify", help="recheck a report against its generators")
    q.add_argument("report")
    q.add_argument("generators", nargs="+")
    tol(q, None)
    q.set_defaults(func=_verify)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        out = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (CommonEigError, _Failure, IndexError) as exc:
        _emit({"status": "failed", "command": args.command, "error": str(exc)}, f"no result: {exc}")
        return NO_RESULT
    if out is None:
        return NO_RESULT
    _emit(*out)
    return OK


def main() -> None:
    sys.exit(run_cli())
