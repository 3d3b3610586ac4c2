"""Command-line front end: JSON matrix files in, JSON reports out.

Exit codes: 0 success; 2 invalid input file; 3 not Hermitian; 4 infimum is
-infinity (verdict still printed); 5 empty feasible set; 6 minimizer not
attainable; 7 no witness constructible; 8 certification failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .definiteness import definiteness_interval
from .errors import (
    CertificationFailedError,
    EmptyFeasibleSetError,
    InvalidSpecError,
    NoWitnessConstructibleError,
    NotAttainableError,
    NotHermitianError,
    NotSquareError,
)
from .genpairs import assemble, spec_from_json
from .matcore import (
    ToleranceSet,
    inertia,
    load_pair,
    load_problem,
    matrix_to_json,
    save_pair,
)
from .spectral import deflate_common_nullspace, typed_spectrum
from .tracemin import (
    FINITE,
    NEG_INFINITE,
    FeasibleSampler,
    feasibility_residual,
    infimum,
    minimizer,
    pair_semidefiniteness,
)
from .witness import build_witness, certify_unbounded

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NOT_HERMITIAN = 3
EXIT_NEG_INFINITE = 4
EXIT_EMPTY_FEASIBLE = 5
EXIT_NOT_ATTAINABLE = 6
EXIT_NO_WITNESS = 7
EXIT_CERTIFICATION = 8


def _tols_from_args(args) -> ToleranceSet:
    return ToleranceSet(
        herm_tol=args.tol_herm,
        rank_tol=args.tol_rank,
        psd_tol=args.tol_psd,
        type_tol=args.tol_type,
        feas_tol=args.tol_feas,
    )


def _finite(x):
    if x is None:
        return None
    x = float(x)
    if np.isposinf(x):
        return "inf"
    if np.isneginf(x):
        return "-inf"
    return x


def _interval(itv):
    return None if itv is None else [_finite(itv[0]), _finite(itv[1])]


def _spectrum_obj(spec):
    return {
        "pos": [
            {"value": e.value, "b_form": e.b_form, "jordan_pair": e.jordan_pair}
            for e in spec.pos
        ],
        "neg": [
            {"value": e.value, "b_form": e.b_form, "jordan_pair": e.jordan_pair}
            for e in spec.neg
        ],
        "deflated_dims": spec.deflated_dims,
        "infinite_definite_sign": spec.infinite_definite_sign,
        "complex_values": [[z.real, z.imag] for z in spec.complex_values],
    }


def _definiteness_obj(rep):
    return {
        "is_psd_pair": rep.is_psd_pair,
        "is_nsd_pair": rep.is_nsd_pair,
        "psd_interval": _interval(rep.psd_interval),
        "nsd_interval": _interval(rep.nsd_interval),
        "max_fmin": rep.max_fmin,
        "argmax_shift": rep.argmax_shift,
        "bracket_overflow": rep.bracket_overflow,
    }


def _emit(report, args, code=EXIT_OK, summary_lines=()):
    body = json.dumps(report, indent=2, sort_keys=True)
    if not args.json:
        for line in summary_lines:
            print(line)
    print(body)
    return code


def _base_report(command, args):
    return {
        "command": command,
        "version": __version__,
        "seed": args.seed,
        "tolerances": {
            "herm_tol": args.tol_herm,
            "rank_tol": args.tol_rank,
            "psd_tol": args.tol_psd,
            "type_tol": args.tol_type,
            "feas_tol": args.tol_feas,
        },
    }


def cmd_analyze(args) -> int:
    tols = _tols_from_args(args)
    pair = load_pair(args.pair_file, tols.herm_tol)
    defl = deflate_common_nullspace(pair, tols.rank_tol)
    spec = typed_spectrum(defl.reduced, tols, deflated_dims=defl.deflated_dims)
    verdict = pair_semidefiniteness(pair, tols)
    rep_def = definiteness_interval(pair, tols)
    report = _base_report("analyze", args)
    report.update(
        {
            "inertia_A": list(inertia(pair.A, tols.rank_tol).as_tuple()),
            "inertia_B": list(inertia(pair.B, tols.rank_tol).as_tuple()),
            "is_psd_pair": verdict.is_psd,
            "is_nsd_pair": verdict.is_nsd,
            "definiteness": _definiteness_obj(rep_def),
            "typed_spectrum": _spectrum_obj(spec),
        }
    )
    lines = [
        f"inertia(A) = {report['inertia_A']}, inertia(B) = {report['inertia_B']}",
        f"psd pair: {verdict.is_psd}, nsd pair: {verdict.is_nsd}",
    ]
    return _emit(report, args, EXIT_OK, lines)


def _infimum_obj(result):
    obj = {
        "verdict": result.verdict,
        "value": result.value,
        "sign_case": result.sign_case,
        "reason": result.reason,
        "reason_detail": result.reason_detail,
        "attainable": result.attainable,
        "terms": [
            {
                "eig_type": t.eig_type,
                "lambda_hat": t.lam_hat,
                "lambda": t.lam,
                "product": t.product,
            }
            for t in result.terms
        ],
    }
    if result.excluded is not None:
        obj["excluded"] = {
            "which": result.excluded.which,
            "constant": result.excluded.constant,
            "mu": result.excluded.mu,
        }
    if result.properness is not None:
        obj["properness"] = {
            "is_proper": result.properness.is_proper,
            "case_label": result.properness.case_label,
            "d_plus": result.properness.d_plus,
            "d_minus": result.properness.d_minus,
        }
    return obj


def cmd_infimum(args) -> int:
    tols = _tols_from_args(args)
    problem = load_problem(args.problem_file, tols)
    result = infimum(problem, tols)
    report = _base_report("infimum", args)
    report["infimum"] = _infimum_obj(result)
    code = EXIT_NEG_INFINITE if result.verdict == NEG_INFINITE else EXIT_OK
    lines = [f"verdict: {result.verdict}"]
    if result.value is not None:
        lines.append(f"value: {result.value!r}")
    if result.reason:
        lines.append(f"reason: {result.reason}")
    return _emit(report, args, code, lines)


def cmd_minimize(args) -> int:
    tols = _tols_from_args(args)
    problem = load_problem(args.problem_file, tols)
    result = infimum(problem, tols)
    if result.verdict == NEG_INFINITE:
        report = _base_report("minimize", args)
        report["infimum"] = _infimum_obj(result)
        return _emit(report, args, EXIT_NEG_INFINITE, [f"verdict: {result.verdict}"])
    X, achieved = minimizer(problem, tols)
    residual = feasibility_residual(problem, X)
    with open(args.out_file, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(X), fh)
    report = _base_report("minimize", args)
    report["infimum"] = _infimum_obj(result)
    report["minimizer"] = {
        "achieved": achieved,
        "feasibility_residual": residual,
        "out_file": args.out_file,
    }
    lines = [f"achieved: {achieved!r} (residual {residual:.3e})"]
    return _emit(report, args, EXIT_OK, lines)


def cmd_witness(args) -> int:
    tols = _tols_from_args(args)
    problem = load_problem(args.problem_file, tols)
    result = infimum(problem, tols)
    report = _base_report("witness", args)
    report["infimum"] = _infimum_obj(result)
    if result.verdict != NEG_INFINITE:
        report["witness"] = None
        return _emit(report, args, EXIT_OK, [f"verdict: {result.verdict}; no witness needed"])
    family = build_witness(problem, result, tols)
    cert = certify_unbounded(family, args.threshold, args.tmax)
    report["witness"] = {
        "kind": family.kind,
        "slope": family.slope,
        "offset": family.offset,
        "trend_power": family.trend_power,
        "certification": {
            "t": cert.t,
            "trace": cert.trace_value,
            "feasibility_residual": cert.feas_residual,
            "threshold": cert.threshold,
        },
    }
    lines = [
        f"witness {family.kind}: slope {family.slope!r}",
        f"certified at t = {cert.t!r}: trace {cert.trace_value!r}",
    ]
    return _emit(report, args, EXIT_OK, lines)


def cmd_verify(args) -> int:
    tols = _tols_from_args(args)
    problem = load_problem(args.problem_file, tols)
    result = infimum(problem, tols)
    sampler = FeasibleSampler(problem, tols)
    traces = np.empty(args.samples)
    worst_residual = 0.0
    A = problem.pair.A.entries
    Ah = problem.hat_pair.A.entries
    for k in range(args.samples):
        rng = np.random.default_rng([args.seed, k])
        X = sampler.sample(args.spread, rng)
        traces[k] = float(np.real(np.trace(Ah @ X.conj().T @ A @ X)))
        worst_residual = max(worst_residual, feasibility_residual(problem, X))
    report = _base_report("verify", args)
    report["infimum"] = _infimum_obj(result)
    stats = {
        "samples": args.samples,
        "spread": args.spread,
        "min_trace": float(np.min(traces)),
        "mean_trace": float(np.mean(traces)),
        "max_feasibility_residual": worst_residual,
    }
    if result.value is not None:
        gap = float(np.min(traces)) - result.value
        stats["gap"] = gap
        stats["lower_bound_ok"] = bool(
            gap >= -1e-6 * (1.0 + abs(result.value))
        )
    report["sampling"] = stats
    lines = [
        f"min sampled trace: {stats['min_trace']!r}",
        f"mean sampled trace: {stats['mean_trace']!r}",
    ]
    return _emit(report, args, EXIT_OK, lines)


def cmd_gen(args) -> int:
    with open(args.spec_file, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    specs = spec_from_json(obj)
    seed = obj.get("seed", args.seed)
    cap = obj.get("cap", 10.0)
    pair, truth = assemble(specs, scramble_seed=seed, conditioning_cap=cap)
    save_pair(args.out_pair_file, pair)
    truth_obj = {
        "inertia_B": list(truth.inertia_B.as_tuple()),
        "pos": list(truth.pos),
        "neg": list(truth.neg),
        "jordan_values": list(truth.jordan_values),
        "complex_values": [[z.real, z.imag] for z in truth.complex_values],
        "infinite_signs": list(truth.infinite_signs),
        "psd": truth.psd,
        "nsd": truth.nsd,
        "diagonalizable": truth.diagonalizable,
        "coupled": truth.coupled,
    }
    sidecar = args.out_pair_file + ".truth.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(truth_obj, fh, indent=2, sort_keys=True)
    report = _base_report("gen", args)
    report["scramble_seed"] = seed
    report["generated"] = {
        "pair_file": args.out_pair_file,
        "truth_file": sidecar,
        "order": pair.n,
        "truth": truth_obj,
    }
    return _emit(report, args, EXIT_OK, [f"wrote {args.out_pair_file} (order {pair.n})"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pencil-tracemin",
        description="Trace minimization over Hermitian matrix pairs",
    )
    parser.add_argument("--json", action="store_true", help="report-only output")
    parser.add_argument(
        "--seed",
        type=int,
        default=int(os.environ.get("PENCIL_TRACEMIN_SEED", "0")),
        help="sampling seed (default: PENCIL_TRACEMIN_SEED or 0)",
    )
    parser.add_argument("--tol-herm", type=float, default=1e-10)
    parser.add_argument("--tol-rank", type=float, default=1e-10)
    parser.add_argument("--tol-psd", type=float, default=1e-8)
    parser.add_argument("--tol-type", type=float, default=1e-7)
    parser.add_argument("--tol-feas", type=float, default=1e-8)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="inertia, definiteness, typed spectrum of a pair")
    p.add_argument("pair_file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("infimum", help="finiteness verdict and closed-form value")
    p.add_argument("problem_file")
    p.set_defaults(func=cmd_infimum)

    p = sub.add_parser("minimize", help="construct an optimal X")
    p.add_argument("problem_file")
    p.add_argument("out_file")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("witness", help="certify a -infinity verdict")
    p.add_argument("problem_file")
    p.add_argument("--threshold", type=float, default=-1e6)
    p.add_argument("--tmax", type=float, default=1e4)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="Monte-Carlo feasible sampling check")
    p.add_argument("problem_file")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--spread", type=float, default=1.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a pair from canonical block specs")
    p.add_argument("spec_file")
    p.add_argument("out_pair_file")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError, InvalidSpecError, NotSquareError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotHermitianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_HERMITIAN
    except EmptyFeasibleSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_FEASIBLE
    except NotAttainableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ATTAINABLE
    except NoWitnessConstructibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except CertificationFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION


if __name__ == "__main__":
    sys.exit(main())
