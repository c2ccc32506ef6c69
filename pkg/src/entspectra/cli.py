"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 distillable
(only with ``analyze --fail-on-distillable``). ``verify-theorem1`` exits 0
iff no violation was found.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .campaign import ENSEMBLES, run_campaign
from .criteria import build_theorem1_witness, distillability_verdict, spectra, verify_witness
from .errors import InvalidInputError, NumericalError, ReductionViolatedError, WitnessInvalidError
from .states import (
    RNG_ALGORITHM,
    BipartiteState,
    bell_state,
    isotropic_state,
    maximally_correlated_state,
    mems_rank2_state,
    pure_state,
    random_density_matrix,
    random_separable_state,
)
from .statefile import dump_state, dumps_json, load_state

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_DISTILLABLE = 4

FAMILIES = ("isotropic", "maxcorr", "mems", "random", "separable", "bell", "pure")


def _dims(text):
    try:
        a, b = text.lower().split("x")
        da, db = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimensions must look like NxM, got {text!r}") from None
    if da < 1 or db < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be positive, got {text!r}")
    return da, db


def _json_arg(text):
    """Inline JSON, or ``@path`` to read JSON from a file."""
    try:
        if text.startswith("@"):
            text = Path(text[1:]).read_text(encoding="utf-8")
        return json.loads(text)
    except OSError as exc:
        raise argparse.ArgumentTypeError(f"cannot read {text[1:]}: {exc.strerror}") from None


def _complex_array(obj, ndim, what):
    """Numbers, or ``[re, im]`` pairs in place of numbers."""
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInputError(f"--{what} must be a rectangular array of numbers", "BAD_INPUT") from None
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == ndim:
        return arr.astype(np.complex128)
    raise InvalidInputError(f"--{what} has shape {arr.shape}", "BAD_INPUT")


def _add_tolerances(p):
    p.add_argument("--tol-psd", type=float, default=1e-9, help="relative PSD tolerance (default: 1e-9)")
    p.add_argument("--tol-major", type=float, default=1e-9, help="partial-sum tolerance (default: 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entspectra",
        description="Reduction and majorization criteria for bipartite quantum states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run both criteria on a state file")
    an.add_argument("state_pos", nargs="?", metavar="STATE", help="state file (same as --state)")
    an.add_argument("--state", help="path to a JSON state file")
    an.add_argument("--format", choices=("text", "json"), default="text")
    an.add_argument("--witness", action="store_true", help="include majorization-witness details")
    an.add_argument("--fail-on-distillable", action="store_true", help="exit 4 if majorization is violated")
    an.add_argument("--reproducible", action="store_true", help="omit the timestamp from the report")
    an.add_argument("--out", help="write the report here instead of stdout")
    _add_tolerances(an)

    vt = sub.add_parser("verify-theorem1", help="seeded check that reduction implies majorization")
    vt.add_argument("--dims", type=_dims, default=(2, 2), help="local dimensions NxM (default: 2x2)")
    vt.add_argument("--trials", type=int, default=100, help="number of trials / scan points (default: 100)")
    vt.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed+i (default: 0)")
    vt.add_argument("--ensemble", choices=ENSEMBLES, default="separable")
    vt.add_argument("--format", choices=("text", "json"), default="text")
    vt.add_argument("--no-witness", action="store_true", help="skip witness construction")
    _add_tolerances(vt)

    ge = sub.add_parser("generate", help="write a state file for a named family")
    ge.add_argument("--family", choices=FAMILIES, required=True)
    ge.add_argument("--d", type=int, default=2, help="local dimension for isotropic (default: 2)")
    ge.add_argument("--dims", type=_dims, default=(2, 2), help="NxM for random/separable/pure (default: 2x2)")
    ge.add_argument("--fidelity", type=float, help="isotropic fidelity F, or the MEMS weight F")
    ge.add_argument("--alpha", type=_json_arg, help="maxcorr coefficient matrix as JSON or @file")
    ge.add_argument("--amplitudes", type=_json_arg, help="pure-state amplitudes as JSON or @file")
    ge.add_argument("--rank", type=int, help="rank for --family random (default: full)")
    ge.add_argument("--terms", type=int, default=3, help="mixture terms for --family separable (default: 3)")
    ge.add_argument("--seed", type=int, default=0, help="seed for random families (default: 0)")
    ge.add_argument("--out", help="output path (default: stdout)")
    return parser


def _generate(args) -> tuple[BipartiteState, dict]:
    fam = args.family
    meta = {"family": fam}
    if fam == "bell":
        return bell_state(), meta
    if fam == "isotropic":
        if args.fidelity is None:
            raise InvalidInputError("--family isotropic needs --fidelity", "BAD_FIDELITY")
        meta.update(d=args.d, fidelity=args.fidelity)
        return isotropic_state(args.d, args.fidelity), meta
    if fam == "mems":
        f = 0.5 if args.fidelity is None else args.fidelity
        meta.update(fidelity=f)
        return mems_rank2_state(f), meta
    if fam == "maxcorr":
        if args.alpha is not None:
            alpha = _complex_array(args.alpha, 2, "alpha")
        else:
            alpha = random_density_matrix(args.d, args.d, args.seed)
            meta.update(seed=args.seed, rng=RNG_ALGORITHM)
        return maximally_correlated_state(alpha), meta
    if fam == "pure":
        if args.amplitudes is None:
            raise InvalidInputError("--family pure needs --amplitudes", "BAD_LENGTH")
        return pure_state(_complex_array(args.amplitudes, 1, "amplitudes"), *args.dims), meta
    da, db = args.dims
    meta.update(seed=args.seed, rng=RNG_ALGORITHM)
    if fam == "random":
        rank = args.rank or da * db
        meta.update(rank=rank)
        return BipartiteState(da, db, random_density_matrix(da * db, rank, args.seed)), meta
    meta.update(terms=args.terms)
    return random_separable_state(da, db, args.terms, args.seed), meta


def _analysis(state, meta, args, path):
    rep = distillability_verdict(state, args.tol_psd, args.tol_major)
    lab, la, lb = spectra(state)
    doc = {
        "tool": "entspectra",
        "version": __version__,
        "input": {"path": str(path), "dim_a": state.dim_a, "dim_b": state.dim_b, "meta": meta},
        "criteria": rep.to_dict(),
        "spectra": {"ab": lab.tolist(), "a": la.tolist(), "b": lb.tolist()},
        "tolerances": {"psd": args.tol_psd, "major": args.tol_major},
        "seed": meta.get("seed"),
    }
    if args.witness:
        if rep.reduction_a_holds:
            try:
                w = build_theorem1_witness(state, args.tol_psd)
                verify_witness(w, state, args.tol_major)
                doc["witness"] = {"status": "verified", **w.summary()}
            except ReductionViolatedError:
                doc["witness"] = {"status": "reduction_violated"}
            except WitnessInvalidError as exc:
                doc["witness"] = {"status": "invalid", "failed_check": exc.check}
        else:
            doc["witness"] = {"status": "reduction_violated"}
    if not args.reproducible:
        doc["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return rep, doc


def _fmt_vec(v):
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


def _text_report(doc):
    c = doc["criteria"]
    lines = [
        f"state: {doc['input']['path']}  dims {doc['input']['dim_a']}x{doc['input']['dim_b']}",
        f"spectrum AB: {_fmt_vec(doc['spectra']['ab'])}",
        f"spectrum A:  {_fmt_vec(doc['spectra']['a'])}",
        f"spectrum B:  {_fmt_vec(doc['spectra']['b'])}",
    ]
    for side in "ab":
        holds = c[f"reduction_{side}_holds"]
        lines.append(
            f"reduction {side.upper()}: {'holds' if holds else 'VIOLATED'} "
            f"(min eigenvalue {c[f'reduction_{side}_min_eig']:.6g})"
        )
    for side in "ab":
        v = c[f"majorization_{side}"]
        status = "holds" if v["holds"] else f"VIOLATED at k={v['first_failure']} ({v['reason']})"
        lines.append(f"majorization {side.upper()}: {status}; margins {_fmt_vec(v['margins'])}")
    lines.append(f"distillable (majorization violated): {'yes' if c['distillable_by_majorization'] else 'no verdict'}")
    if "witness" in doc:
        w = doc["witness"]
        if w["status"] == "verified":
            lines.append(
                f"witness: verified; ||C|| {w['contraction_norm']:.6g}, max row sum {w['max_row_sum']:.6g}, "
                f"max col sum {w['max_col_sum']:.6g}, linear residual {w['residual_linear']:.3g}"
            )
        else:
            lines.append(f"witness: {w['status']}")
    lines.append(f"tolerances: psd {doc['tolerances']['psd']:g}, major {doc['tolerances']['major']:g}")
    return "\n".join(lines) + "\n"


def _text_summary(s):
    keys = [
        "checked",
        "reduction_a_held",
        "reduction_b_held",
        "majorization_a_held",
        "majorization_b_held",
        "witness_verified",
        "distillable_by_majorization",
        "violations",
    ]
    lines = [f"ensemble {s['ensemble']}  dims {s['dims']}  trials {s['trials']}  seed {s['seed']}"]
    lines += [f"  {k}: {s[k]}" for k in keys]
    if "transition" in s:
        t = s["transition"]
        lines.append(
            f"  transition: holds up to F={t['last_holding']}, fails from F={t['first_failing']} "
            f"(closed form 1/d = {s['threshold_closed_form']:.6g}); mismatches {s['closed_form_mismatches']}"
        )
    lines.append(f"  max ||C||: {s['max']['contraction_norm']:.17g}")
    lines.append(f"  max linear residual: {s['max']['residual_linear']:.3g}")
    lines.append(f"result: {'OK' if s['violations'] == 0 else 'VIOLATIONS FOUND'}")
    return "\n".join(lines) + "\n"


def _emit(text, out=None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    path = args.state or args.state_pos
    if not path:
        raise InvalidInputError("analyze needs --state PATH", "BAD_STATE_FILE")
    state, meta = load_state(path)
    rep, doc = _analysis(state, meta, args, path)
    _emit(dumps_json(doc) if args.format == "json" else _text_report(doc), args.out)
    if args.fail_on_distillable and rep.distillable_by_majorization:
        return EXIT_DISTILLABLE
    return EXIT_OK


def cmd_verify_theorem1(args) -> int:
    summary = run_campaign(
        args.ensemble, args.dims, args.trials, args.seed, args.tol_psd, args.tol_major, not args.no_witness
    )
    _emit(dumps_json(summary) if args.format == "json" else _text_summary(summary))
    return EXIT_OK if summary["violations"] == 0 else 1


def cmd_generate(args) -> int:
    state, meta = _generate(args)
    text = dump_state(state, meta=meta)
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "verify-theorem1": cmd_verify_theorem1, "generate": cmd_generate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidInputError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
