"""Command line interface.

Subcommands
  compile       matrix JSON -> compiled circuit JSON (letters + class
                parameters + global phase), verified against the input
  sample        reproducible batch of Haar-random SU(4) matrices
  benchmark     compile/execute/reconstruct cycle over a batch of random
                operations, reporting per-operation state fidelities
  process-tomo  full process tomography of one operation, reporting
                entanglement fidelity and mean state fidelity

Exit codes: 0 success, 2 bad arguments or unreadable input, 3 input matrix
not unitary within the input tolerance, 4 compiled circuit failed verification.

Every command is deterministic for a fixed --seed. Reports embed the seed,
a content hash of the inputs, and the tolerance configuration. The
SU4C_TOLERANCE environment variable overrides the default verification
threshold; --tolerance overrides both.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import replace

import numpy as np

from .circuits import lower_to_pulses
from .compiler import decompose, verify
from .config import DEFAULT_TOL, Tolerances, tolerances_from_env
from .experiment import (
    CALIBRATED_NOISE,
    TOMOGRAPHY_INPUT_LABELS,
    NoiseModel,
    exact_experiment,
    input_state,
    run_experiment,
)
from .haar import SeededRng, sample_su4
from .io import (
    circuit_to_obj,
    content_hash,
    dump_json,
    matrix_from_obj,
    matrix_to_obj,
    save_matrix,
)
from .linalg import is_unitary, nearest_unitary
from .tomography import (
    entanglement_fidelity,
    mean_fidelity_from_entanglement,
    mean_state_fidelity,
    process_matrix_of_unitary,
    reconstruct_process,
    reconstruct_state,
    state_fidelity,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_UNITARY = 3
EXIT_VERIFY = 4


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _resolve_tolerances(args) -> Tolerances:
    tol = tolerances_from_env(DEFAULT_TOL)
    if getattr(args, "tolerance", None) is not None:
        if args.tolerance <= 0:
            raise ValueError("--tolerance must be positive")
        tol = replace(tol, verify_distance=args.tolerance)
    return tol


def _resolve_noise(source: str) -> tuple[NoiseModel, dict]:
    """Noise model plus a source entry for the report."""
    if source == "zero":
        return NoiseModel(), {"source": "zero"}
    if source == "calibrated":
        return CALIBRATED_NOISE, {"source": "calibrated"}
    with open(source, "rb") as fp:
        raw = fp.read()
    obj = json.loads(raw.decode("utf-8"))
    if not isinstance(obj, dict):
        raise ValueError("noise JSON must be an object")
    allowed = {"overrotation_sigma", "depolarizing_per_g", "damping_per_circuit"}
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown noise fields {sorted(unknown)}")
    model = NoiseModel(**{k: float(v) for k, v in obj.items()})
    return model, {"source": "file", "hash": content_hash(raw)}


def _noise_obj(noise: NoiseModel) -> dict:
    return {
        "overrotation_sigma": noise.overrotation_sigma,
        "depolarizing_per_g": noise.depolarizing_per_g,
        "damping_per_circuit": noise.damping_per_circuit,
    }


def _tolerances_obj(tol: Tolerances) -> dict:
    return {k: v for k, v in dataclasses.asdict(tol).items()}


def _pulse_obj(pulse) -> dict:
    out = {"kind": pulse.kind, "target": pulse.target}
    if pulse.kind == "R":
        out["theta"] = pulse.theta
        out["phi"] = pulse.phi
    elif pulse.kind == "Rz":
        out["phiz"] = pulse.phiz
    return out


def _load_unitary(path: str, tol: Tolerances):
    """Read, gate, and project a user matrix; returns (matrix, hash)."""
    with open(path, "rb") as fp:
        raw = fp.read()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ValueError(f"cannot parse {path}: {exc}") from None
    m = matrix_from_obj(obj, (4, 4))
    if not is_unitary(m, tol.input_unitarity):
        return None, content_hash(raw)
    return nearest_unitary(m), content_hash(raw)


def _cmd_compile(args) -> int:
    try:
        tol = _resolve_tolerances(args)
        u, input_hash = _load_unitary(args.matrix, tol)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    if u is None:
        return _fail(
            EXIT_NOT_UNITARY,
            f"input matrix is not unitary within {tol.input_unitarity:g}",
        )
    params = decompose(u, tol)
    report = verify(u, params, tol)
    out = {
        "command": "compile",
        "input_hash": input_hash,
        "tolerances": _tolerances_obj(tol),
        "circuit": circuit_to_obj(params),
        "verify": {
            "distance": report.distance,
            "invariant_error": report.invariant_error,
            "passed": report.passed,
        },
    }
    if args.pulses:
        out["pulses"] = [_pulse_obj(p) for p in lower_to_pulses(params)]
    text = dump_json(out, args.out)
    if args.out is None:
        print(text)
    if not report.passed:
        return _fail(
            EXIT_VERIFY,
            f"verification failed: distance {report.distance:.3e} "
            f"exceeds {tol.verify_distance:g}",
        )
    return EXIT_OK


def _cmd_sample(args) -> int:
    rng = SeededRng(args.seed)
    matrices = [matrix_to_obj(sample_su4(rng)) for _ in range(args.n)]
    text = dump_json(matrices, args.out)
    if args.out is None:
        print(text)
    return EXIT_OK


def _run_one(u, label, noise, args, rng, tol):
    if args.exact_probabilities:
        return exact_experiment(u, label, tol)
    return run_experiment(u, label, noise, args.shots, rng, tol)


def _cmd_benchmark(args) -> int:
    try:
        tol = _resolve_tolerances(args)
        noise, noise_meta = _resolve_noise(args.noise)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    if args.exact_probabilities and not noise.is_zero:
        return _fail(EXIT_PARSE, "--exact-probabilities requires zero noise")

    header = {
        "command": "benchmark",
        "seed": args.seed,
        "n": args.n,
        "shots": args.shots,
        "method": args.method,
        "exact_probabilities": args.exact_probabilities,
        "noise": _noise_obj(noise),
        "noise_meta": noise_meta,
    }
    input_hash = content_hash(json.dumps(header, sort_keys=True))

    streams = SeededRng(args.seed).spawn(args.n + 1)
    # random assignment under the equal-usage constraint: every preparation
    # appears exactly n/16 times, in a seed-determined order
    labels = [
        label
        for _ in range(args.n // len(TOMOGRAPHY_INPUT_LABELS))
        for label in TOMOGRAPHY_INPUT_LABELS
    ]
    order = streams[-1].generator.permutation(args.n)
    operations = []
    fidelities = []
    for index, stream in enumerate(streams[: args.n]):
        label = labels[order[index]]
        u = sample_su4(stream, tol)
        records = _run_one(u, label, noise, args, stream, tol)
        est = reconstruct_state(records, args.method, tol)
        psi = u @ input_state(label)
        ideal = np.outer(psi, psi.conj())
        f = state_fidelity(est, ideal)
        fidelities.append(f)
        operations.append(
            {"index": index, "input_state": list(label), "fidelity": f}
        )

    arr = np.asarray(fidelities)
    out = dict(header)
    out.update(
        {
            "input_hash": input_hash,
            "tolerances": _tolerances_obj(tol),
            "operations": operations,
            "mean_fidelity": float(arr.mean()),
            "std_fidelity": float(arr.std()),
            "min_fidelity": float(arr.min()),
            "max_fidelity": float(arr.max()),
        }
    )
    text = dump_json(out, args.out)
    if args.out is None:
        print(text)
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fp:
            writer = csv.writer(fp)
            writer.writerow(["index", "qubit0_state", "qubit1_state", "fidelity"])
            for op in operations:
                writer.writerow(
                    [op["index"], op["input_state"][0], op["input_state"][1],
                     repr(op["fidelity"])]
                )
    return EXIT_OK


def _cmd_process_tomo(args) -> int:
    try:
        tol = _resolve_tolerances(args)
        noise, noise_meta = _resolve_noise(args.noise)
        u, input_hash = _load_unitary(args.unitary, tol)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    if u is None:
        return _fail(
            EXIT_NOT_UNITARY,
            f"input matrix is not unitary within {tol.input_unitarity:g}",
        )
    if args.exact_probabilities and not noise.is_zero:
        return _fail(EXIT_PARSE, "--exact-probabilities requires zero noise")

    streams = SeededRng(args.seed).spawn(len(TOMOGRAPHY_INPUT_LABELS))
    pairs = []
    for label, stream in zip(TOMOGRAPHY_INPUT_LABELS, streams):
        records = _run_one(u, label, noise, args, stream, tol)
        pairs.append((label, reconstruct_state(records, args.method, tol)))
    est = reconstruct_process(pairs, cp_projection=not args.no_cp_projection, tol=tol)
    ideal = process_matrix_of_unitary(u)
    f_ent = entanglement_fidelity(est, ideal)
    out = {
        "command": "process-tomo",
        "seed": args.seed,
        "shots": args.shots,
        "method": args.method,
        "exact_probabilities": args.exact_probabilities,
        "noise": _noise_obj(noise),
        "noise_meta": noise_meta,
        "input_hash": input_hash,
        "tolerances": _tolerances_obj(tol),
        "entanglement_fidelity": f_ent,
        "mean_state_fidelity": mean_state_fidelity(est, ideal),
        "mean_fidelity_from_entanglement": mean_fidelity_from_entanglement(f_ent),
    }
    text = dump_json(out, args.out)
    if args.out is None:
        print(text)
    if args.process_out is not None:
        save_matrix(est, args.process_out)
    return EXIT_OK


def _add_common(parser, shots_default: int) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--shots", type=int, default=shots_default,
        help="shots per measurement setting",
    )
    parser.add_argument(
        "--noise", default="zero",
        help="'zero', 'calibrated', or a path to a noise JSON file",
    )
    parser.add_argument(
        "--method", choices=("linear", "mle"), default="linear",
        help="state reconstruction method",
    )
    parser.add_argument(
        "--exact-probabilities", action="store_true",
        help="skip sampling and feed exact Born probabilities (zero noise only)",
    )
    parser.add_argument("--tolerance", type=float, default=None,
                        help="verification distance threshold")
    parser.add_argument("--out", default=None, help="write report JSON here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su4c",
        description="two-qubit gate compiler and verification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="decompose a 4x4 unitary")
    p.add_argument("matrix", help="path to the matrix JSON file")
    p.add_argument("--pulses", action="store_true",
                   help="include the lowered pulse sequence")
    p.add_argument("--tolerance", type=float, default=None,
                   help="verification distance threshold")
    p.add_argument("--out", default=None, help="write report JSON here")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("sample", help="Haar-random SU(4) batch")
    p.add_argument("--n", type=int, default=1, help="number of samples")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--out", default=None, help="write the JSON array here")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser(
        "benchmark",
        help="fidelity benchmark over random operations",
    )
    p.add_argument("--n", type=int, default=160,
                   help="number of operations (multiple of 16)")
    _add_common(p, shots_default=100)
    p.add_argument("--csv", default=None,
                   help="also write per-operation fidelities as CSV")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("process-tomo", help="process tomography of one unitary")
    p.add_argument("--unitary", required=True, help="path to the matrix JSON file")
    _add_common(p, shots_default=1000)
    p.add_argument("--no-cp-projection", action="store_true",
                   help="skip the positivity projection of the process matrix")
    p.add_argument("--process-out", default=None,
                   help="write the reconstructed process matrix here")
    p.set_defaults(func=_cmd_process_tomo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "benchmark":
        if args.n <= 0 or args.n % 16 != 0:
            parser.error("--n must be a positive multiple of 16")
        if args.shots <= 0:
            parser.error("--shots must be positive")
    if args.command == "process-tomo" and args.shots <= 0:
        parser.error("--shots must be positive")
    if args.command == "sample" and args.n <= 0:
        parser.error("--n must be positive")
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
