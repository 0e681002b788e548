"""Command-line entry point: ``qperceptron {train,verify-arith,appendix,export}``.

Exit status: 0 ran to completion (negative results included), 1 input error,
2 capacity exceeded, 3 internal invariant violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from itertools import product
from pathlib import Path

from . import __version__
from .circuit import RegisterLayout, simulate, stats
from .dataset import load_dataset
from .exceptions import (
    CapacityError,
    DatasetError,
    EncodingError,
    InvariantViolation,
    NoSolutionError,
    StructuralError,
)
from .grover import GroverRunner, grover_circuit, optimal_iterations, train
from .oracle import oracle_circuit
from .qasm import export_qasm
from .qft_arith import (
    FixedPointSpec,
    adder_circuit,
    complement_code,
    decode_complement,
    from_complement_circuit,
    multiplier_circuit,
    to_complement_circuit,
)
from .statevector import index_to_bits, probability
from .version_space import (
    COMPARISON_COLUMNS,
    BandQuery,
    brute_force_separators,
    comparison_table,
    monte_carlo_band,
)

log = logging.getLogger("qperceptron")

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_INVARIANT = 0, 1, 2, 3
MAX_VERIFY_T = 4
PUBLISHED_MEASURED = 0.907
PUBLISHED_THEORETICAL = 0.908


def _iterations(value: str):
    if value == "auto":
        return value
    try:
        j = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a non-negative integer or 'auto'") from None
    if j < 0:
        raise argparse.ArgumentTypeError("iterations must be non-negative")
    return j


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _float_list(value: str) -> list[float]:
    return [float(v) for v in value.split(",") if v.strip()]


def _int_list(value: str) -> list[int]:
    return [int(v) for v in value.split(",") if v.strip()]


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="dataset JSON path, or builtin:d4")
    p.add_argument("--bits", type=_positive, default=1, help="magnitude bits per entry")
    p.add_argument("--iterations", type=_iterations, default="auto")
    p.add_argument("--mode", choices=("reuse", "per-sample"), default="reuse")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qperceptron", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run Grover training and write a report")
    _add_dataset_args(p)
    p.add_argument("--shots", type=_positive, default=300)
    p.add_argument("--max-restarts", type=int, default=20)
    p.add_argument("--backend", choices=("circuit", "compiled"), default="circuit")
    p.add_argument("--out", type=Path, help="directory for report.json and histogram.csv")

    p = sub.add_parser("verify-arith", help="exhaustively check the arithmetic circuits")
    p.add_argument("--max-t", type=_positive, default=3)

    p = sub.add_parser("appendix", help="uniform vs Gaussian band probabilities as CSV")
    p.add_argument("--gammas", type=_float_list, default=[round(0.1 * i, 1) for i in range(1, 11)])
    p.add_argument("--dims", type=_int_list, default=[1, 3, 5, 7, 9])
    p.add_argument("--mc-samples", type=int, default=100_000, help="0 disables Monte Carlo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="CSV path (default: stdout)")

    p = sub.add_parser("export", help="write the Grover circuit as OpenQASM 2.0")
    _add_dataset_args(p)
    p.add_argument("--out", type=Path, help="QASM path (default: stdout, report to stderr)")
    return parser


# ---------------------------------------------------------------- commands


def _config_echo(args) -> dict:
    return {k.replace("_", "-"): (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
            if k not in ("verbose",)}


def cmd_train(args) -> int:
    d = load_dataset(args.dataset)
    spec = FixedPointSpec(args.bits)
    bundle = oracle_circuit(d, spec, args.mode)
    runner = GroverRunner(bundle, backend=args.backend)
    result = train(
        d, spec, iterations=args.iterations, shots=args.shots, seed=args.seed,
        max_restarts=args.max_restarts, runner=runner,
    )
    N = bundle.num_codes
    marked = sorted(runner.marked)
    first = result.rounds[0] if result.rounds else None
    hist = result.histogram
    peak_code, peak_count = hist.most_common()[0]
    # replay the first run on the weight register alone to get the exact peak probability
    replay = GroverRunner(bundle, backend="compiled", marked=runner.marked)
    first_state, _ = replay.run(first["iterations"], trace=False)
    peak_prob = probability(first_state, replay.register, peak_code)
    sigma = (peak_prob * (1 - peak_prob) / hist.total_shots) ** 0.5
    report = {
        "version": __version__,
        "config": _config_echo(args),
        "dataset": {"samples": d.K, "features": d.n},
        "candidates": N,
        "marked_codes": marked,
        "weight": list(result.weight) if result.weight else None,
        "weight_code": result.weight_code,
        "verified": result.verified,
        "oracle_calls": result.oracle_calls,
        "shots_used": result.shots_used,
        "rounds": result.rounds,
        "marked_probability_trace": result.trace,
        "histogram_peak": {
            "code": peak_code,
            "weight": list(bundle.decode(peak_code)),
            "frequency": peak_count / hist.total_shots,
            "simulated_probability": peak_prob,
            "sigma": sigma,
            "iterations": first["iterations"],
        },
        "published_result": {"measured": PUBLISHED_MEASURED, "theoretical": PUBLISHED_THEORETICAL},
        "qubits": bundle.qubit_count,
        "oracle_gate_stats": bundle.gate_stats.as_dict(),
    }
    text = json.dumps(report, indent=2)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "report.json").write_text(text + "\n")
        (args.out / "histogram.csv").write_text(histogram_csv(hist, bundle))
        log.info("wrote %s", args.out)
    else:
        print(text)
    return EXIT_OK


def histogram_csv(hist, bundle) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["code", "weight", "count", "frequency"])
    width = len(bundle.weight_register)
    for code in range(bundle.num_codes):
        bits = index_to_bits(code, width)
        count = hist.entries.get(bits, 0)
        w.writerow([bits, " ".join(map(str, bundle.decode(code))), count, count / hist.total_shots])
    return buf.getvalue()


def _basis_output(circuit, index: int) -> int:
    state = simulate(circuit, index)
    amps = state.amplitudes
    out = int(abs(amps).argmax())
    if abs(abs(amps[out]) - 1.0) > 1e-9:
        raise InvariantViolation(f"basis input {index} produced a superposition")
    return out


def verify_arithmetic(max_t: int) -> tuple[list[str], list[str]]:
    """Run every exhaustive check up to ``max_t``; returns (summary lines, failures)."""
    if max_t > MAX_VERIFY_T:
        raise CapacityError(f"verify-arith supports t <= {MAX_VERIFY_T}")
    lines, failures = [], []
    for t in range(1, max_t + 1):
        size = 1 << t
        lay = RegisterLayout.contiguous([("src", t), ("acc", t)])
        add = adder_circuit(lay, lay["src"], lay["acc"])
        ok = 0
        for s, a in product(range(size), repeat=2):
            got = _basis_output(add, s | a << t)
            want = s | ((a + s) % size) << t
            ok += got == want
            if got != want:
                failures.append(f"adder t={t}: acc={a} src={s} gave {got >> t}")
        adder_line = f"adder: {ok}/{size * size} ok"

        lay = RegisterLayout.contiguous([("a", t), ("b", t), ("p", 2 * t)])
        mul = multiplier_circuit(lay, lay["a"], lay["b"], lay["p"])
        ok = 0
        for a, b in product(range(size), repeat=2):
            got = _basis_output(mul, a | b << t)
            want = a | b << t | (a * b) << 2 * t
            ok += got == want
            if got != want:
                failures.append(f"multiplier t={t}: {a}*{b} gave {got >> 2 * t}")
        mul_line = f"multiplier: {ok}/{size * size} ok"

        m = t + 1
        comp_fail = _check_complement(m)
        failures += comp_fail
        comp_line = "complement: all ok" if not comp_fail else f"complement: {len(comp_fail)} failures"
        lines.append(f"t={t}: {adder_line}, {mul_line}, {comp_line} (m={m})")
    return lines, failures


def _check_complement(m: int) -> list[str]:
    lay = RegisterLayout.contiguous([("sign", 1), ("reg", m)])
    to_c = to_complement_circuit(lay, lay["sign"][0], lay["reg"])
    from_c = from_complement_circuit(lay, lay["sign"][0], lay["reg"])
    fails = []
    limit = (1 << (m - 1)) - 1
    for v in range(-limit, limit + 1):
        for sign in ((0, 1) if v == 0 else ((1,) if v < 0 else (0,))):
            out = _basis_output(to_c, sign | abs(v) << 1)
            if out >> 1 != complement_code(v, m) or out & 1 != sign:
                fails.append(f"complement m={m}: value {v} gave code {out >> 1}")
    for code in range(1 << m):
        out = _basis_output(from_c, code << 1)
        val = decode_complement(code, m)
        if out & 1 != (code >> (m - 1)) or out >> 1 != abs(val) % (1 << m):
            fails.append(f"uncomplement m={m}: code {code} gave {out}")
    for x, y in product(range(-limit, limit + 1), repeat=2):
        if abs(x + y) > limit:
            continue
        cx = _basis_output(to_c, (x < 0) | abs(x) << 1) >> 1
        cy = _basis_output(to_c, (y < 0) | abs(y) << 1) >> 1
        if (cx + cy) % (1 << m) != complement_code(x + y, m):
            fails.append(f"homomorphism m={m}: {x}+{y}")
    return fails


def cmd_verify_arith(args) -> int:
    lines, failures = verify_arithmetic(args.max_t)
    for line in lines:
        print(line)
    for f in failures:
        print("MISMATCH", f)
    return EXIT_INVARIANT if failures else EXIT_OK


def cmd_appendix(args) -> int:
    rows = comparison_table(args.gammas, args.dims)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(COMPARISON_COLUMNS)
    if args.mc_samples:
        cols += ["mc_estimate", "mc_std_error"]
    w.writerow(cols)
    for i, row in enumerate(rows):
        values = [row.gamma, row.n, row.p_uniform, row.p_gaussian, row.delta]
        if args.mc_samples:
            mc = monte_carlo_band(BandQuery(row.gamma, row.n), args.mc_samples, seed=args.seed + i)
            values += [mc.estimate, mc.std_error]
        w.writerow([repr(v) if isinstance(v, float) else v for v in values])
    if args.out:
        args.out.write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_export(args) -> int:
    d = load_dataset(args.dataset)
    spec = FixedPointSpec(args.bits)
    bundle = oracle_circuit(d, spec, args.mode)
    j = args.iterations
    if j == "auto":
        k = len(brute_force_separators(d, spec))
        j = optimal_iterations(bundle.num_codes, k) if k else 1
    circuit = grover_circuit(bundle, j)
    text = export_qasm(circuit, measure="w")
    report = {
        "version": __version__,
        "config": _config_echo(args),
        "iterations": j,
        "qubits": bundle.qubit_count,
        "registers": {name: list(qs) for name, qs in bundle.layout.items()},
        "oracle_gate_stats": bundle.gate_stats.as_dict(),
        "grover_gate_stats": stats(circuit).as_dict(),
        "qasm_statements": sum(1 for line in text.splitlines() if line and not line.startswith("//")),
    }
    if args.out:
        args.out.write_text(text)
        print(json.dumps(report, indent=2))
    else:
        sys.stdout.write(text)
        print(json.dumps(report, indent=2), file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "verify-arith": cmd_verify_arith,
    "appendix": cmd_appendix,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DatasetError, EncodingError, StructuralError, NoSolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
