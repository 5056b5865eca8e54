"""``risbeam`` command line: plot-ready CSV / JSON-lines for every experiment."""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from ._validation import ScenarioError
from .beamforming import apply_grouping, dft_codebook, bias_state_listing, quantize_1bit
from .channel import reciprocity_check
from .config import ReflectionConfig
from .experiments import (
    BASELINES,
    METHODS,
    baseline_power,
    ideal_gain_budget,
    method_power,
    radiation_pattern,
    steering_codeword,
)
from .geometry import AngularPosition
from .greedy import FeedbackError, greedy_beamform
from .scenario_file import ScenarioParseError, load_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_RUNTIME = 4

SUBCOMMANDS = ("pattern", "greedy", "gain", "codebook", "budget", "reciprocity")


def _db(p):
    return 10 * math.log10(p) if p > 0 else -math.inf


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6f}"
    return v


def _json_cell(v):
    if isinstance(v, float):
        return None if not math.isfinite(v) else float(f"{v:.6f}")
    return v


def write_rows(header, rows, fmt, stream):
    rows = list(rows)
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_cell(v) for v in row] for row in rows)
    else:
        for row in rows:
            stream.write(json.dumps(dict(zip(header, (_json_cell(v) for v in row)))) + "\n")


def _scenario(args, default):
    sc = load_scenario(args.scenario or default)
    if args.seed is not None:
        sc = sc.with_seed(args.seed)
    return sc


def cmd_pattern(args):
    sc = _scenario(args, "chamber")
    ps = sc.pattern
    target = AngularPosition.from_degrees(ps.target_zenith_deg, ps.target_azimuth_deg)
    cw = steering_codeword(sc.geometry, target, sc.ap_direction, sc.group_size)
    step = ps.step_deg if args.step is None else args.step
    res = radiation_pattern(sc.geometry, sc.realize(cw), sc.ap_direction, ps.start_deg, ps.stop_deg, step)
    summary = (f"main lobe {res.main_lobe_angle:.2f} deg, half-power beamwidth {res.half_power_beamwidth:.2f} deg, "
               f"sidelobes left {res.largest_sidelobe_left_db:.2f} dB / right {res.largest_sidelobe_right_db:.2f} dB")
    rows = [(float(a), float(g)) for a, g in zip(res.angles_deg, res.gain_db)]
    return ["azimuth_deg", "gain_db"], rows, summary


def _initial(sc, how):
    if how == "homogeneous":
        return sc.homogeneous()
    if how == "random":
        return ReflectionConfig.random_binary(sc.geometry.shape, np.random.default_rng(sc.seed), sc.group_size)
    return steering_codeword(sc.geometry, sc.ue_direction, sc.ap_direction, sc.group_size)


def cmd_greedy(args):
    sc = _scenario(args, "prototype")
    fb = sc.feedback_channel(seed=args.seed)
    trace = greedy_beamform(_initial(sc, args.init), fb, args.sweeps)
    rows = [
        (s.step, s.sweep, s.flip_type, s.flip_index, _db(s.candidate_power), s.accepted, _db(s.running_best), _db(s.true_power))
        for s in trace.iterations
    ]
    header = ["step", "sweep", "flip_type", "flip_index", "candidate_power_db", "accepted", "running_best_db", "true_power_db"]
    summary = (f"{trace.sweep_count} sweep(s), {trace.measurements_per_sweep} measurements per sweep, "
               f"gain over start {_db(trace.final_power) - _db(trace.initial_power):.2f} dB")
    return header, rows, summary


def cmd_gain(args):
    sc = _scenario(args, "prototype")
    methods = [args.method] if args.method else list(METHODS)
    baselines = [args.baseline] if args.baseline else list(BASELINES)
    rows = []
    powers = {m: method_power(sc, m, args.sweeps) for m in methods}
    for b in baselines:
        den = baseline_power(sc, b, args.trials, np.random.default_rng(sc.seed))
        for m in methods:
            rows.append((m, b, _db(powers[m]) - _db(den), _db(powers[m]), _db(den)))
    return ["method", "baseline", "gain_db", "method_power_db", "baseline_power_db"], rows, None


def _parse_index(text):
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("index must look like ROW,COL") from None
    return p, q


def cmd_codebook(args):
    sc = _scenario(args, "small")
    geom = sc.geometry
    book = dft_codebook(geom)
    if args.index is not None:
        p, q = args.index
        if not (0 <= p < geom.rows_M and 0 <= q < geom.cols_N):
            raise ScenarioError(f"codeword index {p},{q} outside the {geom.rows_M}x{geom.cols_N} codebook")
        book = [book[p * geom.cols_N + q]]
    if args.bias:
        if not sc.group_size:
            raise ScenarioError("bias listing needs a grouped scenario (geometry.group_size)")
        if args.index is not None:
            cfg = apply_grouping(book[0].config, sc.group_size)
        else:
            cfg = steering_codeword(geom, sc.ue_direction, sc.ap_direction, sc.group_size)
        return ["group_row", "column", "state"], bias_state_listing(cfg), None
    rows = []
    for cw in book:
        grid = quantize_1bit(cw.config).coefficients if args.quantize else cw.grid
        phases = np.degrees(np.angle(grid))
        for n in range(geom.cols_N):
            for m in range(geom.rows_M):
                rows.append((cw.index_pair[0], cw.index_pair[1], n * geom.rows_M + m, m, n, float(phases[m, n])))
    return ["codeword_row", "codeword_col", "element", "element_row", "element_col", "phase_deg"], rows, None


def cmd_budget(args):
    if args.elements is not None:
        L = args.elements
        seed = 0 if args.seed is None else args.seed
    else:
        sc = _scenario(args, "prototype")
        L, seed = sc.n_elements, sc.seed
    draws = 100_000 if args.trials is None else args.trials * L
    b = ideal_gain_budget(L, draws, np.random.default_rng(seed))
    summary = (f"array gain {b.array_gain_db:.2f} dB, 1-bit loss {b.quantization_loss_db:.2f} dB, "
               f"predicted {b.predicted_gain_db:.2f} dB")
    rows = [(L, round(b.array_gain_db, 2), round(b.quantization_loss_db, 2), round(b.predicted_gain_db, 2))]
    return ["elements", "array_gain_db", "quantization_loss_db", "predicted_gain_db"], rows, summary


def cmd_reciprocity(args):
    sc = _scenario(args, "small")
    rng = np.random.default_rng(sc.seed)
    rows, worst = [], 0.0
    for trial in range(args.trials or 1):
        cfg = ReflectionConfig.random_binary(sc.geometry.shape, rng, sc.group_size)
        res = reciprocity_check(sc.geometry, sc.ap_paths, sc.ue_paths, sc.grid, cfg, sc.element_model)
        worst = max(worst, res.max_deviation)
        for k, (f, r) in enumerate(zip(res.forward, res.reverse)):
            rows.append((trial, k, f.real, f.imag, r.real, r.imag, abs(f - r)))
    if worst > 1e-12:
        raise FeedbackError(f"links are not reciprocal: relative deviation {worst:.3e}")
    header = ["trial", "subcarrier", "forward_re", "forward_im", "reverse_re", "reverse_im", "deviation"]
    return header, rows, f"max relative deviation {worst:.3e}"


HANDLERS = {
    "pattern": cmd_pattern,
    "greedy": cmd_greedy,
    "gain": cmd_gain,
    "codebook": cmd_codebook,
    "budget": cmd_budget,
    "reciprocity": cmd_reciprocity,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH", help="scenario file or preset name (prototype, small, chamber)")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--format", choices=("csv", "json-lines"), default="csv")

    parser = argparse.ArgumentParser(prog="risbeam", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    p = sub.add_parser("pattern", parents=[common], help="azimuth cut of a 1-bit steering codeword")
    p.add_argument("--step", type=float, metavar="DEG", help="sweep step in degrees")

    p = sub.add_parser("greedy", parents=[common], help="greedy row/column beamforming trace")
    p.add_argument("--sweeps", type=int, default=1)
    p.add_argument("--init", choices=("homogeneous", "random", "codeword"), default="homogeneous")

    p = sub.add_parser("gain", parents=[common], help="power gain of each method over each baseline")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--baseline", choices=BASELINES)
    p.add_argument("--trials", type=int, default=1000, help="random configurations in the random baseline")
    p.add_argument("--sweeps", type=int, default=3)

    p = sub.add_parser("codebook", parents=[common], help="DFT codebook phases or a grouped bias listing")
    p.add_argument("--index", type=_parse_index, metavar="ROW,COL")
    p.add_argument("--quantize", action="store_true", help="1-bit quantize the codewords")
    p.add_argument("--bias", action="store_true", help="list one state per control signal")

    p = sub.add_parser("budget", parents=[common], help="ideal array gain and 1-bit loss")
    p.add_argument("--elements", type=int)
    p.add_argument("--trials", type=int, help="Monte Carlo configurations (default: 1e5 phase draws)")

    p = sub.add_parser("reciprocity", parents=[common], help="forward vs reverse cascaded channel")
    p.add_argument("--trials", type=int, default=1, help="random configurations to test")
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for name in ("sweeps", "trials", "elements"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            print(f"risbeam: --{name} must be positive", file=stderr)
            return EXIT_USAGE
    try:
        header, rows, summary = HANDLERS[args.command](args)
        buf = io.StringIO()
        write_rows(header, rows, args.format, buf)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            stdout.write(buf.getvalue())
    except ScenarioParseError as exc:
        print(f"risbeam: {exc}", file=stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"risbeam: invalid scenario: {exc}", file=stderr)
        return EXIT_INVALID
    except (FeedbackError, ValueError, OSError) as exc:
        print(f"risbeam: {exc}", file=stderr)
        return EXIT_RUNTIME
    if summary:
        print(summary, file=stderr)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
