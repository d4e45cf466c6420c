"""Command-line front end.

Every tabular command writes CSV (stdout or ``--out``). With ``--out`` a
``<out>.manifest.json`` sidecar records the parameters, seed and package
version. Exit codes: 0 success, 2 invalid input, 3 infeasible request,
4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .circuit_builder import BuildOptions, build_udis, spectrum_for
from .dynamics import sigma_z_of_t, time_series
from .exceptions import (EmitRefusedError, InvalidArgumentError, IsingQCError, ParseError,
                         ResourceLimitError, RoutingInfeasibleError, TopologyError)
from .ising_model import CriticalPointWarning, IsingSpec
from .statevector import expval_staggered_x, expval_z_avg, run_circuit, sample
from .thermal import ThermalConfig, thermal_expectation

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4


def parse_grid(text: str) -> np.ndarray:
    """``"a:b:num"`` for an inclusive linspace, else a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, num = float(parts[0]), float(parts[1]), int(parts[2])
            if num < 1:
                raise ValueError
            return np.linspace(a, b, num)
        vals = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise InvalidArgumentError(f"bad grid {text!r}; use 'start:stop:num' or 'v1,v2,...'")
    if vals.size == 0 or not np.all(np.isfinite(vals)):
        raise InvalidArgumentError(f"bad grid {text!r}")
    return vals


def _num(x) -> str:
    return format(float(x), ".15g")


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_table(args, header, rows, extra=None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(x) if isinstance(x, (float, np.floating)) else x for x in r])
    _write_output(args, buf.getvalue(), extra)


def _write_output(args, text: str, extra=None) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    manifest = {"command": args.command, "version": __version__,
                "params": {k: v for k, v in sorted(vars(args).items())
                           if k not in ("func", "command")},
                "seed": getattr(args, "seed", None)}
    if extra:
        manifest.update(extra)
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _seeds(seed, count):
    return np.random.SeedSequence(seed).spawn(count)


def cmd_magnetization(args) -> int:
    lams = parse_grid(args.lambda_grid)
    obs = args.observable
    seeds = _seeds(args.seed, lams.size)

    def point(i):
        spec = IsingSpec(args.n, lams[i])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CriticalPointWarning)
            table = spectrum_for(spec)
        s = run_circuit(build_udis(spec), table.ground_bitstring())
        if args.method == "exact":
            v = expval_z_avg(s) if obs == "sigma_z" else expval_staggered_x(s)
            return lams[i], v, 0.0
        if obs != "sigma_z":
            raise InvalidArgumentError("sampled magnetization supports sigma_z only")
        counts = sample(s, args.shots, np.random.default_rng(seeds[i])).counts
        x = np.repeat([1 - 2 * b.count("1") / args.n for b in counts], list(counts.values()))
        return lams[i], float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))

    rows = _pmap(point, range(lams.size), args.jobs)
    _write_table(args, ["lambda", obs, "stderr"], rows)
    return EXIT_OK


def cmd_time_evolution(args) -> int:
    lams = parse_grid(args.lam) if args.lam is not None else parse_grid(args.lambda_grid)
    times = parse_grid(args.t_grid)
    seeds = _seeds(args.seed, lams.size)

    def curve(i):
        ts = time_series(lams[i], times, args.method, args.shots, seeds[i])
        err = ts.stderr if ts.stderr is not None else np.zeros(times.size)
        return [(lams[i], t, v, e, sigma_z_of_t(lams[i], t))
                for t, v, e in zip(times, ts.values, err)]

    rows = [r for block in _pmap(curve, range(lams.size), args.jobs) for r in block]
    _write_table(args, ["lambda", "t", "sigma_z", "stderr", "closed_form"], rows)
    return EXIT_OK


def cmd_thermal_map(args) -> int:
    betas, lams = parse_grid(args.beta_grid), parse_grid(args.lambda_grid)
    grid = [(b, lam) for b in betas for lam in lams]
    seeds = _seeds(args.seed, len(grid))

    def point(i):
        b, lam = grid[i]
        cfg = ThermalConfig(b, args.method, args.shots, seeds[i])
        v, e = thermal_expectation(cfg, IsingSpec(args.n, lam), args.observable)
        return b, lam, v, e

    rows = _pmap(point, range(len(grid)), args.jobs)
    _write_table(args, ["beta", "lambda", args.observable, "stderr"], rows)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    lam = float(args.lam if args.lam is not None else 1.5)
    if args.n > 16:
        raise ResourceLimitError("spectrum listing limited to n <= 16")
    table = spectrum_for(IsingSpec(args.n, lam))
    rows = [(format(i, f"0{args.n}b"), float(e)) for i, e in enumerate(table.energies())]
    _write_table(args, ["label", "energy"], rows)
    return EXIT_OK


def cmd_emit(args) -> int:
    from .transpile import emit, load_topology, parse, routed_equivalent, transpile
    lam = float(args.lam if args.lam is not None else 1.5)
    spec = IsingSpec(args.n, lam)
    opts = BuildOptions(with_fswaps=not args.no_fswaps)
    circ = build_udis(spec, opts)
    topo = load_topology(args.topology or f"line({args.n})")
    rc = transpile(circ, topo, basis=args.basis)
    text = emit(rc, args.format)
    if emit(parse(text, args.format), args.format) != text:
        raise EmitRefusedError("emitted text does not round-trip")
    extra = {"stats": rc.stats, "layout": list(rc.layout), "topology": topo.name,
             "basis": rc.basis.value}
    if args.n <= 8:
        ok, _ = routed_equivalent(circ, rc)
        extra["simulator_equivalent"] = bool(ok)
        if not ok:
            _write_output(args, text, extra)
            print("routed circuit is not equivalent to the original", file=sys.stderr)
            return EXIT_VERIFY
    _write_output(args, text, extra)
    print(json.dumps(rc.stats, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import run_checks
    results = run_checks()
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all checks passed" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isingqc",
                                description="Exact transverse-field Ising circuits.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--n", type=int, default=4, help="chain size (power of two >= 4)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
        if seed:
            sp.add_argument("--seed", type=int, default=None)
            sp.add_argument("--shots", type=int, default=4096)
            sp.add_argument("--method", choices=("exact", "sampled"), default="exact")

    sp = sub.add_parser("magnetization", help="ground-state magnetization over a field grid")
    common(sp)
    sp.add_argument("--lambda-grid", default="0:3:31")
    sp.add_argument("--observable", choices=("sigma_z", "staggered_x"), default="sigma_z")
    sp.set_defaults(func=cmd_magnetization)

    sp = sub.add_parser("time-evolution", help="evolved all-up state on a time grid")
    common(sp)
    sp.add_argument("--lambda", dest="lam", default=None, help="field value(s), comma-separated")
    sp.add_argument("--lambda-grid", default="0,0.5,1,1.5,2")
    sp.add_argument("--t-grid", default="0:6.283185307179586:50")
    sp.set_defaults(func=cmd_time_evolution)

    sp = sub.add_parser("thermal-map", help="thermal expectation on a (beta, lambda) grid")
    common(sp)
    sp.add_argument("--beta-grid", default="0.1:10:20")
    sp.add_argument("--lambda-grid", default="0:2:20")
    sp.add_argument("--observable", choices=("sigma_z", "staggered_x"), default="sigma_z")
    sp.set_defaults(func=cmd_thermal_map)

    sp = sub.add_parser("spectrum", help="energies of all diagonal-basis labels")
    common(sp, seed=False)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("emit", help="transpile U_dis and write circuit text")
    common(sp, seed=False)
    sp.add_argument("--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--topology", default=None,
                    help="JSON file, bundled name, or shorthand like ladder(2,2)")
    sp.add_argument("--basis", choices=("ibm", "rigetti"), default=None)
    sp.add_argument("--format", choices=("qasm", "quil"), default="qasm")
    sp.add_argument("--no-fswaps", action="store_true",
                    help="build for all-to-all connectivity (router inserts fSWAPs)")
    sp.set_defaults(func=cmd_emit)

    sp = sub.add_parser("verify", help="run the oracle checks")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except (InvalidArgumentError, TopologyError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RoutingInfeasibleError, EmitRefusedError, ResourceLimitError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except IsingQCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
