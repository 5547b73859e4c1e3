"""Command-line front end. JSON for single evaluations, CSV for scans.

Exit codes: 0 success, 1 domain error, 2 non-convergence, 64 usage error.
Environment overrides: YM2_TOL (default tolerance), YM2_SEED (default seed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

from . import __version__
from .groups import GROUPS, SlowConvergenceError
from .hurwitz import count_by_monodromy, hurwitz_count, hurwitz_series, hurwitz_series_qdq
from .maps import MapError, load_map, parse_symbol
from .montecarlo import estimate_wilson, estimate_z, verify_character_identities
from .partition_function import (
    GaussianHWMeasure,
    NonConvergenceError,
    coupling_expectation,
    gaussian_expectation,
    limit_high_genus,
    limit_torus,
    migdal_z,
    sphere_free_energy,
    torus_expansion,
)
from .qseries import witten_zeta_su
from .reps import casimir_u

SCHEMA = "ym2/1"
USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _default_tol() -> float:
    return float(os.environ.get("YM2_TOL", "1e-10"))


def _default_seed() -> int:
    return int(os.environ.get("YM2_SEED", "20240817"))


def _emit_json(args, command: str, params: dict, result: dict, meta: dict):
    doc = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "params": params,
        "result": result,
        "meta": meta,
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    _write_out(args, text + "\n")


def _emit_csv(args, header: list[str], rows: list[list]):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    _write_out(args, buf.getvalue())


def _write_out(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ints(csv_text: str) -> list[int]:
    return [int(x) for x in csv_text.split(",") if x.strip()]


def _floats(csv_text: str) -> list[float]:
    return [float(x) for x in csv_text.split(",") if x.strip()]


def build_parser() -> _Parser:
    p = _Parser(prog="ym2", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=True, seed=False, fmt=True):
        if tol:
            sp.add_argument("--tol", type=float, default=None)
        if seed:
            sp.add_argument("--seed", type=int, default=None)
            sp.add_argument("--samples", type=int, default=100_000)
            sp.add_argument("--threads", type=int, default=1)
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--output", default=None)

    sp = sub.add_parser("z", help="character sum of the partition function")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--t", type=float, required=True)
    common(sp)

    sp = sub.add_parser("limits", help="finite-N values against the large-N limit")
    sp.add_argument("--g", type=int, required=True, choices=(1, 2))
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--Ns", type=str, required=True, help="comma-separated N values")
    common(sp)

    sp = sub.add_parser("expand", help="1/N^2 torus expansion coefficients")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--nMax", type=int, default=44)
    common(sp)

    sp = sub.add_parser("zeta", help="Witten zeta partial sum for SU(N)")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--cap", type=int, default=60)
    common(sp, tol=False)

    sp = sub.add_parser("moments", help="moments of the Gaussian weight measure")
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--k", type=int, default=2, help="moment order of the level/first coefficient")
    common(sp)

    sp = sub.add_parser("coupling-check", help="both sides of the coupling identity")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--F", choices=("one", "c2"), default="c2")
    common(sp)

    sp = sub.add_parser("hurwitz", help="torus-covering count, optionally with oracle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", action="store_true")
    common(sp, tol=False)

    sp = sub.add_parser("fseries", help="generating series of covering counts")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--nMax", type=int, default=30)
    sp.add_argument("--ell", type=int, default=0, help="termwise q d/dq order")
    common(sp, tol=False)

    sp = sub.add_parser("dk-scan", help="sphere free-energy grid over t")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--t-min", type=float, default=2.0)
    sp.add_argument("--t-max", type=float, default=20.0)
    sp.add_argument("--steps", type=int, default=19)
    common(sp)

    sp = sub.add_parser("mc-z", help="Monte Carlo partition-function estimate")
    sp.add_argument("--map", dest="map_path", default=None, help="map description file")
    sp.add_argument("--genus", type=int, default=None, help="use the one-face map of this genus")
    sp.add_argument("--group", choices=("U1", "SU2"), default="SU2")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--areas", type=str, default=None, help="comma-separated face areas")
    common(sp, tol=False, seed=True, fmt=True)

    sp = sub.add_parser("mc-wilson", help="Monte Carlo Wilson loop estimate")
    sp.add_argument("--map", dest="map_path", default=None)
    sp.add_argument("--genus", type=int, default=None)
    sp.add_argument("--group", choices=("U1", "SU2"), default="SU2")
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--areas", type=str, default=None)
    sp.add_argument("--loop", type=str, required=True, help="space-separated signed labels")
    common(sp, tol=False, seed=True, fmt=True)

    sp = sub.add_parser("verify-identities", help="character-identity checks")
    common(sp, tol=False, seed=True, fmt=True)

    sp = sub.add_parser("map-info", help="vertices/edges/faces/genus of a map file")
    sp.add_argument("--file", required=True)
    common(sp, tol=False)

    return p


def _resolve_map(args):
    from .maps import fundamental_map

    if (args.map_path is None) == (args.genus is None):
        raise ValueError("give exactly one of --map or --genus")
    if args.map_path:
        return load_map(args.map_path)
    return fundamental_map(args.genus)


def _resolve_areas(args, m) -> list[float]:
    if args.areas:
        areas = _floats(args.areas)
        if abs(sum(areas) - args.t) > 1e-9:
            raise ValueError(f"areas sum to {sum(areas)}, expected t={args.t}")
        return areas
    return [args.t / m.face_count] * m.face_count


def _run(args) -> int:
    t0 = time.perf_counter()
    tol = getattr(args, "tol", None) or _default_tol()
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _default_seed()
    cmd = args.command

    if cmd == "z":
        r = migdal_z(args.N, args.g, args.t, tol)
        _emit_json(
            args, cmd,
            {"N": args.N, "g": args.g, "t": args.t, "tol": tol},
            {"value": r.value, "tailEstimate": r.tail_estimate, "pairsSummed": r.weights_summed},
            _meta(t0, formula="character-sum"),
        )
    elif cmd == "limits":
        ns = _ints(args.Ns)
        ref = limit_torus(args.t) if args.g == 1 else limit_high_genus(args.t)
        ref_name = "theta-over-phi-squared" if args.g == 1 else "theta"
        rows = []
        for n in ns:
            z = migdal_z(n, args.g, args.t, tol).value
            rows.append([n, f"{z!r}", f"{ref!r}", f"{z - ref!r}"])
        if (args.format or "csv") == "json":
            _emit_json(
                args, cmd,
                {"g": args.g, "t": args.t, "Ns": ns, "tol": tol},
                {"rows": [[int(r[0])] + [float(x) for x in r[1:]] for r in rows],
                 "reference": ref, "referenceName": ref_name},
                _meta(t0, formula="character-sum-vs-limit"),
            )
        else:
            _emit_csv(args, ["N", "Z", ref_name, "residual"], rows)
    elif cmd == "expand":
        e = torus_expansion(args.t, args.p, n_max=args.nMax)
        _emit_json(
            args, cmd,
            {"t": args.t, "p": args.p, "nMax": args.nMax},
            {
                "coefficients": list(e.coefficients),
                "oracle": list(e.oracle),
                "relErrors": list(e.rel_errors),
                "oracleN": list(e.oracle_N),
                "flagged": list(e.flagged),
            },
            _meta(t0, formula="torus-inverse-square-expansion"),
        )
    elif cmd == "zeta":
        r = witten_zeta_su(args.N, args.s, args.cap)
        _emit_json(
            args, cmd,
            {"N": args.N, "s": args.s, "cap": args.cap},
            {"value": r.value, "tailEstimate": r.tail_bound, "termsUsed": r.terms_used,
             "tailRigorous": r.rigorous},
            _meta(t0, formula="dimension-power-series"),
        )
    elif cmd == "moments":
        measure = GaussianHWMeasure(args.N, args.t, tol)
        val = gaussian_expectation(measure, lambda w: float(w.coeffs[0]) ** args.k, tol)
        _emit_json(
            args, cmd,
            {"N": args.N, "t": args.t, "k": args.k, "tol": tol},
            {"value": val, "normalization": measure.normalization},
            _meta(t0, formula="gaussian-weight-moment"),
        )
    elif cmd == "coupling-check":
        measure = GaussianHWMeasure(args.N, args.t, tol=min(tol, 1e-10))
        F = (lambda w: 1.0) if args.F == "one" else (lambda w: float(casimir_u(w)))
        lhs = gaussian_expectation(measure, F, tol)
        rhs = coupling_expectation(args.N, args.t, F, tol=tol,
                                   z_value=measure.normalization)
        _emit_json(
            args, cmd,
            {"N": args.N, "t": args.t, "F": args.F, "tol": tol},
            {"expectation": lhs, "couplingSide": rhs, "difference": lhs - rhs},
            _meta(t0, formula="partition-coupling-identity"),
        )
    elif cmd == "hurwitz":
        count = hurwitz_count(args.n, args.k)
        result = {"count": count}
        if args.oracle:
            oracle = count_by_monodromy(args.n, args.k)
            result["oracle"] = int(oracle)
            result["match"] = count == oracle
        _emit_json(args, cmd, {"n": args.n, "k": args.k}, result,
                   _meta(t0, formula="content-power-sum"))
    elif cmd == "fseries":
        r = (hurwitz_series(args.k, args.q, args.nMax) if args.ell == 0
             else hurwitz_series_qdq(args.k, args.q, args.ell, args.nMax))
        _emit_json(
            args, cmd,
            {"k": args.k, "q": args.q, "nMax": args.nMax, "ell": args.ell},
            {"value": r.value, "tailEstimate": r.tail_bound, "termsUsed": r.terms_used},
            _meta(t0, formula="covering-generating-series"),
        )
    elif cmd == "dk-scan":
        rows = []
        for i in range(args.steps + 1):
            tv = args.t_min + (args.t_max - args.t_min) * i / max(args.steps, 1)
            f = sphere_free_energy(args.N, tv, tol)
            rows.append([f"{tv!r}", f"{f!r}"])
        _emit_csv(args, ["t", "free_energy"], rows)
    elif cmd == "mc-z":
        m = _resolve_map(args)
        areas = _resolve_areas(args, m)
        est = estimate_z(m, GROUPS[args.group], areas, args.samples, seed, args.threads)
        _emit_json(
            args, cmd,
            {"group": args.group, "t": args.t, "areas": areas,
             "samples": args.samples, "seed": seed, "threads": args.threads,
             "map": args.map_path or f"one-face genus {args.genus}"},
            {"mean": est.mean, "stdError": est.std_error},
            _meta(t0, formula="lattice-measure-average"),
        )
    elif cmd == "mc-wilson":
        m = _resolve_map(args)
        areas = _resolve_areas(args, m)
        loop = tuple(parse_symbol(tok) for tok in args.loop.split())
        est = estimate_wilson(m, GROUPS[args.group], areas, loop, args.samples, seed,
                              args.threads)
        _emit_json(
            args, cmd,
            {"group": args.group, "t": args.t, "areas": areas, "loop": args.loop,
             "samples": args.samples, "seed": seed, "threads": args.threads,
             "map": args.map_path or f"one-face genus {args.genus}"},
            {"mean": est.mean, "stdError": est.std_error, "ess": est.ess},
            _meta(t0, formula="importance-weighted-loop-trace"),
        )
    elif cmd == "verify-identities":
        checks = verify_character_identities(args.samples, seed)
        _emit_json(
            args, cmd,
            {"samples": args.samples, "seed": seed},
            {
                "allOk": all(c.ok for c in checks),
                "checks": [
                    {"name": c.name, "value": c.value, "reference": c.reference,
                     "stdError": c.std_error, "tol": c.tol, "ok": c.ok}
                    for c in checks
                ],
            },
            _meta(t0, formula="character-identities"),
        )
    elif cmd == "map-info":
        m = load_map(args.file)
        _emit_json(
            args, cmd,
            {"file": args.file},
            {"vertices": m.vertex_count, "edges": m.edge_count,
             "faces": m.face_count, "genus": m.genus,
             "eulerCharacteristic": m.euler_characteristic},
            _meta(t0, formula="euler-characteristic"),
        )
    else:  # pragma: no cover - argparse enforces the choices
        raise ValueError(f"unknown command {cmd}")
    return 0


def _meta(t0: float, **extra) -> dict:
    meta = {"wallTimeSeconds": time.perf_counter() - t0}
    meta.update(extra)
    return meta


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except NonConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return 2
    except (ValueError, MapError, SlowConvergenceError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
