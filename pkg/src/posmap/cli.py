"""Command-line front end: ``posmap {analyze,certify,witness,gen}``.

Exit codes: 0 the command ran to a verdict (whatever it is), 1 invalid user
input, 2 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .certifier import CertificationConfig, certify_m_positivity, verify_witness
from .errors import PosmapError
from .mapcore import BUILTINS, BFormMap, builtin_map
from .positivity import NEG_TOL, positivity_upper_bound
from .witness import WITNESS_TOL, detect_entanglement, partial_transpose

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InternalFailure(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def g12(x: float) -> str:
    return f"{x:.12g}"


def r12(x: float) -> float:
    """Round to 12 significant digits for JSON reports."""
    return float(f"{x:.12g}") + 0.0


def _complex_str(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and np.signbit(z.imag)) else "+"
    return f"{g12(z.real)}{sign}{g12(abs(z.imag))}j"


def _matrix_json(M) -> list:
    return [[[r12(z.real), r12(z.imag)] for z in row] for row in np.asarray(M, dtype=np.complex128)]


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _default_seed() -> int:
    env = os.environ.get("POSMAP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise PosmapError(f"POSMAP_SEED must be an integer, got {env!r}") from None


def _resolve_map(spec: str, dim: int | None = None) -> BFormMap:
    """A map file path, or ``builtin:NAME[:p1,p2,...]`` (needs ``dim``)."""
    if spec.startswith("builtin:"):
        parts = spec.split(":")
        name = parts[1]
        params = []
        if len(parts) > 2 and parts[2]:
            try:
                params = [float(p) for p in parts[2].split(",")]
            except ValueError:
                raise PosmapError(f"--map: bad builtin parameters in {spec!r}") from None
        if dim is None:
            raise PosmapError("builtin map needs a dimension")
        return builtin_map(name, dim, params)
    return io.load_map(spec)


# -- analyze ----------------------------------------------------------------

def cmd_analyze(args) -> int:
    B = io.load_map(args.map)
    rep = positivity_upper_bound(B, args.tol)
    if args.json:
        d = rep.as_dict()
        d["eigenvalues"] = [r12(x) for x in d["eigenvalues"]]
        for row in d["negative_kraus"]:
            row["eigenvalue"] = r12(row["eigenvalue"])
        d["dim"] = B.dim
        _emit_json(d)
        return EXIT_OK
    print(f"dimension: {B.dim}")
    print("eigenvalues (descending) and Kraus ranks:")
    for lam, r in zip(rep.eigenvalues, rep.kraus_ranks):
        print(f"  {g12(lam):>20}  rank {r}")
    if rep.negative_kraus:
        print("negative Kraus matrices:")
        for lam, r in rep.negative_kraus:
            print(f"  eigenvalue {g12(lam)}  rank {r}")
        print(f"positivity upper bound: not {rep.upper_bound + 1}-positive "
              f"(at most {rep.upper_bound}-positive)")
        if rep.degenerate_negative:
            print("note: degenerate negative eigenvalues; the bound may not be tight")
    else:
        print("completely positive (no negative eigenvalues); upper bound: unbounded")
    print(f"completely positive: {'yes' if rep.cp else 'no'}")
    print(f"trace preserving: {'yes' if rep.trace_preserving else 'no'}")
    print(f"hermitian: {'yes' if rep.hermitian else 'no'}")
    return EXIT_OK


# -- certify ----------------------------------------------------------------

def cmd_certify(args) -> int:
    B = io.load_map(args.map)
    if not 1 <= args.m <= B.dim:
        raise PosmapError(f"--m must satisfy 1 <= m <= dim = {B.dim}, got {args.m}")
    seed = args.seed if args.seed is not None else _default_seed()
    config = CertificationConfig(
        m=args.m, restarts=args.restarts, max_iters=args.max_iters,
        violation_tol=args.tol, master_seed=seed,
    )
    res = certify_m_positivity(B, config, workers=args.workers)
    verified = None
    if res.violated:
        verified = verify_witness(B, res.witness_unitary, res.m, res.lambda_min, tol=max(args.tol, 1e-9))
        if not verified:
            raise InternalFailure("re-verification of the claimed witness failed")
        if args.emit_witness:
            io.save_state(res.witness_state, args.emit_witness)
    if args.json:
        _emit_json({
            "verdict": res.verdict.value,
            "m": res.m,
            "lambda_min": r12(res.lambda_min),
            "restarts": config.restarts,
            "restarts_used": res.restarts_used,
            "best_restart": res.best_restart,
            "seed": seed,
            "witness_unitary": _matrix_json(res.witness_unitary) if res.violated else None,
            "verified": verified,
        })
        return EXIT_OK
    print(f"m: {res.m}")
    print(f"verdict: {res.verdict.value}")
    print(f"lambda_min: {g12(res.lambda_min)}")
    print(f"restarts used: {res.restarts_used} of {config.restarts} (seed {seed})")
    if res.violated:
        print(f"map is NOT {res.m}-positive (witness re-verified)")
        print("witness unitary:")
        for row in res.witness_unitary:
            print("  " + "  ".join(_complex_str(z) for z in row))
        if args.emit_witness:
            print(f"witness state written to {args.emit_witness}")
    else:
        print(f"no violation found; evidence (not proof) that the map is {res.m}-positive")
    return EXIT_OK


# -- witness ----------------------------------------------------------------

def cmd_witness(args) -> int:
    rho, dims, _ = io.load_state(args.state)
    B = _resolve_map(args.map, dims[0])
    v = detect_entanglement(rho, dims, B, args.tol)
    ppt = float(np.linalg.eigvalsh(partial_transpose(rho, dims))[0]) if args.compare_ppt else None
    if args.json:
        d = v.as_dict()
        d["lambda_min"] = r12(d["lambda_min"])
        if ppt is not None:
            d["ppt_lambda_min"] = r12(ppt)
        _emit_json(d)
        return EXIT_OK
    verdict = "entangled" if v.entangled is True else "inconclusive"
    print(f"map: {v.map_used}")
    print(f"verdict: {verdict}")
    print(f"lambda_min: {g12(v.lambda_min)}")
    if v.caveat:
        print("caveat: positivity of this map is not verified; a negative value may not imply entanglement")
    if ppt is not None:
        print(f"partial transpose lambda_min: {g12(ppt)}")
    return EXIT_OK


# -- gen --------------------------------------------------------------------

def cmd_gen(args) -> int:
    B = builtin_map(args.builtin, args.dim, args.param or [])
    text = io.dumps(io.map_to_dict(B, args.repr), indent=1) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="posmap", description="Positivity analysis of linear maps on density matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="eigenvalues, Kraus ranks and positivity bound of a map")
    a.add_argument("map")
    a.add_argument("--tol", type=float, default=NEG_TOL, help="relative negativity threshold")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("certify", help="search for a violation of m-positivity")
    c.add_argument("map")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--restarts", type=int, default=64)
    c.add_argument("--max-iters", type=int, default=500)
    c.add_argument("--seed", type=int, default=None, help="master seed (default: $POSMAP_SEED or 0)")
    c.add_argument("--tol", type=float, default=1e-9, help="violation threshold on lambda_min")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--emit-witness", metavar="PATH")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_certify)

    w = sub.add_parser("witness", help="use a positive map as an entanglement witness")
    w.add_argument("state")
    w.add_argument("--map", required=True, help="map file, or builtin:NAME[:p1,...]")
    w.add_argument("--compare-ppt", action="store_true")
    w.add_argument("--tol", type=float, default=WITNESS_TOL)
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_witness)

    g = sub.add_parser("gen", help="write a builtin map to a map file")
    g.add_argument("--builtin", required=True, metavar="NAME", help=", ".join(BUILTINS))
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--param", type=float, action="append")
    g.add_argument("--repr", choices=("builtin", "bform", "kraus"), default="builtin")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    # LinAlgError subclasses ValueError, so it must be caught first
    except (InternalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"posmap: internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"posmap: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
