"""Command-line front end: JSON answers, cache management, verification."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import atoms, cup, extgroups, levi, linv, verification
from . import roots as rt
from .engine import Engine
from .errors import ConsistencyError
from .pages import PageStore

CACHE_ENV = "STEINBERG_EXT_CACHE"


@dataclass
class EngineConfig:
    n: int
    d_k: int
    cache_dir: str | None
    max_n: int = 6
    fmt: str = "json"

    def validate(self) -> None:
        if self.n < 1 or self.d_k < 1:
            raise ValueError("rank and field degree must be positive")
        if self.n > self.max_n:
            raise ValueError(f"rank capped at {self.max_n} for interactive queries")


def parse_subset(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(sorted(int(x) for x in text.split(",")))


def emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
        return
    for key, value in sorted(payload.items()):
        print(f"{key}: {value}")


def build_engine(cfg: EngineConfig) -> Engine:
    cfg.validate()
    return Engine(cfg.n, cfg.d_k, store=PageStore(cfg.cache_dir))


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def cmd_cohomology(cfg: EngineConfig, args) -> dict:
    i = parse_subset(args.i)
    dims = levi.levi_dims(cfg.n, cfg.d_k, i)
    return {"n": cfg.n, "d_K": cfg.d_k, "I": list(i), "dims": dims}


def cmd_page(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    page = eng.page(parse_subset(args.i0), parse_subset(args.i1))
    table = {}
    for ell in page.ells:
        for k in range(page.kmax + 1):
            d = page.dim(ell, k)
            if d:
                table[f"{-ell},{k}"] = d
    if args.write_cache:
        for ell in page.ells:
            for k in range(page.kmax + 1):
                page.d1_matrix(ell, k)
    return {"params": {"n": cfg.n, "d_K": cfg.d_k,
                       "i0": list(page.i0), "i1": list(page.i1)},
            "e1_dims": table}


def cmd_e2(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    page = eng.page(parse_subset(args.i0), parse_subset(args.i1))
    table = {}
    for ell in page.ells:
        for k in range(page.kmax + 1):
            d = page.e2_dim(ell, k)
            if d:
                table[f"{-ell},{k}"] = d
    return {"params": {"n": cfg.n, "d_K": cfg.d_k,
                       "i0": list(page.i0), "i1": list(page.i1)},
            "e2_dims": table}


def cmd_degeneration(cfg: EngineConfig, args) -> dict:
    from . import doublecomplex
    eng = build_engine(cfg)
    page = eng.page(parse_subset(args.i0), parse_subset(args.i1))
    ok, report = doublecomplex.degeneration_check(page, extended=args.extended)
    pretty = {str(k): v for k, v in report.items()}
    return {"collapses": ok, "components": pretty}


def cmd_ext(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    profile = extgroups.steinberg_profile(eng, parse_subset(args.i0), parse_subset(args.i2))
    return {
        "params": {"n": cfg.n, "d_K": cfg.d_k,
                   "i0": list(parse_subset(args.i0)), "i2": list(parse_subset(args.i2))},
        "h_min": profile.h_min,
        "dims": {str(h): d for h, d in sorted(profile.dims.items())},
        "graded": {str(h): g for h, g in sorted(profile.graded.items())},
        "psi_labels": {str(h): lab for h, lab in sorted(profile.labels.items())},
    }


def cmd_cup(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    i1 = parse_subset(args.i1) if args.i1 is not None else tuple(sorted(rt.delta(cfg.n)))
    ctx = cup.make_context(cfg.n, cfg.d_k, i1, parse_subset(args.i0),
                           parse_subset(args.i2), parse_subset(args.i4),
                           args.prime0, args.prime1)
    page0, page1, _ = cup.context_pages(eng, ctx)
    cls0s = verification._psi_list(page0, ctx.prime0)
    cls1s = verification._psi_list(page1, ctx.prime1)
    results = []
    pairs = [(a, b) for a in range(len(cls0s)) for b in range(len(cls1s))]
    if args.pair:
        a, b = (int(x) for x in args.pair.split(","))
        pairs = [(a, b)]
    for a, b in pairs:
        sign, cls2 = cup.cup_atoms(eng, ctx, cls0s[a], cls1s[b])
        results.append({
            "omega0": levi.theta_to_wire(cls0s[a].max_theta),
            "omega1": levi.theta_to_wire(cls1s[b].max_theta),
            "result": {"sign": sign, "omega2": levi.theta_to_wire(cls2.max_theta)},
        })
    return {"context": {"n": cfg.n, "d_K": cfg.d_k, "i1": list(i1),
                        "i0": list(parse_subset(args.i0)),
                        "i2": list(parse_subset(args.i2)),
                        "i4": list(parse_subset(args.i4)),
                        "prime0": ctx.prime0, "prime1": ctx.prime1},
            "products": results}


def cmd_basis(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    rank, dim, vectors = cup.basis_x_rank(eng, parse_subset(args.i0), parse_subset(args.i2))
    if rank != dim:
        raise ConsistencyError("cup basis is rank deficient", rank=rank, dim=dim)
    listing = []
    for partition, choice, _vec in vectors:
        listing.append({
            "partition": [list(p) for p in partition],
            "factors": [str(c) for c in choice],
        })
    return {"count": len(vectors), "rank": rank, "dim": dim, "vectors": listing}


def params_to_wire(params: linv.Params) -> list[dict]:
    out = []
    for (alpha, iota), value in sorted(params.items()):
        out.append({"alpha": list(alpha), "iota": iota, "L": fraction_str(value)})
    return out


def params_from_wire(data: list[dict]) -> linv.Params:
    out: linv.Params = {}
    for entry in data:
        out[(tuple(entry["alpha"]), entry["iota"])] = Fraction(entry["L"])
    return out


def hyperplane_to_wire(eng: Engine, phi) -> dict:
    top = cup.ehat_space(eng)
    coords = [fraction_str(phi.get(i, Fraction(0))) for i in range(top.dim)]
    manifest = [levi.theta_to_wire(cls.max_theta) for cls in top.basis]
    return {"coords": coords, "basis": manifest}


def cmd_linv(cfg: EngineConfig, args) -> dict:
    eng = build_engine(cfg)
    if args.action == "to-w":
        params = params_from_wire(json.loads(args.params))
        phi = linv.params_to_hyperplane(eng, params)
        return {"hyperplane": hyperplane_to_wire(eng, phi)}
    if args.action == "from-w":
        data = json.loads(args.hyperplane)
        phi = {i: Fraction(c) for i, c in enumerate(data["coords"]) if Fraction(c)}
        params = linv.hyperplane_to_params(eng, phi)
        return {"params": params_to_wire(params)}
    if args.action == "check":
        data = json.loads(args.hyperplane)
        phi = {i: Fraction(c) for i, c in enumerate(data["coords"]) if Fraction(c)}
        diag = linv.is_bs_invariant(eng, phi)
        return {"invariant": diag.ok, "failures": diag.failures}
    if args.action == "roundtrip":
        import random as _random
        rng = _random.Random(args.seed)
        good = 0
        for _ in range(args.samples):
            params = linv.random_params(cfg.n, cfg.d_k, rng)
            phi = linv.params_to_hyperplane(eng, params)
            if linv.hyperplane_to_params(eng, phi) == params and \
               linv.is_bs_invariant(eng, phi).ok:
                good += 1
        return {"ok": f"{good}/{args.samples}", "seed": args.seed}
    raise ValueError(f"unknown action {args.action}")


def cmd_galois(cfg: EngineConfig, args) -> dict:
    total, trace = linv.universal_dim(cfg.n, cfg.d_k)
    return {"dim": total, "trace": [{"n": m, "dim": d} for m, d in trace]}


def cmd_verify(cfg: EngineConfig, args) -> dict:
    only = None
    if args.criteria:
        only = [int(x) for x in args.criteria.split(",")]
    reports = verification.run_all(extended=args.extended, only=only)
    payload = {"criteria": [], "ok": True}
    for rep in reports:
        line = f"{'PASS' if rep.ok else 'FAIL'} {rep.name} ({rep.seconds:.1f}s): {rep.details}"
        print(line, file=sys.stderr)
        payload["criteria"].append({"name": rep.name, "ok": rep.ok,
                                    "seconds": round(rep.seconds, 2),
                                    "details": rep.details})
        payload["ok"] = payload["ok"] and rep.ok
    return payload


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinberg-ext",
        description="Exact engine for Ext groups of locally analytic "
                    "generalized Steinberg representations")
    parser.add_argument("--n", type=int, default=3, help="rank of the general linear group")
    parser.add_argument("--deg", type=int, default=1, help="degree of the p-adic field")
    parser.add_argument("--cache-dir", default=None,
                        help=f"page cache directory (default ${CACHE_ENV})")
    parser.add_argument("--no-cache", action="store_true", help="disable the disk cache")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="graded dimensions of one Levi quotient")
    p.add_argument("--i", default="", help="comma-separated root subset")

    for name, extra in (("page", True), ("e2", False)):
        p = sub.add_parser(name, help=f"{name} dimensions of a staircase pair")
        p.add_argument("--i0", default="")
        p.add_argument("--i1", default="")
        if extra:
            p.add_argument("--write-cache", action="store_true")

    p = sub.add_parser("degeneration", help="collapse check for one pair")
    p.add_argument("--i0", default="")
    p.add_argument("--i1", default="")
    p.add_argument("--extended", action="store_true")

    p = sub.add_parser("ext", help="Ext profile between two Steinberg representations")
    p.add_argument("--i0", default="")
    p.add_argument("--i2", default="")

    p = sub.add_parser("cup", help="atom products for one chain")
    p.add_argument("--i0", default="")
    p.add_argument("--i2", default="")
    p.add_argument("--i4", default="")
    p.add_argument("--i1", default=None)
    p.add_argument("--prime0", action="store_true")
    p.add_argument("--prime1", action="store_true")
    p.add_argument("--pair", default=None, help="single pair of class indices a,b")

    p = sub.add_parser("basis", help="cup basis of one bottom Ext space")
    p.add_argument("--i0", default="")
    p.add_argument("--i2", default="")

    p = sub.add_parser("linv", help="hyperplane invariants")
    p.add_argument("action", choices=("to-w", "from-w", "check", "roundtrip"))
    p.add_argument("--params", default="[]", help="JSON parameter list")
    p.add_argument("--hyperplane", default="{}", help="JSON hyperplane document")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)

    sub.add_parser("galois", help="universal extension dimension with trace")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return parser


COMMANDS = {
    "cohomology": cmd_cohomology,
    "page": cmd_page,
    "e2": cmd_e2,
    "degeneration": cmd_degeneration,
    "ext": cmd_ext,
    "cup": cmd_cup,
    "basis": cmd_basis,
    "linv": cmd_linv,
    "galois": cmd_galois,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cache_dir = None if args.no_cache else (args.cache_dir or os.environ.get(CACHE_ENV))
    cfg = EngineConfig(args.n, args.deg, cache_dir, fmt=args.format)
    try:
        payload = COMMANDS[args.command](cfg, args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        diagnostic = {"error": str(exc), "details": {k: str(v) for k, v in exc.details.items()}}
        print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
        return 3
    emit(payload, cfg.fmt)
    if args.command == "verify" and not payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
