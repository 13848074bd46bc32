"""Command line front end.

Exit status: 0 on success / Member / valid, 1 on Violated / invalid or a
failed verification, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exactla import fmt_rat, parse_rat
from .hypfamilies import BInequality, DistVec, cuts, gen_b, met_family, metp_family
from .polyhedra import PolyCone, dd_convert, hull


class InputError(ValueError):
    pass


def parse_distance(text: str) -> DistVec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"not valid JSON: {e}") from None
    try:
        return DistVec.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad distance vector: {e}") from None


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"{path}: {e}") from None


def _emit(obj, out: str | None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _vec(v) -> list[str]:
    return [fmt_rat(x) for x in v]


# --- subcommands ----------------------------------------------------------------


def cmd_gen_ineq(a) -> int:
    if a.family in ("hyp", "hypp"):
        target = "cone" if a.family == "hyp" else "polytope"
        items = list(gen_b(a.n, a.max_abs, target))
    else:
        items = met_family(a.n) if a.family == "met" else metp_family(a.n)
    _emit([q.to_json() for q in items], a.out)
    return 0


def cmd_cuts(a) -> int:
    vecs = [list(c.vec) for c in cuts(a.n, include_zero=a.polytope)]
    _emit({"n": a.n, "cuts": vecs}, a.out)
    return 0


def cmd_convert(a) -> int:
    cone = PolyCone.from_json(_read_json(a.input))
    if a.to == "rays" and cone.facets is None:
        raise InputError("conversion to rays needs 'facets' in the input")
    if a.to == "facets" and cone.rays is None:
        raise InputError("conversion to facets needs 'rays' in the input")
    src = PolyCone(cone.dim, facets=cone.facets, equations=cone.equations) if a.to == "rays" else PolyCone(cone.dim, rays=cone.rays)
    _emit(dd_convert(src).to_json(), a.out)
    return 0


def cmd_hull(a) -> int:
    data = _read_json(a.input)
    pts = data["points"] if isinstance(data, dict) else data
    poly = hull([[parse_rat(x) for x in p] for p in pts])
    _emit(
        {
            "ambient": poly.ambient,
            "dimension": poly.dimension,
            "vertices": [_vec(v) for v in poly.vertices],
            "facets": [_vec(f) for f in poly.facets],
            "equations": [_vec(e) for e in poly.equations],
        },
        a.out,
    )
    return 0


def cmd_member(a) -> int:
    from .lattice import member_hyp, member_hypp

    d = DistVec.from_json(_read_json(a.input))
    res = member_hyp(d) if a.family == "hyp" else member_hypp(d)
    out = {"verdict": res.verdict}
    if a.witness and not res.member:
        out["witness"] = res.witness.to_json()
        out["violation"] = fmt_rat(res.violation)
    _emit(out, a.out)
    return 0 if res.member else 1


def cmd_max_scale(a) -> int:
    from .lattice import max_scale

    d = DistVec.from_json(_read_json(a.input))
    _emit({"lambda": fmt_rat(max_scale(d))}, a.out)
    return 0


def cmd_orbit(a) -> int:
    from .symmetry import ares_orbit_size_b, canonical, group_order, orbit_size_sym, sym_orbits_in_class

    try:
        b = tuple(int(x) for x in a.b.split(","))
    except ValueError:
        raise InputError(f"--b must be a comma separated integer list, got {a.b!r}") from None
    if len(b) != a.n:
        raise InputError(f"--b has {len(b)} entries, expected {a.n}")
    BInequality(b)
    if a.switch:
        size = ares_orbit_size_b(b)
        out = {
            "group": "ares",
            "representative": list(canonical(b, "ares", "b")),
            "orbit_size": size,
            "stabilizer": group_order(a.n, "ares") // size,
            "sym_orbits": [list(w) for w in sym_orbits_in_class(b)],
        }
    else:
        size = orbit_size_sym(b)
        out = {
            "group": "sym",
            "representative": list(canonical(b, "sym", "b")),
            "orbit_size": size,
            "stabilizer": group_order(a.n, "sym") // size,
        }
    _emit(out, a.out)
    return 0


def cmd_lift(a) -> int:
    from .graphs import EdgeIneq, Graph, PathSystem, check_valid, lift_ineq, MAX_BRUTE_VERTICES

    g = Graph.from_json(_read_json(a.graph))
    raw = _read_json(a.ineq)
    f = EdgeIneq.from_b(BInequality.from_json(raw)) if "b" in raw else EdgeIneq.from_json(raw)
    sys_ = PathSystem.from_json(_read_json(a.paths))
    lifted = lift_ineq(f, sys_, g)
    out = {"inequality": lifted.to_json()}
    code = 0
    if g.n <= MAX_BRUTE_VERTICES:
        v = check_valid(lifted, g)
        out["valid"] = v.valid
        out["max_over_cuts"] = fmt_rat(v.maximum)
        out["maximizing_cut"] = sorted(v.cut)
        code = 0 if v.valid else 1
    _emit(out, a.out)
    return code


def cmd_repartition(a) -> int:
    from .repartition import make_config

    data = _read_json(a.points)
    pts = data["points"] if isinstance(data, dict) else data
    _emit(make_config(pts).to_json(), a.out)
    return 0


def cmd_verify(a) -> int:
    from .catalog import verify

    rep = verify(a.table, jobs=a.jobs)
    _emit(rep.to_tsv(), a.out)
    return 0 if rep.ok else 1


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hycone", description="Exact computations on hypermetric cones and polytopes.")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("gen-ineq", cmd_gen_ineq, "list b-inequalities of a family")
    sp.add_argument("--family", choices=("hyp", "hypp", "met", "metp"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-abs", type=int, default=1)

    sp = add("cuts", cmd_cuts, "cut semimetrics on n points")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--polytope", action="store_true", help="include the zero cut")

    sp = add("convert", cmd_convert, "dual description of a cone")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--to", choices=("rays", "facets"), required=True)

    sp = add("hull", cmd_hull, "convex hull of points")
    sp.add_argument("--in", dest="input", required=True)

    sp = add("member", cmd_member, "membership of a distance vector")
    sp.add_argument("--family", choices=("hyp", "hypp"), required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--witness", action="store_true")

    sp = add("max-scale", cmd_max_scale, "largest scaling inside the hypermetric polytope")
    sp.add_argument("--in", dest="input", required=True)

    sp = add("orbit", cmd_orbit, "orbit of a b-vector")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--switch", action="store_true", help="include switchings")

    sp = add("lift", cmd_lift, "lift an inequality along a path system")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--ineq", required=True)
    sp.add_argument("--paths", required=True)

    sp = add("repartition", cmd_repartition, "relation and triangulations of n+2 points")
    sp.add_argument("--points", required=True)

    sp = add("verify", cmd_verify, "check computed values against the stored tables")
    sp.add_argument("--table", choices=("t1", "t2", "t4", "totals", "gcd", "all"), default="all")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        print(f"hycone {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
