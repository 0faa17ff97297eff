"""Command-line front end.

Every subcommand writes a single JSON object (``field`` writes CSV) to stdout.
Exit codes: 0 success, 1 usage error, 2 failed precondition, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .distance import barbilian_distance, check_axioms
from .domains import domain_from_json, make_domain
from .errors import BarbilianError, ConvergenceError, PreconditionError
from .extremum import SearchOptions
from .influence import InfluenceSpec, default_influence
from .lagrange import cartan_asymmetry, check_homogeneity, check_positive_definite
from .metric import gaussian_curvature, metric_tensor, tangent_slope
from .tangent import tangent_circles, tangent_circles_numeric

EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_CONVERGENCE = 3
SEED_ENV = "BARBILIAN_SEED"
FIELD_HEADER = "x,y,m,R_plus,R_minus,lambda,g11,g12,g22"

# fallbacks for options left unset by both flags and --config
DEFAULTS = {
    "rho": None,
    "l_angle": None,
    "h": None,
    "r_k": None,
    "r_j": None,
    "influence": None,
    "grid_points": 4096,
    "tol": 1e-12,
    "max_iters": 200,
    "seed": None,
    "triples": 100,
    "grid": 11,
    "direction": (1.0, 0.0),
    "step": None,
    "slope": None,
    "vertical": False,
    "dir": None,
    "numeric": False,
    "allow_near_boundary": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# output


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


def dump_json(obj) -> str:
    """Strict JSON with 17-significant-digit floats; infinities become strings."""
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = fmt_float(obj)
        return json.dumps(s) if s in ("inf", "-inf", "nan") else s
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dump_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return dump_json(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# argument types


def point_arg(text: str) -> tuple:
    try:
        vals = tuple(float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if len(vals) < 2:
        raise argparse.ArgumentTypeError(f"expected at least two coordinates, got {text!r}")
    return vals


def bbox_arg(text: str) -> tuple:
    vals = point_arg(text)
    if len(vals) != 4 or not (vals[0] <= vals[1] and vals[2] <= vals[3]):
        raise argparse.ArgumentTypeError("bbox is xmin,xmax,ymin,ymax with xmin <= xmax and ymin <= ymax")
    return vals


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {n}")
    return n


def grid_int(text: str) -> int:
    n = positive_int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return n


def seed_arg(text) -> int:
    try:
        s = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


# ---------------------------------------------------------------------------
# parser


def _domain_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("domain")
    g.add_argument("--domain", help="domain name (halfplane, disk, quadrant, circle_minus_point, "
                   "parallel_planes, concentric_spheres) or inline JSON such as "
                   '\'{"kind": "disk", "rho": 2}\'')
    g.add_argument("--rho", type=float, help="disk radius (default: 1)")
    g.add_argument("--l-angle", type=float, help="angle of the removed point for circle_minus_point (default: 0)")
    g.add_argument("--h", type=float, help="separation of the parallel planes (default: 1)")
    g.add_argument("--r-k", type=float, help="radius of the boundary sphere (default: 1)")
    g.add_argument("--r-j", type=float, help="radius of the sphere carrying the points (default: 2)")
    return p


def _influence_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--influence", choices=["euclidean", "exp_projected", "exp_spherical"],
                   help="influence function (default: matched to the domain)")
    return p


def _search_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("extremum search")
    g.add_argument("--grid", dest="grid_points", type=positive_int,
                   help="grid points per boundary chart, at least 16 (default: 4096)")
    g.add_argument("--tol", type=float, help="golden-section tolerance (default: 1e-12)")
    g.add_argument("--max-iters", type=positive_int, help="golden-section iteration cap (default: 200)")
    return p


def _common_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--config", help="JSON file of option values; explicit flags win")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="barbilian",
        description="Barbilian distances, induced metrics and their checks.",
        epilog="Values starting with '-' need the --flag=value form, e.g. --a=-1,2.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    dom, inf, search, common = _domain_flags(), _influence_flags(), _search_flags(), _common_flags()

    p = sub.add_parser("dist", parents=[common, dom, inf, search], help="distance between two points")
    p.add_argument("--a", type=point_arg, help="first point, x,y (or x,y,z)")
    p.add_argument("--b", type=point_arg, help="second point")

    p = sub.add_parser("axioms", parents=[common, dom, inf, search], help="sampled metric-axiom report")
    p.add_argument("--triples", type=positive_int, help="number of sampled triples (default: 100)")
    p.add_argument("--seed", type=seed_arg, help=f"sampler seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--allow-near-boundary", action="store_true", default=None,
                   help="also sample points closer than 1e-3 to the boundary")

    p = sub.add_parser("field", parents=[common, dom], help="CSV of the induced metric on a grid")
    p.add_argument("--grid", type=grid_int, help="points per axis (default: 11)")
    p.add_argument("--bbox", type=bbox_arg, help="xmin,xmax,ymin,ymax (required)")
    p.add_argument("--direction", type=point_arg, help="velocity dx,dy (default: 1,0)")

    p = sub.add_parser("curvature", parents=[common, dom], help="Gaussian curvature of the conformal metric")
    p.add_argument("--at", type=point_arg, help="point x,y")
    p.add_argument("--step", type=float, help="stencil step (default: 1e-3 * distance to the boundary)")

    p = sub.add_parser("tangent", parents=[common, dom], help="the two circles tangent to a line and to K")
    p.add_argument("--at", type=point_arg, help="point x,y")
    line = p.add_mutually_exclusive_group()
    line.add_argument("--slope", type=float, help="slope of the line (inf for vertical)")
    line.add_argument("--vertical", action="store_true", default=None, help="vertical line")
    line.add_argument("--dir", type=point_arg, help="direction dx,dy along the line")
    p.add_argument("--numeric", action="store_true", default=None, help="always use the numeric solver")

    p = sub.add_parser("lagrange-check", parents=[common], help="Cartan symmetry test of the quadrant tensor")
    p.add_argument("--at", type=point_arg, help="point x,y in the open quadrant")
    p.add_argument("--dir", type=point_arg, help="velocity dx,dy with dx > 0")
    p.add_argument("--step", type=float, help="central-difference step (default: 1e-5 * |velocity|)")
    return parser


# ---------------------------------------------------------------------------
# option resolution


def _resolve(args: argparse.Namespace) -> dict:
    opts = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(cfg) - set(opts)
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        for k, v in cfg.items():
            if opts[k] is None:
                opts[k] = v
    for k, v in opts.items():
        if v is None and k in DEFAULTS:
            opts[k] = DEFAULTS[k]
    return opts


def _point(value, name):
    if value is None:
        raise UsageError(f"--{name} is required")
    if isinstance(value, str):
        try:
            value = point_arg(value)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from None
    return tuple(float(c) for c in value)


def _domain(opts):
    spec = opts.get("domain")
    if spec is None:
        raise UsageError("--domain is required")
    if isinstance(spec, str) and spec.lstrip().startswith("{"):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad domain JSON: {exc}") from None
    params = {k: opts[k] for k in ("rho", "l_angle", "h", "r_k", "r_j") if opts.get(k) is not None}
    if isinstance(spec, dict):
        return domain_from_json({**spec, **params})
    if not isinstance(spec, str):
        raise UsageError("domain must be a name or a JSON object")
    return make_domain(spec, **params)


def _influence(opts, domain):
    name = opts.get("influence")
    return default_influence(domain) if name is None else InfluenceSpec.parse(name)


def _search(opts):
    try:
        return SearchOptions(int(opts["grid_points"]), float(opts["tol"]), int(opts["max_iters"]))
    except (PreconditionError, TypeError, ValueError) as exc:
        raise UsageError(f"bad search options: {exc}") from None


def _seed(opts) -> int:
    raw = opts.get("seed")
    if raw is None:
        raw = os.environ.get(SEED_ENV, 0)
    try:
        return seed_arg(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def cmd_dist(opts) -> str:
    domain = _domain(opts)
    res = barbilian_distance(_influence(opts, domain), domain, _point(opts["a"], "a"), _point(opts["b"], "b"),
                             _search(opts))
    return dump_json(res.to_json()) + "\n"


def cmd_axioms(opts) -> str:
    domain = _domain(opts)
    n = opts["triples"]
    if not isinstance(n, int) or n < 1:
        raise UsageError("triples must be an integer >= 1")
    seed = _seed(opts)
    report = check_axioms(_influence(opts, domain), domain, n, seed=seed, opts=_search(opts),
                          allow_near_boundary=bool(opts["allow_near_boundary"]))
    return dump_json({**report.to_json(), "seed": seed}) + "\n"


def cmd_field(opts) -> str:
    domain = _domain(opts)
    if not domain.planar:
        raise PreconditionError("field needs a planar domain")
    if opts.get("bbox") is None:
        raise UsageError("--bbox is required")
    x0, x1, y0, y1 = (float(c) for c in opts["bbox"])
    n = int(opts["grid"])
    if n < 2:
        raise UsageError("grid needs at least 2 points per axis")
    direction = _point(opts["direction"], "direction")
    m = tangent_slope(direction)
    lines = [FIELD_HEADER]
    for j in range(n):
        y = y0 + (y1 - y0) * j / (n - 1)
        for i in range(n):
            x = x0 + (x1 - x0) * i / (n - 1)
            if not domain.contains((x, y)):
                lines.append(f"# skipped {fmt_float(x)},{fmt_float(y)}")
                continue
            s = metric_tensor(domain, (x, y), direction)
            row = (x, y, m, s.R, s.r, s.lam, s.g11, s.g12, s.g22)
            lines.append(",".join(fmt_float(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def cmd_curvature(opts) -> str:
    domain = _domain(opts)
    res = gaussian_curvature(domain, _point(opts["at"], "at"), opts.get("step"))
    return dump_json({"kappa": res.kappa, "point": res.point, "step_h": res.step_h}) + "\n"


def cmd_tangent(opts) -> str:
    domain = _domain(opts)
    a = _point(opts["at"], "at")
    chosen = [opts.get("slope") is not None, bool(opts.get("vertical")), opts.get("dir") is not None]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --slope, --vertical and --dir")
    if opts.get("dir") is not None:
        kw = {"direction": _point(opts["dir"], "dir")}
    else:
        kw = {"slope": math.inf if opts.get("vertical") else float(opts["slope"])}
    if opts.get("numeric"):
        res = tangent_circles_numeric(domain, a, **kw)
    else:
        res = tangent_circles(domain, a, **kw)
    return dump_json(res.to_json()) + "\n"


def cmd_lagrange_check(opts) -> str:
    a = _point(opts["at"], "at")
    v = _point(opts["dir"], "dir")
    sample = cartan_asymmetry(a, v, opts.get("step"))
    out = {
        "dg11_dydot": sample.dg11_dydot,
        "dg12_dxdot": sample.dg12_dxdot,
        "symmetric": sample.symmetric,
        "homogeneity_deviation": check_homogeneity(a, v),
        "positive_definite": check_positive_definite(a, v),
    }
    return dump_json(out) + "\n"


COMMANDS = {
    "dist": cmd_dist,
    "axioms": cmd_axioms,
    "field": cmd_field,
    "curvature": cmd_curvature,
    "tangent": cmd_tangent,
    "lagrange-check": cmd_lagrange_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = COMMANDS[args.command](_resolve(args))
    except UsageError as exc:
        print(f"barbilian {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"barbilian: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (BarbilianError, PreconditionError) as exc:
        print(f"barbilian: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
