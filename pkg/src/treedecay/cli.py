"""Command line front end.

Exit codes: 0 when every check passes, 1 when some invariant fails, 2 on a
usage error (bad flags, malformed sites, requests beyond the caps).
"""
import argparse
import contextlib
import json
import re
import sys

from . import continents, decay, replica, steiner, surfaces
from .errors import DomainError, ResourceError
from .lattice import Box

DEFAULTS = {
    "verify-identity": {"n": 2, "interior": "2x2", "beta_grid": [0.5]},
    "condense": {"n": 2, "interior": "3x3", "beta_grid": [0.5, 1.0]},
    "decay": {"n": 2, "interior": "3x3", "beta_grid": [12.0]},
    "census": {"dim": 2},
    "steiner": {},
    "counterexample": {},
}

_SITE = re.compile(r"\(([^()]*)\)")


def parse_sites(text):
    """``"(1,1);(4,4)"`` -> ``[(1, 1), (4, 4)]``."""
    found = _SITE.findall(text)
    if not found or _SITE.sub("", text).strip(" ;,") != "":
        raise DomainError(f"cannot parse sites {text!r}")
    try:
        return [tuple(int(x) for x in f.split(",")) for f in found]
    except ValueError:
        raise DomainError(f"cannot parse sites {text!r}") from None


def default_tuple(box, n):
    """``n`` sites spread along the lexicographic order of the box."""
    k = box.size
    if n == 1:
        return [box.sites[0]]
    return [box.sites[j * (k - 1) // (n - 1)] for j in range(n)]


def build_parser():
    p = argparse.ArgumentParser(prog="treedecay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sites=True):
        sp.add_argument("--config", help="JSON experiment manifest")
        sp.add_argument("--output", help="output file (default: stdout)")
        sp.add_argument("--cap", type=int, help="enumeration cap")
        if sites:
            sp.add_argument("--n", type=int)
            sp.add_argument("--interior", help='box interior such as "3x3"')
            sp.add_argument("--beta", type=float, action="append",
                            help="inverse temperature (repeatable)")
            sp.add_argument("--sites", action="append",
                            help='site tuple such as "(1,1);(4,4)" (repeatable)')
        return sp

    vi = common(sub.add_parser("verify-identity", help="truncated correlation vs replica moment"))
    vi.add_argument("--gamma", type=int, default=1)
    common(sub.add_parser("condense", help="condensation split of the replica sum"))
    common(sub.add_parser("decay", help="tree-decay bound on exact correlations"))

    ce = common(sub.add_parser("census", help="connected surface counts"), sites=False)
    ce.add_argument("--dim", type=int)
    ce.add_argument("--max-r", type=int)

    st = common(sub.add_parser("steiner", help="minimal lattice tree length"), sites=False)
    st.add_argument("--sites", required=True, help='terminals such as "(0,0);(3,4)"')
    st.add_argument("--interior", help="restrict the tree to this box closure")
    st.add_argument("--tree", action="store_true", help="also print one optimal tree")

    cx = common(sub.add_parser("counterexample", help="local copy swap lowering the energy"),
                sites=False)
    cx.add_argument("--size", type=int, default=1)
    return p


def resolve(args):
    """Merge built-in defaults, the config file and the flags (flags win)."""
    opts = dict(DEFAULTS[args.command])
    if args.config:
        try:
            cfg = decay.load_config(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config: {exc}") from None
        opts.update({k: v for k, v in cfg.items() if v is not None})
    flags = {
        "n": getattr(args, "n", None),
        "interior": getattr(args, "interior", None),
        "beta_grid": getattr(args, "beta", None),
        "output": args.output,
        "dim": getattr(args, "dim", None),
        "max_r": getattr(args, "max_r", None),
    }
    if args.cap is not None:
        opts["caps"] = args.cap
    if getattr(args, "sites", None) and args.command != "steiner":
        flags["tuples"] = [parse_sites(s) for s in args.sites]
    opts.update({k: v for k, v in flags.items() if v is not None})
    caps = opts.get("caps")
    if isinstance(caps, dict):
        caps = caps.get("enumeration")
    opts["cap"] = caps
    return opts


def _box_and_tuples(opts):
    box = decay.parse_interior(opts["interior"], opts.get("dim"))
    n = int(opts["n"])
    tuples = opts.get("tuples") or [default_tuple(box, n)]
    tuples = [[tuple(s) for s in t] for t in tuples]
    return box, n, tuples


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and x != x:
        return None
    return x


def run_verify_identity(opts, args, out):
    box, n, tuples = _box_and_tuples(opts)
    reports, ok = [], True
    for beta in opts["beta_grid"]:
        for t in tuples:
            r = replica.verify_representation(box, beta, n, t, args.gamma, cap=opts["cap"])
            r["passed"] = r["abs_diff"] < 1e-9 and r["exact_equal"] is not False
            ok &= r["passed"]
            reports.append(r)
    json.dump(reports, out, indent=2)
    out.write("\n")
    return ok


def run_condense(opts, args, out):
    box, n, tuples = _box_and_tuples(opts)
    reports, ok = [], True
    for beta in opts["beta_grid"]:
        for t in tuples:
            r = continents.condensation_check(box, beta, n, t, cap=opts["cap"])
            r.pop("condensed_polynomial", None)
            r["passed"] = (r["scattered_relative"] < 1e-9
                           and r.get("scattered_exact_zero", True) is not False)
            ok &= r["passed"]
            reports.append({k: _jsonable(v) for k, v in r.items()})
    json.dump(reports, out, indent=2)
    out.write("\n")
    return ok


def run_decay(opts, args, out):
    box, n, tuples = _box_and_tuples(opts)
    records = []
    for beta in opts["beta_grid"]:
        records.extend(decay.verify_decay(box, beta, n, tuples, cap=opts["cap"]))
    if str(opts.get("output", "")).endswith(".json"):
        decay.write_records_json(records, out, box)
    else:
        decay.write_records_csv(records, out, box)
    return decay.all_satisfied(records)


def run_census(opts, args, out):
    d = int(opts["dim"])
    max_r = opts.get("max_r") or surfaces.MAX_R.get(d, 1)
    counts, failures = surfaces.surface_census(d, int(max_r), check_trees=True)
    rows = []
    for r, count in enumerate(counts, start=1):
        bound = surfaces.entropy_bound(d, r)
        rows.append({"d": d, "r": r, "N": count, "bound": float(bound),
                     "ratio": float(count / bound)})
    surfaces.write_census_csv(rows, out)
    return failures == 0 and all(row["N"] <= row["bound"] for row in rows)


def run_steiner(opts, args, out):
    terms = parse_sites(args.sites)
    box = Box.parse(args.interior) if args.interior else None
    t, edges = steiner.steiner_tree(terms, box)
    fmt = Box((1,) * len(terms[0])).format_site
    report = {"terminals": [fmt(s) for s in terms], "tau": t}
    if args.tree:
        report["edges"] = [[fmt(a), fmt(b)] for a, b in edges]
    json.dump(report, out, indent=2)
    out.write("\n")
    return True


def run_counterexample(opts, args, out):
    r = replica.local_symmetry_counterexample(args.size)
    report = {k: v for k, v in r.items() if k not in ("config", "region")}
    report["region"] = [r["config"].box.format_site(s) for s in r["region"]]
    json.dump(report, out, indent=2)
    out.write("\n")
    return bool(r["holds"] and r["involution"])


RUNNERS = {
    "verify-identity": run_verify_identity,
    "condense": run_condense,
    "decay": run_decay,
    "census": run_census,
    "steiner": run_steiner,
    "counterexample": run_counterexample,
}


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        opts = resolve(args)
        path = opts.get("output")
        with contextlib.ExitStack() as stack:
            out = sys.stdout if not path or path == "-" else stack.enter_context(open(path, "w", newline=""))
            ok = RUNNERS[args.command](opts, args, out)
    except (DomainError, ResourceError, OSError) as exc:
        print(f"treedecay: error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1


def main():
    sys.exit(cli_main())
