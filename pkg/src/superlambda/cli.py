"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 input error.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .grassmann import GrassmannNumber, relative_deviation, format_grassmann
from .superring import render_term, evaluate
from .triangulation import (
    triangulation_from_json_obj, fan_decompose, random_triangulation,
    random_spin, build_triangulation, TriangulationError, ExistingArcError, arc_key, SpinStructure,
)
from .tpaths import build_auxiliary, enumerate_paths, expand_lambda, expand_lambda_tilde, ordered_tilde_terms
from .ptolemy import (
    random_state, make_state, flip_with_record, next_flip, flip_sequence_lambda, verify_pentagon,
    random_pentagon_values, verify_double_flip, sigma_theta_deviation, rewritten_relation_deviation,
)
from .frieze import frieze_from_fan, random_frieze_input, corrupt

PASS, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# input handling

def load_document(source):
    """A path, or inline JSON starting with '{'."""
    if source is None:
        raise InputError("--input is required")
    text = source if source.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}")


def load_triangulation(source):
    obj = load_document(source)
    try:
        t, s = triangulation_from_json_obj(obj)
    except (TriangulationError, TypeError, ValueError) as exc:
        raise InputError(str(exc))
    return t, s, obj


def parse_pair(text, what="--arc"):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"{what} expects two integers 'a,b', got {text!r}")
    return a, b


def check_arc(t, a, b):
    if not (1 <= a <= t.n and 1 <= b <= t.n) or a == b:
        raise InputError(f"({a},{b}) is not an arc of the {t.n}-gon")


def pick_orientation(mode, t, s, a, b):
    if mode == "default" or (mode is None and s is None):
        return None
    if s is None:
        raise InputError("--orientation file: the document has no 'orientation'")
    missing = [d for d in t.diagonals if d not in s]
    if missing:
        raise InputError(f"orientation missing for diagonals {missing}")
    return s


def legend(t):
    xs = " ".join(f"x{t.variable(*e)}=({e[0]},{e[1]})" for e in t.arcs)
    ths = " ".join(f"θ{t.theta(tri)}=[{''.join(map(str, tri)) if t.n < 10 else ','.join(map(str, tri))}]"
                   for tri in t.triangles)
    return xs + "\n" + ths


def format_terms(rows, symbol):
    """Terms (coefficient, exponents, theta word) by theta degree, with signs."""
    rows = sorted(rows, key=lambda r: len(r[2]))
    out = ""
    for c, exps, word in rows:
        term = render_term(exps, word, abs(c), None, None, symbol)
        if not out:
            out = term if c > 0 else "-" + term
        else:
            out += (" + " if c > 0 else " - ") + term
    return out or "0"


def emit(args, text, obj):
    if args.format == "json":
        print(json.dumps(obj, ensure_ascii=False))
    else:
        print(text)


# commands

def cmd_expand(args):
    t, s, _ = load_triangulation(args.input)
    a, b = parse_pair(args.arc)
    check_arc(t, a, b)
    s = pick_orientation(args.orientation, t, s, a, b)
    if args.theta_basis == "mu-tilde":
        p = expand_lambda_tilde(t, s, a, b)
        body = format_terms(ordered_tilde_terms(t, s, a, b), "θ̃")
    else:
        p = expand_lambda(t, s, a, b)
        body = format_terms([(c, e, w) for (e, w), c in p.sorted_terms()], "θ")
    text = f"λ({a},{b}) = {body}\nterms: {len(p)}\n{legend(t)}"
    obj = {"arc": [a, b], "theta_basis": args.theta_basis, "count": len(p),
           "expansion": p.to_json_obj(),
           "variables": {f"x{t.variable(*e)}": list(e) for e in t.arcs},
           "thetas": {f"θ{t.theta(tri)}": list(tri) for tri in t.triangles}}
    emit(args, text, obj)
    return PASS


def cmd_tpaths(args):
    t, s, _ = load_triangulation(args.input)
    a, b = parse_pair(args.arc)
    check_arc(t, a, b)
    if t.is_arc(a, b):
        raise InputError(f"({a},{b}) is already an arc of the triangulation")
    s = pick_orientation(args.orientation, t, s, a, b)
    g = build_auxiliary(t, fan_decompose(t, a, b, orientation=s))
    paths = enumerate_paths(g)
    if args.only == "ordinary":
        paths = [p for p in paths if p.is_ordinary]
    elif args.only == "super":
        paths = [p for p in paths if not p.is_ordinary]
    lines = [p.render(t) for p in paths] + [f"paths: {len(paths)}"]
    emit(args, "\n".join(lines), {"arc": [a, b], "count": len(paths),
                                  "paths": [p.to_json_obj(t) for p in paths]})
    return PASS


def _state_from_doc(t, s, obj, rng):
    st = random_state(t, rng, spin=s)
    if "lambda" in obj:
        lam = dict(st.lam)
        for u, v, val in obj["lambda"]:
            if not t.is_arc(u, v):
                raise InputError(f"lambda given for ({u},{v}), not an arc")
            if not val > 0:
                raise InputError(f"lambda of ({u},{v}) must be positive")
            lam[arc_key(u, v)] = GrassmannNumber.scalar(st.k, float(val))
        st = make_state(t, st.spin, lam, st.mu)
    return st


def cmd_flip(args):
    t, s, obj = load_triangulation(args.input)
    rng = np.random.default_rng(args.seed)
    if s is None:
        s = default_orientation_for_all(t)
    st = _state_from_doc(t, s, obj, rng)
    if args.sequence:
        seq = [parse_pair(x, "--sequence") for x in args.sequence.split(";") if x.strip()]
    elif args.arc:
        a, b = parse_pair(args.arc)
        check_arc(t, a, b)
        seq = None
    else:
        raise InputError("flip needs --sequence or --arc")
    lines, trace = [], []
    cur = st
    step = 0
    while True:
        if seq is not None:
            if step == len(seq):
                break
            e = seq[step]
            if not cur.t.is_diagonal(*e):
                raise InputError(f"step {step + 1}: ({e[0]},{e[1]}) is not a diagonal")
        else:
            if cur.t.is_arc(a, b):
                break
            e = next_flip(cur.t, a, b)
        cur, rec = flip_with_record(cur, e)
        step += 1
        par = ["odd" if cur.mu[tr].is_odd else "even" for tr in (rec.theta_new_tri, rec.sigma_new_tri)]
        lines.append(f"flip {rec.e[0]},{rec.e[1]} -> {rec.f[0]},{rec.f[1]} "
                     f"oriented {cur.orient[rec.f][0]}->{cur.orient[rec.f][1]}  "
                     f"lambda body {rec.values['f'].body:.12g}  mu parity {par[0]}/{par[1]}")
        trace.append({"flipped": list(rec.e), "new": list(rec.f),
                      "orientation": list(cur.orient[rec.f]),
                      "lambda": [float(v) for v in rec.values["f"].c],
                      "mu_parity": par})
    out = {"flips": trace}
    if seq is None:
        lam = cur.lam_of(a, b)
        lines.append(f"lambda({a},{b}) = {format_grassmann(lam)}")
        out["lambda"] = [float(v) for v in lam.c]
    emit(args, "\n".join(lines), out)
    return PASS


def default_orientation_for_all(t):
    return SpinStructure.from_pairs(sorted(t.diagonals))


def cmd_frieze(args):
    rng = np.random.default_rng(args.seed)
    if args.x:
        try:
            x = [float(v) for v in args.x.split(",")]
        except ValueError:
            raise InputError("--x expects comma-separated numbers")
        width = len(x)
        if args.classical:
            xi = [GrassmannNumber.zero(1)] * (width + 1)
        else:
            _, xi = random_frieze_input(width, rng)
        k = xi[0].k
        x = [GrassmannNumber.scalar(k, v) for v in x]
    else:
        width = args.width
        if width < 1:
            raise InputError("--width must be at least 1")
        x, xi = random_frieze_input(width, rng)
        if args.classical:
            xi = [GrassmannNumber.zero(x[0].k)] * (width + 1)
    if any(not g.body > 0 for g in x):
        raise InputError("frieze entries need positive bodies")
    f = frieze_from_fan(x, xi)
    if args.corrupt:
        d, r = parse_pair(args.corrupt, "--corrupt")
        f = corrupt(f, d, r)
    fails = f.failing_diamonds(args.tol)
    glide = f.glide_deviation()
    ok = not fails and glide <= args.tol
    lines = [f.render(), "",
             f"diamonds: {len(f.diamonds())} checked, {len(fails)} failing",
             f"max diamond deviation: {f.max_diamond_deviation():.3e}",
             f"glide deviation: {glide:.3e}"]
    lines += [f"failing diamond: diagonal {i} row {r}" for i, r in fails]
    lines.append("PASS" if ok else "FAIL")
    obj = f.to_json_obj()
    obj.update({"failing": [list(p) for p in fails], "glide_deviation": glide, "pass": ok})
    emit(args, "\n".join(lines), obj)
    return PASS if ok else FAIL


# verification suites; each returns the max deviation over the samples

def _pairs(n, rng):
    a, b = (int(v) for v in rng.choice(np.arange(1, n + 1), 2, replace=False))
    return a, b


def verify_pentagon_suite(args, rng):
    dev = 0.0
    for _ in range(args.samples):
        dev = max(dev, max(verify_pentagon(random_pentagon_values(rng), corrupt=args.corrupt).values()))
    return dev


def _random_quad_state(rng):
    t = build_triangulation(4, [(1, 3)])
    return random_state(t, rng, mix=True, even_souls=True), (1, 3)


def verify_double_flip_suite(args, rng):
    dev = 0.0
    for _ in range(args.samples):
        st, e = _random_quad_state(rng)
        lam_dev, mu_dev = verify_double_flip(st, e, corrupt=args.corrupt)
        dev = max(dev, lam_dev, mu_dev)
    return dev


def verify_sigma_theta_suite(args, rng):
    dev = 0.0
    for _ in range(args.samples):
        st, e = _random_quad_state(rng)
        _, rec = flip_with_record(st, e)
        if args.corrupt:
            rec.sigma_new = rec.sigma_new + rec.theta_new * 0.5 + rec.sigma * 0.25
        dev = max(dev, sigma_theta_deviation(rec), rewritten_relation_deviation(rec))
    return dev


def verify_oracle_suite(args, rng):
    dev = 0.0
    for _ in range(args.samples):
        n = args.n if args.n else int(rng.integers(5, 13))
        t = random_triangulation(n, rng)
        st = random_state(t, rng, spin=random_spin(t, rng))
        a, b = _pairs(n, rng)
        p = expand_lambda(t, st.spin, a, b)
        got = evaluate(p, [st.lam[e].body for e in t.arcs], [st.mu[tri] for tri in t.triangles])
        if args.corrupt:
            got = got * 1.001
        want = flip_sequence_lambda(t, None, a, b, st)
        dev = max(dev, relative_deviation(got, want))
    return dev


def verify_frieze_suite(args, rng):
    dev = 0.0
    for _ in range(args.samples):
        width = args.n - 3 if args.n else int(rng.integers(2, 7))
        f = frieze_from_fan(*random_frieze_input(width, rng))
        if args.corrupt:
            f = corrupt(f, 1, 2)
        dev = max(dev, f.max_diamond_deviation(), f.glide_deviation(), f.edge_row_deviation())
    return dev


SUITES = {
    "pentagon": verify_pentagon_suite,
    "double-flip": verify_double_flip_suite,
    "sigma-theta": verify_sigma_theta_suite,
    "oracle": verify_oracle_suite,
    "frieze": verify_frieze_suite,
}


def cmd_verify(args):
    if args.samples < 1:
        raise InputError("--samples must be at least 1")
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    if args.n is not None and args.n < 4:
        raise InputError("--n must be at least 4")
    rng = np.random.default_rng(args.seed)
    start = time.perf_counter()
    dev = SUITES[args.suite](args, rng)
    ok = dev <= args.tol
    elapsed = time.perf_counter() - start
    text = (f"verify {args.suite}: samples={args.samples} seed={args.seed} "
            f"max_deviation={dev:.3e} tol={args.tol:g} {'PASS' if ok else 'FAIL'}")
    emit(args, text, {"suite": args.suite, "samples": args.samples, "seed": args.seed,
                      "max_deviation": dev, "tol": args.tol, "pass": ok,
                      "seconds": round(elapsed, 3)})
    return PASS if ok else FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="superlambda", description="Super lambda-lengths, T-paths and super-friezes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("expand", help="Laurent expansion of a lambda-length")
    sp.add_argument("--input", required=True, help="triangulation JSON file or inline JSON")
    sp.add_argument("--arc", required=True, help="a,b")
    sp.add_argument("--orientation", choices=["default", "file"], default=None,
                    help="default orientation of the arc, or the one in the document")
    sp.add_argument("--theta-basis", choices=["mu", "mu-tilde"], default="mu")
    common(sp)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("tpaths", help="list super T-paths")
    sp.add_argument("--input", required=True)
    sp.add_argument("--arc", required=True)
    sp.add_argument("--orientation", choices=["default", "file"], default=None)
    sp.add_argument("--only", choices=["all", "ordinary", "super"], default="all")
    common(sp)
    sp.set_defaults(func=cmd_tpaths)

    sp = sub.add_parser("flip", help="run flips on a randomly decorated triangulation")
    sp.add_argument("--input", required=True)
    sp.add_argument("--sequence", help="flips 'u,v;u,v;...'")
    sp.add_argument("--arc", help="flip until a,b is an arc and print its lambda-length")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_flip)

    sp = sub.add_parser("frieze", help="build and check a super-frieze")
    sp.add_argument("--x", help="first diagonal even entries 'x1,...,xn'")
    sp.add_argument("--width", type=int, default=3)
    sp.add_argument("--classical", action="store_true", help="all odd entries zero")
    sp.add_argument("--corrupt", help="perturb even entry 'diagonal,row'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)
    sp.set_defaults(func=cmd_frieze)

    sp = sub.add_parser("verify", help="randomized identity checks")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--n", type=int, default=None, help="polygon size (oracle, frieze)")
    sp.add_argument("--corrupt", action="store_true", help="inject an error (negative control)")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ExistingArcError, TriangulationError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
