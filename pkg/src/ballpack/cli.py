"""Command-line front end.

Subcommands produce and consume JSON packing documents:

* ``project`` / ``dual``  -- ball arrangements of edge-scribed solids
* ``spectra``             -- Mobius-invariant eigenvalue signature of a solid
* ``cluster``             -- reflection-group closures of a seed packing
* ``squares``             -- the curvature = n^2 walk inside one packing
* ``verify``              -- residual checks on a document
* ``integrality``         -- certify integer (or golden-integer) curvatures
* ``render``              -- deterministic SVG for planar documents

Exit codes: 0 success, 1 failed verification, 2 usage or input errors.
Relative ``--out`` paths are placed under ``$BALLPACK_OUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from .documents import (
    PackingDocument,
    document_from_arrangement,
    document_from_cluster,
    from_json,
    scalar_to_text,
    to_json,
)
from .exactnum import QuadScalar, RING_Z, RING_Z_PHI, approx
from .lorentz import EXTERNALLY_TANGENT, DISJOINT, classify_pair
from .apollonian import (
    apollonian_group_from_packing,
    generate_cluster,
    packing_from_curvatures,
    perfect_square_sequence,
)
from .packings import (
    BallArrangement,
    centered_projection,
    dual,
    grouped_spectra,
    project,
)
from .polytopes import Solid, flags, regular_edge_scribed, solid_from_name
from .relations import (
    INTEGRAL,
    NOT_CERTIFIED,
    flag_curvatures,
    gram_curvature_identity,
    integrality_condition,
    relative_residual,
    soddy_gosset_residual,
    verify_flag_relation,
)
from .svgout import RenderSpec, render_svg

CENTER_RANKS = {"vertex": 0, "edge": 1, "face": 2}
FLOAT_CHECK_TOL = 1e-9
_DUAL_KIND = {
    "simplex": "simplex",
    "cube": "cross",
    "cross": "cube",
    "icosahedron": "dodecahedron",
    "dodecahedron": "icosahedron",
    "ngon": "ngon",
    "cell24": "cell24",
    "cell600": "cell120",
    "cell120": "cell600",
}


# -- curvature tokens ---------------------------------------------------------

_TERM_RE = re.compile(r"^(\d+(?:/\d+)?)?(phi|sqrt(\d+))?$")
_GOLDEN = QuadScalar(Fraction(1, 2), Fraction(1, 2), 5)


def _sqrt_term(coef: Fraction, m: int):
    """coef * sqrt(m) with the square part of m pulled into the coefficient."""
    k, j = 1, 2
    while j * j <= m:
        while m % (j * j) == 0:
            m //= j * j
            k *= j
        j += 1
    coef = coef * k
    if m == 0:
        return Fraction(0)
    if m == 1:
        return coef
    return QuadScalar(0, coef, m)


def parse_exact_curvature(token: str):
    """Parse "-3", "5/2", "phi+1", "2phi", "1/2sqrt2-1" into an exact scalar."""
    t = token.strip().replace(" ", "")
    if not t:
        raise ValueError("empty curvature value")
    total = Fraction(0)
    for part in re.findall(r"[+-]?[^+-]+", t):
        sign = -1 if part.startswith("-") else 1
        body = part.lstrip("+-")
        mt = _TERM_RE.match(body)
        if not mt or (mt[1] is None and mt[2] is None):
            raise ValueError(f"malformed curvature {token!r}")
        coef = Fraction(mt[1]) if mt[1] else Fraction(1)
        if mt[2] is None:
            val = coef
        elif mt[2] == "phi":
            val = _GOLDEN * coef
        else:
            val = _sqrt_term(coef, int(mt[3]))
        total = total + sign * val
    return total


def parse_initial(text: str, mode: str) -> tuple:
    toks = [t for t in text.split(",") if t.strip()]
    if len(toks) != 3:
        raise ValueError(f"--initial needs three comma-separated values, got {text!r}")
    if mode == "float":
        out = []
        for t in toks:
            try:
                out.append(approx(parse_exact_curvature(t)))
            except ValueError:
                out.append(float(t))
        return tuple(out)
    return tuple(parse_exact_curvature(t) for t in toks)


# -- small I/O helpers --------------------------------------------------------


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get("BALLPACK_OUT_DIR")
    if base and not p.is_absolute():
        p = Path(base) / p
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_text(path: str, text: str) -> Path:
    p = _out_path(path)
    p.write_text(text, encoding="utf-8")
    return p


def _read_doc(path: str) -> PackingDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ValueError(f"cannot read {path}: {err}")
    return from_json(text)


def _solid(name: str) -> Solid:
    return solid_from_name(name)


def _say(msg: str) -> None:
    print(msg)


# -- subcommands --------------------------------------------------------------


def cmd_project(args) -> int:
    s = _solid(args.solid)
    if args.center == "none":
        arr = project(regular_edge_scribed(s))
    else:
        arr = centered_projection(s, CENTER_RANKS[args.center])
    doc = document_from_arrangement(
        arr,
        solid=s.name,
        seed={"kind": "projection", "solid": s.name, "center": args.center},
    )
    p = _write_text(args.out, to_json(doc))
    _say(f"wrote {p} ({len(doc.entries)} balls, mode {doc.mode})")
    return 0


def cmd_dual(args) -> int:
    doc = _read_doc(getattr(args, "in"))
    seed = doc.seed
    if seed.get("kind") != "projection":
        raise ValueError("dual needs a document produced by the project command")
    s = _solid(seed["solid"])
    center = seed.get("center", "none")
    if center == "none":
        arr = project(regular_edge_scribed(s))
    else:
        arr = centered_projection(s, CENTER_RANKS[center])
    d_arr = dual(arr)
    d_name = Solid(_DUAL_KIND[s.kind], s.n).name
    out = document_from_arrangement(
        d_arr,
        solid=d_name,
        seed={
            "kind": "dual-projection",
            "solid": d_name,
            "primal": s.name,
            "center": center,
        },
    )
    p = _write_text(args.out, to_json(out))
    _say(f"wrote {p} ({len(out.entries)} balls, mode {out.mode})")
    return 0


def _eig_text(v: float) -> str:
    r = round(v)
    if abs(v - r) < 1e-6:
        return str(int(r))
    return format(v, ".6g")


def cmd_spectra(args) -> int:
    s = _solid(args.solid)
    groups = grouped_spectra(s)
    _say(" ".join(f"{_eig_text(v)}:{mult}" for v, mult in groups))
    return 0


def cmd_cluster(args) -> int:
    s = _solid(args.solid)
    initial = parse_initial(args.initial, args.mode)
    seed = packing_from_curvatures(s, initial, exact=args.mode == "exact")
    gens = apollonian_group_from_packing(seed)
    cluster = generate_cluster(seed, gens, args.depth)
    doc = document_from_cluster(
        cluster,
        solid=s.name,
        seed={
            "kind": "cluster",
            "solid": s.name,
            "initial": [t.strip() for t in args.initial.split(",")],
            "depth": args.depth,
            "flavor": cluster.flavor,
        },
    )
    p = _write_text(args.out, to_json(doc))
    _say(f"wrote {p} ({len(doc.entries)} balls, mode {doc.mode})")
    return 0


def cmd_squares(args) -> int:
    bad = None
    for n, b in perfect_square_sequence(args.p, args.n_max):
        k = b.curvature
        _say(f"{n} {scalar_to_text(k)}")
        if bad is None and k != n * n:
            bad = n
    if bad is not None:
        print(f"error: curvature at step {bad} is not {bad}^2", file=sys.stderr)
        return 1
    return 0


def _check_packing(doc: PackingDocument):
    balls = doc.balls()
    n = len(balls)
    for i in range(n):
        for j in range(i + 1, n):
            c = classify_pair(balls[i], balls[j])
            if c not in (EXTERNALLY_TANGENT, DISJOINT):
                return False, f"balls {i} and {j} are {c}"
    return True, f"{n} balls, {n * (n - 1) // 2} pairs"


def _well_conditioned(window) -> bool:
    import numpy as np
    from .lorentz import lorentz_product

    g = np.array(
        [[approx(lorentz_product(u.v, w.v)) for w in window] for u in window]
    )
    return bool(np.linalg.cond(g) < 1e6)


def _check_descartes(doc: PackingDocument, budget: int = 200):
    balls = doc.balls()
    n = doc.dimension + 2
    worst = 0.0
    windows = 0
    for i in range(min(len(balls) - n + 1, budget)):
        window = balls[i : i + n]
        # float solves on nearly dependent quadruples only amplify roundoff,
        # so they are skipped just like exactly singular ones
        if doc.is_float and not _well_conditioned(window):
            continue
        try:
            res = gram_curvature_identity(window)
        except ValueError:
            continue
        windows += 1
        ref = max(abs(approx(b.curvature)) for b in window) ** 2
        rel = relative_residual(res, ref)
        worst = max(worst, rel)
        if rel > FLOAT_CHECK_TOL:
            return False, f"window at {i} has relative residual {rel:.3g}"
    if not windows:
        return True, "no invertible windows (vacuous)"
    return True, f"{windows} windows, max relative residual {worst:.3g}"


def _tangent_cliques(balls, size: int, node_budget: int = 48, clique_budget: int = 200):
    """Deterministic batch of mutually tangent ``size``-tuples (by index)."""
    m = min(len(balls), node_budget)
    adj = [[False] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            adj[i][j] = adj[j][i] = (
                classify_pair(balls[i], balls[j]) == EXTERNALLY_TANGENT
            )
    out = []

    def grow(clique, start):
        if len(out) >= clique_budget:
            return
        if len(clique) == size:
            out.append(tuple(clique))
            return
        for k in range(start, m):
            if all(adj[c][k] for c in clique):
                grow(clique + [k], k + 1)
                if len(out) >= clique_budget:
                    return

    grow([], 0)
    return out


def _check_soddy(doc: PackingDocument):
    balls = doc.balls()
    size = doc.dimension + 2
    cliques = _tangent_cliques(balls, size)
    if not cliques:
        return True, "no mutually tangent tuples found (vacuous)"
    worst = 0.0
    for idx in cliques:
        ks = [balls[i].curvature for i in idx]
        res = soddy_gosset_residual(ks)
        ref = max(abs(approx(k)) for k in ks) ** 2
        rel = relative_residual(res, ref)
        worst = max(worst, rel)
        if rel > FLOAT_CHECK_TOL:
            return False, f"tuple {idx} has relative residual {rel:.3g}"
    return True, f"{len(cliques)} tangent tuples, max relative residual {worst:.3g}"


def _check_flags(doc: PackingDocument):
    seed = doc.seed
    if seed.get("kind") != "projection":
        raise ValueError("flag check applies only to project documents")
    s = _solid(seed["solid"])
    p = regular_edge_scribed(s)
    balls = doc.balls()
    if len(balls) != len(p.vertices):
        raise ValueError("document does not hold one ball per vertex")
    arr = BallArrangement(tuple(balls))
    worst = 0.0
    count = 0
    for flag in flags(p):
        ks = flag_curvatures(arr, flag)
        res = verify_flag_relation(s, ks)
        ref = max(abs(approx(k)) for k in ks) ** 2
        rel = relative_residual(res, ref)
        worst = max(worst, rel)
        count += 1
        if rel > FLOAT_CHECK_TOL:
            return False, f"flag {flag} has relative residual {rel:.3g}"
    return True, f"{count} flags, max relative residual {worst:.3g}"


_CHECKS = {
    "packing": _check_packing,
    "descartes": _check_descartes,
    "soddy": _check_soddy,
    "flags": _check_flags,
}


def _applicable_checks(doc: PackingDocument) -> list:
    names = ["packing"]
    if len(doc.entries) >= doc.dimension + 2:
        names += ["descartes", "soddy"]
    if doc.seed.get("kind") == "projection":
        names.append("flags")
    return names


def cmd_verify(args) -> int:
    doc = _read_doc(getattr(args, "in"))
    if args.checks:
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in names if c not in _CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
    else:
        names = _applicable_checks(doc)
    failed = False
    for name in names:
        ok, detail = _CHECKS[name](doc)
        _say(f"{name}: {'ok' if ok else 'FAILED'} ({detail})")
        failed = failed or not ok
    return 1 if failed else 0


def cmd_integrality(args) -> int:
    s = _solid(args.solid)
    initial = parse_initial(args.initial, "exact")
    cert = integrality_condition(s, initial)
    _say(f"certificate: {cert}")
    if cert == NOT_CERTIFIED:
        return 1
    if args.certify_depth is not None:
        seed = packing_from_curvatures(s, initial, exact=True)
        gens = apollonian_group_from_packing(seed)
        cluster = generate_cluster(seed, gens, args.certify_depth)
        ring = RING_Z if cert == INTEGRAL else RING_Z_PHI
        ok = cluster.curvatures_in_ring(ring)
        _say(
            f"depth-{args.certify_depth} curvatures in {ring}: "
            f"{'yes' if ok else 'NO'} ({len(cluster)} balls)"
        )
        if not ok:
            return 1
    return 0


def _render_spec_from_file(path: str) -> RenderSpec:
    import json

    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise ValueError(f"cannot read {path}: {err}")
    except json.JSONDecodeError as err:
        raise ValueError(f"not a JSON render spec: {err}")
    known = {
        "viewport",
        "stroke_width",
        "stroke",
        "palette",
        "max_radius_clip",
        "halfspace_margin",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown render spec keys: {', '.join(sorted(unknown))}")
    if "viewport" in raw:
        raw["viewport"] = tuple(raw["viewport"])
    if "palette" in raw:
        raw["palette"] = tuple(raw["palette"])
    return RenderSpec(**raw)


def cmd_render(args) -> int:
    doc = _read_doc(getattr(args, "in"))
    spec = _render_spec_from_file(args.spec) if args.spec else RenderSpec()
    svg = render_svg(doc, spec)
    p = _write_text(args.out, svg)
    _say(f"wrote {p} ({len(doc.entries)} elements)")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ballpack",
        description="Exact ball packings from edge-scribed regular polytopes.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project an edge-scribed solid to balls")
    p.add_argument("--solid", required=True)
    p.add_argument(
        "--center", choices=("vertex", "edge", "face", "none"), default="none"
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("dual", help="facet balls of a projected document")
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("spectra", help="print eigenvalue:multiplicity signature")
    p.add_argument("--solid", required=True)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("cluster", help="grow a reflection cluster from a seed")
    p.add_argument("--solid", required=True)
    p.add_argument("--initial", required=True, help="three curvatures, e.g. -3,5,8")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("squares", help="walk whose n-th curvature is n^2")
    p.add_argument("--p", type=int, choices=(3, 4, 5), required=True)
    p.add_argument("--n-max", type=int, default=20)
    p.set_defaults(func=cmd_squares)

    p = sub.add_parser("verify", help="run residual checks on a document")
    p.add_argument("--in", required=True)
    p.add_argument(
        "--checks", default=None, help="comma list: descartes,soddy,flags,packing"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrality", help="certify curvature integrality")
    p.add_argument("--solid", required=True)
    p.add_argument("--initial", required=True)
    p.add_argument("--certify-depth", type=int, default=None)
    p.set_defaults(func=cmd_integrality)

    p = sub.add_parser("render", help="render a planar document to SVG")
    p.add_argument("--in", required=True)
    p.add_argument("--spec", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return ap


def _fold_value_options(argv) -> list:
    """Turn ["--initial", "-3,5,8"] into ["--initial=-3,5,8"].

    argparse otherwise mistakes a leading-dash value for an option; folding
    lets curvature lists start with a negative entry.
    """
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--initial" and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = build_parser().parse_args(_fold_value_options(list(argv)))
    except SystemExit as err:
        return int(err.code or 0)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
