"""Command-line front end: JSON documents in, JSON/CSV/SVG out.

Exit status: 0 on success, 1 on usage or input errors, 2 when the input is
geometrically degenerate (an error document is written to stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import jsonio as J
from .arrangement import IntersectionReport, intersect, is_transversal
from .errors import GeometricDegeneracy, TropicastError
from .fiber import fiber_polytope, mixed_fiber_polytope
from .lines import caterpillar, sweep
from .project import image_dual_subdivision, node_points, project_curve, self_intersections, with_sips
from .svg import emit_svg
from .tropoly import ValuedPolynomial, hypersurface


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _curve(path):
    """An intersection report for a system document, or a bare complex."""
    d = J.load(path)
    if d.get("kind") == "system":
        return intersect(J.system_from_json(d))
    return J.complex_from_json(d)


def _report(path) -> IntersectionReport:
    c = _curve(path)
    if not isinstance(c, IntersectionReport):
        raise UsageError("this command needs a system of polynomials, not a bare complex")
    return c


def _pt(p):
    return [J.rat(x) for x in p]


def cmd_tropicalize(a):
    d = J.load(a.poly)
    if a.prime is not None:
        d = {**d, "prime": a.prime}
    return J.poly_to_json(J.poly_from_json(d))


def cmd_hypersurface(a):
    f = J.poly_from_json(J.load(a.poly))
    H = hypersurface(f)
    if a.svg:
        emit_svg(H, a.svg)
    return J.complex_to_json(H)


def cmd_intersect(a):
    R = _report(a.system)
    out = J.doc("intersection", proper=R.proper, vacuous=R.vacuous, complex=J.complex_to_json(R.complex))
    if R.proper and not R.vacuous:
        cert = is_transversal(R)
        out["transversal"] = cert.transversal
        out["transversal_exhaustive"] = cert.exhaustive
    return out


def _image_doc(img):
    pieces = [
        {"face": p.face, "kind": p.kind, "origin": _pt(p.origin), "direction": _pt(p.direction)} for p in img.pieces
    ]
    return J.doc("image", matrix=[list(r) for r in img.projection.A], pieces=pieces,
                 vertex_images=[_pt(v) for v in img.vertex_images])


def cmd_project(a):
    img = project_curve(_curve(a.curve), J.parse_matrix(a.matrix))
    if a.svg:
        emit_svg(img, a.svg)
    return _image_doc(img)


def cmd_selfint(a):
    img = with_sips(project_curve(_curve(a.curve), J.parse_matrix(a.matrix)))
    sips = img.sips
    nodes = node_points(img)
    strict = {s.point for s in sips}
    points = [
        {"pt": _pt(s.point), "faces": list(s.pairs[0]), "kinds": list(s.kinds[0]),
         "pairs": [list(p) for p in s.pairs]}
        for s in sips
    ]
    if a.svg:
        emit_svg(img, a.svg)
    return J.doc("selfint", count=len(sips), points=points, node_count=len(nodes),
                 crossings=[_pt(p) for p in nodes if p not in strict])


def cmd_fiber(a):
    P = J.polytope_from_json(J.load(a.polytope))
    fp = fiber_polytope(P, [int(x) for x in J.parse_vector(a.psi)])
    return J.doc("fiber", psi=list(fp.psi.coeffs), polytope=J.polytope_to_json(fp.polytope))


def cmd_mixedfiber(a):
    Ps = [J.polytope_from_json(J.load(p)) for p in a.polytope]
    fp = mixed_fiber_polytope(Ps, [int(x) for x in J.parse_vector(a.psi)])
    return J.doc("mixedfiber", psi=list(fp.psi.coeffs), polytope=J.polytope_to_json(fp.polytope))


def cmd_dualsub(a):
    R = _report(a.curve)
    push = J.poly_from_json(J.load(a.pushforward)) if a.pushforward else None
    img, rep = image_dual_subdivision(R, J.parse_matrix(a.matrix), push)
    cells = []
    for c in img.dual_subdivision:
        item = {"point": _pt(c.point), "p": c.p,
                "preimages": [J.encode_value(x) for x in c.preimages]}
        if c.image is not None:
            item["image"] = [_pt(v) for v in c.image.vertices]
        if c.offset is not None:
            item["offset"] = _pt(c.offset)
        cells.append(item)
    if a.svg:
        emit_svg(img, a.svg)
    return J.doc("dualsub", cells=cells, coherent=rep.coherent, matches_pushforward=rep.matches_pushforward,
                 sip_count=len(img.sips), notes=list(img.notes))


def cmd_caterpillar(a):
    lengths = J.parse_vector(a.lengths) if a.lengths else None
    line, forms = caterpillar(a.n, lengths)
    return J.doc("caterpillar", n=a.n, label=line.label(), line=J.complex_to_json(line.complex()),
                 forms=J.system_to_json(forms))


def cmd_sweep(a):
    seed = int(os.environ.get("TROPICAST_SEED", a.seed))
    rows = sweep(a.n, a.trials, seed, a.family)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["n", "trial", "count", "bound", "ok"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "ok": str(r["ok"]).lower()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropicast", description="Exact tropical curves, projections and fiber polytopes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        s.add_argument("--out", help="output file (default stdout)")
        return s

    s = add("tropicalize", cmd_tropicalize, "coefficient valuations of a polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--prime", type=int)
    s = add("hypersurface", cmd_hypersurface, "tropical hypersurface of a valued polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--svg")
    s = add("intersect", cmd_intersect, "intersection of the hypersurfaces of a system")
    s.add_argument("--system", required=True)
    for name, fn, h in (("project", cmd_project, "image of a curve in the plane"),
                        ("selfint", cmd_selfint, "self-intersection points of the image")):
        s = add(name, fn, h)
        s.add_argument("--curve", required=True)
        s.add_argument("--matrix", required=True)
        s.add_argument("--svg")
    s = add("fiber", cmd_fiber, "fiber polytope of a polytope under a functional")
    s.add_argument("--polytope", required=True)
    s.add_argument("--psi", required=True)
    s = add("mixedfiber", cmd_mixedfiber, "mixed fiber polytope of several polytopes")
    s.add_argument("--polytope", required=True, action="append")
    s.add_argument("--psi", required=True)
    s = add("dualsub", cmd_dualsub, "dual subdivision of the image of a curve")
    s.add_argument("--curve", required=True)
    s.add_argument("--matrix", required=True)
    s.add_argument("--pushforward")
    s.add_argument("--svg")
    s = add("caterpillar", cmd_caterpillar, "standard caterpillar line with its linear forms")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--lengths")
    s = add("sweep", cmd_sweep, "random projections of random lines against the caterpillar bound (CSV)")
    s.add_argument("--family", choices=["caterpillar", "any"], default="caterpillar")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    return p


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, e: Exception) -> str:
    return J.dumps(J.doc("error", error=type(e).__name__, category=kind, message=str(e)))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return 1
    try:
        result = args.fn(args)
    except GeometricDegeneracy as e:
        sys.stdout.write(_error("degenerate", e))
        return 2
    except (UsageError, TropicastError, ValueError, KeyError, TypeError, OSError) as e:
        sys.stdout.write(_error("usage", e))
        return 1
    _emit(result if isinstance(result, str) else J.dumps(result), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
