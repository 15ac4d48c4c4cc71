"""Recompute the reference computations and print the numbers the tests freeze.

    python scripts/reproduce_examples.py [--svg-dir DIR]
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from tropicast import jsonio as J
from tropicast.arrangement import intersect, mixed_cells
from tropicast.errors import DegenerateProjection, OverlapDegenerate
from tropicast.exactgeom import face_in_direction
from tropicast.fiber import face_of_fiber_polytope, fiber_polytope
from tropicast.lines import caterpillar, product_pair_system, sips_between
from tropicast.project import image_dual_subdivision, monomial_pushforward, node_points, project_curve, self_intersections
from tropicast.svg import emit_svg

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass(frozen=True)
class Config:
    svg_dir: Path | None = None


def fmt(p):
    return "(" + ", ".join(str(x) for x in p) + ")"


def cube_hexagon(cfg: Config):
    cube = J.polytope_from_json(J.load(DATA / "cube.json"))
    S = fiber_polytope(cube, (1, 1, 1)).polytope
    w = (0, -1, 0)
    t = face_of_fiber_polytope(cube, face_in_direction(cube, w), (1, 1, 1), w)
    print("cube, psi = (1,1,1)")
    print("  fiber polytope vertices:", ", ".join(fmt(v) for v in S.vertices))
    print("  offset of the face in direction", fmt(w), "->", fmt(t))


def monomial_map(cfg: Config):
    A = [[1, 2, 0], [0, 1, 1]]
    g = J.poly_from_json(J.load(DATA / "eliminant.json"))
    B = monomial_pushforward(g, A)
    two_planes = J.system_from_json(J.load(DATA / "two_planes.json"))
    R = intersect(two_planes)
    img, rep = image_dual_subdivision(R, A, B)
    print("two planes under", A)
    print("  pushforward terms:", ", ".join(f"{t.coeff}*x^{t.exp} (val {t.val})" for t in B.terms))
    print("  mixed cells of the pair:", len(mixed_cells(two_planes)))
    for c in img.dual_subdivision:
        print(f"  image vertex {fmt(c.point)}: p={c.p}, cell {', '.join(fmt(v) for v in c.image.vertices)},"
              f" offset {fmt(c.offset)}")
    print("  coherent:", rep.coherent, " matches pushforward subdivision:", rep.matches_pushforward)
    if cfg.svg_dir:
        emit_svg(img, cfg.svg_dir / "monomial_map.svg")
        emit_svg(B.subdivision(), cfg.svg_dir / "pushforward_subdivision.svg")


def line_crossing(cfg: Config):
    Y = intersect(caterpillar(3)[1]).complex
    print("line [12,34] under [[x,1,0],[y,0,1]]: self-intersection counts")
    for y in range(3, -4, -1):
        row = []
        for x in range(-3, 4):
            try:
                row.append(str(len(self_intersections(project_curve(Y, [[x, 1, 0], [y, 0, 1]])))))
            except (DegenerateProjection, OverlapDegenerate):
                row.append(".")
        print(f"  y={y:+d}: " + " ".join(row))


def product_curve(cfg: Config):
    E = product_pair_system()
    R = intersect([E["f1"], E["f2"]])
    img = project_curve(R, E["A"])
    strict = self_intersections(img)
    nodes = node_points(img)
    (a_eps, a_0), (b_dlt, _) = E["factors1"], E["factors2"]
    hits = sips_between(intersect([a_eps, b_dlt]).complex, intersect([a_0, b_dlt]).complex, E["A"],
                        include_common=True)
    print("perturbed products under", E["A"])
    print(f"  strict self-intersections {len(strict)}, with crossing vertices {len(nodes)}")
    print("  points shared by the images of two component lines:")
    for p, kinds in hits:
        print("   ", fmt(p), sorted(kinds))
    if cfg.svg_dir:
        img2, _ = image_dual_subdivision(R, E["A"])
        emit_svg(img2, cfg.svg_dir / "product_curve.svg")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--svg-dir", type=Path)
    a = ap.parse_args(argv)
    cfg = Config(a.svg_dir)
    if cfg.svg_dir:
        cfg.svg_dir.mkdir(parents=True, exist_ok=True)
    for step in (cube_hexagon, monomial_map, line_crossing, product_curve):
        step(cfg)
        print()


if __name__ == "__main__":
    main()
