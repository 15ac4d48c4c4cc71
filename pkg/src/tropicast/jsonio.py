"""JSON encoding with exact rationals written as "a/b" strings.

Every document carries ``"schema": "tropicast/1"`` and a ``"kind"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .exactgeom import Polytope, convex_hull
from .tropoly import Cell, Term, TropicalComplex, ValuedPolynomial, padic_valuation

SCHEMA = "tropicast/1"


class SchemaError(ValueError):
    pass


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise SchemaError(f"rationals must be integers or 'a/b' strings, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except ValueError as e:
            raise SchemaError(f"bad rational {s!r}") from e
    raise SchemaError(f"bad rational {s!r}")


def _point(p) -> list[str]:
    return [rat(x) for x in p]


def _parse_point(p) -> tuple[Fraction, ...]:
    return tuple(parse_rat(x) for x in p)


def doc(kind: str, **body) -> dict:
    return {"schema": SCHEMA, "kind": kind, **body}


def check(d: dict, *kinds: str) -> dict:
    if not isinstance(d, dict) or d.get("schema") != SCHEMA:
        raise SchemaError(f"expected a {SCHEMA} document")
    if kinds and d.get("kind") not in kinds:
        raise SchemaError(f"expected kind in {kinds}, got {d.get('kind')!r}")
    return d


# tagged encoding for the mixed sets/tuples stored in cell duals
def encode_value(x):
    if isinstance(x, frozenset):
        return {"set": [encode_value(y) for y in sorted(x)]}
    if isinstance(x, tuple):
        return {"tuple": [encode_value(y) for y in x]}
    if isinstance(x, Fraction):
        return {"q": rat(x)}
    if isinstance(x, (int, str)) or x is None:
        return x
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode_value(x):
    if isinstance(x, dict):
        if "set" in x:
            return frozenset(decode_value(y) for y in x["set"])
        if "tuple" in x:
            return tuple(decode_value(y) for y in x["tuple"])
        if "q" in x:
            return parse_rat(x["q"])
    if isinstance(x, list):
        raise SchemaError("bare lists are not allowed in tagged values")
    return x


# --- polynomials -------------------------------------------------------------


def poly_to_json(f: ValuedPolynomial) -> dict:
    terms = []
    for t in f.terms:
        item = {"exp": list(t.exp), "val": rat(t.val)}
        if t.coeff is not None:
            item["coeff"] = rat(t.coeff)
        terms.append(item)
    return doc("polynomial", n_vars=f.n_vars, prime=f.prime, collision=f.collision, terms=terms)


def poly_from_json(d: dict) -> ValuedPolynomial:
    """Terms give ``val`` directly, or ``coeff`` together with a document-level ``prime``."""
    if "schema" in d:
        check(d, "polynomial")
    prime = d.get("prime")
    terms = []
    for item in d["terms"]:
        exp = tuple(int(a) for a in item["exp"])
        coeff = parse_rat(item["coeff"]) if "coeff" in item else None
        if "val" in item:
            val = parse_rat(item["val"])
        elif coeff is not None and prime is not None:
            if coeff == 0:
                continue
            val = padic_valuation(coeff, prime)
        else:
            raise SchemaError("a term needs 'val', or 'coeff' with a prime")
        terms.append(Term(exp, val, coeff))
    if not terms:
        raise SchemaError("polynomial has no terms")
    n = int(d.get("n_vars", len(terms[0].exp)))
    return ValuedPolynomial(n, tuple(terms), prime, bool(d.get("collision", False)))


def system_to_json(polys) -> dict:
    return doc("system", polynomials=[poly_to_json(f) for f in polys])


def system_from_json(d: dict) -> list[ValuedPolynomial]:
    check(d, "system")
    return [poly_from_json(p) for p in d["polynomials"]]


# --- polytopes ---------------------------------------------------------------


def polytope_to_json(P: Polytope) -> dict:
    return doc("polytope", ambient_dim=P.ambient_dim, dim=P.dim, vertices=[_point(v) for v in P.vertices])


def polytope_from_json(d: dict) -> Polytope:
    """Accepts ``vertices`` or any ``points`` (the hull is taken)."""
    check(d, "polytope")
    pts = d.get("vertices", d.get("points"))
    if pts is None:
        raise SchemaError("polytope needs 'vertices' or 'points'")
    return convex_hull([_parse_point(p) for p in pts])


# --- complexes ---------------------------------------------------------------


def _constraints(cs) -> list:
    return [{"a": _point(a), "b": rat(b)} for a, b in cs]


def _parse_constraints(cs) -> tuple:
    return tuple((_parse_point(c["a"]), parse_rat(c["b"])) for c in cs)


def complex_to_json(Y: TropicalComplex) -> dict:
    cells = []
    for c in Y.cells:
        cells.append(
            {
                "vertex_ids": list(c.vertex_ids),
                "rays": [list(r) for r in c.rays],
                "lines": [list(r) for r in c.lines],
                "dim": c.dim,
                "weight": c.weight,
                "dual": encode_value(c.dual),
                "eqs": _constraints(c.eqs),
                "ineqs": _constraints(c.ineqs),
            }
        )
    return doc(
        "complex",
        ambient_dim=Y.ambient_dim,
        dim=Y.dim,
        vertices=[_point(v) for v in Y.vertices],
        cells=cells,
        sources=[poly_to_json(f) for f in Y.sources],
    )


def complex_from_json(d: dict) -> TropicalComplex:
    check(d, "complex")
    cells = []
    for c in d["cells"]:
        cells.append(
            Cell(
                tuple(c["vertex_ids"]),
                tuple(tuple(int(x) for x in r) for r in c["rays"]),
                tuple(tuple(int(x) for x in r) for r in c["lines"]),
                int(c["dim"]),
                c["weight"],
                decode_value(c["dual"]),
                _parse_constraints(c.get("eqs", ())),
                _parse_constraints(c.get("ineqs", ())),
            )
        )
    sources = tuple(poly_from_json(p) for p in d.get("sources", ()))
    return TropicalComplex(int(d["ambient_dim"]), tuple(_parse_point(v) for v in d["vertices"]), tuple(cells), sources)


# --- files -------------------------------------------------------------------


def dumps(d) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def load(path) -> dict:
    with open(Path(path)) as fh:
        return json.load(fh, parse_float=_no_float)


def loads(s: str) -> dict:
    return json.loads(s, parse_float=_no_float)


def _no_float(s):
    raise SchemaError(f"floating-point literal {s} is not allowed; write rationals as 'a/b'")


def parse_matrix(spec) -> list[list[int]]:
    """``"1 0 1; 0 1 2"``, a path to such text or to a JSON ``{"matrix": [[...]]}`` document."""
    text = str(spec)
    p = Path(text)
    if ";" not in text and p.exists():
        raw = p.read_text().strip()
        if raw.startswith("{") or raw.startswith("["):
            d = loads(raw)
            rows = d["matrix"] if isinstance(d, dict) else d
            return [[_int_entry(x) for x in r] for r in rows]
        text = raw.replace("\n", ";")
    rows = [r.split() for r in text.split(";") if r.strip()]
    if not rows:
        raise SchemaError("empty matrix")
    return [[_int_entry(x) for x in r] for r in rows]


def parse_vector(spec) -> tuple[Fraction, ...]:
    return tuple(parse_rat(x) for x in str(spec).replace(",", " ").split())


def _int_entry(x) -> int:
    q = parse_rat(x)
    if q.denominator != 1:
        raise SchemaError(f"matrix entry {x!r} is not an integer")
    return int(q)
