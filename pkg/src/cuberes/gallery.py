"""Hand-built graphs used as golden cases."""
from __future__ import annotations

from .braid_model import PartialBraidGraph, Vertex, graph_from_events


def _named(names, vertices, loose_in, loose_out, strands):
    idx = {n: i for i, n in enumerate(names)}
    verts = tuple(Vertex(len(o) + len(i), tuple(idx[e] for e in o), tuple(idx[e] for e in i)) for o, i in vertices)
    g = PartialBraidGraph(len(names), verts, tuple(idx[e] for e in loose_in), tuple(idx[e] for e in loose_out),
                          tuple(idx[e] for e in strands), edge_names=tuple(names))
    return g.with_specials()


def figure5_graph() -> PartialBraidGraph:
    """Four 4-valent vertices, three loose ends on each side, two closure strands B1, B2."""
    names = ["U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8", "U9", "B1", "B2"]
    vertices = [
        (("U5", "U7"), ("U2", "B1")),
        (("U4", "U8"), ("U1", "B2")),
        (("U6", "U9"), ("U8", "U7")),
        (("B1", "B2"), ("U3", "U9")),
    ]
    return _named(names, vertices, ["U1", "U2", "U3"], ["U4", "U5", "U6"], ["B1", "B2"])


def figure4_graph() -> PartialBraidGraph:
    """Two 4-valent vertices p, p' and a 2-valent v; edge g closes the directed cycle p' -> p -> v -> p'."""
    names = ["Ua", "Ub", "Uc", "Ud", "Ue", "Uf", "Ug"]
    vertices = [
        (("Ue", "Ud"), ("Uf", "Ug")),  # p'
        (("Ua", "Ub"), ("Uc", "Ud")),  # p
        (("Ug",), ("Ub",)),            # v
    ]
    return _named(names, vertices, ["Uc", "Uf"], ["Ua", "Ue"], ["Ug"])


def kink_graph() -> PartialBraidGraph:
    """Single singular crossing on two strands with the right strand closed."""
    names = ["U2", "U1", "U3"]  # in, out, loop
    return _named(names, [(("U1", "U3"), ("U2", "U3"))], ["U2"], ["U1"], ["U3"])


def total_graph() -> PartialBraidGraph:
    """Closure of a fully singular sigma_1 sigma_2 on three strands: no loose ends."""
    names = ["U1", "U2", "U3", "U4"]
    vertices = [
        (("U1", "U2"), ("U1", "U4")),
        (("U3", "U4"), ("U3", "U2")),
    ]
    return _named(names, vertices, [], [], ["U1", "U4", "U3"])


def figure6_graph(n_in: int = 2) -> PartialBraidGraph:
    """Single 4-valent vertex as an open graph (no closure)."""
    return graph_from_events(2, 0, [("X", 1, "")])


GALLERY = {
    "figure5": figure5_graph,
    "figure4": figure4_graph,
    "kink": kink_graph,
    "total": total_graph,
}


# The decomposition of U4U5U6 - U1U2U3 as printed, one (factor, cofactor) pair per line.
# The second factor is printed as U4 - U8 - U1 - B2; the vertex relation forces U4 + U8 - U1 - B2.
_H2 = "(B1**2 + B1*B2 + B2**2)"
DISPLAYED_TERMS = [
    ("U5 + U7 - U2 - B1", f"(U1*B2 + U3*B2 + U1*U3) - (B1 + B2)*(U1 + U3 + B2) + {_H2}"),
    ("U4 + U8 - U1 - B2", f"(U3*U5 + U3*U7 + U5*U7) - (B1 + B2)*(U3 + U5 + U7) + {_H2}"),
    ("U6 + U9 - U8 - U7", f"(U3*U4 + U3*U5 + U4*U5) - (B1 + B2)*(U3 + U4 + U5) + {_H2}"),
    ("B1 + B2 - U3 - U9", f"(U4*U5 + U4*U6 + U5*U6) - (B1 + B2)*(U4 + U5 + U6) + {_H2}"),
    ("U5*U7 - U2*B1", "(U1 + U3 + B2) - (B1 + B2)"),
    ("U4*U8 - U1*B2", "(U3 + U5 + U7) - (B1 + B2)"),
    ("U6*U9 - U8*U7", "(U3 + U4 + U5) - (B1 + B2)"),
    ("B1*B2 - U3*U9", "(U4 + U5 + U6) - (B1 + B2)"),
]
PRINTED_SECOND_FACTOR = "U4 - U8 - U1 - B2"


def displayed_identity_check() -> dict:
    """Expand the printed decomposition with sympy (independently of the certificate code)
    and compare it with the certificate produced for figure5_graph."""
    import sympy as sp

    from .sym_identity import cube_identity_certificate

    syms = {n: sp.Symbol(n) for n in figure5_graph().edge_names}
    lhs = sp.sympify("U4*U5*U6 - U1*U2*U3", locals=syms)
    rhs = sum(sp.sympify(f, locals=syms) * sp.sympify(g, locals=syms) for f, g in DISPLAYED_TERMS)
    printed = list(DISPLAYED_TERMS)
    printed[1] = (PRINTED_SECOND_FACTOR, printed[1][1])
    rhs_printed = sum(sp.sympify(f, locals=syms) * sp.sympify(g, locals=syms) for f, g in printed)
    ok = sp.expand(lhs - rhs) == 0
    printed_ok = sp.expand(lhs - rhs_printed) == 0
    cert = cube_identity_certificate(figure5_graph())
    sym_vars = [syms[n] for n in figure5_graph().edge_names]

    def to_sym(p):
        return sum(sp.Rational(str(c)) * sp.Mul(*[v ** e for v, e in zip(sym_vars, m)]) for m, c in p.terms.items())

    ordered = [t for t in cert.terms if t.kind == "L"] + [t for t in cert.terms if t.kind == "Q"]
    pairs = [(to_sym(t.generator), to_sym(t.coefficient)) for t in ordered]
    same = all(sp.expand(to_sym_f * g_c - sp.sympify(f, locals=syms) * sp.sympify(g, locals=syms)) == 0
               for (to_sym_f, g_c), (f, g) in zip(pairs, DISPLAYED_TERMS))
    return {"verifies": bool(ok), "printed_sign_verifies": bool(printed_ok), "matches_certificate": bool(same),
            "note": "second L-factor corrected from U4 - U8 - U1 - B2 to U4 + U8 - U1 - B2"}
