"""The ideals L, Q, N of a partial braid graph and the edge-ring relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .braid_model import DecoratedDiagram, PartialBraidGraph
from .poly_kernel import QQ, FieldConfig, Polynomial

N_SUBSET_LIMIT = 16


class SubsetExplosion(RuntimeError):
    pass


@dataclass
class IdealSpec:
    kind: str
    generators: list
    provenance: list
    nvars: int
    field: FieldConfig = QQ
    names: tuple = ()
    complete: bool = True

    def __add__(self, other: "IdealSpec") -> "IdealSpec":
        if self.nvars != other.nvars or self.field != other.field:
            raise ValueError("ambient ring mismatch")
        return IdealSpec("sum", self.generators + other.generators, self.provenance + other.provenance,
                         self.nvars, self.field, self.names or other.names, self.complete and other.complete)

    def with_extra(self, polys, tag="extra") -> "IdealSpec":
        return IdealSpec(self.kind, self.generators + list(polys), self.provenance + [tag] * len(polys),
                         self.nvars, self.field, self.names, self.complete)

    def nonzero(self):
        return [g for g in self.generators if not g.is_zero()]

    def to_doc(self):
        return [{"tag": _tag(t), "terms": g.term_list()} for g, t in zip(self.generators, self.provenance)]

    def __len__(self):
        return len(self.generators)


def _tag(t):
    if isinstance(t, tuple):
        kind, payload = t
        if isinstance(payload, (tuple, list, frozenset)):
            return f"{kind}:{','.join(map(str, sorted(payload)))}"
        return f"{kind}:{payload}"
    return str(t)


def _prod(edges, n, field, names):
    out = Polynomial.const(1, n, field, names)
    for e in edges:
        out = out * Polynomial.var(e, n, field, names)
    return out


def _linear_form(out_edges, in_edges, n, field, names):
    coeffs = {}
    for e in out_edges:
        coeffs[e] = coeffs.get(e, 0) + 1
    for e in in_edges:
        coeffs[e] = coeffs.get(e, 0) - 1
    return Polynomial.from_linear({e: c for e, c in coeffs.items() if c}, n, field, names)


def L_of(S: PartialBraidGraph, i: int, field=QQ) -> Polynomial:
    v = S.vertices[i]
    return _linear_form(v.out, v.inn, S.nedges, field, S.edge_names)


def Q_of(S: PartialBraidGraph, i: int, field=QQ) -> Polynomial:
    v = S.vertices[i]
    n, names = S.nedges, S.edge_names
    return _prod(v.out, n, field, names) - _prod(v.inn, n, field, names)


def linear_ideal(S: PartialBraidGraph, field: FieldConfig = QQ) -> IdealSpec:
    gens, prov = [], []
    for i in S.four_valent():
        gens.append(L_of(S, i, field))
        prov.append(("L", i))
    return IdealSpec("L", gens, prov, S.nedges, field, S.edge_names)


def quadratic_ideal(S: PartialBraidGraph, field: FieldConfig = QQ) -> IdealSpec:
    special = set(S.special)
    gens, prov = [], []
    for i, v in enumerate(S.vertices):
        if i in special:
            continue
        gens.append(Q_of(S, i, field))
        prov.append(("Q", i))
    return IdealSpec("Q", gens, prov, S.nedges, field, S.edge_names)


def in_out(S: PartialBraidGraph, W) -> tuple:
    """(In(W), Out(W)) as sorted edge lists: in minus out, out minus in."""
    ins, outs = set(), set()
    for i in W:
        ins.update(S.vertices[i].inn)
        outs.update(S.vertices[i].out)
    return sorted(ins - outs), sorted(outs - ins)


def N_of(S: PartialBraidGraph, W, field=QQ) -> Polynomial:
    In, Out = in_out(S, W)
    n, names = S.nedges, S.edge_names
    return _prod(Out, n, field, names) - _prod(In, n, field, names)


def nonlocal_ideal(S: PartialBraidGraph, cap: int | None = None, field: FieldConfig = QQ,
                   limit: int = N_SUBSET_LIMIT) -> IdealSpec:
    m = len(S.vertices)
    if cap is None and m > limit:
        raise SubsetExplosion(f"{m} vertices give 2^{m} subsets; pass cap=")
    top = m if cap is None else min(cap, m)
    gens, prov = [], []
    for size in range(1, top + 1):
        for W in combinations(range(m), size):
            gens.append(N_of(S, W, field))
            prov.append(("N", frozenset(W)))
    return IdealSpec("N", gens, prov, S.nedges, field, S.edge_names, complete=(top == m))


def edge_ring_relations(d: DecoratedDiagram, field: FieldConfig = QQ) -> IdealSpec:
    n = d.nedges
    names = d.edge_names()
    gens, prov = [], []
    for c in d.crossings:
        gens.append(_linear_form(c.out, c.inn, n, field, names))
        prov.append(("L", c.index))
    return IdealSpec("L", gens, prov, n, field, names)


def linear_rank(polys: Sequence[Polynomial]) -> int:
    """Rank of the coefficient matrix of linear forms over their field."""
    return len(linear_basis(polys))


def linear_basis(polys: Sequence[Polynomial]) -> list:
    """Reduced row echelon basis of the span of linear forms (as dicts var -> coeff)."""
    if not polys:
        return []
    F = polys[0].field
    rows = []
    for p in polys:
        if p.degree() > 1 or (p.terms and p.degree() < 1):
            raise ValueError("not a linear form")
        rows.append({m.index(1): c for m, c in p.terms.items()})
    basis: list = []  # list of (pivot, row)
    for r in rows:
        r = dict(r)
        for piv, b in basis:
            c = r.get(piv)
            if c:
                for j, v in b.items():
                    nv = F.norm(r.get(j, F.zero) - c * v)
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        if not r:
            continue
        piv = min(r)
        inv = F.inv(r[piv])
        r = {j: F.norm(v * inv) for j, v in r.items()}
        new_basis = []
        for p2, b in basis:
            c = b.get(piv)
            if c:
                b = dict(b)
                for j, v in r.items():
                    nv = F.norm(b.get(j, F.zero) - c * v)
                    if nv:
                        b[j] = nv
                    else:
                        b.pop(j, None)
            new_basis.append((p2, b))
        basis = new_basis + [(piv, r)]
    basis.sort()
    return [b for _, b in basis]
