"""Elementary / complete homogeneous symmetric polynomials and explicit
membership certificates N(W) in L + Q, built without any Groebner basis."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .braid_model import PartialBraidGraph, sweep_decomposition
from .ideal_gen import L_of, N_of, Q_of, in_out, linear_ideal, nonlocal_ideal, quadratic_ideal
from .poly_kernel import QQ, FieldConfig, Polynomial


def _as_list(vars_) -> list:
    if isinstance(vars_, Counter):
        return sorted(vars_.elements())
    return list(vars_)


def elem_sym(vars_, k: int, nvars: int, field: FieldConfig = QQ, names=None) -> Polynomial:
    """S_k of the variables (indices, repeats allowed). S_0 = 1, S_k = 0 for k < 0 or k > len."""
    ys = _as_list(vars_)
    one = Polynomial.const(1, nvars, field, names)
    zero = Polynomial.zero(nvars, field, names)
    if k < 0 or k > len(ys):
        return zero
    e = [one] + [zero] * k
    for y in ys:
        Y = Polynomial.var(y, nvars, field, names)
        for j in range(k, 0, -1):
            e[j] = e[j] + Y * e[j - 1]
    return e[k]


def comp_hom(vars_, k: int, nvars: int, field: FieldConfig = QQ, names=None) -> Polynomial:
    """H_k of the variables. H_0 = 1 (even with no variables), H_k = 0 for k < 0."""
    ys = _as_list(vars_)
    one = Polynomial.const(1, nvars, field, names)
    zero = Polynomial.zero(nvars, field, names)
    if k < 0:
        return zero
    h = [one] + [zero] * k
    for y in ys:
        Y = Polynomial.var(y, nvars, field, names)
        for j in range(1, k + 1):
            h[j] = h[j] + Y * h[j - 1]
    return h[k]


def verify_lemma_identities(m: int, n: int, field: FieldConfig = QQ) -> bool:
    """Both alternating-sum identities hold for (m, n)."""
    return all(lemma_identity_report(m, n, field).values())


def lemma_identity_report(m: int, n: int, field: FieldConfig = QQ) -> dict:
    """Check both alternating-sum identities by direct expansion.

    one: sum_{k+l=n} (-1)^l S_k(y) H_l(y) = 0 for y of length m, n >= 1.
    two: sum_{k+l=n} (-1)^l S_k(y, z) H_l(z) = S_n(y) for y of length n, z of length m.
    """
    nv = n + m
    ys = list(range(m))
    lhs = Polynomial.zero(max(m, 1), field)
    for k in range(n + 1):
        term = elem_sym(ys, k, max(m, 1), field) * comp_hom(ys, n - k, max(m, 1), field)
        lhs = lhs + (term if (n - k) % 2 == 0 else -term)
    one = lhs.is_zero() if n >= 1 else True
    y2, z2 = list(range(n)), list(range(n, n + m))
    nv = max(nv, 1)
    lhs2 = Polynomial.zero(nv, field)
    for k in range(n + 1):
        term = elem_sym(y2 + z2, k, nv, field) * comp_hom(z2, n - k, nv, field)
        lhs2 = lhs2 + (term if (n - k) % 2 == 0 else -term)
    two = (lhs2 - elem_sym(y2, n, nv, field)).is_zero()
    return {"one": one, "two": two}


# -- certificates ---------------------------------------------------------------

@dataclass
class CertTerm:
    vertex: int  # index in the ambient graph
    kind: str  # 'L' or 'Q'
    generator: Polynomial
    coefficient: Polynomial

    def to_doc(self):
        return {"vertex": self.vertex, "kind": self.kind, "coefficient": self.coefficient.term_list()}


@dataclass
class Certificate:
    target: Polynomial
    terms: list
    subset: tuple = ()
    uses_special: bool = False
    notes: list = field(default_factory=list)

    def residual(self) -> Polynomial:
        acc = -self.target
        for t in self.terms:
            acc = acc + t.generator * t.coefficient
        return acc

    @property
    def identity_holds(self) -> bool:
        return self.residual().is_zero()

    @property
    def verified(self) -> bool:
        """Valid proof of membership in L + Q: identity holds and no excluded generator is used."""
        return self.identity_holds and not self.uses_special

    def scaled(self, factor: Polynomial) -> "Certificate":
        return Certificate(self.target * factor, [CertTerm(t.vertex, t.kind, t.generator, t.coefficient * factor)
                                                  for t in self.terms], self.subset, self.uses_special,
                           list(self.notes))

    def to_doc(self):
        return {"target": self.target.term_list(), "terms": [t.to_doc() for t in self.terms if not t.coefficient.is_zero()],
                "verified": self.verified, "subset": list(self.subset), "notes": self.notes}


def _phi_coefficient(G, shift, n, B, nvars, F, names):
    acc = Polynomial.zero(nvars, F, names)
    for j in range(0, max(n - shift, -1) + 1):
        s = elem_sym(G, n - shift - j, nvars, F, names)
        if s.is_zero():
            continue
        term = s * comp_hom(B, j, nvars, F, names)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def cube_identity_certificate(S: PartialBraidGraph, field: FieldConfig = QQ,
                              vertex_ids: Iterable[int] | None = None) -> Certificate:
    """Telescoping certificate for prod Out - prod In of the whole graph S (S connected;
    use nonlocal_membership_certificate otherwise).

    vertex_ids maps the local vertex order of S to ambient vertex indices (for subgraphs)."""
    ids = list(vertex_ids) if vertex_ids is not None else list(range(len(S.vertices)))
    n_, names, F = S.nedges, S.edge_names, field
    W = range(len(S.vertices))
    In, Out = in_out(S, W)
    target = N_of(S, W, F) if S.vertices else Polynomial.zero(n_, F, names)
    if not S.vertices:
        return Certificate(target, [], ())
    sw = sweep_decomposition(S)
    n = len(S.loose_in)
    B = list(S.strands)
    specials = set(S.special)
    terms = []
    for i, v in enumerate(S.vertices):
        G = sw.G[i]
        if v.valence == 4:
            terms.append(CertTerm(ids[i], "L", L_of(S, i, F), _phi_coefficient(G, 1, n, B, n_, F, names)))
            terms.append(CertTerm(ids[i], "Q", Q_of(S, i, F), _phi_coefficient(G, 2, n, B, n_, F, names)))
        else:
            terms.append(CertTerm(ids[i], "Q", Q_of(S, i, F), _phi_coefficient(G, 1, n, B, n_, F, names)))
    uses = any(i in specials and not t.coefficient.is_zero() for i, t in
               ((ids.index(t.vertex), t) for t in terms) if t.kind == "Q")
    return Certificate(target, terms, tuple(ids), uses)


def _vertex_components(S: PartialBraidGraph) -> list:
    comps = S.components()
    comp_of = {e: ci for ci, c in enumerate(comps) for e in c}
    groups: dict = {}
    for i, v in enumerate(S.vertices):
        groups.setdefault(comp_of[(v.out + v.inn)[0]], []).append(i)
    return [groups[k] for k in sorted(groups)]


def nonlocal_membership_certificate(S: PartialBraidGraph, W, field: FieldConfig = QQ) -> Certificate:
    """Certificate that N(W) lies in L_S + Q_S, via the subgraph on W (split into components)."""
    W = sorted(set(W))
    if not W:
        raise ValueError("W must be nonempty")
    sub = S.subgraph(W)
    parts = []
    for comp in _vertex_components(sub):
        amb = [W[i] for i in comp]
        parts.append(cube_identity_certificate(S.subgraph(amb), field, amb))
    n_, names = S.nedges, S.edge_names
    one = Polynomial.const(1, n_, field, names)
    outs = [_prod_edges(in_out(S, p.subset)[1], n_, field, names) for p in parts]
    ins = [_prod_edges(in_out(S, p.subset)[0], n_, field, names) for p in parts]
    terms, uses = [], False
    # prod A_c - prod B_c = sum_c (A_c - B_c) prod_{c'<c} B_c' prod_{c'>c} A_c'
    for c, p in enumerate(parts):
        factor = one
        for c2 in range(len(parts)):
            if c2 < c:
                factor = factor * ins[c2]
            elif c2 > c:
                factor = factor * outs[c2]
        terms += p.scaled(factor).terms
        uses = uses or p.uses_special
    cert = Certificate(N_of(S, W, field), terms, tuple(W), uses)
    if len(parts) > 1:
        cert.notes.append(f"assembled from {len(parts)} components")
    return cert


def _prod_edges(edges, n, field, names):
    out = Polynomial.const(1, n, field, names)
    for e in edges:
        out = out * Polynomial.var(e, n, field, names)
    return out


@dataclass
class Theorem2Report:
    ideals_equal: bool
    certificates: int
    verified: int
    skipped_special: int
    failures: list

    @property
    def holds(self):
        return self.ideals_equal and not self.failures

    def to_doc(self):
        return {"ideals_equal": self.ideals_equal, "certificates": self.certificates, "verified": self.verified,
                "skipped_special": self.skipped_special, "failures": [list(f) for f in self.failures]}


def check_theorem2(S: PartialBraidGraph, max_subset: int = 4, field: FieldConfig = QQ, cache=None) -> Theorem2Report:
    """Both oracles: Groebner equality of L+Q and L+N, and certificates for |W| <= max_subset."""
    from .groebner import ideal_equal, gb_of
    L = linear_ideal(S, field)
    lq = (L + quadratic_ideal(S, field)).nonzero()
    ln = (L + nonlocal_ideal(S, field=field)).nonzero()
    eq = ideal_equal(lq, ln, cache=cache)
    gb = gb_of(lq, cache=cache) if lq else None
    total = ok = skipped = 0
    failures = []
    for size in range(1, min(max_subset, len(S.vertices)) + 1):
        for W in combinations(range(len(S.vertices)), size):
            cert = nonlocal_membership_certificate(S, W, field)
            total += 1
            if cert.uses_special:
                skipped += 1
                continue
            if cert.verified:
                ok += 1
            else:
                failures.append(W)
            if gb is not None and not gb.contains(cert.target):
                failures.append(("gb", W))
    return Theorem2Report(eq, total, ok, skipped, failures)
