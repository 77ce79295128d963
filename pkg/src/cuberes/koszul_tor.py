"""Tor_i(R/L, R/J) as Koszul homology of the L-generators on R/J.

Series degree convention: an element x * e_sigma of the Koszul complex, with x
of polynomial degree a and |sigma| = i, sits in degree a + i.

The computation first peels off linear forms of span(L) that are regular on the
current quotient (detected exactly through Hilbert numerators); Koszul homology
is unchanged by this, and the leftover complex is small. What remains is done
degree by degree with exact linear algebra on standard-monomial bases.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .braid_model import PartialBraidGraph
from .groebner import DEGREVLEX, GBCache, GroebnerBasis, MonomialOrder, gb_of
from .ideal_gen import linear_basis, linear_ideal, nonlocal_ideal, quadratic_ideal
from .poly_kernel import (QQ, FieldConfig, Polynomial, TruncatedSeries, one_minus_t_pow, series_expand,
                          series_from_rational, series_recognize, upoly_add, upoly_mul, upoly_trim)

DEFAULT_D = 12


# -- sparse linear algebra -------------------------------------------------------

def sparse_rank(rows, F: FieldConfig) -> int:
    pivots: dict = {}
    for r in rows:
        r = {c: v for c, v in r.items() if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = F.inv(r[c])
                pivots[c] = {j: F.norm(v * inv) for j, v in r.items()}
                break
            f = r[c]
            for j, v in p.items():
                nv = F.norm(r.get(j, F.zero) - f * v)
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return len(pivots)


def sparse_nullspace(cols, ncols_out, F: FieldConfig) -> list:
    """Kernel of the map sending basis vector j to cols[j] (dict row -> value).

    Returns kernel vectors as dicts over the source basis."""
    pivots: dict = {}  # target index -> (image dict, combo dict)
    kernel = []
    for j, col in enumerate(cols):
        img = {c: v for c, v in col.items() if v}
        combo = {j: F.one}
        while img:
            c = min(img)
            p = pivots.get(c)
            if p is None:
                inv = F.inv(img[c])
                pivots[c] = ({k: F.norm(v * inv) for k, v in img.items()},
                             {k: F.norm(v * inv) for k, v in combo.items()})
                break
            f = img[c]
            pim, pco = p
            for k, v in pim.items():
                nv = F.norm(img.get(k, F.zero) - f * v)
                if nv:
                    img[k] = nv
                else:
                    img.pop(k, None)
            for k, v in pco.items():
                nv = F.norm(combo.get(k, F.zero) - f * v)
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        if not img:
            kernel.append(combo)
    return kernel


# -- the Koszul complex over a quotient --------------------------------------------

@dataclass
class KoszulComplex:
    """Koszul complex on linear forms acting on R/I, I given by a reduced GB."""

    forms: list  # linear Polynomials
    gb: GroebnerBasis

    def __post_init__(self):
        self.r = len(self.forms)
        self.F = self.gb.field
        self._mult: dict = {}
        # h and NF(h) act identically on R/I, and NF(h) only involves free variables
        self._lin = [{m.index(1): c for m, c in self.gb.reduce_terms(dict(f.terms)).items()} for f in self.forms]

    def rank_of_chain(self, i, d):
        return comb(self.r, i) * len(self.gb.standard_monomials(d - i))

    def _times_var(self, v, x):
        key = (v, x)
        hit = self._mult.get(key)
        if hit is None:
            m = x[:v] + (x[v] + 1,) + x[v + 1:]
            hit = self.gb.nf_monomial(m)
            self._mult[key] = hit
        return hit

    def times_form(self, t, x) -> dict:
        out: dict = {}
        F = self.F
        for v, c in self._lin[t].items():
            for m, cc in self._times_var(v, x).items():
                nv = F.norm(out.get(m, F.zero) + c * cc)
                if nv:
                    out[m] = nv
                else:
                    out.pop(m, None)
        return out

    def basis(self, i, d):
        mons = self.gb.standard_monomials(d - i) if d - i >= 0 else []
        return [(s, x) for s in combinations(range(self.r), i) for x in mons]

    def differential(self, i, d):
        """Columns of d_i: C_{i,d} -> C_{i-1,d} as dicts over the target basis index."""
        if i < 1 or i > self.r:
            return [], 0
        tgt = self.basis(i - 1, d)
        index = {b: n for n, b in enumerate(tgt)}
        cols = []
        F = self.F
        for s, x in self.basis(i, d):
            col: dict = {}
            for t_pos, t in enumerate(s):
                sign = 1 if t_pos % 2 == 0 else -1
                rest = s[:t_pos] + s[t_pos + 1:]
                for m, c in self.times_form(t, x).items():
                    key = index[(rest, m)]
                    nv = F.norm(col.get(key, F.zero) + sign * c)
                    if nv:
                        col[key] = nv
                    else:
                        col.pop(key, None)
            cols.append(col)
        return cols, len(tgt)

    def homology_dims(self, D) -> dict:
        dims = {}
        F = self.F
        for d in range(D + 1):
            ranks = {}
            for i in range(1, self.r + 1):
                if d - i < 0:
                    ranks[i] = 0
                    continue
                cols, _ = self.differential(i, d)
                ranks[i] = sparse_rank(cols, F) if cols else 0
            for i in range(self.r + 1):
                c = self.rank_of_chain(i, d) if d - i >= 0 else 0
                dims[(i, d)] = c - ranks.get(i, 0) - ranks.get(i + 1, 0)
        return dims

    def d_squared_zero(self, D) -> bool:
        F = self.F
        for d in range(D + 1):
            for i in range(2, self.r + 1):
                if d - i < 0:
                    continue
                cols_i, _ = self.differential(i, d)
                cols_im1, _ = self.differential(i - 1, d)
                for col in cols_i:
                    acc: dict = {}
                    for j, v in col.items():
                        for k2, w in cols_im1[j].items():
                            acc[k2] = F.norm(acc.get(k2, F.zero) + v * w)
                    if any(acc.values()):
                        return False
        return True


# -- Tor tables -----------------------------------------------------------------------

@dataclass
class TorTable:
    graph_id: str
    J: str
    k: int
    m: int
    D: int
    dims: dict  # (i, d) -> dim
    series: list  # TruncatedSeries per i
    field: str = "q"
    reduced: bool = False
    peeled: int = 0
    krull: int = 0
    notes: list = dc_field(default_factory=list)

    def dim(self, i, d):
        return self.dims.get((i, d), 0)

    def row(self, i):
        return [self.dim(i, d) for d in range(self.D + 1)]

    def max_i(self):
        return self.m

    def to_doc(self):
        return {
            "graph_id": self.graph_id, "J": self.J, "k": self.k, "m": self.m,
            "reduced": self.reduced, "field": self.field,
            "series": [dict(i=i, **s.to_doc()) for i, s in enumerate(self.series)],
            "dims": [[i, d, v] for (i, d), v in sorted(self.dims.items()) if v],
        }

    def table_equal(self, other: "TorTable") -> bool:
        top = max(self.m, other.m)
        D = min(self.D, other.D)
        return all(self.dim(i, d) == other.dim(i, d) for i in range(top + 1) for d in range(D + 1))


@dataclass
class _Peel:
    gens: list
    gb: GroebnerBasis
    hn: list
    remaining: list
    peeled: list


def _hn_equal_shift(hn_new, hn_old):
    return upoly_trim(hn_new) == upoly_mul(hn_old, [1, -1])


def _candidate_forms(remaining, rng, F, nvars, names):
    for t in range(len(remaining)):
        yield remaining[t], t
    if len(remaining) >= 2:
        for _ in range(2):
            coeffs = [rng.randint(1, 7) for _ in remaining]
            g = Polynomial.zero(nvars, F, names)
            for c, f in zip(coeffs, remaining):
                g = g + f.scale(c)
            if not g.is_zero():
                yield g, len(remaining) - 1


def peel_regular(forms, gens, order=DEGREVLEX, cache=None, seed=0, nvars=None, field=QQ, names=None) -> _Peel:
    """Greedily add forms (from span(forms)) that are regular on R/(gens + peeled)."""
    rng = random.Random(seed)
    gb = gb_of(gens, order, cache) if gens else _empty_gb(nvars, field, names, order)
    hn = gb.hilbert_numerator()
    remaining = list(forms)
    peeled = []
    cur = list(gens)
    progress = True
    while remaining and progress:
        progress = False
        for g, drop in _candidate_forms(remaining, rng, field, nvars, names):
            gb2 = gb_of(cur + [g], order, cache)
            hn2 = gb2.hilbert_numerator()
            if _hn_equal_shift(hn2, hn):
                cur.append(g)
                peeled.append(g)
                gb, hn = gb2, hn2
                remaining.pop(drop)
                progress = True
                break
    return _Peel(cur, gb, hn, remaining, peeled)


def _empty_gb(nvars, field, names, order):
    return GroebnerBasis([], order, field, nvars, tuple(names) if names else tuple(f"U{i}" for i in range(nvars)))


def koszul_tor(forms, gens, D=DEFAULT_D, *, nvars, field=QQ, names=None, order=DEGREVLEX, cache=None,
               peel=True, seed=0):
    """Graded dims of H_i(forms; R/(gens)) for i <= len(basis(forms)) and degree <= D.

    Returns (dims, series list, rank of forms, number peeled, Krull bound)."""
    basis = linear_basis([f for f in forms if not f.is_zero()]) if forms else []
    lforms = [Polynomial.from_linear(b, nvars, field, names) for b in basis]
    r = len(lforms)
    gens = [g for g in gens if not g.is_zero()]
    if peel:
        P = peel_regular(lforms, gens, order, cache, seed, nvars, field, names)
    else:
        gb = gb_of(gens, order, cache) if gens else _empty_gb(nvars, field, names, order)
        P = _Peel(list(gens), gb, gb.hilbert_numerator(), list(lforms), [])
    rem = P.remaining
    rr = len(rem)
    # H_0 is always exact: R/(gens + all forms)
    gb_all = gb_of(P.gens + rem, order, cache) if (P.gens or rem) else P.gb
    hn0 = gb_all.hilbert_numerator()
    krull = gb_all.krull_dim()
    exact: dict = {0: hn0}
    if rr == 1:
        # 0 -> H_1 -> M(-1) -> M -> H_0 -> 0
        exact[1] = upoly_add(upoly_add(upoly_mul([0, 1], P.hn), [-c for c in P.hn]), hn0)
    dims: dict = {}
    if rr <= 1:
        for i, hn in exact.items():
            for d, v in enumerate(series_expand(hn, nvars, D)):
                dims[(i, d)] = v
    else:
        K = KoszulComplex(rem, P.gb)
        dims = K.homology_dims(D)
    for i in range(r + 1):
        for d in range(D + 1):
            dims.setdefault((i, d), 0)
    series = []
    for i in range(r + 1):
        if i in exact:
            series.append(series_from_rational(exact[i], nvars, D))
        elif i > rr:
            series.append(series_from_rational([], 0, D))
        else:
            s = TruncatedSeries([dims[(i, d)] for d in range(D + 1)], D)
            series.append(series_recognize(s, max(krull, 0)))
    return dims, series, r, len(P.peeled), krull


def _ideal_for(S: PartialBraidGraph, J: str, field: FieldConfig):
    if J == "N":
        return nonlocal_ideal(S, field=field)
    if J == "Q":
        return quadratic_ideal(S, field=field)
    raise ValueError(f"J must be 'N' or 'Q', got {J!r}")


def tor_dims(S: PartialBraidGraph, J: str = "N", D: int = DEFAULT_D, field: FieldConfig = QQ,
             order: MonomialOrder = DEGREVLEX, cache: GBCache | None = None, reduced: bool = False,
             reduce_var: int | None = None, peel: bool = True) -> TorTable:
    """Tor_i(R/L, R/J) for J in {N, Q}. With reduced=True, U_0 (or reduce_var) is set to zero."""
    L = linear_ideal(S, field)
    Jid = _ideal_for(S, J, field)
    gens = list(Jid.generators)
    if reduced:
        v = S.loose_in[0] if reduce_var is None else reduce_var
        gens.append(Polynomial.var(v, S.nedges, field, S.edge_names))
    dims, series, r, peeled, krull = koszul_tor(L.generators, gens, D, nvars=S.nedges, field=field,
                                                names=S.edge_names, order=order, cache=cache, peel=peel)
    return TorTable(S.canonical_hash(), J, S.k, r, D, dims, series, str(field), reduced, peeled, krull)


# -- checks --------------------------------------------------------------------------------

@dataclass
class Verdict:
    status: str  # 'holds', 'fails', 'unstable'
    first_failure: tuple | None = None  # (i, d, q value, T^i n value)
    D: int = 0
    detail: dict = dc_field(default_factory=dict)

    @property
    def holds(self):
        return self.status == "holds"

    def to_doc(self):
        return {"status": self.status, "first_failure": self.first_failure, "D": self.D, **self.detail}


def compare_conjecture(n_tab: TorTable, q_tab: TorTable, top: int | None = None) -> Verdict:
    """q_i(d) == n_i(d - i) for i <= top, d <= D."""
    D = min(n_tab.D, q_tab.D)
    top = max(n_tab.m, q_tab.m) if top is None else top
    for i in range(top + 1):
        for d in range(D + 1):
            qv = q_tab.dim(i, d)
            nv = n_tab.dim(i, d - i) if d - i >= 0 else 0
            if qv != nv:
                return Verdict("fails", (i, d, qv, nv), D)
    return Verdict("holds", None, D)


def check_graded_conjecture(S: PartialBraidGraph, D: int = DEFAULT_D, field: FieldConfig = QQ,
                            cache: GBCache | None = None, total: bool = False, all_i: bool = False) -> Verdict:
    """Conjecture check q_i = T^i n_i for i <= k (all i with all_i) up to degree D."""
    if not total and not (S.is_connected() and S.satisfies_assumption()):
        return Verdict("unstable", None, D, {"reason": "graph not connected with loose ends"})
    n_tab = tor_dims(S, "N", D, field, cache=cache)
    q_tab = tor_dims(S, "Q", D, field, cache=cache)
    top = None if (all_i or total) else S.k
    v = compare_conjecture(n_tab, q_tab, top)
    v.detail = {"n": [s.to_doc() for s in n_tab.series], "q": [s.to_doc() for s in q_tab.series],
                "k": S.k, "m": n_tab.m}
    v.tables = (n_tab, q_tab)
    return v


@dataclass
class VanishingReport:
    k: int
    open_graph: bool
    checked: list  # i values checked
    ok: bool
    nonzero: dict


def check_vanishing(S: PartialBraidGraph, D: int = DEFAULT_D, field: FieldConfig = QQ, cache=None,
                    table: TorTable | None = None) -> VanishingReport:
    """q_i = 0 for i > k, and for i > 0 when there are no closure strands."""
    q_tab = table or tor_dims(S, "Q", D, field, cache=cache)
    lo = 1 if S.is_open() else S.k + 1
    checked = list(range(lo, q_tab.m + 1))
    nonzero = {i: q_tab.row(i) for i in checked if any(q_tab.row(i))}
    return VanishingReport(S.k, S.is_open(), checked, not nonzero, nonzero)


def check_regular_sequence(gens, D: int = DEFAULT_D, field: FieldConfig | None = None, order=DEGREVLEX,
                           cache=None) -> bool:
    """Koszul H_i = 0 for i > 0 in all degrees <= D (homogeneous gens, any degrees)."""
    gens = list(gens)
    if not gens:
        return True
    field = field or gens[0].field
    n = gens[0].nvars
    # Hilbert-series test: HS(R/(g_1..g_s)) == prod (1 - T^deg g_i) / (1-T)^n
    # is equivalent to regularity for homogeneous sequences; we certify it up to D.
    if any(g.is_zero() for g in gens):
        return False
    gb = gb_of(gens, order, cache)
    hn = gb.hilbert_numerator()
    expect = [1]
    for g in gens:
        dg = g.degree()
        expect = upoly_mul(expect, [1] + [0] * (dg - 1) + [-1])
    a = series_expand(hn, n, D)
    b = series_expand(expect, n, D)
    return a == b


def chain_euler_identity(table: TorTable, S: PartialBraidGraph, field: FieldConfig = QQ, cache=None) -> bool:
    """sum (-1)^i HS(Tor_i) == HS(R/J) (1-T)^m, coefficientwise to D."""
    Jid = _ideal_for(S, table.J, field)
    gens = list(Jid.generators)
    if table.reduced:
        gens.append(Polynomial.var(S.loose_in[0], S.nedges, field, S.edge_names))
    gb = gb_of(gens, cache=cache) if gens else _empty_gb(S.nedges, field, S.edge_names, DEGREVLEX)
    hn = upoly_mul(gb.hilbert_numerator(), one_minus_t_pow(table.m))
    rhs = series_expand(hn, S.nedges, table.D)
    lhs = [sum((-1) ** i * table.dim(i, d) for i in range(table.m + 1)) for d in range(table.D + 1)]
    return lhs == rhs


def natural_map_ranks(S: PartialBraidGraph, D: int = 6, field: FieldConfig = QQ, cache=None) -> dict:
    """Ranks of the maps f_i: Tor_i(R/L,R/Q) -> Tor_i(R/L,R/N) induced by R/Q -> R/N."""
    L = linear_ideal(S, field)
    basis = linear_basis(L.generators) if L.generators else []
    forms = [Polynomial.from_linear(b, S.nedges, field, S.edge_names) for b in basis]
    gq = gb_of(quadratic_ideal(S, field), cache=cache)
    gn = gb_of(nonlocal_ideal(S, field=field), cache=cache)
    KQ, KN = KoszulComplex(forms, gq), KoszulComplex(forms, gn)
    out = {}
    F = field
    for d in range(D + 1):
        for i in range(len(forms) + 1):
            if d - i < 0:
                continue
            srcQ = KQ.basis(i, d)
            colsQ, _ = KQ.differential(i, d)
            if not colsQ:
                cycles = [{j: F.one} for j in range(len(srcQ))]
            else:
                cycles = sparse_nullspace(colsQ, 0, F)
            tgtN = KN.basis(i, d)
            idxN = {b: n for n, b in enumerate(tgtN)}
            images = []
            for z in cycles:
                img: dict = {}
                for j, c in z.items():
                    s, x = srcQ[j]
                    for m, cc in gn.reduce_terms({x: F.one}).items():
                        key = idxN[(s, m)]
                        img[key] = F.norm(img.get(key, F.zero) + c * cc)
                images.append({k2: v for k2, v in img.items() if v})
            boundaries, _ = KN.differential(i + 1, d)
            rb = sparse_rank(boundaries, F) if boundaries else 0
            rt = sparse_rank(list(boundaries) + images, F) if (boundaries or images) else 0
            out[(i, d)] = rt - rb
    return out
