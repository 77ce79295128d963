"""Shared helpers: dense linear-algebra oracles that avoid the package's own
Groebner and sparse-rank code, plus the acceptance summary hook."""
from __future__ import annotations

from itertools import combinations

import pytest
import sympy
from sympy.polys.matrices import DomainMatrix

from cuberes.poly_kernel import Polynomial, monomials_of_degree

ACCEPTANCE_LINES: list = []


def record_criterion(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _qq(c):
    return sympy.Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else sympy.Rational(c)


def _rank(rows: list, ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    dm = DomainMatrix([[sympy.QQ(int(x.p), int(x.q)) if x else sympy.QQ(0) for x in r] for r in rows],
                      (len(rows), ncols), sympy.QQ)
    return dm.rank()


def _vec(terms: dict, index: dict) -> list:
    out = [sympy.Integer(0)] * len(index)
    for m, c in terms.items():
        out[index[m]] += _qq(c)
    return out


def _times(terms: dict, mono) -> dict:
    return {tuple(a + b for a, b in zip(m, mono)): c for m, c in terms.items()}


def ideal_span(gens: list, nvars: int, d: int, index: dict) -> list:
    """Rows spanning J_d inside R_d (monomial multiples of homogeneous gens)."""
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        dg = g.degree()
        if dg > d:
            continue
        for mono in monomials_of_degree(nvars, d - dg):
            rows.append(_vec(_times(dict(g.terms), mono), index))
    return rows


def brute_hilbert(gens: list, nvars: int, D: int) -> list:
    """dim_Q (R/J)_d for d = 0..D by dense rank computations."""
    out = []
    for d in range(D + 1):
        mons = list(monomials_of_degree(nvars, d))
        index = {m: i for i, m in enumerate(mons)}
        out.append(len(mons) - _rank(ideal_span(gens, nvars, d, index), len(mons)))
    return out


def independent_forms(forms: list) -> list:
    """A basis of the span of linear forms, via sympy rref."""
    if not forms:
        return []
    n = forms[0].nvars
    M = sympy.Matrix([[0] * n] + [[_qq(f.terms.get(tuple(int(j == v) for j in range(n)), 0)) for v in range(n)]
                                  for f in forms])
    R, piv = M.rref()
    out = []
    for r in range(len(piv)):
        coeffs = {v: R[r, v] for v in range(n) if R[r, v] != 0}
        out.append({tuple(int(j == v) for j in range(n)): c for v, c in coeffs.items()})
    return out


def brute_tor_dims(forms: list, gens: list, nvars: int, D: int) -> dict:
    """dim H_i(K(forms) (x) R/J)_d by dense linear algebra over Q.

    C_{i,d} = wedge^i (x) (R/J)_{d-i}; the rank of an induced map A/A' -> B/B'
    is rank[phi(A); B'] - rank[B']."""
    lin = independent_forms(forms)
    m = len(lin)
    hil = brute_hilbert(gens, nvars, D)

    def induced_rank(i, d):
        # d_i : wedge^i (x) R_{d-i} -> wedge^{i-1} (x) R_{d-i+1}
        if i < 1 or i > m or d - i < 0:
            return 0
        tgt_mons = list(monomials_of_degree(nvars, d - i + 1))
        tindex = {mm: j for j, mm in enumerate(tgt_mons)}
        subsets_t = list(combinations(range(m), i - 1))
        spos = {s: j for j, s in enumerate(subsets_t)}
        width = len(tgt_mons) * len(subsets_t)
        jrows_local = ideal_span(gens, nvars, d - i + 1, tindex)
        brows = []
        for s in subsets_t:
            off = spos[s] * len(tgt_mons)
            for r in jrows_local:
                row = [sympy.Integer(0)] * width
                row[off:off + len(tgt_mons)] = r
                brows.append(row)
        arows = []
        for s in combinations(range(m), i):
            for mono in monomials_of_degree(nvars, d - i):
                row = [sympy.Integer(0)] * width
                for pos, t in enumerate(s):
                    rest = s[:pos] + s[pos + 1:]
                    sign = -1 if pos % 2 else 1
                    off = spos[rest] * len(tgt_mons)
                    for mm, c in lin[t].items():
                        prod = tuple(a + b for a, b in zip(mm, mono))
                        row[off + tindex[prod]] += sign * c
                arows.append(row)
        return _rank(arows + brows, width) - _rank(brows, width)

    dims = {}
    for d in range(D + 1):
        for i in range(m + 1):
            if d - i < 0:
                continue
            c = len(list(combinations(range(m), i))) * hil[d - i]
            dims[(i, d)] = c - induced_rank(i, d) - induced_rank(i + 1, d)
    return dims


def to_sympy(p: Polynomial, syms):
    return sum((_qq(c) * sympy.Mul(*[s ** e for s, e in zip(syms, m)]) for m, c in p.terms.items()),
               sympy.Integer(0))


@pytest.fixture(scope="session")
def gb_cache():
    from cuberes.groebner import GBCache
    return GBCache()


def resolution_graphs(max_strands: int, max_crossings: int, connected_only: bool = False):
    """(label, graph) for every complete resolution of every braid word in range."""
    from cuberes.braid_model import ResolutionAssignment, braid_words, build_decorated_diagram, resolve
    seen = set()
    for w in braid_words(max_strands, max_crossings):
        d = build_decorated_diagram(w)
        for I in ResolutionAssignment.all_for(d.n):
            S = resolve(d, I)
            if connected_only and not S.is_connected():
                continue
            h = S.canonical_hash()
            if h in seen:
                continue
            seen.add(h)
            yield f"{w}|{I}", S


def small_graphs(max_vars: int = 6):
    from cuberes.gallery import GALLERY
    out = [(lab, S) for lab, S in resolution_graphs(3, 2) if S.nedges <= max_vars]
    out += [(name, build()) for name, build in GALLERY.items() if build().nedges <= max_vars]
    return out
