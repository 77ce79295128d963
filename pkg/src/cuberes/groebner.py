"""Buchberger's algorithm, normal forms, and Hilbert series of cyclic quotients."""
from __future__ import annotations

import hashlib
import heapq
import json
import os
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .poly_kernel import (QQ, FieldConfig, Polynomial, TruncatedSeries, one_minus_t_pow, series_from_rational,
                          series_recognize, upoly_add, upoly_mul, upoly_trim)


class GroebnerBudgetError(RuntimeError):
    """Raised when the S-pair budget is exhausted."""


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"
    perm: tuple | None = None  # variable indices, highest priority first

    def __post_init__(self):
        if self.kind not in ("degrevlex", "deglex", "lex"):
            raise ValueError(f"unknown order {self.kind!r}")

    def neg_key(self, m):
        """Sort key: ascending key means descending in the order."""
        if self.perm is not None:
            m = tuple(m[i] for i in self.perm)
        if self.kind == "degrevlex":
            return (-sum(m),) + tuple(reversed(m))
        if self.kind == "deglex":
            return (-sum(m),) + tuple(-x for x in m)
        return tuple(-x for x in m)

    def __str__(self):
        return self.kind if self.perm is None else f"{self.kind}:{','.join(map(str, self.perm))}"

    @classmethod
    def parse(cls, text: str) -> "MonomialOrder":
        if ":" in text:
            kind, perm = text.split(":", 1)
            return cls(kind, tuple(int(x) for x in perm.split(",")))
        return cls(text)


DEGREVLEX = MonomialOrder()


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lead(terms: dict, order: MonomialOrder):
    return min(terms, key=order.neg_key)


def _reduce(f: dict, basis: list, order: MonomialOrder, F: FieldConfig, full=True) -> dict:
    """Reduce f by basis = [(lm, terms) with monic terms]."""
    f = dict(f)
    nk = order.neg_key
    heap = [(nk(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.get(m)
        if c is None:
            continue
        red = None
        for lm, g in basis:
            if _divides(lm, m):
                red = (lm, g)
                break
        if red is None:
            rem[m] = c
            del f[m]
            if not full:
                # only top-reduction requested: rest passes through
                for mm, cc in f.items():
                    rem[mm] = cc
                return rem
            continue
        lm, g = red
        q = _sub(m, lm)
        for gm, gc in g.items():
            nm = tuple(a + b for a, b in zip(gm, q))
            old = f.get(nm)
            v = F.norm((old if old is not None else F.zero) - c * gc)
            if v:
                if old is None:
                    heapq.heappush(heap, (nk(nm), nm))
                f[nm] = v
            elif old is not None:
                del f[nm]
    return rem


def _monic(terms: dict, order: MonomialOrder, F: FieldConfig):
    lm = _lead(terms, order)
    inv = F.inv(terms[lm])
    return lm, {m: F.norm(c * inv) for m, c in terms.items()}


def _spoly(f, g, F):
    (lf, tf), (lg, tg) = f, g
    l = _lcm(lf, lg)
    qf, qg = _sub(l, lf), _sub(l, lg)
    out = {}
    for m, c in tf.items():
        out[tuple(a + b for a, b in zip(m, qf))] = c
    for m, c in tg.items():
        nm = tuple(a + b for a, b in zip(m, qg))
        v = F.norm(out.get(nm, F.zero) - c)
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return out


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis: monic generators sorted by leading monomial."""

    gens: list
    order: MonomialOrder
    field: FieldConfig
    nvars: int
    names: tuple
    source_hash: str = ""
    pairs_used: int = 0

    def __post_init__(self):
        self._basis = [(_lead(g.terms, self.order), g.terms) for g in self.gens]
        self._std_cache: dict = {}

    @property
    def leading_monomials(self):
        return [lm for lm, _ in self._basis]

    def is_unit(self):
        return any(sum(lm) == 0 for lm, _ in self._basis)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.nvars != self.nvars or f.field != self.field:
            raise ValueError("ambient ring mismatch")
        return Polynomial(_reduce(f.terms, self._basis, self.order, self.field), self.nvars, self.field,
                          self.names, _clean=True)

    def reduce_terms(self, terms: dict) -> dict:
        return _reduce(terms, self._basis, self.order, self.field)

    def nf_monomial(self, m) -> dict:
        """Normal form of a single monomial, memoized over every monomial it touches."""
        cache = self.__dict__.setdefault("_nf_cache", {})
        hit = cache.get(m)
        if hit is not None:
            return hit
        F = self.field
        stack = [m]
        while stack:
            x = stack[-1]
            if x in cache:
                stack.pop()
                continue
            div = None
            for lm, terms in self._basis:
                if _divides(lm, x):
                    div = (lm, terms)
                    break
            if div is None:
                cache[x] = {x: F.one}
                stack.pop()
                continue
            lm, terms = div
            t = _sub(x, lm)
            pending = []
            for mono, c in terms.items():
                if mono != lm:
                    y = tuple(a + b for a, b in zip(t, mono))
                    if y not in cache:
                        pending.append(y)
            if pending:
                stack.extend(pending)
                continue
            res: dict = {}
            for mono, c in terms.items():
                if mono == lm:
                    continue
                y = tuple(a + b for a, b in zip(t, mono))
                for k, v in cache[y].items():
                    nv = F.norm(res.get(k, F.zero) - c * v)
                    if nv:
                        res[k] = nv
                    else:
                        res.pop(k, None)
            cache[x] = res
            stack.pop()
        return cache[m]

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def key(self):
        return tuple(sorted((tuple(sorted(g.terms.items())) for g in self.gens)))

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.key() == other.key()

    # -- standard monomials / Hilbert series --------------------------------
    def is_standard(self, m) -> bool:
        for lm, _ in self._basis:
            if _divides(lm, m):
                return False
        return True

    def standard_monomials(self, d: int) -> list:
        """Standard monomials of degree d (cached, built from degree d-1)."""
        if d < 0:
            return []
        if d in self._std_cache:
            return self._std_cache[d]
        if d == 0:
            out = [(0,) * self.nvars] if self.is_standard((0,) * self.nvars) else []
        else:
            prev = self.standard_monomials(d - 1)
            out = []
            for m in prev:
                last = max((i for i, e in enumerate(m) if e), default=0)
                for i in range(last, self.nvars):
                    nm = m[:i] + (m[i] + 1,) + m[i + 1:]
                    if self.is_standard(nm):
                        out.append(nm)
        out.sort(key=self.order.neg_key)
        self._std_cache[d] = out
        return out

    def hilbert_numerator(self) -> list:
        return hilbert_numerator(self.leading_monomials, self.nvars)

    def krull_dim(self) -> int:
        num, power = _reduce_rational(self.hilbert_numerator(), self.nvars)
        return power if num else -1

    def to_doc(self):
        return {"order": str(self.order), "field": str(self.field),
                "ideal": [{"tag": f"g{i}", "terms": g.term_list()} for i, g in enumerate(self.gens)]}


# -- Hilbert numerator of a monomial ideal -----------------------------------

def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def hilbert_numerator(gens: Sequence[tuple], nvars: int) -> list:
    """K-polynomial numerator N(T) with HS(R/I) = N(T)/(1-T)^nvars."""
    return _hn(tuple(_minimalize(gens)), nvars)


def _hn(gens, n):
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return []
    # pairwise coprime -> product formula
    support_count = [0] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                support_count[i] += 1
    if max(support_count) <= 1:
        out = [1]
        for g in gens:
            d = sum(g)
            out = upoly_mul(out, [1] + [0] * (d - 1) + [-1])
        return out
    piv = max(range(n), key=lambda i: support_count[i])
    p = tuple(1 if i == piv else 0 for i in range(n))
    plus = _minimalize(list(gens) + [p])
    colon = _minimalize([tuple(e - 1 if (i == piv and e > 0) else e for i, e in enumerate(g)) for g in gens])
    a = _hn(tuple(plus), n)
    b = _hn(tuple(colon), n)
    return upoly_add(a, [0] + b)


def _reduce_rational(num, power):
    from .poly_kernel import divide_one_minus_t
    num = upoly_trim(num)
    while power > 0 and num:
        q = divide_one_minus_t(num)
        if q is None:
            break
        num, power = q, power - 1
    return num, power


# -- Buchberger ----------------------------------------------------------------

def _as_terms(gens):
    out = []
    for g in gens:
        if isinstance(g, Polynomial):
            if g.terms:
                out.append(g)
        else:
            out.append(g)
    return out


def buchberger_reduced(gens, order: MonomialOrder = DEGREVLEX, budget: int | None = 200000,
                       nvars: int | None = None, field: FieldConfig | None = None, names=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `gens`.

    `gens` is a list of Polynomial or an object with a `.generators` list.
    Uses the Gebauer-Moeller pair update and the normal selection strategy.
    """
    if hasattr(gens, "generators"):
        gens = gens.generators
    gens = list(gens)
    if gens:
        nvars, field, names = gens[0].nvars, gens[0].field, gens[0].names
        for g in gens:
            if g.nvars != nvars or g.field != field:
                raise ValueError("generators live in different rings")
    if nvars is None:
        raise ValueError("empty generator list needs nvars")
    field = field or QQ
    names = tuple(names) if names is not None else tuple(f"U{i}" for i in range(nvars))
    F = field
    nk = order.neg_key

    polys: list = []  # (lm, terms), monic
    G: list = []  # indices currently in basis
    B: list = []  # heap of (deg lcm, neg_key lcm, i, j)
    used = 0

    def add(h_terms):
        nonlocal B, G
        lm, t = _monic(h_terms, order, F)
        h = len(polys)
        polys.append((lm, t))
        # Gebauer-Moeller update
        C = [g for g in G]
        lcms = {g: _lcm(lm, polys[g][0]) for g in C}
        D = []
        for idx, g in enumerate(C):
            lg = lcms[g]
            if _coprime(lm, polys[g][0]):
                D.append(g)
                continue
            dominated = False
            for g2 in C[idx + 1:]:
                if _divides(lcms[g2], lg):
                    dominated = True
                    break
            if not dominated:
                for g2 in D:
                    if _divides(lcms[g2], lg):
                        dominated = True
                        break
            if not dominated:
                D.append(g)
        E = [g for g in D if not _coprime(lm, polys[g][0])]
        newB = []
        for item in B:
            _, _, i, j = item
            lij = _lcm(polys[i][0], polys[j][0])
            if (_divides(lm, lij) and _lcm(polys[i][0], lm) != lij and _lcm(polys[j][0], lm) != lij):
                continue
            newB.append(item)
        for g in E:
            l = lcms[g]
            newB.append((sum(l), nk(l), g, h))
        heapq.heapify(newB)
        B = newB
        G = [g for g in G if not _divides(lm, polys[g][0])] + [h]

    # seed: interreduce inputs lightly by processing smallest first
    seeds = sorted((g.terms for g in gens if g.terms), key=lambda t: nk(_lead(t, order)), reverse=True)
    for t in seeds:
        r = _reduce(t, [polys[g] for g in G], order, F)
        if r:
            add(r)
    while B:
        _, _, i, j = heapq.heappop(B)
        used += 1
        if budget is not None and used > budget:
            raise GroebnerBudgetError(f"S-pair budget {budget} exhausted")
        s = _spoly(polys[i], polys[j], F)
        if not s:
            continue
        r = _reduce(s, [polys[g] for g in G], order, F)
        if r:
            add(r)
    # minimal + reduced
    basis = [polys[g] for g in G]
    basis.sort(key=lambda p: nk(p[0]), reverse=True)
    minimal = []
    for lm, t in basis:
        if not any(_divides(l2, lm) for l2, _ in minimal):
            minimal.append((lm, t))
    reduced = []
    for idx, (lm, t) in enumerate(minimal):
        others = [p for k, p in enumerate(minimal) if k != idx]
        r = _reduce(t, others, order, F)
        reduced.append(_monic(r, order, F))
    reduced.sort(key=lambda p: nk(p[0]), reverse=True)
    out = [Polynomial(t, nvars, F, names, _clean=True) for _, t in reduced]
    return GroebnerBasis(out, order, F, nvars, names, ideal_hash(gens, order), used)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def ideal_equal(a, b, order: MonomialOrder = DEGREVLEX, cache: "GBCache | None" = None) -> bool:
    ga = gb_of(a, order, cache)
    gbb = gb_of(b, order, cache)
    if ga.nvars != gbb.nvars or ga.field != gbb.field:
        raise ValueError("ambient ring mismatch")
    return ga == gbb


def ideal_contains(big, small, order: MonomialOrder = DEGREVLEX, cache=None) -> bool:
    g = gb_of(big, order, cache)
    gens = small.generators if hasattr(small, "generators") else small
    return all(g.contains(f) for f in gens)


def quotient_hilbert(gb: GroebnerBasis, D: int) -> TruncatedSeries:
    """dim (R/I)_d for d <= D, with the exact rational form from the leading-term ideal."""
    num = gb.hilbert_numerator()
    s = series_from_rational(num, gb.nvars, D)
    return s


def quotient_hilbert_counted(gb: GroebnerBasis, D: int) -> TruncatedSeries:
    """Same dimensions by explicit standard-monomial counting."""
    coeffs = [len(gb.standard_monomials(d)) for d in range(D + 1)]
    dim = gb.krull_dim()
    return series_recognize(TruncatedSeries(coeffs, D), max(dim, 0))


# -- hashing and cache ------------------------------------------------------------

def ideal_hash(gens, order: MonomialOrder | None = None) -> str:
    items = sorted(json.dumps(sorted([[list(m), str(c)] for m, c in g.terms.items()])) for g in gens)
    nv = gens[0].nvars if gens else 0
    fld = str(gens[0].field) if gens else "q"
    blob = json.dumps([nv, fld, str(order) if order else "", items])
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


class GBCache:
    """Keyed cache of reduced bases; in memory, optionally mirrored to a directory."""

    def __init__(self, path: str | None = None):
        self.path = path
        self._mem: dict = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if path:
            os.makedirs(path, exist_ok=True)

    def get(self, gens, order, budget=200000, nvars=None, field=None, names=None) -> GroebnerBasis:
        key = ideal_hash(gens, order) if gens else f"empty-{nvars}-{field}"
        with self._lock:
            hit = self._mem.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        gb = self._load(key, gens, order)
        if gb is None:
            self.misses += 1
            gb = buchberger_reduced(gens, order, budget=budget, nvars=nvars, field=field, names=names)
            self._store(key, gb)
        with self._lock:
            self._mem[key] = gb
        return gb

    def _file(self, key):
        return os.path.join(self.path, f"{key}.json")

    def _load(self, key, gens, order):
        if not self.path or not gens or not os.path.exists(self._file(key)):
            return None
        try:
            with open(self._file(key)) as fh:
                doc = json.load(fh)
        except (OSError, ValueError):
            return None
        g0 = gens[0]
        F = g0.field
        polys = []
        for item in doc["ideal"]:
            terms = {tuple(m): F.coerce(_parse_coeff(c)) for c, m in item["terms"]}
            polys.append(Polynomial(terms, g0.nvars, F, g0.names, _clean=True))
        return GroebnerBasis(polys, order, F, g0.nvars, g0.names, key)

    def _store(self, key, gb):
        if not self.path:
            return
        tmp = self._file(key) + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(gb.to_doc(), fh)
        os.replace(tmp, self._file(key))


def _parse_coeff(s: str):
    from fractions import Fraction
    return Fraction(s)


_DEFAULT_CACHE = GBCache()


def gb_of(ideal, order: MonomialOrder = DEGREVLEX, cache: GBCache | None = None, budget=200000) -> GroebnerBasis:
    """GB of an IdealSpec / list of polynomials / existing basis, through a cache."""
    if isinstance(ideal, GroebnerBasis):
        return ideal
    cache = cache or _DEFAULT_CACHE
    gens = list(ideal.generators) if hasattr(ideal, "generators") else list(ideal)
    nvars = getattr(ideal, "nvars", None)
    field = getattr(ideal, "field", None)
    names = getattr(ideal, "names", None)
    gens = [g for g in gens if not g.is_zero()]
    return cache.get(gens, order, budget=budget, nvars=nvars, field=field, names=names)
