"""Braid words, decorated braid projections, resolutions and partial braid graphs.

Conventions. Strands are oriented upward and positions are numbered 1..s from
the left. Letter +i is the positive crossing sigma_i between positions i and
i+1; its incoming edges are (c, d) = (bottom-left, bottom-right) and outgoing
edges (a, b) = (top-left, top-right). Positions 2..s are closed up on the
right; position 1 is the distinguished strand, cut open so that e_0 is its
bottom segment (the second segment along the orientation) and e_1 its top one.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Iterable, Sequence


class BraidError(ValueError):
    pass


# -- braid words -----------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple

    def __post_init__(self):
        if self.strand_count < 1:
            raise BraidError("strand_count must be positive")
        if not self.letters and self.strand_count != 1:
            raise BraidError("empty word only allowed on one strand")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strand_count:
                raise BraidError(f"letter {x} invalid on {self.strand_count} strands")

    @property
    def n_plus(self):
        return sum(1 for x in self.letters if x > 0)

    @property
    def n_minus(self):
        return sum(1 for x in self.letters if x < 0)

    @property
    def closure_count(self):
        """k in the partial-braid-graph sense: strands closed on the right."""
        return self.strand_count - 1

    def __str__(self):
        return " ".join(str(x) for x in self.letters)

    def mirror(self):
        return BraidWord(self.strand_count, tuple(-x for x in self.letters))


def parse_braid_word(text: str, strand_count: int | None = None) -> BraidWord:
    tokens = text.split()
    if not tokens:
        raise BraidError("empty braid word")
    letters = []
    for tok in tokens:
        try:
            x = int(tok)
        except ValueError:
            raise BraidError(f"malformed token {tok!r}") from None
        if x == 0:
            raise BraidError("zero letter")
        letters.append(x)
    s = strand_count if strand_count is not None else 1 + max(abs(x) for x in letters)
    return BraidWord(s, tuple(letters))


def unknot_word() -> BraidWord:
    """The 0-crossing diagram on one strand."""
    return BraidWord(1, ())


# -- open braid graph assembly ---------------------------------------------------

@dataclass(frozen=True)
class Vertex:
    valence: int
    out: tuple
    inn: tuple
    origin: tuple = ()  # (crossing index, 'X' | 'L' | 'R') when coming from a diagram

    def to_doc(self):
        d = {"valence": self.valence, "out": list(self.out), "in": list(self.inn)}
        if self.origin:
            d["origin"] = list(self.origin)
        return d


def _assemble(P: int, k: int, events: Sequence[tuple]):
    """Run a bottom-to-top sweep of an open braid graph on P positions whose
    rightmost k positions are closed up.

    events: ('X', i, tag) four-valent vertex on positions i, i+1 or
            ('V', i, tag) two-valent vertex on position i   (1-based).
    Returns (vertices, loose_in, loose_out, strands, nedges) with final numbering.
    """
    if k > P or P < 1:
        raise BraidError("bad open graph shape")
    next_tmp = 0

    def fresh():
        nonlocal next_tmp
        next_tmp += 1
        return next_tmp - 1

    bottom = [fresh() for _ in range(P)]
    cur = list(bottom)
    raw = []  # (valence, out, in, tag)
    order_new = []
    for ev in events:
        kind, i = ev[0], ev[1]
        tag = ev[2] if len(ev) > 2 else ()
        if kind == "X":
            if not 1 <= i < P:
                raise BraidError(f"vertex position {i} out of range")
            c, d = cur[i - 1], cur[i]
            a, b = fresh(), fresh()
            order_new += [a, b]
            cur[i - 1], cur[i] = a, b
            raw.append((4, (a, b), (c, d), tag))
        elif kind == "V":
            if not 1 <= i <= P:
                raise BraidError(f"vertex position {i} out of range")
            f = cur[i - 1]
            e = fresh()
            order_new.append(e)
            cur[i - 1] = e
            raw.append((2, (e,), (f,), tag))
        else:
            raise BraidError(f"unknown event {kind!r}")
    # close the rightmost k positions: top edge == bottom edge
    alias = {}
    for j in range(P - k, P):
        if cur[j] != bottom[j]:
            alias[cur[j]] = bottom[j]

    def A(e):
        return alias.get(e, e)

    loose_in_tmp = bottom[: P - k]
    loose_out_tmp = [A(e) for e in cur[: P - k]]
    strands_tmp = bottom[P - k:]
    # final numbering: in-loose, out-loose, strands, then creation order
    ordered = []
    seen = set()
    for e in list(loose_in_tmp) + loose_out_tmp + list(strands_tmp) + [A(e) for e in order_new]:
        if e not in seen:
            seen.add(e)
            ordered.append(e)
    num = {e: n for n, e in enumerate(ordered)}

    def N(e):
        return num[A(e)]

    vertices = [Vertex(v, tuple(N(e) for e in o), tuple(N(e) for e in ii),
                       tuple(t) if isinstance(t, (tuple, list)) else (t,)) for v, o, ii, t in raw]
    return (vertices, tuple(N(e) for e in loose_in_tmp), tuple(N(e) for e in loose_out_tmp),
            tuple(N(e) for e in strands_tmp), len(ordered))


# -- decorated diagrams ------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    index: int
    sign: int
    position: int
    a: int
    b: int
    c: int
    d: int

    @property
    def out(self):
        return (self.a, self.b)

    @property
    def inn(self):
        return (self.c, self.d)


@dataclass(frozen=True)
class DecoratedDiagram:
    word: BraidWord
    crossings: tuple
    nedges: int
    distinguished_split: tuple
    strands: tuple

    @property
    def n(self):
        return len(self.crossings)

    @property
    def n_plus(self):
        return self.word.n_plus

    @property
    def n_minus(self):
        return self.word.n_minus

    @property
    def braid_index(self):
        return self.word.strand_count

    @property
    def edges(self):
        return tuple(range(self.nedges))

    def edge_names(self):
        return tuple(f"U{i}" for i in range(self.nedges))


def build_decorated_diagram(w: BraidWord) -> DecoratedDiagram:
    s = w.strand_count
    touched = {abs(x) for x in w.letters} | {abs(x) + 1 for x in w.letters}
    for j in range(2, s + 1):
        if j not in touched:
            raise BraidError(f"closure strand at position {j} meets no crossing (split diagram)")
    events = [("X", abs(x), (idx, "X")) for idx, x in enumerate(w.letters)]
    verts, lin, lout, strands, nedges = _assemble(s, s - 1, events)
    crossings = []
    for idx, (x, v) in enumerate(zip(w.letters, verts)):
        a, b = v.out
        c, d = v.inn
        crossings.append(Crossing(idx, 1 if x > 0 else -1, abs(x), a, b, c, d))
    split = (lin[0], lout[0])
    if s == 1 and not w.letters:
        split = (0, 0)
    dd = DecoratedDiagram(w, tuple(crossings), nedges, split, strands)
    if nedges != 2 * len(w.letters) + 1:
        raise BraidError("edge count invariant violated")
    return dd


@dataclass(frozen=True)
class ResolutionAssignment:
    values: tuple  # crossing index -> 0/1

    @property
    def norm(self):
        return sum(self.values)

    def __len__(self):
        return len(self.values)

    @classmethod
    def all_for(cls, n):
        for bits in product((0, 1), repeat=n):
            yield cls(tuple(bits))

    def __str__(self):
        return "".join(map(str, self.values))


def is_singular(crossing: Crossing, value: int) -> bool:
    """Positive crossing: 0 singularizes; negative: 1 singularizes."""
    return (value == 0) if crossing.sign > 0 else (value == 1)


def resolve(d: DecoratedDiagram, I: ResolutionAssignment | Sequence[int]) -> "PartialBraidGraph":
    vals = I.values if isinstance(I, ResolutionAssignment) else tuple(I)
    if len(vals) != d.n:
        raise BraidError("assignment is not total")
    vertices = []
    for cr, v in zip(d.crossings, vals):
        if is_singular(cr, v):
            vertices.append(Vertex(4, (cr.a, cr.b), (cr.c, cr.d), (cr.index, "X")))
        else:
            vertices.append(Vertex(2, (cr.a,), (cr.c,), (cr.index, "L")))
            vertices.append(Vertex(2, (cr.b,), (cr.d,), (cr.index, "R")))
    if d.n == 0:
        lin, lout = (0,), (0,)
    else:
        lin, lout = (d.distinguished_split[0],), (d.distinguished_split[1],)
    g = PartialBraidGraph(d.nedges, tuple(vertices), lin, lout, d.strands, (), d.edge_names())
    return g.with_specials()


# -- partial braid graphs ----------------------------------------------------------

@dataclass(frozen=True)
class PartialBraidGraph:
    """Vertices listed in sweep (height) order; edges are 0..nedges-1."""

    nedges: int
    vertices: tuple
    loose_in: tuple
    loose_out: tuple
    strands: tuple = ()
    special: tuple = ()
    edge_names: tuple = ()
    unspecialized: int = 0

    def __post_init__(self):
        if not self.edge_names:
            object.__setattr__(self, "edge_names", tuple(f"U{i}" for i in range(self.nedges)))
        for v in self.vertices:
            if v.valence == 4 and (len(v.out), len(v.inn)) != (2, 2):
                raise BraidError("four-valent vertex needs 2 in / 2 out")
            if v.valence == 2 and (len(v.out), len(v.inn)) != (1, 1):
                raise BraidError("two-valent vertex needs 1 in / 1 out")

    # -- basic structure ------------------------------------------------------
    @property
    def k(self):
        return len(self.strands)

    @property
    def loose_ends(self):
        return tuple(self.loose_in) + tuple(e for e in self.loose_out if e not in self.loose_in)

    def four_valent(self):
        return [i for i, v in enumerate(self.vertices) if v.valence == 4]

    def two_valent(self):
        return [i for i, v in enumerate(self.vertices) if v.valence == 2]

    def tails(self):
        t = {}
        for i, v in enumerate(self.vertices):
            for e in v.out:
                t[e] = i
        return t

    def heads(self):
        h = {}
        for i, v in enumerate(self.vertices):
            for e in v.inn:
                h[e] = i
        return h

    def components(self) -> list:
        parent = list(range(self.nedges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in self.vertices:
            es = list(v.out) + list(v.inn)
            for e in es[1:]:
                ra, rb = find(es[0]), find(e)
                if ra != rb:
                    parent[ra] = rb
        groups: dict = {}
        for e in range(self.nedges):
            groups.setdefault(find(e), []).append(e)
        return sorted(groups.values(), key=min)

    def is_connected(self):
        return len(self.components()) <= 1

    def satisfies_assumption(self):
        """At least one (hence two) loose ends."""
        return len(self.loose_in) + len(self.loose_out) >= 2

    def is_open(self):
        """True when the closure is vacuous (no closure strands)."""
        return not self.strands

    def valence_balance(self):
        return sum(len(v.out) - len(v.inn) for v in self.vertices)

    def variable_names(self):
        return self.edge_names

    # -- specials ---------------------------------------------------------------
    def with_specials(self) -> "PartialBraidGraph":
        """Pick one 2-valent vertex on every component that has no loose end,
        preferring the lowest one that sits on the right side of a smoothing."""
        loose = set(self.loose_in) | set(self.loose_out)
        comp_of = {}
        comps = self.components()
        for ci, comp in enumerate(comps):
            for e in comp:
                comp_of[e] = ci
        specials, missing = [], 0
        for ci, comp in enumerate(comps):
            if loose & set(comp):
                continue
            cands = [i for i, v in enumerate(self.vertices) if v.valence == 2 and comp_of[v.out[0]] == ci]
            right = [i for i in cands if self.vertices[i].origin[1:] == ("R",)]
            pick = (right or cands)
            if pick:
                specials.append(pick[0])
            else:
                missing += 1
        return replace(self, special=tuple(sorted(specials)), unspecialized=missing)

    @property
    def wedge_rank(self):
        """dim V_S: components not containing the distinguished loose ends."""
        loose = set(self.loose_in) | set(self.loose_out)
        return sum(1 for comp in self.components() if not (loose & set(comp)))

    # -- sweep -------------------------------------------------------------------
    def sweep_decomposition(self) -> "SweepDecomposition":
        return sweep_decomposition(self)

    # -- subgraphs -----------------------------------------------------------------
    def subgraph(self, W: Iterable[int]) -> "PartialBraidGraph":
        """Vertices W (kept in height order) with the edges touching them; edge ids unchanged."""
        W = sorted(set(W))
        Ws = set(W)
        tails, heads = self.tails(), self.heads()
        touched = set()
        for i in W:
            touched.update(self.vertices[i].out)
            touched.update(self.vertices[i].inn)
        strand_set = Counter(self.strands)
        lin, lout, strands = [], [], []
        for e in sorted(touched):
            t_in = tails.get(e) in Ws
            h_in = heads.get(e) in Ws
            if t_in and h_in:
                strands += [e] * strand_set.get(e, 0)
            elif h_in:
                lin.append(e)
            else:
                lout.append(e)
        verts = tuple(self.vertices[i] for i in W)
        spec = tuple(W.index(i) for i in self.special if i in Ws)
        return PartialBraidGraph(self.nedges, verts, tuple(lin), tuple(lout), tuple(strands), spec,
                                 self.edge_names)

    # -- serialization -------------------------------------------------------------
    def to_doc(self):
        return {
            "nedges": self.nedges,
            "edge_names": list(self.edge_names),
            "vertices": [v.to_doc() for v in self.vertices],
            "loose_ends": list(self.loose_ends),
            "loose_in": list(self.loose_in),
            "loose_out": list(self.loose_out),
            "strands": list(self.strands),
            "special": list(self.special),
        }

    @classmethod
    def from_doc(cls, doc) -> "PartialBraidGraph":
        verts = tuple(Vertex(v["valence"], tuple(v["out"]), tuple(v["in"]), tuple(v.get("origin", ())))
                      for v in doc["vertices"])
        nedges = doc.get("nedges")
        if nedges is None:
            ids = set(doc.get("loose_ends", [])) | set(doc.get("strands", []))
            for v in verts:
                ids.update(v.out)
                ids.update(v.inn)
            nedges = max(ids) + 1 if ids else 0
        g = cls(nedges, verts, tuple(doc.get("loose_in", ())), tuple(doc.get("loose_out", ())),
                tuple(doc.get("strands", ())), tuple(doc.get("special", ())), tuple(doc.get("edge_names", ())))
        if "loose_in" not in doc:
            heads, tails = g.heads(), g.tails()
            lin = tuple(e for e in doc.get("loose_ends", []) if e in heads and e not in tails)
            lout = tuple(e for e in doc.get("loose_ends", []) if e in tails and e not in heads)
            g = replace(g, loose_in=lin, loose_out=lout)
        return g

    def canonical_form(self):
        relabel = {}
        for e in list(self.loose_in) + list(self.loose_out) + list(self.strands):
            relabel.setdefault(e, len(relabel))
        for v in self.vertices:
            for e in v.out + v.inn:
                relabel.setdefault(e, len(relabel))
        for e in range(self.nedges):
            relabel.setdefault(e, len(relabel))
        R = relabel.__getitem__
        return [
            sorted(R(e) for e in self.loose_in), sorted(R(e) for e in self.loose_out),
            sorted(R(e) for e in self.strands),
            [[v.valence, sorted(map(R, v.out)), sorted(map(R, v.inn))] for v in self.vertices],
            list(self.special),
        ]

    def canonical_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.canonical_form()).encode()).hexdigest()[:20]


def graph_from_events(P: int, k: int, events: Sequence[tuple]) -> PartialBraidGraph:
    """Closure of an open braid graph on P positions with the rightmost k closed."""
    verts, lin, lout, strands, nedges = _assemble(P, k, events)
    g = PartialBraidGraph(nedges, tuple(verts), lin, lout, strands)
    return g.with_specials()


# -- sweep decomposition ------------------------------------------------------------

@dataclass(frozen=True)
class SweepDecomposition:
    order: tuple  # vertex indices p_1..p_m
    F: tuple  # tuple of Counter-like sorted tuples, F_0..F_m
    G: tuple  # G_1..G_m (G[0] is G_1)
    strands: tuple

    def as_multisets(self):
        return [Counter(f) for f in self.F], [Counter(g) for g in self.G]


def _ms(c: Counter):
    return tuple(sorted(c.elements()))


def sweep_decomposition(S: PartialBraidGraph) -> SweepDecomposition:
    F = Counter(S.loose_in) + Counter(S.strands)
    Fs, Gs = [_ms(F)], []
    for idx, v in enumerate(S.vertices):
        need = Counter(v.inn)
        for e, c in need.items():
            if F[e] < c:
                raise BraidError(f"sweep breaks at vertex {idx}: in-edge {e} not on the line below")
        F = F - need
        Gs.append(_ms(F))
        F = F + Counter(v.out)
        Fs.append(_ms(F))
    final = Counter(S.loose_out) + Counter(S.strands)
    if F != final:
        raise BraidError("sweep does not end on the out loose ends plus closure strands")
    return SweepDecomposition(tuple(range(len(S.vertices))), tuple(Fs), tuple(Gs), tuple(S.strands))


# -- two-valent insertion ------------------------------------------------------------------

def insert_two_valent(S: PartialBraidGraph, edge: int) -> PartialBraidGraph:
    """Put a new 2-valent vertex p on `edge`; the old id keeps the part entering p
    and a new edge (id nedges) leaves p."""
    if not 0 <= edge < S.nedges:
        raise BraidError(f"no edge {edge}")
    new = S.nedges
    tails, heads = S.tails(), S.heads()
    is_strand = edge in S.strands
    p = Vertex(2, (new,), (edge,), ("ins", "V"))
    verts = []
    for v in S.vertices:
        if edge in v.inn:
            inn = tuple(new if e == edge else e for e in v.inn)
            # a loop edge at a vertex leaves through out and re-enters through in
            verts.append(Vertex(v.valence, v.out, inn, v.origin))
        else:
            verts.append(v)
    if is_strand:
        pos = len(verts)
    elif edge in tails:
        pos = tails[edge] + 1
    else:
        pos = 0
    verts.insert(pos, p)
    remap = {i: (i if i < pos else i + 1) for i in range(len(S.vertices))}
    strands = tuple(new if e == edge else e for e in S.strands)
    lout = tuple(new if e == edge else e for e in S.loose_out)
    lin = tuple(S.loose_in)
    if edge in S.loose_in and edge in S.loose_out:
        lin = tuple(S.loose_in)
    names = tuple(S.edge_names) + (f"U{new}",)
    spec = tuple(sorted(remap[i] for i in S.special))
    return PartialBraidGraph(S.nedges + 1, tuple(verts), lin, lout, strands, spec, names, S.unspecialized)


# -- enumeration helpers ---------------------------------------------------------------------

def braid_words(max_strands: int, max_crossings: int, min_crossings: int = 1):
    """All braid words on exactly s strands (2 <= s <= max_strands) that touch every
    closure position, with min..max crossings."""
    for s in range(2, max_strands + 1):
        alphabet = [i for i in range(1, s)] + [-i for i in range(1, s)]
        for n in range(min_crossings, max_crossings + 1):
            for letters in product(alphabet, repeat=n):
                used = {abs(x) for x in letters}
                if len(used) != s - 1:
                    continue
                yield BraidWord(s, tuple(letters))


def fully_singular(d: DecoratedDiagram) -> ResolutionAssignment:
    return ResolutionAssignment(tuple(0 if c.sign > 0 else 1 for c in d.crossings))
