"""Sweeps over braid families, the JSONL result store, and the command line."""
from __future__ import annotations

import json
import logging
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from itertools import combinations

import click

from .braid_model import (BraidError, PartialBraidGraph, ResolutionAssignment, braid_words, build_decorated_diagram,
                          fully_singular, parse_braid_word, resolve, unknot_word)
from .gallery import GALLERY
from .groebner import DEGREVLEX, GBCache, MonomialOrder, gb_of
from .ideal_gen import edge_ring_relations, linear_ideal, nonlocal_ideal, quadratic_ideal
from .koszul_tor import check_graded_conjecture, check_vanishing, tor_dims
from .poly_kernel import QQ, FieldConfig

log = logging.getLogger("cuberes")

EXIT_HOLDS, EXIT_FAILS, EXIT_UNSTABLE, EXIT_ERROR = 0, 1, 2, 3
POLICIES = ("fully-singularized", "all-resolutions")


# -- sweep model ---------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    max_strands: int = 3
    max_crossings: int = 5
    policy: str = "fully-singularized"
    field: str = "q"
    D: int = 10
    connected_only: bool = True
    min_crossings: int = 1
    gallery: tuple = ()

    def __post_init__(self):
        if self.max_strands < 0 or self.max_crossings < 0 or self.D < 0:
            raise ValueError("sweep bounds must be nonnegative")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")
        FieldConfig.parse(self.field)
        for g in self.gallery:
            if g not in GALLERY:
                raise ValueError(f"unknown gallery graph {g!r}")


@dataclass
class ResultRecord:
    graph_hash: str
    braid_word: str
    strands: int
    assignment: str
    k: int
    nvars: int
    n_series: list
    q_series: list
    verdict: str
    first_failure: list | None
    field: str
    D: int
    timestamp: str
    runtime: float
    graph: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_doc(cls, doc):
        return cls(**doc)


def enumerate_graphs(spec: SweepSpec):
    """Yield (label word, strands, assignment, graph) with duplicate graphs removed."""
    seen = set()
    for name in spec.gallery:
        S = GALLERY[name]()
        h = S.canonical_hash()
        if h not in seen:
            seen.add(h)
            yield name, 0, "", S
    if spec.max_strands < 2 or spec.max_crossings < 1:
        return
    for w in braid_words(spec.max_strands, spec.max_crossings, max(1, spec.min_crossings)):
        try:
            d = build_decorated_diagram(w)
        except BraidError:
            continue
        if spec.policy == "fully-singularized":
            assignments = [fully_singular(d)]
        else:
            assignments = list(ResolutionAssignment.all_for(d.n))
        for I in assignments:
            S = resolve(d, I)
            if spec.connected_only and not (S.is_connected() and S.satisfies_assumption()):
                continue
            h = S.canonical_hash()
            if h in seen:
                continue
            seen.add(h)
            yield str(w), w.strand_count, str(I), S


def _check_task(args):
    word, strands, assignment, S, field_text, D, order_text = args
    F = FieldConfig.parse(field_text)
    t0 = time.perf_counter()
    try:
        v = check_graded_conjecture(S, D, F, total=not S.satisfies_assumption())
        n_tab, q_tab = v.tables
        status = v.status
        ff = list(v.first_failure) if v.first_failure else None
        ns = [s.to_doc() for s in n_tab.series]
        qs = [s.to_doc() for s in q_tab.series]
    except Exception as exc:  # recorded, never fatal
        status, ff, ns, qs = "skipped", [repr(exc)], [], []
    rt = time.perf_counter() - t0
    return ResultRecord(S.canonical_hash(), word, strands, assignment, S.k, S.nedges, ns, qs, status, ff,
                        field_text, D, datetime.now(timezone.utc).isoformat(), round(rt, 4), S.to_doc())


def run_sweep(spec: SweepSpec, store: str | None = None, jobs: int = 1, order: str = "degrevlex",
              graphs=None) -> dict:
    """Check q_i = T^i n_i for i <= k on every graph of the family; resumable through the store."""
    done = {}
    if store:
        for r in store_query(store):
            if r.field == spec.field and r.D == spec.D:
                done[r.graph_hash] = r
    summary = {"checked": 0, "holds": 0, "fails": 0, "unstable": 0, "skipped": 0, "resumed": 0}
    items = list(graphs) if graphs is not None else list(enumerate_graphs(spec))
    todo = []
    records = []
    for word, strands, assignment, S in items:
        h = S.canonical_hash()
        if h in done:
            summary["resumed"] += 1
            records.append(done[h])
            continue
        todo.append((word, strands, assignment, S, spec.field, spec.D, order))
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_task, todo, chunksize=1))
    else:
        results = [_check_task(t) for t in todo]
    for rec in results:
        if store:
            store_append(store, rec)
        records.append(rec)
    for rec in records:
        summary["checked"] += 1
        key = rec.verdict if rec.verdict in summary else "skipped"
        summary[key] += 1
    summary["records"] = records
    return summary


# -- store ---------------------------------------------------------------------------------

def store_append(path: str, record: ResultRecord) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "a") as fh:
        fh.write(record.to_json() + "\n")


def store_query(path: str, graph_hash: str | None = None, verdict: str | None = None,
                max_crossings: int | None = None, max_strands: int | None = None,
                word: str | None = None) -> list:
    if not os.path.exists(path):
        return []
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = ResultRecord.from_doc(json.loads(line))
            except (ValueError, TypeError) as exc:
                warnings.warn(f"{path}:{lineno}: skipping corrupt record ({exc})")
                continue
            if graph_hash and rec.graph_hash != graph_hash:
                continue
            if verdict and rec.verdict != verdict:
                continue
            if word is not None and rec.braid_word != word:
                continue
            if max_crossings is not None and rec.strands and len(rec.braid_word.split()) > max_crossings:
                continue
            if max_strands is not None and rec.strands > max_strands:
                continue
            out.append(rec)
    return out


def record_for_graph(S: PartialBraidGraph, label: str, field: str = "q", D: int = 10) -> ResultRecord:
    return _check_task((label, 0, "", S, field, D, "degrevlex"))


# -- CLI ------------------------------------------------------------------------------------

class Ctx:
    def __init__(self, field, D, order, jobs, store, cache, fmt):
        self.field = FieldConfig.parse(field)
        self.field_text = field
        self.D = D
        self.order = MonomialOrder.parse(order)
        self.jobs = jobs
        self.store = store
        self.cache = GBCache(cache) if cache else None
        self.fmt = fmt

    def emit(self, doc, text=None):
        if self.fmt == "json":
            click.echo(json.dumps(doc, indent=1, sort_keys=True, default=str))
        else:
            click.echo(text if text is not None else json.dumps(doc, indent=1, default=str))


def _local_overrides(f):
    """Accept --field / --truncation / --format after the subcommand as well."""
    import functools

    @click.option("--field", "l_field", default=None, help="q or fp:<p>")
    @click.option("--truncation", "-D", "l_D", default=None, type=int)
    @click.option("--format", "l_fmt", type=click.Choice(["text", "json"]), default=None)
    @functools.wraps(f)
    def wrapper(c, *args, l_field=None, l_D=None, l_fmt=None, **kw):
        if l_field:
            c.field, c.field_text = FieldConfig.parse(l_field), l_field
        if l_D is not None:
            c.D = l_D
        if l_fmt:
            c.fmt = l_fmt
        return f(c, *args, **kw)
    return wrapper


def _graph_from_args(word, graph, assignment, strands):
    if graph:
        if graph not in GALLERY:
            raise click.BadParameter(f"unknown graph {graph!r}; choose from {sorted(GALLERY)}")
        return GALLERY[graph](), graph
    if not word:
        raise click.UsageError("give a braid word or --graph")
    w = unknot_word() if word.strip() in ("", "unknot") else parse_braid_word(word, strands)
    d = build_decorated_diagram(w)
    if assignment is None:
        I = fully_singular(d)
    else:
        bits = tuple(int(c) for c in assignment)
        I = ResolutionAssignment(bits)
    return resolve(d, I), f"{w}@{''.join(map(str, I.values))}"


def _exit(status: str):
    sys.exit({"holds": EXIT_HOLDS, "fails": EXIT_FAILS}.get(status, EXIT_UNSTABLE))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--field", default="q", show_default=True, help="q or fp:<p>")
@click.option("--truncation", "-D", "D", default=10, show_default=True, type=int)
@click.option("--order", default="degrevlex", show_default=True)
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--store", default=None, help="JSONL result store")
@click.option("--cache", default=None, help="Groebner basis cache directory")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def cli(ctx, field, D, order, jobs, store, cache, fmt, verbose):
    """Cube-of-resolutions ideals, Tor groups and HOMFLY gradings."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if cache:
        os.makedirs(cache, exist_ok=True)
    ctx.obj = Ctx(field, D, order, jobs, store, cache, fmt)


@cli.command()
@click.argument("word")
@click.option("--strands", type=int, default=None)
@click.pass_obj
@_local_overrides
def diagram(c: Ctx, word, strands):
    """Decorated braid projection of WORD."""
    w = unknot_word() if word.strip() == "unknot" else parse_braid_word(word, strands)
    d = build_decorated_diagram(w)
    doc = {"word": str(w), "strands": w.strand_count, "edges": d.nedges, "distinguished_split": list(d.distinguished_split),
           "closure_strands": list(d.strands),
           "crossings": [{"index": x.index, "sign": x.sign, "position": x.position, "out": list(x.out),
                          "in": list(x.inn)} for x in d.crossings], "N+": d.n_plus, "N-": d.n_minus}
    lines = [f"braid {w} on {w.strand_count} strands, {d.nedges} edges, split {d.distinguished_split}"]
    for x in d.crossings:
        lines.append(f"  c{x.index} sign {x.sign:+d} pos {x.position}: in {x.inn} -> out {x.out}")
    c.emit(doc, "\n".join(lines))


@cli.command()
@click.argument("word", required=False)
@click.option("--graph", default=None)
@click.option("--assignment", default=None, help="0/1 string, default fully singular")
@click.option("--strands", type=int, default=None)
@click.option("--cap", type=int, default=None, help="max subset size for N")
@click.pass_obj
@_local_overrides
def ideals(c: Ctx, word, graph, assignment, strands, cap):
    """Generators of L, Q and N for a resolution or a gallery graph."""
    S, label = _graph_from_args(word, graph, assignment, strands)
    F = c.field
    doc = {"graph": label, "L": linear_ideal(S, F).to_doc(), "Q": quadratic_ideal(S, F).to_doc(),
           "N": nonlocal_ideal(S, cap, F).to_doc()}
    text = [f"graph {label}"]
    for key, I in (("L", linear_ideal(S, F)), ("Q", quadratic_ideal(S, F)), ("N", nonlocal_ideal(S, cap, F))):
        text.append(f"{key}: " + ", ".join(str(g) for g in I.generators))
    c.emit(doc, "\n".join(text))


@cli.command()
@click.argument("word", required=False)
@click.option("--graph", default=None)
@click.option("--assignment", default=None)
@click.option("--strands", type=int, default=None)
@click.option("--max-strands", type=int, default=None, help="sweep all words up to these bounds")
@click.option("--max-crossings", type=int, default=4, show_default=True)
@click.option("--max-subset", type=int, default=4, show_default=True)
@click.pass_obj
@_local_overrides
def theorem2(c: Ctx, word, graph, assignment, strands, max_strands, max_crossings, max_subset):
    """L+Q = L+N by Groebner bases and by explicit certificates."""
    from .sym_identity import check_theorem2
    targets = []
    if max_strands:
        spec = SweepSpec(max_strands, max_crossings, "all-resolutions", c.field_text, c.D)
        targets = [(f"{wd}@{I}", S) for wd, _, I, S in enumerate_graphs(spec)]
    else:
        S, label = _graph_from_args(word, graph, assignment, strands)
        targets = [(label, S)]
    reports = []
    bad = 0
    for label, S in targets:
        r = check_theorem2(S, max_subset, c.field, c.cache)
        bad += not r.holds
        reports.append({"graph": label, **r.to_doc()})
    doc = {"graphs": len(reports), "failures": bad, "reports": reports}
    c.emit(doc, f"theorem2: {len(reports)} graphs, {sum(r['certificates'] for r in reports)} certificates, "
                f"{bad} failures")
    _exit("holds" if not bad else "fails")


@cli.command()
@click.option("--max-mn", type=int, default=5, show_default=True)
@click.option("--graph", default="figure5")
@click.pass_obj
@_local_overrides
def identity(c: Ctx, max_mn, graph):
    """Displayed decomposition, the two symmetric-function lemmas, and a certificate for a graph."""
    from .gallery import displayed_identity_check
    from .sym_identity import cube_identity_certificate, verify_lemma_identities
    disp = displayed_identity_check()
    lemmas = {f"{m},{n}": verify_lemma_identities(m, n) for m in range(max_mn + 1) for n in range(max_mn + 1)}
    cert = cube_identity_certificate(GALLERY[graph]())
    ok = disp["verifies"] and all(lemmas.values()) and cert.verified
    doc = {"display": disp, "lemmas_all_hold": all(lemmas.values()), "certificate": cert.to_doc(), "holds": ok}
    c.emit(doc, f"display verifies: {disp['verifies']} ({disp['note']})\nlemmas m,n<={max_mn}: "
                f"{all(lemmas.values())}\ncertificate for {graph}: {cert.verified}")
    _exit("holds" if ok else "fails")


@cli.command()
@click.argument("word", required=False)
@click.option("--graph", default=None)
@click.option("--assignment", default=None)
@click.option("--strands", type=int, default=None)
@click.option("--side", type=click.Choice(["N", "Q", "both"]), default="both")
@click.option("--reduced", is_flag=True)
@click.pass_obj
@_local_overrides
def tor(c: Ctx, word, graph, assignment, strands, side, reduced):
    """Tor_i(R/L, R/J) Hilbert series for J = N and/or Q."""
    S, label = _graph_from_args(word, graph, assignment, strands)
    sides = ["N", "Q"] if side == "both" else [side]
    docs, text = {}, [f"graph {label}: k={S.k}, variables={S.nedges}"]
    for J in sides:
        T = tor_dims(S, J, c.D, c.field, c.order, c.cache, reduced)
        docs[J] = T.to_doc()
        for i, s in enumerate(T.series):
            tag = "" if s.stable else " (unstable)"
            text.append(f"  {'n' if J == 'N' else 'q'}_{i} = {s.pretty()}{tag}")
    c.emit({"graph": label, "tables": docs}, "\n".join(text))


@cli.command()
@click.argument("word", required=False)
@click.option("--graph", default=None)
@click.option("--assignment", default=None)
@click.option("--strands", type=int, default=None)
@click.option("--max-strands", type=int, default=None, help="run a sweep instead of a single graph")
@click.option("--max-crossings", type=int, default=5, show_default=True)
@click.option("--policy", type=click.Choice(POLICIES), default="fully-singularized")
@click.option("--all-graphs", is_flag=True, help="do not filter to connected graphs")
@click.option("--include", multiple=True, help="gallery graphs to add to a sweep")
@click.pass_obj
@_local_overrides
def conjecture(c: Ctx, word, graph, assignment, strands, max_strands, max_crossings, policy, all_graphs, include):
    """Check q_i = T^i n_i on one graph or sweep a braid family."""
    if max_strands is not None or include:
        spec = SweepSpec(max_strands or 0, max_crossings, policy, c.field_text, c.D, not all_graphs,
                         gallery=tuple(include))
        summary = run_sweep(spec, c.store, c.jobs)
        recs = summary.pop("records")
        summary["failing"] = [{"word": r.braid_word, "I": r.assignment, "at": r.first_failure}
                              for r in recs if r.verdict == "fails"]
        c.emit(summary, json.dumps(summary, indent=1))
        if summary["fails"]:
            _exit("fails")
        _exit("holds" if summary["unstable"] == summary["skipped"] == 0 else "unstable")
    S, label = _graph_from_args(word, graph, assignment, strands)
    rec = record_for_graph(S, label, c.field_text, c.D)
    if c.store:
        store_append(c.store, rec)
    text = [f"graph {label}: {rec.verdict}" + (f" first failure (i, d, q, n) = {rec.first_failure}"
                                               if rec.first_failure else "")]
    for name, ser in (("n", rec.n_series), ("q", rec.q_series)):
        for i, s in enumerate(ser):
            text.append(f"  {name}_{i}: num={s['num']} / (1-T)^{s['denom_power']} stable={s['stable']}")
    c.emit(json.loads(rec.to_json()), "\n".join(text))
    _exit(rec.verdict)


@cli.command()
@click.argument("word")
@click.option("--strands", type=int, default=None)
@click.option("--side", type=click.Choice(["N", "Q"]), default="Q")
@click.option("--middle", is_flag=True, help="unreduced complex")
@click.option("--frame", type=click.Choice(["resolved", "wedge2"]), default="resolved")
@click.option("--table", is_flag=True, help="print the graded rank table")
@click.pass_obj
@_local_overrides
def euler(c: Ctx, word, strands, side, middle, frame, table):
    """Euler characteristic of the assembled E_1 page against the skein/Alexander oracle."""
    from .grading_homfly import WEDGE2_FRAME, RESOLVED_FRAME, assemble_E1, check_euler
    w = unknot_word() if word.strip() in ("unknot", "0") else parse_braid_word(word, strands)
    fr = RESOLVED_FRAME if frame == "resolved" else WEDGE2_FRAME
    v = check_euler(w, side, not middle, c.D, fr, c.field, c.cache)
    doc = v.to_doc()
    doc.update({"knot": str(w), "frame": fr.label(), "unit_offset": v.unit})
    if table:
        t = assemble_E1(build_decorated_diagram(w), side, not middle, c.D, fr, c.field, c.cache)
        doc["table"] = t.to_doc()
    c.emit(doc, f"{w} side {side} {'middle' if middle else 'reduced'}: matches={v.matches} unit={v.unit} "
                f"window={v.window}\n  chi    = {v.computed.windowed()}\n"
                f"  oracle = {v.expected.windowed(v.window, v.computed.window_side)}")
    _exit("holds" if v.matches else "fails")


@cli.command()
@click.option("--hash", "graph_hash", default=None)
@click.option("--verdict", default=None)
@click.option("--word", default=None)
@click.pass_obj
@_local_overrides
def query(c: Ctx, graph_hash, verdict, word):
    """Query the result store."""
    if not c.store:
        raise click.UsageError("--store is required")
    recs = store_query(c.store, graph_hash, verdict, word=word)
    c.emit([json.loads(r.to_json()) for r in recs],
           "\n".join(f"{r.graph_hash} {r.braid_word!r} I={r.assignment} k={r.k} {r.verdict}" for r in recs)
           or "no records")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    except click.ClickException as e:
        e.show()
        return max(EXIT_ERROR, e.exit_code + 2)
    except (BraidError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_ERROR
    return EXIT_HOLDS


if __name__ == "__main__":
    sys.exit(main())
