"""L+Q = L+N on every connected complete resolution of small braid words, by Groebner
bases and by explicit symmetric-function certificates."""
import argparse
import time

from cuberes.braid_model import ResolutionAssignment, braid_words, build_decorated_diagram, resolve
from cuberes.sym_identity import check_theorem2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-strands", type=int, default=3)
    ap.add_argument("--max-crossings", type=int, default=4)
    ap.add_argument("--max-subset", type=int, default=4)
    args = ap.parse_args()
    t0 = time.perf_counter()
    seen, graphs, certs, bad = set(), 0, 0, []
    for w in braid_words(args.max_strands, args.max_crossings):
        d = build_decorated_diagram(w)
        for I in ResolutionAssignment.all_for(d.n):
            S = resolve(d, I)
            if not S.is_connected() or S.canonical_hash() in seen:
                continue
            seen.add(S.canonical_hash())
            rep = check_theorem2(S, args.max_subset)
            graphs += 1
            certs += rep.certificates
            if not rep.holds:
                bad.append((str(w), str(I), rep.to_doc()))
    print(f"{graphs} graphs, {certs} certificates, {len(bad)} failures, {time.perf_counter() - t0:.1f}s")
    for b in bad:
        print("  ", b)


if __name__ == "__main__":
    main()
