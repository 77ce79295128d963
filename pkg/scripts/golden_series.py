"""Tor series of the hand-built gallery graphs (figure5, figure4, kink, total)."""
import argparse

from cuberes.gallery import GALLERY
from cuberes.koszul_tor import compare_conjecture, tor_dims


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-D", type=int, default=12)
    ap.add_argument("--graphs", nargs="*", default=sorted(GALLERY))
    args = ap.parse_args()
    for name in args.graphs:
        S = GALLERY[name]()
        n, q = tor_dims(S, "N", args.D), tor_dims(S, "Q", args.D)
        v = compare_conjecture(n, q)
        print(f"{name}: {S.nedges} variables, k={S.k}, rank L={n.m}, q_i = T^i n_i for all i: {v.status}"
              + (f" (first failure i={v.first_failure[0]}, d={v.first_failure[1]})" if v.first_failure else ""))
        for i, (a, b) in enumerate(zip(n.series, q.series)):
            print(f"  n_{i} = {a.pretty():40s} q_{i} = {b.pretty()}")


if __name__ == "__main__":
    main()
