"""Euler characteristic of the assembled cube against the HOMFLY and Alexander oracles,
for both grading frames (wedge generators in q-degree 0 vs 2)."""
import argparse

from cuberes.braid_model import parse_braid_word, unknot_word
from cuberes.grading_homfly import WEDGE2_FRAME, RESOLVED_FRAME, check_euler

KNOTS = {"unknot": "", "kink": "1", "trefoil": "1 1 1", "mirror trefoil": "-1 -1 -1",
         "figure-eight": "1 -2 1 -2", "5_1": "1 1 1 1 1"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-D", type=int, default=10)
    ap.add_argument("--knots", nargs="*", default=list(KNOTS))
    ap.add_argument("--wedge2", action="store_true", help="also try wedge q-degree 2")
    args = ap.parse_args()
    frames = [("resolved", RESOLVED_FRAME)] + ([("wedge-q2", WEDGE2_FRAME)] if args.wedge2 else [])
    for name in args.knots:
        w = parse_braid_word(KNOTS[name]) if KNOTS[name] else unknot_word()
        for fname, fr in frames:
            for side in ("Q", "N"):
                for reduced in (True, False):
                    v = check_euler(w, side, reduced, args.D, fr)
                    kind = "reduced" if reduced else "middle"
                    print(f"{name:15s} {fname:9s} {side} {kind:8s} match={v.matches!s:5s} unit={v.unit} "
                          f"chi={v.computed.windowed()}")


if __name__ == "__main__":
    main()
