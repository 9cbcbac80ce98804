"""Search bundled nonassociative loops for a certificate that [X,X,X] is not below [[X,X],X].

Usage: python scripts/loop_divergence.py [--depth 4] [--extra-loops]

--extra-loops adds the Chein doubles M(G,2) of every group of order <= 8 (orders <= 16).
"""

import argparse
import sys
import time

from higgins.corpus import chein_double, loops, small_groups
from higgins.verify import search_loop_divergence


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--extra-loops", action="store_true")
    args = ap.parse_args()
    catalog = list(loops().values())
    if args.extra_loops:
        seen = {X.name for X in catalog}
        for name, G in small_groups().items():
            if G.order > 1 and f"M({name},2)" not in seen:
                catalog.append(chein_double(G, f"M({name},2)"))
    t0 = time.time()
    reps = search_loop_divergence(catalog, args.depth, lambda r: print(r.line(), flush=True))
    found = [r.instance["structure"] for r in reps if r.status == "pass"]
    print(f"{len(reps)} loops searched in {time.time() - t0:.1f}s; certificates: {found or 'none'}", file=sys.stderr)


if __name__ == "__main__":
    main()
