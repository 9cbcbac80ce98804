"""Write the bundled structures, sample subobjects and presentations to corpus/ as JSON."""

import argparse
import json
import re
from pathlib import Path

from higgins.corpus import algebras, groups, loops, small_groups
from higgins.exactlinalg import FieldSpec
from higgins import nhsolver

ALIASES = {"Q8": "q8", "N4(F2)": "ut4_f2", "N5(F2)": "ut5_f2", "h3(F3)": "heis_f3"}


def slug(name: str) -> str:
    return ALIASES.get(name) or re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parents[1] / "corpus"))
    out = Path(ap.parse_args().dir)
    (out / "subs").mkdir(parents=True, exist_ok=True)
    structures = {**small_groups(), **groups(), **loops(), **algebras()}
    for X in structures.values():
        dump(out / f"{slug(X.name)}.json", X.to_json())

    Q8 = groups()["Q8"]
    for lab in ("i", "j", "k", "-1"):
        dump(out / "subs" / f"q8_{lab.replace('-', 'minus')}.json", {"generators": [Q8.element(lab)]})
    N4 = algebras()["N4(F2)"]
    for lab in ("E12", "E13", "E14"):
        v = [1 if l == lab else 0 for l in N4.labels]
        dump(out / "subs" / f"ut4_{lab.lower()}.json", {"generators": [v]})
    S3 = groups()["S3"]
    dump(out / "subs" / "s3_a3.json", {"generators": [S3.element("(123)")]})
    dump(out / "subs" / "s3_transposition.json", {"generators": [S3.element("(12)")]})

    Q = FieldSpec.rational()
    for name, make in (("assoc_q", nhsolver.associative), ("lie_q", nhsolver.lie), ("empty_q", nhsolver.empty),
                       ("commutative_q", nhsolver.commutative)):
        pres = make(Q)
        dump(out / f"{name}.json", dict(pres.to_json(), name=pres.name))
    print(f"wrote {len(list(out.rglob('*.json')))} files to {out}")


if __name__ == "__main__":
    main()
