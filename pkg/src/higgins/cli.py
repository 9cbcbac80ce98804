"""Command-line entry point.  JSON lines go to stdout (or --out), a short summary to stderr.

Exit status: 0 when no report failed, 1 on any fail, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .commutators import HigginsOptions, higgins, huq, lower_central_series, normal_closure_via_commutator
from .exactlinalg import LinalgError
from .structures import StructureError, is_normal, load_subobject, normal_closure, validate, whole
from . import nhsolver, verify

CHECKS = (
    "normality-criterion", "normal-closure", "inequality", "three-subobjects", "n-subobjects",
    "binary-decomposition", "nilpotency-agreement", "sh-nh", "stability", "loop-divergence", "all",
)


class InputError(Exception):
    def __init__(self, source: str, path: str, message: str):
        super().__init__(f"{source}: {path}: {message}")


@dataclass
class RunConfig:
    command: str
    structure: str | None = None
    subs: list[str] = field(default_factory=list)
    bound: int = 8
    depth: int = 4
    max_n: int = 6
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        for name in ("bound", "depth", "max_n"):
            if getattr(self, name) < 1:
                raise InputError("arguments", f"--{name.replace('_', '-')}", "must be positive")

    @property
    def options(self) -> HigginsOptions:
        return HigginsOptions(bound=self.bound, depth=self.depth)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(path, "$", f"cannot read file ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(path, f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}") from exc


def load_structure(path: str):
    """A structure file, or the name of a bundled corpus member when no such file exists."""
    if not Path(path).exists():
        from .corpus import algebras, group_loops, groups, loops, small_groups

        for table in (groups(), small_groups(), loops(), group_loops(), algebras()):
            if path in table:
                return table[path]
    raw = _read_json(path)
    try:
        return validate(raw, raw.get("name", Path(path).stem) if isinstance(raw, dict) else "")
    except (StructureError, LinalgError) as exc:
        w = getattr(exc, "witness", None)
        raise InputError(path, "$" if w is None else f"$ witness {list(w) if isinstance(w, tuple) else w}", str(exc)) from exc


def load_sub(X, path: str):
    if path in ("X", "whole"):
        return whole(X)
    raw = _read_json(path)
    try:
        if not isinstance(raw, dict):
            raise StructureError("subobject description must be a JSON object")
        return load_subobject(X, raw)
    except (StructureError, LinalgError) as exc:
        key = next((k for k in ("basis", "generators", "elements") if isinstance(raw, dict) and k in raw), "$")
        raise InputError(path, f"$.{key}" if key != "$" else key, str(exc)) from exc


class Emitter:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.stream = open(cfg.out, "w", encoding="utf-8") if cfg.out else sys.stdout
        self.counts = dict.fromkeys(verify.STATUSES, 0)
        self.lines = 0

    def emit(self, obj: dict) -> None:
        obj = dict(obj, seed=self.cfg.seed)
        self.stream.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")
        self.lines += 1
        if obj.get("status") in self.counts:
            self.counts[obj["status"]] += 1

    def report(self, rep: verify.VerificationReport) -> None:
        self.emit(rep.to_json())

    def close(self) -> int:
        if self.stream is not sys.stdout:
            self.stream.close()
        summary = ", ".join(f"{k} {v}" for k, v in self.counts.items() if v)
        print(f"{self.cfg.command}: {self.lines} line(s){'; ' + summary if summary else ''}", file=sys.stderr)
        return 1 if self.counts["fail"] else 0


def _result(command: str, X, subs, r) -> dict:
    out = {"command": command, "structure": X.name, "subs": [verify.sub_label(s) for s in subs]}
    out.update(r.to_json())
    out["value"] = verify.sub_label(r.value)
    return out


def _structure_and_subs(cfg: RunConfig, need: int = 0):
    if not cfg.structure:
        raise InputError("arguments", "--structure", "required for this command")
    X = load_structure(cfg.structure)
    subs = [load_sub(X, p) for p in cfg.subs]
    if len(subs) < need:
        raise InputError("arguments", "--sub", f"need at least {need}, got {len(subs)}")
    return X, subs


def run_verify(cfg: RunConfig, check: str, em: Emitter) -> None:
    opts = cfg.options
    if check == "all":
        for rep in verify.corpus_reports(cfg.seed, options=opts):
            em.report(rep)
        return
    if check == "loop-divergence":
        from .corpus import loops

        catalog = [load_structure(cfg.structure)] if cfg.structure else list(loops().values())
        verify.search_loop_divergence(catalog, cfg.depth, em.report)
        return
    X, subs = _structure_and_subs(cfg)
    if check == "nilpotency-agreement":
        em.report(verify.check_nilpotency_agreement(X, cfg.max_n, opts))
        return
    if check == "stability":
        for rep in verify.stability_suite(X, 100, cfg.seed, opts):
            rep.seed = cfg.seed
            em.report(rep)
        return
    need = {"normality-criterion": 1, "normal-closure": 1, "inequality": 2, "three-subobjects": 3,
            "n-subobjects": 3, "binary-decomposition": 3, "sh-nh": 2}[check]
    if len(subs) < need or (check in ("three-subobjects", "sh-nh", "normality-criterion", "normal-closure") and len(subs) != need):
        raise InputError("arguments", "--sub", f"{check} takes {'exactly' if need in (1,) or check in ('three-subobjects', 'sh-nh') else 'at least'} {need}")
    fn = {
        "normality-criterion": lambda: verify.check_normality_criterion(X, subs[0], opts),
        "normal-closure": lambda: verify.check_normal_closure(X, subs[0], opts),
        "inequality": lambda: verify.check_inequality(X, subs, opts),
        "three-subobjects": lambda: verify.check_three_subobjects(X, *subs, options=opts),
        "n-subobjects": lambda: verify.check_n_subobjects(X, subs, opts),
        "binary-decomposition": lambda: verify.check_binary_decomposition(X, subs, opts),
        "sh-nh": lambda: verify.check_sh_nh(X, *subs, options=opts),
    }[check]
    em.report(fn())


def run_nh(args, em: Emitter) -> None:
    if args.presentation:
        try:
            pres = nhsolver.load_presentation(args.presentation)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(args.presentation, "$", str(exc)) from exc
        except LinalgError as exc:
            raise InputError(args.presentation, "$.identities", str(exc)) from exc
    else:
        field_ = nhsolver.parse_field(args.field)
        pres = {"associative": nhsolver.associative, "lie": nhsolver.lie, "empty": nhsolver.empty,
                "commutative": nhsolver.commutative}[args.builtin](field_)
    w = nhsolver.solve_lambda(pres)
    out = {"command": "nh-solve", "presentation": pres.name, "field": str(pres.field),
           "solution": w is not None, "field_caveat": pres.field_caveat}
    if w is not None:
        out["lambda"] = w.named(pres.field)
        out["residuals_vanish"] = nhsolver.residuals_vanish(pres, w)
    em.emit(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structure", help="structure JSON file (or a bundled corpus name)")
    common.add_argument("--sub", action="append", default=[], help="subobject JSON file; repeat in argument order")
    common.add_argument("--bound", type=int, default=8, help="syllable bound for kernel words")
    common.add_argument("--depth", type=int, default=4, help="leaves per side of catalog loop terms")
    common.add_argument("--max-n", type=int, default=6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write JSON lines here instead of stdout")

    p = argparse.ArgumentParser(prog="higgins", description="Higgins commutators in groups, loops and algebras")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("commutator", parents=[common], help="n-ary Higgins commutator")
    sub.add_parser("huq", parents=[common], help="Huq commutator of two subobjects")
    sub.add_parser("closure", parents=[common], help="normal closure, directly and as K v [K,X]")
    lcs = sub.add_parser("lcs", parents=[common], help="lower central series")
    lcs.add_argument("--mode", choices=("nested", "unbiased", "both"), default="both")
    v = sub.add_parser("verify", parents=[common], help="run a theorem check")
    v.add_argument("check", choices=CHECKS)
    nh = sub.add_parser("nh-solve", parents=[common], help="solve for the lambda coefficients")
    nh.add_argument("--presentation", help="presentation JSON file")
    nh.add_argument("--builtin", choices=("associative", "lie", "empty", "commutative"), default="associative")
    nh.add_argument("--field", default="Q", help='field for --builtin: "Q" or "F<p>"')
    loops = sub.add_parser("loops", parents=[common], help="loop experiments")
    loops.add_argument("action", choices=("search",))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = RunConfig(args.command, args.structure, args.sub, args.bound, args.depth, args.max_n, args.seed, args.out)
        em = Emitter(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        dispatch(args, cfg, em)
    except InputError as exc:
        em.close()
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StructureError, LinalgError) as exc:
        em.close()
        print(f"error: {cfg.structure or 'input'}: $: {exc}", file=sys.stderr)
        return 2
    return em.close()


def dispatch(args, cfg: RunConfig, em: Emitter) -> None:
    opts = cfg.options
    if cfg.command == "commutator":
        X, subs = _structure_and_subs(cfg, 2)
        em.emit(_result("commutator", X, subs, higgins(X, subs, opts)))
    elif cfg.command == "huq":
        X, subs = _structure_and_subs(cfg, 2)
        if len(subs) != 2:
            raise InputError("arguments", "--sub", "huq takes exactly 2")
        em.emit(_result("huq", X, subs, huq(X, subs[0], subs[1], opts)))
    elif cfg.command == "closure":
        X, subs = _structure_and_subs(cfg, 1)
        for K in subs:
            via = normal_closure_via_commutator(X, K, opts)
            out = _result("closure", X, [K], via)
            direct = normal_closure(X, K)
            out["direct"] = verify.sub_label(direct)
            out["agree"] = direct == via.value
            out["is_normal"] = is_normal(X, K)
            em.emit(out)
    elif cfg.command == "lcs":
        X, _ = _structure_and_subs(cfg)
        modes = {"nested": ["nested_binary"], "unbiased": ["unbiased_higgins"],
                 "both": ["nested_binary", "unbiased_higgins"]}[args.mode]
        for mode in modes:
            chain = lower_central_series(X, mode, cfg.max_n, opts)
            em.emit({"command": "lcs", "structure": X.name, "mode": mode,
                     "sizes": [r.value.size for r in chain], "certainty": [r.certainty for r in chain],
                     "terms": [verify.sub_label(r.value) for r in chain]})
    elif cfg.command == "verify":
        run_verify(cfg, args.check, em)
    elif cfg.command == "nh-solve":
        run_nh(args, em)
    elif cfg.command == "loops":
        run_verify(cfg, "loop-divergence", em)


if __name__ == "__main__":
    sys.exit(main())
