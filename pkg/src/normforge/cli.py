"""Command-line surface: norm evaluation, catalog dumps, frame building,
renormings, tree and interpolation norms, and the verification suites.

All values are read and written as exact "p/q" strings; enclosures are
emitted as {"lo", "hi"} pairs.  ``verify`` returns exit code 0 only when
every requested suite has zero failed and zero undecided checks, and dumps
a replayable JSON artifact for each suite that does not pass.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from . import renorming as rn
from .catalog import enumerated_ball, rational_norm
from .embedding import EmbeddingFrame, build_frame
from .interpolation import InterpolationSpec, interpolation_norm, verify_interpproj
from .rational import CertInterval, ExactSqrt, parse_rat, rat_str
from .spaces import BasisSpace
from .suites import SUITE_ALIASES, SUITE_NAMES, SuiteConfig, run_suite
from .treespace import FiniteTree, b_norm, chain, e_norm, renorm_constants


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _parse_vec(obj):
    if isinstance(obj, dict) and "vec" in obj:
        obj = obj["vec"]
    return [parse_rat(c) for c in obj]


def _value_json(v):
    if isinstance(v, CertInterval):
        return v.to_json()
    if isinstance(v, ExactSqrt):
        r = v.exact_rat()
        if r is not None:
            return rat_str(r)
        return {"sqrt_of": rat_str(v.square)}
    return rat_str(mpq(v))


def _fmt(out) -> str:
    return out if isinstance(out, str) else json.dumps(out, sort_keys=True)


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_norm_eval(args) -> int:
    space = BasisSpace.from_json(_load_json(args.space))
    vec = _parse_vec(_load_json(args.vec))
    val = space.eval_norm(vec)
    out = _value_json(val)
    _emit(args, {"value": out}, "norm = %s" % _fmt(out))
    return 0


def cmd_catalog_list(args) -> int:
    for l in range(1, args.count + 1):
        ball = enumerated_ball(args.dim, l)
        rec = {"dim": args.dim, "index": l, "ball": ball.to_json()}
        print(json.dumps(rec, sort_keys=True))
    return 0


def cmd_embed(args) -> int:
    space = BasisSpace.from_json(_load_json(args.space))
    frame = build_frame(space, args.depth)
    payload = frame.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
        _emit(args, payload, "frame written to %s (l-values: %s)"
              % (args.out, ", ".join(payload["l_values"])))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def cmd_renorm_eval(args) -> int:
    frame = rn.RenormFrame(EmbeddingFrame.from_json(_load_json(args.frame)))
    vec = _parse_vec(_load_json(args.vec))
    if args.which == "I":
        val = rn.norm_I(frame, vec)
    else:
        val = rn.norm_II(frame, vec, parse_rat(args.eps))
    out = _value_json(val)
    _emit(args, {"which": args.which, "value": out},
          "||.||_%s = %s" % (args.which, _fmt(out)))
    return 0


def cmd_tree_eval(args) -> int:
    obj = _load_json(args.tree)
    tree = FiniteTree.from_json(obj)
    coords = _parse_vec(_load_json(args.vec))
    x = tree.vec_from_coords(coords)
    if args.which == "E":
        val = e_norm(tree, x)
    else:
        consts = [parse_rat(c) for c in obj["constants"]] if "constants" in obj \
            else renorm_constants(max(len(n) for n in tree.nodes))
        val = b_norm(tree, consts, x)
    out = _value_json(val)
    _emit(args, {"which": args.which, "value": out},
          "tree %s-norm = %s" % (args.which, _fmt(out)))
    return 0


def cmd_interp_eval(args) -> int:
    spec = InterpolationSpec.from_json(_load_json(args.spec))
    vec = _parse_vec(_load_json(args.vec))
    iv = interpolation_norm(spec, vec, parse_rat(args.eps))
    _emit(args, {"value": iv.to_json()},
          "interpolated norm in [%s, %s]" % (rat_str(iv.lo), rat_str(iv.hi)))
    return 0


def cmd_interp_verify(args) -> int:
    spec = InterpolationSpec.from_json(_load_json(args.spec))
    if args.proj.startswith("branch:"):
        if not args.tree:
            print("branch projections need --tree to resolve chain positions",
                  file=sys.stderr)
            return 2
        tree = FiniteTree.from_json(_load_json(args.tree))
        leaf = tuple(args.proj[len("branch:"):].split("/"))
        proj = [tree.index[p] for p in chain(leaf)]
    else:
        proj = int(args.proj)
    vecs = [_parse_vec(v) for v in _load_json(args.vectors)] if args.vectors else []
    rep = verify_interpproj(spec, proj, vecs)
    payload = {
        "positions": rep.positions,
        "p_contracts_x": rep.p_contracts_x,
        "p_contracts_w": rep.p_contracts_w,
        "level_contraction_ok": rep.level_contraction_ok,
        "scale_law_applicable": rep.scale_law_applicable,
        "scale_law_ok": rep.scale_law_ok,
        "ratio_sq": rat_str(rep.ratio_sq) if rep.ratio_sq is not None else None,
        "detail": rep.detail,
    }
    ok = rep.p_contracts_x and rep.p_contracts_w and rep.level_contraction_ok is not False \
        and rep.scale_law_ok is not False
    _emit(args, payload, "%s: %s" % ("ok" if ok else "FAIL", rep.detail))
    return 0 if ok else 1


def _config_from_args(args) -> SuiteConfig:
    return SuiteConfig(seed=args.seed, samples=args.samples,
                       max_dim=args.max_dim, eps=parse_rat(args.eps))


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    names = SUITE_NAMES if args.suite == "all" else [SUITE_ALIASES.get(args.suite, args.suite)]
    for n in names:
        if n not in SUITE_NAMES:
            print("unknown suite %r; known: %s, all" % (n, ", ".join(SUITE_NAMES)),
                  file=sys.stderr)
            return 2
    all_ok = True
    for n in names:
        rep = run_suite(n, cfg)
        if args.json:
            print(rep.dumps())
        else:
            c = rep.counts()
            print("%-20s %s  (pass=%d fail=%d undecided=%d)"
                  % (n, "PASS" if rep.passed else "FAIL", c["pass"], c["fail"],
                     c["undecided"]))
            for r in rep.records:
                if r["verdict"] != "pass":
                    print("  %s: %s" % (r["verdict"], r["check"]))
        if not rep.passed:
            all_ok = False
            artifact = {
                "suite": n,
                "config": cfg.to_json(),
                "failed_checks": [r["check"] for r in rep.records
                                  if r["verdict"] != "pass"],
            }
            path = "%s.artifact.json" % n
            with open(path, "w") as fh:
                json.dump(artifact, fh, sort_keys=True, indent=2)
            print("artifact written to %s" % path, file=sys.stderr)
    return 0 if all_ok else 1


def cmd_replay(args) -> int:
    art = _load_json(args.artifact)
    c = art["config"]
    cfg = SuiteConfig(seed=int(c["seed"]), samples=int(c["samples"]),
                      max_dim=int(c["max_dim"]), eps=parse_rat(c["eps"]))
    rep = run_suite(art["suite"], cfg)
    wanted = set(art.get("failed_checks", []))
    records = [r for r in rep.records if not wanted or r["check"] in wanted]
    payload = {"suite": rep.name, "records": records, "summary": rep.counts(),
               "passed": rep.passed}
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for r in records:
            print("%-9s %s" % (r["verdict"], r["check"]))
        print("replay %s: %s" % (rep.name, "PASS" if rep.passed else "FAIL"))
    return 0 if rep.passed else 1


def _add_globals(p, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d if suppress else 42)
    p.add_argument("--samples", type=int, default=d if suppress else 200)
    p.add_argument("--max-dim", type=int, dest="max_dim",
                   default=d if suppress else 4)
    p.add_argument("--eps", default=d if suppress else "1/1000000000")
    p.add_argument("--json", action="store_true", help="emit JSON output",
                   default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="normforge",
                                description="exact norm constructions and "
                                            "their verification suites")
    _add_globals(p, suppress=False)
    # the same flags are accepted after the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="norm evaluation").add_subparsers(
        dest="sub", required=True)
    ne = norm.add_parser("eval", parents=[common])
    ne.add_argument("--space", required=True)
    ne.add_argument("--vec", required=True)
    ne.set_defaults(func=cmd_norm_eval)

    cat = sub.add_parser("catalog", help="canonical catalog").add_subparsers(
        dest="sub", required=True)
    cl = cat.add_parser("list", parents=[common])
    cl.add_argument("--dim", type=int, required=True)
    cl.add_argument("--count", type=int, default=10)
    cl.set_defaults(func=cmd_catalog_list)

    em = sub.add_parser("embed", help="build an embedding frame", parents=[common])
    em.add_argument("--space", required=True)
    em.add_argument("--depth", type=int, required=True)
    em.add_argument("--out")
    em.set_defaults(func=cmd_embed)

    ren = sub.add_parser("renorm", help="renormed frame norms").add_subparsers(
        dest="sub", required=True)
    re_ = ren.add_parser("eval", parents=[common])
    re_.add_argument("--frame", required=True)
    re_.add_argument("--which", choices=("I", "II"), required=True)
    re_.add_argument("--vec", required=True)
    re_.set_defaults(func=cmd_renorm_eval)

    tr = sub.add_parser("tree", help="tree norms").add_subparsers(
        dest="sub", required=True)
    te = tr.add_parser("eval", parents=[common])
    te.add_argument("--tree", required=True)
    te.add_argument("--vec", required=True)
    te.add_argument("--which", choices=("E", "B"), required=True)
    te.set_defaults(func=cmd_tree_eval)

    it = sub.add_parser("interp", help="two-parameter interpolation").add_subparsers(
        dest="sub", required=True)
    ie = it.add_parser("eval", parents=[common])
    ie.add_argument("--spec", required=True)
    ie.add_argument("--vec", required=True)
    ie.set_defaults(func=cmd_interp_eval)
    iv = it.add_parser("verify", parents=[common])
    iv.add_argument("--spec", required=True)
    iv.add_argument("--proj", required=True,
                    help="an integer prefix length or 'branch:<a/b/c>'")
    iv.add_argument("--tree", help="tree JSON used to resolve branch positions")
    iv.add_argument("--vectors", help="JSON list of vectors to test")
    iv.set_defaults(func=cmd_interp_verify)

    ve = sub.add_parser("verify", help="run a verification suite", parents=[common])
    ve.add_argument("suite", help="suite name or 'all'")
    ve.set_defaults(func=cmd_verify)

    rp = sub.add_parser("replay", help="re-run the checks of a failure artifact", parents=[common])
    rp.add_argument("artifact")
    rp.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
