"""Command-line front door.

Exit codes are the machine contract: 0 pass, 1 fail (or inconsistent
certificate), 2 budget refusal, 64 usage error.  Stdout is human-oriented;
certificates written via --out are the reproducible artifact.

Default caps come from SearchBudget and can be overridden per run with
--max-colorings/--max-hom-size or the environment variables
RAMCAT_MAX_COLORINGS and RAMCAT_MAX_HOM_SIZE.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Callable

from .categories.hjcat import WordBoundary, WordCategory, standard_window
from .categories.pcat import ORIENTATIONS, StepBoundary, StepCategory
from .categories.product import product_functor
from .categories.rcat import subset_boundary, subset_category
from .categories.trees import tree_category, tree_truncation
from .core import Category, Functor, Morph, compose_word
from .engine import (DEFAULT_SAMPLES, DEFAULT_SEED, BudgetExceeded, FpInstance,
                     SearchBudget, check_degree_bound, check_fp_witness,
                     check_p_witness, functor_image, ramsey_degree)
from .certificates import (CertificateError, StaleCertificateError,
                           dump_certificate, fp_certificate, load_certificate,
                           morph_unhex, p_certificate, replay_verify)
from .constructions import (ConstructionError, fouche_witness,
                            fp_to_p_construct, hj_stage_provider, hj_witness,
                            p_pigeonhole_witness, r_fp_oracle, r_fp_witness)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64


class CliError(Exception):
    """Bad flags or selectors; reported with usage text and exit 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); we want 64
        raise CliError(message)


# ---------------------------------------------------------------------------
# selectors


def category_handle(selector: str) -> tuple[Category, dict[str, Functor],
                                            Callable[[str], Any]]:
    """Resolve --category into (category, functor tokens, object parser)."""
    name, _, arg = selector.partition(":")
    if name == "R":
        cat = subset_category()
        return cat, {"dR": subset_boundary(cat)}, _parse_int
    if name == "P":
        orientation = arg or "definition"
        if orientation not in ORIENTATIONS:
            raise CliError(f"unknown step orientation {orientation!r}")
        cat = StepCategory(orientation)
        return cat, {"dP": StepBoundary(cat)}, _parse_step
    if name == "HJ":
        k0 = int(arg) if arg else 1
        cat = WordCategory(k0)
        return cat, {"dHJ": WordBoundary(cat)}, _parse_word_obj
    if name == "trees":
        cat = tree_category()
        return cat, {"dT": tree_truncation(cat)}, _parse_tree
    raise CliError(f"unknown category {selector!r}; pick R, P[:mirror], "
                   f"HJ[:k0] or trees")


def _parse_int(text: str) -> int:
    return int(text)


def _parse_step(text: str) -> tuple[int, int]:
    k, _, tag = text.partition(":")
    if not tag:
        raise CliError(f"step objects read k:tag, got {text!r}")
    return (int(k), int(tag))


def _parse_word_obj(text: str) -> tuple:
    kind, _, rest = text.partition(":")
    if kind == "l":
        return ("L", int(rest))
    if kind == "v":
        return ("V", tuple(int(x) for x in rest.split(",")))
    raise CliError(f"word objects read l:<dim> or v:<letters>, got {text!r}")


def _parse_tree(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def functor_from_word(tokens: dict[str, Functor], text: str) -> Functor:
    word = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in tokens:
            raise CliError(f"unknown functor token {tok!r}; "
                           f"available: {sorted(tokens)}")
        word.append(tokens[tok])
    return compose_word(word)


def budget_from(args) -> SearchBudget:
    colorings = args.max_colorings
    if colorings is None:
        colorings = int(os.environ.get("RAMCAT_MAX_COLORINGS",
                                       SearchBudget.max_colorings))
    hom = args.max_hom_size
    if hom is None:
        hom = int(os.environ.get("RAMCAT_MAX_HOM_SIZE",
                                 SearchBudget.max_hom_size))
    return SearchBudget(max_colorings=colorings, max_hom_size=hom)


def _engine_kw(args) -> dict:
    return {"mode": args.mode, "budget": budget_from(args), "seed": args.seed,
            "samples": args.samples, "jobs": args.jobs}


def _report(res) -> str:
    mode = "exhaustive" if res.exhaustive else f"sampled(seed={res.seed})"
    verdict = "pass" if res.ok else "FAIL"
    line = (f"{verdict} [{mode}] cells={res.cells} arrows={res.arrows} "
            f"colorings_checked={res.checked}")
    if res.counterexample is not None:
        cex = res.counterexample
        shown = list(cex.cells) if cex.cells is not None else "(too large)"
        line += f"\ncounterexample: index={cex.index} colors={shown}"
    return line


def _emit(doc: dict, args) -> None:
    if args.out:
        dump_certificate(doc, args.out)
        print(f"certificate written to {args.out}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    cat, tokens, parse = category_handle(args.category)
    fun = functor_from_word(tokens, args.functor)
    a, b, c = parse(args.a), parse(args.b), parse(args.c)
    kw = _engine_kw(args)
    if args.kind == "p":
        res = check_p_witness(fun, a, b, c, args.r, **kw)
        doc = p_certificate(fun, a, b, c, args.r, res, mode=args.mode,
                            budget=kw["budget"], seed=args.seed,
                            samples=args.samples)
    else:
        s = (tuple(morph_unhex(x) for x in args.s.split(","))
             if args.s else functor_image(fun, a, b))
        inst = FpInstance(a=a, b=b, s=s, r=args.r)
        if args.f_prime and args.g_prime:
            f_prime = morph_unhex(args.f_prime)
            g_prime = morph_unhex(args.g_prime)
        elif args.category.partition(":")[0] == "R" and args.functor == "dR":
            # canonical subset picks, with g' retargeted at the user's c
            _, f_prime, _ = r_fp_witness(inst)
            if fun.dom.hom_size(a, b) <= 1:
                g_prime = fun.morph(fun.dom.identity(b))
            else:
                g_prime = Morph(b - 1, c - 1, tuple(range(1, b)))
        else:
            raise CliError("verify fp needs --f-prime and --g-prime hexes "
                           "outside plain dR over R")
        res = check_fp_witness(fun, inst, c, f_prime, g_prime, **kw)
        doc = fp_certificate(fun, inst, c, f_prime, g_prime, res,
                             mode=args.mode, budget=kw["budget"],
                             seed=args.seed, samples=args.samples)
    print(_report(res))
    _emit(doc, args)
    return EXIT_PASS if res.ok else EXIT_FAIL


def _theorem_fp2p(args, kw) -> tuple[dict, Any]:
    delta = subset_boundary()
    c, trace = fp_to_p_construct(delta, args.k, args.l, args.r,
                                 r_fp_oracle(delta), selection="max-rule")
    res = check_p_witness(delta, args.k, args.l, c, args.r, **kw)
    doc = p_certificate(delta, args.k, args.l, c, args.r, res, theorem="fp2p",
                        trace=trace.doc(), mode=args.mode, budget=kw["budget"],
                        seed=args.seed, samples=args.samples)
    return doc, (c, res)


def _theorem_r_fp(args, kw) -> tuple[dict, Any]:
    delta = subset_boundary()
    s = functor_image(delta, args.k, args.l)
    inst = FpInstance(a=args.k, b=args.l, s=s, r=args.r)
    c, f_prime, g_prime = r_fp_witness(inst, delta)
    res = check_fp_witness(delta, inst, c, f_prime, g_prime, **kw)
    doc = fp_certificate(delta, inst, c, f_prime, g_prime, res, theorem="r-fp",
                         mode=args.mode, budget=kw["budget"], seed=args.seed,
                         samples=args.samples)
    return doc, (c, res)


def _theorem_pigeonhole(args, kw) -> tuple[dict, Any]:
    c = p_pigeonhole_witness(args.k1, args.l, args.r)
    delta = StepBoundary(StepCategory(args.orientation))
    a, b = (args.k1, 1), (args.l, 2)
    res = check_p_witness(delta, a, b, c, args.r, **kw)
    doc = p_certificate(delta, a, b, c, args.r, res, theorem="p-pigeonhole",
                        mode=args.mode, budget=kw["budget"], seed=args.seed,
                        samples=args.samples)
    return doc, (c, res)


def _theorem_compose(args, kw) -> tuple[dict, Any]:
    from .constructions import word_witness
    delta = subset_boundary()
    word = [delta] * args.length

    def provider(index, fun, a, b, r):
        c, trace = fp_to_p_construct(fun, a, b, r, r_fp_oracle(fun),
                                     selection="max-rule")
        return c, trace.doc()

    c, trace = word_witness(word, args.k, args.l, args.r, provider)
    composite = compose_word(word)
    res = check_p_witness(composite, args.k, args.l, c, args.r, **kw)
    doc = p_certificate(composite, args.k, args.l, c, args.r, res,
                        theorem="compose", trace=trace.doc(), mode=args.mode,
                        budget=kw["budget"], seed=args.seed,
                        samples=args.samples)
    return doc, (c, res)


def _theorem_product(args, kw) -> tuple[dict, Any]:
    from .constructions import product_ramsey_numbers
    pairs = [pair.split(":") for pair in args.coords.split(",")]
    try:
        kvec = tuple(int(p[0]) for p in pairs)
        pvec = tuple(int(p[1]) for p in pairs)
    except (IndexError, ValueError) as exc:
        raise CliError(f"--coords reads k:p pairs, got {args.coords!r}") from exc
    qvec, trace = product_ramsey_numbers(kvec, pvec, args.r)
    deltas = [subset_boundary() for _ in kvec]
    fun = product_functor(*deltas)
    pcat = fun.dom
    a, b, c = pcat.pack(kvec), pcat.pack(pvec), pcat.pack(qvec)
    res = check_p_witness(fun, a, b, c, args.r, **kw)
    doc = p_certificate(fun, a, b, c, args.r, res, theorem="product",
                        trace=trace.doc(), mode=args.mode, budget=kw["budget"],
                        seed=args.seed, samples=args.samples)
    return doc, (qvec, res)


def _theorem_modeling(args, kw) -> tuple[dict, Any]:
    k0 = args.k
    fun = WordBoundary(WordCategory(k0))
    v0 = standard_window(k0)
    b = ("L", args.l)
    provider = hj_stage_provider(args.max_color_bits, args.max_pairs)
    c, note = provider(0, fun, v0, b, args.r)
    res = check_p_witness(fun, v0, b, c, args.r, **kw)
    doc = p_certificate(fun, v0, b, c, args.r, res, theorem="modeling",
                        trace=note, mode=args.mode, budget=kw["budget"],
                        seed=args.seed, samples=args.samples)
    return doc, (c, res)


def _theorem_hj(args, kw) -> tuple[dict, Any]:
    m, trace = hj_witness(args.k, args.l, args.r,
                          max_color_bits=args.max_color_bits,
                          max_pairs=args.max_pairs)
    fun = compose_word([WordBoundary(WordCategory(args.k))] * args.k)
    v0 = standard_window(args.k)
    a, b, c = v0, ("L", args.l), ("L", m)
    res = check_p_witness(fun, a, b, c, args.r, **kw)
    doc = p_certificate(fun, a, b, c, args.r, res, theorem="hj",
                        trace=trace.doc(), mode=args.mode, budget=kw["budget"],
                        seed=args.seed, samples=args.samples)
    return doc, (m, res)


def _theorem_fouche(args, kw) -> tuple[dict, Any]:
    s_tree, t_tree = _parse_tree(args.s_tree), _parse_tree(args.t_tree)
    v, trace = fouche_witness(s_tree, t_tree, args.r)
    from .categories.trees import height
    h = height(s_tree)
    if trace is None:
        from .core import IdentityFunctor
        fun = IdentityFunctor(tree_category())
        trace_doc = None
    else:
        fun = compose_word([tree_truncation()] * h)
        trace_doc = trace.doc()
    res = check_p_witness(fun, s_tree, t_tree, v, args.r, **kw)
    doc = p_certificate(fun, s_tree, t_tree, v, args.r, res, theorem="fouche",
                        trace=trace_doc, mode=args.mode, budget=kw["budget"],
                        seed=args.seed, samples=args.samples)
    return doc, (v, res)


_THEOREMS = {"fp2p": _theorem_fp2p, "r-fp": _theorem_r_fp,
             "p-pigeonhole": _theorem_pigeonhole, "compose": _theorem_compose,
             "product": _theorem_product, "modeling": _theorem_modeling,
             "hj": _theorem_hj, "fouche": _theorem_fouche}


def cmd_construct(args) -> int:
    kw = _engine_kw(args)
    doc, (value, res) = _THEOREMS[args.theorem](args, kw)
    print(f"constructed witness: {value!r}")
    print(_report(res))
    _emit(doc, args)
    return EXIT_PASS if res.ok else EXIT_FAIL


def _parse_pool(text: str) -> tuple[int, ...]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise CliError(f"--pool reads lo..hi, got {text!r}")
    return tuple(range(int(lo), int(hi) + 1))


def cmd_degree(args) -> int:
    cat, tokens, parse = category_handle(args.category)
    a, b = parse(args.a), parse(args.b)
    pool = _parse_pool(args.pool) if args.pool else None
    kw = _engine_kw(args)
    if args.bound:
        deltas = tuple(tokens[t.strip()] for t in (args.delta or "dR").split(","))
        rep = check_degree_bound(deltas, a, b, args.r, pool,
                                 word_cap=args.word_cap, **kw)
        print(f"image-size bound {rep.bound} via word {rep.word} "
              f"(trivial bound {rep.trivial})")
        if rep.degree is not None:
            print(f"brute-force degree {rep.degree.degree} "
                  f"witness {rep.degree.witness!r}")
        return EXIT_PASS
    if pool is None:
        raise CliError("degree search needs --pool lo..hi")
    deg = ramsey_degree(cat, a, b, args.r, pool, **kw)
    if deg.degree is None:
        print("no pool object forces any color cap")
        return EXIT_FAIL
    print(f"degree {deg.degree} witness {deg.witness!r} "
          f"(pool attempts: {len(deg.trail)})")
    return EXIT_PASS


def cmd_replay(args) -> int:
    doc = load_certificate(args.cert)
    overrides = {}
    if args.mode != "auto":
        overrides["mode"] = args.mode
    if args.max_colorings is not None or args.max_hom_size is not None:
        overrides["budget"] = budget_from(args)
    if args.samples != DEFAULT_SAMPLES:
        overrides["samples"] = args.samples
    if args.seed != DEFAULT_SEED:
        overrides["seed"] = args.seed
    rep = replay_verify(doc, jobs=args.jobs, **overrides)
    note = " (upgraded to exhaustive)" if rep.upgraded else ""
    print(f"stored verdict {rep.expected}, replay verdict {rep.verdict}{note}")
    print(_report(rep.result))
    if not rep.match:
        print("MISMATCH: certificate verdict not reproduced")
        return EXIT_FAIL
    return EXIT_PASS if rep.verdict == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# wiring


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("auto", "exhaustive", "sampled"),
                   default="auto")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"sampling seed (default {DEFAULT_SEED})")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes; results are independent of N")
    p.add_argument("--max-colorings", type=int, default=None)
    p.add_argument("--max-hom-size", type=int, default=None)
    p.add_argument("--out", default=None, help="write the certificate here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ramcat",
                     description="verify and construct partition witnesses")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    pv = sub.add_parser("verify", help="check a claimed witness")
    pv.add_argument("kind", choices=("p", "fp"))
    pv.add_argument("--category", required=True)
    pv.add_argument("--functor", default=None,
                    help="comma-separated word, e.g. dR or dR,dR")
    pv.add_argument("--a", required=True)
    pv.add_argument("--b", required=True)
    pv.add_argument("--c", required=True)
    pv.add_argument("--r", type=int, required=True)
    pv.add_argument("--s", default=None,
                    help="fp only: comma-separated morphism hexes "
                         "(default: the whole image of hom(a, b))")
    pv.add_argument("--f-prime", default=None, help="fp only: morphism hex")
    pv.add_argument("--g-prime", default=None, help="fp only: morphism hex")
    _add_engine_flags(pv)
    pv.set_defaults(fn=cmd_verify)

    pc = sub.add_parser("construct", help="build a witness from a theorem")
    pc.add_argument("--theorem", choices=sorted(_THEOREMS), required=True)
    pc.add_argument("--k", type=int, default=1)
    pc.add_argument("--l", type=int, default=1)
    pc.add_argument("--r", type=int, required=True)
    pc.add_argument("--k1", type=int, default=2, help="p-pigeonhole source")
    pc.add_argument("--orientation", choices=ORIENTATIONS,
                    default="definition")
    pc.add_argument("--length", type=int, default=2,
                    help="compose: number of boundary applications")
    pc.add_argument("--coords", default="1:2,1:2",
                    help="product: comma-separated k:p pairs")
    pc.add_argument("--s-tree", default="1,0", help="fouche: child counts")
    pc.add_argument("--t-tree", default="2,0,0", help="fouche: child counts")
    pc.add_argument("--max-color-bits", type=int, default=1_000_000)
    pc.add_argument("--max-pairs", type=int, default=500_000)
    _add_engine_flags(pc)
    pc.set_defaults(fn=cmd_construct)

    pd = sub.add_parser("degree", help="Ramsey degrees and image-size bounds")
    pd.add_argument("--category", default="R")
    pd.add_argument("--a", required=True)
    pd.add_argument("--b", required=True)
    pd.add_argument("--r", type=int, required=True)
    pd.add_argument("--pool", default=None, help="lo..hi candidate range")
    pd.add_argument("--bound", action="store_true",
                    help="compute the image-size upper bound as well")
    pd.add_argument("--delta", default=None,
                    help="bound mode: comma-separated functor tokens")
    pd.add_argument("--word-cap", type=int, default=3)
    _add_engine_flags(pd)
    pd.set_defaults(fn=cmd_degree)

    pr = sub.add_parser("replay", help="re-verify a stored certificate")
    pr.add_argument("cert")
    _add_engine_flags(pr)
    pr.set_defaults(fn=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify" and args.functor is None:
            raise CliError("verify needs --functor")
        return args.fn(args)
    except CliError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except StaleCertificateError as exc:
        print(f"stale certificate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CertificateError as exc:
        print(f"bad certificate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except AssertionError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"cannot read/write: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"invalid inputs: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
