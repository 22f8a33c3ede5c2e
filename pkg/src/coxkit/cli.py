"""coxkit command line.

Generator indices on the command line are 1-based. ``--format records``
switches to tab-separated records; ``--seed`` fixes every random corpus;
COXKIT_BUDGET overrides the formula-evaluation and coset-enumeration budgets.
"""
from __future__ import annotations

import argparse
import itertools
import os
import sys
from pathlib import Path

from . import __version__
from .catalog import catalog_entry
from .diagram import DiagramError, classify, centralizer_rank, parse_diagram, special_spherical_subgroups
from .logic import (BudgetExceeded, FiniteGroupModel, FormulaSyntaxError, emit_chi, emit_finite_g,
                    emit_gamma, evaluate, free_vars, parse_formula, render, tag)
from .permgrp import (PermGroup, Permutation, group_of_presentation, hom_count,
                      subgroup_class_words)
from .presentation import WordSyntaxError, parse_presentation, parse_word
from .profinite import (Equal, compare, fingerprint, format_fingerprint, parse_fingerprint)
from .titsrep import RepresentationError, build_rep, element_order, words_equal
from .todd_coxeter import CosetLimitExceeded
from .verification import SECTIONS, run_section

__all__ = ["main", "build_parser"]


class CliError(Exception):
    pass


def _budget(default: int) -> int:
    raw = os.environ.get("COXKIT_BUDGET")
    return int(raw) if raw else default


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _diagram(path):
    return parse_diagram(_read(path))


def _int_word(text: str, n: int):
    """'1 2 -1' -> 0-based generator indices (inverse letters allowed; every
    Coxeter generator is an involution)."""
    out = []
    for tok in text.replace(",", " ").split():
        try:
            k = int(tok)
        except ValueError:
            raise CliError(f"bad generator index {tok!r}") from None
        if k == 0 or abs(k) > n:
            raise CliError(f"generator index {k} out of range 1..{n}")
        out.append(abs(k) - 1)
    return tuple(out)


def _load_perm_group(path) -> PermGroup:
    """Permutation file: optional 'degree N' line, then one generator per line."""
    degree = None
    gens = []
    for raw in _read(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("degree"):
            degree = int(line.split()[1])
            continue
        gens.append(line)
    perms = [Permutation.parse(g) for g in gens]
    top = max([p.degree for p in perms] + [degree or 1])
    return PermGroup([p.extend(top) for p in perms], top)


def _target_group(spec: str) -> PermGroup:
    if Path(spec).is_file():
        return _load_perm_group(spec)
    try:
        return catalog_entry(spec).group
    except KeyError:
        raise CliError(f"{spec!r} is neither a file nor a catalog group") from None


def _rows(records):
    return "\n".join("\t".join(str(x) for x in r) for r in records)


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args):
    cm = _diagram(args.file)
    res = classify(cm)
    if args.format == "records":
        print(_rows([("component", ",".join(str(v + 1) for v in comp), t.kind, t.family or "")
                     for comp, t in res.components]))
    else:
        print(res)
        if len(res.components) > 1:
            for comp, t in res.components:
                print(f"  {{{', '.join(f's{v + 1}' for v in comp)}}}: {t}")
    return 0


def cmd_centralizer(args):
    cm = _diagram(args.file)
    if not 1 <= args.gen <= cm.n:
        raise CliError(f"--gen must lie in 1..{cm.n}")
    r = centralizer_rank(cm, args.gen - 1)
    names = lambda vs: " ".join(f"s{v + 1}" for v in vs)
    if args.format == "records":
        print(_rows([("centralizer", args.gen, ",".join(str(v + 1) for v in r.commuting),
                      ",".join(str(v + 1) for v in r.odd_component), r.e, r.v, r.k)]))
    else:
        print(f"generator: s{args.gen}")
        print(f"commuting generators: {names(r.commuting)}")
        print(f"odd component: {names(r.odd_component)} (edges {r.e}, vertices {r.v})")
        print(f"free rank k = e - v + 1 = {r.k}")
    return 0


def cmd_special(args):
    cm = _diagram(args.file)
    subs = special_spherical_subgroups(cm)
    recs = []
    for s in subs:
        kind = str(classify(cm.induced(s))) if s else "trivial"
        recs.append((s, kind))
    if args.format == "records":
        print(_rows([("subset", ",".join(str(v + 1) for v in s), k) for s, k in recs]))
    else:
        for s, k in recs:
            print(f"{{{', '.join(f's{v + 1}' for v in s)}}}  {k}")
        print(f"{len(recs)} special spherical subsets")
    return 0


def cmd_word_eq(args):
    cm = _diagram(args.file)
    rep = build_rep(cm)
    same = words_equal(rep, _int_word(args.w1, cm.n), _int_word(args.w2, cm.n))
    print(("equal" if same else "not equal") if args.format == "text"
          else f"word-eq\t{args.w1}\t{args.w2}\t{int(same)}")
    return 0


def cmd_order(args):
    cm = _diagram(args.file)
    res = element_order(build_rep(cm), _int_word(args.w, cm.n), args.bound)
    print(res if args.format == "text" else f"order\t{args.w}\t{res}")
    return 0


def cmd_hom_count(args):
    P = parse_presentation(_read(args.presentation))
    Q = _target_group(args.target)
    homs, epis = hom_count(P, Q)
    if args.format == "records":
        print(f"{args.target}\t{Q.order()}\t{homs}\t{epis}")
    else:
        print(f"target order {Q.order()}: {homs} homomorphisms, {epis} surjective")
    return 0


def cmd_fingerprint(args):
    P = parse_presentation(_read(args.presentation))
    text = format_fingerprint(fingerprint(P, args.bound))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args):
    f1 = parse_fingerprint(_read(args.f1))
    f2 = parse_fingerprint(_read(args.f2))
    res = compare(f1, f2)
    if args.format == "records":
        if isinstance(res, Equal):
            print(f"equal\t{res.bound}")
        else:
            print(f"difference\t{res.order}\t{res.id}\t{res.counts1[0]}\t{res.counts1[1]}"
                  f"\t{res.counts2[0]}\t{res.counts2[1]}")
    else:
        print(res)
    return 0 if isinstance(res, Equal) else 1


def _finite_data(P):
    try:
        G = group_of_presentation(P, _budget(200_000))
    except CosetLimitExceeded:
        raise CliError("presented group too large for coset enumeration; pass --subgroups") from None
    return subgroup_class_words(G)


def _subgroups(args, P):
    if not args.subgroups:
        return _finite_data(P)
    out = []
    for raw in _read(args.subgroups).splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append([parse_word(w, P.names) for w in line.split(",")])
    return out


def _word_list(text, names):
    return [parse_word(w, names) for w in text.split(",")] if text.strip() else []


def cmd_emit(args):
    if args.kind == "chi":
        if args.m is None:
            raise CliError("--kind chi needs --m")
        f = emit_chi(args.m)
    else:
        if not args.presentation:
            raise CliError(f"--kind {args.kind} needs --presentation")
        P = parse_presentation(_read(args.presentation))
        subs = _subgroups(args, P)
        if args.kind == "finite-g":
            f = emit_finite_g(P, subs)
        else:
            if not args.theta or args.w is None:
                raise CliError("--kind gamma needs --w and --theta")
            theta_text = _read(args.theta) if Path(args.theta).is_file() else args.theta
            f = emit_gamma(P, _word_list(args.w, P.names), parse_formula(theta_text), subs,
                           _word_list(args.hom_words or "", P.names))
    if args.format == "records":
        print(f"tag\t{tag(f)}\nfree\t{','.join(sorted(free_vars(f)))}\nformula\t{render(f)}")
    else:
        print(f"# tag: {tag(f)}; free variables: {', '.join(sorted(free_vars(f))) or 'none'}")
        print(render(f))
    return 0


def _element(text: str, G: PermGroup):
    text = text.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    return Permutation.parse(text, G.degree)


def _pairs(items, G, what):
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise CliError(f"{what} expects name=element, got {item!r}")
        out[name.strip()] = _element(val, G)
    return out


def cmd_eval(args):
    f = parse_formula(_read(args.formula))
    G = _target_group(args.model)
    consts = {k: (v if isinstance(v, Permutation) else G.element(v)) for k, v in
              _pairs(args.const, G, "--const").items()}
    M = FiniteGroupModel(G, consts)
    assign = _pairs(args.assign, G, "--assign")
    open_vars = sorted(free_vars(f) - set(assign) - set(consts))
    budget = _budget(10**7)
    if not open_vars:
        val = evaluate(f, M, assign, budget)
        print(("true" if val else "false") if args.format == "text" else f"value\t{int(val)}")
        return 0
    hits = 0
    total = 0
    for values in itertools.product(range(M.size), repeat=len(open_vars)):
        env = dict(assign)
        env.update(zip(open_vars, values))
        total += 1
        if evaluate(f, M, env, budget):
            hits += 1
            shown = [str(G.element(v)) for v in values]
            if args.format == "records":
                print("holds\t" + "\t".join(f"{k}={s}" for k, s in zip(open_vars, shown)))
            else:
                print("holds at " + ", ".join(f"{k} = {s}" for k, s in zip(open_vars, shown)))
    if args.format == "text":
        print(f"{hits} of {total} assignments of {', '.join(open_vars)}")
    return 0


def cmd_verify(args):
    rep = run_section(args.section, seed=args.seed)
    print(rep.records() if args.format == "records" else rep.render())
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text",
                        help="output style (default: text)")
    common.add_argument("--seed", type=int, default=0, help="seed for every random corpus (default: 0)")

    ap = argparse.ArgumentParser(prog="coxkit", description=__doc__.splitlines()[0],
                                 epilog="COXKIT_BUDGET overrides search budgets.")
    ap.add_argument("--version", action="version", version=f"coxkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("classify", cmd_classify, "classify a Coxeter diagram file")
    p.add_argument("file")
    p = add("centralizer", cmd_centralizer, "odd-subgraph centralizer rank at a generator")
    p.add_argument("file")
    p.add_argument("--gen", type=int, required=True, help="1-based generator index")
    p = add("special-subgroups", cmd_special, "list special spherical subsets")
    p.add_argument("file")
    p = add("word-eq", cmd_word_eq, "decide whether two words are equal")
    p.add_argument("file")
    p.add_argument("--w1", required=True, help='generator indices, e.g. "1 2 1"')
    p.add_argument("--w2", required=True)
    p = add("order", cmd_order, "order of a word, up to a bound")
    p.add_argument("file")
    p.add_argument("--w", required=True, help='generator indices, e.g. "1 2"')
    p.add_argument("--bound", type=int, default=100)
    p = add("hom-count", cmd_hom_count, "count homomorphisms and epimorphisms into a finite group")
    p.add_argument("--presentation", required=True)
    p.add_argument("--target", required=True, help="catalog id/name or permutation file")
    p = add("fingerprint", cmd_fingerprint, "hom/epi counts into every catalog group up to a bound")
    p.add_argument("--presentation", required=True)
    p.add_argument("--bound", type=int, default=31)
    p.add_argument("--out")
    p = add("compare-fingerprints", cmd_compare, "compare two fingerprint files (exit 1 if they differ)")
    p.add_argument("f1")
    p.add_argument("f2")
    p = add("emit-formula", cmd_emit, "write a first-order formula")
    p.add_argument("--kind", choices=("chi", "finite-g", "gamma"), required=True)
    p.add_argument("--m", type=int, help="exponent for chi")
    p.add_argument("--presentation")
    p.add_argument("--subgroups", help="file: one subgroup per line, elements as comma-separated words "
                                       "(default: computed when the presented group is finite)")
    p.add_argument("--w", help="gamma: comma-separated words for the tuple z")
    p.add_argument("--theta", help="gamma: formula (file or text) with one free variable")
    p.add_argument("--hom-words", help="gamma: comma-separated generators of H")
    p = add("eval", cmd_eval, "evaluate a formula in a finite group")
    p.add_argument("--formula", required=True)
    p.add_argument("--model", required=True, help="catalog id/name or permutation file")
    p.add_argument("--assign", action="append", help="var=element (index or cycles); repeatable")
    p.add_argument("--const", action="append", help="name=element constant; repeatable")
    p = add("verify-paper", cmd_verify, "run a reproducibility report")
    p.add_argument("--section", required=True, choices=sorted(SECTIONS))
    return ap


_ERRORS = (CliError, DiagramError, WordSyntaxError, FormulaSyntaxError, BudgetExceeded,
           RepresentationError, CosetLimitExceeded, ValueError, KeyError, IndexError)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"coxkit: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
