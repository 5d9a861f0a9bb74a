"""Command-line interface: ``hopflift <subcommand> ...``.

Exit codes: 0 = check passed (or command succeeded), 1 = check failed,
2 = usage or input error.  Output is JSON unless ``--format`` says otherwise.
Relative ``--out`` paths are resolved against ``$HOPFLIFT_OUT_DIR`` when set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import chains as ch
from . import combinat as cb
from . import hopf, lumping, sample
from .exactalg import Matrix, frac_str, matrix_from_json, matrix_to_json
from .hopf import Algebra, DescentOpSpec

OUT_DIR_ENV = "HOPFLIFT_OUT_DIR"
MATRIX_CAPS = {Algebra.FQSYM: 8, Algebra.FSYM: 9, Algebra.LAMBDA: 30}


class CapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers


def _emit(obj: Any, args, text: str | None = None) -> None:
    if text is None:
        text = json.dumps(obj, indent=2, ensure_ascii=False)
    if args.out:
        path = Path(args.out)
        if not path.is_absolute() and os.environ.get(OUT_DIR_ENV):
            path = Path(os.environ[OUT_DIR_ENV]) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _check_cap(alg: Algebra, n: int, args, transported: bool = False) -> None:
    if getattr(args, "allow_large", False):
        return
    if n > MATRIX_CAPS[alg]:
        raise CapError(f"{alg.value} matrices are capped at n <= {MATRIX_CAPS[alg]} (use --allow-large)")
    if transported and n > MATRIX_CAPS[Algebra.FQSYM]:
        raise CapError(f"this {alg.value} matrix is computed inside FQSym, capped at n <= "
                       f"{MATRIX_CAPS[Algebra.FQSYM]} (use --allow-large)")


def _load_spec(ref: str, n: int | None) -> DescentOpSpec:
    """A preset name (needs ``n``) or a path to a DescentOpSpec JSON file."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        spec = DescentOpSpec.from_json(path.read_text(encoding="utf-8"))
        if n is not None and spec.n != n:
            raise cb.InvalidInputError(f"spec has degree {spec.n}, but --n {n} was given")
        return spec
    if n is None:
        raise cb.InvalidInputError("a preset operator needs --n")
    return DescentOpSpec.preset(ref, n)


def _chain_matrix(args, name: str | None = None, doob: bool | None = None) -> Matrix:
    """Matrix for ``--chain`` or ``--spec``/``--algebra``."""
    doob = (not args.no_doob) if doob is None else doob
    name = name or args.chain
    if name:
        alg = ch.chain_algebra(name)
        transported = name not in ("partition-downup", "tableau-downup")
        _check_cap(alg, args.n, args, transported and alg is not Algebra.FQSYM)
        return ch.named_chain(name, args.n, r=args.r, q=args.q, doob=doob)
    if not args.spec:
        raise cb.InvalidInputError("give --chain or --spec")
    spec = _load_spec(args.spec, args.n)
    alg = Algebra(args.algebra)
    _check_cap(alg, spec.n, args, alg is not Algebra.FQSYM)
    args.n = spec.n
    return ch.ChainSpec(alg, spec, doob).matrix()


_OPERATOR_ALIASES = {
    "fqsym-downup": ("fqsym", "down-up"),
    "fsym-downup": ("fsym", "down-up"),
    "lambda-downup": ("lambda", "down-up"),
}


def _operator_ref(ref: str, n: int, args) -> Matrix:
    """``fqsym-downup``, ``<algebra>:<preset>``, a chain name, or a matrix JSON file."""
    if ref in _OPERATOR_ALIASES:
        alg, preset = _OPERATOR_ALIASES[ref]
    elif ":" in ref and ref.split(":", 1)[0] in {a.value for a in Algebra}:
        alg, preset = ref.split(":", 1)
    elif ref in ch.CHAIN_NAMES:
        return _chain_matrix(args, name=ref, doob=True)
    else:
        return matrix_from_json(Path(ref).read_text(encoding="utf-8"))
    alg = Algebra(alg)
    _check_cap(alg, n, args, alg is not Algebra.FQSYM)
    return ch.ChainSpec(alg, DescentOpSpec.preset(preset, n)).matrix()


def _theta(name: str, n: int, k: Matrix) -> lumping.FiberMap:
    if name == "identity":
        return lumping.identity_map(k.basis, k.kind)
    return lumping.named_fiber_map(name, n)


def _parse_state(kind: str, text: str):
    return cb.parse_label(kind, text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_matrix(args) -> int:
    m = _chain_matrix(args)
    if args.format == "json":
        _emit(matrix_to_json(m), args)
    else:
        labels = cb.format_labels(m.kind, m.basis) if m.kind else [str(x) for x in m.basis]
        dense = m.to_dense()
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["state", *labels])
            for lab, r in zip(labels, dense):
                w.writerow([lab, *(frac_str(v) for v in r)])
            _emit(None, args, buf.getvalue().rstrip("\n"))
        else:
            lines = [f"{lab:>16} | " + " ".join(f"{str(v):>6}" for v in r) for lab, r in zip(labels, dense)]
            _emit(None, args, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    check = args.check
    n = args.n
    if check == "stationary":
        name = args.chain or "partition-downup"
        k = _chain_matrix(args, name=name, doob=True)
        alg = ch.chain_algebra(name)
        pi = ch.stationary_distribution(alg, n)
        ok = ch.verify_stationary(pi, k)
        rep = ch.report("stationary", n, {"chain": name}, ok, None if ok else "pi K != pi",
                        distribution={cb.format_labels(alg.label_kind, [x])[0]: frac_str(v)
                                      for x, v in pi.items()})
    elif check == "spectrum":
        k = _chain_matrix(args, doob=True)
        if args.chain:
            alg = ch.chain_algebra(args.chain)
            spec = None
            if args.chain not in ("partition-downup", "tableau-downup", "b2r-std"):
                if args.chain in ("b2r-shuffle", "bottom-r-shuffle"):
                    raise cb.InvalidInputError("spectra of shuffles without standardisation are "
                                               "not certified; see `probe fixed-points`")
                spec = ch.chain_spec(args.chain, n, args.r, args.q).operator
        else:
            alg, spec = Algebra(args.algebra), _load_spec(args.spec, n)
        rep = ch.spectrum_certificate(k, alg, args.n, spec=spec)
    elif check == "dynkin":
        k = _operator_ref(args.big, n, args)
        theta = _theta(args.theta, n, k)
        cert = lumping.dynkin_strong_check(k, theta)
        rep = ch.report("dynkin", n, {"big": args.big, "theta": args.theta}, cert.verdict,
                        certificate=cert.to_json(theta))
        rep["witness"] = rep["certificate"]["witness"]
    elif check == "weak-lumping":
        big = _operator_ref(args.big or "fqsym-downup", n, args)
        small = _operator_ref(args.small or "fsym-downup", n, args)
        theta = _theta(args.theta, n, big)
        eta = None
        cert = lumping.weak_lumping_check(big, small, theta, eta)
        rep = ch.report("weak-lumping", n, {"big": args.big or "fqsym-downup",
                                            "small": args.small or "fsym-downup",
                                            "theta": args.theta}, cert.verdict,
                        certificate=cert.to_json(theta))
        rep["witness"] = rep["certificate"]["witness"]
    elif check in ("insertion-identity", "lemma53"):
        rs = [args.r_explicit] if args.r_explicit else list(range(1, n))
        reps = [ch.lemma53_identity_check(n, r) for r in rs]
        ok = all(ch.passed(r) for r in reps)
        bad = next((r for r in reps if not ch.passed(r)), None)
        rep = ch.report("insertion-identity", n, {"r": rs}, ok, bad and {"r": bad["params"]["r"], **bad["witness"]})
    elif check == "multistep":
        target = cb.parse_perm(args.target) if args.target else None
        rep = ch.multistep_identity_compare(n, args.t, r=args.r, target=target)
    elif check == "state-space-basis":
        res = hopf.state_space_basis_check(n)
        rep = ch.report("state-space-basis", n, {}, res["verdict"], res["witness"],
                        products=res["products"], coproducts=res["coproducts"])
    else:  # argparse restricts the choices
        raise cb.InvalidInputError(f"unknown check {check!r}")
    _emit(rep, args)
    return 0 if ch.passed(rep) else 1


def cmd_simulate(args) -> int:
    kind = sample.state_kind(args.chain)
    spec = _load_spec(args.spec, args.n) if args.spec else None
    start = _parse_state(kind, args.start) if args.start else None
    if start is None:
        if args.n is None and spec is not None:
            args.n = spec.n
        if args.n is None:
            raise cb.InvalidInputError("give --start or --n")
        start = {"perm": tuple(range(1, args.n + 1)), "partition": (args.n,),
                 "tableau": (tuple(range(1, args.n + 1)),)}[kind]
    kwargs: dict = {"r": args.r, "q": args.q} if args.chain != "p-shuffle-std" else {"spec": spec}
    log = open(args.log, "w", encoding="utf-8") if args.log else None
    try:
        dist = sample.simulate(args.chain, start, args.t, args.trials, args.seed,
                               threads=args.threads, log=log, **kwargs)
    finally:
        if log:
            log.close()
    out = dist.to_json()
    out["meta"] = {"start": cb.format_labels(kind, [start])[0], "threads": args.threads}
    _emit(out, args)
    return 0


def cmd_rsk(args) -> int:
    word = cb.parse_perm(args.word)
    _emit(None, args, cb.format_tableau(cb.rsk_insertion_tableau(word)))
    return 0


def cmd_walk(args) -> int:
    lam = cb.parse_partition(args.shape)
    rng = sample.rng_stream(args.seed)
    if args.dir == "remove":
        boxes = sample.hook_walk_remove(lam, rng, trials=args.trials)
        exact = {b: Fraction(cb.dim(cb.remove_box(lam, b)), cb.dim(lam)) for b in cb.removable_boxes(lam)}
    else:
        grid = args.n or sum(lam) + 1
        boxes = sample.complementary_hook_walk_add(lam, grid, rng, trials=args.trials)
        exact = sample.complementary_hook_walk_law(lam, grid)
    counts = {}
    for b in boxes:
        counts[b] = counts.get(b, 0) + 1
    out = {"shape": cb.format_partition(lam), "dir": args.dir, "seed": args.seed, "trials": args.trials,
           "boxes": [{"box": list(b), "count": counts.get(b, 0),
                      "frequency": counts.get(b, 0) / args.trials, "exact": frac_str(p)}
                     for b, p in sorted(exact.items())]}
    _emit(out, args)
    return 0


def cmd_probe(args) -> int:
    if args.what == "diagonalisable":
        rep = ch.diagonalisability_probe(args.n, trials=args.trials, seed=args.seed, alg=args.algebra)
    else:
        rep = ch.fixed_point_comparison(args.n)
    _emit(rep, args)
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (relative paths go under $%s)" % OUT_DIR_ENV)
    p.add_argument("--allow-large", action="store_true", help="lift the per-algebra size caps")


def _chain_args(p: argparse.ArgumentParser, n_required: bool = False) -> None:
    p.add_argument("--chain", choices=ch.CHAIN_NAMES)
    p.add_argument("--spec", help="operator preset name or DescentOpSpec JSON file")
    p.add_argument("--algebra", default="fqsym", choices=[a.value for a in Algebra])
    p.add_argument("--n", type=int, required=n_required)
    p.add_argument("--r", type=int, default=1, help="r for the bottom-r chains")
    p.add_argument("--q", type=Fraction, default=Fraction(1, 2), help="q for q-mix, e.g. 1/3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopflift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", help="build a transition or operator matrix")
    _chain_args(p)
    p.add_argument("--no-doob", action="store_true", help="emit [T]^T before the Doob transform")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    _common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="run an exact check")
    p.add_argument("check", choices=("stationary", "spectrum", "dynkin", "weak-lumping", "insertion-identity",
                                     "lemma53", "multistep", "state-space-basis"))
    _chain_args(p, n_required=True)
    p.add_argument("--big", help="operator on the big space, e.g. fqsym-downup or fqsym:twisted-top")
    p.add_argument("--small", help="operator on the small space (weak-lumping)")
    p.add_argument("--theta", default="rsk-p", help="sh | rsk-p | sh-rsk | des | identity")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--target", help="multistep witness target permutation")
    p.add_argument("--identity-r", "--lemma-r", dest="r_explicit", type=int, help="single r for insertion-identity (default: all)")
    p.set_defaults(no_doob=False, func=cmd_verify)
    _common(p)

    p = sub.add_parser("simulate", help="Monte Carlo runs of a chain")
    p.add_argument("--chain", required=True, choices=CHAIN_CHOICES)
    p.add_argument("--spec", help="DescentOpSpec for --chain p-shuffle-std")
    p.add_argument("--n", type=int)
    p.add_argument("--start", help="start state in its text encoding")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--q", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--log", help="write the first trajectory here, one state per line")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rsk", help="RSK insertion tableau of a permutation")
    p.add_argument("word", help='one-line notation, e.g. "3 1 2"')
    _common(p)
    p.set_defaults(func=cmd_rsk)

    p = sub.add_parser("walk", help="hook walk (remove) or complementary hook walk (add)")
    p.add_argument("--shape", required=True)
    p.add_argument("--dir", choices=("remove", "add"), default="remove")
    p.add_argument("--n", type=int, help="grid size for --dir add (default |shape| + 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("probe", help="informational searches (no verdict)")
    p.add_argument("what", choices=("diagonalisable", "fixed-points"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algebra", default="fqsym", choices=[a.value for a in Algebra])
    _common(p)
    p.set_defaults(func=cmd_probe)
    return parser


CHAIN_CHOICES = (*ch.CHAIN_NAMES, "p-shuffle-std")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
