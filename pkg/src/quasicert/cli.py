"""Command-line front end: ``quasicert {generate,density,disc,certify,experiment,kernel}``.

Exit codes: 0 success, 2 bad arguments, 3 unreadable input, 99 internal
invariant breach.  Output carries no timestamps, so identical invocations
print identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from fractions import Fraction

from . import __version__
from . import io as qio
from .discrepancy import (
    EDGE_EXACT_MAX_N,
    TRIANGLE_EXACT_MAX_N,
    clique_discrepancy,
    edge_discrepancy,
    triangle_discrepancy,
)
from .errors import CapacityError, DomainError, InvariantBreach, ParseError
from .generators import block_model, block_model_exact, gnp, sample_from_kernel, witness_graph, witness_kernel
from .kernels import (
    StepKernel,
    constant_deviation,
    cut_norm,
    kernel_triangle_operator,
    step_density,
    triangle_operator_residual,
)
from .patterns import (
    FAST_NAMES,
    density_exact,
    expand_triangle,
    fast_numerator,
    forcing_delta,
    hom_density_exact,
    pattern_from_name,
)
from .regularity import fk_decompose, reduced_density_matrix, reduced_matrix_residuals

EXIT_OK, EXIT_ARGS, EXIT_PARSE, EXIT_BREACH = 0, 2, 3, 99
EXPERIMENT_FIELDS = ("generator", "n", "p", "eps", "seed", "pattern", "t_K3", "t_pattern_tri",
                     "delta", "edge_disc", "edge_mode")


class ArgError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    data = _read(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8 text") from None
    return qio.graph_from_text(text), qio.digest(data)


def _load_kernel(path: str):
    data = _read(path)
    return qio.kernel_from_text(data.decode("utf-8", errors="replace")), qio.digest(data)


def _header(**fields) -> dict:
    return {"tool": "quasicert", "version": __version__, **fields}


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ArgError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _parse_range(text: str) -> range:
    """``a:b`` is half open; a bare ``a`` means the single seed a."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return range(int(lo), int(hi))
        return range(int(text), int(text) + 1)
    except ValueError:
        raise ArgError(f"seed range must look like 'a:b' or 'a', got {text!r}") from None


def _make_graph(kind: str, n: int, args):
    if kind == "gnp":
        return gnp(n, args.p, args.seed), f"gnp n={n} p={args.p} seed={args.seed}"
    if kind == "witness":
        return (witness_graph(args.p, args.eps, n, args.seed),
                f"witness n={n} p={args.p} eps={args.eps} seed={args.seed}")
    raise ArgError(f"unknown generator {kind!r}")


# --- generate ---------------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.n is None:
        raise ArgError("--n is required")
    if args.generator in ("gnp", "witness"):
        if args.p is None or (args.generator == "witness" and args.eps is None):
            raise ArgError("--p (and --eps for witness) are required")
        G, prov = _make_graph(args.generator, args.n, args)
    elif args.generator == "kernel":
        if not args.kernel:
            raise ArgError("--kernel FILE is required")
        K, dig = _load_kernel(args.kernel)
        G = sample_from_kernel(K, args.n, args.seed)
        prov = f"kernel n={args.n} kernel={dig} seed={args.seed}"
    else:
        if not args.sizes or not args.P:
            raise ArgError("--sizes and --P are required for block models")
        sizes = [int(s) for s in _parse_floats(args.sizes, "--sizes")]
        try:
            P = json.loads(args.P)
        except json.JSONDecodeError:
            raise ArgError("--P must be a JSON matrix") from None
        if sum(sizes) != args.n:
            raise ArgError(f"--sizes sum to {sum(sizes)}, not --n {args.n}")
        make = block_model if args.generator == "block" else block_model_exact
        G = make(sizes, P, args.seed)
        prov = f"{args.generator} n={args.n} sizes={','.join(map(str, sizes))} P={json.dumps(P)} seed={args.seed}"
    _emit(qio.graph_to_text(G, [prov]), args.output)
    return EXIT_OK


# --- density ----------------------------------------------------------------------

def cmd_density(args) -> int:
    G, dig = _load_graph(args.graph)
    patterns = [pattern_from_name(name) for name in args.patterns.split(",") if name]
    for path in args.pattern_file or []:
        patterns.append(qio.pattern_from_text(_read(path).decode("utf-8", errors="replace")))
    result = {}
    for F in patterns:
        label = F.name or f"pattern{len(result)}"
        entry = {"vertices": F.k, "edges": F.num_edges}
        fast = None
        if F.name in FAST_NAMES and F == pattern_from_name(F.name):
            fast = fast_numerator(F.name, G)
            entry["fast"] = {"hom": str(fast[0]), "denominator": str(fast[1])}
        try:
            generic = hom_density_exact(F, G)
            entry["generic"] = {"hom": str(generic[0]), "denominator": str(generic[1])}
        except CapacityError as exc:
            generic = None
            entry["generic"] = None
            entry["note"] = f"generic count skipped: {exc}"
        if fast is not None and generic is not None and fast != generic:
            raise InvariantBreach(f"{label}: fast count {fast[0]} != generic count {generic[0]}")
        num, den = fast or generic
        entry["density"] = float(Fraction(num, den))
        entry["density_exact"] = _fraction_text(Fraction(num, den))
        result[label] = entry
    _emit(_dump(_header(input_digest=dig, n=G.n, densities=result)), args.output)
    return EXIT_OK


# --- disc -------------------------------------------------------------------------

def cmd_disc(args) -> int:
    G, dig = _load_graph(args.graph)
    if args.kind == "edge":
        rep = edge_discrepancy(G, args.p, args.mode, args.restarts, args.seed)
    elif args.kind == "triangle":
        rep = triangle_discrepancy(G, args.p, args.mode, args.restarts, args.seed)
    else:
        rep = clique_discrepancy(G, args.p, args.k, args.l, args.mode, args.restarts, args.seed)
    body = rep.to_json()
    if args.kind == "clique":
        body.update(k=args.k, l=args.l)
    _emit(_dump(_header(input_digest=dig, **body)), args.output)
    return EXIT_OK


# --- certify ----------------------------------------------------------------------

def _stage_mode(requested: str, n: int, limit: int, notes: list) -> str:
    if requested == "exact" and n > limit:
        msg = f"exact mode supports n <= {limit}; downgraded to heuristic at n={n}"
        warnings.warn(msg)
        notes.append(msg)
        return "heuristic"
    if requested == "auto":
        return "exact" if n <= limit else "heuristic"
    return requested


def certify(G, p: float, eps: float, delta: float | None = None, mode: str = "auto",
            restarts: int = 32, seed: int = 0) -> dict:
    """Triangle discrepancy, weak partition, reduced matrix and final edge
    discrepancy, with a verdict that is never positive above eps."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    delta = eps / 2 if delta is None else float(delta)
    warns = []
    tmode = _stage_mode(mode, G.n, TRIANGLE_EXACT_MAX_N, warns)
    eta = triangle_discrepancy(G, p, tmode, restarts, seed)
    part = fk_decompose(G, delta, restarts=restarts, seed=seed)
    red = reduced_density_matrix(G, part)
    if red.t >= 2:
        cond, concl = reduced_matrix_residuals(red, p)
    else:
        cond, concl = None, float(abs(Fraction(float(red.d[0, 0])) - Fraction(p)))
    emode = _stage_mode(mode, G.n, EDGE_EXACT_MAX_N, warns)
    edge = edge_discrepancy(G, p, emode, restarts, seed)
    quasirandom = edge.value <= eps and concl <= eps / 2
    exact = tmode == "exact" and emode == "exact"
    return {
        "p": p,
        "eps": eps,
        "seed": seed,
        "restarts": restarts,
        "stages": {
            "triangle": {"eta": eta.value, "mode": eta.mode,
                         "witnesses": [w.hex() for w in eta.witnesses]},
            "partition": {"delta": delta, "mode": "heuristic", "t": part.t, "steps": part.steps,
                          "certified": part.certified, "sizes": part.sizes(),
                          "violations": part.violations, "classes": part.to_json()},
            "reduced": {"t": red.t, "d": red.d.tolist(), "condition_residual": cond,
                        "conclusion_residual": concl},
            "edge": {"epsilon": edge.value, "mode": edge.mode,
                     "witnesses": [w.hex() for w in edge.witnesses]},
        },
        "rule": "quasirandom iff edge epsilon <= eps and reduced conclusion residual <= eps/2",
        "delta_wiring": "partition delta defaults to eps/2; a pragmatic choice, not a proven constant",
        "verdict": "quasirandom" if quasirandom else "inconclusive",
        "soundness": ("exact" if exact else "heuristic") if quasirandom else None,
        "soundness_note": None if exact else
            "heuristic discrepancies are lower bounds; a heuristic positive verdict is not a proof",
        "warnings": warns,
    }


def cmd_certify(args) -> int:
    G, dig = _load_graph(args.graph)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = certify(G, args.p, args.eps, args.delta, args.mode, args.restarts, args.seed)
    for msg in report["warnings"]:
        print(f"warning: {msg}", file=sys.stderr)
    _emit(_dump(_header(input_digest=dig, **report)), args.output)
    return EXIT_OK


# --- experiment -------------------------------------------------------------------

def experiment_record(generator: str, n: int, p: float, eps: float | None, seed: int,
                      pattern: str, restarts: int = 32) -> dict:
    ns = argparse.Namespace(p=p, eps=eps, seed=seed)
    G, _ = _make_graph(generator, n, ns)
    F = pattern_from_name(pattern)
    k3 = Fraction(*fast_numerator("K3", G))
    ft = Fraction(*density_exact(expand_triangle(F), G))
    mode = "exact" if n <= EDGE_EXACT_MAX_N else "heuristic"
    disc = edge_discrepancy(G, p, mode, restarts, seed)
    return {
        "generator": generator, "n": n, "p": p, "eps": eps if generator == "witness" else "",
        "seed": seed, "pattern": pattern, "t_K3": float(k3), "t_pattern_tri": float(ft),
        "delta": float(forcing_delta(G, p, F)), "edge_disc": disc.value, "edge_mode": disc.mode,
    }


def cmd_experiment(args) -> int:
    if args.generator == "witness" and args.eps is None:
        raise ArgError("--eps is required for the witness generator")
    sizes = [int(x) for x in _parse_floats(args.n, "--n")]
    seeds = _parse_range(args.seeds)
    pattern_from_name(args.pattern)
    out = open(args.output, "w", encoding="utf-8", newline="") if args.output else sys.stdout
    try:
        writer = None
        for n in sizes:
            for seed in seeds:
                rec = experiment_record(args.generator, n, args.p, args.eps, seed, args.pattern,
                                        args.restarts)
                if args.format == "json":
                    out.write(json.dumps(rec) + "\n")
                    continue
                if writer is None:
                    writer = csv.DictWriter(out, fieldnames=EXPERIMENT_FIELDS, lineterminator="\n")
                    writer.writeheader()
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in rec.items()})
                out.flush()
    finally:
        if args.output:
            out.close()
    return EXIT_OK


# --- kernel -----------------------------------------------------------------------

def cmd_kernel(args) -> int:
    sources = [x is not None for x in (args.file, args.witness, args.constant)]
    if sum(sources) != 1:
        raise ArgError("give exactly one of FILE, --witness P,EPS or --constant P")
    if args.file is not None:
        K, dig = _load_kernel(args.file)
    elif args.witness is not None:
        vals = _parse_floats(args.witness, "--witness")
        if len(vals) != 2:
            raise ArgError("--witness expects P,EPS")
        K = witness_kernel(*vals)
        dig = qio.digest(qio.kernel_to_text(K).encode())
    else:
        K = StepKernel.constant(args.constant)
        dig = qio.digest(qio.kernel_to_text(K).encode())
    op = args.op
    if op in ("U", "roundtrip"):
        out = kernel_triangle_operator(K) if op == "U" else K
        _emit(qio.kernel_to_text(out), args.output)
        return EXIT_OK
    body = {"op": op, "input_digest": dig, "m": K.m}
    if op == "density":
        F = pattern_from_name(args.pattern)
        body.update(pattern=args.pattern, value=step_density(F, K))
    elif op == "cut-norm":
        value, S, T = cut_norm(K, args.mode, seed=args.seed)
        body.update(mode=args.mode, value=value, S=S, T=T)
    elif op in ("triangle-residual", "constant-deviation"):
        if args.p is None:
            raise ArgError(f"--p is required for {op}")
        fn = triangle_operator_residual if op == "triangle-residual" else constant_deviation
        body.update(p=args.p, value=fn(K, args.p))
    _emit(_dump(_header(**body)), args.output)
    return EXIT_OK


# --- wiring -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasicert", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"quasicert {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded random graph as an edge list")
    g.add_argument("generator", choices=["gnp", "witness", "kernel", "block", "block-exact"])
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--eps", type=float)
    g.add_argument("--kernel", help="kernel JSON for the kernel generator")
    g.add_argument("--sizes", help="comma-separated class sizes for block models")
    g.add_argument("--P", help="JSON matrix of class-pair probabilities")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("density", help="homomorphism densities of patterns in a graph")
    d.add_argument("graph")
    d.add_argument("--patterns", default="K2,K3,C4,S,C4tri")
    d.add_argument("--pattern-file", action="append", help="pattern in edge-list format (repeatable)")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_density)

    s = sub.add_parser("disc", help="edge, triangle or clique discrepancy")
    s.add_argument("graph")
    s.add_argument("--kind", choices=["edge", "triangle", "clique"], default="edge")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--l", type=int, default=2)
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_disc)

    c = sub.add_parser("certify", help="run the quasirandomness certification pipeline")
    c.add_argument("graph")
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--delta", type=float, help="partition threshold (default eps/2)")
    c.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    c.add_argument("--restarts", type=int, default=32)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_certify)

    e = sub.add_parser("experiment", help="stream forcing-pair statistics over seeds")
    e.add_argument("--generator", choices=["gnp", "witness"], default="gnp")
    e.add_argument("--n", default="100", help="comma-separated graph orders")
    e.add_argument("--p", type=float, default=0.5)
    e.add_argument("--eps", type=float)
    e.add_argument("--pattern", default="C4", help="F in the pair (K3, F^tri)")
    e.add_argument("--seeds", default="0:5", help="half-open range a:b")
    e.add_argument("--restarts", type=int, default=32)
    e.add_argument("--format", choices=["csv", "json"], default="csv")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_experiment)

    k = sub.add_parser("kernel", help="step-kernel computations")
    k.add_argument("file", nargs="?")
    k.add_argument("--witness", help="use the witness kernel P,EPS instead of a file")
    k.add_argument("--constant", type=float, help="use the constant kernel P instead of a file")
    k.add_argument("--op", required=True, choices=["density", "cut-norm", "U", "triangle-residual",
                                                   "constant-deviation", "roundtrip"])
    k.add_argument("--pattern", default="K3")
    k.add_argument("--p", type=float)
    k.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_kernel)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"quasicert: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantBreach as exc:
        print(f"quasicert: invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (ArgError, DomainError, CapacityError) as exc:
        print(f"quasicert: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
