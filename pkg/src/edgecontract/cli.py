"""Command-line harness: eval, oracle, ptas, compare, verify.

Exit codes: 0 success, 2 invalid input, 3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .core import AgentSet, InstanceError, evaluate, optimal_contract_for
from .driver import DriverConfig, run_ptas
from .generators import generate, parse_generator
from .instance_file import load_instance
from .oracle import BRUTE_FORCE_MAX_N, brute_force_opt
from .reports import emit_csv, emit_json, record_rows
from .suite import verify_instance

EXIT_INPUT = 2
EXIT_ASSERT = 3
SEED_ENV = "PTAS_SEED"


class UsageError(Exception):
    pass


def _seed(text: str | None) -> int:
    if text is None:
        text = os.environ.get(SEED_ENV, "0")
    try:
        s = int(text)
    except ValueError:
        raise UsageError(f"--seed: expected an unsigned 64-bit integer, got {text!r}") from None
    if not 0 <= s < 2**64:
        raise UsageError(f"--seed: expected an unsigned 64-bit integer, got {text!r}")
    return s


def _e_range(text: str | None, top: int) -> list[int] | None:
    if text is None:
        return None
    a, sep, b = text.partition("..")
    try:
        lo = int(a)
        hi = int(b) if sep else lo
    except ValueError:
        raise UsageError(f"--e-guess-range: expected A..B, got {text!r}") from None
    if not 0 <= lo <= hi <= top:
        raise UsageError(f"--e-guess-range: need 0 <= A <= B <= {top}, got {text!r}")
    return list(range(lo, hi + 1))


def _parse_set(text: str, n: int) -> AgentSet:
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        members = [int(t) for t in items]
    except ValueError:
        raise UsageError(f"--set: expected comma-separated agent indices, got {text!r}") from None
    bad = [v for v in members if not 0 <= v < n]
    if bad:
        raise UsageError(f"--set: agent {bad[0]} out of range [0, {n})")
    return AgentSet.of(members)


def _instance(args):
    if args.instance and args.gen:
        raise UsageError("give either --instance or --gen, not both")
    if args.instance:
        inst = load_instance(args.instance)
    elif args.gen:
        inst = generate(parse_generator(args.gen))
    else:
        raise UsageError("an instance is required: --instance PATH or --gen SPEC")
    if args.epsilon is not None:
        inst = inst.with_epsilon(args.epsilon)
    return inst


def _config(args, inst) -> DriverConfig:
    return DriverConfig(
        e_guess_range=_e_range(args.e_guess_range, inst.max_value),
        guess_budget=args.guess_budget,
        trials_per_guess=args.trials,
        master_seed=_seed(args.seed),
        mode=args.mode,
        sample_size=args.sample_size,
        threads=args.threads,
        gamma=args.gamma,
    )


def _g(x: float):
    return None if x == -math.inf else x


def cmd_eval(args) -> dict:
    inst = _instance(args)
    S = _parse_set(args.set, inst.n)
    ev = evaluate(inst, S)
    t = optimal_contract_for(inst, S)
    return {"set": list(S), "L": _g(ev.L), "R": ev.R, "g": _g(ev.g), "contract": list(t.t) if t.finite else None}


def cmd_oracle(args) -> dict:
    inst = _instance(args)
    res = brute_force_opt(inst, args.oracle_max_n)
    return {"best_set": list(res.best_set), "opt": res.opt, "evaluations": res.evaluations}


def cmd_ptas(args) -> dict:
    inst = _instance(args)
    return run_ptas(inst, _config(args, inst)).to_dict()


def cmd_compare(args) -> dict:
    inst = _instance(args)
    res = brute_force_opt(inst, args.oracle_max_n)
    rep = run_ptas(inst, _config(args, inst))
    bound = 5 * math.sqrt(inst.epsilon)
    gap = res.opt - rep.best_g
    return {
        "opt": res.opt,
        "opt_set": list(res.best_set),
        "best_g": rep.best_g,
        "best_set": list(rep.best_set),
        "gap": gap,
        "bound": bound,
        "within_bound": gap <= bound,
        "exact": rep.exact,
        "wall_clock_s": rep.wall_clock_s,
    }


def cmd_verify(args) -> dict:
    inst = _instance(args)
    out = verify_instance(inst, seed=_seed(args.seed), gamma=args.gamma, oracle_max_n=args.oracle_max_n)
    if out["hard_failures"]:
        raise AssertionError(emit_json(out))
    return out


COMMANDS = {"eval": cmd_eval, "oracle": cmd_oracle, "ptas": cmd_ptas, "compare": cmd_compare, "verify": cmd_verify}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("instance")
    src.add_argument("--instance", metavar="PATH", help="JSON instance file")
    src.add_argument("--gen", metavar="SPEC", help='generator, e.g. "gnp n=12 p=0.5 cost=identical(0.01) seed=1"')
    src.add_argument("--epsilon", type=float, help="override the instance's epsilon")
    common.add_argument("--seed", help=f"master seed (U64); falls back to ${SEED_ENV}, then 0")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--mode", choices=("clairvoyant", "oblivious"), default="clairvoyant")
    common.add_argument("--e-guess-range", metavar="A..B", help="inclusive range of edge-count guesses")
    common.add_argument("--guess-budget", type=_positive, help="cap on sampler guesses")
    common.add_argument("--trials", type=_positive, help="rounding trials per (guess, E_guess)")
    common.add_argument("--sample-size", type=int, default=6, help="oblivious sampler size r")
    common.add_argument("--gamma", type=float, help="override the pseudo-core constant gamma")
    common.add_argument("--oracle-max-n", type=int, default=BRUTE_FORCE_MAX_N)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="edgecontract", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", parents=[common], help="evaluate g on a given set")
    p.add_argument("--set", default="", help="comma-separated agent indices (empty for the empty set)")
    sub.add_parser("oracle", parents=[common], help="exhaustive optimum")
    sub.add_parser("ptas", parents=[common], help="run the approximation scheme")
    sub.add_parser("compare", parents=[common], help="oracle vs scheme, with the gap and its bound")
    sub.add_parser("verify", parents=[common], help="full invariant suite on one instance")
    return parser


def _render(out: dict, command: str, fmt: str) -> str:
    if fmt == "json":
        return emit_json(out)
    rows = record_rows(out) if command == "ptas" else [
        {k: (",".join(map(str, v)) if isinstance(v, list) else v) for k, v in out.items() if not isinstance(v, dict)}
    ]
    return emit_csv(rows)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
        text = _render(out, args.command, args.format)
    except (UsageError, InstanceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
