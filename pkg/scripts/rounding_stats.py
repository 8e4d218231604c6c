"""Monte-Carlo check of the rounding's expectation identities and edge-mass event."""

import argparse
import math

import numpy as np

from edgecontract.core import Instance, edges_within
from edgecontract.driver import trial_seed
from edgecontract.estimator import build_partition, clairvoyant_estimates
from edgecontract.fractional import fractional_coring
from edgecontract.generators import GeneratorSpec, generate
from edgecontract.lp import build_lp, solve_lp
from edgecontract.params import derive_params
from edgecontract.pseudocore import iterated_pseudo_coring
from edgecontract.rounding import round_many


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--epsilon", type=float, default=0.04)
    ap.add_argument("--trials", type=int, default=10**4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    n, eps = args.n, args.epsilon
    base = generate(GeneratorSpec("gnp", n=n, p=args.p, seed=args.seed, cost="zero", epsilon=eps))
    raw = np.random.default_rng(args.seed).uniform(0.01, 0.4, n) / math.comb(n, 2)
    inst = Instance(n, base.edges, tuple(raw), eps)
    params = derive_params(n, eps)
    S, _ = iterated_pseudo_coring(inst, inst.all_agents, params)
    hat = clairvoyant_estimates(inst, S, params).guesses[0]
    part = build_partition(inst, params, hat, edges_within(inst, S))
    vec = solve_lp(build_lp(inst, part))
    x = fractional_coring(vec, inst, part, params).x_star.x

    A = np.array(list(part.A))
    AB = np.array(sorted(part.A | part.B))
    draws = round_many(x, part, [trial_seed(args.seed, 0, 0, t) for t in range(args.trials)])
    inA = draws[:, np.isin(AB, A)]
    for name, w in (("edge mass", part.hat_d[A]), ("spend", inst.cost_array[A] / part.hat_d[A])):
        vals = inA @ w
        exp = float(w @ x[A])
        se = vals.std(ddof=1) / math.sqrt(args.trials)
        print(f"{name:10s} mean {vals.mean():.6g} expected {exp:.6g} z {abs(vals.mean() - exp) / se:.2f}")
    mass = inA @ part.hat_d[A]
    print(f"edge event failure rate {np.mean(mass < (1 - eps) * float(part.hat_d[A] @ x[A])):.5f}")


if __name__ == "__main__":
    main()
