"""Empirical in-band rate of the all-marked oblivious guess against its binomial model.

For K = V the all-marked guess scales the sampled-neighbour count X ~ Bin(r, deg/n)
by n/r, so the in-band probability per agent is a binomial sum.
"""

import argparse

import numpy as np
from scipy.stats import binom

from edgecontract.estimator import oblivious_estimates
from edgecontract.generators import GeneratorSpec, generate
from edgecontract.params import derive_params


def model_rate(deg, n, r, eps):
    k = np.arange(r + 1)
    out = []
    for d in deg:
        ok = np.abs(k * n / r - d) <= eps * d
        out.append(binom.pmf(k, r, d / n)[ok].sum())
    return float(np.mean(out))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--r", type=int, default=18)
    ap.add_argument("--epsilon", type=float, default=0.25)
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args(argv)

    inst = generate(GeneratorSpec("gnp", n=args.n, p=args.p, seed=11, cost="zero", epsilon=args.epsilon))
    params = derive_params(args.n, args.epsilon)
    deg = inst.adjacency.sum(axis=1)
    keep = deg >= params.sigma_prime * args.n
    rates = []
    for s in range(args.seeds):
        hat = oblivious_estimates(inst, params, args.r, rng_seed=s).guesses[(1 << args.r) - 1]
        rates.append(np.mean(np.abs(hat - deg)[keep] <= args.epsilon * deg[keep]))
    rates = np.array(rates)
    print(f"agents checked   {int(keep.sum())}")
    print(f"empirical rate   {rates.mean():.4f} (sd over seeds {rates.std(ddof=1):.4f}, min {rates.min():.4f})")
    print(f"binomial model   {model_rate(deg[keep], args.n, args.r, args.epsilon):.4f}")


if __name__ == "__main__":
    main()
