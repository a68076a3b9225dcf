#!/usr/bin/env python3
"""Random bi-matrix ensemble sweep: empirical bi-free cumulants of the
compound Poisson model versus the targets lambda * phi(jump word), across
matrix sizes and rates."""

import argparse

from bipoisson import AtomLaw, EnsembleSpec, VariableSpec
from bipoisson.matrix_models import estimate_empirical_cumulants
from bipoisson.partitions import LEFT, RIGHT


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rates", default="0.5,1,2.5")
    ap.add_argument("--sizes", default="32,64,128")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--max-word", type=int, default=4)
    ap.add_argument("--seed", type=int, default=20240101)
    args = ap.parse_args()

    law = AtomLaw((1.0, 2.0), (0.5, 0.5))
    for rate in (float(x) for x in args.rates.split(",")):
        spec = EnsembleSpec(
            rate=rate,
            variables=(
                VariableSpec("zl", LEFT, law, 0),
                VariableSpec("zr", RIGHT, law, 0),
            ),
            sizes=tuple(int(x) for x in args.sizes.split(",")),
            trials=args.trials,
            seed=args.seed,
            max_word_len=args.max_word,
        )
        print(f"rate={rate}")
        for rep in estimate_empirical_cumulants(spec):
            worst = max(rep.estimates, key=lambda e: e.abs_err)
            print(
                f"  n={rep.n:4d}  max_abs_err={rep.max_abs_err():.4e} "
                f"(word {'.'.join(worst.word)}, 3*moment_se="
                f"{3 * worst.moment_std_err:.4e})  "
                f"imag_residue={rep.max_imag_residue:.2e}"
            )


if __name__ == "__main__":
    main()
