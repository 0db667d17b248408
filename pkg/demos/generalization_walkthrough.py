"""Compare measured generalization gaps with the bounds that control them."""

import numpy as np

from infobounds import info_gen as ig
from infobounds import learning as lrn
from infobounds.rng import substream


def main():
    prob = lrn.finite_bernoulli(16)
    print("Worst-case gap of a 16-model Bernoulli class")
    for n in (25, 100, 400):
        est = lrn.worst_case_gap_mc(prob, n, 20000, seed=0)
        bound = lrn.finite_class_bound(0.25, 16, n).value
        print(f"  n={n:4d}: E gap={est.mean:.4f} +- {est.se:.4f}   bound={bound:.4f}")

    inst = ig.random_instance(substream(0, 1), 3, 4)
    print("Gibbs learner on a finite instance (n=20)")
    for beta in (0.5, 2.0, 10.0):
        g = ig.gibbs_learner(inst, beta)
        mi = ig.exact_mutual_information(g, inst.pz, 20).nats
        gen = ig.generalization_mc(inst, g, 20, 20000, seed=1)
        print(f"  beta={beta:5.1f}: I(W;Z^n)={mi:.5f} nats  E gen={gen.mean:+.5f}  "
              f"MI bound={ig.mi_gen_bound(0.25, 20, 'mi', mi).value:.4f}  beta/2n={beta / 40:.4f}")

    post = ig.gibbs_posterior(ig.GibbsConfig(np.log(4), loss_table=np.array([[0.0], [1.0]])), [1])
    print(f"Two-model Gibbs posterior at beta=ln 4: {post.pmf}")


if __name__ == "__main__":
    main()
