"""Walk through the three Fano constructions and print their constants."""

import math

from infobounds import minimax as mm


def main():
    print("Gaussian mean, local Fano")
    for k, n, s2 in [(3, 1, 1.0), (10, 10**4, 4.0), (30, 100, 1.0)]:
        r = mm.gaussian_mean_pipeline(k, n, s2)
        p = r.parameters
        print(f"  k={k:2d} n={n:6d} sigma2={s2}: lower={r.lower_bound:.4e} "
              f"sample-mean risk={p['reference_sample_mean']:.4e} packing={p['packing']['status']}")

    print("Bump densities, local Fano in Hellinger distance")
    for k, n in [(8, 2**15), (16, 2**20)]:
        r = mm.density_packing_pipeline(k, n)
        p = r.parameters
        print(f"  k={k:2d} n=2^{int(math.log2(n))}: C1={p['C1']} m={p['m']} ratio={p['ratio_actual']:.3f} "
              f"lower={r.lower_bound:.4e}")

    print("Lipschitz regression, global Fano")
    for n in (10**4, 10**6, 4 * 10**6):
        r = mm.nonlinear_regression_pipeline(1.0, n)
        print(f"  n={n:8d}: delta={r.parameters['delta']:.4e} lower={r.lower_bound:.4e} "
              f"condition met={r.parameters['ratio_condition_met']}")

    print("Binary test Bern(0.2) vs Bern(0.8)")
    for n in (1, 3, 5):
        r = mm.binary_test_minimax([0.8, 0.2], [0.2, 0.8], n)
        print(f"  n={n}: minimax max(alpha, beta)={r.value:.5f}")


if __name__ == "__main__":
    main()
