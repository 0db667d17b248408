"""Exact covering and packing numbers of small Hamming cubes against the volume bounds."""

from infobounds import metric_entropy as me


def main():
    print(" n delta   N   M(d)  M(2d)  log2 N   lower   upper")
    for n in range(3, 9):
        for delta in (1, 2):
            row = me.sandwich_row(n, delta)
            bounds = (f"{row['H']:7.3f} {row['lower']:7.3f} {row['upper']:7.3f}" if "H" in row
                      else "   (volume bounds need delta < n/2)")
            print(f"{n:2d} {delta:5d} {row['N']:3d} {row['M_delta']:6d} {row['M_2delta']:6d} {bounds}")
    print("Binary source, D = 0.11, per-dimension entropy sandwich in bits")
    for n in (20, 40, 60, 120):
        r = me.rd_compare("binary_symmetric", 0.11, n)
        print(f"  n={n:3d}: rd={r.rd_value:.4f} lower={r.per_dim_entropy_lower:.4f} "
              f"upper={r.per_dim_entropy_upper:.4f}")


if __name__ == "__main__":
    main()
