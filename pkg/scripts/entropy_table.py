"""Print the entropy upper curve, the quantization-net route and packing
lower bounds side by side for one (gamma, nu).

    python scripts/entropy_table.py --gamma 1 --nu 2 [--J 14]
"""
import argparse

from funcspace_lab.entropy import (_mask_distances, class_profile, entropy_upper_curve,
                                   packing_lower_bound, quantization_curve)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--nu", type=float, default=2.0)
    ap.add_argument("--J", type=int, default=14)
    ap.add_argument("--corpus-size", type=int, default=32)
    ap.add_argument("--budget", type=int, default=1024)
    args = ap.parse_args()
    prof = class_profile(args.gamma, args.nu, args.J, corpus_size=args.corpus_size)
    curve = entropy_upper_curve(args.gamma, args.nu, J=args.J, profile=prof)
    print(f"fitted exponent {curve.fitted_exponent:.4f}")
    print("n,upper")
    for n, u in curve.breakpoints:
        print(f"{n},{u:.6g}")
    print("n,quantization_radius")
    for n, r in quantization_curve(prof, args.gamma, range(1, args.J)):
        print(f"{n},{r:.6g}")
    dist = _mask_distances(args.gamma, args.nu, 10)
    print("n,packing_lower,upper")
    for n in range(1, 11):
        lo = packing_lower_bound(args.gamma, args.nu, n, args.budget, J=10, _dist=dist)
        print(f"{n},{lo:.6g},{curve.upper_at(n):.6g}")


if __name__ == "__main__":
    main()
