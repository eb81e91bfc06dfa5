"""Order-of-accuracy study against the closed-form model solution."""
import argparse
import sys

from oscint.experiments import convergence_study
from oscint.steppers import Method


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--methods",
        nargs="+",
        default=["sv", "imex", "midpoint-full"],
        choices=[m.value for m in Method],
    )
    ap.add_argument("--h", type=float, default=0.1)
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--omega", type=float, default=2.0)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args(argv)

    rows = convergence_study(
        methods=tuple(Method(m) for m in args.methods),
        h=args.h,
        t_end=args.t_end,
        omega=args.omega,
        levels=args.levels,
    )
    for row in rows:
        print(f"{row.method.value}:")
        for h, err in zip(row.hs, row.errors):
            print(f"  h={h:<10.6g} error={err:.6e}")
        tag = "blew up" if row.blew_up else f"order={row.order:.4f}"
        print(f"  {tag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
