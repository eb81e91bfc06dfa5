"""Energy exchange between stiff springs on the lattice, vs a fine reference.

Runs one Stormer-Verlet reference, then the chosen method at several step
sizes, and prints the sup over time of the windowed per-spring energy
differences.
"""
import argparse
import sys

from oscint.experiments import windowed_stiff_diffs
from oscint.steppers import Method, StepperSpec, integrate
from oscint.systems import FpuParams, fpu_build, fpu_initial_state


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--method", default="imex", choices=[m.value for m in Method])
    ap.add_argument("--hs", type=float, nargs="+", default=[0.2, 0.1, 0.03, 0.01])
    ap.add_argument("--t-end", type=float, default=200.0)
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--omega", type=float, default=50.0)
    ap.add_argument("--reference-h", type=float, default=0.001)
    ap.add_argument("--window", type=float, default=1.0)
    ap.add_argument("--substeps", type=int, default=100)
    args = ap.parse_args(argv)

    system = fpu_build(FpuParams(args.ell, args.omega))
    state0 = fpu_initial_state(system)
    ref_stride = max(1, round(0.01 / args.reference_h))
    print(f"reference: sv h={args.reference_h:g} on [0, {args.t_end:g}] ...", flush=True)
    reference = integrate(
        system,
        StepperSpec(method=Method.SV, h=args.reference_h),
        state0,
        args.t_end,
        stride=ref_stride,
    )
    if not reference.completed:
        print(f"reference run failed: {reference.status}", file=sys.stderr)
        return 2

    header = "  ".join(f"spring {j + 1}" for j in range(args.ell))
    print(f"{'h':>8}  status     sup windowed diffs: {header}")
    for h in args.hs:
        traj = integrate(
            system,
            StepperSpec(method=Method(args.method), h=h, substeps=args.substeps),
            state0,
            args.t_end,
        )
        if not traj.completed:
            print(f"{h:8g}  {traj.status:9}  (t_blowup={traj.t_blowup:g})")
            continue
        diffs = windowed_stiff_diffs(traj, reference, args.window)
        cells = "  ".join(f"{d:8.4f}" for d in diffs)
        print(f"{h:8g}  {traj.status:9}  {cells}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
