"""From function families to set families: two exact reductions.

Bounded piecewise-linear functions reduce to sets in two ways. A K-level
staircase built from sublevel indicators squeezes each function from above
within 2*bound/K. A graph lift attaches one auxiliary uniform per sample;
the function-class deviation then splits as gamma <= gamma1 + gamma2 with
gamma1 an ordinary indicator deviation and gamma2 empirically below the
dimension-based rate bound.
"""

from fractions import Fraction

from ergodic_vc import (
    PiecewiseFn,
    discretize_major,
    gamma_split,
    generate,
    graph_lift,
    iid_spec,
    lm_bound,
    ramp_family,
    random_piecewise_fn,
    truncate_envelope,
)


def main():
    f = random_piecewise_fn(42)
    g = discretize_major(f, f.bound, 6)
    eps = 2 * f.bound / 6
    worst = max(g(x) - f(x) for x in f.breakpoints[:-1] + g.breakpoints[:-1])
    print(f"staircase majorant with 6 levels: eps = {eps}")
    print(f"  largest gap g - f at breakpoints: {worst} (within eps: {worst <= eps})")
    print()

    big = PiecewiseFn((0, 1), ((2, 0),), 2)
    tr = truncate_envelope(big, big, 1)
    print(f"truncating F(x) = 2x at cap 1: tail charge {tr.tail}")
    print(f"  truncated value at 3/4: {tr.fn(Fraction(3, 4))}")
    print()

    path = generate(iid_spec(1000), 1000)
    gs = graph_lift(path, yseed=2000)
    split = gamma_split(ramp_family(10), gs, 1000)
    bound = lm_bound(1000, 2)
    print("ten ramp functions, m = 1000:")
    print(f"  gamma  = {float(split.gamma):.6f}")
    print(f"  gamma1 = {float(split.gamma1):.6f}  (indicator part)")
    print(f"  gamma2 = {float(split.gamma2):.6f}  (centered part)")
    print(f"  triangle gamma <= gamma1 + gamma2: {split.bound_ok}")
    print(f"  gamma2 below rate bound {bound:.4f}: {float(split.gamma2) <= bound}")


if __name__ == "__main__":
    main()
