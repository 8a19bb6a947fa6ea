"""First-return sampling: pacing, return times, an exact transfer identity.

Watching a path only when it visits a region A yields the induced path.
Returns arrive at the reciprocal-measure rate (pacing near one, mean gap
near 1/lambda(A)), and the induced frequency of any set C is an exactly
rescaled count of base-path visits to C n A; the identity holds with zero
tolerance at every finite sample size.
"""

from ergodic_vc import (
    frequency_transfer_identity,
    generate,
    induce,
    iu,
    kac_ratio,
    mean_return_time,
    rotation_spec,
)


def main():
    region = iu("[0,1/3)")
    path = generate(rotation_spec(seed=3), 35_000)
    ip = induce(path, region, 10_000)
    print(f"region A = {region}, lambda(A) = {region.measure}")
    print(f"first return at index {ip.hits[0]}, 10000th at {ip.hits[-1]}")
    print(f"mean return time: {float(mean_return_time(ip)):.6f} (Kac: 3)")
    for m in (10, 100, 1000, 10_000):
        print(f"  pacing W_m at m={m:>6}: {float(kac_ratio(ip, m)):.6f}")
    print()

    c = iu("[0,1/6) u [2/3,3/4)")
    for m in (7, 97, 997):
        ident = frequency_transfer_identity(ip, c, m)
        print(f"m={m:>4}: induced freq {ident.lhs} == rescaled base count "
              f"{ident.rhs}  ({ident.holds})")


if __name__ == "__main__":
    main()
