"""Shatter coefficients, the binomial-sum growth bound, exact dimensions.

A family picks subsets out of a finite point set; the number of distinct
subsets is the shatter coefficient. Once the exhaustive search certifies
the dimension V, the shatter coefficient can never exceed the binomial sum
over j <= V, which is what makes uniform convergence arguments work.
"""

from fractions import Fraction

from ergodic_vc import (
    dyadic_class,
    k_interval_class,
    sauer_bound,
    shatter_coefficient,
    vc_dimension,
)


def midpoints(order):
    den = 1 << order
    return [Fraction(2 * i + 1, 2 * den) for i in range(den)]


def main():
    fam = dyadic_class(4)
    pts = midpoints(5)
    s = shatter_coefficient(pts, fam, fam.size)
    res = vc_dimension(fam, fam.size, pts, max_k=4)
    bound = sauer_bound(len(pts), res.dim)
    print(f"dyadic intervals up to order 4: {fam.size} members")
    print(f"points: {len(pts)}  shatter coefficient: {s}")
    print(f"dimension: {res.dim}  witness: {[str(x) for x in res.witness]}")
    print(f"binomial-sum bound at V={res.dim}: {bound.exact}  (poly: {bound.poly})")
    print(f"bound respected: {s <= bound.exact}")
    print()

    for k in (1, 2, 3):
        famk = k_interval_class(k, 3)
        grid = [Fraction(2 * i + 1, 32) for i in range(16)]
        d = vc_dimension(famk, famk.size, grid, max_k=2 * k + 2)
        print(f"unions of <= {k} grid intervals: dimension {d.dim} (= 2k)")


if __name__ == "__main__":
    main()
