"""Exact interval-union algebra on [0, 1).

Every set in this package is a finite union of half-open intervals with
rational endpoints, normalized so that parts are disjoint, non-touching
and sorted. Measures, boolean operations and memberships are all exact,
so later deviation computations carry no rounding error at all.
"""

from fractions import Fraction

from ergodic_vc import Interval, IntervalUnion, iu, normalize


def main():
    a = iu("[0,1/4) u [1/2,3/4)")
    b = iu("[1/8,5/8)")
    print("a      =", a, " measure", a.measure)
    print("b      =", b, " measure", b.measure)
    print("a n b  =", a.intersect(b))
    print("a u b  =", a.union(b))
    print("a ^ b  =", a.symmetric_difference(b))
    print("~a     =", a.complement())

    pairs = [(Fraction(0), Fraction(1, 3)), (Fraction(1, 4), Fraction(1, 2))]
    print("normalize overlapping pairs:", normalize(pairs))

    inter = a.intersect(b)
    check = a.measure + b.measure - a.union(b).measure
    print("inclusion-exclusion, exact:", inter.measure, "==", check)

    x = Fraction(1, 8)
    print(f"{x} in a: {x in a};  {x} in ~a: {x in a.complement()}")

    u = IntervalUnion((Interval(Fraction(1, 3), Fraction(2, 3)),))
    print("DSL round trip:", iu(str(u)) == u)


if __name__ == "__main__":
    main()
