"""A countable family of measure-zero sets that never converges.

Take the rotation orbit of its own starting point and form the nested
windows {x0 + t*alpha : |t| <= w(j+1)}. Each window has measure zero, yet
the first m samples all lie inside any window wide enough to cover them,
so the deviation sup over the family equals 1 at every m: the empirical
frequency is 1 while the measure is 0. Small dimension alone cannot give
uniform convergence along every ergodic process; the family, not just its
combinatorics, matters.
"""

from ergodic_vc import generate, rotation_spec, trajectory_family, uniform_deviation, vc_dimension


def main():
    spec = rotation_spec(seed=0)
    path = generate(spec, 1000)
    fam = trajectory_family(
        spec.params["alpha_fixed"], path.fixed[0], path.precision, window=64
    )
    print("window-64 orbit atoms around the path's own start:")
    for m in (1, 10, 100, 1000):
        res = uniform_deviation(fam, 16, path, m)
        print(f"  m={m:>5}  gamma = {res.value}  (member {res.argmax}, measure 0)")
    print()
    print("every member is countable, so lambda(member) = 0:")
    member = fam.member(2)
    print(f"  member 2 holds {len(member)} orbit points, measure {member.measure}")
    print()
    grid = [p for p in path.points()[:8]]
    d = vc_dimension(fam, 8, grid, max_k=3)
    print(f"dimension over an 8-point orbit grid is small: {d.dim}")
    print("yet the deviation is pinned at 1 forever.")


if __name__ == "__main__":
    main()
