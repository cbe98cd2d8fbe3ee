"""Write the bundled instance files into instances/.

Every singular configuration here was checked with the completeness
certificate (stabilized dim A/J equals the declared total Tjurina number),
except the two files that exist to exercise failures.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "instances"
XYZW = ["x", "y", "z", "w"]


def fermat(v, d):
    return [[[d if j == i else 0 for j in range(v)], "1"] for i in range(v)]


def terms(*pairs):
    return [[list(e), str(c)] for e, c in pairs]


def write(name, n, d, f, points, variables=None, **options):
    doc = {
        "n": n,
        "d": d,
        "variables": variables or [f"x{i}" for i in range(n + 2)],
        "f": f,
        "singular_points": [[str(x) for x in p] for p in points],
    }
    if options:
        doc["options"] = options
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


# w^3 (x^2 + y^2 + z^2) + x^5 + y^5 + z^5: a node at [0:0:0:1], plus six more
# nodes at w = 1, (x, y, z) = c (1, zeta, zeta^2) up to permutation, c^3 = -2/5
SYMMETRIC = [((2, 0, 0, 3), 1), ((0, 2, 0, 3), 1), ((0, 0, 2, 3), 1),
             ((5, 0, 0, 0), 1), ((0, 5, 0, 0), 1), ((0, 0, 5, 0), 1)]
# adding x^4 y breaks the symmetry and leaves the node at [0:0:0:1] alone
NODAL_QUINTIC = SYMMETRIC + [((4, 1, 0, 0), 1)]
# nodes at [0:0:0:1] and [1:0:0:0]
TWO_NODES = [((2, 0, 0, 3), 1), ((0, 2, 0, 3), 1), ((0, 0, 2, 3), 1),
             ((3, 2, 0, 0), 1), ((3, 0, 2, 0), 1), ((3, 0, 0, 2), 1),
             ((0, 5, 0, 0), 1), ((0, 0, 5, 0), 1)]
# A2 at [0:0:0:1] (local x^2 + y^2 + z^3) and a node at [1:0:0:0]
A1_A2 = [((2, 0, 0, 3), 1), ((0, 2, 0, 3), 1), ((0, 0, 3, 2), 1),
         ((3, 2, 0, 0), 1), ((3, 0, 2, 0), 1), ((3, 0, 0, 2), 1),
         ((0, 5, 0, 0), 1), ((0, 0, 5, 0), 1)]
A2_ONLY = [((2, 0, 0, 3), 1), ((0, 2, 0, 3), 1), ((0, 0, 3, 2), 1),
           ((5, 0, 0, 0), 1), ((0, 5, 0, 0), 1), ((0, 0, 5, 0), 1)]
NODAL_QUARTIC = [((2, 0, 0, 2), 1), ((0, 2, 0, 2), 1), ((0, 0, 2, 2), 1),
                 ((4, 0, 0, 0), 1), ((0, 4, 0, 0), 1), ((0, 0, 4, 0), 1)]

W = (0, 0, 0, 1)
X = (1, 0, 0, 0)


def main():
    OUT.mkdir(exist_ok=True)
    write("fermat_quartic", 2, 4, fermat(4, 4), [], XYZW)
    write("fermat_quintic", 2, 5, fermat(4, 5), [], XYZW)
    write("fermat_sextic_p5", 4, 6, fermat(6, 6), [])
    write("fermat_cubic_threefold", 3, 3, fermat(5, 3), [])
    write("nodal_quintic_symmetric", 2, 5, terms(*SYMMETRIC), [W], XYZW)
    write("nodal_quintic_symmetric_badpoint", 2, 5, terms(*SYMMETRIC), [X], XYZW)
    write("nodal_quintic", 2, 5, terms(*NODAL_QUINTIC), [W], XYZW)
    write("nodal_quartic", 2, 4, terms(*NODAL_QUARTIC), [W], XYZW)
    write("two_node_quintic", 2, 5, terms(*TWO_NODES), [W, X], XYZW)
    write("two_node_quintic_one_declared", 2, 5, terms(*TWO_NODES), [W], XYZW)
    write("a1_a2_quintic", 2, 5, terms(*A1_A2), [W, X], XYZW)
    write("a2_quintic", 2, 5, terms(*A2_ONLY), [W], XYZW)


if __name__ == "__main__":
    main()
