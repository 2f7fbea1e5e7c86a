"""Compare the two commutator pairings in the normal curvature equations.

On the skewness-perturbed flat R^4 the shape operators A and A* differ, so
[A*_xi, A_eta] and [A_xi, A*_eta] give different predictions for the normal
curvature.  Only one of them matches the finite-difference normal curvature.
"""

import numpy as np

from chenverify.families import perturbed_graph, product_torus
from chenverify.subman import gauss_ricci_residuals


def main():
    rng = np.random.default_rng(1)
    for sub in (product_torus(2), perturbed_graph()):
        lo, hi = sub.domain[:, 0], sub.domain[:, 1]
        worst = {}
        for _ in range(5):
            rep = gauss_ricci_residuals(sub, lo + (hi - lo) * rng.random(sub.n), trials=30, rng=rng)
            for key, val in {**rep.residuals, **rep.alternatives}.items():
                worst[key] = max(worst.get(key, 0.0), val)
        print(sub.name)
        for key, val in worst.items():
            print(f"  {key:<20}{val:.3e}")


if __name__ == "__main__":
    main()
