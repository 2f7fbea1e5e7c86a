"""Evaluate both sides of the first Chen inequality on product tori.

Tori of unit circles in flat H^m are totally real with H = H*; the margin
grows with ||H||^2 and the totally geodesic linear slice sits at equality.
"""

import numpy as np

from chenverify.chen import chen_first_report, random_plane
from chenverify.families import linear_real, product_torus
from chenverify.subman import classify, induced_data


def main():
    rng = np.random.default_rng(0xC4E2)
    subs = [product_torus(3), product_torus(4, 3), product_torus(4), linear_real(3, 3)]
    print(f"{'instance':<18}{'class':<18}{'|H|^2':>8}{'lhs':>12}{'rhs':>12}{'margin':>12}")
    for sub in subs:
        u = np.full(sub.n, 0.4)
        data = induced_data(sub, u)
        cls = classify(sub, [u])
        rep = chen_first_report(sub, u, random_plane(data, rng), data=data, classification=cls)
        print(f"{sub.name:<18}{cls.label:<18}{data.norm2(data.H):8.4f}{rep.lhs:12.6f}{rep.rhs:12.6f}{rep.margin:12.3e}")


if __name__ == "__main__":
    main()
