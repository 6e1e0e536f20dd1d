"""Walk through the Berger frame and the Hopf map at a few parameter values."""
import numpy as np

from bergersphere.frame import BergerParameter, berger_geometry
from bergersphere.hopf import fiber_rotate, frame_fields, hopf_map
from bergersphere.reports import geometry_checks


def main():
    for eps in (0.25, 0.5, 1.0, 1.5):
        p = BergerParameter(eps)
        _, _, curv = berger_geometry(p)
        riem = np.asarray(curv.riem.data, dtype=float)
        print(f"eps = {eps}: R_1212 = {riem[0, 1, 0, 1]:.6f} (4 - 3 eps^2 = {4 - 3 * eps * eps:.6f}),"
              f" R_1313 = {riem[0, 2, 0, 2]:.6f}")
        worst = max(geometry_checks(p), key=lambda c: abs(c.computed - c.expected))
        print(f"   largest check deviation: {worst.name} = {abs(worst.computed - worst.expected):.2e}")

    x = np.array([0.5, -0.5, 0.5, 0.5])
    y = hopf_map(x)
    print("\npoint", x, "maps to", y, "with |y| =", np.linalg.norm(y))
    for theta in (0.3, 1.7, 3.0):
        print(f"  rotated along the fiber by {theta}: {hopf_map(fiber_rotate(x, theta))}")
    print("frame fields at x:\n", np.array(frame_fields(x)))


if __name__ == "__main__":
    main()
