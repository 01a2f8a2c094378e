"""Reference values for smoothing-kernel constants.

Standalone script, no package imports.  Computes the kernel constants
A_K = int K(v)^2 dv and B_K = 4 int (int K(u)K(u+v) du)^2 dv two ways
(closed form where available, trapezoid quadrature otherwise) and prints
the numbers that the unit tests freeze.

Run:  python tests/oracles/kernel_constants_ref.py
"""

import numpy as np
from scipy.integrate import trapezoid


def bp_kernel(u):
    """Quadratic density (3/(4pi))(1 - (u/pi)^2) on [-pi, pi], zero outside."""
    u = np.asarray(u, dtype=float)
    val = 3.0 / (4.0 * np.pi) * (1.0 - (u / np.pi) ** 2)
    return np.where(np.abs(u) <= np.pi, np.maximum(val, 0.0), 0.0)


def uniform_kernel(u):
    """Flat density 1/(2pi) on [-pi, pi], zero outside."""
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) <= np.pi, 1.0 / (2.0 * np.pi), 0.0)


def self_convolution(kernel, npts=2001):
    """Return gamma(v) = int kernel(u) kernel(u+v) du as a callable.

    Integrates over the exact support overlap [-pi, pi] ∩ [-pi-v, pi-v]
    so the integrand is smooth on the quadrature window; naive full-range
    trapezoid loses ~1e-5 at the kernel's jump edges.
    """

    def gamma(v):
        lo = max(-np.pi, -np.pi - v)
        hi = min(np.pi, np.pi - v)
        if hi <= lo:
            return 0.0
        u = np.linspace(lo, hi, npts)
        return trapezoid(kernel(u) * kernel(u + v), u)

    return gamma


def a_const(kernel, npts=2001):
    u = np.linspace(-np.pi, np.pi, npts)
    return trapezoid(kernel(u) ** 2, u)


def b_const(kernel, lo, hi, npts=2001):
    gamma = self_convolution(kernel)
    v = np.linspace(lo, hi, npts)
    g2 = np.array([gamma(vi) ** 2 for vi in v])
    return 4.0 * trapezoid(g2, v)


def main():
    print("== A_K ==")
    a_bp = a_const(bp_kernel)
    a_un = a_const(uniform_kernel)
    print(f"A_K  quadratic  quadrature {a_bp:.10f}   closed 3/(5pi) = {3/(5*np.pi):.10f}")
    print(f"A_K  uniform    quadrature {a_un:.10f}   closed 1/(2pi) = {1/(2*np.pi):.10f}")

    print("== gamma (self-convolution) spot checks ==")
    g_un = self_convolution(uniform_kernel)
    # closed form: triangle (1/(2pi))(1 - |v|/(2pi)) on [-2pi, 2pi]
    for v in (0.0, np.pi / 2, np.pi, 1.5 * np.pi):
        closed = (1.0 / (2.0 * np.pi)) * (1.0 - abs(v) / (2.0 * np.pi))
        print(f"gamma_uniform({v:.4f}) = {g_un(v):.10f}   closed {closed:.10f}")
    g_bp = self_convolution(bp_kernel)
    print(f"gamma_quadratic(0) = {g_bp(0.0):.10f}   (= A_K = {a_bp:.10f})")

    print("== B_K, full support (-2pi, 2pi) ==")
    b_un_full = b_const(uniform_kernel, -2 * np.pi, 2 * np.pi)
    b_bp_full = b_const(bp_kernel, -2 * np.pi, 2 * np.pi)
    print(f"B_K uniform    full {b_un_full:.10f}   closed 4/(3pi) = {4/(3*np.pi):.10f}")
    print(f"B_K quadratic  full {b_bp_full:.10f}")

    print("== B_K, band-dependent limits (lo-pi, hi+pi) ==")
    cases = [
        ("uniform", uniform_kernel, 0.0, np.pi),
        ("uniform", uniform_kernel, 0.0, np.pi / 4),
        ("quadratic", bp_kernel, 0.0, np.pi / 4),
        ("quadratic", bp_kernel, 0.0, np.pi / 10),
        ("quadratic", bp_kernel, 2 * np.pi / 5, 3 * np.pi / 5),
        ("quadratic", bp_kernel, np.pi / 4, np.pi / 2),
    ]
    for name, kern, lo, hi in cases:
        b = b_const(kern, lo - np.pi, hi + np.pi)
        print(f"B_K {name:9s} band ({lo:.6f},{hi:.6f}) -> {b:.10f}")
    closed_un_0pi = 5.0 / (4.0 * np.pi)
    print(f"closed uniform band (0,pi): 5/(4pi) = {closed_un_0pi:.10f}")


if __name__ == "__main__":
    main()
