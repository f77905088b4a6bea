"""Independent reference values frozen into the unit tests.

Run with: python3 tests/oracles/oracles.py
Needs mpmath and scipy. Nothing here imports the C++ library.
"""
import mpmath as mp
from scipy.special import roots_jacobi

mp.mp.dps = 40


def kappa(g):
    return (g - 1) ** 2 / (4 * g)


def c_lambda(g):
    lam = (3 - g) / (2 * (g - 1))
    return mp.sqrt(mp.pi) * mp.gamma(lam + 1) / mp.gamma(lam + mp.mpf(3) / 2)


def riemann_R(g, delta, rho):
    g, delta, rho = mp.mpf(g), mp.mpf(delta), mp.mpf(rho)
    k = kappa(g)
    # s = y^5 removes the endpoint singularity at 0
    f = lambda y: mp.sqrt(k * g * (y ** 5) ** (g - 1) + 2 * delta * y ** 5) / y ** 5 * 5 * y ** 4
    return mp.quad(f, [0, rho ** (mp.mpf(1) / 5)])


def h_delta(g, delta, rho):
    k = kappa(mp.mpf(g))
    f = lambda s: (k * s ** g + delta * s ** 2) / s ** 2
    return rho * mp.quad(f, [0, rho])


def kernel_pair(g, psi, rho, m, cuts=()):
    g = mp.mpf(g)
    th = (g - 1) / 2
    lam = (3 - g) / (2 * (g - 1))
    k = mp.sqrt(kappa(g) * g) / th
    u = mp.mpf(m) / rho
    r = k * mp.mpf(rho) ** th
    w = lambda s: (1 - s * s) ** lam
    pts = sorted({mp.mpf(-1), mp.mpf(1)} | {mp.mpf((c - u) / r) for c in cuts if -1 < (c - u) / r < 1})
    eta = rho * mp.quad(lambda s: psi(u + r * s) * w(s), pts)
    q = rho * mp.quad(lambda s: (u + th * r * s) * psi(u + r * s) * w(s), pts)
    return eta, q


def huber(c, wd):
    return lambda v: (v - c) ** 2 / (2 * wd) + wd / 2 if abs(v - c) < wd else abs(v - c)


def spline(c, wd):
    def f(v):
        d = abs(v - c)
        if d >= wd:
            return d / 2 - 3 * wd / 16
        xi = d / wd
        return mp.mpf(3) / 4 * wd * (xi ** 2 / 2 - xi ** 4 / 12)
    return f


def q_tilde_minus(g, rho, u):
    # shifted signed square at its own base state; see the closed form below
    g = mp.mpf(g)
    th = (g - 1) / 2
    lam = (3 - g) / (2 * (g - 1))
    k = mp.sqrt(kappa(g) * g) / th
    r = k * mp.mpf(rho) ** th
    w = lambda s: (1 - s * s) ** lam
    I1 = mp.quad(lambda s: abs(s) * w(s), [-1, 0, 1])
    I3 = mp.quad(lambda s: abs(s) ** 3 * w(s), [-1, 0, 1])
    p = kappa(g) * mp.mpf(rho) ** g
    return th * rho * r ** 3 * I3 / 2 - r * I1 * p


def q_tilde_closed(g, rho):
    g = mp.mpf(g)
    th = (g - 1) / 2
    lam = (3 - g) / (2 * (g - 1))
    r = mp.mpf(rho) ** th
    return rho * r ** 3 * th / (lam + 1) * (1 / (2 * (lam + 2)) - th / g)


if __name__ == "__main__":
    print("c_lambda")
    for g in ["1.2", "1.4", "2", "3", "5", "7"]:
        print(" ", g, mp.nstr(c_lambda(mp.mpf(g)), 20))
    print("R")
    for g, d, r in [("2", "0.1", "1"), ("1.4", "0.05", "2.5"), ("5", "0.01", "0.3")]:
        print(" ", g, d, r, mp.nstr(riemann_R(g, d, r), 20))
    print("h_delta(3, 0.5, 2)", mp.nstr(h_delta(3, mp.mpf("0.5"), 2), 20))
    print("gauss-jacobi n=5")
    for a, b in [(0.5, 0.5), (-0.5, 1.5)]:
        x, w = roots_jacobi(5, a, b)
        print(" ", a, b, [repr(float(v)) for v in x], [repr(float(v)) for v in w])
    print("kernel pairs")
    for g, name, psi, cuts, rho, m in [
        ("1.4", "smoothed_abs:0:0.5", huber(0, 0.5), (-0.5, 0.5), "0.7", "0.3"),
        ("5", "smoothed_abs:1:0.5", huber(1, 0.5), (0.5, 1.5), "1.3", "-0.4"),
        ("2", "spline:0.5:0.5", spline(0.5, 0.5), (0, 1), "0.5", "0.2"),
        ("3", "spline:-0.5:0.5", spline(-0.5, 0.5), (-1, 0), "2", "-1"),
    ]:
        e, q = kernel_pair(mp.mpf(g), psi, mp.mpf(rho), mp.mpf(m), cuts)
        print(" ", g, name, rho, m, mp.nstr(e, 20), mp.nstr(q, 20))
    print("q_tilde at U-")
    for g in ["1.4", "2", "3", "5"]:
        for rho in ["0.1", "1"]:
            for u in ["0", "1"]:
                a = q_tilde_minus(mp.mpf(g), mp.mpf(rho), mp.mpf(u))
                b = q_tilde_closed(mp.mpf(g), mp.mpf(rho))
                print(" ", g, rho, u, mp.nstr(a, 20), mp.nstr(b, 20))
    print("quartic moment gamma=2", mp.nstr(mp.quad(lambda s: s ** 4 * mp.sqrt(1 - s * s), [-1, 1]), 20),
          mp.nstr(mp.pi / 16, 20))
