"""Independent high-precision values frozen into the unit tests.

Run with `python3 compute_oracles.py`; needs mpmath. Every number printed here
is copied verbatim into tests/unit/oracle_values.hpp.
"""

from mpmath import mp, mpf, cos, sin, sqrt, log, exp, quad, diff, findroot, pi

mp.dps = 40

A, B = mpf(2), mpf(1)


def speed(t):
    return sqrt(A**2 * sin(t) ** 2 + B**2 * cos(t) ** 2)


def kappa(t):
    return A * B / speed(t) ** 3


def kappa_s(t):
    return diff(kappa, t) / speed(t)


def kappa_ss(t):
    return diff(kappa_s, t) / speed(t)


def V(g, dg, ddg, u):
    m = 1 + u * g
    return ddg * u / (2 * m**3) - mpf(5) / 4 * u**2 * dg**2 / m**4 - g**2 / (4 * m**2)


def zeta_plus(a, beta):
    a, beta = mpf(a), mpf(beta)
    f = lambda s: log(s) - log(beta - s) + a * (beta - 2 * s)
    s = findroot(f, (mpf(10) ** -30, beta / 4), solver="anderson")
    return s, -((beta / 2 - s) ** 2)


def zeta_minus(a, beta, gamma):
    a, beta, gamma = mpf(a), mpf(beta), mpf(gamma)

    def f(s):
        k = beta / 2 + s
        return 2 * k * a + log(k - gamma) - log(k + gamma) - log(beta + s) + log(s)

    lo = max(mpf(10) ** -30, gamma - beta / 2 + mpf(10) ** -30)
    s = findroot(f, (lo, beta), solver="anderson")
    return s, -((beta / 2 + s) ** 2)


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


def main():
    L = 4 * quad(speed, [0, pi / 2])
    show("ellipse_length", L)
    for label, t in (("vertex", mpf(0)), ("t_pi_2", pi / 2), ("t_pi_3", pi / 3)):
        show(f"ellipse_{label}_s", quad(speed, [0, t]))
        show(f"ellipse_{label}_gamma", kappa(t))
        show(f"ellipse_{label}_abs_dgamma", abs(kappa_s(t)))
        show(f"ellipse_{label}_ddgamma", kappa_ss(t))
    show("V_vertex_u0.1", V(kappa(0), 0, kappa_ss(0), mpf("0.1")))
    t = pi / 3
    show("V_pi3_u0.1", V(kappa(t), kappa_s(t), kappa_ss(t), mpf("0.1")))
    show("V_pi3_u-0.05", V(kappa(t), kappa_s(t), kappa_ss(t), mpf("-0.05")))

    for a, beta in ((1, 10), (2, 10)):
        s, z = zeta_plus(a, beta)
        show(f"zeta_plus_a{a}_b{beta}", z)
        show(f"deviation_plus_a{a}_b{beta}", s)
    for a, beta, g in ((1, 10, 1), (1, 10, 0), ("0.5", 40, 2)):
        s, z = zeta_minus(a, beta, g)
        show(f"zeta_minus_a{a}_b{beta}_g{g}", z)
        show(f"deviation_minus_a{a}_b{beta}_g{g}", s)

    a, beta, k = mpf(1), mpf(10), mpf("4.9")
    show("g_plus_a1_b10_k4.9", log(beta - 2 * k) - log(beta + 2 * k) + 2 * k * a)
    show("circle_chord_p0.4", 2 * sin(mpf("0.2")))
    show("zeta_minus_lower_a1_b10", -beta**2 / 4 - mpf(2205) / 16 * beta**2 * exp(-beta * a / 2))
    show("zeta_plus_upper_a1_b10", -beta**2 / 4 + 2 * beta**2 * exp(-beta * a / 2))
    show("zeta_plus_width_a2_b10", 2 * beta**2 * exp(-beta * 2 / 2))


if __name__ == "__main__":
    main()
