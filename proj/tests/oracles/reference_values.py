#!/usr/bin/env python3
"""Arbitrary-precision reference values frozen into the C++ unit tests.

Evaluates the force-expansion coefficients, mean fields, effective response
and drift eigenvalues directly from their scalar definitions with mpmath at
120 significant digits. Nothing here shares code with the C++ library.

    python3 tests/oracles/reference_values.py
"""
import mpmath as mp

mp.mp.dps = 120
G = mp.mpf("6.67430e-11")
HBAR = mp.mpf("1.054571817e-34")
KB = mp.mpf("1.380649e-23")
C = mp.mpf("299792458")
TP = 2 * mp.pi


def fig3():
    return dict(
        m1=mp.mpf("5e-14"), m2=mp.mpf("9.5e-19"), dx=mp.mpf("1e-9"), dy=mp.mpf("2.9e-4"),
        T=mp.mpf("4e-3"),
        x=dict(w=TP * mp.mpf("1e4"), g=TP * mp.mpf("100"), wc=TP * mp.mpf("3.7e10"),
               D=TP * mp.mpf("1e4"), k=mp.mpf("9e8"), L=mp.mpf("1e-3"), E=mp.mpf("4e10")),
        y=dict(w=TP * mp.mpf("9.5e3"), g=TP * mp.mpf("3e-3"), wc=TP * mp.mpf("3.7e15"),
               D=TP * mp.mpf("1.5e-49"), k=mp.mpf("9e5"), L=mp.mpf("1.5e-16"), E=mp.mpf("8e14")),
    )


def fig4():
    L = mp.mpf("1e-3")
    k = mp.pi * C / (2 * L * mp.mpf("1.07e4"))
    wc = TP * C / mp.mpf("1064e-9")
    D = TP * mp.mpf("1e7")
    P = mp.mpf("1e-2")
    E = mp.sqrt(2 * k * P / (HBAR * (wc - D)))
    ax = dict(w=TP * mp.mpf("1e7"), g=TP * mp.mpf("100"), wc=wc, D=D, k=k, L=L, E=E)
    return dict(m1=mp.mpf("5e-10"), m2=mp.mpf("5e-10"), dx=mp.mpf("1e-6"), dy=mp.mpf("1e-6"),
                T=mp.mpf("4e-3"), x=dict(ax), y=dict(ax))


def table1(p, s, x2):
    h = mp.sqrt((x2 - s * p["dx"]) ** 2 + p["dy"] ** 2)
    g = G * p["m1"] * p["m2"] / h**3
    return dict(
        c0x=g * (s * p["dx"] - x2),
        c0y=g * p["dy"],
        c1x=g / h**2 * (3 * (x2 - s * p["dx"]) ** 2 - h**2),
        c1y=g / h**2 * (3 * p["dy"] ** 2 - h**2),
        c2=-3 * g / h**2 * (s * p["dx"] - x2) * p["dy"],
    )


def farfield(p, s):
    d = mp.sqrt(p["dx"] ** 2 + p["dy"] ** 2)
    k = G * p["m1"] * p["m2"]
    return dict(c1x=k * (2 * p["dx"] ** 2 - p["dy"] ** 2) / d**5,
                c1y=k * (2 * p["dy"] ** 2 - p["dx"] ** 2) / d**5,
                c2=-3 * k * p["dx"] * p["dy"] * s / d**5)


def nphot(a):
    return a["E"] ** 2 / (a["k"] ** 2 + a["D"] ** 2)


def response(p, a, c1, w):
    chi = a["wc"] / a["L"]
    n = nphot(a)
    den = (a["k"] ** 2 + a["D"] ** 2 + w**2) ** 2 - 4 * a["D"] ** 2 * w**2
    w2 = a["w"] ** 2 + 2 * HBAR * chi**2 * n * a["D"] * (w**2 - a["k"] ** 2 - a["D"] ** 2) / (p["m2"] * den) - c1 / p["m2"]
    ge = a["g"] + 4 * HBAR * chi**2 * n * a["D"] * a["k"] / (p["m2"] * den)
    return w2, ge


def drift(p, ff, c2):
    """8x8 drift in (x, p, y, py, Xx, Yx, Xy, Yy), quadratures with vacuum variance 1/2."""
    A = mp.zeros(8, 8)
    for k, name in enumerate("xy"):
        a = p[name]
        c1 = ff["c1" + name]
        chi = a["wc"] / a["L"]
        abar = mp.sqrt(nphot(a))
        xz = mp.sqrt(HBAR / (2 * p["m2"] * a["w"]))
        g = 2 * chi * abar * xz
        i, o = 2 * k, 4 + 2 * k
        A[i, i + 1] = a["w"]
        A[i + 1, i] = -(a["w"] - c1 / (p["m2"] * a["w"]))
        A[i + 1, i + 1] = -a["g"]
        A[i + 1, o] = g
        A[o, o] = -a["k"]
        A[o, o + 1] = a["D"]
        A[o + 1, o] = -a["D"]
        A[o + 1, o + 1] = -a["k"]
        A[o + 1, i] = g
    cross = c2 / (p["m2"] * mp.sqrt(p["x"]["w"] * p["y"]["w"]))
    A[1, 2] = cross
    A[3, 0] = cross
    return A


def show(label, v):
    print(f"{label:40s} {mp.nstr(v, 20)}")


def main():
    p = fig3()
    d = mp.sqrt(p["dx"] ** 2 + p["dy"] ** 2)
    ex = table1(p, 1, 0)
    for key, v in ex.items():
        show(f"fig3 exact alpha {key}", v)
    show("fig3 -G m1 m2 / d^3", -G * p["m1"] * p["m2"] / d**3)
    ff = farfield(p, 1)
    show("fig3 farfield alpha c2", ff["c2"])
    x2 = mp.mpf("2e-13")
    a, b = table1(p, 1, x2), table1(p, -1, x2)
    show("fig3 exact x2=2e-13 alpha c1x", a["c1x"])
    show("fig3 exact x2=2e-13 beta c1x", b["c1x"])
    show("fig3 exact x2=2e-13 classical c1x", (a["c1x"] + b["c1x"]) / 2)
    show("fig3 steady x2 alpha", G * p["m1"] * p["dx"] / (p["x"]["w"] ** 2 * d**3))
    show("fig3 steady y2", G * p["m1"] * p["dy"] / (p["y"]["w"] ** 2 * d**3))
    nx = nphot(p["x"])
    show("fig3 |a_x|^2", nx)
    show("fig3 trap recenter x", -HBAR * p["x"]["wc"] / p["x"]["L"] * nx / (p["m2"] * p["x"]["w"] ** 2))
    show("fig3 |a_y|^2", nphot(p["y"]))
    w2, ge = response(p, p["y"], ff["c1y"], p["y"]["w"])
    show("fig3 y omega_eff^2(omega_y)", w2)
    show("fig3 y gamma_eff(omega_y)", ge)
    for scen, c2 in (("quantum", ff["c2"]), ("classical", mp.mpf(0))):
        ev = mp.eig(drift(p, ff, c2))[0]
        show(f"fig3 {scen} max Re(eig)", max(mp.re(e) for e in ev))

    q = fig4()
    ff4 = farfield(q, 1)
    show("fig4 farfield alpha c1x", ff4["c1x"])
    show("fig4 farfield alpha c2", ff4["c2"])
    show("fig4 drift cross entry", ff4["c2"] / (q["m2"] * mp.sqrt(q["x"]["w"] * q["y"]["w"])))
    show("fig4 kappa", q["x"]["k"])
    show("fig4 drive E", q["x"]["E"])
    show("fig4 optomech rate 2 chi |a| xzpf",
         2 * q["x"]["wc"] / q["x"]["L"] * mp.sqrt(nphot(q["x"])) * mp.sqrt(HBAR / (2 * q["m2"] * q["x"]["w"])))

    r = mp.mpf("0.5")
    x = mp.cosh(2 * r)
    f = (x + 1) / 2 * mp.log((x + 1) / 2) - (x - 1) / 2 * mp.log((x - 1) / 2)
    show("two-mode squeezed r=0.5 discord (nats)", f)


if __name__ == "__main__":
    main()
