"""Frozen reference values for the density, moments, amplitudes and
autocorrelation of single narrow resonances.

Every value comes from direct high-precision quadrature of the defining
integrals; no closed forms from the library are reused.
"""
import json
import sys

import mpmath as mp

mp.mp.dps = 30
I = mp.mpc(0, 1)


def raw_rho(E, x, nu, b):
    z = mp.mpc(1, -x)
    return E ** nu * mp.exp(-b * E) * mp.im(1 / (z ** nu * (z - E)))


def pts(x, b, extra=()):
    p = [0, mp.mpf("1e-6"), mp.mpf("0.1"), 0.5]
    k = mp.mpf(x) / 4
    while k < 0.5:
        p += [1 - k, 1 + k]
        k *= 4
    p += [1, 1.5, 2, 4, 8, 16, 40 / b, mp.inf]
    p += list(extra)
    return sorted(set(p))


def norm(x, nu, b):
    return mp.quad(lambda E: raw_rho(E, x, nu, b), pts(x, b))


def moment(x, nu, b, n, N):
    return mp.quad(lambda E: E ** n * raw_rho(E, x, nu, b), pts(x, b)) / N


def central2(x, nu, b, N, m1):
    return mp.quad(lambda E: (E - m1) ** 2 * raw_rho(E, x, nu, b), pts(x, b)) / N


def amp_real_axis(x, nu, b, t, N):
    emax = 90 / b + 4
    if t == 0:
        return mp.quad(lambda E: raw_rho(E, x, nu, b), pts(x, b)) / N
    step = mp.pi / t
    p = sorted(set(pts(x, b)[:-1] + [k * step for k in range(1, int(emax / step) + 1)] + [emax]))
    f = lambda E: raw_rho(E, x, nu, b) * mp.exp(-I * E * t)
    return mp.quad(f, p) / N


def rho_c(zz, x, nu, b):
    z = mp.mpc(1, -x)
    zc = mp.conj(z)
    s = -I / (z ** nu * (z - zz)) + I / (zc ** nu * (zc - zz))
    return 0.5 * zz ** nu * mp.exp(-b * zz) * s


def amp_ne(x, nu, b, t, N):
    f = lambda y: rho_c(-I * y, x, nu, b) * mp.exp(-t * y)
    return -I * mp.quad(f, [0, 1e-6, 0.01, 0.1, 1, 10, 100, mp.inf]) / N


def autocorr(x, nu, b, y, N):
    f = lambda E: raw_rho(E, x, nu, b) * raw_rho(E + y, x, nu, b)
    p = sorted(set(pts(x, b)[:-1] + [1 - y + d for d in (-x, 0, x)] + [60 / b, mp.inf]))
    p = [q for q in p if q >= 0]
    return 2 * mp.quad(f, p) / N ** 2


def c2(v):
    v = mp.mpc(v)
    return [float(v.real), float(v.imag)]


def main(out):
    res = {}
    cases = []
    for x, nu, b in [(0.1, 0.5, 1.0), (0.01, 0.5, 1.0), (1e-3, 0.25, 2.0), (0.1, 1.0, 0.65), (1e-12, 0.5, 2.0), (0.1, 0.5, 0.1)]:
        x, nu, b = mp.mpf(x), mp.mpf(nu), mp.mpf(b)
        N = norm(x, nu, b)
        m1 = moment(x, nu, b, 1, N)
        m2 = moment(x, nu, b, 2, N)
        var = central2(x, nu, b, N, m1)
        cases.append({
            "x": float(x), "nu": float(nu), "b_s": float(b),
            "norm": float(N), "rho_at_1": float(raw_rho(1, x, nu, b) / N),
            "rho_at_3": float(raw_rho(3, x, nu, b) / N),
            "m1": float(m1), "m2": float(m2), "variance": float(var),
        })
        print("case", x, nu, b, N, var, file=sys.stderr)
    res["density_cases"] = cases

    x, nu, b = mp.mpf("0.1"), mp.mpf("0.5"), mp.mpf(1)
    N = norm(x, nu, b)
    amps = []
    for tau in [0, 0.5, 2, 5, 9]:
        t = mp.mpf(tau) / (2 * x)
        a = amp_real_axis(x, nu, b, t, N) if tau < 9 else None
        z = mp.mpc(1, -x)
        R = (I / 2) * mp.exp(-b * z) / N
        ae = -2 * mp.pi * I * R * mp.exp(-I * z * t)
        ane = amp_ne(x, nu, b, t, N) if tau > 0 else None
        amps.append({"tau": tau, "amplitude": c2(a) if a is not None else None,
                     "exponential": c2(ae), "nonexponential": c2(ane) if ane is not None else None})
        print("amp", tau, a, ane, file=sys.stderr)
    res["amplitudes_x0.1_nu0.5_b1"] = amps

    ac = []
    for y in [0, 0.05, 0.2, 1.0]:
        ac.append({"y": y, "value": float(autocorr(x, nu, b, mp.mpf(y), N))})
    res["autocorr_x0.1_nu0.5_b1"] = ac

    # constant form factor single-pole residue from the two real sum rules
    nu = mp.mpf("0.5")
    z = mp.mpc(1, "-0.1")
    e = mp.exp(I * mp.pi * nu)
    zn = z ** (-nu)
    # unknowns (Re R, Im R): 2 Re(R e) = -sin(pi nu)/pi, 2 Re(R z^-nu) = 0
    A = mp.matrix([[2 * e.real, -2 * e.imag], [2 * zn.real, -2 * zn.imag]])
    rhs = mp.matrix([-mp.sin(mp.pi * nu) / mp.pi, 0])
    sol = mp.lu_solve(A, rhs)
    res["constant_ff_residue_nu0.5_z1-0.1i"] = [float(sol[0]), float(sol[1])]

    with open(out, "w") as fh:
        json.dump(res, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])
