"""Independent high-precision oracle for the spin-torsional coupling.

Sorted eigenvalues of the 3x3 NV Hamiltonian at 40 digits; below the
ground-state anticrossing field the levels never cross on (0, pi), so the
transition E_-1 - E_0 is the middle minus the lowest eigenvalue.
"""
import mpmath as mp

mp.mp.dps = 40
hbar = mp.mpf("1.054571817e-34")
mu_b = mp.mpf("9.2740100783e-24")
D = 2 * mp.pi * mp.mpf("2.8e9")
a, b, rho = mp.mpf("40e-9"), mp.mpf("20e-9"), mp.mpf(3500)
mass = mp.mpf(4) / 3 * mp.pi * a * b * b * rho
inertia = mass * (a * a + b * b) / 5
omega = 2 * mp.pi * mp.mpf("2.52e6")


def gap(field, theta):
    delta = -2 * mu_b * field / hbar
    off = delta * mp.sin(theta) / mp.sqrt(2)
    h = mp.matrix([[D - delta * mp.cos(theta), off, 0],
                   [off, 0, off],
                   [0, off, D + delta * mp.cos(theta)]])
    e = sorted(mp.eigsy(h, eigvals_only=True))
    return e[1] - e[0]


def coupling_hz(field, theta):
    slope = mp.diff(lambda th: gap(field, th), theta)
    return mp.sqrt(hbar / (2 * inertia * omega)) * slope / (2 * mp.pi)


if __name__ == "__main__":
    print("mass", mp.nstr(mass, 12), "inertia", mp.nstr(inertia, 12))
    for field, theta in [("0.05", mp.pi / 4), ("0.05", "0.3"), ("0.02", "1.0"),
                         ("0.08", "2.0"), ("0.05", "2.5")]:
        f = mp.mpf(field)
        t = mp.mpf(theta) if isinstance(theta, str) else theta
        print(field, mp.nstr(t, 17), mp.nstr(coupling_hz(f, t), 17),
              mp.nstr(gap(f, t) / (2 * mp.pi), 17))
