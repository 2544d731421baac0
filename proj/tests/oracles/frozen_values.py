"""Reference values for the unit tests, computed at 40 digits with mpmath.

Every quantity is obtained from first principles (matrix exponentials of the
two-mode generator, quadrature integrals of the bath noise, covariance
determinants) rather than from the closed forms the library implements.
Run: python3 tests/oracles/frozen_values.py
"""
import mpmath as mp

mp.mp.dps = 40

W1, W2, K, G, T = mp.mpf("1.0"), mp.mpf("1.2"), mp.mpf("0.2"), mp.mpf("0.5"), mp.mpf("0.3")
TIME = mp.mpf("1.7")


def nbar(lam, temp):
    return 1 / (mp.e ** (lam / temp) - 1)


def generator():
    h = mp.matrix([[W1, K], [K, W2]])
    return -1j * h - G / 2 * mp.eye(2)


def transfer(t):
    m = mp.expm(generator() * t)
    return m[0, 0], m[0, 1]


def psi(t):
    # Bath force j is thermal at normal frequency lambda_j; the mode-1 response
    # to it is (expm(Ls) U)_{1j}. Integrate gamma |.|^2 (2 n_j + 1) over s.
    h = mp.matrix([[W1, K], [K, W2]])
    lam, u = mp.eighe(h)
    occ = [nbar(lam[j], T) for j in range(2)]

    def integrand(s):
        m = mp.expm(generator() * s) * u
        return sum(G * abs(m[0, j]) ** 2 * (2 * occ[j] + 1) for j in range(2))

    return mp.quad(integrand, [0, t]), lam, occ


def logdet_half(mat):
    return mp.log(mp.det(mat)) / 2


def gain(c):
    return mp.matrix([[mp.re(c), -mp.im(c)], [mp.im(c), mp.re(c)]])


def main():
    c1, c2 = transfer(TIME)
    p, lam, occ = psi(TIME)
    print("lambda", mp.nstr(lam[1], 20), mp.nstr(lam[0], 20), "nbar", mp.nstr(occ[1], 20), mp.nstr(occ[0], 20))
    print("c1", mp.nstr(c1, 20), "c2", mp.nstr(c2, 20), "psi", mp.nstr(p, 20))

    # Heterodyne, coherent inputs with input covariance (n/2) I, noise = vacuum output + 1/4.
    n1, n2 = mp.mpf(2), mp.mpf(1)
    a1, a2 = gain(c1), gain(c2)
    noise = (abs(c1) ** 2 / 4 + abs(c2) ** 2 / 4 + p / 4 + mp.mpf(1) / 4) * mp.eye(2)
    s1 = a1 * (n1 / 2) * a1.T
    s2 = a2 * (n2 / 2) * a2.T
    tot = noise + s1 + s2
    print("het sum", mp.nstr(logdet_half(tot) - logdet_half(noise), 20))
    print("het r1", mp.nstr(logdet_half(noise + s1) - logdet_half(noise), 20))
    print("het r2", mp.nstr(logdet_half(noise + s2) - logdet_half(noise), 20))

    # Homodyne of Re a1, squeezed inputs r1, r2 along Re a.
    r1, r2 = mp.mpf("0.3"), mp.mpf("0.2")
    sq = lambda r: mp.matrix([[mp.e ** (-2 * r) / 4, 0], [0, mp.e ** (2 * r) / 4]])
    cov = a1 * sq(r1) * a1.T + a2 * sq(r2) * a2.T + p / 4 * mp.eye(2)
    nz = cov[0, 0]
    x = n1 - mp.sinh(r1) ** 2
    y = n2 - mp.sinh(r2) ** 2
    g1 = mp.re(c1) ** 2 * x
    g2 = mp.re(c2) ** 2 * y
    print("hom sum", mp.nstr(mp.log(1 + (g1 + g2) / nz) / 2, 20))
    print("hom r1", mp.nstr(mp.log(1 + g1 / nz) / 2, 20))
    print("hom r2", mp.nstr(mp.log(1 + g2 / nz) / 2, 20))

    # Entropies.
    w = [mp.mpf("0.5"), mp.mpf("0.3"), mp.mpf("0.2")]
    print("S(diag .5 .3 .2)", mp.nstr(-sum(q * mp.log(q) for q in w), 20))
    v = [mp.mpf("0.25")] * 4
    print("D(diag .5 .3 .2 || I/3)", mp.nstr(sum(q * (mp.log(q) - mp.log(mp.mpf(1) / 3)) for q in w), 20))


if __name__ == "__main__":
    main()
