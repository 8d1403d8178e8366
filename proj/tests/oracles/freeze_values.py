"""Exact oracle for values frozen into the C++ tests.

Everything here uses sympy rationals (times sqrt(pi) where the weight is Gaussian),
computed straight from the weight integrals and a dense Hankel solve. It shares no
code with the library. Run:  python3 tests/oracles/freeze_values.py
"""
import sympy as sp

x = sp.symbols("x")


def gauss(k):
    # integral of x^k exp(-x^2) over R, divided by sqrt(pi)
    if k % 2:
        return sp.Integer(0)
    return sp.factorial2(k - 1) / sp.Integer(2) ** (k // 2) if k else sp.Integer(1)


def gauss_weight_moments(entries, K):
    """entries: 2x2 list of sympy polynomials in x multiplying exp(-x^2)."""
    out = []
    for k in range(K + 1):
        M = sp.zeros(2, 2)
        for i in range(2):
            for j in range(2):
                p = sp.Poly(sp.expand(entries[i][j] * x**k), x)
                M[i, j] = sum(c * gauss(e[0]) for e, c in zip(p.monoms(), p.coeffs()))
        out.append(M)
    return out


def segment(mu, N, m):
    """Monic left MOP via the block row system (pi_0..pi_{k-1}) Delta_{k-1} = -(mu_k..mu_{2k-1})."""
    polys, E = [], []
    for k in range(N + 1):
        if k == 0:
            coeffs = [sp.eye(m)]
        else:
            H = sp.zeros(m * k, m * k)
            for i in range(k):
                for j in range(k):
                    H[i * m:(i + 1) * m, j * m:(j + 1) * m] = mu[i + j]
            R = sp.zeros(m, m * k)
            for j in range(k):
                R[:, j * m:(j + 1) * m] = -mu[k + j]
            X = R * H.inv()
            coeffs = [X[:, i * m:(i + 1) * m] for i in range(k)] + [sp.eye(m)]
        polys.append(coeffs)
        E.append(sp.simplify(sum((coeffs[i] * mu[i + k] for i in range(k + 1)), sp.zeros(m, m))))
    return polys, E


def show(name, val):
    print(f"{name} = {sp.nsimplify(val)}")


if __name__ == "__main__":
    # scalar Hermite / Laguerre spot values
    mu_h = [sp.Matrix([[gauss(k)]]) for k in range(16)]
    _, Eh = segment(mu_h, 6, 1)
    print("hermite E:", [e[0] for e in Eh])
    mu_l = [sp.Matrix([[sp.factorial(k)]]) for k in range(16)]
    Pl, El = segment(mu_l, 4, 1)
    print("laguerre r=0 E:", [e[0] for e in El], "pi_1:", Pl[1][0][0])

    # example2, a = 1 (moments divided by sqrt(pi))
    ex2 = [[1 + x**2, x], [x, sp.Integer(1)]]
    mu2 = gauss_weight_moments(ex2, 12)
    show("ex2 mu0/sqrtpi", mu2[0])
    show("ex2 mu1/sqrtpi", mu2[1])
    P2, E2 = segment(mu2, 4, 2)
    for k in range(1, 5):
        show(f"ex2 E{k}/sqrtpi", E2[k])
    show("ex2 pi0 of P1", P2[1][0])

    # example5_hermite a=1, b=1, c=1, q(x)=x  ->  R11 = 1 + x^2/2
    ex5 = [[1 + x**2 / 2, sp.Integer(1)], [sp.Integer(1), sp.Integer(0)]]
    mu5 = gauss_weight_moments(ex5, 14)
    P5, E5 = segment(mu5, 6, 2)
    for k in range(0, 7):
        show(f"ex5h E{k}/sqrtpi", E5[k])

    # Counterexample a = 1: monic derivatives Q_k = P'_{k+1}/(k+1); test whether
    # x Q_k - Q_{k+1} - beta Q_k - gamma Q_{k-1} can vanish (three-term recurrence of derivatives).
    cex = [[1 + x**4, x**2], [x**2, sp.Integer(1)]]
    muc = gauss_weight_moments(cex, 14)
    Pc, Ec = segment(muc, 6, 2)

    def to_mat_poly(coeffs):
        return sp.Matrix(2, 2, lambda i, j: sum(c[i, j] * x**d for d, c in enumerate(coeffs)))

    Q = []
    for k in range(1, 7):
        Pk = to_mat_poly(Pc[k])
        Q.append(sp.expand(Pk.diff(x) / k))

    def coeff(Mp, d):
        return Mp.applyfunc(lambda e: sp.Poly(e, x).coeff_monomial(x**d) if e != 0 else 0)

    for k in range(1, 5):
        R = sp.expand(x * Q[k] - Q[k + 1])
        beta = coeff(R, k)
        R2 = sp.expand(R - beta * Q[k])
        gamma = coeff(R2, k - 1)
        rem = sp.expand(R2 - gamma * Q[k - 1])
        mx = max(abs(float(c)) for d in range(k) for c in coeff(rem, d))
        print(f"counterexample derivative recurrence remainder k={k}: max|coef| = {mx:.6g}")
