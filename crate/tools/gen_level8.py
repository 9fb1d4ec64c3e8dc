#!/usr/bin/env python3
"""Generate q-expansion files for the level-8 newforms of weight 4 and 6.

Weight 4: eta(2z)^4 eta(4z)^4.
Weight 6: S_6(Gamma0(8)) is 3-dimensional and spanned by f4 * E for E in the
three weight-2 Eisenstein series E2(z) - d E2(dz), d in {2, 4, 8}.  The
newform is the T_3 eigenvector whose eigenvalue differs from that of the
level-4 oldform eta(2z)^12.

Usage: gen_level8.py OUTDIR [M]
"""
import json
import sys
from fractions import Fraction

import sympy


def eta_power(step, power, n):
    # prod_{m>=1} (1 - q^{step m})^power, truncated to q^n (exclusive)
    c = [0] * n
    c[0] = 1
    for m in range(1, n):
        if step * m >= n:
            break
        for _ in range(power):
            for k in range(n - 1, step * m - 1, -1):
                c[k] -= c[k - step * m]
    return c


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(0, n - i):
                out[i + j] += x * b[j]
    return out


def shift(a, s, n):
    return ([0] * s + a)[:n]


def sigma(m):
    return sum(d for d in range(1, m + 1) if m % d == 0)


def e2(n):
    return [1] + [-24 * sigma(m) for m in range(1, n)]


def scale_arg(a, d, n):
    out = [0] * n
    for i in range(0, n):
        if i * d < n:
            out[i * d] = a[i]
    return out


def hecke(a, p, k, n_out):
    return [a[p * m] + (p ** (k - 1) * a[m // p] if m % p == 0 else 0) for m in range(n_out)]


def main():
    outdir = sys.argv[1]
    M = int(sys.argv[2]) if len(sys.argv) > 2 else 1000
    N = 3 * M + 10
    f4 = shift(mul(eta_power(2, 4, N), eta_power(4, 4, N), N), 1, N)
    e = e2(N)
    basis = []
    for d in (2, 4, 8):
        eis = [x - d * y for x, y in zip(e, scale_arg(e, d, N))]
        basis.append(mul(f4, eis, N))
    # T_3 on the span, using the first coefficients to solve
    rows = 8
    B = sympy.Matrix([[b[m] for m in range(1, rows + 1)] for b in basis]).T
    assert B.rank() == 3
    T = []
    for b in basis:
        tb = hecke(b, 3, 6, rows + 1)
        sol = B.solve_least_squares(sympy.Matrix(tb[1 : rows + 1]))
        assert B * sol == sympy.Matrix(tb[1 : rows + 1])
        T.append(list(sol))
    T = sympy.Matrix(T).T
    g = shift(eta_power(2, 12, N), 1, N)
    old_a3 = g[3]
    new_vecs = [
        (ev, vecs)
        for ev, mult, vecs in T.eigenvects()
        if ev != old_a3
    ]
    assert len(new_vecs) == 1 and len(new_vecs[0][1]) == 1
    v = new_vecs[0][1][0]
    f6 = [sum(Fraction(v[i]) * basis[i][m] for i in range(3)) for m in range(M + 1)]
    lead = f6[1]
    f6 = [x / lead for x in f6]
    assert all(x.denominator == 1 for x in f6)
    f6 = [int(x) for x in f6]
    for label, weight, coeffs, oracle in (
        ("8.4.a.a", 4, f4[1 : M + 1], "eta(2z)^4 eta(4z)^4, integer q-series product"),
        (
            "8.6.a.a",
            6,
            f6[1 : M + 1],
            "T_3-eigenvector in span{eta(2z)^4 eta(4z)^4 * (E2(z) - d E2(dz)) : d=2,4,8} "
            "with eigenvalue != a_3(eta(2z)^12)",
        ),
    ):
        doc = {
            "label": label,
            "weight": weight,
            "level": 8,
            "source_oracle": oracle,
            "coeffs": coeffs,
        }
        with open(f"{outdir}/level8_weight{weight}.json", "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
        print(label, coeffs[:12])


if __name__ == "__main__":
    main()
