"""Exact reference values for q-binomials and the q-difference operators (sympy)."""
from sympy import Rational, cancel, expand, nsimplify, prod, simplify, symbols

z = symbols("z")


def qbinom(n, k, q):
    r = q ** (k * (k - 1) // 2)
    for j in range(1, k + 1):
        r *= (1 - q ** (j + n - k)) / (1 - q**j)
    return nsimplify(r)


def extremal(n, q):
    return expand(prod([1 + q ** (j - 1) * z for j in range(1, n + 1)]))


def qdiff(f, n, q):
    return expand(cancel((f - f.subs(z, z / q)) / ((q ** (n - 1) - 1 / q) * z)))


def qdiff_star(f, n, q):
    return expand(cancel((q ** (-n) * f - f.subs(z, z / q)) / (q ** (-n) - 1)))


def reverse(f, n):
    return expand(z**n * f.subs(z, -1 / z))


half = Rational(1, 2)
print("C(3,1;1/2) =", qbinom(3, 1, half), " R_3(1/2) =", extremal(3, half))
print("qdiff((1+z)(1+z/4), 2, 1/2) =", qdiff((1 + z) * (1 + z / 4), 2, half))
print("C(12,5;9/10), C(12,6;9/10) =", [qbinom(12, k, Rational(9, 10)) for k in (5, 6)])
f = 3 - 2 * z + Rational(5, 7) * z**2 + z**3
for q in (Rational(1, 3), Rational(3, 4)):
    n = 3
    lhs = reverse(qdiff(f, n, q), n - 1)
    rhs = expand(-(q ** (1 - n)) * qdiff_star(reverse(f, n), n, q).subs(z, q * z))
    print("reversal identity residual:", simplify(lhs - rhs))
    print("qdiff_star:", qdiff_star(f, n, q), " qdiff:", qdiff(f, n, q))
third = Rational(1, 3)
print("qdiff_star(R_4(1/3)) =", qdiff_star(extremal(4, third), 4, third), " R_3(1/3) =", extremal(3, third))
