"""40-digit reference values for the xi kernel and its even moments (mpmath)."""
from mpmath import exp, factorial, linspace, mp, mpf, pi, quad

mp.dps = 40


def kernel(t):
    e4 = exp(4 * t)
    e5 = exp(5 * t)
    return sum(e5 * (2 * k**4 * pi**2 * e4 - 3 * k**2 * pi) * exp(-(k**2) * pi * e4) for k in range(1, 9))


print("kernel(0) =", kernel(mpf(0)))
for n in range(11):
    b = quad(lambda t: t ** (2 * n) * kernel(t), linspace(0, 1.2, 13))
    f = factorial(n) * b / factorial(2 * n)
    print(n, mp.nstr(b, 30), mp.nstr(f, 25))
