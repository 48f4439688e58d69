"""Independent high-precision oracle for values frozen into the C++ tests.

Uses mpmath only; shares no code with the library. Run:
    python3 tests/oracles/derived_values.py
"""
from itertools import combinations

from mpmath import mp, mpf, sqrt, sin, pi, floor, frac

mp.dps = 40


def beta(b):
    return (-b + sqrt(b * b + 4)) / 2


def u(b, r):
    d = sqrt(b * b + 4)
    return 2 * d * (r - (frac(r * beta(b)) - mpf(1) / 2) / d)


def fib(n):
    a, c = 0, 1
    for _ in range(n):
        a, c = c, a + c
    return a


def zeckendorff_bruteforce(n):
    idx = [k for k in range(2, 40) if fib(k) <= n]
    for size in range(1, len(idx) + 1):
        for combo in combinations(idx, size):
            if all(b - a >= 2 for a, b in zip(combo, combo[1:])) and sum(fib(k) for k in combo) == n:
                yield combo


def sudler(alpha, n):
    out = mpf(1)
    for r in range(1, n + 1):
        out *= 2 * abs(sin(pi * r * alpha))
    return out


def convergents(b, n):
    q = [1, b]
    while len(q) <= n:
        q.append(b * q[-1] + q[-2])
    return q


def block_eps(b, offset, level):
    # (-1)^level q_level times the signed distance of offset*beta to the nearest integer
    x = offset * beta(b)
    d = x - floor(x + mpf(1) / 2)
    q = convergents(b, level)[level]
    return (-1) ** level * q * d


def ostrowski_valid(digits, b):
    if digits and not (0 <= digits[0] < b):
        return False
    if any(not (0 <= c <= b) for c in digits):
        return False
    return all(not (digits[i + 1] == b and digits[i] != 0) for i in range(len(digits) - 1))


def main():
    print("beta(5) =", mp.nstr(beta(5), 30))
    print("beta(6) =", mp.nstr(beta(6), 30))
    print("2 sin(pi phi) =", mp.nstr(2 * sin(pi * beta(1)), 30))
    print("u_1(1) =", mp.nstr(u(1, 1), 30), " sqrt5+2 =", mp.nstr(sqrt(5) + 2, 30))
    print("u_6(1) =", mp.nstr(u(6, 1), 30))
    print("root+ b=1 =", mp.nstr((u(1, 1) - 1) / (2 * sqrt(5)), 30))
    print("root+ b=6 =", mp.nstr((u(6, 1) - 1) / (2 * sqrt(40)), 30),
          " (6+beta)/sqrt40 =", mp.nstr((6 + beta(6)) / sqrt(40), 30))
    print("2pi/sqrt5 =", mp.nstr(2 * pi / sqrt(5), 30))
    print("C1*sqrt5/(2pi) with C1=2.406152:", mp.nstr(mpf("2.406152") * sqrt(5) / (2 * pi), 12))
    print("C6*sqrt40/(2pi) with C6=1.089429:", mp.nstr(mpf("1.089429") * sqrt(40) / (2 * pi), 12))
    print("zeckendorff(100) =", list(zeckendorff_bruteforce(100)))
    print("zeckendorff(4) =", list(zeckendorff_bruteforce(4)))
    print("P_31(beta5) =", mp.nstr(sudler(beta(5), 31), 20))
    print("P_83(beta5) =", mp.nstr(sudler(beta(5), 83), 20))
    print("P_1677(beta6) =", mp.nstr(sudler(beta(6), 1677), 20))
    print("P_6(1/7) =", mp.nstr(sudler(mpf(1) / 7, 6), 20))
    print("eps(N=31, b=5, level 1) =", mp.nstr(block_eps(5, 26, 1), 20))
    for a in range(3):
        print("eps(N=83, b=5, level 2, a=%d) =" % a, mp.nstr(block_eps(5, 26 * a, 2), 20))
    print("eps(N=83, b=5, level 1) =", mp.nstr(block_eps(5, 78, 1), 20))
    valid = [(c1, c2, c3) for c1 in range(6) for c2 in range(6) for c3 in range(6) if ostrowski_valid([c1, c2, c3], 5)]
    print("valid 3-digit b=5 sequences:", len(valid))
    print("u_5(1) =", mp.nstr(u(5, 1), 30))
    print("beta(2) =", mp.nstr(beta(2), 30))


if __name__ == "__main__":
    main()
