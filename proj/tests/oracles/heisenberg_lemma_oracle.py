"""Brute-force residuals (r1, r2, r3) for the commutator root of the finite
Heisenberg representation, computed at 50 digits from the closed-form
spectral decompositions (Fourier basis for the cyclic shift, the standard
basis for the clock matrix).

    T e_x = e_{x+1 mod N},  M = diag(w^x),  C = w^{-1} I,  w = exp(2 pi i / N)
    U = T^{1/a}, V = M^{1/b} (principal branch, angles in (-pi, pi])
    W = U V U^-1 V^-1
    r1 = ||W^{ab} - C||,  r2 = ||UW - WU||,  r3 = ||VW - WV||

Norms are induced 1-norms (maximum column sum). Prints one line per N.
"""

import sys

import mpmath as mp

mp.mp.dps = 50


def principal_angle(k, n):
    """Angle of exp(2 pi i k / n), reduced to (-pi, pi] exactly."""
    q = mp.mpf(k % n) / n
    if q > mp.mpf(1) / 2:
        q -= 1
    return 2 * mp.pi * q


def one_norm(A):
    return max(sum(abs(A[i, j]) for i in range(A.rows)) for j in range(A.cols))


def residuals(n, a, b):
    w = mp.exp(2j * mp.pi / n)
    # Fourier vectors f_k(x) = w^{kx} / sqrt(n) satisfy T f_k = w^{-k} f_k.
    F = mp.matrix(n, n)
    for x in range(n):
        for k in range(n):
            F[x, k] = mp.exp(2j * mp.pi * k * x / n) / mp.sqrt(n)
    U_diag = mp.matrix(n, n)
    for k in range(n):
        U_diag[k, k] = mp.exp(1j * principal_angle(-k, n) / a)
    U = F * U_diag * F.H
    V = mp.matrix(n, n)
    for x in range(n):
        V[x, x] = mp.exp(1j * principal_angle(x, n) / b)
    W = U * V * U.H * V.H
    C = mp.eye(n) * mp.exp(-2j * mp.pi / n)
    Wp = mp.eye(n)
    for _ in range(a * b):
        Wp = Wp * W
    return one_norm(Wp - C), one_norm(U * W - W * U), one_norm(V * W - W * V)


def main():
    a, b = 2, 2
    for n in (2, 8, 16):
        r1, r2, r3 = residuals(n, a, b)
        print(f"N={n} a={a} b={b} r1={mp.nstr(r1, 17)} r2={mp.nstr(r2, 17)} r3={mp.nstr(r3, 17)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
