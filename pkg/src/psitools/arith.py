"""Multiplicative arithmetic functions from the factorization tables.

phi, sigma, psi are computed in exact integer arithmetic from the
smallest-prime-factor chain; ratios like psi(n)/n only become floats at
the caller's boundary.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sieve import SieveTables

__all__ = [
    "Factorization",
    "ArithProfile",
    "factor",
    "profile",
    "psi_phi_identity_residual",
    "sqf_decompose",
    "psi_table",
]


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent), primes ascending


@dataclass(frozen=True)
class ArithProfile:
    n: int
    mu: int
    omega: int       # distinct prime factors
    big_omega: int   # prime factors with multiplicity
    phi: int
    sigma: int
    psi: int


def _check_n(n: int, tables: SieveTables) -> int:
    if not 1 <= n <= tables.limit:
        raise ValueError(f"n must be in [1, limit={tables.limit}], got {n}")
    return int(n)


def factor(n: int, tables: SieveTables) -> Factorization:
    """Factor n by walking the smallest-prime-factor chain."""
    n = _check_n(n, tables)
    m = n
    parts: list[tuple[int, int]] = []
    spf = tables.spf
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        parts.append((p, e))
    return Factorization(n=n, factors=tuple(parts))


def profile(n: int, tables: SieveTables) -> ArithProfile:
    """mu, omega, Omega, phi, sigma, psi of n, all exact.

    psi(n) = n * prod_{p|n}(1 + 1/p) = prod p^(e-1) * (p + 1);
    on squarefree n it coincides with sigma.
    """
    fac = factor(n, tables)
    mu = 1
    phi = sigma = psi = 1
    big_omega = 0
    for p, e in fac.factors:
        big_omega += e
        mu = 0 if e > 1 else -mu
        pe1 = p ** (e - 1)
        phi *= pe1 * (p - 1)
        sigma *= (p ** (e + 1) - 1) // (p - 1)
        psi *= pe1 * (p + 1)
    return ArithProfile(n=fac.n, mu=mu, omega=len(fac.factors),
                        big_omega=big_omega, phi=phi, sigma=sigma, psi=psi)


def psi_phi_identity_residual(n: int, tables: SieveTables) -> float:
    """|psi(n)*phi(n)/n^2 - prod_{p|n}(1 - 1/p^2)|.

    Both sides equal the same product of exact rationals, so the result
    measures only float evaluation error (a few ulp).  The left side is
    formed as (psi/n)*(phi/n) to keep intermediates well inside exact
    float64 integer range.
    """
    prof = profile(n, tables)
    lhs = (prof.psi / prof.n) * (prof.phi / prof.n)
    rhs = 1.0
    for p, _ in factor(n, tables).factors:
        rhs *= 1.0 - 1.0 / (p * p)
    return abs(lhs - rhs)


def sqf_decompose(n: int, tables: SieveTables) -> tuple[int, int]:
    """The unique (a, b) with n = a * b^2 and a squarefree."""
    a = b = 1
    for p, e in factor(n, tables).factors:
        if e % 2:
            a *= p
        b *= p ** (e // 2)
    return a, b


def psi_table(x: int, tables: SieveTables) -> np.ndarray:
    """Exact psi(n) for every n in [0, x] as one int64 array.

    Sieve-style evaluation of psi(n) = prod p^(e-1)*(p+1): each prime
    multiplies its multiples by p + 1, then each higher power p^a
    multiplies its multiples by a further p.  Entries 0 and 1 are set
    to 0 and 1.  psi(n) < 4n, so int64 holds every value up to the
    table bound.
    """
    if not 0 <= x <= tables.limit:
        raise ValueError(f"x must be in [0, limit={tables.limit}], got {x}")
    x = int(x)
    vals = np.ones(x + 1, dtype=np.int64)
    for p in tables.primes[tables.primes <= x].tolist():
        vals[p::p] *= p + 1
        power = p * p
        while power <= x:
            vals[power::power] *= p
            power *= p
    vals[0] = 0
    return vals
