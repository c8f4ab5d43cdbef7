"""Multiplicative arithmetic used throughout the package.

Everything here is exact: counts are ints, densities are `fractions.Fraction`.
The only floating point anywhere is inside numpy sieve buffers, which hold
integers.

The quantities attached to a modulus m are the ones the screening bounds are
built from:

* omega(m)   -- number of distinct prime factors
* Rad(m)     -- product of the distinct prime factors
* W(m)       -- 2**omega(m), the number of squarefree divisors
* phi(m)     -- Euler totient
* theta(m)   -- phi(m)/m, the density of residues coprime to m
* tau(m)     -- prod over primes l | m of (1 - 1/(l-1) + 1/(l-1)**2),
                the density correction appearing in the pair-count main term
                (the l = 2 factor is exactly 1, so even moduli are harmless)
* delta_j    -- 1 - j * sum(1/p) over a set of sieving primes
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, prod

import numpy as np

from .errors import NotAPrimePowerError

__all__ = [
    "ArithmeticProfile",
    "DeltaValue",
    "PrimePowerId",
    "delta",
    "enumerate_prime_powers",
    "factorize",
    "first_primes",
    "is_prime",
    "is_prime_power",
    "iter_prime_powers",
    "primes_up_to",
    "primorial",
    "prime_power_decompose",
    "profile",
    "sqrt_bounds",
    "squarefree_divisors",
]


# --------------------------------------------------------------------------
# primes

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # deterministic below 3.3e24

_prime_cache: np.ndarray = np.array([2, 3, 5, 7], dtype=np.int64)
_prime_cache_limit = 10


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, ascending, as an int64 array (a view of a grown cache)."""
    global _prime_cache, _prime_cache_limit
    if n > _prime_cache_limit:
        limit = max(2 * n, 1 << 16)
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        _prime_cache = np.nonzero(sieve)[0].astype(np.int64)
        _prime_cache_limit = limit
    return _prime_cache[: np.searchsorted(_prime_cache, n, side="right")]


def first_primes(k: int) -> list[int]:
    """The first k primes."""
    if k <= 0:
        return []
    # p_k < k (ln k + ln ln k) for k >= 6; pad generously for small k
    bound = 15 if k < 6 else int(k * (np.log(k) + np.log(np.log(k)))) + 10
    ps = primes_up_to(bound)
    while len(ps) < k:
        bound *= 2
        ps = primes_up_to(bound)
    return [int(p) for p in ps[:k]]


def primorial(k: int) -> int:
    """Product of the first k primes (1 for k = 0)."""
    return prod(first_primes(k))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond any input used here)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite n (Brent's cycle variant of Pollard rho)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p1, e1), (p2, e2), ...), p1 < p2 < ...

    Trial division by small primes, then Miller-Rabin plus Brent rho for any
    large cofactor.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in map(int, primes_up_to(1 << 16)):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _brent_rho(m)
            stack += [d, m // d]
    return tuple(sorted(out.items()))


# --------------------------------------------------------------------------
# profiles

@dataclass(frozen=True)
class ArithmeticProfile:
    """The exact multiplicative statistics of a modulus m."""

    m: int
    factors: tuple[tuple[int, int], ...]
    omega: int
    radical: int
    w: int
    phi: int
    theta: Fraction
    tau: Fraction

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=1 << 16)
def profile(m: int) -> ArithmeticProfile:
    """Compute the ArithmeticProfile of m >= 1."""
    fac = factorize(m)
    primes = [p for p, _ in fac]
    phi = m
    for p in primes:
        phi = phi // p * (p - 1)
    tau = Fraction(1)
    for p in primes:
        tau *= 1 - Fraction(1, p - 1) + Fraction(1, (p - 1) ** 2)
    return ArithmeticProfile(
        m=m,
        factors=fac,
        omega=len(fac),
        radical=prod(primes),
        w=1 << len(fac),
        phi=phi,
        theta=Fraction(phi, m),
        tau=tau,
    )


@dataclass(frozen=True)
class DeltaValue:
    """delta = 1 - j * sum(1/p) over a tuple of sieving primes."""

    j: int
    primes: tuple[int, ...]
    value: Fraction


def delta(j: int, primes: tuple[int, ...] | list[int]) -> DeltaValue:
    """Exact delta_j for a set of sieving primes.  May be <= 0; callers that
    need positivity check ``value > 0`` themselves."""
    ps = tuple(primes)
    if len(set(ps)) != len(ps):
        raise ValueError("sieving primes must be distinct")
    value = 1 - j * sum((Fraction(1, p) for p in ps), Fraction(0))
    return DeltaValue(j=j, primes=ps, value=value)


def squarefree_divisors(m: int) -> list[int]:
    """The 2**omega(m) squarefree divisors of m, sorted ascending."""
    primes = profile(m).primes
    divs = [prod(sub) for k in range(len(primes) + 1) for sub in itertools.combinations(primes, k)]
    return sorted(divs)


# --------------------------------------------------------------------------
# prime powers

@dataclass(frozen=True)
class PrimePowerId:
    """A field order q = p**r."""

    q: int
    p: int
    r: int


def prime_power_decompose(q: int) -> PrimePowerId:
    """Write q as p**r, or raise NotAPrimePowerError."""
    if q < 2:
        raise NotAPrimePowerError(f"{q} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise NotAPrimePowerError(f"{q} is not a prime power")
    p, r = fac[0]
    return PrimePowerId(q=q, p=p, r=r)


def is_prime_power(q: int) -> bool:
    try:
        prime_power_decompose(q)
    except NotAPrimePowerError:
        return False
    return True


_WINDOW = 1 << 21


def _higher_powers(lo: int, hi: int) -> list[tuple[int, int, int]]:
    # all p**r with r >= 2 in [lo, hi]
    out = []
    for p in map(int, primes_up_to(isqrt(hi))):
        q = p * p
        r = 2
        while q <= hi:
            if q >= lo:
                out.append((q, p, r))
            q *= p
            r += 1
    out.sort()
    return out


def _window_omega(a: int, b: int, base: np.ndarray) -> np.ndarray:
    """omega(n) for every n in [a, b), a >= 1.  `base` must hold all primes
    <= sqrt(b - 1)."""
    n = b - a
    count = np.zeros(n, dtype=np.int8)
    work = np.arange(a, b, dtype=np.int64)
    for p in map(int, base):
        if p * p >= b:
            break
        start = (-a) % p
        idx = np.arange(start, n, p)
        if idx.size == 0:
            continue
        count[idx] += 1
        sub = work[idx] // p
        while True:
            mask = sub % p == 0
            if not mask.any():
                break
            sub[mask] //= p
        work[idx] = sub
    count[work > 1] += 1
    return count


def _window_prime_mask(a: int, b: int, base: np.ndarray) -> np.ndarray:
    mask = np.ones(b - a, dtype=bool)
    if a <= 1:
        mask[: min(2 - a, b - a)] = False
    for p in map(int, base):
        if p * p >= b:
            break
        start = max(p * p, -(-a // p) * p)
        if start < b:
            mask[start - a :: p] = False
    return mask


def iter_prime_powers(lo: int, hi: int):
    """Yield (q, p, r, omega(q - 1)) for every prime power q with
    lo <= q <= hi, in ascending order of q.

    Windowed numpy sieves keep this workable up to hi around 10**8 without
    factoring each q - 1 individually.
    """
    lo = max(lo, 2)
    if hi < lo:
        return
    base = primes_up_to(isqrt(hi) + 1)
    higher = _higher_powers(lo, hi)
    hp_i = 0
    for a in range(lo, hi + 1, _WINDOW):
        b = min(a + _WINDOW, hi + 1)
        pmask = _window_prime_mask(a, b, base)
        om = _window_omega(a - 1, b, base)  # omega(n) for n in [a-1, b): covers q-1
        for q in map(int, np.nonzero(pmask)[0] + a):
            while hp_i < len(higher) and higher[hp_i][0] < q:
                hq, hp, hr = higher[hp_i]
                yield hq, hp, hr, int(om[hq - a]) if a <= hq < b else _omega_of(hq - 1)
                hp_i += 1
            yield q, q, 1, int(om[q - a])
    while hp_i < len(higher):
        hq, hp, hr = higher[hp_i]
        yield hq, hp, hr, _omega_of(hq - 1)
        hp_i += 1


def _omega_of(n: int) -> int:
    return len(factorize(n))


def enumerate_prime_powers(lo: int, hi: int, omega: int | None = None) -> list[PrimePowerId]:
    """All prime powers q in the closed range [lo, hi]; if `omega` is given,
    keep only those with omega(q - 1) == omega."""
    return [
        PrimePowerId(q=q, p=p, r=r)
        for q, p, r, om in iter_prime_powers(lo, hi)
        if omega is None or om == omega
    ]


# --------------------------------------------------------------------------
# exact square roots

def sqrt_bounds(q: int, bits: int = 40) -> tuple[Fraction, Fraction]:
    """A tight rational enclosure lo <= sqrt(q) <= hi with hi - lo = 2**-bits."""
    s = isqrt(q << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)
