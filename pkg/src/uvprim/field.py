"""Finite fields F_q with a fixed multiplicative generator.

Elements are plain ints in ``[0, q)``.  For a prime field this is the residue
itself; for q = p**r an element sum(c_i * x**i) is packed little-endian in
base p as sum(c_i * p**i).  The packed form is what every report, table and
CLI surface uses, so an element prints the same everywhere.

Each field fixes one generator ``gamma`` of the multiplicative group:

* r = 1: the least primitive root mod p (gamma = 1 for q = 2);
* r >= 2: the class of x in F_p[x]/(f), where f is the canonical modulus --
  the first monic polynomial of degree r, in lexicographic order on the
  coefficient tuple read from x**(r-1) down to the constant term, whose root x
  has multiplicative order q - 1.  (That order forces f irreducible, so a
  single order test does both jobs.)

Discrete logs are always taken to base gamma.  ``log_table`` materializes the
full exp/log arrays (numpy, capped at 2**26 entries); ``discrete_log`` is
independent of the table and works by Pohlig-Hellman with baby-step
giant-step, which the tests cross-check against the tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import InvalidDivisorError, LogTableTooLargeError
from .ntcore import ArithmeticProfile, PrimePowerId, prime_power_decompose, profile

__all__ = [
    "LOG_TABLE_CAP",
    "FieldSpec",
    "LogTable",
    "add",
    "build_field",
    "discrete_log",
    "from_coeffs",
    "inv",
    "is_e_free",
    "is_primitive",
    "is_square",
    "log_table",
    "mul",
    "neg",
    "power",
    "primitive_elements",
    "sub",
    "to_coeffs",
]

LOG_TABLE_CAP = 1 << 26


@dataclass(frozen=True)
class FieldSpec:
    """A concrete F_q: prime-power id, modulus (r >= 2 only), generator, and
    the arithmetic profile of q - 1."""

    id: PrimePowerId
    modulus: tuple[int, ...] | None  # little-endian monic coefficients, length r + 1
    gamma: int
    q_minus_1: ArithmeticProfile

    @property
    def q(self) -> int:
        return self.id.q

    @property
    def p(self) -> int:
        return self.id.p

    @property
    def r(self) -> int:
        return self.id.r


# --------------------------------------------------------------------------
# construction

def _poly_mul_mod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    # product of coefficient lists a, b reduced mod the monic f (degree r), mod p
    r = len(f) - 1
    t = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                t[i + j] = (t[i + j] + ai * bj) % p
    for k in range(len(t) - 1, r - 1, -1):
        d = t[k]
        if d:
            t[k] = 0
            for i in range(r):
                t[k - r + i] = (t[k - r + i] - d * f[i]) % p
    t = t[:r]
    return t


def _x_has_full_order(f: list[int], p: int, q: int, prime_divs: tuple[int, ...]) -> bool:
    def poly_pow_x(n: int) -> list[int]:
        base = [0, 1] if len(f) > 2 else [(-f[0]) % p]
        acc = [1]
        while n:
            if n & 1:
                acc = _poly_mul_mod(acc, base, f, p)
            base = _poly_mul_mod(base, base, f, p)
            n >>= 1
        return acc

    one = [1] + [0] * (len(f) - 2)
    if poly_pow_x(q - 1) != one:
        return False
    return all(poly_pow_x((q - 1) // l) != one for l in prime_divs)


@lru_cache(maxsize=256)
def build_field(q: int) -> FieldSpec:
    """Construct F_q (raises NotAPrimePowerError for bad q)."""
    ppid = prime_power_decompose(q)
    p, r = ppid.p, ppid.r
    prof = profile(q - 1)
    if r == 1:
        g = 1
        while True:
            if g % p and all(pow(g, (q - 1) // l, p) != 1 for l in prof.primes):
                break
            g += 1
        return FieldSpec(id=ppid, modulus=None, gamma=g % p, q_minus_1=prof)
    for top in itertools.product(range(p), repeat=r):
        # top = (c_{r-1}, ..., c_0); constant term 0 would make x a zero divisor
        if top[-1] == 0:
            continue
        f = [top[r - 1 - i] for i in range(r)] + [1]
        if _x_has_full_order(f, p, q, prof.primes):
            return FieldSpec(id=ppid, modulus=tuple(f), gamma=p, q_minus_1=prof)
    raise AssertionError(f"no primitive polynomial found for q={q}")  # unreachable


# --------------------------------------------------------------------------
# element arithmetic (packed ints)

def to_coeffs(F: FieldSpec, a: int) -> tuple[int, ...]:
    """Unpack a into its r base-p digits (c_0, ..., c_{r-1})."""
    p = F.p
    out = []
    for _ in range(F.r):
        a, c = divmod(a, p)
        out.append(c)
    return tuple(out)


def from_coeffs(F: FieldSpec, coeffs) -> int:
    p = F.p
    a = 0
    for c in reversed(list(coeffs)):
        a = a * p + c % p
    return a


def add(F: FieldSpec, a: int, b: int) -> int:
    if F.r == 1:
        return (a + b) % F.p
    return from_coeffs(F, (x + y for x, y in zip(to_coeffs(F, a), to_coeffs(F, b))))


def neg(F: FieldSpec, a: int) -> int:
    if F.r == 1:
        return -a % F.p
    return from_coeffs(F, (-x for x in to_coeffs(F, a)))


def sub(F: FieldSpec, a: int, b: int) -> int:
    return add(F, a, neg(F, b))


def mul(F: FieldSpec, a: int, b: int) -> int:
    if F.r == 1:
        return a * b % F.p
    t = _poly_mul_mod(list(to_coeffs(F, a)), list(to_coeffs(F, b)), list(F.modulus), F.p)
    return from_coeffs(F, t)


def power(F: FieldSpec, a: int, n: int) -> int:
    if F.r == 1:
        return pow(a, n, F.p) if n >= 0 else pow(inv(F, a), -n, F.p)
    if n < 0:
        return power(F, inv(F, a), -n)
    acc = 1
    while n:
        if n & 1:
            acc = mul(F, acc, a)
        a = mul(F, a, a)
        n >>= 1
    return acc


def inv(F: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{F.q}")
    if F.r == 1:
        return pow(a, -1, F.p)
    return power(F, a, F.q - 2)


def is_square(F: FieldSpec, a: int) -> bool:
    """Whether a is a square in F_q (0 counts; in characteristic 2 everything is)."""
    if a == 0 or F.p == 2:
        return True
    return power(F, a, (F.q - 1) // 2) == 1


# --------------------------------------------------------------------------
# multiplicative structure

def is_e_free(F: FieldSpec, a: int, e: int) -> bool:
    """a != 0 is e-free: no prime l | e allows writing a as an l-th power.

    Requires e | q - 1.  Only Rad(e) matters, and 1-freeness is vacuous.
    """
    if e < 1 or (F.q - 1) % e:
        raise InvalidDivisorError(f"e={e} does not divide q-1={F.q - 1}")
    if a == 0:
        raise ValueError("freeness is only defined for nonzero elements")
    return all(power(F, a, (F.q - 1) // l) != 1 for l in profile(e).primes)


def is_primitive(F: FieldSpec, a: int) -> bool:
    """a generates the multiplicative group, i.e. a is (q-1)-free."""
    if a == 0:
        return False
    return all(power(F, a, (F.q - 1) // l) != 1 for l in F.q_minus_1.primes)


def primitive_elements(F: FieldSpec) -> list[int]:
    """All phi(q-1) primitive elements, as gamma**m for ascending m coprime
    to q - 1.  This ordering pairs inverses head-to-tail: element k from the
    front is the inverse of element k from the back."""
    n = F.q - 1
    exp = log_table(F).exp
    return [int(exp[m]) for m in range(n) if gcd(m, n) == 1]


# --------------------------------------------------------------------------
# logarithms

@dataclass
class LogTable:
    """Dense base-gamma exp/log arrays: exp[j] = gamma**j for 0 <= j < q-1,
    log[a] = j with exp[j] = a for nonzero a, and log[0] = -1."""

    q: int
    exp: np.ndarray
    log: np.ndarray


def _exp_array_prime(F: FieldSpec) -> np.ndarray:
    q, g, n = F.q, F.gamma, F.q - 1
    exp = np.empty(n, dtype=np.int64)
    m = min(n, 1 << 14)
    x = 1
    for j in range(m):
        exp[j] = x
        x = x * g % q
    if n > m:
        gm = pow(g, m, q)
        for a in range(m, n, m):
            b = min(a + m, n)
            np.mod(exp[a - m : b - m] * gm, q, out=exp[a:b])
    return exp


def _exp_array_ext(F: FieldSpec) -> np.ndarray:
    p, r, n = F.p, F.r, F.q - 1
    exp = np.empty(n, dtype=np.int64)
    m = min(n, 1 << 12)
    x = 1
    for j in range(m):
        exp[j] = x
        x = mul(F, x, F.gamma)
    if n <= m:
        return exp
    # jump in blocks: multiplication by gamma**m is linear on digit vectors
    gm = power(F, F.gamma, m)
    M = np.empty((r, r), dtype=np.int64)
    for i in range(r):
        M[:, i] = to_coeffs(F, mul(F, gm, from_coeffs(F, [int(k == i) for k in range(r)])))
    pw = p ** np.arange(r, dtype=np.int64)
    digits = np.empty((m, r), dtype=np.int64)
    for j in range(m):
        digits[j] = to_coeffs(F, int(exp[j]))
    for a in range(m, n, m):
        b = min(a + m, n)
        digits = digits[: b - a] @ M.T % p
        exp[a:b] = digits @ pw
    return exp


@lru_cache(maxsize=64)
def log_table(F: FieldSpec, cap: int = LOG_TABLE_CAP) -> LogTable:
    if F.q > cap:
        raise LogTableTooLargeError(f"q={F.q} exceeds the log-table cap {cap}")
    exp = _exp_array_prime(F) if F.r == 1 else _exp_array_ext(F)
    log = np.full(F.q, -1, dtype=np.int64)
    log[exp] = np.arange(F.q - 1, dtype=np.int64)
    return LogTable(q=F.q, exp=exp, log=log)


def _bsgs(F: FieldSpec, h: int, base: int, order: int) -> int:
    # log of h to `base`, where base has the given (small) order
    m = isqrt(order - 1) + 1
    baby = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = mul(F, x, base)
    giant = inv(F, x)  # base**-m
    y = h
    for i in range(m):
        if y in baby:
            return (i * m + baby[y]) % order
        y = mul(F, y, giant)
    raise ValueError("element is outside the subgroup")  # pragma: no cover


def discrete_log(F: FieldSpec, a: int) -> int:
    """The exponent j in [0, q-1) with gamma**j = a, for nonzero a.

    Pohlig-Hellman over the factorization of q - 1, with BSGS in each
    prime-order subgroup; no dense table required.
    """
    if a == 0:
        raise ValueError("0 has no discrete log")
    n = F.q - 1
    if n == 1:
        return 0
    residues, moduli = [], []
    for l, e in F.q_minus_1.factors:
        le = l**e
        g_l = power(F, F.gamma, n // l)  # order l
        x = 0
        for k in range(e):
            # peel the digit of the log at l**k
            t = power(F, mul(F, a, power(F, F.gamma, -x)), n // l ** (k + 1))
            d = _bsgs(F, t, g_l, l)
            x += d * l**k
        residues.append(x)
        moduli.append(le)
    # CRT
    x, m = 0, 1
    for r_i, m_i in zip(residues, moduli):
        t = (r_i - x) * pow(m, -1, m_i) % m_i
        x += m * t
        m *= m_i
    return x % n
