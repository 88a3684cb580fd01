"""Exact arithmetic: cyclotomic numbers, polynomials in n, rational functions.

Every expectation computed by the engine is an element of Q(zeta_N)(n).  Rationals
are plain :class:`fractions.Fraction` objects.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both lowest-degree first, den monic
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def _phi_coeffs(N: int) -> tuple[int, ...]:
    if N < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (N - 1) + [1]
    for d in _divisors(N)[:-1]:
        poly = _int_poly_divexact(poly, list(_phi_coeffs(d)))
    return tuple(poly)


def cyclotomic_polynomial(N: int) -> "Polynomial":
    """Phi_N as a polynomial with rational coefficients (lowest degree first)."""
    return Polynomial([CycloNumber.rational(c) for c in _phi_coeffs(N)])


def _reduce_mod_phi(coeffs: list[Fraction], N: int) -> tuple[Fraction, ...]:
    phi = _phi_coeffs(N)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        top = c[i]
        if top:
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    c[base + j] -= top * phi[j]
        c[i] = ZERO
    c = c[:deg] + [ZERO] * (deg - len(c))
    return tuple(c)


@lru_cache(maxsize=None)
def _ramanujan_sum(N: int, j: int) -> int:
    g = math.gcd(j, N)
    return sum(_mobius(N // d) * d for d in _divisors(g))


class CycloNumber:
    """An element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Iterable):
        if N < 1:
            raise ValueError("conductor must be positive")
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        d = len(_phi_coeffs(N)) - 1
        if len(cs) != d:
            cs = list(_reduce_mod_phi(cs, N))
        self.N = N
        self.coeffs = tuple(cs)

    # -- constructors
    @classmethod
    def rational(cls, q, N: int = 1) -> "CycloNumber":
        d = len(_phi_coeffs(N)) - 1
        return cls(N, [Fraction(q)] + [ZERO] * (d - 1))

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycloNumber":
        k %= N
        cs = [ZERO] * (k + 1)
        cs[k] = ONE
        return cls(N, cs)

    # -- structure
    def lift(self, M: int) -> "CycloNumber":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"conductor {self.N} does not divide {M}")
        step = M // self.N
        cs = [ZERO] * (step * (len(self.coeffs) - 1) + 1)
        for j, a in enumerate(self.coeffs):
            cs[j * step] = a
        return CycloNumber(M, cs)

    def to_common_conductor(self, other: "CycloNumber") -> tuple["CycloNumber", "CycloNumber"]:
        M = _lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def conj(self) -> "CycloNumber":
        N = self.N
        cs = [ZERO] * N
        for j, a in enumerate(self.coeffs):
            cs[(-j) % N] += a
        return CycloNumber(N, cs)

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_N)/Q}(x) / phi(N); independent of the chosen conductor."""
        d = len(self.coeffs)
        return sum((a * _ramanujan_sum(self.N, j) for j, a in enumerate(self.coeffs) if a), ZERO) / d

    # -- arithmetic
    @staticmethod
    def _coerce(x) -> "CycloNumber":
        if isinstance(x, CycloNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CycloNumber.rational(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = (self, other) if self.N == other.N else self.to_common_conductor(other)
        return CycloNumber(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.N, [x * other for x in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = (self, other) if self.N == other.N else self.to_common_conductor(other)
        if b.is_rational():
            return CycloNumber(a.N, [x * b.coeffs[0] for x in a.coeffs])
        if a.is_rational():
            return CycloNumber(a.N, [x * a.coeffs[0] for x in b.coeffs])
        prod = [ZERO] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloNumber(a.N, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return CycloNumber.rational(1 / self.coeffs[0], self.N)
        d = len(self.coeffs)
        # column j of M = coordinates of x * zeta^j; solve M y = e_0
        cols = [(self * CycloNumber.zeta(self.N, j)).coeffs for j in range(d)]
        rows = [[cols[j][i] for j in range(d)] + [ONE if i == 0 else ZERO] for i in range(d)]
        y = _solve(rows, d)
        return CycloNumber(self.N, y)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_N)")
            return CycloNumber(self.N, [x / other for x in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.rational(1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        if self.N == other.N:
            return self.coeffs == other.coeffs
        a, b = self.to_common_conductor(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized_trace())

    def __bool__(self):
        return not self.is_zero()

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.N)
        return sum(float(a) * z**j for j, a in enumerate(self.coeffs) if a) + 0j

    def __repr__(self):
        if self.is_rational():
            return f"CycloNumber({self.coeffs[0]})"
        terms = []
        for j, a in enumerate(self.coeffs):
            if a:
                terms.append(str(a) if j == 0 else f"{a}*z{self.N}^{j}")
        return "CycloNumber(" + " + ".join(terms) + ")"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for j, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if j == 0:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"({a})*{mono}")
        return "+".join(terms).replace("+-", "-")


def _solve(rows: list[list[Fraction]], d: int) -> list[Fraction]:
    for col in range(d):
        piv = next(r for r in range(col, d) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(d):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[i][d] for i in range(d)]


def as_cyclo(x) -> CycloNumber:
    if isinstance(x, CycloNumber):
        return x
    return CycloNumber.rational(x)


def to_float(x) -> complex:
    return as_cyclo(x).to_complex()


# ---------------------------------------------------------------- polynomials

class Polynomial:
    """Univariate polynomial in n with CycloNumber coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_cyclo(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def n(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def linear_root(cls, j) -> "Polynomial":
        """The monic factor (n - j)."""
        return cls([-as_cyclo(j), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> CycloNumber:
        return self.coeffs[-1]

    def __add__(self, other):
        other = _as_poly(other)
        m = max(len(self.coeffs), len(other.coeffs))
        zero = CycloNumber.rational(0)
        a = self.coeffs + (zero,) * (m - len(self.coeffs))
        b = other.coeffs + (zero,) * (m - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [CycloNumber.rational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        inv_lead = other.lead().inverse()
        if len(rem) - 1 < dd:
            return Polynomial(), self
        quot = [CycloNumber.rational(0)] * (len(rem) - dd)
        for i in range(len(rem) - 1 - dd, -1, -1):
            c = rem[i + dd] * inv_lead
            quot[i] = c
            if not c.is_zero():
                for j, d in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * d
        return Polynomial(quot), Polynomial(rem[:dd])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = self.lead().inverse()
        return Polynomial([c * inv for c in self.coeffs])

    def __call__(self, x):
        x = as_cyclo(x)
        acc = CycloNumber.rational(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = _as_poly(other)
            except TypeError:
                return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            parts.append(f"({c})" + ("" if k == 0 else ("*n" if k == 1 else f"*n^{k}")))
        return "Polynomial(" + " + ".join(parts) + ")"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction, CycloNumber)):
        return Polynomial([x])
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


@lru_cache(maxsize=None)
def falling_factorial(t: int) -> Polynomial:
    """(n)_t = n (n-1) ... (n-t+1); (n)_0 = 1."""
    if t < 0:
        raise ValueError("falling factorial needs t >= 0")
    p = Polynomial([1])
    for j in range(t):
        p = p * Polynomial.linear_root(j)
    return p


# ---------------------------------------------------------- rational functions

@dataclass(frozen=True)
class LaurentSeries:
    """sum_{p=0..K} coeffs[p] * n^(lead_order - p)."""

    lead_order: int
    coeffs: tuple
    K: int

    def coefficient(self, power: int) -> CycloNumber:
        p = self.lead_order - power
        if p < 0:
            return CycloNumber.rational(0)
        if p > self.K:
            raise IndexError(f"n^{power} lies beyond the truncation")
        return self.coeffs[p]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def partial_sum(self, n0) -> CycloNumber:
        acc = CycloNumber.rational(0)
        for p, c in enumerate(self.coeffs):
            acc = acc + c * (Fraction(n0) ** (self.lead_order - p))
        return acc


class RationalFunction:
    """num/den in Q(zeta)(n), kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = _as_poly(num)
        den = Polynomial([1]) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if num.is_zero():
                den = Polynomial([1])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lead_inv = den.lead().inverse()
            num = Polynomial([c * lead_inv for c in num.coeffs])
            den = Polynomial([c * lead_inv for c in den.coeffs])
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Polynomial([c]), reduced=True)

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        try:
            other = _as_rf(other)
        except TypeError:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def evaluate_at(self, n0) -> CycloNumber:
        d = self.den(n0)
        if d.is_zero():
            raise ZeroDivisionError(f"pole at n = {n0}")
        return self.num(n0) / d

    __call__ = evaluate_at

    def laurent(self, K: int) -> LaurentSeries:
        return laurent_expand(self, K)

    def __repr__(self):
        return f"RationalFunction({self.num!r} / {self.den!r})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(_as_poly(x), reduced=True)


def laurent_expand(f: RationalFunction, K: int) -> LaurentSeries:
    """Expansion at n -> infinity, exact through K terms after the leading one."""
    if K < 0:
        raise ValueError("truncation must be nonnegative")
    if f.num.is_zero():
        return LaurentSeries(0, tuple(CycloNumber.rational(0) for _ in range(K + 1)), K)
    # with x = 1/n: f = n^(dn-dd) * P(x)/Q(x), P, Q the reversed coefficient lists
    P = list(reversed(f.num.coeffs))
    Q = list(reversed(f.den.coeffs))
    q0_inv = Q[0].inverse()
    zero = CycloNumber.rational(0)
    out = []
    for p in range(K + 1):
        acc = P[p] if p < len(P) else zero
        for j in range(1, min(p, len(Q) - 1) + 1):
            acc = acc - Q[j] * out[p - j]
        out.append(acc * q0_inv)
    return LaurentSeries(f.num.degree - f.den.degree, tuple(out), K)


def evaluate_at(f: RationalFunction, n0) -> CycloNumber:
    return f.evaluate_at(n0)


# -------------------------------------------------------------- serialization

def cyclo_to_json(x) -> dict:
    x = as_cyclo(x)
    return {"N": x.N, "coeffs": [[c.numerator, c.denominator] for c in x.coeffs]}


def cyclo_from_json(obj) -> CycloNumber:
    if isinstance(obj, (int, str)):
        return CycloNumber.rational(Fraction(obj))
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(isinstance(v, int) for v in obj):
        return CycloNumber.rational(Fraction(obj[0], obj[1]))
    coeffs = []
    for c in obj["coeffs"]:
        coeffs.append(Fraction(c[0], c[1]) if isinstance(c, (list, tuple)) else Fraction(c))
    return CycloNumber(int(obj["N"]), coeffs)


def rf_to_json(f: RationalFunction) -> dict:
    return {"num": [cyclo_to_json(c) for c in f.num.coeffs],
            "den": [cyclo_to_json(c) for c in f.den.coeffs]}


def rf_from_json(obj) -> RationalFunction:
    num = Polynomial([cyclo_from_json(c) for c in obj["num"]])
    den = Polynomial([cyclo_from_json(c) for c in obj["den"]])
    return RationalFunction(num, den)


def laurent_to_json(s: LaurentSeries) -> dict:
    return {"lead_order": s.lead_order, "K": s.K, "coeffs": [cyclo_to_json(c) for c in s.coeffs]}


def format_rf(f: RationalFunction) -> str:
    def fmt(p: Polynomial) -> str:
        if p.is_zero():
            return "0"
        terms = []
        for k in range(p.degree, -1, -1):
            c = p.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")

    if f.den.degree == 0:
        return fmt(f.num)
    return f"({fmt(f.num)}) / ({fmt(f.den)})"


def reduce_linear_factors(num: Polynomial, roots: Sequence[int]) -> tuple[Polynomial, list[int]]:
    """Cancel factors (n - j) of a denominator given as its list of integer roots."""
    remaining = []
    for j in roots:
        if not num.is_zero() and num(j).is_zero():
            num = num // Polynomial.linear_root(j)
        else:
            remaining.append(j)
    return num, remaining
