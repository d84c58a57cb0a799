"""Exact rational functions in ``z = q**-s`` for rank-one Plancherel data.

Polynomials are tuples of :class:`fractions.Fraction` coefficients, lowest
degree first.  The discriminant weight ``d**(-1/2)`` is kept symbolic: a
:class:`LaurentRational` carries ``d`` and a power of ``d**(-1/2)`` reduced
to 0 or 1, so every value stays exact.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Poly = tuple[Fraction, ...]

# --------------------------------------------------------------------------
# Polynomial helpers over Q


def _trim(p: Iterable) -> Poly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _add(a: Poly, b: Poly) -> Poly:
    k = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(k))


def _scale(a: Poly, c) -> Poly:
    return _trim(x * c for x in a)


def _mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] -= c * y
    return _trim(q), _trim(r[: len(b) - 1])


def _gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _divmod(a, b)[1]
    return _scale(a, 1 / a[-1]) if a else ()


def _reverse(a: Poly) -> Poly:
    return tuple(reversed(a))


def _low_order(a: Poly) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("zero polynomial")


def _eval(a: Poly, z):
    acc = 0
    for c in reversed(a):
        acc = acc * z + c
    return acc


def _root_multiplicity(p: Poly, factor: Poly) -> int:
    k = 0
    while p:
        q, r = _divmod(p, factor)
        if r:
            break
        p, k = q, k + 1
    return k


def _perfect_power(b: int) -> tuple[int, int]:
    """Write ``b = base**e`` with ``base`` not a perfect power."""
    for e in range(max(b.bit_length(), 1), 1, -1):
        r = round(b ** (1.0 / e))
        for c in (r - 1, r, r + 1):
            if c > 1 and c**e == b:
                base, e2 = _perfect_power(c)
                return base, e * e2
    return b, 1


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentRational:
    """``dhalf**dhalf_power * z**shift * num(z) / den(z)`` with ``dhalf = d**(-1/2)``.

    Canonical form: ``num`` and ``den`` coprime, neither divisible by ``z``,
    ``den(0) = 1``, ``dhalf_power`` in {0, 1} (0 whenever ``d == 1``).  Build
    values through :meth:`make`; equality of canonical forms is equality of
    rational functions.
    """

    num: Poly
    den: Poly
    shift: int = 0
    d: Fraction = Fraction(1)
    dhalf_power: int = 0

    @classmethod
    def make(cls, num: Iterable, den: Iterable = (1,), shift: int = 0,
             d=1, dhalf_power: int = 0) -> LaurentRational:
        d = Fraction(d)
        if d <= 0:
            raise ValueError("d must be positive")
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls((), (Fraction(1),), 0, d, 0)
        vn, vd = _low_order(num), _low_order(den)
        num, den, shift = num[vn:], den[vd:], shift + vn - vd
        g = _gcd(num, den)
        if len(g) > 1:
            num, den = _divmod(num, g)[0], _divmod(den, g)[0]
        c = den[0]
        num, den = _scale(num, 1 / c), _scale(den, 1 / c)
        k = dhalf_power
        if k % 2:
            num, k = _scale(num, d ** (-(k - 1) // 2)), 1
        else:
            num, k = _scale(num, d ** (-k // 2)), 0
        if d == 1:
            k = 0
        return cls(num, den, shift, d, k)

    @classmethod
    def constant(cls, c, d=1) -> LaurentRational:
        return cls.make((c,), d=d)

    @classmethod
    def monomial(cls, k: int, c=1, d=1) -> LaurentRational:
        return cls.make((c,), shift=k, d=d)

    # -- arithmetic ------------------------------------------------------

    def _same_d(self, other: LaurentRational) -> None:
        if self.d != other.d:
            raise ValueError("rational functions carry different discriminant weights")

    def __mul__(self, other: LaurentRational) -> LaurentRational:
        if not isinstance(other, LaurentRational):
            return self * LaurentRational.constant(other, self.d)
        self._same_d(other)
        return LaurentRational.make(_mul(self.num, other.num), _mul(self.den, other.den),
                                    self.shift + other.shift, self.d,
                                    self.dhalf_power + other.dhalf_power)

    __rmul__ = __mul__

    def inverse(self) -> LaurentRational:
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return LaurentRational.make(self.den, self.num, -self.shift, self.d, -self.dhalf_power)

    def __truediv__(self, other: LaurentRational) -> LaurentRational:
        if not isinstance(other, LaurentRational):
            other = LaurentRational.constant(other, self.d)
        return self * other.inverse()

    def __add__(self, other: LaurentRational) -> LaurentRational:
        if not isinstance(other, LaurentRational):
            other = LaurentRational.constant(other, self.d)
        self._same_d(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.dhalf_power != other.dhalf_power:
            raise ValueError("cannot add terms with different powers of d**(-1/2)")
        lo = min(self.shift, other.shift)
        a = _mul((Fraction(0),) * (self.shift - lo) + (Fraction(1),), _mul(self.num, other.den))
        b = _mul((Fraction(0),) * (other.shift - lo) + (Fraction(1),), _mul(other.num, self.den))
        return LaurentRational.make(_add(a, b), _mul(self.den, other.den), lo, self.d,
                                    self.dhalf_power)

    __radd__ = __add__

    def __neg__(self) -> LaurentRational:
        return LaurentRational.make(_scale(self.num, -1), self.den, self.shift, self.d,
                                    self.dhalf_power)

    def __sub__(self, other: LaurentRational) -> LaurentRational:
        return self + (-other)

    # -- substitutions ---------------------------------------------------

    def at_inverse(self) -> LaurentRational:
        """``f(1/z)``."""
        if self.is_zero:
            return self
        dn, dd = len(self.num) - 1, len(self.den) - 1
        return LaurentRational.make(_reverse(self.num), _reverse(self.den),
                                    -self.shift - dn + dd, self.d, self.dhalf_power)

    def at_power(self, n: int) -> LaurentRational:
        """``f(z**n)`` for ``n >= 1``."""
        if n <= 0:
            raise ValueError("substitution exponent must be a positive integer")

        def spread(p: Poly) -> Poly:
            out = [Fraction(0)] * ((len(p) - 1) * n + 1) if p else []
            for i, c in enumerate(p):
                out[i * n] = c
            return tuple(out)

        return LaurentRational.make(spread(self.num), spread(self.den), self.shift * n,
                                    self.d, self.dhalf_power)

    # -- inspection ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return self.shift == 0 and len(self.num) <= 1 and len(self.den) == 1

    def equals(self, other: LaurentRational) -> bool:
        """Cross-multiplied polynomial identity (independent of canonical form)."""
        if self.d != other.d or self.dhalf_power != other.dhalf_power:
            return False
        lo = min(self.shift, other.shift)
        a = _mul((Fraction(0),) * (self.shift - lo) + (Fraction(1),), _mul(self.num, other.den))
        b = _mul((Fraction(0),) * (other.shift - lo) + (Fraction(1),), _mul(other.num, self.den))
        return a == b

    @property
    def dhalf_value(self) -> float:
        return self.d ** -0.5 if self.dhalf_power else 1.0

    def __call__(self, z):
        """Evaluate at a number (Fraction for exact evaluation when dhalf_power is 0)."""
        den = _eval(self.den, z)
        if den == 0:
            raise ZeroDivisionError(f"pole at z = {z}")
        val = _eval(self.num, z) / den * (z**self.shift if self.shift >= 0 else 1 / z**-self.shift)
        return val * self.dhalf_value if self.dhalf_power else val

    def evaluate_many(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        num = np.polyval([float(c) for c in reversed(self.num)], zs) if self.num else 0 * zs
        den = np.polyval([float(c) for c in reversed(self.den)], zs)
        return num / den * zs**self.shift * self.dhalf_value

    def limit_at_zero(self) -> Fraction | None:
        """Limit as ``z -> 0`` as an exact rational times ``dhalf**dhalf_power``.

        Returns None when the limit is infinite.
        """
        if self.is_zero or self.shift > 0:
            return Fraction(0)
        if self.shift < 0:
            return None
        return self.num[0]

    def multiplicity_at(self, root: Poly, in_denominator: bool = False) -> int:
        """Multiplicity of the irreducible factor ``root`` in the numerator or denominator."""
        return _root_multiplicity(self.den if in_denominator else self.num, _trim(root))

    def to_dict(self) -> dict:
        return {
            "numerator": [str(c) for c in self.num],
            "denominator": [str(c) for c in self.den],
            "shift": self.shift,
            "d": str(self.d),
            "dhalf_power": self.dhalf_power,
        }

    def __str__(self) -> str:
        def poly(p: Poly) -> str:
            terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(p) if c]
            return " + ".join(terms) or "0"
        pre = f"d^(-1/2) * " if self.dhalf_power else ""
        return f"{pre}z^{self.shift} * ({poly(self.num)}) / ({poly(self.den)})"


# --------------------------------------------------------------------------
# Rank-one data


def _check_params(q, n: int, d) -> tuple[Fraction, Fraction]:
    q, d = Fraction(q), Fraction(d)
    if q <= 1:
        raise ValueError("q must exceed 1")
    if not isinstance(n, int) or n <= 0:
        raise ValueError("n must be a positive integer")
    if d <= 0:
        raise ValueError("d must be positive")
    return q, d


def local_l_factor(q, n: int, sign: int = 1, offset: int = 0, d=1) -> LaurentRational:
    """``L(sign*n*s + offset) = 1/(1 - q**-offset * z**(sign*n))`` with ``z = q**-s``."""
    q, d = _check_params(q, n, d)
    c = q ** -offset
    base = LaurentRational.make((1,), (1,) + (0,) * (n - 1) + (-c,), d=d)
    return base if sign > 0 else base.at_inverse()


def gk_coefficient(q, n: int, d=1) -> LaurentRational:
    """``c(z) = d**(-1/2) (1 - z**n/q) / (1 - z**n)``."""
    q, d = _check_params(q, n, d)
    num = (1,) + (0,) * (n - 1) + (-1 / q,)
    den = (1,) + (0,) * (n - 1) + (-1,)
    return LaurentRational.make(num, den, d=d, dhalf_power=1)


def plancherel_rank_one(q, n: int, d=1) -> LaurentRational:
    """``mu(z) = d (1 - z**n)(1 - z**-n) / ((1 - z**n/q)(1 - z**-n/q))``."""
    q, d = _check_params(q, n, d)
    up = LaurentRational.make((1,) + (0,) * (n - 1) + (-1,), (1,) + (0,) * (n - 1) + (-1 / q,), d=d)
    return up * up.at_inverse() * d


def plancherel_from_l_factors(q, n: int, d=1) -> LaurentRational:
    """``d * L(ns+1)/L(ns) * L(-ns+1)/L(-ns)``, the same measure built from local L-factors."""
    lf = lambda sign, off: local_l_factor(q, n, sign, off, d)  # noqa: E731
    return (lf(1, 1) / lf(1, 0)) * (lf(-1, 1) / lf(-1, 0)) * Fraction(d)


def transfer_linear_to_cover(mu_linear: LaurentRational, n: int) -> LaurentRational:
    """Substitute ``z -> z**n`` (the linear measure evaluated at ``ns``)."""
    if n == 0:
        raise ValueError("n = 0 is not a valid degree")
    return mu_linear.at_power(n)


def normalize_at_zero(f: LaurentRational) -> LaurentRational:
    """Rescale so the limit at ``z -> 0`` is 1 (requires a finite nonzero limit)."""
    lim = f.limit_at_zero()
    if lim is None or lim == 0:
        raise ValueError("limit at z -> 0 is zero or infinite")
    out = f / lim
    if out.dhalf_power:
        out = LaurentRational.make(out.num, out.den, out.shift, out.d, 0)
    return out


def archimedean_mu(s: complex) -> complex:
    """``-s**2 / (4 pi**2)``."""
    return -complex(s) ** 2 / (4 * math.pi**2)


# --------------------------------------------------------------------------
# Reducibility


@dataclass(frozen=True)
class RealPoint:
    s: Fraction
    kind: str  # zero | pole
    order: int


@dataclass(frozen=True)
class ReducibilityReport:
    irreducible_at_zero: bool
    pole_order_at_zero_of_mu_inverse: int
    real_reducibility_points: tuple[Fraction, ...]
    q: Fraction = Fraction(0)
    n: int = 0
    mu_zeros: tuple[RealPoint, ...] = ()
    mu_poles: tuple[RealPoint, ...] = ()
    reducibility_orders: tuple[int, ...] = field(default=())

    @property
    def imaginary_period(self) -> float | None:
        """Spacing ``2 pi / (n log q)`` of the translates of each real point along Im(s)."""
        if self.q <= 1 or self.n <= 0:
            return None
        return 2 * math.pi / (self.n * math.log(self.q))

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "n": self.n,
            "irreducible_at_zero": self.irreducible_at_zero,
            "pole_order_at_zero_of_mu_inverse": self.pole_order_at_zero_of_mu_inverse,
            "real_reducibility_points": [str(s) for s in self.real_reducibility_points],
            "imaginary_period": self.imaginary_period,
            "mu_zeros": [{"s": str(p.s), "order": p.order} for p in self.mu_zeros],
            "mu_poles": [{"s": str(p.s), "order": p.order} for p in self.mu_poles],
        }

    def rows(self) -> list[tuple[str, int, str, str, int]]:
        """Table rows ``(q, n, s_point, type, order)`` in a fixed order."""
        out = []
        qs = str(self.q)
        for p in self.mu_zeros:
            out.append((qs, self.n, str(p.s), "zero", p.order))
        for p in self.mu_poles:
            out.append((qs, self.n, str(p.s), "pole", p.order))
        for s, k in zip(self.real_reducibility_points, self.reducibility_orders):
            out.append((qs, self.n, str(s), "reducible", k))
        if self.irreducible_at_zero:
            out.append((qs, self.n, "0", "irreducible", self.pole_order_at_zero_of_mu_inverse))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "n", "s_point", "type", "order"])
        w.writerows(self.rows())
        return buf.getvalue()


def positive_real_roots(p: Poly, q) -> list[tuple[Fraction, int]]:
    """Roots of ``p`` of the form ``z = q**a`` with ``a`` rational, and multiplicities.

    numpy supplies candidates; each is confirmed exactly by dividing by the
    minimal polynomial ``x**M - base**R`` of ``base**(R/M)`` where
    ``q = base**e`` and ``base`` is not a perfect power.
    """
    q = Fraction(q)
    if len(p) <= 1:
        return []
    if q.denominator == 1:
        base, e = _perfect_power(q.numerator)
        base = Fraction(base)
    else:
        base, e = q, 1
    cands = np.roots([float(c) for c in reversed(p)])
    found: dict[Fraction, int] = {}
    for z in cands:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)) or z.real <= 0:
            continue
        a = Fraction(math.log(z.real) / math.log(q)).limit_denominator(4 * len(p) + 64)
        if a in found:
            continue
        ex = a * e
        r, m = ex.numerator, ex.denominator
        minpoly = (-(base**r),) + (Fraction(0),) * (m - 1) + (Fraction(1),)
        k = _root_multiplicity(p, _trim(minpoly))
        if k:
            found[a] = k
    return sorted(found.items())


def _real_points(p: Poly, q) -> list[tuple[Fraction, int]]:
    # z = q**-s, so s = -a
    return sorted((-a, k) for a, k in positive_real_roots(p, q))


def reducibility_report(mu: LaurentRational, q, n: int) -> ReducibilityReport:
    """Reducibility of the rank-one principal series read off ``mu**-1``.

    ``s = 0`` is irreducible iff ``mu**-1`` has a pole of order exactly 2 at
    ``z = 1``; a real ``s != 0`` is reducible iff ``mu**-1`` vanishes there.
    """
    if mu.is_zero:
        raise ValueError("mu must be nonzero")
    q = Fraction(q)
    if mu.is_constant:
        return ReducibilityReport(False, 0, (), q, n)
    inv = mu.inverse()
    one = (Fraction(-1), Fraction(1))
    pole0 = inv.multiplicity_at(one, in_denominator=True)
    red = [(s, k) for s, k in _real_points(inv.num, q) if s != 0]
    zeros = tuple(RealPoint(s, "zero", k) for s, k in _real_points(mu.num, q))
    poles = tuple(RealPoint(s, "pole", k) for s, k in _real_points(mu.den, q))
    return ReducibilityReport(
        irreducible_at_zero=(pole0 == 2),
        pole_order_at_zero_of_mu_inverse=pole0,
        real_reducibility_points=tuple(s for s, _ in red),
        q=q,
        n=n,
        mu_zeros=zeros,
        mu_poles=poles,
        reducibility_orders=tuple(k for _, k in red),
    )


def positivity_samples(mu: LaurentRational, q, count: int = 1000, t_max: float | None = None,
                       seed: int = 0) -> np.ndarray:
    """Values of ``mu(q**(-it))`` at ``count`` seeded random real ``t``.

    Sample points that land on a pole (within float precision) are skipped.
    """
    rng = np.random.default_rng(seed)
    period = 2 * math.pi / math.log(float(q))
    t = rng.uniform(-(t_max or period), t_max or period, size=count)
    z = np.exp(-1j * t * math.log(float(q)))
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = mu.evaluate_many(z)
    return vals[np.isfinite(vals)]


def unit_circle_value(mu: LaurentRational, q, t: float) -> complex:
    return complex(mu(cmath.exp(-1j * t * math.log(float(q)))))


def symmetric_check(mu: LaurentRational) -> bool:
    return mu == mu.at_inverse()


def rows_to_csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "n", "s_point", "type", "order"])
    w.writerows(rows)
    return buf.getvalue()
