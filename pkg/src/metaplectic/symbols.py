"""Residue-field arithmetic, the tame n-th Hilbert symbol and the solutions
of the quadratic gamma-cocycle equation.

A class of F^x / (F^x)^n is a pair ``(v, u)`` with ``0 <= v, u < n`` standing
for ``uniformizer**v * g**u`` where ``g`` generates the residue field's unit
group.  Roots of unity are stored as exponents of ``zeta = g**((q-1)/n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterator

ClassPair = tuple[int, int]


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, k


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


class ResidueField:
    """The finite field with q elements, elements encoded as ints ``0..q-1``.

    For ``q = p**k`` with ``k > 1`` an element is the polynomial whose base-p
    digits are its coefficients, reduced modulo a monic polynomial for which
    ``x`` is primitive.  Multiplication goes through log tables.
    """

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        if self.k == 1:
            self.primitive = self._smallest_primitive_root()
            seq = [1]
            for _ in range(q - 2):
                seq.append(seq[-1] * self.primitive % q)
        else:
            self.primitive = self.p  # the polynomial x
            seq = self._primitive_power_table()
        self._exp = seq
        self._log = {x: i for i, x in enumerate(seq)}
        if len(self._log) != q - 1:
            raise AssertionError("failed to build log tables")

    def _smallest_primitive_root(self) -> int:
        p = self.p
        if p == 2:
            return 1
        fs = _prime_factors(p - 1)
        return next(g for g in range(2, p) if all(pow(g, (p - 1) // f, p) != 1 for f in fs))

    def _primitive_power_table(self) -> list[int]:
        p, k, q = self.p, self.k, self.q
        for tail in itertools.product(range(p), repeat=k):
            # modulus x^k + tail[k-1] x^(k-1) + ... + tail[0]
            if tail[0] == 0:
                continue
            seq, cur = [1], [1] + [0] * (k - 1)
            for _ in range(q - 2):
                # multiply cur by x, reduce
                top = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(c - top * t) % p for c, t in zip(cur, tail)]
                val = sum(c * p**i for i, c in enumerate(cur))
                if val == 1:
                    break
                seq.append(val)
            if len(seq) == q - 1:
                return seq
        raise AssertionError(f"no primitive polynomial found for q = {q}")

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.q
        p = self.p
        out, i = 0, 0
        while a or b:
            out += ((a % p + b % p) % p) * p**i
            a, b, i = a // p, b // p, i + 1
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.q
        p = self.p
        out, i = 0, 0
        while a:
            out += ((-(a % p)) % p) * p**i
            a, i = a // p, i + 1
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** non-positive")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int, base: int | None = None) -> int:
        """Discrete log of ``a`` to ``base`` (default: the primitive element)."""
        la = self._log[a]
        if base is None:
            return la
        lb = self._log[base]
        order = (self.q - 1)
        for e in range(order):
            if (lb * e - la) % order == 0:
                return e
        raise ValueError(f"{a} is not a power of {base}")

    def order(self, a: int) -> int:
        la = self._log[a]
        return (self.q - 1) // gcd(la, self.q - 1)

    @property
    def one(self) -> int:
        return 1

    @property
    def minus_one(self) -> int:
        return self.neg(1)

    def units(self) -> Iterator[int]:
        return iter(self._exp)


@dataclass(frozen=True)
class MuN:
    """The root of unity ``zeta**e`` in mu_n."""

    e: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.n)

    def __mul__(self, other: MuN) -> MuN:
        if other.n != self.n:
            raise ValueError("roots of unity of different orders")
        return MuN(self.e + other.e, self.n)

    def __pow__(self, k: int) -> MuN:
        return MuN(self.e * k, self.n)

    def inverse(self) -> MuN:
        return MuN(-self.e, self.n)

    @property
    def is_one(self) -> bool:
        return self.e == 0


@dataclass(frozen=True)
class LocalFieldModel:
    """Tame surrogate of a p-adic field: residue size q, cover degree n | q-1.

    ``g`` is the generator of the residue units used for class coordinates;
    by default the field's primitive element.
    """

    q: int
    n: int
    g: int | None = None
    _field: ResidueField = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be a positive integer")
        fld = ResidueField(self.q)
        if (self.q - 1) % self.n:
            raise ValueError(f"n = {self.n} does not divide q - 1 = {self.q - 1}")
        g = fld.primitive if self.g is None else self.g
        if g <= 0 or g >= self.q or fld.order(g) != self.q - 1:
            raise ValueError(f"g = {g} does not generate the units of F_{self.q}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "_field", fld)

    @property
    def field(self) -> ResidueField:
        return self._field

    @cached_property
    def zeta(self) -> int:
        """Generator ``g**((q-1)/n)`` of mu_n inside the residue field."""
        return self.field.pow(self.g, (self.q - 1) // self.n)

    @property
    def minus_one_exponent(self) -> int:
        """Exponent of -1 in base g (0 in characteristic 2)."""
        return 0 if self.q % 2 == 0 else (self.q - 1) // 2

    def classes(self) -> list[ClassPair]:
        return [(v, u) for v in range(self.n) for u in range(self.n)]

    def normalize(self, c: ClassPair) -> ClassPair:
        return (c[0] % self.n, c[1] % self.n)

    def class_of(self, valuation: int, unit: int) -> ClassPair:
        """Class of ``uniformizer**valuation * unit`` (unit a residue-field element)."""
        return (valuation % self.n, self.field.log(unit, self.g) % self.n)

    def unit_part(self, c: ClassPair) -> int:
        return self.field.pow(self.g, c[1])

    @property
    def minus_one_class(self) -> ClassPair:
        return (0, self.minus_one_exponent % self.n)

    def mul_classes(self, a: ClassPair, b: ClassPair) -> ClassPair:
        return ((a[0] + b[0]) % self.n, (a[1] + b[1]) % self.n)

    def pow_class(self, a: ClassPair, k: int) -> ClassPair:
        return ((a[0] * k) % self.n, (a[1] * k) % self.n)

    def mu_from_field(self, x: int) -> MuN:
        """Express an n-th root of unity of the residue field as a MuN."""
        return MuN(self.field.log(x, self.zeta), self.n)

    def with_degree(self, n: int) -> LocalFieldModel:
        return LocalFieldModel(self.q, n, self.g)


def tame_symbol(a: ClassPair, b: ClassPair, model: LocalFieldModel) -> MuN:
    """Tame n-th Hilbert symbol ``(a, b)_n``.

    For ``a = uniformizer**i * A`` and ``b = uniformizer**j * B`` with units
    ``A, B`` the value is ``((-1)**(i*j) * A**j / B**i) ** ((q-1)/n)`` in the
    residue field, so that ``(uniformizer, u) = u**(-(q-1)/n)``.
    """
    fld = model.field
    i, _ = a
    j, _ = b
    ua, ub = model.unit_part(a), model.unit_part(b)
    x = fld.mul(fld.pow(ua, j), fld.inv(fld.pow(ub, i)))
    if (i * j) % 2:
        x = fld.neg(x)
    return model.mu_from_field(fld.pow(x, (model.q - 1) // model.n))


def symbol_exponent(a: ClassPair, b: ClassPair, q: int, n: int) -> int:
    """Exponent of zeta in ``(a, b)_n`` via exponent arithmetic only."""
    (i, k), (j, l) = a, b
    sign = 0 if q % 2 == 0 else i * j * (q - 1) // 2
    return (sign + j * k - i * l) % n


def symbol_table(model: LocalFieldModel) -> list[list[int]]:
    """``table[c1][c2]`` = exponent of ``(c1, c2)_n`` with classes indexed ``v*n + u``."""
    cls = model.classes()
    return [[tame_symbol(a, b, model).e for b in cls] for a in cls]


# --------------------------------------------------------------------------
# gamma functions: gamma(a) gamma(b) = (a, b)_2 gamma(ab), gamma(1) = 1

SQUARE_CLASSES: tuple[ClassPair, ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class GammaFunction:
    """A function on F^x/(F^x)^2 valued in mu_4, stored as exponents of i."""

    values: tuple[tuple[ClassPair, int], ...]

    def __call__(self, t: ClassPair) -> int:
        t = (t[0] % 2, t[1] % 2)
        return dict(self.values)[t]

    def as_dict(self) -> dict[ClassPair, int]:
        return dict(self.values)


def quadratic_model(model: LocalFieldModel | int) -> LocalFieldModel:
    if isinstance(model, int):
        return LocalFieldModel(model, 2)
    if model.q % 2 == 0:
        raise ValueError("quadratic symbols need q odd")
    return model if model.n == 2 else model.with_degree(2)


def hilbert2_exponent4(a: ClassPair, b: ClassPair, model: LocalFieldModel) -> int:
    """``(a, b)_2`` as an exponent of i (0 or 2)."""
    return 2 * tame_symbol(a, b, model).e


def gamma_solutions(model: LocalFieldModel | int) -> list[GammaFunction]:
    """All gamma: F^x/(F^x)^2 -> mu_4 with ``gamma(a)gamma(b) = (a,b)_2 gamma(ab)``
    and ``gamma(1) = 1``, by exhaustive search over the 4**3 assignments."""
    if isinstance(model, int) and model % 2 == 0 or not isinstance(model, int) and model.q % 2 == 0:
        raise ValueError("gamma functions need q odd")
    m = quadratic_model(model)
    out = []
    rest = SQUARE_CLASSES[1:]
    for vals in itertools.product(range(4), repeat=3):
        gam = {SQUARE_CLASSES[0]: 0, **dict(zip(rest, vals))}
        if all((gam[a] + gam[b]) % 4
               == (hilbert2_exponent4(a, b, m) + gam[m.mul_classes(a, b)]) % 4
               for a in SQUARE_CLASSES for b in SQUARE_CLASSES):
            out.append(GammaFunction(tuple(sorted(gam.items()))))
    return out


def is_quadratic_character(f: dict[ClassPair, int]) -> bool:
    """Whether ``f`` (exponents of i) is a homomorphism F^x/(F^x)^2 -> {+1, -1}."""
    def mul(a, b):
        return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
    return all(f[c] % 2 == 0 for c in SQUARE_CLASSES) and all(
        (f[a] + f[b]) % 4 == f[mul(a, b)] % 4 for a in SQUARE_CLASSES for b in SQUARE_CLASSES)
