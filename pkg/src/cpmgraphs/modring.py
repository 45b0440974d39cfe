"""Arithmetic in Z_n and the parameter conditions used throughout the package.

Residues are kept fully reduced. A condition written with "+-" (for example
``r^t +- 1 = 0``) holds when at least one of the two signs works.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class NotAUnitError(ValueError):
    pass


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, k: int):
        if k < 0:
            return inverse(self) ** (-k)
        return Residue(pow(self.value, k, self.modulus), self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"


def _split(a, n=None):
    if isinstance(a, Residue):
        return a.value, a.modulus
    if n is None:
        raise TypeError("an int residue needs an explicit modulus")
    return int(a) % n, n


def is_unit(a: Residue) -> bool:
    value, n = _split(a)
    return gcd(value, n) == 1


def inverse(a: Residue) -> Residue:
    value, n = _split(a)
    try:
        return Residue(pow(value, -1, n), n)
    except ValueError:
        raise NotAUnitError(f"{value} is not a unit mod {n}: not a unit") from None


def inv_mod(a: int, n: int) -> int:
    """Plain-int inverse; raises NotAUnitError."""
    return inverse(Residue(a, n)).value


def is_pm_one(x: int, n: int) -> bool:
    """True when x = 1 or x = -1 in Z_n."""
    x %= n
    return x == 1 or x == n - 1


def is_valid_r(m: int, s: int, n: int, r) -> bool:
    """r is a unit of Z_n with r^(ms) = +-1."""
    value, n = _split(r, n)
    if m < 1 or s < 1 or n < 3:
        return False
    if gcd(value, n) != 1:
        return False
    return is_pm_one(pow(value, m * s, n), n)


def cond_arc_transitive(s: int, n: int, r) -> bool:
    """2(r^(2s) +- 1) = 0 in Z_n."""
    value, n = _split(r, n)
    t = pow(value, 2 * s, n)
    return (2 * (t + 1)) % n == 0 or (2 * (t - 1)) % n == 0


def cond_two_arc_transitive(m: int, s: int, n: int, r) -> bool:
    """The three families of 2-arc-transitive parameter tuples (all with s = 2).

    (i) n = 4 and m = 1; (ii) n = m odd with r^2 = +-1;
    (iii) n = 2m, m = 2 (mod 4) and 1 + r^2 = m (mod n).
    """
    value, n = _split(r, n)
    if s != 2:
        return False
    if n == 4 and m == 1:
        return True
    if n == m and n % 2 == 1 and is_pm_one(value * value, n):
        return True
    if n == 2 * m and m % 4 == 2 and (1 + value * value - m) % n == 0:
        return True
    return False


def units(n: int) -> list[int]:
    return [a for a in range(1, n) if gcd(a, n) == 1]


def crt(residues, moduli) -> int:
    """Combine pairwise coprime congruences; returns the least non-negative solution."""
    x, mod = 0, 1
    for a, k in zip(residues, moduli):
        if gcd(mod, k) != 1:
            raise ValueError("moduli must be pairwise coprime")
        # x + mod*t = a (mod k)
        t = ((a - x) * pow(mod, -1, k)) % k if k > 1 else 0
        x += mod * t
        mod *= k
    return x % mod
