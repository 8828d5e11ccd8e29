"""Half-integers, cuspidal labels, segments and the parity predicates."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering


@total_ordering
class HalfInt:
    """An element of (1/2)Z, stored as twice its value."""

    __slots__ = ("twice",)

    def __init__(self, value=0):
        if isinstance(value, HalfInt):
            twice = value.twice
        elif isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        elif isinstance(value, int):
            twice = 2 * value
        elif isinstance(value, Fraction):
            if (2 * value).denominator != 1:
                raise ValueError(f"{value} is not a half-integer")
            twice = int(2 * value)
        elif isinstance(value, str):
            return self.__init__(HalfInt.parse(value))
        else:
            raise TypeError(f"cannot make a half-integer from {value!r}")
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def from_twice(cls, twice):
        h = cls.__new__(cls)
        object.__setattr__(h, "twice", int(twice))
        return h

    @staticmethod
    def parse(text):
        text = str(text).strip()
        try:
            frac = Fraction(text)
        except ValueError:
            raise ValueError(f"bad half-integer {text!r}") from None
        return HalfInt(frac)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, HalfInt):
            return other.twice
        if isinstance(other, int) and not isinstance(other, bool):
            return 2 * other
        if isinstance(other, Fraction) and (2 * other).denominator == 1:
            return int(2 * other)
        return None

    def __add__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return HalfInt.from_twice(self.twice + t)

    __radd__ = __add__

    def __sub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return HalfInt.from_twice(self.twice - t)

    def __rsub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return HalfInt.from_twice(t - self.twice)

    def __neg__(self):
        return HalfInt.from_twice(-self.twice)

    def __pos__(self):
        return self

    def __abs__(self):
        return HalfInt.from_twice(abs(self.twice))

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return HalfInt.from_twice(self.twice * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.twice == t

    def __lt__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        return self.twice < t

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def is_integer(self):
        return self.twice % 2 == 0

    def to_fraction(self):
        return Fraction(self.twice, 2)

    def __int__(self):
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __index__(self):
        return int(self)

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({str(self)!r})"


def half(value):
    """Coerce ints, Fractions, strings and HalfInts to a HalfInt."""
    return value if isinstance(value, HalfInt) else HalfInt(value)


SO_ODD = "SO_odd"
SP = "Sp"


@dataclass(frozen=True)
class GroupType:
    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in (SO_ODD, SP):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")

    @property
    def dual_dimension(self):
        return 2 * self.rank if self.kind == SO_ODD else 2 * self.rank + 1

    @classmethod
    def for_dual_dimension(cls, kind, dim):
        if kind == SO_ODD:
            if dim % 2:
                raise ValueError("SO_odd needs an even dual dimension")
            return cls(kind, dim // 2)
        if dim % 2 == 0:
            raise ValueError("Sp needs an odd dual dimension")
        return cls(kind, (dim - 1) // 2)

    def __str__(self):
        if self.kind == SO_ODD:
            return f"SO{2 * self.rank + 1}"
        return f"Sp{2 * self.rank}"


@dataclass(frozen=True)
class CuspidalLabel:
    id: str = "rho"
    dim: int = field(default=1, compare=False)
    parity_class: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.parity_class not in (0, 1):
            raise ValueError("parity_class must be 0 or 1")

    def to_json(self):
        return {"id": self.id, "dim": self.dim, "parity_class": self.parity_class}

    @classmethod
    def from_json(cls, obj):
        parity = obj.get("parity_class", obj.get("parity", 0))
        return cls(str(obj.get("id", "rho")), int(obj.get("dim", 1)), int(parity))

    def __str__(self):
        return self.id


DEFAULT_RHO = CuspidalLabel()


def is_good_parity(rho, a, b=1):
    return (a + b) % 2 == rho.parity_class


def is_good_exponent(rho, x):
    """rho|.|^x lies on the good line: rho x S_{2|x|+1} is of good parity."""
    return (half(x).twice - rho.parity_class) % 2 == 0


@dataclass(frozen=True, order=False)
class Segment:
    rho: CuspidalLabel
    x: HalfInt
    y: HalfInt

    def __post_init__(self):
        x, y = half(self.x), half(self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if not (x - y).is_integer():
            raise ValueError(f"[{x},{y}]: x - y must be an integer")
        if x - y < -1:
            raise ValueError(f"[{x},{y}]: x - y must be at least -1")

    @property
    def length(self):
        return int(self.x - self.y) + 1

    @property
    def degenerate(self):
        return self.length == 0

    def dual(self):
        return Segment(self.rho, -self.y, -self.x)

    def shift(self, s):
        return Segment(self.rho, self.x + s, self.y + s)

    def exponents(self):
        """x, x-1, ..., y."""
        return [self.x - i for i in range(self.length)]

    def sort_key(self):
        return ((self.x + self.y).twice, self.x.twice, self.rho.id)

    def __str__(self):
        return f"[{self.x},{self.y}]"

    def __repr__(self):
        return f"Segment({self.rho.id}, {self.x}, {self.y})"


def seg(x, y, rho=DEFAULT_RHO):
    return Segment(rho, half(x), half(y))


def segments_linked(s1, s2):
    if s1.rho != s2.rho:
        return False
    if not (s1.x - s2.x).is_integer():
        return False
    if s1.degenerate or s2.degenerate:
        return False
    lo1, hi1 = s1.y, s1.x
    lo2, hi2 = s2.y, s2.x
    # union a segment: no gap between them
    if lo1 > hi2 + 1 or lo2 > hi1 + 1:
        return False
    contains_1 = lo1 <= lo2 and hi2 <= hi1
    contains_2 = lo2 <= lo1 and hi1 <= hi2
    return not (contains_1 or contains_2)


def dual_dimension_of(summands):
    return sum(rho.dim * a * b for rho, a, b in summands)
