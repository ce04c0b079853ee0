"""Scalars in Q_ell.

Two backends share one arithmetic surface:

* exact mode: rationals (``gmpy2.mpq``) viewed inside Q_ell through their
  ell-adic valuation;
* capped mode: :class:`CappedScalar`, ``ell**v * unit`` with the unit known
  modulo ``ell**prec``.

Mixed expressions coerce the exact operand to the precision of the capped
one, so every capped result carries a correctly propagated precision.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import operator

import gmpy2
from gmpy2 import mpq, mpz

from . import _reals
from .errors import (
    BackendUnsupported,
    DivisionByIndistinguishableZero,
    ParseError,
    PrecisionExhausted,
)

INF = math.inf
MPQ = type(mpq(0))
ONE = mpq(1)
ZERO = mpq(0)


def exact(x):
    """Coerce ``x`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq``/``mpz`` and strings such as ``"6/1"``.
    Floats are refused: there are no floating-point ell-adics here.
    """
    if isinstance(x, MPQ):
        return x
    if isinstance(x, CappedScalar):
        raise BackendUnsupported("capped scalar where an exact rational is required")
    if isinstance(x, float):
        raise TypeError("floating-point values cannot be used as ell-adic scalars")
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


@lru_cache(maxsize=None)
def _ell_pow(ell, e):
    return ell**e


def _vint(n, ell):
    return int(gmpy2.remove(mpz(n), ell)[1])


def exact_valuation(x, ell):
    if x == 0:
        return INF
    return _vint(x.numerator, ell) - _vint(x.denominator, ell)


def is_exact(x):
    return not isinstance(x, CappedScalar)


def is_null(x):
    """True when ``x`` is zero or indistinguishable from zero."""
    if isinstance(x, CappedScalar):
        return x.unit == 0
    return x == 0


class CappedScalar:
    """An element ``ell**v * unit + O(ell**(v + prec))`` of Q_ell.

    Three states are represented:

    * nonzero: ``1 <= prec`` and ``unit`` coprime to ``ell``;
    * indistinguishable from zero ("null"): ``unit == prec == 0`` and ``v``
      is the absolute precision, i.e. the value is ``O(ell**v)``;
    * exact zero: ``unit == prec == 0`` and ``v == inf``.

    Instances are treated as immutable; no method mutates one.
    """

    __slots__ = ("ell", "v", "unit", "prec")

    def __init__(self, ell, v, unit, prec):
        self.ell = ell
        self.v = v
        self.unit = unit
        self.prec = prec

    # construction -------------------------------------------------------

    @classmethod
    def _make(cls, ell, v, digits, absprec):
        """Normalize ``ell**v * digits + O(ell**absprec)``."""
        if absprec == INF:
            if digits != 0:
                raise ValueError("only zero can be exact in capped mode")
            return cls(ell, INF, 0, 0)
        e = absprec - v
        if e <= 0:
            return cls(ell, absprec, 0, 0)
        digits %= ell**e
        if digits == 0:
            return cls(ell, absprec, 0, 0)
        k = _vint(digits, ell)
        if k:
            digits //= ell**k
        return cls(ell, v + k, int(digits), e - k)

    @classmethod
    def from_rational(cls, x, ell, prec):
        """Round an exact rational to ``prec`` digits of relative precision."""
        if prec < 1:
            raise PrecisionExhausted("capped precision must be at least one digit")
        x = exact(x)
        if x == 0:
            return cls.zero(ell)
        v = exact_valuation(x, ell)
        num = int(x.numerator)
        den = int(x.denominator)
        if v > 0:
            num //= ell**v
        elif v < 0:
            den //= ell**(-v)
        mod = ell**prec
        return cls(ell, v, num * pow(den, -1, mod) % mod, prec)

    @classmethod
    def zero(cls, ell):
        return cls(ell, INF, 0, 0)

    @classmethod
    def null(cls, ell, absprec):
        return cls(ell, absprec, 0, 0)

    # inspection ---------------------------------------------------------

    @property
    def absprec(self):
        return self.v + self.prec

    @property
    def is_exact_zero(self):
        return self.v == INF

    @property
    def is_null(self):
        return self.unit == 0

    def to_exact(self):
        """The canonical rational lift (``0`` for null values)."""
        if self.unit == 0:
            return ZERO
        if self.v >= 0:
            return mpq(self.unit * self.ell**self.v)
        return mpq(self.unit, self.ell ** (-self.v))

    def congruent(self, x):
        """Whether the exact rational ``x`` agrees with ``self`` to its precision."""
        if self.is_exact_zero:
            return exact(x) == 0
        return exact_valuation(exact(x) - self.to_exact(), self.ell) >= self.absprec

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CappedScalar):
            if other.ell != self.ell:
                raise ValueError(f"prime mismatch: {self.ell} vs {other.ell}")
            return other
        x = exact(other)
        if x == 0:
            return CappedScalar.zero(self.ell)
        if self.is_exact_zero:
            return None
        # enough digits that neither + nor * loses precision to the coercion
        vx = exact_valuation(x, self.ell)
        return CappedScalar.from_rational(
            x, self.ell, max(self.prec, self.absprec - vx, 1)
        )

    def __add__(self, other):
        if type(other) is CappedScalar and self.unit and other.unit and self.v != other.v \
                and other.ell == self.ell:
            # distinct valuations: the lower one stays a unit, no renormalization
            a, b = (self, other) if self.v < other.v else (other, self)
            e = min(a.prec, b.v + b.prec - a.v)
            mod = _ell_pow(a.ell, e)
            digits = (a.unit + b.unit * _ell_pow(a.ell, b.v - a.v)) % mod
            return CappedScalar(a.ell, a.v, digits, e)
        o = self._coerce(other)
        if o is None:
            return exact(other)
        if o.is_exact_zero:
            return self
        if self.is_exact_zero:
            return o
        m = min(self.v, o.v)
        digits = self.unit * self.ell ** (self.v - m) + o.unit * self.ell ** (o.v - m)
        return CappedScalar._make(self.ell, m, digits, min(self.absprec, o.absprec))

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return CappedScalar(self.ell, self.v, (-self.unit) % self.ell**self.prec, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return -exact(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is CappedScalar and self.unit and other.unit and other.ell == self.ell:
            # unit times unit is a unit
            e = min(self.prec, other.prec)
            return CappedScalar(self.ell, self.v + other.v,
                                self.unit * other.unit % _ell_pow(self.ell, e), e)
        if type(other) is MPQ and other == 1:
            return self
        o = self._coerce(other)
        if o is None or o.is_exact_zero or self.is_exact_zero:
            return CappedScalar.zero(self.ell)
        absprec = min(self.v + o.absprec, o.v + self.absprec)
        return CappedScalar._make(self.ell, self.v + o.v, self.unit * o.unit, absprec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return CappedScalar.zero(self.ell)
        if o.unit == 0:
            raise DivisionByIndistinguishableZero(f"division by {o!r}")
        if self.is_exact_zero:
            return self
        v = self.v - o.v
        absprec = min(self.absprec - o.v, v + o.prec)
        e = absprec - v
        if e <= 0 or self.unit == 0:
            return CappedScalar.null(self.ell, absprec)
        mod = self.ell**e
        return CappedScalar._make(self.ell, v, self.unit * pow(o.unit, -1, mod), absprec)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            raise DivisionByIndistinguishableZero("division by exact zero")
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return CappedScalar.from_rational(1, self.ell, max(self.prec, 1)) / self ** (-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        if result is None:
            return CappedScalar.from_rational(1, self.ell, max(self.prec, 1))
        return result

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CappedScalar):
            return (self.ell, self.v, self.unit, self.prec) == (
                other.ell, other.v, other.unit, other.prec)
        try:
            x = exact(other)
        except (TypeError, ValueError):
            return NotImplemented
        # only the exact zero is exactly known in capped mode
        return self.is_exact_zero and x == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.ell, self.v, self.unit, self.prec))

    def __repr__(self):
        if self.is_exact_zero:
            return "0"
        if self.unit == 0:
            return f"O({self.ell}^{self.v})"
        return f"{self.ell}^{self.v}*{self.unit} + O({self.ell}^{self.absprec})"


LadicScalar = (MPQ, CappedScalar)


def valuation(a, ell=None):
    """ell-adic valuation; ``inf`` for exact zero.

    For a capped value whose known digits are all zero the certified lower
    bound (its absolute precision) is returned; :func:`is_null` tells the
    two situations apart.
    """
    if isinstance(a, CappedScalar):
        return a.v
    if ell is None:
        raise ValueError("exact valuation needs the prime")
    return exact_valuation(exact(a), ell)


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul,
        "div": operator.truediv}


def scalar_arith(a, b, op, *, strict=False):
    """Apply ``op`` in {add, sub, mul, div}.

    With ``strict`` a capped result that kept no known digit raises
    :class:`PrecisionExhausted` instead of returning ``O(ell**k)``.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown scalar operation {op!r}") from None
    if op == "div" and not isinstance(b, CappedScalar) and not isinstance(a, CappedScalar):
        if exact(b) == 0:
            raise DivisionByIndistinguishableZero("division by exact zero")
    out = fn(a, b)
    if strict and isinstance(out, CappedScalar) and out.is_null and not out.is_exact_zero:
        raise PrecisionExhausted(f"{op} left no known digit: {out!r}")
    return out


def to_capped(x, ell, prec):
    if isinstance(x, CappedScalar):
        return x
    return CappedScalar.from_rational(x, ell, prec)


def to_exact(x):
    if isinstance(x, CappedScalar):
        return x.to_exact()
    return exact(x)


# JSON ---------------------------------------------------------------------------


def scalar_to_json(x):
    if isinstance(x, CappedScalar):
        return {"mode": "capped", "v": None if x.v == INF else int(x.v),
                "unit": int(x.unit), "prec": int(x.prec), "ell": int(x.ell)}
    x = exact(x)
    return {"mode": "exact", "num": int(x.numerator), "den": int(x.denominator)}


def scalar_from_json(obj, path="$"):
    """Parse a scalar object; bare ints and ``"p/q"`` strings are accepted too."""
    if isinstance(obj, bool):
        raise ParseError("boolean is not a scalar", path)
    if isinstance(obj, int):
        return mpq(obj)
    if isinstance(obj, str):
        try:
            return exact(obj)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational literal {obj!r}", path) from None
    if not isinstance(obj, dict):
        raise ParseError("scalar must be an object, integer or rational string", path)
    mode = obj.get("mode")
    try:
        if mode == "exact":
            num, den = obj["num"], obj["den"]
            if not isinstance(num, int) or not isinstance(den, int) or den == 0:
                raise ParseError("exact scalar needs integer num and nonzero den", path)
            return mpq(num, den)
        if mode == "capped":
            ell, v, unit, prec = obj["ell"], obj["v"], obj["unit"], obj["prec"]
            if v is None:
                return CappedScalar.zero(ell)
            if prec == 0:
                return CappedScalar.null(ell, v)
            if unit % ell == 0 or not 0 < unit < ell**prec:
                raise ParseError("capped unit must be coprime to ell and below ell**prec", path)
            return CappedScalar(ell, v, unit, prec)
    except KeyError as exc:
        raise ParseError(f"scalar missing field {exc.args[0]!r}", path) from None
    raise ParseError(f"unknown scalar mode {mode!r}", path)


# log-scale magnitudes -------------------------------------------------------------


@dataclass(frozen=True)
class LogNorm:
    """A magnitude ``ell**(-s)``; ``s = inf`` encodes zero.

    ``s`` is a ``Fraction`` when the magnitude is known exactly and a float
    (already rounded in the safe direction) otherwise.  ``upper`` marks a
    value that is only an upper bound because some coefficient was
    indistinguishable from zero; ``null`` marks that no coefficient was
    distinguishable from zero at all.
    """

    s: object
    ell: int
    upper: bool = False
    null: bool = False

    @property
    def exact(self):
        return self.s == INF or isinstance(self.s, (Fraction, int))

    @property
    def is_zero(self):
        return self.s == INF

    @property
    def vanishes(self):
        """Zero, or zero within the tracked precision."""
        return self.s == INF or self.null

    def value(self):
        return 0.0 if self.s == INF else float(self.ell) ** (-float(self.s))

    def interval(self):
        if self.s == INF:
            return _reals.interval(0)
        return _reals.ell_power(self.ell, self.s)

    def times(self, other):
        return LogNorm(self.s + other.s, self.ell, self.upper or other.upper,
                       self.null or other.null)

    def inflate_ulp(self):
        """The next larger magnitude one float ulp away in log scale."""
        if self.s == INF:
            raise ValueError("cannot inflate the zero norm")
        t = math.nextafter(float(self.s), -INF)
        while Fraction(t) >= self.s:
            t = math.nextafter(t, -INF)
        return LogNorm(Fraction(t), self.ell, self.upper, self.null)

    # magnitude order: larger s means a smaller norm
    def __lt__(self, other):
        return self.s > _s_of(other)

    def __le__(self, other):
        return self.s >= _s_of(other)

    def __gt__(self, other):
        return self.s < _s_of(other)

    def __ge__(self, other):
        return self.s <= _s_of(other)

    def to_json(self):
        return {"log_ell": _s_json(self.s), "value": self.value(),
                "upper_bound": self.upper, "indistinguishable": self.null}

    def __repr__(self):
        if self.s == INF:
            return "LogNorm(0)"
        flag = " (upper bound)" if self.upper else ""
        return f"LogNorm({self.ell}^-({self.s})){flag}"


def _s_of(x):
    s = getattr(x, "s", None)
    if s is None:
        raise TypeError(f"cannot compare LogNorm with {type(x).__name__}")
    return s


def _s_json(s):
    if s == INF:
        return "inf"
    if isinstance(s, Fraction):
        return str(s)
    return float(s)
