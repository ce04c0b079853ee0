"""Truncated noncommutative power series over Q_ell.

A series in ``x_1, ..., x_n`` truncated at degree ``D`` is stored sparsely,
bucketed by weight: ``blocks[k]`` maps packed words of length ``k`` to their
coefficients.  A word ``(i_1, ..., i_k)`` with letters in ``1..n`` packs to
the base-``(n+1)`` integer with digits ``i_1 ... i_k``.  Numeric order of
packed codes is graded-lexicographic order of words, and concatenation is
``code_u * (n+1)**len(v) + code_v``.

Every operation is exact modulo ``I**(D+1)``, where ``I`` is the ideal of
series with zero constant term.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools

from . import _reals
from .errors import ConstantTermNonzero, RadiusViolation, ShapeMismatch
from .scalars import (
    INF,
    LogNorm,
    ONE,
    CappedScalar,
    exact,
    exact_valuation,
    scalar_from_json,
    scalar_to_json,
)


@lru_cache(maxsize=None)
def _powers(base, D):
    return tuple(base**k for k in range(D + 2))


def pack(word, n):
    code = 0
    base = n + 1
    for letter in word:
        if not 1 <= letter <= n:
            raise ValueError(f"letter {letter} outside 1..{n}")
        code = code * base + letter
    return code


def unpack(code, n):
    base = n + 1
    letters = []
    while code:
        code, d = divmod(code, base)
        letters.append(d)
    return tuple(reversed(letters))


def words(n, lo, hi):
    """All words of length ``lo..hi`` in graded-lex order."""
    for k in range(lo, hi + 1):
        yield from itertools.product(range(1, n + 1), repeat=k)


def graded_key(word):
    return (len(word), tuple(word))


def abelianize(word, n):
    """Letter multiplicities of ``word``."""
    counts = [0] * n
    for letter in word:
        counts[letter - 1] += 1
    return tuple(counts)


def _coeff(c):
    return c if isinstance(c, CappedScalar) else exact(c)


def _valuation(c, ell):
    if isinstance(c, CappedScalar):
        return c.v
    return exact_valuation(c, ell)


@dataclass(frozen=True)
class Radius:
    """A polydisk radius ``r = ell**(-s)`` with ``s > 0`` rational."""

    ell: int
    s: Fraction

    def __post_init__(self):
        s = Fraction(self.s)
        object.__setattr__(self, "s", s)
        if s <= 0:
            raise ValueError("radius must satisfy 0 < r < 1")

    @property
    def value(self):
        return float(self.ell) ** (-float(self.s))

    def interval(self):
        return _reals.ell_power(self.ell, self.s)

    def shrink(self, eta):
        """A rational radius at most ``r * (1 - eta)``, within rounding of it."""
        drop = _reals.log_base(1 - _reals.interval(eta), self.ell)
        return Radius(self.ell, _reals.upper_dyadic(_reals.interval(self.s) - drop))

    def divided_by_sqrt(self, B):
        """A rational radius at most ``r / sqrt(B)``."""
        grow = _reals.log_base(B, self.ell) / 2
        return Radius(self.ell, _reals.upper_dyadic(_reals.interval(self.s) + grow))

    def scaled(self, k):
        """The radius ``r * ell**(-k)``."""
        return Radius(self.ell, self.s + k)

    def __repr__(self):
        return f"Radius({self.ell}^-({self.s}))"


class NCSeries:
    """Sparse noncommutative series truncated at weight ``D``.

    Coefficients are exact rationals (``mpq``) or :class:`CappedScalar`.
    Instances are immutable.
    """

    __slots__ = ("n", "D", "ell", "_blocks")

    def __init__(self, n, D, ell, coeffs=None):
        if n < 1 or D < 0:
            raise ValueError("need n >= 1 and D >= 0")
        blocks = [dict() for _ in range(D + 1)]
        items = coeffs.items() if hasattr(coeffs, "items") else (coeffs or ())
        for word, c in items:
            word = tuple(word)
            if len(word) > D:
                continue
            c = _coeff(c)
            if isinstance(c, CappedScalar) and c.ell != ell:
                raise ShapeMismatch(f"coefficient prime {c.ell} differs from {ell}")
            code = pack(word, n)
            block = blocks[len(word)]
            if code in block:
                c = block[code] + c
            block[code] = c
        self.n, self.D, self.ell = n, D, ell
        self._blocks = tuple(_prune(b) for b in blocks)

    @classmethod
    def _from_blocks(cls, n, D, ell, blocks):
        obj = object.__new__(cls)
        obj.n, obj.D, obj.ell = n, D, ell
        obj._blocks = tuple(_prune(b) for b in blocks[: D + 1]) + tuple(
            {} for _ in range(D + 1 - len(blocks)))
        return obj

    @classmethod
    def zero(cls, n, D, ell):
        return cls._from_blocks(n, D, ell, [{} for _ in range(D + 1)])

    @classmethod
    def one(cls, n, D, ell):
        return cls(n, D, ell, {(): 1})

    @classmethod
    def var(cls, i, n, D, ell):
        return cls(n, D, ell, {(i,): 1})

    @classmethod
    def monomial(cls, word, c, n, D, ell):
        return cls(n, D, ell, {tuple(word): c})

    # inspection ---------------------------------------------------------

    @property
    def base(self):
        return self.n + 1

    def terms(self):
        """``(word, coefficient)`` pairs in graded-lex order."""
        out = []
        for block in self._blocks:
            for code in sorted(block):
                out.append((unpack(code, self.n), block[code]))
        return out

    def __iter__(self):
        return iter(self.terms())

    @property
    def coeffs(self):
        return dict(self.terms())

    def __getitem__(self, word):
        word = tuple(word)
        if len(word) > self.D:
            return exact(0)
        return self._blocks[len(word)].get(pack(word, self.n), exact(0))

    def __len__(self):
        return sum(len(b) for b in self._blocks)

    def __bool__(self):
        return any(self._blocks)

    @property
    def constant_term(self):
        return self._blocks[0].get(0, exact(0)) if self.D >= 0 else exact(0)

    def order(self):
        """Lowest weight carrying a coefficient; ``inf`` for the zero series."""
        for k, block in enumerate(self._blocks):
            if block:
                return k
        return INF

    def is_exact(self):
        return not any(isinstance(c, CappedScalar) for b in self._blocks for c in b.values())

    def _same_shape(self, other):
        if not isinstance(other, NCSeries):
            raise TypeError(f"expected NCSeries, got {type(other).__name__}")
        if self.n != other.n or self.ell != other.ell:
            raise ShapeMismatch(
                f"shape (n={self.n}, ell={self.ell}) vs (n={other.n}, ell={other.ell})")
        return min(self.D, other.D)

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.n, self.D, self.ell) == (other.n, other.D, other.ell) and \
            self._blocks == other._blocks

    __hash__ = None

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        D = self._same_shape(other)
        blocks = [dict(self._blocks[k]) for k in range(D + 1)]
        for k in range(D + 1):
            out = blocks[k]
            for code, c in other._blocks[k].items():
                prev = out.get(code)
                out[code] = c if prev is None else prev + c
        return NCSeries._from_blocks(self.n, D, self.ell, blocks)

    def __neg__(self):
        return NCSeries._from_blocks(
            self.n, self.D, self.ell, [{k: -c for k, c in b.items()} for b in self._blocks])

    def __sub__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = _coeff(c)
        return NCSeries._from_blocks(
            self.n, self.D, self.ell, [{k: c * x for k, x in b.items()} for b in self._blocks])

    def __mul__(self, other):
        if isinstance(other, NCSeries):
            D = self._same_shape(other)
            blocks = _mul_blocks(self._blocks, other._blocks, D, _powers(self.base, D))
            return NCSeries._from_blocks(self.n, D, self.ell, blocks)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # filtration ---------------------------------------------------------------

    def ideal_truncate(self, m):
        """The part of weight ``>= m``; ``f`` lies in ``I**m`` iff this equals ``f``."""
        if not 0 <= m <= self.D + 1:
            raise ValueError(f"need 0 <= m <= D+1, got m={m}")
        return NCSeries._from_blocks(
            self.n, self.D, self.ell,
            [b if k >= m else {} for k, b in enumerate(self._blocks)])

    def in_ideal_power(self, m):
        return all(not b for b in self._blocks[:m])

    def truncate(self, D):
        """Drop weights above ``D`` and lower the truncation degree to ``D``."""
        D = min(D, self.D)
        return NCSeries._from_blocks(self.n, D, self.ell, list(self._blocks[: D + 1]))

    def homogeneous(self, k):
        return NCSeries._from_blocks(
            self.n, self.D, self.ell,
            [b if j == k else {} for j, b in enumerate(self._blocks)])

    # norm ----------------------------------------------------------------

    def norm(self, r):
        """``sup_I |a_I| r**|I|`` over the stored words, in log scale."""
        s_r = r.s if isinstance(r, Radius) else Fraction(r)
        best = INF
        bound = INF
        for k, block in enumerate(self._blocks):
            if not block:
                continue
            vmin = INF
            nmin = INF
            for c in block.values():
                if isinstance(c, CappedScalar):
                    if c.unit == 0:
                        nmin = min(nmin, c.v)
                        continue
                    vmin = min(vmin, c.v)
                else:
                    vmin = min(vmin, exact_valuation(c, self.ell))
            if vmin != INF:
                best = min(best, vmin + k * s_r)
            if nmin != INF:
                bound = min(bound, nmin + k * s_r)
        if best == INF and bound == INF:
            return LogNorm(INF, self.ell)
        if bound < best or best == INF:
            return LogNorm(bound, self.ell, upper=True, null=best == INF)
        return LogNorm(best, self.ell)

    # substitution ---------------------------------------------------------

    def substitute(self, args):
        """``f(g_1, ..., g_n)`` truncated at the common degree."""
        args = list(getattr(args, "components", args))
        return substitute_many([self], args)[0]

    # serialization -----------------------------------------------------------

    def to_json(self):
        return {"n": self.n, "D": self.D, "ell": self.ell,
                "coeffs": [{"word": list(w), "c": scalar_to_json(c)} for w, c in self.terms()]}

    @classmethod
    def from_json(cls, obj, path="$"):
        from .io import series_from_json

        return series_from_json(obj, path)

    def __repr__(self):
        if not self:
            return f"NCSeries(0; n={self.n}, D={self.D}, ell={self.ell})"
        parts = []
        for w, c in self.terms():
            mono = "*".join(f"x{i}" for i in w) or "1"
            parts.append(f"({c})*{mono}" if w else f"({c})")
        body = " + ".join(parts)
        return f"NCSeries({body}; n={self.n}, D={self.D}, ell={self.ell})"


def _prune(block):
    # exact zeros go; capped values known only as O(ell**k) stay for the audit
    return {k: c for k, c in block.items() if c != 0}


def _mul_blocks(A, B, D, pw):
    out = [dict() for _ in range(D + 1)]
    for la in range(min(D, len(A) - 1) + 1):
        Aa = A[la]
        if not Aa:
            continue
        for lb in range(min(D - la, len(B) - 1) + 1):
            Bb = B[lb]
            if not Bb:
                continue
            m = pw[lb]
            o = out[la + lb]
            get = o.get
            bitems = list(Bb.items())
            for ca, xa in Aa.items():
                cam = ca * m
                for cb, xb in bitems:
                    k = cam + cb
                    t = xa * xb
                    prev = get(k)
                    o[k] = t if prev is None else prev + t
    return out


def _power_table(args, codes, D, base_in, base_out):
    """Products ``g_{i_1} ... g_{i_k}`` for every prefix of the given words.

    Codes are packed in base ``base_in``; the argument series may live in a
    different number of variables, packed in base ``base_out``.
    """
    pw = _powers(base_out, D)
    needed = set()
    for code in codes:
        while code and code not in needed:
            needed.add(code)
            code //= base_in
    table = {0: [{0: ONE}] + [dict() for _ in range(D)]}
    arg_blocks = [a._blocks for a in args]
    for code in sorted(needed):
        parent = table[code // base_in]
        table[code] = [_prune(b) for b in
                       _mul_blocks(parent, arg_blocks[code % base_in - 1], D, pw)]
    return table


def check_substitution_args(args):
    first = args[0]
    for g in args:
        if g.n != first.n or g.ell != first.ell:
            raise ShapeMismatch("substitution arguments disagree on n or ell")
        if g._blocks[0]:
            raise ConstantTermNonzero("substituted series must lie in I (zero constant term)")


def _horner(f, arg_blocks, D, base, pw):
    """``f(g)`` through the prefix trie of ``f``.

    With ``Q_w = a_w + sum_i x_i Q_{wi}`` we get
    ``Q_w(g) = a_w + sum_i g_i Q_{wi}(g)``, and only weights up to
    ``D - |w|`` of ``Q_w(g)`` can survive the outer products.
    """
    coeff = {}
    depth = {0: 0}
    for k in range(D + 1):
        for code, a in f._blocks[k].items():
            coeff[code] = a
            depth[code] = k
            c, kk = code // base, k - 1
            while c and c not in depth:
                depth[c] = kk
                c, kk = c // base, kk - 1
    children = {}
    for code in depth:
        if code:
            children.setdefault(code // base, []).append(code)
    Q = {}
    for code in sorted(depth, reverse=True):
        top = D - depth[code]
        acc = [dict() for _ in range(top + 1)]
        a = coeff.get(code)
        if a is not None:
            acc[0][0] = a
        for child in children.get(code, ()):
            sub = Q.pop(child)
            g = arg_blocks[child % base - 1]
            part = _mul_blocks(g, sub, top, pw)
            for kk in range(1, top + 1):
                o = acc[kk]
                get = o.get
                for c, x in part[kk].items():
                    prev = get(c)
                    o[c] = x if prev is None else prev + x
        Q[code] = acc
    return Q.get(0, [dict() for _ in range(D + 1)])


def substitute_many(fs, args, shared_table=False):
    """Substitute the same argument tuple into several series at once.

    By default each series is evaluated Horner-style over its own prefix
    trie; ``shared_table`` instead builds one table of argument products
    for all ``fs``, which pays off when the ``fs`` are many short monomials.
    """
    if not fs:
        return []
    args = list(args)
    f0 = fs[0]
    if len(args) != f0.n:
        raise ShapeMismatch(f"need {f0.n} substitution arguments, got {len(args)}")
    check_substitution_args(args)
    for f in fs:
        if f.ell != args[0].ell:
            raise ShapeMismatch("prime mismatch between series and arguments")
        if f.n != f0.n:
            raise ShapeMismatch("series disagree on n")
    n_out = args[0].n
    D = min([f.D for f in fs] + [g.D for g in args])
    base = f0.n + 1
    if not shared_table:
        pw = _powers(n_out + 1, D)
        arg_blocks = [g._blocks for g in args]
        return [NCSeries._from_blocks(n_out, D, f.ell,
                                      [_prune(b) for b in _horner(f, arg_blocks, D, base, pw)])
                for f in fs]
    codes = [code for f in fs for k in range(1, D + 1) for code in f._blocks[k]]
    table = _power_table(args, codes, D, base, n_out + 1)
    results = []
    for f in fs:
        out = [dict() for _ in range(D + 1)]
        for k in range(D + 1):
            for code, a in f._blocks[k].items():
                T = table[code]
                for kk in range(k, D + 1):
                    o = out[kk]
                    get = o.get
                    for c, x in T[kk].items():
                        t = a * x
                        prev = get(c)
                        o[c] = t if prev is None else prev + t
        results.append(NCSeries._from_blocks(n_out, D, f.ell, out))
    return results


# module-level operations --------------------------------------------------------


def norm_r(f, r):
    return f.norm(r)


def ring_op(f, g, op):
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scalar_mul":
        return f.scale(g)
    raise ValueError(f"unknown ring operation {op!r}")


def substitute(f, args):
    return f.substitute(args)


def ideal_truncate(f, m):
    return f.ideal_truncate(m)


def require_radius(r):
    if not isinstance(r, Radius):
        raise RadiusViolation(f"expected a Radius, got {r!r}")
    return r
