"""Exact multivariate polynomials and reduced rational functions over QQ.

Every expression in the package lives in one polynomial ring with a fixed
variable ordering and graded-lexicographic monomial order.  Arithmetic and
GCDs are delegated to sympy's sparse ``PolyElement``; this module owns the
canonical form, substitution, evaluation and zero testing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

#: spectral variable, deformation variable, Painleve function and its
#: derivative, the four monodromy exponents, and auxiliary symbols.
VARIABLES = ("t", "x", "u", "u1", "th_inf", "th0", "th1", "thx", "gp", "g", "p", "c")
THETA_VARIABLES = ("th_inf", "th0", "th1", "thx")
#: symbols with no known derivative along the deformation flow
INERT = frozenset({"gp", "g"})

RING = PolyRing(VARIABLES, QQ, grlex)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_ZERO = RING.zero
_ONE = RING.one


def var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}; expected one of {VARIABLES}") from None


def to_qq(value):
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Rational):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class MultiPoly:
    """Sparse polynomial in the fixed variable set with exact rational coefficients."""

    __slots__ = ("_p",)

    def __init__(self, element=None):
        self._p = _ZERO if element is None else element

    @classmethod
    def var(cls, name: str) -> MultiPoly:
        return cls(RING.gens[var_index(name)])

    @classmethod
    def const(cls, value) -> MultiPoly:
        return cls(RING.ground_new(to_qq(value)))

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, object]) -> MultiPoly:
        return cls(RING.from_dict({tuple(m): to_qq(c) for m, c in terms.items() if c}))

    def terms(self) -> dict[tuple, Fraction]:
        return {m: to_fraction(c) for m, c in self._p.items()}

    def degree(self, name: str) -> int:
        """Degree in one variable; the zero polynomial has degree -1."""
        if not self._p:
            return -1
        i = var_index(name)
        return max(m[i] for m in self._p)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._p), default=-1)

    def is_zero(self) -> bool:
        return not self._p

    def diff(self, name: str) -> MultiPoly:
        return MultiPoly(self._p.diff(RING.gens[var_index(name)]))

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other._p
        if isinstance(other, (int, Rational)):
            return RING.ground_new(to_qq(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else MultiPoly(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else MultiPoly(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else MultiPoly(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else MultiPoly(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly(-self._p)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        return MultiPoly(self._p**n)

    def __truediv__(self, other):
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        return RatFunc(other) / RatFunc(self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self):
        return hash(self._p)

    def __repr__(self):
        from .grammar import format_poly

        return f"MultiPoly({format_poly(self)!r})"

    def __str__(self):
        from .grammar import format_poly

        return format_poly(self)


def _split(p, i: int) -> dict[int, object]:
    """Coefficients of ``p`` as a polynomial in generator ``i``."""
    out: dict[int, dict] = {}
    for m, c in p.items():
        k = m[i]
        out.setdefault(k, {})[m[:i] + (0,) + m[i + 1 :]] = c
    return {k: RING.from_dict(d) for k, d in out.items()}


def _compose(p, i: int, num, den):
    """Return (N, D) with p(var_i = num/den) = N/D and D = den**deg."""
    parts = _split(p, i)
    if not parts or list(parts) == [0]:
        return p, _ONE
    deg = max(parts)
    out = _ZERO
    num_pows = [_ONE]
    for _ in range(deg):
        num_pows.append(num_pows[-1] * num)
    den_pows = [_ONE]
    for _ in range(deg):
        den_pows.append(den_pows[-1] * den)
    for k, coeff in parts.items():
        out += coeff * num_pows[k] * den_pows[deg - k]
    return out, den_pows[deg]


def _eval_poly(p, values: Mapping[int, object]):
    total = 0
    for m, c in p.items():
        term = to_fraction(c)
        for i, e in enumerate(m):
            if e:
                term = term * values[i] ** e
        total = total + term
    return total


class RatFunc:
    """Reduced quotient of two MultiPolys.

    The denominator is nonzero, shares no factor with the numerator, and has
    leading coefficient 1 under the ring's monomial order, so equal rational
    functions have identical representations.
    """

    __slots__ = ("_n", "_d")

    def __init__(self, value=0, den=None):
        if isinstance(value, RatFunc) and den is None:
            self._n, self._d = value._n, value._d
            return
        n = _as_element(value)
        d = _ONE if den is None else _as_element(den)
        self._n, self._d = _normalize(n, d)

    @classmethod
    def _raw(cls, n, d) -> RatFunc:
        obj = cls.__new__(cls)
        obj._n, obj._d = n, d
        return obj

    @classmethod
    def var(cls, name: str) -> RatFunc:
        return cls._raw(RING.gens[var_index(name)], _ONE)

    @property
    def num(self) -> MultiPoly:
        return MultiPoly(self._n)

    @property
    def den(self) -> MultiPoly:
        return MultiPoly(self._d)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._n

    def is_polynomial(self) -> bool:
        return self._d == _ONE

    def is_constant(self) -> bool:
        return self._d == _ONE and (not self._n or self._n.is_ground)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return to_fraction(self._n.LC) if self._n else Fraction(0)

    def variables(self) -> set[str]:
        used = set()
        for p in (self._n, self._d):
            for m in p:
                used.update(VARIABLES[i] for i, e in enumerate(m) if e)
        return used

    def depends_on(self, name: str) -> bool:
        return self.degree(name) > 0

    def degree(self, name: str) -> int:
        """Largest power of ``name`` in numerator or denominator (0 if absent)."""
        i = var_index(name)
        return max(max((m[i] for m in self._n), default=0), max((m[i] for m in self._d), default=0))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._n, self._d, o._n, o._d
        if not a:
            return o
        if not c:
            return self
        if b == d:
            return RatFunc._reduced(a + c, b, b)
        g = b.gcd(d)
        if g == _ONE:
            return RatFunc._reduced(a * d + c * b, b * d, None)
        b1 = b.exquo(g)
        d1 = d.exquo(g)
        return RatFunc._reduced(a * d1 + c * b1, b1 * d, g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self._n, self._d)

    def __sub__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._n, self._d, o._n, o._d
        if not a or not c:
            return RatFunc._raw(_ZERO, _ONE)
        if d != _ONE:
            g1, a, d = a.cofactors(d)
        if b != _ONE:
            g2, c, b = c.cofactors(b)
        return RatFunc._monic(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self) -> RatFunc:
        if not self._n:
            raise ZeroDivisionError("division by the zero polynomial")
        return RatFunc._monic(self._d, self._n)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self._n**n, self._d**n)

    @classmethod
    def _reduced(cls, n, d, g) -> RatFunc:
        # Henrici: a common factor of n and d must divide g (None: no shortcut)
        if not n:
            return cls._raw(_ZERO, _ONE)
        if g is None:
            return cls._monic(n, d)
        if g != _ONE:
            h = n.gcd(g)
            if h != _ONE:
                n = n.exquo(h)
                d = d.exquo(h)
        return cls._monic(n, d)

    @classmethod
    def _monic(cls, n, d) -> RatFunc:
        lc = d.LC
        if lc != 1:
            n = n.quo_ground(lc)
            d = d.quo_ground(lc)
        return cls._raw(n, d)

    # -- calculus and substitution ------------------------------------------

    def diff(self, name: str) -> RatFunc:
        gen = RING.gens[var_index(name)]
        dn = self._n.diff(gen)
        if self._d == _ONE:
            return RatFunc._raw(dn, _ONE)
        dd = self._d.diff(gen)
        if not dd:
            return RatFunc(MultiPoly(dn), MultiPoly(self._d))
        return RatFunc(MultiPoly(dn * self._d - self._n * dd), MultiPoly(self._d * self._d))

    def subs(self, mapping: Mapping[str, object]) -> RatFunc:
        """Substitute variables by numbers or rational functions, one at a time."""
        n, d = self._n, self._d
        for name, value in mapping.items():
            r = RatFunc(value)
            i = var_index(name)
            n1, dn = _compose(n, i, r._n, r._d)
            d1, dd = _compose(d, i, r._n, r._d)
            n, d = n1 * dd, d1 * dn
            if not d:
                raise ZeroDivisionError(f"denominator vanishes after substituting {name} = {r}")
        return RatFunc(MultiPoly(n), MultiPoly(d))

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; exact when all values are rationals.

        Raises ZeroDivisionError when the denominator vanishes.
        """
        vals = {var_index(k): v for k, v in values.items()}
        needed = {VARIABLES.index(v) for v in self.variables()}
        missing = needed - set(vals)
        if missing:
            raise KeyError(f"no value given for {sorted(VARIABLES[i] for i in missing)}")
        den = _eval_poly(self._d, vals)
        if den == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {dict(values)}")
        return _eval_poly(self._n, vals) / den

    def to_callable(self, args: Iterable[str]):
        """Compile to a plain Python function of floats (or numpy arrays)."""
        from .grammar import python_source

        args = tuple(args)
        extra = self.variables() - set(args)
        if extra:
            raise ValueError(f"expression depends on {sorted(extra)} beyond {args}")
        src = f"lambda {', '.join(args)}: ({python_source(self.num)}) / ({python_source(self.den)})"
        return eval(src, {})  # noqa: S307 - source generated from our own term maps

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        return hash((self._n, self._d))

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        from .grammar import format_ratfunc

        return format_ratfunc(self)


def _as_element(value):
    if isinstance(value, MultiPoly):
        return value._p
    if isinstance(value, RatFunc):
        raise TypeError("use RatFunc(value) without a denominator to copy a RatFunc")
    if isinstance(value, str):
        return RING.gens[var_index(value)]
    return RING.ground_new(to_qq(value))


def _as_ratfunc(value) -> RatFunc | None:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MultiPoly):
        return RatFunc._raw(value._p, _ONE)
    if isinstance(value, (int, Rational)):
        return RatFunc._raw(RING.ground_new(to_qq(value)), _ONE)
    return None


def _normalize(n, d):
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    if not n:
        return _ZERO, _ONE
    if d != _ONE:
        _, n, d = n.cofactors(d)
    lc = d.LC
    if lc != 1:
        n = n.quo_ground(lc)
        d = d.quo_ground(lc)
    return n, d


def var(name: str) -> RatFunc:
    return RatFunc.var(name)


def const(value) -> RatFunc:
    return RatFunc(value)


# -- identity testing ---------------------------------------------------------


class EvaluationBudgetExceeded(RuntimeError):
    pass


def random_point(rng: random.Random, names: Iterable[str], height: int = 10**6) -> dict[str, Fraction]:
    return {n: Fraction(rng.randint(-height, height), rng.randint(1, 1000)) for n in names}


def is_zero(f: RatFunc, mode: str = "exact", *, rng: random.Random | None = None,
            trials: int = 3, max_retries: int = 50) -> bool:
    """Test whether ``f`` is the zero rational function.

    ``exact`` inspects the expanded numerator and is sound and complete.
    ``probabilistic`` evaluates at random rational points away from the
    denominator's zero set; a nonzero value proves ``f != 0``, while all-zero
    values only make ``f == 0`` overwhelmingly likely.
    """
    if mode == "exact":
        return f.is_zero()
    if mode != "probabilistic":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng or random.Random(0)
    names = sorted(f.variables())
    good = 0
    attempts = 0
    while good < trials:
        if attempts >= max_retries:
            raise EvaluationBudgetExceeded(
                f"no evaluation point off the pole set found in {max_retries} attempts"
            )
        attempts += 1
        pt = random_point(rng, names)
        vals = {var_index(k): v for k, v in pt.items()}
        if _eval_poly(f._d, vals) == 0:
            continue
        if _eval_poly(f._n, vals) != 0:
            return False
        good += 1
    return True
