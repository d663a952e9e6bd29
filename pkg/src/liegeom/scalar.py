"""Exact scalars: rationals, sparse multivariate polynomials and rational functions over Q.

A scalar is one of

* a rational number (``int`` or :class:`fractions.Fraction`),
* a :class:`Poly` -- a sparse polynomial in named parameters with rational
  coefficients and at least one non-constant term,
* a :class:`RationalFunction` -- ``num / den`` with a non-constant
  polynomial denominator.

Every arithmetic result is demoted to the simplest of these forms, so a
computation that never touches a parameter stays in plain ``Fraction``
arithmetic, and ``x == 0`` is an exact identity test for any scalar.

Monomials are packed into a single Python integer, one 16-bit exponent field
per parameter; multiplying monomials is integer addition.  Parameter names are
interned in a process-wide, append-only registry.
"""

from __future__ import annotations

import ast
import heapq
import threading
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Union

__all__ = [
    "Poly",
    "RationalFunction",
    "Scalar",
    "ScalarParseError",
    "as_fraction",
    "divide",
    "evaluate",
    "free_parameters",
    "is_rational",
    "make_ratio",
    "numer_denom",
    "parse_scalar",
    "reciprocal",
    "scalar_str",
    "size",
    "substitute",
    "var",
]

_BITS = 16
_FIELD = (1 << _BITS) - 1
_MAX_EXP = (1 << (_BITS - 1)) - 1

_names: list[str] = []
_index: dict[str, int] = {}
_guard = 0  # bit 15 of every registered field, used for monomial divisibility tests
_lock = threading.Lock()


def _var_index(name: str) -> int:
    global _guard
    idx = _index.get(name)
    if idx is not None:
        return idx
    if not name.isidentifier():
        raise ValueError(f"invalid parameter name {name!r}")
    with _lock:
        idx = _index.get(name)
        if idx is None:
            idx = len(_names)
            _names.append(name)
            _index[name] = idx
            _guard |= 1 << (_BITS * idx + _BITS - 1)
    return idx


def _unpack(mono: int) -> dict[int, int]:
    out = {}
    i = 0
    while mono:
        e = mono & _FIELD
        if e:
            out[i] = e
        mono >>= _BITS
        i += 1
    return out


def _pack(exps: Mapping[int, int]) -> int:
    mono = 0
    for i, e in exps.items():
        if e < 0 or e > _MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        mono |= e << (_BITS * i)
    return mono


def _max_exponent(mono: int) -> int:
    return max(_unpack(mono).values(), default=0)


def _mono_div(a: int, b: int) -> int | None:
    """Return a/b if monomial b divides a, else None."""
    d = (a | _guard) - b
    if d & _guard != _guard:
        return None
    return d & ~_guard


def _coeff(c) -> int | Fraction:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _mono_key(mono: int) -> tuple:
    """Sort key: graded, then lexicographic on parameter *names*."""
    exps = _unpack(mono)
    named = sorted((_names[i], e) for i, e in exps.items())
    return (-sum(exps.values()), tuple((n, -e) for n, e in named))


def _mono_str(mono: int) -> str:
    parts = []
    for name, e in sorted((_names[i], e) for i, e in _unpack(mono).items()):
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class Poly:
    """Sparse polynomial with rational coefficients; never constant.

    Construct through :func:`var`, arithmetic, or :meth:`from_terms`; the
    latter demotes constants to plain rationals.
    """

    __slots__ = ("_terms", "_bound")

    def __init__(self, terms: dict[int, int | Fraction], bound: int | None = None):
        # trusted constructor: no zero coefficients, at least one non-constant monomial
        self._terms = terms
        self._bound = bound if bound is not None else max(map(_max_exponent, terms))

    @staticmethod
    def from_terms(terms: dict[int, int | Fraction], bound: int | None = None) -> Scalar:
        terms = {m: c for m, c in terms.items() if c != 0}
        if not terms:
            return 0
        if len(terms) == 1 and 0 in terms:
            return terms[0]
        return Poly(terms, bound)

    @property
    def terms(self) -> dict[int, int | Fraction]:
        return dict(self._terms)

    def monomials(self) -> Iterable[tuple[dict[str, int], int | Fraction]]:
        for mono, c in self._terms.items():
            yield {_names[i]: e for i, e in _unpack(mono).items()}, c

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def variables(self) -> frozenset[str]:
        mask = 0
        for mono in self._terms:
            mask |= mono
        return frozenset(_names[i] for i in _unpack(mask))

    def degree(self, name: str | None = None) -> int:
        if name is None:
            return max(sum(_unpack(m).values()) for m in self._terms)
        idx = _index.get(name)
        if idx is None:
            return 0
        return max((_unpack(m).get(idx, 0) for m in self._terms), default=0)

    def leading(self) -> tuple[int, int | Fraction]:
        mono = max(self._terms)
        return mono, self._terms[mono]

    # -- arithmetic ----------------------------------------------------------

    def _add(self, other, sign: int) -> Scalar:
        out = dict(self._terms)
        if isinstance(other, Poly):
            for m, c in other._terms.items():
                v = out.get(m, 0) + sign * c
                if v:
                    out[m] = _coeff(v)
                else:
                    out.pop(m, None)
            return Poly.from_terms(out, max(self._bound, other._bound))
        c = _coeff(other)
        v = out.get(0, 0) + sign * c
        if v:
            out[0] = _coeff(v)
        else:
            out.pop(0, None)
        return Poly.from_terms(out, self._bound)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return other + self
        if isinstance(other, (Poly, Rational)):
            return self._add(other, 1)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return -other + self
        if isinstance(other, (Poly, Rational)):
            return self._add(other, -1)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return (-self)._add(other, 1)
        return NotImplemented

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self._terms.items()}, self._bound)

    def __pos__(self) -> Poly:
        return self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return _poly_mul(self, other)
        if isinstance(other, RationalFunction):
            return other * self
        if isinstance(other, Rational):
            c = _coeff(other)
            if c == 0:
                return 0
            if c == 1:
                return self
            return Poly({m: _coeff(v * c) for m, v in self._terms.items()}, self._bound)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, (Poly, RationalFunction)):
            return make_ratio(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return make_ratio(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return reciprocal(self ** (-k))
        result: Scalar = 1
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, RationalFunction):
            return other == self
        if isinstance(other, Rational):
            return False  # never constant
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return True

    # -- exact division ------------------------------------------------------

    def divexact(self, other: Poly) -> Scalar | None:
        """Quotient if ``other`` divides ``self`` exactly, otherwise ``None``."""
        lm_b, lc_b = other.leading()
        rem = dict(self._terms)
        heap = [-m for m in rem]
        heapq.heapify(heap)
        quot: dict[int, int | Fraction] = {}
        bterms = other._terms.items()
        while rem:
            m = -heapq.heappop(heap)
            c = rem.get(m)
            if c is None:
                continue
            q = _mono_div(m, lm_b)
            if q is None:
                return None
            qc = _coeff(Fraction(c) / lc_b)
            quot[q] = qc
            for mb, cb in bterms:
                t = mb + q
                v = rem.get(t, 0) - qc * cb
                if v:
                    if t not in rem:
                        heapq.heappush(heap, -t)
                    rem[t] = _coeff(v)
                else:
                    rem.pop(t, None)
        return Poly.from_terms(quot)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, values: Mapping[str, object], *, zero=0, one=1):
        """Evaluate with every parameter bound; values may be any ring elements."""
        idx_vals = {}
        for mono in self._terms:
            for i in _unpack(mono):
                if i not in idx_vals:
                    name = _names[i]
                    if name not in values:
                        raise KeyError(f"no value for parameter {name!r}")
                    idx_vals[i] = values[name]
        total = zero
        for mono, c in self._terms.items():
            term = one * c
            for i, e in _unpack(mono).items():
                term = term * idx_vals[i] ** e
            total = total + term
        return total

    def substitute(self, values: Mapping[str, Scalar]) -> Scalar:
        """Replace some parameters by scalars; the others stay symbolic."""
        cache: dict[int, Scalar] = {}
        total: Scalar = 0
        for mono, c in self._terms.items():
            term: Scalar = c
            for i, e in _unpack(mono).items():
                name = _names[i]
                if name in values:
                    key = (i << 20) | e
                    p = cache.get(key)
                    if p is None:
                        v = values[name]
                        p = v**e if not isinstance(v, Rational) else Fraction(v) ** e
                        cache[key] = p
                    term = term * p
                else:
                    term = term * Poly({e << (_BITS * i): 1}, e)
            total = total + term
        return total

    def __str__(self) -> str:
        return _poly_str(self._terms)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _poly_mul(a: Poly, b: Poly) -> Scalar:
    bound = a._bound + b._bound
    if bound > _MAX_EXP:
        bound = _max_exp_of(a) + _max_exp_of(b)
        if bound > _MAX_EXP:
            raise OverflowError("polynomial exponent exceeds 32767")
    if len(a._terms) > len(b._terms):
        a, b = b, a
    out: dict[int, int | Fraction] = {}
    get = out.get
    bt = list(b._terms.items())
    frac = False
    for m1, c1 in a._terms.items():
        for m2, c2 in bt:
            m = m1 + m2
            out[m] = get(m, 0) + c1 * c2
        frac = frac or isinstance(c1, Fraction)
    if frac or any(isinstance(c, Fraction) for _, c in bt):
        out = {m: _coeff(c) for m, c in out.items() if c}
    else:
        out = {m: c for m, c in out.items() if c}
    return Poly.from_terms(out, bound)


def _max_exp_of(p: Poly) -> int:
    p._bound = max(map(_max_exponent, p._terms))
    return p._bound


def _fmt_coeff(c) -> str:
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def _poly_str(terms: Mapping[int, int | Fraction]) -> str:
    if not terms:
        return "0"
    pieces = []
    for mono in sorted(terms, key=_mono_key):
        c = terms[mono]
        neg = c < 0
        mag = -c if neg else c
        ms = _mono_str(mono)
        if not ms:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = ms
        else:
            body = f"{_fmt_coeff(mag)}*{ms}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


class RationalFunction:
    """``num / den`` with ``den`` a non-constant polynomial.

    Common factors are cancelled only when cheap to detect (exact division,
    monomial and rational content), so the representation is not canonical;
    equality is decided by cross-multiplication.  :meth:`cancel` computes the
    lowest-terms form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Poly):
        self.num = num
        self.den = den

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            n1, d1, n2, d2 = self.num, self.den, other.num, other.den
            if d1 == d2:
                return make_ratio(n1 + n2, d1)
            q = d1.divexact(d2) if len(d1) >= len(d2) else None
            if q is not None:
                return make_ratio(n1 + n2 * q, d1)
            q = d2.divexact(d1) if len(d2) >= len(d1) else None
            if q is not None:
                return make_ratio(n1 * q + n2, d2)
            return make_ratio(n1 * d2 + n2 * d1, d1 * d2)
        if isinstance(other, (Poly, Rational)):
            return make_ratio(self.num + other * self.den, self.den)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (RationalFunction, Poly, Rational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (Poly, Rational)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return _ratio_mul(self.num, self.den, other.num, other.den)
        if isinstance(other, Poly):
            q = other.divexact(self.den)
            if q is not None:
                return self.num * q
            return make_ratio(self.num * other, self.den)
        if isinstance(other, Rational):
            if other == 0:
                return 0
            return RationalFunction(self.num * other, self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (RationalFunction, Poly, Rational)):
            return self * reciprocal(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (Poly, Rational)):
            return reciprocal(self) * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return reciprocal(self) ** (-k)
        if k == 0:
            return 1
        return make_ratio(self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num * other.den == other.num * self.den
        if isinstance(other, (Poly, Rational)):
            return self.num == other * self.den
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return True

    def evaluate(self, values: Mapping[str, object], **kw):
        num = self.num.evaluate(values, **kw) if isinstance(self.num, Poly) else self.num
        den = self.den.evaluate(values, **kw)
        if isinstance(num, Rational) and isinstance(den, Rational):
            return divide(num, den)
        return num / den

    def substitute(self, values: Mapping[str, Scalar]) -> Scalar:
        return substitute(self.num, values) / self.den.substitute(values)

    @property
    def variables(self) -> frozenset[str]:
        return free_parameters(self.num) | self.den.variables

    def cancel(self) -> Scalar:
        """Lowest-terms form (polynomial gcd via sympy)."""
        from sympy import Poly as SPoly, QQ

        names = sorted(self.variables)
        if isinstance(self.num, Rational):
            n = SPoly(self.num, *_sym(names), domain=QQ)
        else:
            n = SPoly.from_dict(_exp_dict(self.num, names), *_sym(names), domain=QQ)
        d = SPoly.from_dict(_exp_dict(self.den, names), *_sym(names), domain=QQ)
        cf, n, d = n.cancel(d)
        num = _from_exp_dict(n.as_dict(), names)
        den = _from_exp_dict(d.as_dict(), names)
        cf = Fraction(int(cf.p), int(cf.q))
        if cf != 1:
            num = num * _demote(cf)
        if isinstance(den, Rational):
            return num / den
        return _normalized_ratio(num, den)

    def __str__(self) -> str:
        return scalar_str(self)

    def __repr__(self) -> str:
        return f"RationalFunction({scalar_str(self)!r})"


def _sym(names):
    from sympy import Symbol

    return [Symbol(n) for n in names]


def _exp_dict(p: Poly, names: list[str]) -> dict:
    pos = {_index[n]: k for k, n in enumerate(names)}
    out = {}
    for mono, c in p._terms.items():
        e = [0] * len(names)
        for i, x in _unpack(mono).items():
            e[pos[i]] = x
        out[tuple(e)] = Fraction(c)
    return out


def _from_exp_dict(d: Mapping[tuple, object], names: list[str]) -> Scalar:
    idx = [_var_index(n) for n in names]
    terms = {}
    for exps, c in d.items():
        terms[_pack({idx[k]: e for k, e in enumerate(exps) if e})] = _coeff(Fraction(int(c.numerator), int(c.denominator)))
    return Poly.from_terms(terms)


def _content_gcd(p: Poly) -> dict[int, int]:
    """Exponents of the largest monomial dividing every term of ``p``."""
    common = None
    for mono in p._terms:
        e = _unpack(mono)
        common = e if common is None else {i: min(x, e[i]) for i, x in common.items() if i in e}
        if not common:
            return {}
    return common or {}


def _strip_monomial(p: Poly, mono: int) -> Scalar:
    return Poly.from_terms({m - mono: c for m, c in p._terms.items()})


def _normalized_ratio(num: Scalar, den: Poly) -> Scalar:
    if isinstance(num, Poly):
        g = _content_gcd(num)
        if g:
            h = _content_gcd(den)
            common = {i: min(e, h[i]) for i, e in g.items() if i in h}
            if common:
                mono = _pack(common)
                num = _strip_monomial(num, mono)
                den = _strip_monomial(den, mono)
                if not isinstance(den, Poly):
                    return divide(num, den)
    _, lc = den.leading()
    if lc != 1:
        inv = 1 / Fraction(lc)
        num = num * inv
        den = den * inv
    return RationalFunction(num, den)


def make_ratio(num: Scalar, den: Scalar) -> Scalar:
    """``num / den`` demoted to the simplest scalar form."""
    if isinstance(den, RationalFunction) or isinstance(num, RationalFunction):
        return num * reciprocal(den)
    if isinstance(den, Rational):
        return divide(num, den)
    if num == 0:
        return 0
    if isinstance(num, Poly):
        q = num.divexact(den)
        if q is not None:
            return q
    return _normalized_ratio(num, den)


def divide(a: Scalar, b: Scalar) -> Scalar:
    """Exact quotient ``a / b`` for any scalars (never produces a float)."""
    if isinstance(b, Rational):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if isinstance(a, Rational):
            return _demote(Fraction(a) / Fraction(b))
        return a * (1 / Fraction(b))
    return make_ratio(a, b)


def _ratio_mul(n1: Scalar, d1: Poly, n2: Scalar, d2: Poly) -> Scalar:
    if isinstance(n1, Poly):
        q = n1.divexact(d2)
        if q is not None:
            return make_ratio(q * n2, d1)
    if isinstance(n2, Poly):
        q = n2.divexact(d1)
        if q is not None:
            return make_ratio(n1 * q, d2)
    return make_ratio(n1 * n2, d1 * d2)


def reciprocal(x: Scalar) -> Scalar:
    if isinstance(x, RationalFunction):
        if isinstance(x.num, Poly):
            return _normalized_ratio(x.den, x.num)
        return x.den * (1 / Fraction(x.num))
    if isinstance(x, Poly):
        return _normalized_ratio(1, x)
    if x == 0:
        raise ZeroDivisionError("reciprocal of zero")
    return 1 / Fraction(x)


Scalar = Union[int, Fraction, Poly, RationalFunction]


def var(name: str) -> Poly:
    """The polynomial consisting of a single parameter."""
    return Poly({1 << (_BITS * _var_index(name)): 1}, 1)


def is_rational(x) -> bool:
    return isinstance(x, Rational)


def as_fraction(x: Scalar) -> Fraction:
    if not isinstance(x, Rational):
        raise TypeError(f"expected a rational scalar, got {scalar_str(x)}")
    return Fraction(x)


def numer_denom(x: Scalar) -> tuple[Scalar, Scalar]:
    """``(num, den)`` with ``den`` a polynomial or 1; rationals keep their value in ``num``."""
    if isinstance(x, RationalFunction):
        return x.num, x.den
    return x, 1


def free_parameters(x: Scalar) -> frozenset[str]:
    if isinstance(x, (Poly, RationalFunction)):
        return x.variables
    return frozenset()


def size(x: Scalar) -> int:
    """Number of stored monomials (numerator plus denominator)."""
    if isinstance(x, Poly):
        return len(x)
    if isinstance(x, RationalFunction):
        return size(x.num) + len(x.den)
    return 1


def evaluate(x: Scalar, values: Mapping[str, object], **kw):
    """Evaluate at a full assignment; works for Fraction or float values."""
    if isinstance(x, (Poly, RationalFunction)):
        return x.evaluate(values, **kw)
    return x


def substitute(x: Scalar, values: Mapping[str, Scalar]) -> Scalar:
    if isinstance(x, (Poly, RationalFunction)):
        return x.substitute(values)
    return x


def scalar_str(x: Scalar) -> str:
    if isinstance(x, RationalFunction):
        n, d = x.num, x.den
        if d._terms[min(d._terms, key=_mono_key)] < 0:
            n, d = -n, -d
        num = scalar_str(n)
        den = str(d)
        if isinstance(n, Poly) and len(n) > 1:
            num = f"({num})"
        if len(d) > 1 or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"
    if isinstance(x, Poly):
        return str(x)
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


class ScalarParseError(ValueError):
    pass


_BINOPS: dict[type, Callable] = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: divide(a, b),
}


def parse_scalar(text: str | int, params: Iterable[str] | None = None) -> Scalar:
    """Parse a scalar literal such as ``"-3/4"`` or ``"w12*w45 - 2*a^2"``.

    If ``params`` is given, every identifier must be declared in it.
    """
    if isinstance(text, int):
        return text
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar literal must be a string, got {type(text).__name__}")
    allowed = None if params is None else set(params)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ScalarParseError(f"cannot parse scalar {text!r}: {exc.msg}") from None

    def walk(node) -> Scalar:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.Name):
            if allowed is not None and node.id not in allowed:
                raise ScalarParseError(f"undeclared parameter {node.id!r} in {text!r}")
            return var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = walk(node.right)
                if not isinstance(exp, int):
                    raise ScalarParseError(f"exponent must be an integer literal in {text!r}")
                base = walk(node.left)
                return Fraction(base) ** exp if isinstance(base, Rational) else base**exp
            op = _BINOPS.get(type(node.op))
            if op is not None:
                left, right = walk(node.left), walk(node.right)
                if isinstance(node.op, ast.Div) and right == 0:
                    raise ScalarParseError(f"division by zero in {text!r}")
                return _demote(op(left, right))
        raise ScalarParseError(f"unsupported syntax in scalar {text!r}")

    return walk(tree)


def _demote(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x
