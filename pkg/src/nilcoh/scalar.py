"""Symbolic coefficients: rational functions over Q(i) in the deformation
parameters and their (independent) conjugates.

A parameter t and its conjugate conj(t) are separate symbols; evaluation
substitutes z for t and conj(z) for conj(t), which is exactly how |t|^2 =
t*conj(t) acquires its value.  Expressions are normalized as fractions of
multivariate polynomials so that "is this coefficient zero" is decidable;
no gcd cancellation is attempted (sizes here never warrant it).  Division
by a symbolically-zero denominator fails at construction; division that
only vanishes at specific parameter values fails at evaluation time.
"""

from __future__ import annotations

from .gauss import GaussRat

# A polynomial is a dict {monomial: GaussRat}; a monomial is a sorted tuple
# of ((name, barred), exponent) pairs with exponent > 0.  The empty tuple is
# the constant monomial.


def _p_const(c):
    return {(): c} if c else {}

_P_ONE = {(): GaussRat(1)}


def _p_add(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _p_neg(a):
    return {k: -v for k, v in a.items()}


def _m_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for sym, e in m2:
        exps[sym] = exps.get(sym, 0) + e
    return tuple(sorted(exps.items()))


def _p_mul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = _m_mul(k1, k2)
            s = out.get(k)
            s = v1 * v2 if s is None else s + v1 * v2
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
    return out


def _p_conj(a):
    out = {}
    for k, v in a.items():
        km = tuple(sorted((((name, 1 - bar), e) for (name, bar), e in k)))
        out[km] = v.conj()
    return out


def _p_eval(a, assign):
    total = GaussRat(0)
    for k, v in a.items():
        term = v
        for (name, bar), e in k:
            try:
                val = assign[name]
            except KeyError:
                raise ScalarEvalError(f"unassigned parameter '{name}'") from None
            if bar:
                val = val.conj()
            for _ in range(e):
                term = term * val
        total = total + term
    return total


def _p_params(a):
    names = set()
    for k in a:
        for (name, _bar), _e in k:
            names.add(name)
    return names


def _p_str(a):
    if not a:
        return "0"
    parts = []
    for k in sorted(a):
        c = a[k]
        syms = []
        for (name, bar), e in k:
            s = f"conj({name})" if bar else name
            if e > 1:
                s += f"^{e}"
            syms.append(s)
        cs = str(c)
        if syms and cs == "1":
            term = "*".join(syms)
        elif syms and cs == "-1":
            term = "-" + "*".join(syms)
        else:
            if ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            term = "*".join([cs] + syms)
        parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


class ScalarEvalError(ArithmeticError):
    """Raised when evaluation hits a vanishing denominator or a free parameter."""


class ScalarExpr:
    """A fraction num/den of polynomials over Q(i) in parameter symbols."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = _P_ONE
        if not den:
            raise ZeroDivisionError("symbolically zero denominator")
        if not num:
            den = _P_ONE
        else:
            # canonical scaling: leading denominator coefficient becomes 1
            lead = den[min(den)]
            if lead != GaussRat(1):
                inv = GaussRat(1) / lead
                num = {k: v * inv for k, v in num.items()}
                den = {k: v * inv for k, v in den.items()}
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarExpr is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, c):
        if not isinstance(c, GaussRat):
            c = GaussRat(c)
        return cls(_p_const(c))

    @classmethod
    def param(cls, name):
        return cls({(((name, 0), 1),): GaussRat(1)})

    @classmethod
    def conj_param(cls, name):
        return cls({(((name, 1), 1),): GaussRat(1)})

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_const(self):
        return not _p_params(self.num) and not _p_params(self.den)

    def const_value(self):
        assert self.is_const()
        return _p_eval(self.num, {}) / _p_eval(self.den, {})

    def params(self):
        return _p_params(self.num) | _p_params(self.den)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if self.den == other.den:
            return ScalarExpr(_p_add(self.num, other.num), self.den)
        return ScalarExpr(
            _p_add(_p_mul(self.num, other.den), _p_mul(other.num, self.den)),
            _p_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr(_p_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return ScalarExpr(_p_mul(self.num, other.num), _p_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by symbolically zero scalar")
        return ScalarExpr(_p_mul(self.num, other.den), _p_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def conj(self):
        return ScalarExpr(_p_conj(self.num), _p_conj(self.den))

    def evaluate(self, assign) -> GaussRat:
        d = _p_eval(self.den, assign)
        if d.is_zero():
            raise ScalarEvalError(f"denominator {_p_str(self.den)} vanishes at the assignment")
        return _p_eval(self.num, assign) / d

    # -- equality is mathematical (cross-multiplication), not structural ----

    def __eq__(self, other):
        if isinstance(other, (int, GaussRat)):
            other = ScalarExpr.const(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return _p_add(_p_mul(self.num, other.den), _p_neg(_p_mul(other.num, self.den))) == {}

    def __hash__(self):
        if self.is_const():
            return hash(self.const_value())
        return hash((tuple(sorted(self.num)), tuple(sorted(self.den))))

    def __str__(self):
        ns = _p_str(self.num)
        if self.den == _P_ONE:
            return ns
        ds = _p_str(self.den)
        if len(self.num) > 1 or ns.startswith("-"):
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def __repr__(self):
        return f"ScalarExpr({self})"


def _coerce(x):
    if isinstance(x, ScalarExpr):
        return x
    if isinstance(x, (int, GaussRat)):
        return ScalarExpr.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


S_ZERO = ScalarExpr.const(0)
S_ONE = ScalarExpr.const(1)
S_I = ScalarExpr.const(GaussRat(0, 1))
