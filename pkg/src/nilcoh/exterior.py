"""Bigraded exterior algebra on phi^1..phi^n, phi^1bar..phi^nbar.

Monomials are kept in the global canonical order: holomorphic generators
first (ascending index), then antiholomorphic (ascending index).  All signs
flow from counting transpositions against that order.  Elements are sparse
maps monomial -> ScalarExpr with zero coefficients absent, so structural
equality is exact equality of forms.
"""

from __future__ import annotations

from .gauss import GaussRat
from .scalar import ScalarExpr, S_ONE

# A Monomial is a pair (holo, anti) of strictly increasing index tuples.
# Generator tokens used for ordering/merging: (0, i) for phi^i, (1, i) for
# phi^ibar -- tuple comparison gives exactly the global generator order.


def mono_key(m):
    holo, anti = m
    return tuple((0, i) for i in holo) + tuple((1, i) for i in anti)


def mono_bidegree(m):
    return (len(m[0]), len(m[1]))


def mono_str(m):
    holo, anti = m
    toks = [f"f{i}" for i in holo] + [f"F{i}" for i in anti]
    return "^".join(toks) if toks else "1"


def _merge_count(a, b):
    """Merge two sorted token tuples; return (sign, merged) or (0, None) on repeat."""
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return 0, None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the len(a)-i remaining tokens of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def mono_wedge(m1, m2):
    """Wedge of canonical monomials: (sign, monomial), or (0, None) if degenerate."""
    sign, merged = _merge_count(mono_key(m1), mono_key(m2))
    if sign == 0:
        return 0, None
    holo = tuple(i for b, i in merged if b == 0)
    anti = tuple(i for b, i in merged if b == 1)
    return sign, (holo, anti)


def mono_conj(m):
    """Conjugate monomial and the sign of re-sorting it: (-1)^(p*q)."""
    holo, anti = m
    sign = -1 if (len(holo) * len(anti)) % 2 else 1
    return sign, (anti, holo)


class BigradedElement:
    """Sparse form: {monomial: ScalarExpr}, zero coefficients never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for m, c in coeffs.items():
                if not isinstance(c, ScalarExpr):
                    c = ScalarExpr.const(c)
                if not c.is_zero():
                    clean[m] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BigradedElement is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def gen(cls, index, barred=False, coeff=S_ONE):
        m = ((), (index,)) if barred else ((index,), ())
        return cls({m: coeff})

    @classmethod
    def monomial(cls, holo, anti, coeff=S_ONE):
        return cls({(tuple(holo), tuple(anti)): coeff})

    @classmethod
    def one(cls):
        return cls({((), ()): S_ONE})

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: mono_key(kv[0]))

    def bidegrees(self):
        return sorted({mono_bidegree(m) for m in self.coeffs})

    def is_homogeneous(self):
        return len(self.bidegrees()) <= 1

    def coeff(self, m):
        from .scalar import S_ZERO
        return self.coeffs.get(m, S_ZERO)

    def params(self):
        names = set()
        for c in self.coeffs.values():
            names |= c.params()
        return names

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return BigradedElement(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BigradedElement({m: -c for m, c in self.coeffs.items()})

    def scale(self, scalar):
        if not isinstance(scalar, ScalarExpr):
            scalar = ScalarExpr.const(scalar)
        if scalar.is_zero():
            return BigradedElement.zero()
        return BigradedElement({m: c * scalar for m, c in self.coeffs.items()})

    def wedge(self, other):
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                sign, m = mono_wedge(m1, m2)
                if sign == 0:
                    continue
                term = c1 * c2 if sign > 0 else -(c1 * c2)
                s = out.get(m)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return BigradedElement(out)

    def conj(self):
        out = {}
        for m, c in self.coeffs.items():
            sign, mc = mono_conj(m)
            out[mc] = c.conj() if sign > 0 else -c.conj()
        return BigradedElement(out)

    def project(self, p, q):
        """Bidegree-(p,q) component."""
        return BigradedElement(
            {m: c for m, c in self.coeffs.items() if mono_bidegree(m) == (p, q)}
        )

    def evaluate(self, assign):
        """Substitute parameters; may raise ScalarEvalError."""
        return BigradedElement(
            {m: ScalarExpr.const(c.evaluate(assign)) for m, c in self.coeffs.items()}
        )

    def wedge_power(self, k):
        out = BigradedElement.one()
        for _ in range(k):
            out = out.wedge(self)
        return out

    # -- equality / printing -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, BigradedElement):
            return NotImplemented
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(self.coeffs[m] == other.coeffs[m] for m in self.coeffs)

    def __hash__(self):
        return hash(tuple((m, c) for m, c in self.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.items():
            cs = str(c)
            ms = mono_str(m)
            if ms == "1":
                term = cs
            elif cs == "1":
                term = ms
            elif cs == "-1":
                term = f"-{ms}"
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]) or "/" in cs:
                    cs = f"({cs})"
                term = f"{cs}*{ms}"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"<form {self}>"


def gaussrat_coeffs(element):
    """The element's {monomial: GaussRat} map; element must be parameter-free."""
    return {m: c.const_value() for m, c in element.coeffs.items()}
