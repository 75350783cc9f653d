"""Existence of closed non-degenerate (2,0)-forms, and the wedge-power suites.

The closed (2,0)-space is the kernel of d on Lambda^{2,0}.  Over a basis
B_1..B_s of that space, the degree-m polynomial P(a) is the coefficient of
the full holomorphic monomial in (a_1 B_1 + ... + a_s B_s)^m, where the
complex dimension is n = 2m.  A non-degenerate closed form exists iff P is
not identically zero; since every variable has degree at most m in P, the
grid {0..m}^s detects this exactly, and the first grid point in
lexicographic order with P != 0 is the reported witness.  The symbolic
expansion of P and the numeric grid are kept as two independent routes and
cross-asserted on every call.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .gauss import GaussRat
from .scalar import ScalarExpr
from .exterior import BigradedElement
from . import cohomology
from .cohomology import NotInNumerator, class_is_trivial, invariant_level_banner


class SymplecticError(ValueError):
    """Structure outside the op's domain (odd dimension, bad witness)."""


def closed_20_space(ops):
    """Kernel of d restricted to Lambda^{2,0}, as a canonical Subspace."""
    rows_del = ops.del_pq(2, 0)
    rows_delbar = ops.delbar_pq(2, 0)
    stacked = [list(r) for r in rows_del] + [list(r) for r in rows_delbar]
    return ops.kernel(stacked, (2, 0))


def closed_20_elements(ops):
    return [ops.to_element((2, 0), v) for v in closed_20_space(ops).rows]


def _top_coeff(element, n):
    return element.coeff((tuple(range(1, n + 1)), ()))


def nondegeneracy_polynomial(ops, closed=None):
    """P(a1..as): top-monomial coefficient of the m-th wedge power.

    Symbolic route: the basis combination is formed with polynomial
    coefficients and expanded exactly.  Raises on odd complex dimension.
    """
    n = ops.n
    if n % 2:
        raise SymplecticError("no (2,0) volume pairing in odd complex dimension")
    m = n // 2
    if closed is None:
        closed = closed_20_space(ops)
    elems = [ops.to_element((2, 0), v) for v in closed.rows]
    comb = BigradedElement.zero()
    for j, e in enumerate(elems):
        comb = comb + e.scale(ScalarExpr.param(f"a{j + 1}"))
    return _top_coeff(comb.wedge_power(m), n)


class SymplecticReport:
    """Existence verdict with witness / grid certificate and scope notes."""

    __slots__ = (
        "n",
        "closed_dim",
        "poly",
        "verdict",
        "witness_coeffs",
        "witness",
        "grid_points_checked",
        "grid_side",
        "upgrade_flag",
        "banner",
        "statement",
    )

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))

    def as_dict(self):
        d = {
            "complex_dimension": self.n,
            "closed_20_dim": self.closed_dim,
            "nondegeneracy_polynomial": str(self.poly) if self.poly is not None else None,
            "verdict": self.verdict,
            "scope": self.banner,
            "statement": self.statement,
        }
        if self.verdict == "exists":
            d["witness_coefficients"] = [str(c) for c in self.witness_coeffs]
            d["witness"] = str(self.witness)
        if self.verdict == "none":
            d["grid_certificate"] = {
                "grid": f"{{0..{self.grid_side - 1}}}^{self.closed_dim}",
                "points_checked": self.grid_points_checked,
            }
        return d


def find_symplectic(ops, flag_invariant_ok=None):
    """Decide existence of a closed non-degenerate invariant (2,0)-form.

    The flag (when not given) is read off ops.spec; it only affects the
    wording of the emitted statement, never the verdict.
    """
    spec = ops.spec
    if flag_invariant_ok is None:
        flag_invariant_ok = spec.flag_invariant_ok
    banner = invariant_level_banner(spec)
    n = ops.n
    if n % 2:
        return SymplecticReport(
            n=n,
            closed_dim=closed_20_space(ops).dim,
            poly=None,
            verdict="odd_dimension",
            banner=banner,
            statement=(
                "odd complex dimension admits no non-degenerate (2,0)-form"
            ),
        )
    m = n // 2
    closed = closed_20_space(ops)
    elems = [ops.to_element((2, 0), v) for v in closed.rows]
    s = len(elems)
    poly = nondegeneracy_polynomial(ops, closed)

    witness_coeffs = None
    witness = None
    checked = 0
    for point in product(range(m + 1), repeat=s):
        checked += 1
        comb = BigradedElement.zero()
        for aj, e in zip(point, elems):
            if aj:
                comb = comb + e.scale(GaussRat(aj))
        if not _top_coeff(comb.wedge_power(m), n).is_zero():
            witness_coeffs = [GaussRat(aj) for aj in point]
            witness = comb
            break

    # the symbolic and grid routes must agree (degree <= m per variable)
    assert (witness is None) == poly.is_zero(), "grid and symbolic routes disagree"

    if witness is None:
        if flag_invariant_ok:
            statement = (
                "no complex symplectic structure on the compact quotient "
                "(non-existence transfers under the declared flag)"
            )
        else:
            statement = (
                "no invariant complex symplectic structure; manifold-level "
                "non-existence is not claimed without the flag"
            )
        return SymplecticReport(
            n=n,
            closed_dim=s,
            poly=poly,
            verdict="none",
            grid_points_checked=checked,
            grid_side=m + 1,
            upgrade_flag=flag_invariant_ok,
            banner=banner,
            statement=statement,
        )
    if flag_invariant_ok:
        statement = "complex symplectic structure exists on the compact quotient"
    else:
        statement = "invariant complex symplectic structure exists"
    return SymplecticReport(
        n=n,
        closed_dim=s,
        poly=poly,
        verdict="exists",
        witness_coeffs=witness_coeffs,
        witness=witness,
        grid_points_checked=checked,
        grid_side=m + 1,
        upgrade_flag=flag_invariant_ok,
        banner=banner,
        statement=statement,
    )


def _check_witness(ops, witness):
    n = ops.n
    if n % 2:
        raise SymplecticError("odd complex dimension")
    if witness.is_zero() or set(witness.bidegrees()) != {(2, 0)}:
        raise SymplecticError("witness must be a nonzero (2,0)-form")
    if not ops.spec.d(witness).is_zero():
        raise SymplecticError("witness is not d-closed")
    if _top_coeff(witness.wedge_power(n // 2), n).is_zero():
        raise SymplecticError("witness is degenerate")


def theorem61_suite(ops, witness):
    """Nontriviality of every wedge-power class omega^k ∧ conj(omega)^m.

    For a closed non-degenerate (2,0) witness and 0 <= k,m <= n/2, each
    power is d-closed of pure bidegree (2k,2m); the suite reports whether
    its class is nonzero in all five theories.  A trivial cell would
    contradict the volume-pairing argument at the invariant level, so any
    failure is surfaced prominently rather than averaged away.
    """
    _check_witness(ops, witness)
    half = ops.n // 2
    wbar = witness.conj()
    cells = {}
    all_ok = True
    for k in range(half + 1):
        for m in range(half + 1):
            form = witness.wedge_power(k).wedge(wbar.wedge_power(m))
            row = {}
            for theory in cohomology.THEORIES:
                try:
                    trivial, _ = class_is_trivial(ops, theory, form)
                except NotInNumerator:  # pragma: no cover - closed by construction
                    trivial = None
                row[theory] = "nontrivial" if trivial is False else "TRIVIAL"
                if trivial is not False:
                    all_ok = False
            cells[(k, m)] = row
    return {
        "witness": str(witness),
        "cells": {f"({k},{m})": row for (k, m), row in sorted(cells.items())},
        "all_nontrivial": all_ok,
    }


def betti_bounds(ops):
    """Lower bounds on even invariant Betti numbers on real dimension 4h.

    For h = n/2: b_{2k} >= k+1 for k = 1..h and b_{2l} >= 2h-l+1 for
    l = h+1..2h-1.  A failed bound is an obstruction: no complex symplectic
    structure can exist (invariant-level when the flag is unset).
    """
    n = ops.n
    if n % 2:
        raise SymplecticError("real dimension is not divisible by 4")
    h = n // 2
    b = {k: cohomology.betti(ops, k) for k in range(2 * n + 1)}
    rows = []
    all_pass = True
    for k in range(1, h + 1):
        bound = k + 1
        ok = b[2 * k] >= bound
        all_pass &= ok
        rows.append(
            {"degree": 2 * k, "betti": b[2 * k], "bound": bound, "holds": ok}
        )
    for l in range(h + 1, 2 * h):
        bound = 2 * h - l + 1
        ok = b[2 * l] >= bound
        all_pass &= ok
        rows.append(
            {"degree": 2 * l, "betti": b[2 * l], "bound": bound, "holds": ok}
        )
    return {
        "real_dimension": 2 * n,
        "bounds": rows,
        "all_hold": all_pass,
        "obstruction_fires": not all_pass,
    }


def real_pair(spec, omega):
    """Split a (2,0)-form into its real and imaginary invariant 2-forms.

    Writing phi^j = e^{2j-1} + i e^{2j}, the form expands over the real
    coframe; the returned pair (re, im) satisfies im = re(J., .) for the
    engine's J convention (the sign is pinned by the rho-trace calibration;
    relabeling J -> -J recovers the opposite-sign convention).  The
    compatibility identity is verified exactly and reported.
    """
    if set(omega.bidegrees()) - {(2, 0)}:
        raise SymplecticError("real pair is defined for (2,0)-forms")
    n = spec.n
    dim = 2 * n
    mre = [[Fraction(0)] * dim for _ in range(dim)]
    mim = [[Fraction(0)] * dim for _ in range(dim)]
    for (holo, _anti), c in omega.items():
        j, k = holo
        cval = c.const_value()
        u, v = 2 * j - 2, 2 * j - 1  # 0-based indices of e^{2j-1}, e^{2j}
        w, x = 2 * k - 2, 2 * k - 1
        i_c = GaussRat(0, 1) * cval
        for (a, b), coeff in (
            ((u, w), cval),
            ((v, x), -cval),
            ((u, x), i_c),
            ((v, w), i_c),
        ):
            mre[a][b] += coeff.re
            mre[b][a] -= coeff.re
            mim[a][b] += coeff.im
            mim[b][a] -= coeff.im
    j_mat = spec.realify().j_mat
    compat = all(
        mim[a][b] == sum(j_mat[c][a] * mre[c][b] for c in range(dim))
        for a in range(dim)
        for b in range(dim)
    )
    def entries(m):
        return {
            f"e{a + 1}^e{b + 1}": str(m[a][b])
            for a in range(dim)
            for b in range(a + 1, dim)
            if m[a][b]
        }
    return {
        "re": entries(mre),
        "im": entries(mim),
        "compatibility_verified": compat,
    }
