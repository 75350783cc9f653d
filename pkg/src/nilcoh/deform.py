"""Deformations of a complex structure along a family of coframes.

A family is given by matrices A(t), B(t): the deformed coframe is
eta^i = sum_j A_ij(t) phi^j + B_ij(t) phi^jbar.  At an admissible parameter
value the combined 2n x 2n matrix [[A, B], [conj B, conj A]] is invertible;
the structure equations in the eta-frame follow by substituting the inverse
relation into d(eta^i) = sum_j A_ij d(phi^j) + B_ij conj(d(phi^j)).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .gauss import GaussRat
from .scalar import ScalarExpr, ScalarEvalError
from .exterior import BigradedElement
from .algebra import AlgebraSpec
from . import linalg


class DeformationError(ValueError):
    """Inadmissible parameter value (singular frame, vanishing denominator)."""


class DeformationFamily:
    """Base structure plus parameter-dependent frame matrices A, B.

    `omega` optionally records a distinguished closed non-degenerate
    (2,0)-form of the undeformed structure, written in the base coframe;
    the stability checks transport it along the family.
    """

    __slots__ = ("name", "base", "params", "A", "B", "omega", "note")

    def __init__(self, name, base, params, A, B, omega=None, note=""):
        n = base.n
        assert len(A) == n and len(B) == n
        assert all(len(r) == n for r in A) and all(len(r) == n for r in B)
        if omega is not None:
            assert not omega.params(), "distinguished 2-form must be parameter-free"
            assert set(omega.bidegrees()) <= {(2, 0)}, "distinguished form must be (2,0)"
        self.name = name
        self.base = base
        self.params = tuple(params)
        self.A = tuple(tuple(_as_scalar(x) for x in row) for row in A)
        self.B = tuple(tuple(_as_scalar(x) for x in row) for row in B)
        self.omega = omega
        self.note = note

    @classmethod
    def identity_matrices(cls, n):
        from .scalar import S_ONE, S_ZERO

        A = [[S_ONE if i == j else S_ZERO for j in range(n)] for i in range(n)]
        B = [[S_ZERO for _ in range(n)] for _ in range(n)]
        return A, B

    def matrices_at(self, assign):
        """Evaluate A, B to GaussRat matrices at a parameter assignment."""
        missing = [p for p in self.params if p not in assign]
        if missing:
            raise ScalarEvalError(f"unassigned parameters: {', '.join(missing)}")
        try:
            A = [[x.evaluate(assign) for x in row] for row in self.A]
            B = [[x.evaluate(assign) for x in row] for row in self.B]
        except ScalarEvalError as e:
            raise DeformationError(f"inadmissible parameter value: {e}") from None
        return A, B


def _as_scalar(x):
    if isinstance(x, ScalarExpr):
        return x
    return ScalarExpr.const(x)


def combined_matrix(A, B):
    """[[A, B], [conj B, conj A]] mapping (phi, phibar) coords to (eta, etabar)."""
    n = len(A)
    top = [list(A[i]) + list(B[i]) for i in range(n)]
    bot = [[x.conj() for x in B[i]] + [x.conj() for x in A[i]] for i in range(n)]
    return top + bot


def frame_change(family, assign):
    """Structure equations of the base rewritten in the deformed coframe.

    Returns a parameter-free AlgebraSpec in the eta-generators.  Raises
    DeformationError when the frame matrix is singular at the assignment.
    """
    n = family.base.n
    A, B = family.matrices_at(assign)
    comb = combined_matrix(A, B)
    inv = linalg.mat_inverse(comb)
    if inv is None:
        raise DeformationError(
            f"frame matrix is singular at {_fmt_assign(assign)}"
        )
    base = family.base.evaluate(assign) if family.base.params else family.base

    # phi = inv . eta, so phi^j is row j of inv and phi^jbar is row n+j
    def phi_in_eta(j, barred):
        row = inv[n + j if barred else j]
        out = BigradedElement.zero()
        for c in range(n):
            if row[c]:
                out = out + BigradedElement.gen(c + 1, barred=False, coeff=row[c])
        for c in range(n):
            if row[n + c]:
                out = out + BigradedElement.gen(c + 1, barred=True, coeff=row[n + c])
        return out

    sub = {}
    for j in range(n):
        sub[(False, j + 1)] = phi_in_eta(j, False)
        sub[(True, j + 1)] = phi_in_eta(j, True)

    d_eta = []
    for i in range(n):
        dphi = BigradedElement.zero()
        for j in range(n):
            if A[i][j]:
                dphi = dphi + base.d_phi[j].scale(A[i][j])
            if B[i][j]:
                dphi = dphi + base.d_phi[j].conj().scale(B[i][j])
        d_eta.append(substitute(dphi, sub))

    name = f"{family.name} at {_fmt_assign(assign)}"
    return AlgebraSpec(
        name, n, (), d_eta,
        flag_invariant_ok=family.base.flag_invariant_ok,
        note=family.base.note,
    )


def substitute(element, mapping):
    """Replace each generator by the 1-form mapping[(barred, index)]."""
    out = BigradedElement.zero()
    for (holo, anti), coeff in element.coeffs.items():
        term = BigradedElement.one().scale(coeff)
        for i in holo:
            term = term.wedge(mapping[(False, i)])
            if term.is_zero():
                break
        if not term.is_zero():
            for i in anti:
                term = term.wedge(mapping[(True, i)])
                if term.is_zero():
                    break
        out = out + term
    return out


def express_in_frame(element, family, assign):
    """Rewrite a form in base-coframe coordinates in the deformed coframe."""
    n = family.base.n
    A, B = family.matrices_at(assign)
    comb = combined_matrix(A, B)
    inv = linalg.mat_inverse(comb)
    if inv is None:
        raise DeformationError(f"frame matrix is singular at {_fmt_assign(assign)}")
    sub = {}
    for j in range(n):
        for barred in (False, True):
            row = inv[n + j if barred else j]
            out = BigradedElement.zero()
            for c in range(2 * n):
                if row[c]:
                    out = out + BigradedElement.gen(
                        c % n + 1, barred=c >= n, coeff=row[c]
                    )
            sub[(barred, j + 1)] = out
    el = element.evaluate(assign) if element.params() else element
    return substitute(el, sub)


def real_frame_matrix(family, assign):
    """Real 2n x 2n matrix S with eps_t = S eps_0 on the real coframes.

    Column j of S gives the coordinates of the undeformed real frame vector
    e_j (dual basis) in the deformed real frame, which is what membership
    tests against the deformed structure constants need.
    """
    A, B = family.matrices_at(assign)
    n = len(A)
    S = [[None] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for k in range(n):
            a, b = A[i][k], B[i][k]
            S[2 * i][2 * k] = a.re + b.re
            S[2 * i][2 * k + 1] = -a.im + b.im
            S[2 * i + 1][2 * k] = a.im + b.im
            S[2 * i + 1][2 * k + 1] = a.re - b.re
    return S


def _fmt_assign(assign):
    return ", ".join(f"{k}={v}" for k, v in sorted(assign.items()))


def thread_cap():
    """Worker cap for sweeps; the NILCOH_THREADS variable overrides."""
    env = os.environ.get("NILCOH_THREADS", "").strip()
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"NILCOH_THREADS must be an integer, got {env!r}")
        if cap < 1:
            raise ValueError("NILCOH_THREADS must be at least 1")
        return cap
    return min(8, os.cpu_count() or 1)


def sweep(target, assignments, task):
    """Run task(structure_at_sample) per assignment, deterministically ordered.

    `target` is a DeformationFamily (each sample concretized by frame_change)
    or an AlgebraSpec (parameters substituted directly; a parameter-free
    structure is reused as-is, so every row reproduces the base).  Results
    come back in the order of `assignments` regardless of the worker count;
    a failing sample contributes {"error": ...} instead of stopping the sweep.
    """
    assignments = list(assignments)

    def concretize(assign):
        if isinstance(target, DeformationFamily):
            return frame_change(target, assign)
        if target.params:
            return target.evaluate(assign)
        return target

    def run(assign):
        try:
            return {"assign": {k: str(v) for k, v in sorted(assign.items())},
                    "result": task(concretize(assign))}
        except (DeformationError, ScalarEvalError) as e:
            return {"assign": {k: str(v) for k, v in sorted(assign.items())},
                    "error": str(e)}

    workers = min(thread_cap(), max(1, len(assignments)))
    if workers == 1:
        return [run(a) for a in assignments]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, assignments))
