"""Holomorphic-filtration spectral sequence via zig-zag solvability spaces.

Page r at bidegree (p,q) is the quotient X_r/Y_r of two subspaces of
Lambda^{p,q}:

  X_r = { a : delbar a = 0 and the chain  del a + delbar a_1 = 0,
          del a_1 + delbar a_2 = 0, ..., del a_{r-2} + delbar a_{r-1} = 0
          is solvable with a_j in Lambda^{p+j, q-j} },
  Y_r = { del b_{r-2} + delbar b_{r-1} : b_j in Lambda^{p-r+1+j, q+r-2-j},
          delbar b_0 = 0, del b_{j-1} + delbar b_j = 0 for j = 1..r-2 }
  (for r = 1 simply Y_1 = delbar Lambda^{p,q-1}).

Each space is computed from one stacked exact linear system — no recursion
on representatives.  The first page agrees with delbar-cohomology and the
limit page with the graded de Rham cohomology of the coordinate filtration
by leading holomorphic degree; both identities are exposed for testing.
"""

from __future__ import annotations

from .gauss import ONE, ZERO
from .linalg import (
    Subspace,
    quotient_representatives,
    stacked_kernel_image,
    stacked_kernel_projection,
)


def x_space(ops, r, p, q):
    """Zig-zag-solvable (p,q)-forms on page r, as a Subspace of Lambda^{p,q}."""
    assert r >= 1
    blocks = [ops.dims((p + j, q - j)) for j in range(r)]
    rows = [(ops.dims((p, q + 1)), {0: ops.delbar_pq(p, q)})]
    for j in range(1, r):
        rows.append(
            (
                ops.dims((p + j, q - j + 1)),
                {
                    j - 1: ops.del_pq(p + j - 1, q - j + 1),
                    j: ops.delbar_pq(p + j, q - j),
                },
            )
        )
    return stacked_kernel_projection(blocks, rows, 0)


def y_space(ops, r, p, q):
    """Boundary subspace of Lambda^{p,q} on page r."""
    assert r >= 1
    if r == 1:
        return ops.image(ops.delbar_pq(p, q - 1), (p, q - 1), (p, q))
    blocks = [ops.dims((p - r + 1 + j, q + r - 2 - j)) for j in range(r)]
    rows = [
        (ops.dims((p - r + 1, q + r - 1)), {0: ops.delbar_pq(p - r + 1, q + r - 2)})
    ]
    for j in range(1, r - 1):
        rows.append(
            (
                ops.dims((p - r + 1 + j, q + r - 1 - j)),
                {
                    j - 1: ops.del_pq(p - r + j, q + r - 1 - j),
                    j: ops.delbar_pq(p - r + 1 + j, q + r - 2 - j),
                },
            )
        )
    out = (
        ops.dims((p, q)),
        {r - 2: ops.del_pq(p - 1, q), r - 1: ops.delbar_pq(p, q - 1)},
    )
    return stacked_kernel_image(blocks, rows, out)


def spectral_cell(ops, r, p, q):
    """One page cell: dimension plus the two subspaces and representatives."""
    x = x_space(ops, r, p, q)
    y = y_space(ops, r, p, q)
    assert x.contains_subspace(y), "boundary space escapes the cycle space"
    reps = [ops.to_element((p, q), v) for v in quotient_representatives(x, y)]
    return {
        "r": r,
        "p": p,
        "q": q,
        "dim": x.dim - y.dim,
        "cycles": x,
        "boundaries": y,
        "representatives": reps,
    }


class SpectralPage:
    """Dimension table of one page."""

    __slots__ = ("r", "dims")

    def __init__(self, r, dims):
        self.r = r
        self.dims = dims

    def total(self, k):
        return sum(d for (p, q), d in self.dims.items() if p + q == k)

    def as_dict(self):
        return {
            "r": self.r,
            "dims": {f"({p},{q})": d for (p, q), d in sorted(self.dims.items())},
        }


def spectral_page(ops, r):
    n = ops.n
    dims = {}
    for p in range(n + 1):
        for q in range(n + 1):
            x = x_space(ops, r, p, q)
            y = y_space(ops, r, p, q)
            assert x.contains_subspace(y)
            dims[(p, q)] = x.dim - y.dim
    return SpectralPage(r, dims)


def _prefix_subspace(amb, m):
    rows = []
    for i in range(m):
        v = [ZERO] * amb
        v[i] = ONE
        rows.append(v)
    return Subspace.from_vectors(amb, rows)


def e_infinity(ops):
    """Limit dims from the graded de Rham cohomology of the leading-degree
    filtration: gr^p H^k = (F^p cap ker d + im d) / (F^{p+1} cap ker d + im d).

    Independent of the zig-zag route; used to certify stabilization.  The
    total-degree bases list bidegree blocks in descending holomorphic degree,
    so each F^p is spanned by a coordinate prefix.
    """
    n = ops.n
    dims = {}
    for k in range(2 * n + 1):
        amb = ops.dims(k)
        ker = ops.kernel(ops.d_total(k), k)
        img = ops.image(ops.d_total(k - 1), k - 1, k)
        prefix = {}
        pos = 0
        for p in range(min(k, n), -1, -1):
            q = k - p
            if 0 <= q <= n:
                pos += ops.dims((p, q))
            prefix[p] = pos
        for p in range(min(k, n), -1, -1):
            q = k - p
            if not 0 <= q <= n:
                continue
            big = _prefix_subspace(amb, prefix[p]).intersect(ker).add(img)
            small = _prefix_subspace(amb, prefix.get(p + 1, 0)).intersect(ker).add(img)
            dims[(p, q)] = big.dim - small.dim
    return dims


def betti_numbers(ops):
    n = ops.n
    out = {}
    for k in range(2 * n + 1):
        ker = ops.kernel(ops.d_total(k), k)
        img = ops.image(ops.d_total(k - 1), k - 1, k)
        out[k] = ker.dim - img.dim
    return out


def degeneration_page(ops, max_page=None):
    """Smallest r whose page totals equal the Betti numbers in every degree.

    Differentials on page r move by (r, 1-r), so every page beyond n+1 is
    already stable; the dimension certificate (page total = Betti number for
    all k) is equivalent to stabilization because cell dims never increase
    with r and the limit totals are the Betti numbers.
    Returns (r, certificate dict).
    """
    n = ops.n
    if max_page is None:
        max_page = n + 1
    target = betti_numbers(ops)
    for r in range(1, max_page + 1):
        page = spectral_page(ops, r)
        totals = {k: page.total(k) for k in range(2 * n + 1)}
        if totals == target:
            return r, {
                "page_totals": totals,
                "betti": target,
                "e_infinity": e_infinity(ops),
            }
    raise AssertionError(
        f"no stabilization by page {max_page}; zig-zag routine is inconsistent"
    )
