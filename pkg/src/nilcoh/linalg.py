"""Exact linear algebra over Q(i) and graded bases of the invariant complex.

Everything here is deterministic by construction: bases are enumerated in a
fixed lexicographic order, elimination always picks the first nonzero pivot,
and subspaces are stored in reduced row echelon form, so equal subspaces have
byte-identical representations.  Determinism is preferred over speed; the
largest ambient space in scope is the 70-dimensional middle degree at n=4.
"""

from __future__ import annotations

from itertools import combinations

from .gauss import GaussRat
from .exterior import BigradedElement, mono_key

ZERO = GaussRat(0)
ONE = GaussRat(1)


# ---------------------------------------------------------------------------
# dense RREF and friends (rows are lists of GaussRat)


def rref(rows):
    """Reduced row echelon form. Returns (rows, pivot_columns); zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                mi, mr = m[i], m[r]
                m[i] = [a - f * b for a, b in zip(mi, mr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def mat_mul(a, b):
    if not a or not b:
        return []
    nk = len(b)
    nc = len(b[0])
    out = []
    for row in a:
        acc = [ZERO] * nc
        for k in range(nk):
            x = row[k]
            if x:
                bk = b[k]
                for c in range(nc):
                    if bk[c]:
                        acc[c] = acc[c] + x * bk[c]
        out.append(acc)
    return out


def mat_inverse(a):
    """Exact inverse of a square matrix, or None if singular."""
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [list(row[n:]) for row in red]


def solve(a_rows, b):
    """One exact solution x of A x = b (free variables set to 0), or None.

    A is given as a list of rows; b as a vector of matching length.
    """
    if not a_rows:
        return None if any(b) else []
    ncols = len(a_rows[0])
    aug = [list(r) + [bv] for r, bv in zip(a_rows, b)]
    red, pivots = rref(aug)
    for row, c in zip(red, pivots):
        if c == ncols:  # pivot in the rhs column: inconsistent
            return None
    x = [ZERO] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[ncols]
    return x


def kernel_basis(a_rows, ncols):
    """Canonical kernel basis of the map x -> A x (A given by rows)."""
    red, pivots = rref(a_rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for row, pc in zip(red, pivots):
            if row[fc]:
                v[pc] = -row[fc]
        basis.append(v)
    return basis


class Subspace:
    """A subspace of Q(i)^dim in canonical (RREF) form."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient, rows, pivots):
        self.ambient = ambient
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, ambient, vectors):
        rows, pivots = rref(list(vectors))
        return cls(ambient, rows, pivots)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, [], [])

    @classmethod
    def full(cls, ambient):
        eye = [tuple(ONE if i == j else ZERO for j in range(ambient)) for i in range(ambient)]
        return cls(ambient, eye, list(range(ambient)))

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        """Residue of vec modulo this subspace (canonical representative)."""
        v = list(vec)
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.rows)

    def add(self, other):
        assert self.ambient == other.ambient
        return Subspace.from_vectors(self.ambient, list(self.rows) + list(other.rows))

    def intersect(self, other):
        """Zassenhaus-free intersection: solve for combinations landing in both."""
        assert self.ambient == other.ambient
        if not self.rows or not other.rows:
            return Subspace.zero(self.ambient)
        # x in both <=> x = sum a_i u_i = sum b_j v_j; kernel of [U^T | -V^T]
        cols = len(self.rows) + len(other.rows)
        a_rows = []
        for c in range(self.ambient):
            a_rows.append(
                [self.rows[i][c] for i in range(len(self.rows))]
                + [-other.rows[j][c] for j in range(len(other.rows))]
            )
        vectors = []
        for k in kernel_basis(a_rows, cols):
            v = [ZERO] * self.ambient
            for i, aco in enumerate(k[: len(self.rows)]):
                if aco:
                    row = self.rows[i]
                    v = [x + aco * y for x, y in zip(v, row)]
            vectors.append(v)
        return Subspace.from_vectors(self.ambient, vectors)

    def quotient_dim(self, sub):
        """dim(self / sub) for sub a subspace of self (checked)."""
        assert self.contains_subspace(sub), "quotient denominator not contained in numerator"
        return self.dim - sub.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __repr__(self):
        return f"<subspace dim {self.dim} of Q(i)^{self.ambient}>"


def quotient_representatives(num, den):
    """Deterministic representatives of num/den: greedy over num's echelon rows."""
    reps = []
    span = den
    for row in num.rows:
        if not span.contains(row):
            reps.append(row)
            span = span.add(Subspace.from_vectors(num.ambient, [row]))
    return reps


def _block_offsets(blocks):
    offsets = []
    total = 0
    for b in blocks:
        offsets.append(total)
        total += b
    return offsets, total


def _assemble_block_rows(offsets, total, rows_of_blocks):
    a_rows = []
    for row_count, mats in rows_of_blocks:
        for r in range(row_count):
            row = [ZERO] * total
            for bi, mat in mats.items():
                off = offsets[bi]
                mrow = mat[r]
                for c, x in enumerate(mrow):
                    if x:
                        row[off + c] = x
            a_rows.append(row)
    return a_rows


def stacked_kernel_projection(blocks, rows_of_blocks, project_block):
    """Kernel of a block matrix, projected onto one unknown block.

    blocks: list of column counts per unknown block.
    rows_of_blocks: list of (row_count, {block_index: matrix_rows}) —
      each matrix has row_count rows and blocks[i] columns.
    Returns the canonical Subspace of Q(i)^{blocks[project_block]} of values
    the projected unknown takes over the kernel.
    """
    offsets, total = _block_offsets(blocks)
    a_rows = _assemble_block_rows(offsets, total, rows_of_blocks)
    ker = kernel_basis(a_rows, total)
    off = offsets[project_block]
    w = blocks[project_block]
    return Subspace.from_vectors(w, [v[off : off + w] for v in ker])


def stacked_kernel_image(blocks, rows_of_blocks, out_spec):
    """Image of a block-row map over the kernel of a block constraint matrix.

    out_spec is a single (row_count, {block_index: matrix_rows}) entry; the
    map it describes is applied to every kernel vector of the constraints and
    the span of the values is returned as a canonical Subspace.
    """
    offsets, total = _block_offsets(blocks)
    a_rows = _assemble_block_rows(offsets, total, rows_of_blocks)
    ker = kernel_basis(a_rows, total)
    out_rows = _assemble_block_rows(offsets, total, [out_spec])
    out_dim = out_spec[0]
    return Subspace.from_vectors(out_dim, [apply_rows(out_rows, v) for v in ker])


# ---------------------------------------------------------------------------
# graded bases and operator matrices


def basis_pq(n, p, q):
    """Monomial basis of Lambda^{p,q}, lexicographic in the generator order."""
    if p < 0 or q < 0 or p > n or q > n:
        return []
    return [
        (h, a)
        for h in combinations(range(1, n + 1), p)
        for a in combinations(range(1, n + 1), q)
    ]


def basis_total(n, k):
    """Basis of Lambda^k with (p,q)-blocks in descending p, so that the
    holomorphic filtration F^p is spanned by a prefix."""
    out = []
    for p in range(min(k, n), -1, -1):
        q = k - p
        if 0 <= q <= n:
            out.extend(basis_pq(n, p, q))
    return out


def element_to_vec(basis, index, element):
    v = [ZERO] * len(basis)
    for m, c in element.coeffs.items():
        v[index[m]] = c.const_value()
    return v


def vec_to_element(basis, vec):
    from .scalar import ScalarExpr

    return BigradedElement(
        {m: ScalarExpr.const(x) for m, x in zip(basis, vec) if x}
    )


class OperatorCache:
    """Matrices of d, del, delbar, deldelbar on a concrete structure.

    The spec object must expose .n and .d(element); all matrices are built
    lazily and memoized.  Matrices act on column vectors; stored as rows.
    """

    def __init__(self, spec):
        assert not spec.params, "operator matrices need a fully assigned structure"
        self.spec = spec
        self.n = spec.n
        self._bases = {}
        self._ops = {}

    def basis(self, key):
        """key is (p, q) for a bidegree or an int k for a total degree."""
        b = self._bases.get(key)
        if b is None:
            if isinstance(key, tuple):
                b = basis_pq(self.n, *key)
            else:
                b = basis_total(self.n, key)
            idx = {m: i for i, m in enumerate(b)}
            b = (b, idx)
            self._bases[key] = b
        return b

    def _matrix(self, src_key, dst_key, transform):
        src, _ = self.basis(src_key)
        dst, dst_idx = self.basis(dst_key)
        cols = []
        for m in src:
            img = transform(BigradedElement.monomial(*m))
            col = [ZERO] * len(dst)
            for mm, c in img.coeffs.items():
                col[dst_idx[mm]] = c.const_value()
            cols.append(col)
        # store as rows (dst x src)
        return [
            [cols[j][i] for j in range(len(src))] for i in range(len(dst))
        ]

    def d_total(self, k):
        """d: Lambda^k -> Lambda^{k+1}."""
        op = self._ops.get(("d", k))
        if op is None:
            op = self._matrix(k, k + 1, self.spec.d)
            self._ops[("d", k)] = op
        return op

    def del_pq(self, p, q):
        """del: (p,q) -> (p+1,q)."""
        op = self._ops.get(("del", p, q))
        if op is None:
            op = self._matrix((p, q), (p + 1, q), lambda e: self.spec.d(e).project(p + 1, q))
            self._ops[("del", p, q)] = op
        return op

    def delbar_pq(self, p, q):
        """delbar: (p,q) -> (p,q+1)."""
        op = self._ops.get(("delbar", p, q))
        if op is None:
            op = self._matrix((p, q), (p, q + 1), lambda e: self.spec.d(e).project(p, q + 1))
            self._ops[("delbar", p, q)] = op
        return op

    def deldelbar_pq(self, p, q):
        """del∘delbar: (p,q) -> (p+1,q+1)."""
        op = self._ops.get(("dd", p, q))
        if op is None:
            op = self._matrix(
                (p, q),
                (p + 1, q + 1),
                lambda e: self.spec.d(self.spec.d(e).project(p, q + 1)).project(p + 1, q + 1),
            )
            self._ops[("dd", p, q)] = op
        return op

    def dims(self, key):
        return len(self.basis(key)[0])

    def to_vec(self, key, element):
        basis, idx = self.basis(key)
        return element_to_vec(basis, idx, element)

    def to_element(self, key, vec):
        basis, _ = self.basis(key)
        return vec_to_element(basis, vec)

    def kernel(self, op_rows, src_key):
        return Subspace.from_vectors(
            self.dims(src_key), kernel_basis(op_rows, self.dims(src_key))
        )

    def image(self, op_rows, src_key, dst_key):
        ncols = self.dims(src_key)
        vectors = [[row[j] for row in op_rows] for j in range(ncols)]
        return Subspace.from_vectors(self.dims(dst_key), vectors)


def apply_rows(op_rows, vec):
    out = []
    for row in op_rows:
        acc = ZERO
        for a, b in zip(row, vec):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def rank_of(op_rows):
    return len(rref(op_rows)[0])
