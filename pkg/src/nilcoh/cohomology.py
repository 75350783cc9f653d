"""The five cohomology theories on the invariant bigraded complex.

Everything is a quotient of exact kernels and images:

    de Rham        ker d / im d               on Lambda^k
    Dolbeault      ker delbar / im delbar     on Lambda^{p,q}
    del            ker del / im del           on Lambda^{p,q}
    Bott-Chern     (ker del & ker delbar) / im del.delbar
    Aeppli         ker del.delbar / (im del + im delbar)

plus the H^{p,q}_J subgroups of de Rham cohomology (classes with a pure-type
representative) and the stage-k pure / full verdicts built from them.
All reports are at the invariant (Lie-algebra) level; whether that computes
the cohomology of a compact quotient is governed by the spec's flag and is
surfaced as a banner, never silently assumed.
"""

from __future__ import annotations

from .linalg import Subspace, apply_rows, kernel_basis, quotient_representatives, solve

THEORIES = ("de_rham", "dolbeault", "del", "bott_chern", "aeppli")


class CohomologyGroup:
    """One cohomology space: numerator/denominator subspaces plus representatives."""

    __slots__ = ("theory", "degree", "numerator", "denominator", "reps", "ops")

    def __init__(self, theory, degree, numerator, denominator, ops):
        assert numerator.contains_subspace(denominator), (
            f"{theory} {degree}: denominator escapes numerator"
        )
        self.theory = theory
        self.degree = degree
        self.numerator = numerator
        self.denominator = denominator
        self.ops = ops
        key = degree if isinstance(degree, int) else tuple(degree)
        self.reps = [
            ops.to_element(key, v)
            for v in quotient_representatives(numerator, denominator)
        ]

    @property
    def dim(self):
        return self.numerator.dim - self.denominator.dim

    def as_dict(self):
        deg = self.degree if isinstance(self.degree, int) else list(self.degree)
        return {
            "theory": self.theory,
            "degree": deg,
            "dim": self.dim,
            "representatives": [str(r) for r in self.reps],
        }


def de_rham(ops, k):
    ker = ops.kernel(ops.d_total(k), k)
    img = ops.image(ops.d_total(k - 1), k - 1, k)
    return CohomologyGroup("de_rham", k, ker, img, ops)


def dolbeault(ops, p, q):
    ker = ops.kernel(ops.delbar_pq(p, q), (p, q))
    img = ops.image(ops.delbar_pq(p, q - 1), (p, q - 1), (p, q))
    return CohomologyGroup("dolbeault", (p, q), ker, img, ops)


def del_cohomology(ops, p, q):
    ker = ops.kernel(ops.del_pq(p, q), (p, q))
    img = ops.image(ops.del_pq(p - 1, q), (p - 1, q), (p, q))
    return CohomologyGroup("del", (p, q), ker, img, ops)


def bott_chern(ops, p, q):
    ker = ops.kernel(ops.del_pq(p, q) + ops.delbar_pq(p, q), (p, q))
    img = ops.image(ops.deldelbar_pq(p - 1, q - 1), (p - 1, q - 1), (p, q))
    return CohomologyGroup("bott_chern", (p, q), ker, img, ops)


def aeppli(ops, p, q):
    ker = ops.kernel(ops.deldelbar_pq(p, q), (p, q))
    img = ops.image(ops.del_pq(p - 1, q), (p - 1, q), (p, q)).add(
        ops.image(ops.delbar_pq(p, q - 1), (p, q - 1), (p, q))
    )
    return CohomologyGroup("aeppli", (p, q), ker, img, ops)


def group(ops, theory, degree):
    if theory == "de_rham":
        if not isinstance(degree, int):
            raise ValueError("de Rham cohomology takes a total degree k")
        return de_rham(ops, degree)
    p, q = degree
    if theory == "dolbeault":
        return dolbeault(ops, p, q)
    if theory == "del":
        return del_cohomology(ops, p, q)
    if theory == "bott_chern":
        return bott_chern(ops, p, q)
    if theory == "aeppli":
        return aeppli(ops, p, q)
    raise ValueError(f"unknown theory {theory!r}")


def betti(ops, k):
    return de_rham(ops, k).dim


def hodge_table(ops, theory):
    """{(p,q): dim} over the full bidegree square."""
    n = ops.n
    return {
        (p, q): group(ops, theory, (p, q)).dim
        for p in range(n + 1)
        for q in range(n + 1)
    }


class NotInNumerator(ValueError):
    """The form does not satisfy the closedness conditions of the theory."""


def class_is_trivial(ops, theory, element):
    """Decide triviality with a certificate.

    Returns (True, primitive) where the primitive is an element (or a pair
    for Aeppli) mapping onto the form, or (False, reduced) with the canonical
    nonzero residue of the class modulo the denominator subspace.
    Raises NotInNumerator when the form is not closed for the theory.
    """
    if theory == "de_rham":
        degs = {p + q for p, q in element.bidegrees()}
        if len(degs) > 1:
            raise NotInNumerator("mixed total degree")
        k = degs.pop() if degs else 0
        key, prev = k, k - 1
        vec = ops.to_vec(key, element)
        if any(apply_rows(ops.d_total(k), vec)):
            raise NotInNumerator("form is not d-closed")
        op_prev = ops.d_total(prev)
    else:
        bidegs = element.bidegrees()
        if len(bidegs) > 1:
            raise NotInNumerator("form is not of pure bidegree")
        p, q = bidegs.pop() if bidegs else (0, 0)
        key = (p, q)
        vec = ops.to_vec(key, element)
        if theory == "dolbeault":
            if any(apply_rows(ops.delbar_pq(p, q), vec)):
                raise NotInNumerator("form is not delbar-closed")
            prev, op_prev = (p, q - 1), ops.delbar_pq(p, q - 1)
        elif theory == "del":
            if any(apply_rows(ops.del_pq(p, q), vec)):
                raise NotInNumerator("form is not del-closed")
            prev, op_prev = (p - 1, q), ops.del_pq(p - 1, q)
        elif theory == "bott_chern":
            if any(apply_rows(ops.del_pq(p, q), vec)) or any(
                apply_rows(ops.delbar_pq(p, q), vec)
            ):
                raise NotInNumerator("form is not del- and delbar-closed")
            prev, op_prev = (p - 1, q - 1), ops.deldelbar_pq(p - 1, q - 1)
        elif theory == "aeppli":
            if any(apply_rows(ops.deldelbar_pq(p, q), vec)):
                raise NotInNumerator("form is not del.delbar-closed")
            # denominator im del + im delbar: solve the stacked system
            rows_del = ops.del_pq(p - 1, q)
            rows_dbar = ops.delbar_pq(p, q - 1)
            na = ops.dims((p - 1, q))
            nb = ops.dims((p, q - 1))
            stacked = [
                list(ra) + list(rb) for ra, rb in zip(rows_del, rows_dbar)
            ]
            x = solve(stacked, vec)
            if x is None:
                img = ops.image(rows_del, (p - 1, q), key).add(
                    ops.image(rows_dbar, (p, q - 1), key)
                )
                return False, ops.to_element(key, img.reduce(vec))
            return True, (
                ops.to_element((p - 1, q), x[:na]),
                ops.to_element((p, q - 1), x[na : na + nb]),
            )
        else:
            raise ValueError(f"unknown theory {theory!r}")

    # single-operator denominators: solve op_prev y = vec
    ncols = ops.dims(prev)
    x = solve(op_prev, vec) if ncols else None
    if x is None:
        img = ops.image(op_prev, prev, key)
        residue = img.reduce(vec)
        if not any(residue):
            return True, ops.to_element(prev, [0] * ncols)
        return False, ops.to_element(key, residue)
    return True, ops.to_element(prev, x)


# ---------------------------------------------------------------------------
# H^{p,q}_J subgroups of de Rham cohomology, and pure / full verdicts


class PureFullReport:
    __slots__ = (
        "stage",
        "betti",
        "group_dims",
        "group_reps",
        "sum_dim",
        "pairwise",
        "total_intersection_dim",
        "single_group",
        "pure",
        "full",
    )

    def as_dict(self):
        return {
            "stage": self.stage,
            "betti": self.betti,
            "pure_type_subgroup_dims": {
                f"({p},{q})": d for (p, q), d in sorted(self.group_dims.items())
            },
            "pure_type_subgroup_reps": {
                f"({p},{q})": [str(r) for r in reps]
                for (p, q), reps in sorted(self.group_reps.items())
            },
            "sum_dim": self.sum_dim,
            "pairwise_intersection_dims": {
                f"({p},{q})&({r},{s})": d
                for ((p, q), (r, s)), d in sorted(self.pairwise.items())
            },
            "total_intersection_dim": self.total_intersection_dim,
            "single_group_stage": self.single_group,
            "pure": self.pure,
            "full": self.full,
            "pure_and_full": self.pure and self.full,
        }


def _dr_quotient_setup(ops, k):
    """(kernel, image, reducer pi) for H^k; pi is linear with kernel im d."""
    ker = ops.kernel(ops.d_total(k), k)
    img = ops.image(ops.d_total(k - 1), k - 1, k)
    return ker, img, img.reduce


def _closed_pq_in_total(ops, p, q):
    """d-closed (p,q)-forms as vectors in Lambda^{p+q} coordinates."""
    from .gauss import GaussRat

    k = p + q
    rows = ops.del_pq(p, q) + ops.delbar_pq(p, q)
    vecs = kernel_basis(rows, ops.dims((p, q)))
    basis_pq, _ = ops.basis((p, q))
    _, idx_total = ops.basis(k)
    out = []
    for v in vecs:
        w = [GaussRat(0)] * ops.dims(k)
        for m, c in zip(basis_pq, v):
            w[idx_total[m]] = c
        out.append(w)
    return out


def pure_full(ops, k):
    """Stage-k report on the H^{p,q}_J subgroups of H^k_dR."""
    n = ops.n
    ker, img, pi = _dr_quotient_setup(ops, k)
    amb = ops.dims(k)
    h_image = Subspace.from_vectors(amb, [pi(r) for r in ker.rows])

    cells = [(p, k - p) for p in range(min(k, n), -1, -1) if 0 <= k - p <= n]
    images = {}
    reps = {}
    for (p, q) in cells:
        vecs = _closed_pq_in_total(ops, p, q)
        images[(p, q)] = Subspace.from_vectors(amb, [pi(v) for v in vecs])
        # greedy pure-type representatives whose classes span the subgroup
        chosen = []
        span = Subspace.zero(amb)
        for v in vecs:
            red = pi(v)
            if not span.contains(red):
                chosen.append(ops.to_element((p, q), _restrict(ops, p, q, v)))
                span = span.add(Subspace.from_vectors(amb, [red]))
        reps[(p, q)] = chosen

    total = None
    sum_space = Subspace.zero(amb)
    for c in cells:
        sum_space = sum_space.add(images[c])
        total = images[c] if total is None else total.intersect(images[c])

    report = PureFullReport()
    report.stage = k
    report.betti = h_image.dim
    report.group_dims = {c: images[c].dim for c in cells}
    report.group_reps = reps
    report.sum_dim = sum_space.dim
    report.pairwise = {
        (a, b): images[a].intersect(images[b]).dim
        for i, a in enumerate(cells)
        for b in cells[i + 1 :]
    }
    report.total_intersection_dim = total.dim if total is not None else 0
    report.single_group = len(cells) == 1
    # a single-subgroup stage is pure by convention (the intersection over a
    # one-element family is the subgroup itself, which carries no clash)
    report.pure = report.single_group or report.total_intersection_dim == 0
    report.full = sum_space == h_image
    return report


def _restrict(ops, p, q, total_vec):
    """Project a Lambda^{p+q}-coordinate vector back to (p,q) coordinates."""
    basis_pq, _ = ops.basis((p, q))
    _, idx_total = ops.basis(p + q)
    return [total_vec[idx_total[m]] for m in basis_pq]


def class_in_pure_sum(ops, k, element):
    """Does the de Rham class of `element` lie in sum_{p+q=k} H^{p,q}_J?"""
    n = ops.n
    _, _, pi = _dr_quotient_setup(ops, k)
    amb = ops.dims(k)
    vec = ops.to_vec(k, element)
    if any(apply_rows(ops.d_total(k), vec)):
        raise NotInNumerator("form is not d-closed")
    sum_space = Subspace.zero(amb)
    for p in range(min(k, n), -1, -1):
        q = k - p
        if not 0 <= q <= n:
            continue
        vecs = _closed_pq_in_total(ops, p, q)
        sum_space = sum_space.add(
            Subspace.from_vectors(amb, [pi(v) for v in vecs])
        )
    return sum_space.contains(pi(vec))


def invariant_level_banner(spec):
    """One-line scope statement attached to every report.

    All computations happen on the finite-dimensional invariant complex.
    Whether they equal the cohomology of a compact quotient is user-supplied
    metadata (the `invariant_cohomology_is_manifold_cohomology` flag), never
    inferred.
    """
    flag = spec.flag_invariant_ok
    if flag:
        return (
            "invariant computation; the input declares it equal to the "
            "cohomology of the compact quotient"
        )
    if flag is None:
        return (
            "invariant (Lie-algebra level) computation; the input does not "
            "say whether it equals the cohomology of a compact quotient"
        )
    return (
        "invariant (Lie-algebra level) computation; the input declares the "
        "identification with a compact quotient NOT established"
    )
