"""Tangle evaluation on modules coloured by V_(4,2).

The two mutant-distinguishing tangles are partially closed 3-braids; a
braid letter acts on M (x) M (x) M through the 729x729 crossing applied
lazily to sparse vectors (the 19683^2 matrix is never formed).  Closing
the third strand with the twist element and a partial trace gives an
endomorphism of M (x) M, whose restriction to the distinguished
2-dimensional highest-weight eigenspace is the whole story.
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import LaurentPoly
from .qsl3 import ConstructionError, Tower, highest_weight_space
from .rationals import rat_sqrt
from .sparse import solve_in_span


@dataclass(frozen=True)
class BraidWord:
    """A word in the elementary braids sigma_i^{+-1} on a fixed strand count."""

    strands: int
    letters: tuple  # of (index i in 1..strands-1, sign +-1)

    def __post_init__(self):
        for i, sign in self.letters:
            if not 1 <= i <= self.strands - 1:
                raise ValueError("braid index %d out of range" % i)
            if sign not in (1, -1):
                raise ValueError("braid sign must be +-1")

    def inverse(self):
        return BraidWord(
            self.strands, tuple((i, -s) for i, s in reversed(self.letters))
        )


TANGLE_A = BraidWord(3, ((2, 1), (1, -1), (2, 1)))
TANGLE_B = BraidWord(3, ((2, -1), (1, 1), (2, -1)))


class LazyBraidOperator:
    """Apply a 3-strand braid word to sparse vectors on M (x) M (x) M.

    Letters act through the column adjacency of R_MM / R_MM^-1 on the
    chosen adjacent pair of strands; vectors stay weight-sparse
    throughout.
    """

    def __init__(self, tower: Tower, braid: BraidWord):
        if braid.strands != 3:
            raise ValueError("only 3-strand tangles are evaluated here")
        self.dim = tower.M.dim
        self.braid = braid
        self.pos_cols = tower.r_mm.matrix.column_adjacency()
        self.neg_cols = tower.r_mm_inv.column_adjacency()

    def _apply_letter(self, vec, index, sign):
        cols = self.pos_cols if sign == 1 else self.neg_cols
        d = self.dim
        dd = d * d
        out = {}
        if index == 1:  # pair (1, 2): key = idx // d, spectator = idx % d
            for idx, val in vec.items():
                pair, spec = divmod(idx, d)
                hits = cols.get(pair)
                if not hits:
                    continue
                for r, v in hits:
                    key = r * d + spec
                    w = out.get(key)
                    p = v * val
                    w = p if w is None else w + p
                    if w == 0:
                        out.pop(key, None)
                    else:
                        out[key] = w
        else:  # pair (2, 3): key = idx % dd, spectator = idx // dd
            for idx, val in vec.items():
                spec, pair = divmod(idx, dd)
                hits = cols.get(pair)
                if not hits:
                    continue
                for r, v in hits:
                    key = spec * dd + r
                    w = out.get(key)
                    p = v * val
                    w = p if w is None else w + p
                    if w == 0:
                        out.pop(key, None)
                    else:
                        out[key] = w
        return out

    def apply(self, vec):
        for index, sign in self.braid.letters:
            vec = self._apply_letter(vec, index, sign)
        return vec


def closed_tangle_endomorphism(tower: Tower, braid: BraidWord):
    """J = partial closure of the braid on the third strand.

    Returns a function on sparse M(x)M vectors:
      F(v (x) T e_i) = sum_j f_ij(v) (x) e_j,   J(v) = sum_i f_ii(v).
    """
    op = LazyBraidOperator(tower, braid)
    d = tower.M.dim
    t_diag = [tower.t_m.get(i, i) for i in range(d)]

    def j_of(vec):
        total = {}
        for i in range(d):
            ti = t_diag[i]
            lifted = {idx * d + i: val * ti for idx, val in vec.items()}
            image = op.apply(lifted)
            for idx, val in image.items():
                pair, last = divmod(idx, d)
                if last != i:
                    continue
                w = total.get(pair)
                w = val if w is None else w + val
                if w == 0:
                    total.pop(pair, None)
                else:
                    total[pair] = w
        return total

    return j_of


@dataclass
class WeightSpace:
    ambient_dim: int
    weight: tuple
    basis: list  # sparse dicts over the ambient basis

    @property
    def dim(self):
        return len(self.basis)


def module_highest_weight_space(module, weight) -> WeightSpace:
    basis = highest_weight_space(module, weight)
    return WeightSpace(module.dim, tuple(weight), basis)


@dataclass
class BlockMatrix2:
    entries: list  # 2x2 nested list of field scalars, column-action convention
    basis: WeightSpace

    def __matmul__(self, other):
        a, b = self.entries, other.entries
        return BlockMatrix2(
            [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
            self.basis,
        )

    def trace(self):
        return self.entries[0][0] + self.entries[1][1]


class StructureError(RuntimeError):
    """The expected eigen/block structure failed an exact check."""


def restrict_to_span(apply_fn, space: WeightSpace, zero):
    """Matrix of an operator on the exact span of the space's basis.

    Columns are the coordinates of the images; StructureError if an image
    leaves the span.
    """
    images = [apply_fn(v) for v in space.basis]
    sols = solve_in_span(space.basis, images, zero)
    if sols is None:
        raise StructureError("operator does not preserve the subspace")
    k = space.dim
    return [[sols[j][i] for j in range(k)] for i in range(k)]


def twist_eigensplit(space: WeightSpace, tower: Tower):
    """Split a highest-weight space under R_MM into its two eigenspaces.

    R_MM restricted there must square to a scalar (two eigenvalues with
    equal squares); returns (plus, minus) with plus the 2-dimensional
    part when dims are (2, 1), else ordered by descending dimension.
    """
    f = tower.field
    cols = tower.r_mm.matrix.column_adjacency()
    mat = tower.r_mm.matrix

    def apply_r(vec):
        return mat.apply_vec_by_cols(cols, vec)

    c = restrict_to_span(apply_r, space, f.zero())
    k = space.dim
    csq = _mat_mult(c, c)
    lam2 = csq[0][0]
    for i in range(k):
        for j in range(k):
            expect = lam2 if i == j else f.zero()
            if csq[i][j] != expect:
                raise StructureError("restricted crossing does not square to a scalar")
    lam = _scalar_sqrt(lam2, f)
    if lam is None:
        raise StructureError("eigenvalue square has no exact square root")
    plus_vecs, minus_vecs = [], []
    for sign, bucket in ((1, plus_vecs), (-1, minus_vecs)):
        target = lam if sign == 1 else -lam
        shifted = [
            [c[i][j] - target if i == j else c[i][j] for j in range(k)]
            for i in range(k)
        ]
        for coeffs in _small_null_space(shifted, f):
            vec = {}
            for t, coeff in enumerate(coeffs):
                if coeff == 0:
                    continue
                for idx, val in space.basis[t].items():
                    w = vec.get(idx)
                    p = coeff * val
                    w = p if w is None else w + p
                    if w == 0:
                        vec.pop(idx, None)
                    else:
                        vec[idx] = w
            bucket.append(vec)
    if len(plus_vecs) + len(minus_vecs) != k:
        raise StructureError("eigenspaces do not fill the highest-weight space")
    spaces = sorted(
        (
            WeightSpace(space.ambient_dim, space.weight, plus_vecs),
            WeightSpace(space.ambient_dim, space.weight, minus_vecs),
        ),
        key=lambda s: -s.dim,
    )
    return spaces[0], spaces[1]


def _mat_mult(a, b):
    k = len(a)
    return [
        [sum((a[i][t] * b[t][j] for t in range(1, k)), a[i][0] * b[0][j]) for j in range(k)]
        for i in range(k)
    ]


def _scalar_sqrt(x, field):
    if field.mode == "pointwise":
        r = rat_sqrt(x)
        return r
    # symbolic: the square is a monomial times a rational square
    p = x.as_laurent() if hasattr(x, "as_laurent") else None
    if p is None or not p.is_monomial():
        return None
    e = p.min_exp()
    coeff = p.c[e]
    root = rat_sqrt(coeff)
    if root is None or e % 2:
        return None
    return field.from_laurent(LaurentPoly.monomial(root, e // 2))


def _small_null_space(mat, field):
    """Null space of a small dense matrix given as nested lists."""
    from .sparse import SparseMatrix, null_space

    k = len(mat)
    m = SparseMatrix.from_entries(
        k, k, ((i, j, mat[i][j]) for i in range(k) for j in range(k))
    )
    vecs = null_space(m)
    out = []
    for v in vecs:
        out.append([v.get(i, field.zero()) for i in range(k)])
    return out


def block_restrict(j_of, space: WeightSpace, field) -> BlockMatrix2:
    """The 2x2 matrix of a closed-tangle endomorphism on a 2-dim eigenspace."""
    if space.dim != 2:
        raise StructureError("block restriction needs a 2-dimensional space")
    c = restrict_to_span(j_of, space, field.zero())
    return BlockMatrix2(c, space)


def trace_difference(a: BlockMatrix2, b: BlockMatrix2):
    """tr(ABAB - AABB); zero iff the pair cannot tell the mutants apart."""
    if a.basis is not b.basis:
        raise StructureError("blocks expressed in different bases")
    abab = (a @ b @ a @ b).trace()
    aabb = (a @ a @ b @ b).trace()
    return abab - aabb


def word_trace_difference(word, swap, a: BlockMatrix2, b: BlockMatrix2):
    """tr(prod(word)) - tr(prod(word with positions i, j exchanged)).

    word: sequence over {"A", "B"}; swap = (i, j) with word[i] != word[j].
    """
    i, j = swap
    if not word or not (0 <= i < j < len(word)):
        raise ValueError("swap positions out of range")
    if word[i] == word[j]:
        raise ValueError("swapped letters must differ")
    lookup = {"A": a, "B": b}
    swapped = list(word)
    swapped[i], swapped[j] = swapped[j], swapped[i]

    def product_trace(letters):
        total = lookup[letters[0]]
        for letter in letters[1:]:
            total = total @ lookup[letter]
        return total.trace()

    return product_trace(list(word)) - product_trace(swapped)


def mutant_block_pair(tower: Tower):
    """The 2x2 blocks A_nu, B_nu on the plus eigenspace of W_(6,4,2).

    The heart of the calculation: W at weight (2, 2) in M (x) M is
    3-dimensional, splits 2 + 1 under R_MM, and the two partially closed
    tangles restrict to the 2-dimensional part.
    """
    w = module_highest_weight_space(tower.MM, (2, 2))
    if w.dim != 3:
        raise StructureError("W_(6,4,2) has dimension %d, expected 3" % w.dim)
    plus, minus = twist_eigensplit(w, tower)
    if plus.dim != 2 or minus.dim != 1:
        raise StructureError(
            "twist split gave dims (%d, %d), expected (2, 1)" % (plus.dim, minus.dim)
        )
    j_a = closed_tangle_endomorphism(tower, TANGLE_A)
    j_b = closed_tangle_endomorphism(tower, TANGLE_B)
    a_nu = block_restrict(j_a, plus, tower.field)
    b_nu = block_restrict(j_b, plus, tower.field)
    return a_nu, b_nu


def sample_trace_difference(tower: Tower):
    """tr(ABAB - AABB) for the paper's tangle pair over the tower's field."""
    a_nu, b_nu = mutant_block_pair(tower)
    return trace_difference(a_nu, b_nu)
