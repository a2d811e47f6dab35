"""Independent oracles for derived expected values.

Deliberately self-contained dense rational elimination: nothing here
imports the package's linear algebra, so Betti numbers and ranks computed
through this module cross-check the library's kernel/image path rather
than restating it.
"""

from fractions import Fraction


def dense_rank(rows):
    """Rank by plain forward elimination on dense rational rows."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        sel = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        piv = m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                factor = m[r][col] / piv
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def dense_solve_consistent(rows, rhs):
    """Whether rhs lies in the column span of the matrix given by rows."""
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    return dense_rank(aug) == dense_rank(rows)


def complex_blocks(space):
    """Per-degree dimensions and dense differential blocks of a space with
    `.basis` and `.d_basis`."""
    basis = space.basis
    top = basis.max_degree()
    dims = {}
    blocks = {}
    for k in range(top + 1):
        idx = basis.degree_indices(k)
        dims[k] = len(idx)
        tgt = basis.degree_indices(k + 1)
        tpos = {g: r for r, g in enumerate(tgt)}
        block = [[Fraction(0)] * len(idx) for _ in range(len(tgt))]
        for c, i in enumerate(idx):
            for j, v in space.d_basis(i).items():
                block[tpos[j]][c] = v
        blocks[k] = block
    return dims, blocks


def oracle_betti(space):
    """Betti numbers via dense rank computations only."""
    dims, blocks = complex_blocks(space)
    top = max(dims)
    ranks = {k: dense_rank(blocks[k]) for k in blocks if blocks[k]}
    out = []
    for k in range(top + 1):
        dim = dims.get(k, 0)
        if dim == 0:
            out.append(0)
            continue
        rk_out = ranks.get(k, 0)
        rk_in = ranks.get(k - 1, 0)
        out.append(dim - rk_out - rk_in)
    return out
