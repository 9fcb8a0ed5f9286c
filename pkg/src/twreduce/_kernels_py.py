"""Pure-Python GF(2) kernels. Rows are Python ints; bit ``j`` is column ``j``.

Both backends must return identical kept indices and identical
``xor_word_ops`` counts (row XORs times 64-bit words per row).
"""


def row_basis(rows, ncols):
    words = max(1, (ncols + 63) >> 6)
    basis = {}
    kept = []
    ops = 0
    for idx, r in enumerate(rows):
        while r:
            h = r.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = r
                kept.append(idx)
                break
            r ^= b
            ops += words
    return kept, ops


def cut_row_int(p, t):
    """Cut-matrix row of partition ``p``: column ``S >> 1`` for each cut ``S`` containing position 0."""
    masks = [0] * (max(p) + 1)
    for i, b in enumerate(p):
        masks[b] |= 1 << i
    # cuts are unions of blocks; disjoint unions add, so each optional block is a shift-or
    row = 1 << (masks[0] >> 1)
    for m in masks[1:]:
        row |= row << (m >> 1)
    return row


def cut_basis(partitions, t):
    ncols = 1 << (t - 1)
    return row_basis([cut_row_int(p, t) for p in partitions], ncols)
