"""Multi-scalar and fixed-base multiplication over raw affine points.

Both routines take the group's ``add`` function, so they serve G1 and G2
alike.  Points are raw tuples with ``None`` as the identity.
"""

from __future__ import annotations


def msm(add, points, scalars, order):
    """sum k_i P_i by the bucket method.

    Zero scalars are skipped and unit scalars are summed directly, which
    matters for circuits full of boolean wires.
    """
    acc_small = None
    work = []
    for P, k in zip(points, scalars):
        k = int(k) % order
        if not k or P is None:
            continue
        if k == 1:
            acc_small = add(acc_small, P)
        else:
            work.append((P, k))
    if not work:
        return acc_small
    n = len(work)
    c = max(2, n.bit_length() - 4)
    mask = (1 << c) - 1
    nbits = max(k.bit_length() for _, k in work)
    windows = (nbits + c - 1) // c
    acc = None
    for w in range(windows - 1, -1, -1):
        for _ in range(c):
            acc = add(acc, acc)
        shift = w * c
        buckets = [None] * (mask + 1)
        for P, k in work:
            d = (k >> shift) & mask
            if d:
                buckets[d] = add(buckets[d], P)
        running = None
        total = None
        for d in range(mask, 0, -1):
            if buckets[d] is not None:
                running = add(running, buckets[d])
            total = add(total, running)
        acc = add(acc, total)
    return add(acc, acc_small)


class FixedBase:
    """Precomputed ``d * 2^(c j) * P`` tables for many multiplications of one point."""

    def __init__(self, add, P, nbits, c=8):
        self.add = add
        self.c = c
        self.windows = (nbits + c - 1) // c
        self.tables = []
        base = P
        for _ in range(self.windows):
            row = [None, base]
            for _ in range(2, 1 << c):
                row.append(add(row[-1], base))
            self.tables.append(row)
            base = add(row[-1], base)

    def mul(self, k):
        add, c = self.add, self.c
        mask = (1 << c) - 1
        k = int(k)
        R = None
        for row in self.tables:
            if not k:
                break
            d = k & mask
            if d:
                R = add(R, row[d])
            k >>= c
        if k:
            raise ValueError("scalar wider than the fixed-base table")
        return R
