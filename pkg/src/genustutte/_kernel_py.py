"""Pure-Python twin of the compiled kernel.

Same contracts as _kernel.pyx, no C toolchain required.  The enumeration
loops here are written for clarity and get slow beyond ~2^20 tuples; the
compiled module is preferred automatically when it imported cleanly.
"""

from __future__ import annotations

from typing import Dict, List, Optional


def _popcount_table(n: int) -> bytearray:
    size = 1 << n
    pc = bytearray(size)
    for m in range(1, size):
        pc[m] = pc[m >> 1] + (m & 1)
    return pc


def build_rank_table(n: int, bases: List[int]) -> bytearray:
    """ranks[mask] = max over bases of |mask & basis|, for every mask."""
    size = 1 << n
    if not bases:
        raise ValueError("no bases")
    pc = _popcount_table(n)
    r = pc[bases[0]]
    table = bytearray(size)
    for mask in range(size):
        best = 0
        for b in bases:
            c = pc[mask & b]
            if c > best:
                best = c
                if best == r:
                    break
        table[mask] = best
    return table


def whitney_counts(
    g: int,
    n: int,
    ranks,
    a1_start: int = 0,
    a1_end: Optional[int] = None,
) -> Dict[bytes, int]:
    """Aggregate exponent vectors of the genus-g corank-nullity enumeration.

    Walks every g-tuple (A_1..A_g) of subsets with A_1 in [a1_start, a1_end)
    and counts occurrences of the exponent vector laid out as
    [x_i | y_i | per pair (i<j): x-cap, y-cap, x-cup, y-cup], where an x
    exponent is rank(E) - rank(.) and a y exponent is |.| - rank(.).
    """
    size = 1 << n
    if a1_end is None:
        a1_end = size
    if not 0 <= a1_start <= a1_end <= size:
        raise ValueError("bad A_1 slice")
    pc = _popcount_table(n)
    rho = ranks[size - 1]
    npairs = g * (g - 1) // 2
    nvars = 2 * g + 4 * npairs
    counts: Dict[bytes, int] = {}
    tup = [0] * g
    exps = bytearray(nvars)

    def fill_from(pos: int) -> None:
        for i in range(pos, g):
            m = tup[i]
            r = ranks[m]
            exps[i] = rho - r
            exps[g + i] = pc[m] - r
        base = 2 * g
        for i in range(g):
            for j in range(i + 1, g):
                if j >= pos:
                    a, b = tup[i], tup[j]
                    cap = a & b
                    cup = a | b
                    rc = ranks[cap]
                    ru = ranks[cup]
                    exps[base] = rho - rc
                    exps[base + 1] = pc[cap] - rc
                    exps[base + 2] = rho - ru
                    exps[base + 3] = pc[cup] - ru
                base += 4

    for a1 in range(a1_start, a1_end):
        tup[0] = a1
        for i in range(1, g):
            tup[i] = 0
        fill_from(0)
        while True:
            key = bytes(exps)
            counts[key] = counts.get(key, 0) + 1
            # odometer on positions 1..g-1, last position fastest
            pos = g - 1
            while pos >= 1:
                tup[pos] += 1
                if tup[pos] < size:
                    break
                tup[pos] = 0
                pos -= 1
            if pos < 1:
                break
            fill_from(pos)
    return counts


def gf2_rank_table(n: int, rows: List[int]) -> bytearray:
    """ranks[mask] = GF(2) rank of the rows restricted to columns in mask."""
    size = 1 << n
    table = bytearray(size)
    for mask in range(size):
        piv: Dict[int, int] = {}
        r = 0
        for row in rows:
            v = row & mask
            while v:
                h = v.bit_length() - 1
                if h in piv:
                    v ^= piv[h]
                else:
                    piv[h] = v
                    r += 1
                    break
        table[mask] = r
    return table
