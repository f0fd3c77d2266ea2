"""Pure-Python indicator kernels; reference twin of the compiled extension.

Both backends implement identical integer logic over packed publication
buffers, so every caller gets bit-identical results whichever one is
selected at import.

Packed layout: publication i has year ``years[i]`` and cumulative citation
series ``flat[offs[i] : offs[i] + lens[i]]``.
"""
from __future__ import annotations


def amt_hit_count(years, flat, offs, lens, as_of_year, x, y):
    """Count threshold-eligible publications and how many pass c_x >= y.

    Eligible: published at least x years before as_of_year, so the citation
    count at age x is observable. Series shorter than x + 1 entries clamp to
    the last known value (missing trailing observations mean no new data).
    Returns (hits, eligible).
    """
    hits = 0
    eligible = 0
    cutoff = as_of_year - x
    for i in range(len(years)):
        if years[i] > cutoff:
            continue
        eligible += 1
        n = lens[i]
        idx = x if x < n - 1 else n - 1
        if flat[offs[i] + idx] >= y:
            hits += 1
    return hits, eligible


def grid_hit_counts(years, flat, offs, lens, as_of_year, min_pub_age, xs, ys, out):
    """Fill ``out[ix * len(ys) + iy]`` with hit counts for every (x, y) cell.

    A single eligibility cutoff (publication age >= min_pub_age at
    as_of_year) is shared by all cells so that cell values are comparable
    across the grid. Returns the eligible publication count.
    """
    nx = len(xs)
    ny = len(ys)
    eligible = 0
    cutoff = as_of_year - min_pub_age
    for k in range(nx * ny):
        out[k] = 0
    for i in range(len(years)):
        if years[i] > cutoff:
            continue
        eligible += 1
        n = lens[i]
        off = offs[i]
        for ix in range(nx):
            x = xs[ix]
            idx = x if x < n - 1 else n - 1
            c_x = flat[off + idx]
            base = ix * ny
            for iy in range(ny):
                if c_x >= ys[iy]:
                    out[base + iy] += 1
    return eligible
