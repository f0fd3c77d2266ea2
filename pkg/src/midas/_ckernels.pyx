# cython: language_level=3
"""Compiled indicator kernels; hot twin of _kernels_py (same contracts)."""


def amt_hit_count(const long long[::1] years, const long long[::1] flat,
                  const long long[::1] offs, const long long[::1] lens,
                  long long as_of_year, long long x, long long y):
    """Count threshold-eligible publications and how many pass c_x >= y."""
    cdef long long hits = 0
    cdef long long eligible = 0
    cdef long long cutoff = as_of_year - x
    cdef Py_ssize_t i
    cdef long long n, idx
    for i in range(years.shape[0]):
        if years[i] > cutoff:
            continue
        eligible += 1
        n = lens[i]
        idx = x if x < n - 1 else n - 1
        if flat[offs[i] + idx] >= y:
            hits += 1
    return hits, eligible


def grid_hit_counts(const long long[::1] years, const long long[::1] flat,
                    const long long[::1] offs, const long long[::1] lens,
                    long long as_of_year, long long min_pub_age,
                    const long long[::1] xs, const long long[::1] ys,
                    long long[::1] out):
    """Fill out[ix * len(ys) + iy] with per-cell hit counts; return eligible count."""
    cdef Py_ssize_t nx = xs.shape[0]
    cdef Py_ssize_t ny = ys.shape[0]
    cdef long long eligible = 0
    cdef long long cutoff = as_of_year - min_pub_age
    cdef Py_ssize_t i, ix, iy, k
    cdef long long n, off, x, idx, c_x
    for k in range(nx * ny):
        out[k] = 0
    with nogil:
        for i in range(years.shape[0]):
            if years[i] > cutoff:
                continue
            eligible += 1
            n = lens[i]
            off = offs[i]
            for ix in range(nx):
                x = xs[ix]
                idx = x if x < n - 1 else n - 1
                c_x = flat[off + idx]
                for iy in range(ny):
                    if c_x >= ys[iy]:
                        out[ix * ny + iy] += 1
    return eligible
