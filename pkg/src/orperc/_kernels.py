"""Compiled inner loops.

Arrays are indexed ``[row, col]`` with ``row = t - t_min`` and
``col = x - x_min``.  Cells of the wrong parity are never set.
"""
import numpy as np
from numba import njit

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True)
def _as_u64(v):
    return np.uint64(np.int64(v))


@njit(cache=True)
def edge_hash_nb(seed, x, t, side):
    h = _as_u64(seed)
    h = _mix64((h + _GAMMA) ^ _as_u64(x))
    h = _mix64((h + _GAMMA) ^ _as_u64(t))
    h = _mix64((h + _GAMMA) ^ _as_u64(side))
    return h


@njit(cache=True)
def edge_uniform_nb(seed, x, t, side):
    return np.float64(edge_hash_nb(seed, x, t, side) >> _S11) * _INV53


@njit(cache=True)
def fill_open(seed, p, x_min, t_min, left, right):
    nt, nx = left.shape
    for i in range(nt - 1):
        t = t_min + i
        j0 = (x_min + t) & 1
        for j in range(j0, nx, 2):
            x = x_min + j
            if j > 0:
                left[i, j] = edge_uniform_nb(seed, x, t, 0) < p
            if j < nx - 1:
                right[i, j] = edge_uniform_nb(seed, x, t, 1) < p


@njit(cache=True)
def fill_uniforms(seed, x_min, t_min, nt, nx, out_left, out_right):
    for i in range(nt):
        t = t_min + i
        j0 = (x_min + t) & 1
        for j in range(j0, nx, 2):
            x = x_min + j
            out_left[i, j] = edge_uniform_nb(seed, x, t, 0)
            out_right[i, j] = edge_uniform_nb(seed, x, t, 1)


@njit(cache=True)
def sweep_up(left, right, reach, row_from, row_to):
    """Propagate ``reach`` upward across open edges, rows row_from..row_to."""
    nx = reach.shape[1]
    for i in range(row_from, row_to):
        for j in range(nx):
            if reach[i, j]:
                if left[i, j]:
                    reach[i + 1, j - 1] = True
                if right[i, j]:
                    reach[i + 1, j + 1] = True


@njit(cache=True)
def sweep_co(left, right, co, row_top, row_bottom):
    """Sites that reach the marked cells of ``co`` from below.

    Row ``row_top`` must already be marked; rows down to ``row_bottom``
    are filled in (OR-ed with any existing marks).
    """
    nx = co.shape[1]
    for i in range(row_top - 1, row_bottom - 1, -1):
        for j in range(nx):
            if right[i, j] and co[i + 1, j + 1]:
                co[i, j] = True
            elif left[i, j] and co[i + 1, j - 1]:
                co[i, j] = True


@njit(cache=True)
def sweep_down(left, right, anti, row_top, row_bottom):
    """Sites from which the marked cells are reachable (anti-oriented sweep)."""
    nx = anti.shape[1]
    for i in range(row_top, row_bottom, -1):
        for j in range(nx):
            if anti[i, j]:
                if j > 0 and right[i - 1, j - 1]:
                    anti[i - 1, j - 1] = True
                if j < nx - 1 and left[i - 1, j + 1]:
                    anti[i - 1, j + 1] = True


@njit(cache=True)
def right_edge_rows(left, right, reach, row_from, row_to, out):
    """Evolve reach row by row recording the rightmost occupied column.

    ``out[k]`` is the column index at row ``row_from + k`` or -1 when empty.
    """
    nx = reach.shape[1]
    for i in range(row_from, row_to + 1):
        last = -1
        for j in range(nx):
            if reach[i, j]:
                last = j
                if i < row_to:
                    if left[i, j]:
                        reach[i + 1, j - 1] = True
                    if right[i, j]:
                        reach[i + 1, j + 1] = True
        out[i - row_from] = last


@njit(cache=True)
def mother_dirs(left, right, co, row_top):
    """+1 / -1 for the upper edge a percolating site follows, 0 elsewhere.

    The right edge is preferred whenever it leads to a site that still
    reaches the horizon row ``row_top``.
    """
    nt, nx = co.shape
    out = np.zeros((nt, nx), dtype=np.int8)
    for i in range(min(row_top, nt - 1)):
        for j in range(nx):
            if co[i, j]:
                if right[i, j] and co[i + 1, j + 1]:
                    out[i, j] = 1
                elif left[i, j] and co[i + 1, j - 1]:
                    out[i, j] = -1
    return out


@njit(cache=True)
def ancestor_at(mdir, co, row_cert, row_bottom):
    """Column index of each site's ancestor on row ``row_cert`` (-1 if none)."""
    nt, nx = co.shape
    out = np.full((nt, nx), -1, dtype=np.int64)
    for j in range(nx):
        if co[row_cert, j]:
            out[row_cert, j] = j
    for i in range(row_cert - 1, row_bottom - 1, -1):
        for j in range(nx):
            d = mdir[i, j]
            if d != 0:
                out[i, j] = out[i + 1, j + d]
    return out


@njit(cache=True)
def stream_pair_diff(seed, p, x_min, nx, t_start, x1, t1, x2, t2, nt, counts):
    """Row-by-row clusters of two sources with edges hashed on the fly.

    ``counts[i]`` gets the size of the symmetric difference on level
    ``t_start + i``.  Returns a bitmask: 1 if the first cluster is alive on
    the last level, 2 if the second one is.
    """
    a = np.zeros(nx, dtype=np.bool_)
    b = np.zeros(nx, dtype=np.bool_)
    na = np.zeros(nx, dtype=np.bool_)
    nb = np.zeros(nx, dtype=np.bool_)
    lo = nx
    hi = -1
    for i in range(nt):
        t = t_start + i
        if t == t1:
            a[x1 - x_min] = True
            lo = min(lo, x1 - x_min)
            hi = max(hi, x1 - x_min)
        if t == t2:
            b[x2 - x_min] = True
            lo = min(lo, x2 - x_min)
            hi = max(hi, x2 - x_min)
        c = 0
        for j in range(max(lo, 0), min(hi, nx - 1) + 1):
            if a[j] != b[j]:
                c += 1
        counts[i] = c
        if i == nt - 1:
            break
        nlo = nx
        nhi = -1
        for j in range(max(lo, 0), min(hi, nx - 1) + 1):
            if not (a[j] or b[j]):
                continue
            x = x_min + j
            if j > 0 and edge_uniform_nb(seed, x, t, 0) < p:
                na[j - 1] |= a[j]
                nb[j - 1] |= b[j]
                nlo = min(nlo, j - 1)
                nhi = max(nhi, j - 1)
            if j < nx - 1 and edge_uniform_nb(seed, x, t, 1) < p:
                na[j + 1] |= a[j]
                nb[j + 1] |= b[j]
                nlo = min(nlo, j + 1)
                nhi = max(nhi, j + 1)
        for j in range(max(lo - 1, 0), min(hi + 1, nx - 1) + 1):
            a[j] = na[j]
            b[j] = nb[j]
            na[j] = False
            nb[j] = False
        lo = nlo
        hi = nhi
        if t + 1 <= max(t1, t2):
            continue
        if hi < 0:
            for k in range(i + 1, nt):
                counts[k] = 0
            break
    alive = 0
    for j in range(nx):
        if a[j]:
            alive |= 1
        if b[j]:
            alive |= 2
    return alive
