# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled configuration-graph exploration; mirrors ``_kernels_py.explore``."""

from cpython.array cimport array
from libc.stdlib cimport malloc, free

from . import _kernels_py


def explore(init, sig, nb_members, entry_nb, entry_guard, entry_upd, int n_signals, long budget):
    cdef int n_states = len(sig)
    cdef int n_agents = len(init)
    # codes must fit an unsigned 64-bit integer
    if n_states ** n_agents >= 2 ** 63:
        return _kernels_py.explore(init, sig, nb_members, entry_nb, entry_guard,
                                   entry_upd, n_signals, budget)

    cdef int n_nb = len(nb_members)
    cdef int n_e = len(entry_nb)
    cdef int i, a, e, k, q, off

    cdef array sig_a = array('i', sig)
    cdef int[:] sig_v = sig_a
    flat = []
    offsets = [0]
    for members in nb_members:
        flat.extend(members)
        offsets.append(len(flat))
    cdef int[:] mem_v = array('i', flat if flat else [0])
    cdef int[:] off_v = array('i', offsets)
    cdef int[:] enb_v = array('i', entry_nb if entry_nb else [0])
    gflat = []
    for g in entry_guard:
        gflat.extend(g)
    cdef int[:] guard_v = array('i', gflat if gflat else [0])
    uflat = []
    for u in entry_upd:
        uflat.extend(u)
    cdef int[:] upd_v = array('i', uflat if uflat else [0])

    cdef int *cur = <int *> malloc(n_agents * sizeof(int))
    cdef int *dist = <int *> malloc((n_nb * n_signals + 1) * sizeof(int))
    cdef long long *pw = <long long *> malloc((n_agents + 1) * sizeof(long long))
    cdef long long base, code, c
    cdef Py_ssize_t head = 0
    cdef bint ok

    pw[0] = 1
    for a in range(1, n_agents):
        pw[a] = pw[a - 1] * n_states

    init_code = _kernels_py.encode(init, n_states)
    index = {init_code: 0}
    codes = [init_code]
    edges = []
    try:
        while head < len(codes):
            base = codes[head]
            c = base
            for a in range(n_agents):
                cur[a] = c % n_states
                c //= n_states
            for i in range(n_nb * n_signals):
                dist[i] = 0
            for i in range(n_nb):
                for k in range(off_v[i], off_v[i + 1]):
                    dist[i * n_signals + sig_v[cur[mem_v[k]]]] += 1
            for e in range(n_e):
                i = enb_v[e]
                ok = True
                for k in range(n_signals):
                    if dist[i * n_signals + k] != guard_v[e * n_signals + k]:
                        ok = False
                        break
                if not ok:
                    continue
                off = e * n_states
                code = base
                for k in range(off_v[i], off_v[i + 1]):
                    a = mem_v[k]
                    q = cur[a]
                    code += pw[a] * (upd_v[off + q] - q)
                pycode = code
                j = index.get(pycode)
                if j is None:
                    j = len(codes)
                    index[pycode] = j
                    codes.append(pycode)
                    if len(codes) > budget:
                        return codes, edges, False
                edges.append((head, e, j))
            head += 1
    finally:
        free(cur)
        free(dist)
        free(pw)
    return codes, edges, True

