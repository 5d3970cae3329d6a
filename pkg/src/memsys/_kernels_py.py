"""Pure-Python configuration-graph exploration (reference kernel).

Configurations are encoded as integers in base ``n_states``, agent 0 being
the least significant digit.  The compiled kernel in ``_kernels.pyx``
implements the same function with the same output.
"""


def encode(config, n_states):
    code = 0
    for q in reversed(config):
        code = code * n_states + q
    return code


def decode(code, n_agents, n_states):
    out = []
    for _ in range(n_agents):
        code, q = divmod(code, n_states)
        out.append(q)
    return tuple(out)


def explore(init, sig, nb_members, entry_nb, entry_guard, entry_upd, n_signals, budget):
    """Breadth-first closure of ``init`` under the enabled entries.

    Returns ``(codes, edges, complete)``: node codes in discovery order,
    ``(src, entry, dst)`` index triples, and False if more than ``budget``
    nodes were discovered (exploration stops at that point).
    """
    n_states = len(sig)
    n_agents = len(init)
    index = {encode(init, n_states): 0}
    codes = [encode(init, n_states)]
    edges = []
    head = 0
    while head < len(codes):
        cur = list(decode(codes[head], n_agents, n_states))
        dists = []
        for members in nb_members:
            counts = [0] * n_signals
            for a in members:
                counts[sig[cur[a]]] += 1
            dists.append(tuple(counts))
        for e in range(len(entry_nb)):
            if dists[entry_nb[e]] != entry_guard[e]:
                continue
            upd = entry_upd[e]
            new = cur[:]
            for a in nb_members[entry_nb[e]]:
                new[a] = upd[cur[a]]
            code = encode(new, n_states)
            j = index.get(code)
            if j is None:
                j = index[code] = len(codes)
                codes.append(code)
                if len(codes) > budget:
                    return codes, edges, False
            edges.append((head, e, j))
        head += 1
    return codes, edges, True
