"""Pure Python/numpy versions of the permutation kernels.

Same signatures as the compiled ``_kernels`` module, which is preferred
when importable.  All permutation arrays are int32 tables acting on the
right: ``x -> g[x]``.
"""
import numpy as np

BACKEND = "python"


def sift(g, base, pos, inv_store, start):
    """Strip ``g`` through levels ``start..len(base)-1``.

    Returns ``(residue, level)``; ``level == len(base)`` means the residue
    fixes every base point.
    """
    h = np.array(g, dtype=np.int32)
    nlev = len(base)
    level = start
    while level < nlev:
        row = pos[level, h[base[level]]]
        if row < 0:
            return h, level
        h = inv_store[row][h]
        level += 1
    return h, nlev


def schreier_scan(level, base, pos, fwd_store, inv_store, orbit, gens, skip_rows, skip_gens):
    """Sift every Schreier generator of ``level`` through the deeper chain.

    Pairs (orbit index r, generator index t) with r < skip_rows and
    t < skip_gens were checked earlier and are skipped.  Returns the first
    non-identity residue as ``(residue, drop_level)`` or ``None``.
    """
    ident = np.arange(pos.shape[1], dtype=np.int32)
    for t in range(gens.shape[0]):
        s = gens[t]
        r0 = skip_rows if t < skip_gens else 0
        for r in range(r0, len(orbit)):
            beta = orbit[r]
            u = fwd_store[pos[level, beta]]
            w = inv_store[pos[level, s[beta]]]
            h = w[s[u]]
            if np.array_equal(h, ident):
                continue
            h, lev = sift(h, base, pos, inv_store, level + 1)
            if not np.array_equal(h, ident):
                return h, lev
    return None


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def minimal_block(gens, a, b):
    """Finest partition invariant under ``gens`` with a, b in one cell.

    Returns labels where ``labels[x]`` is the least point of x's cell.
    """
    n = gens.shape[1]
    gl = [list(map(int, g)) for g in gens]
    parent = list(range(n))
    queue = []
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)
        queue.append((a, b))
    while queue:
        x, y = queue.pop()
        for g in gl:
            rx, ry = _find(parent, g[x]), _find(parent, g[y])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
                queue.append((rx, ry))
    return np.array([_find(parent, x) for x in range(n)], dtype=np.int32)
