"""Compiled inner loops for the samplers.

These routines consume pre-drawn random variates and mutate flat label
buffers in place; all randomness is generated by the caller from a single
numpy generator so that runs are reproducible regardless of compilation.
Rule codes for the single-pixel kernel: 0 greedy ascent, 1 Metropolis,
2 heat-bath.
"""

import math

import numpy as np
from numba import njit

RULE_GREEDY = 0
RULE_METROPOLIS = 1
RULE_HEAT_BATH = 2


@njit(cache=True)
def single_pixel_sweep(
    labels,
    ref,
    nbr_table,
    f_table,
    e_table,
    c_f,
    c_e,
    f_value,
    e_value,
    pixels,
    proposals,
    unifs,
    rule,
):
    """Run one sweep of single-pixel updates; returns (f, e, accepted).

    ``pixels[t]`` is the site visited at attempt ``t``; ``proposals[t]`` in
    ``[0, q-2]`` selects one of the labels other than the current one;
    ``unifs[t]`` is the acceptance variate (unused by greedy ascent).
    """
    accepted = 0
    for t in range(pixels.shape[0]):
        i = pixels[t]
        cur = labels[i]
        r = proposals[t]
        new = r if r < cur else r + 1
        df = f_table[new, ref[i]] - f_table[cur, ref[i]]
        de = 0.0
        for k in range(4):
            j = nbr_table[i, k]
            if j >= 0:
                de += e_table[new, labels[j]] - e_table[cur, labels[j]]
        dlp = -(c_f * df + c_e * de)
        if rule == 0:
            # Strict ascent, except that a move of exactly zero posterior
            # change is taken when it strictly lowers the prior energy:
            # plateaus are walked toward their smoothest representative,
            # and since energy is bounded below the walk terminates.
            ok = dlp > 0.0 or (dlp == 0.0 and de < 0.0)
        elif rule == 1:
            ok = dlp >= 0.0 or unifs[t] < math.exp(dlp)
        else:
            ok = unifs[t] < 1.0 / (1.0 + math.exp(-dlp))
        if ok:
            labels[i] = new
            f_value += df
            e_value += de
            accepted += 1
    return f_value, e_value, accepted


@njit(cache=True)
def totals(labels, ref, edge_u, edge_v, f_table, e_table):
    """From-scratch fidelity and energy totals for the current labels."""
    f_value = 0.0
    for i in range(labels.shape[0]):
        f_value += f_table[labels[i], ref[i]]
    e_value = 0.0
    for e in range(edge_u.shape[0]):
        e_value += e_table[labels[edge_u[e]], labels[edge_v[e]]]
    return f_value, e_value


@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def union_find_clusters(n, edge_u, edge_v, occupied):
    """Label connected components induced by occupied edges.

    Returns ``(assignment, n_clusters)`` where cluster ids run 0..n_clusters-1
    in order of first appearance by pixel index.
    """
    parent = np.arange(n)
    for e in range(edge_u.shape[0]):
        if occupied[e]:
            ru = _find(parent, edge_u[e])
            rv = _find(parent, edge_v[e])
            if ru != rv:
                parent[rv] = ru
    assignment = np.full(n, -1, dtype=np.int64)
    n_clusters = 0
    for i in range(n):
        r = _find(parent, i)
        if assignment[r] < 0:
            assignment[r] = n_clusters
            n_clusters += 1
        assignment[i] = assignment[r]
    return assignment, n_clusters


@njit(cache=True)
def _sample_cluster_labels(labels, ref, f_table, c_f, assignment, n_clusters, label_unifs):
    """Draw a fresh label per cluster from its aggregated likelihood.

    Cluster c gets label z with probability proportional to
    ``exp(-c_f * sum_{i in c} f_table[z, ref[i]])``, sampled by inverse CDF
    with variate ``label_unifs[c]``.  Returns (changed_clusters, largest).
    """
    n = labels.shape[0]
    q = f_table.shape[0]
    scores = np.zeros((n_clusters, q))
    sizes = np.zeros(n_clusters, dtype=np.int64)
    old_label = np.empty(n_clusters, dtype=np.int64)
    for i in range(n):
        c = assignment[i]
        sizes[c] += 1
        old_label[c] = labels[i]
        for z in range(q):
            scores[c, z] += f_table[z, ref[i]]
    new_label = np.empty(n_clusters, dtype=np.int64)
    changed = 0
    largest = 0
    for c in range(n_clusters):
        if sizes[c] > largest:
            largest = sizes[c]
        lo = scores[c, 0]
        for z in range(1, q):
            if scores[c, z] < lo:
                lo = scores[c, z]
        total = 0.0
        for z in range(q):
            total += math.exp(-c_f * (scores[c, z] - lo))
        target = label_unifs[c] * total
        running = 0.0
        pick = q - 1
        for z in range(q):
            running += math.exp(-c_f * (scores[c, z] - lo))
            if running >= target:
                pick = z
                break
        new_label[c] = pick
        if pick != old_label[c]:
            changed += 1
    for i in range(n):
        labels[i] = new_label[assignment[i]]
    return changed, largest


@njit(cache=True)
def sw_step(
    labels, ref, edge_u, edge_v, f_table, c_f, p_bond, bond_unifs, label_unifs
):
    """One full cluster refresh: bond percolation on satisfied edges, then an
    independent label draw per cluster.  Returns (n_clusters, largest,
    changed_clusters)."""
    n = labels.shape[0]
    n_edges = edge_u.shape[0]
    occupied = np.zeros(n_edges, dtype=np.bool_)
    for e in range(n_edges):
        if labels[edge_u[e]] == labels[edge_v[e]] and bond_unifs[e] < p_bond:
            occupied[e] = True
    assignment, n_clusters = union_find_clusters(n, edge_u, edge_v, occupied)
    changed, largest = _sample_cluster_labels(
        labels, ref, f_table, c_f, assignment, n_clusters, label_unifs
    )
    return n_clusters, largest, changed


@njit(cache=True)
def wolff_step(labels, ref, nbr_table, f_table, c_f, p_bond, seed_pixel, bond_unifs, label_unif):
    """Grow one cluster from ``seed_pixel`` and redraw its label.

    Bond variates are consumed from ``bond_unifs`` in discovery order (at
    most two per lattice edge).  Returns (cluster_size, changed_pixels).
    """
    n = labels.shape[0]
    q = f_table.shape[0]
    old = labels[seed_pixel]
    in_cluster = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)
    in_cluster[seed_pixel] = True
    stack[0] = seed_pixel
    members[0] = seed_pixel
    top = 1
    size = 1
    used = 0
    while top > 0:
        top -= 1
        i = stack[top]
        for k in range(4):
            j = nbr_table[i, k]
            if j >= 0 and not in_cluster[j] and labels[j] == old:
                u = bond_unifs[used]
                used += 1
                if u < p_bond:
                    in_cluster[j] = True
                    stack[top] = j
                    top += 1
                    members[size] = j
                    size += 1
    lo = 0.0
    scores = np.zeros(q)
    for m in range(size):
        i = members[m]
        for z in range(q):
            scores[z] += f_table[z, ref[i]]
    lo = scores[0]
    for z in range(1, q):
        if scores[z] < lo:
            lo = scores[z]
    total = 0.0
    for z in range(q):
        total += math.exp(-c_f * (scores[z] - lo))
    target = label_unif * total
    running = 0.0
    pick = q - 1
    for z in range(q):
        running += math.exp(-c_f * (scores[z] - lo))
        if running >= target:
            pick = z
            break
    changed = 0
    if pick != old:
        for m in range(size):
            labels[members[m]] = pick
        changed = size
    return size, changed
