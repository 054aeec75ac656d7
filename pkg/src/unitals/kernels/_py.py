"""Pure-Python reference kernels.

Two hot paths live here: equitable partition refinement for the graph
automorphism engine, and per-line count bookkeeping for the orbit-union
search. The compiled backend in ``_cy`` implements the same contracts and
must produce identical outputs on identical inputs; the dispatcher in
``kernels/__init__`` picks whichever is available.

Array state (perm/pos/cls/clen, cnt/avail) is numpy int32 and is mutated in
place. Read-only CSR structures go through ``prepare_csr``/``prepare_pts``
so each backend can pick its fastest representation.
"""

from __future__ import annotations

BACKEND_NAME = "python"


def prepare_csr(indptr, flat):
    # plain lists index faster than numpy scalars in CPython loops
    return indptr.tolist(), flat.tolist()


def prepare_pts(pts):
    return [int(p) for p in pts]


def refine(csr, perm, pos, cls, clen, alpha_seeds, n_cells):
    """Refine an ordered partition to equitability, McKay style.

    ``perm`` lists vertices cell by cell, ``pos`` inverts it, ``cls[i]`` is
    the start position of the cell covering position i, and ``clen[s]`` is
    the length of the cell starting at s (undefined elsewhere). The work
    queue is seeded with ``alpha_seeds`` (cell start positions) and run
    FIFO; affected cells split by ascending neighbor count, fragments keep
    their prior relative order, and when the parent cell is not queued its
    first largest fragment stays out of the queue.

    Returns ``(n_cells, trace)`` where trace is a flat list of ints, one
    event per actual split: scrutinized start, split start, fragment count,
    then (count value, size) per fragment. The trace is a label-independent
    invariant of the (graph, partition) pair.
    """
    indptr, nbrs = csr
    n = len(perm)
    perm_l = perm.tolist()
    pos_l = pos.tolist()
    cls_l = cls.tolist()
    clen_l = clen.tolist()

    queue: list[int] = []
    in_q = bytearray(n)
    for s in alpha_seeds:
        s = int(s)
        if not in_q[s]:
            in_q[s] = 1
            queue.append(s)
    qhead = 0
    cnt = [0] * n
    cell_hit = bytearray(n)
    trace: list[int] = []

    while qhead < len(queue) and n_cells < n:
        ws = queue[qhead]
        qhead += 1
        in_q[ws] = 0
        wl = clen_l[ws]

        touched: list[int] = []
        aff: list[int] = []
        for i in range(ws, ws + wl):
            v = perm_l[i]
            for e in range(indptr[v], indptr[v + 1]):
                u = nbrs[e]
                if cnt[u] == 0:
                    touched.append(u)
                    cs = cls_l[pos_l[u]]
                    if not cell_hit[cs]:
                        cell_hit[cs] = 1
                        aff.append(cs)
                cnt[u] += 1
        aff.sort()

        for cs in aff:
            cl = clen_l[cs]
            if cl == 1:
                continue
            base = cnt[perm_l[cs]]
            minv = maxv = base
            mixed = False
            for i in range(cs + 1, cs + cl):
                c = cnt[perm_l[i]]
                if c != base:
                    mixed = True
                if c > maxv:
                    maxv = c
                elif c < minv:
                    minv = c
            if not mixed:
                continue

            width = maxv - minv + 1
            bucket = [0] * width
            for i in range(cs, cs + cl):
                bucket[cnt[perm_l[i]] - minv] += 1
            starts: list[int] = []
            sizes: list[int] = []
            vals: list[int] = []
            nxt = [0] * width
            acc = cs
            for b in range(width):
                sz = bucket[b]
                if sz:
                    starts.append(acc)
                    sizes.append(sz)
                    vals.append(minv + b)
                nxt[b] = acc
                acc += sz
            old_seg = perm_l[cs:cs + cl]
            for v in old_seg:
                b = cnt[v] - minv
                p = nxt[b]
                nxt[b] = p + 1
                perm_l[p] = v
                pos_l[v] = p
            for fi in range(len(starts)):
                st = starts[fi]
                sz = sizes[fi]
                clen_l[st] = sz
                for i in range(st, st + sz):
                    cls_l[i] = st
            n_cells += len(starts) - 1

            trace.append(ws)
            trace.append(cs)
            trace.append(len(starts))
            for fi in range(len(starts)):
                trace.append(vals[fi])
                trace.append(sizes[fi])

            if in_q[cs]:
                # parent was queued under its start; fragments inherit one slot
                for fi in range(1, len(starts)):
                    st = starts[fi]
                    in_q[st] = 1
                    queue.append(st)
            else:
                big = 0
                for fi in range(1, len(starts)):
                    if sizes[fi] > sizes[big]:
                        big = fi
                for fi in range(len(starts)):
                    if fi == big:
                        continue
                    st = starts[fi]
                    in_q[st] = 1
                    queue.append(st)

        for u in touched:
            cnt[u] = 0
        for cs in aff:
            cell_hit[cs] = 0

    perm[:] = perm_l
    pos[:] = pos_l
    cls[:] = cls_l
    clen[:] = clen_l
    return n_cells, trace


def take_orbit(csr, pts, cnt, avail, kmax):
    """Mark every point of an orbit as chosen; returns False when some
    touched line became unsatisfiable. Always fully applied."""
    indptr, flat = csr
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            cnt[j] += 1
            avail[j] -= 1
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            c = cnt[j]
            if c > kmax or (2 <= c < kmax and c + avail[j] < kmax):
                return False
    return True


def untake_orbit(csr, pts, cnt, avail):
    indptr, flat = csr
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            cnt[j] -= 1
            avail[j] += 1


def skip_orbit(csr, pts, cnt, avail, kmax):
    """Mark every point of an orbit as excluded; returns False when some
    touched line became unsatisfiable. Always fully applied."""
    indptr, flat = csr
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            avail[j] -= 1
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            c = cnt[j]
            a = avail[j]
            if (2 <= c < kmax and c + a < kmax) or (c == 0 and a == 0):
                return False
    return True


def unskip_orbit(csr, pts, cnt, avail):
    indptr, flat = csr
    for p in pts:
        for e in range(indptr[p], indptr[p + 1]):
            avail[flat[e]] += 1
