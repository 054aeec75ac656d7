# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: equitable refinement and orbit take/skip bookkeeping.

Contract-identical to ``_py``; every output (n_cells, trace, mutated
arrays, boolean verdicts) must match the pure backend bit for bit on the
same inputs. The test suite runs both backends side by side.
"""

import numpy as np

BACKEND_NAME = "cython"


def prepare_csr(indptr, flat):
    return (np.ascontiguousarray(indptr, dtype=np.int32),
            np.ascontiguousarray(flat, dtype=np.int32))


def prepare_pts(pts):
    return np.ascontiguousarray(pts, dtype=np.int32)


def refine(csr, perm_arr, pos_arr, cls_arr, clen_arr, alpha_seeds, int n_cells):
    """See ``_py.refine``. Same FIFO worklist, same ascending-count stable
    splits, same keep-first-largest-fragment-out rule, same trace layout."""
    cdef int[::1] indptr = csr[0]
    cdef int[::1] nbrs = csr[1]
    cdef int[::1] perm = perm_arr
    cdef int[::1] pos = pos_arr
    cdef int[::1] cls = cls_arr
    cdef int[::1] clen = clen_arr
    cdef int n = perm.shape[0]

    queue_np = np.empty(4 * n + 8, dtype=np.int32)
    cdef int[::1] queue = queue_np
    in_q_np = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] in_q = in_q_np
    cnt_np = np.zeros(n, dtype=np.int32)
    cdef int[::1] cnt = cnt_np
    cell_hit_np = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] cell_hit = cell_hit_np
    touched_np = np.empty(n, dtype=np.int32)
    cdef int[::1] touched = touched_np
    aff_np = np.empty(n, dtype=np.int32)
    cdef int[::1] aff = aff_np
    bucket_np = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] bucket = bucket_np
    nxt_np = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] nxt = nxt_np
    starts_np = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] starts = starts_np
    sizes_np = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] sizes = sizes_np
    vals_np = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] vals = vals_np
    seg_np = np.empty(n, dtype=np.int32)
    cdef int[::1] seg = seg_np

    cdef int qhead = 0, qtail = 0
    cdef int s
    for seed in alpha_seeds:
        s = <int> seed
        if not in_q[s]:
            in_q[s] = 1
            queue[qtail] = s
            qtail += 1

    trace = []
    cdef int ws, wl, i, v, e, u, cs, cl, nt, na, ai
    cdef int base, minv, maxv, c, width, b, sz, acc, nf, fi, st, p, big
    cdef bint mixed

    while qhead < qtail and n_cells < n:
        ws = queue[qhead]
        qhead += 1
        in_q[ws] = 0
        wl = clen[ws]

        nt = 0
        na = 0
        for i in range(ws, ws + wl):
            v = perm[i]
            for e in range(indptr[v], indptr[v + 1]):
                u = nbrs[e]
                if cnt[u] == 0:
                    touched[nt] = u
                    nt += 1
                    cs = cls[pos[u]]
                    if not cell_hit[cs]:
                        cell_hit[cs] = 1
                        aff[na] = cs
                        na += 1
                cnt[u] += 1
        if na > 1:
            aff_np[:na].sort()

        for ai in range(na):
            cs = aff[ai]
            cl = clen[cs]
            if cl == 1:
                continue
            base = cnt[perm[cs]]
            minv = base
            maxv = base
            mixed = False
            for i in range(cs + 1, cs + cl):
                c = cnt[perm[i]]
                if c != base:
                    mixed = True
                if c > maxv:
                    maxv = c
                elif c < minv:
                    minv = c
            if not mixed:
                continue

            width = maxv - minv + 1
            for b in range(width):
                bucket[b] = 0
            for i in range(cs, cs + cl):
                bucket[cnt[perm[i]] - minv] += 1
            nf = 0
            acc = cs
            for b in range(width):
                sz = bucket[b]
                if sz:
                    starts[nf] = acc
                    sizes[nf] = sz
                    vals[nf] = minv + b
                    nf += 1
                nxt[b] = acc
                acc += sz
            for i in range(cl):
                seg[i] = perm[cs + i]
            for i in range(cl):
                v = seg[i]
                b = cnt[v] - minv
                p = nxt[b]
                nxt[b] = p + 1
                perm[p] = v
                pos[v] = p
            for fi in range(nf):
                st = starts[fi]
                sz = sizes[fi]
                clen[st] = sz
                for i in range(st, st + sz):
                    cls[i] = st
            n_cells += nf - 1

            trace.append(ws)
            trace.append(cs)
            trace.append(nf)
            for fi in range(nf):
                trace.append(vals[fi])
                trace.append(sizes[fi])

            if in_q[cs]:
                # parent was queued under its start; fragments inherit one slot
                for fi in range(1, nf):
                    st = starts[fi]
                    in_q[st] = 1
                    queue[qtail] = st
                    qtail += 1
            else:
                big = 0
                for fi in range(1, nf):
                    if sizes[fi] > sizes[big]:
                        big = fi
                for fi in range(nf):
                    if fi == big:
                        continue
                    st = starts[fi]
                    in_q[st] = 1
                    queue[qtail] = st
                    qtail += 1

        for i in range(nt):
            cnt[touched[i]] = 0
        for i in range(na):
            cell_hit[aff[i]] = 0

    return n_cells, trace


def take_orbit(csr, int[::1] pts, int[::1] cnt, int[::1] avail, int kmax):
    cdef int[::1] indptr = csr[0]
    cdef int[::1] flat = csr[1]
    cdef int i, p, e, j, c
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            cnt[j] += 1
            avail[j] -= 1
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            c = cnt[j]
            if c > kmax or (2 <= c < kmax and c + avail[j] < kmax):
                return False
    return True


def untake_orbit(csr, int[::1] pts, int[::1] cnt, int[::1] avail):
    cdef int[::1] indptr = csr[0]
    cdef int[::1] flat = csr[1]
    cdef int i, p, e, j
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            cnt[j] -= 1
            avail[j] += 1


def skip_orbit(csr, int[::1] pts, int[::1] cnt, int[::1] avail, int kmax):
    cdef int[::1] indptr = csr[0]
    cdef int[::1] flat = csr[1]
    cdef int i, p, e, j, c, a
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            avail[flat[e]] -= 1
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            j = flat[e]
            c = cnt[j]
            a = avail[j]
            if (2 <= c < kmax and c + a < kmax) or (c == 0 and a == 0):
                return False
    return True


def unskip_orbit(csr, int[::1] pts, int[::1] cnt, int[::1] avail):
    cdef int[::1] indptr = csr[0]
    cdef int[::1] flat = csr[1]
    cdef int i, p, e
    for i in range(pts.shape[0]):
        p = pts[i]
        for e in range(indptr[p], indptr[p + 1]):
            avail[flat[e]] += 1
