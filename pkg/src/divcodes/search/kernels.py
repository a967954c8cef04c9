"""Compiled depth-first kernels for the two augmentation searches.

Both searches walk the message space one coordinate at a time. At level ``l``
the columns (or points) are grouped by their first ``l`` message coordinates
and only the number chosen per group is fixed; every codeword spanned by the
first ``l`` basis rows then has a known weight. Going from level ``l`` to
``l + 1`` splits each of the ``m = 2^l`` groups in two, which introduces an
integer vector ``x`` of length ``m`` (the counts in the upper halves).

The weights of the ``m`` new codewords are affine in the Walsh-Hadamard
transform of ``x``: ``value(hp) = B[hp] + S * xhat(hp)`` with
``xhat(hp) = sum_z (-1)^(hp.z) x_z``. The transform factors through sums and
differences of halves, so the vectors ``x`` with every ``value(hp)``
admissible are enumerated by a butterfly tree whose leaves are the transform
values in natural order. Each tree node holds componentwise bounds and a
congruence (difference halves pick up a factor two in the modulus), and a
leaf value is accepted only if it lies in its node's range and its weight is
admissible.

Tree nodes at depth ``t`` with prefix ``p`` own the slice
``[p * 2^(l-t), (p + 1) * 2^(l-t))`` of row ``t`` in the per-level buffers, so
backtracking never has to restore anything.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BIG = 1 << 30


@njit(cache=True)
def _popcount(v):
    c = 0
    while v:
        v &= v - 1
        c += 1
    return c


@njit(cache=True)
def _ctz(v):
    c = 0
    while not (v >> c) & 1:
        c += 1
    return c


@njit(cache=True)
def _build_u(ell, t, prefix, lo, hi, res):
    """Bounds of the sum half of node (t, prefix)."""
    s = (1 << ell) >> t
    half = s >> 1
    i0 = prefix * s
    mod = 1 << _popcount(prefix)
    for z in range(half):
        lo[t + 1, i0 + z] = lo[t, i0 + z] + lo[t, i0 + half + z]
        hi[t + 1, i0 + z] = hi[t, i0 + z] + hi[t, i0 + half + z]
        res[t + 1, i0 + z] = (res[t, i0 + z] + res[t, i0 + half + z]) % mod


@njit(cache=True)
def _build_d(ell, t, prefix, lo, hi, res, uvec):
    """Bounds of the difference half of node (t, prefix), given its sum half."""
    s = (1 << ell) >> t
    half = s >> 1
    i0 = prefix * s
    j0 = i0 + half
    mod2 = 2 << _popcount(prefix)
    for z in range(half):
        u = uvec[t, prefix * half + z]
        lo0 = lo[t, i0 + z]
        hi0 = hi[t, i0 + z]
        lo1 = lo[t, i0 + half + z]
        hi1 = hi[t, i0 + half + z]
        a = max(u - 2 * hi1, 2 * lo0 - u)
        b = min(u - 2 * lo1, 2 * hi0 - u)
        r = (u - 2 * res[t, i0 + half + z]) % mod2
        a += (r - a) % mod2
        b -= (b - r) % mod2
        if a > b:
            return False
        lo[t + 1, j0 + z] = a
        hi[t + 1, j0 + z] = b
        res[t + 1, j0 + z] = r
    return True


@njit(cache=True)
def _combine(ell, t, prefix, vec, uvec):
    s = (1 << ell) >> t
    half = s >> 1
    i0 = prefix * s
    j0 = i0 + half
    for z in range(half):
        u = uvec[t, prefix * half + z]
        d = vec[t + 1, j0 + z]
        vec[t, i0 + z] = (u + d) >> 1
        vec[t, i0 + half + z] = (u - d) >> 1


@njit(cache=True)
def _bf_next(ell, lo, hi, res, vec, uvec, B, S, ok, rowsel, st):
    """Advance to the next admissible ``x`` (left in ``vec[0, :2^ell]``).

    The caller fills ``lo[0]``, ``hi[0]`` and sets ``st = [0, 1]`` for a
    fresh enumeration; ``st[1] == 2`` marks a frame that has yielded.
    """
    N = 1 << ell
    width = ok.shape[1]
    if st[1] == 1:
        for z in range(N):
            res[0, z] = 0
        for t in range(ell):
            _build_u(ell, t, 0, lo, hi, res)
        hp = 0
        entering = True
    else:
        hp = N - 1
        entering = False
    while hp >= 0:
        if hp == N:
            st[0] = N
            st[1] = 2
            return True
        mod = 1 << _popcount(hp)
        if entering:
            good = True
            if hp > 0:
                p = _ctz(hp)
                t = ell - 1 - p
                prefix = hp >> (p + 1)
                half = (N >> t) >> 1
                for z in range(half):
                    uvec[t, prefix * half + z] = vec[t + 1, 2 * prefix * half + z]
                good = _build_d(ell, t, prefix, lo, hi, res, uvec)
                if good:
                    pp = 2 * prefix + 1
                    for tt in range(t + 1, ell):
                        _build_u(ell, tt, pp, lo, hi, res)
                        pp = 2 * pp
            if not good:
                hp -= 1
                entering = False
                continue
            v = lo[ell, hp]
        else:
            v = vec[ell, hp] + mod
        top = hi[ell, hp]
        row = rowsel[hp]
        found = False
        while v <= top:
            g = B[hp] + S * v
            if 0 <= g < width and ok[row, g]:
                found = True
                break
            v += mod
        if not found:
            hp -= 1
            entering = False
            continue
        vec[ell, hp] = v
        b = 0
        while (hp >> b) & 1:
            _combine(ell, ell - 1 - b, hp >> (b + 1), vec, uvec)
            b += 1
        hp += 1
        entering = True
    st[0] = -1
    return False


@njit(cache=True)
def _grow(buf, count, row):
    if count == buf.shape[0]:
        nb = np.empty((2 * buf.shape[0], buf.shape[1]), buf.dtype)
        nb[:count] = buf[:count]
        buf = nb
    buf[count] = row
    return buf


@njit(cache=True)
def lift_search(k, s0_values, P, offset, par, ok, stats, limit, node_cap):
    """Class counts of admissible coset leaders; one row per solution.

    ``S[l, z]`` counts chosen columns of class ``z`` at level ``l`` and
    ``P[l, z]`` the class sizes. For ``h = hp + m`` the new weight is
    ``offset[h] + sum_z (even: S + P1 - 2x, odd: P0 - S + 2x)``, that is
    ``B[hp] - 2 * xhat(hp)``, with ``x = S[l + 1, z + m]``. ``ok[0, v]`` tells
    whether weight ``v`` on the old coordinates is admissible.
    """
    M = 1 << k
    out = np.empty((16, M), np.int64)
    count = 0
    S = np.zeros((k + 1, M), np.int64)
    lo = np.zeros((k + 1, k + 1, M), np.int64)
    hi = np.zeros((k + 1, k + 1, M), np.int64)
    res = np.zeros((k + 1, k + 1, M), np.int64)
    vec = np.zeros((k + 1, k + 1, M), np.int64)
    uvec = np.zeros((k + 1, k + 1, M), np.int64)
    B = np.zeros((k + 1, M), np.int64)
    st = np.zeros((k + 1, 2), np.int64)
    rowsel = np.zeros(M, np.int64)
    for s0 in s0_values:
        S[0, 0] = s0
        level = 0
        active = True
        while level >= 0:
            if active:
                stats[0] += 1
                stats[2 + level] += 1
                active = False
                if node_cap > 0 and stats[0] > node_cap:
                    stats[1] = count
                    return out[:count]
                if level == k:
                    out = _grow(out, count, S[k])
                    count += 1
                    level -= 1
                    if limit > 0 and count >= limit:
                        stats[1] = count
                        return out[:count]
                    continue
                m = 1 << level
                for z in range(m):
                    s = S[level, z]
                    lo[level, 0, z] = max(0, s - P[level + 1, z])
                    hi[level, 0, z] = min(s, P[level + 1, z + m])
                for hp in range(m):
                    b = offset[hp + m]
                    for z in range(m):
                        s = S[level, z]
                        if par[hp & z]:
                            b += P[level + 1, z] - s
                        else:
                            b += s + P[level + 1, z + m]
                    B[level, hp] = b
                st[level, 0] = 0
                st[level, 1] = 1
            m = 1 << level
            if _bf_next(level, lo[level], hi[level], res[level], vec[level], uvec[level],
                        B[level], -2, ok, rowsel, st[level]):
                for z in range(m):
                    x = vec[level, 0, z]
                    S[level + 1, z] = S[level, z] - x
                    S[level + 1, z + m] = x
                level += 1
                active = True
            else:
                level -= 1
    stats[1] = count
    return out[:count]


@njit(cache=True)
def _images_minimal(qn, level, vl, k, phimat, par, spanpos, sg, pool, off, n, out_sg, off1, cap1):
    """Is ``qn`` (length ``2m``, ``m = 2^level``) lexicographically least among its images?

    Elements of the current list are message automorphisms ``g`` (rows of
    ``phimat``) with the affine map they induce on the first ``level``
    projection coordinates (``pool[off + i*m : off + (i+1)*m]``). Those that
    also keep ``vl`` modulo the old span act on the new coordinate, once per
    translation bit. Returns how many fix ``qn`` (stored for the next level,
    up to ``cap1``), or -1 when some image is smaller.
    """
    m = 1 << level
    m2 = m << 1
    cnt = 0
    for i in range(n):
        g = sg[i]
        x = 0
        for t in range(k):
            if (vl >> t) & 1:
                x ^= phimat[g, t]
        a = spanpos[x ^ vl]
        if a < 0:
            continue
        base = off + i * m
        for b in range(2):
            cmp = 0
            for y in range(m2):
                zl = y & (m - 1)
                img = pool[base + zl] + m * ((y >> level) ^ par[a & zl] ^ b)
                c = qn[img]
                if c != qn[y]:
                    cmp = -1 if c < qn[y] else 1
                    break
            if cmp < 0:
                return -1
            if cmp == 0 and cnt < cap1:
                out_sg[cnt] = g
                dst = off1 + cnt * m2
                for y in range(m2):
                    zl = y & (m - 1)
                    pool[dst + y] = pool[base + zl] + m * ((y >> level) ^ par[a & zl] ^ b)
                cnt += 1
    return cnt


@njit(cache=True)
def _count_splits(ell, lo0, hi0, B, ok, rowsel, cap_count, slo, shi, sres, svec, suvec, sst):
    for z in range(1 << ell):
        slo[0, z] = lo0[z]
        shi[0, z] = hi0[z]
    sst[0] = 0
    sst[1] = 1
    c = 0
    while c < cap_count and _bf_next(ell, slo, shi, sres, svec, suvec, B, 1, ok, rowsel, sst):
        c += 1
    return c


NKILL = 4
POOL_LEVEL = 1 << 19


@njit(cache=True)
def lengthen_search(k, w, wrow, ok, cost, cap, par, phimat, root_q, root_dirs, root_g, root_perm,
                    stop_level, stats, limit, node_cap, count_cap):
    """Point multisets of size ``w`` in GF(2)^k, as multiplicity rows plus the directions used.

    Level ``l`` fixes the multiset projected onto ``l`` message directions
    ``v_0 .. v_(l-1)``: ``Q[l, z]`` counts points ``q`` with ``v_i . q = z_i``.
    For a further direction ``v`` and ``h = span[hp] ^ v`` the number of
    points with odd ``h . q`` is ``sum_{odd z} Q_z + xhat(hp)`` where ``x_z``
    counts class-``z`` points with ``v . q = 1``; it must be admissible in row
    ``wrow[h]`` of ``ok``.

    Every complementary direction is tried at each node: one without any
    admissible split kills the node, and the search branches on the direction
    with fewest splits (counted up to ``count_cap``; ties go to the direction
    whose new codewords have the fewest admissible values in total, summed
    as ``cost`` per weight row). The choice depends only
    on the node, so symmetries can be pruned along a stabilizer chain: the
    rows of ``phimat`` are message automorphisms of the residual (images of
    the unit vectors), which combined with translations of the points act on
    the solutions. A child must be lexicographically least under those
    elements that fix its parent and the directions chosen so far. Lists are
    truncated at a fixed size, which only weakens the pruning.

    The search starts from the node at level ``L = len(root_dirs)`` with
    projection ``root_q``; ``root_g`` and ``root_perm`` list the elements
    fixing it (automorphism index, induced affine map on GF(2)^L). Nodes
    reaching ``stop_level`` (or ``k``) are returned; their rows hold
    ``Q[level]`` padded with zeros and the directions used so far.

    ``stats`` holds nodes, solutions, nodes per level and dead nodes per level.
    """
    M = 1 << k
    out = np.empty((16, M), np.int64)
    outdirs = np.empty((16, k), np.int64)
    count = 0
    Q = np.zeros((k + 1, M), np.int64)
    lo = np.zeros((k + 1, k + 1, M), np.int64)
    hi = np.zeros((k + 1, k + 1, M), np.int64)
    res = np.zeros((k + 1, k + 1, M), np.int64)
    vec = np.zeros((k + 1, k + 1, M), np.int64)
    uvec = np.zeros((k + 1, k + 1, M), np.int64)
    B = np.zeros((k + 1, M), np.int64)
    st = np.zeros((k + 1, 2), np.int64)
    G = phimat.shape[0]
    capl = np.zeros(k + 2, np.int64)
    off = np.zeros(k + 2, np.int64)
    for lvl in range(k + 1):
        capl[lvl] = max(1, min(G << min(lvl, 20), POOL_LEVEL >> lvl))
        off[lvl + 1] = off[lvl] + (capl[lvl] << lvl)
    pool = np.zeros(off[k + 1], np.int64)
    sg = np.zeros((k + 1, capl.max()), np.int64)
    nst = np.zeros(k + 1, np.int64)
    spanpos = np.full((k + 1, M), -1, np.int64)
    span = np.zeros((k + 1, M), np.int64)
    pivmask = np.zeros(k + 1, np.int64)
    dirs = np.zeros(k, np.int64)
    rowsel = np.zeros((k + 1, M), np.int64)
    trow = np.zeros(M, np.int64)
    qn = np.zeros(M, np.int64)
    slo = np.zeros((k + 1, M), np.int64)
    shi = np.zeros((k + 1, M), np.int64)
    sres = np.zeros((k + 1, M), np.int64)
    svec = np.zeros((k + 1, M), np.int64)
    suvec = np.zeros((k + 1, M), np.int64)
    sst = np.zeros(2, np.int64)
    killers = np.zeros((k + 1, NKILL), np.int64)
    L = root_dirs.shape[0]
    spanpos[0, 0] = 0
    for lvl in range(L):
        v = root_dirs[lvl]
        dirs[lvl] = v
        m = 1 << lvl
        for hp in range(m):
            span[lvl + 1, hp] = span[lvl, hp]
            span[lvl + 1, hp + m] = span[lvl, hp] ^ v
        for hp in range(2 * m):
            spanpos[lvl + 1, span[lvl + 1, hp]] = hp
        pivmask[lvl + 1] = pivmask[lvl] | (v & -v)
    for z in range(1 << L):
        Q[L, z] = root_q[z]
    nst[L] = min(root_g.shape[0], capl[L])
    for i in range(nst[L]):
        sg[L, i] = root_g[i]
        for z in range(1 << L):
            pool[off[L] + (i << L) + z] = root_perm[i, z]
    stop = k if stop_level <= 0 or stop_level > k else stop_level
    level = L
    active = True
    while level >= L:
        if active:
            stats[0] += 1
            stats[2 + level] += 1
            active = False
            if node_cap > 0 and stats[0] > node_cap:
                break
            if level == stop:
                out = _grow(out, count, Q[level])
                outdirs = _grow(outdirs, count, dirs)
                count += 1
                level -= 1
                if limit > 0 and count >= limit:
                    break
                continue
            m = 1 << level
            c1 = cap[level + 1]
            for z in range(m):
                q = Q[level, z]
                lo[level, 0, z] = max(0, q - c1)
                hi[level, 0, z] = min(q, c1)
            for hp in range(m):
                b = 0
                for z in range(m):
                    if par[hp & z]:
                        b += Q[level, z]
                B[level, hp] = b
            # directions that recently killed a sibling are tried first
            dead = False
            for i in range(NKILL):
                v = killers[level, i]
                if v == 0 or v & pivmask[level]:
                    continue
                for hp in range(m):
                    trow[hp] = wrow[span[level, hp] ^ v]
                if _count_splits(level, lo[level, 0], hi[level, 0], B[level], ok, trow,
                                 1, slo, shi, sres, svec, suvec, sst) == 0:
                    dead = True
                    break
            if dead:
                stats[k + 3 + level] += 1
                level -= 1
                continue
            best = -1
            bestc = count_cap + 1
            bestw = 0
            for v in range(1, M):
                if v & pivmask[level]:
                    continue
                tw = 0
                for hp in range(m):
                    trow[hp] = wrow[span[level, hp] ^ v]
                    tw += cost[trow[hp]]
                c = _count_splits(level, lo[level, 0], hi[level, 0], B[level], ok, trow,
                                  count_cap, slo, shi, sres, svec, suvec, sst)
                if c < bestc or (c == bestc and tw < bestw):
                    bestc = c
                    bestw = tw
                    best = v
                    if c == 0:
                        break
            if bestc == 0:
                for i in range(NKILL - 1, 0, -1):
                    killers[level, i] = killers[level, i - 1]
                killers[level, 0] = best
                stats[k + 3 + level] += 1
                level -= 1
                continue
            dirs[level] = best
            for hp in range(2 * m):
                spanpos[level + 1, span[level + 1, hp]] = -1
            for hp in range(m):
                rowsel[level, hp] = wrow[span[level, hp] ^ best]
                span[level + 1, hp] = span[level, hp]
                span[level + 1, hp + m] = span[level, hp] ^ best
            for hp in range(2 * m):
                spanpos[level + 1, span[level + 1, hp]] = hp
            # best vanishes on the old pivots, so its lowest bit is a new one
            pivmask[level + 1] = pivmask[level] | (best & -best)
            st[level, 0] = 0
            st[level, 1] = 1
        m = 1 << level
        if _bf_next(level, lo[level], hi[level], res[level], vec[level], uvec[level],
                    B[level], 1, ok, rowsel[level], st[level]):
            for z in range(m):
                x = vec[level, 0, z]
                qn[z] = Q[level, z] - x
                qn[z + m] = x
            cnt = _images_minimal(qn, level, dirs[level], k, phimat, par, spanpos[level],
                                  sg[level], pool, off[level], nst[level], sg[level + 1],
                                  off[level + 1], capl[level + 1])
            if cnt >= 0:
                for y in range(2 * m):
                    Q[level + 1, y] = qn[y]
                nst[level + 1] = cnt
                level += 1
                active = True
        else:
            level -= 1
    stats[1] = count
    return out[:count], outdirs[:count]


@njit(cache=True)
def least_image(q, perm):
    """Row ``e`` of ``perm`` minimizing ``q[perm[e]]`` lexicographically, and that image."""
    n, m = perm.shape
    best = 0
    for e in range(1, n):
        for y in range(m):
            a = q[perm[e, y]]
            b = q[perm[best, y]]
            if a != b:
                if a < b:
                    best = e
                break
    out = np.empty(m, np.int64)
    for y in range(m):
        out[y] = q[perm[best, y]]
    return out


@njit(cache=True)
def fixing_rows(q, perm):
    n, m = perm.shape
    fix = np.ones(n, np.bool_)
    for e in range(n):
        for y in range(m):
            if q[perm[e, y]] != q[y]:
                fix[e] = False
                break
    return fix
