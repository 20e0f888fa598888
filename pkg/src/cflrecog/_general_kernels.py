"""Compiled round update for the general engine.

Cells are evaluated against the previous snapshot only; changes are
buffered and applied after the sweep.  Guess decompositions are tested with
bitsets over (span, nonterminal) pairs:

* ``po[X, O]`` / ``to[X, O]``: inner cells ``(Z, M)`` with ``M`` strictly
  inside ``O`` and ``[X,O]/[Z,M]`` not 0 / equal to 1;
* ``pi[Y, I]`` / ``ti[Y, I]``: outer cells ``(Z, M)`` with ``M`` strictly
  containing ``I`` and ``[Z,M]/[Y,I]`` not 0 / equal to 1;
* ``ip`` / ``i1``: items not 0 / equal to 1.

``[X,O]/[Y,I]`` has a true SlashGuess witness iff ``to[X,O] & ti[Y,I]`` is
non-empty, and a not-yet-refuted one iff ``po[X,O] & pi[Y,I]`` is.
"""

import numba
import numpy as np

F, T, BOT, NA = 0, 1, 2, 3
ONE = np.uint64(1)


@numba.njit(cache=True, inline="always")
def _set(bits, b):
    bits[b >> 6] |= ONE << np.uint64(b & 63)


@numba.njit(cache=True, inline="always")
def _clear(bits, b):
    bits[b >> 6] &= ~(ONE << np.uint64(b & 63))


@numba.njit(cache=True, inline="always")
def _hole(sl, a, sa, y, si):
    if sa == si:
        return T if a == y else F
    return sl[a, sa, y, si]


@numba.njit(cache=True)
def build_bits(it, sl, sidx, spi, spj, n_nts, n):
    size = spi.shape[0]
    words = (size * n_nts + 63) >> 6
    po = np.zeros((n_nts, size, words), dtype=np.uint64)
    to = np.zeros((n_nts, size, words), dtype=np.uint64)
    pi = np.zeros((n_nts, size, words), dtype=np.uint64)
    ti = np.zeros((n_nts, size, words), dtype=np.uint64)
    ip = np.zeros(words, dtype=np.uint64)
    i1 = np.zeros(words, dtype=np.uint64)
    for s in range(size):
        i, j = spi[s], spj[s]
        for y in range(n_nts):
            v = it[y, i, j]
            if v != F:
                _set(ip, s * n_nts + y)
            if v == T:
                _set(i1, s * n_nts + y)
    for so in range(size):
        i, j = spi[so], spj[so]
        if i == j:
            continue
        for k in range(i, j + 1):
            for l in range(k, j + 1):
                if k == i and l == j:
                    continue
                si = sidx[k, l]
                for x in range(n_nts):
                    for y in range(n_nts):
                        v = sl[x, so, y, si]
                        if v != F:
                            _set(po[x, so], si * n_nts + y)
                            _set(pi[y, si], so * n_nts + x)
                        if v == T:
                            _set(to[x, so], si * n_nts + y)
                            _set(ti[y, si], so * n_nts + x)
    return po, to, pi, ti, ip, i1


@numba.njit(cache=True)
def _eval_item(it, po, to, ip, i1, sidx, binary, lhs_start, n_nts, x, i, j):
    possible = False
    for r in range(lhs_start[x], lhs_start[x + 1]):
        b, c = binary[r, 1], binary[r, 2]
        for k in range(i + 1, j + 1):
            va = it[b, i, k - 1]
            vb = it[c, k, j]
            if va == T and vb == T:
                return T
            if va != F and vb != F:
                possible = True
    so = sidx[i, j]
    lo = (sidx[i, i] * n_nts) >> 6
    hi = ((sidx[j, j] + 1) * n_nts - 1) >> 6
    for wd in range(lo, hi + 1):
        if to[x, so, wd] & i1[wd]:
            return T
    if possible:
        return BOT
    for wd in range(lo, hi + 1):
        if po[x, so, wd] & ip[wd]:
            return BOT
    return F


@numba.njit(cache=True)
def _eval_slashed(it, sl, po, to, pi, ti, sidx, binary, lhs_start, n_nts, n, x, i, j, y, k, l):
    so = sidx[i, j]
    si = sidx[k, l]
    possible = False
    for r in range(lhs_start[x], lhs_start[x + 1]):
        a, b = binary[r, 1], binary[r, 2]
        for p in range(l + 1, j + 1):
            va = _hole(sl, a, sidx[i, p - 1], y, si)
            vb = it[b, p, j]
            if va == T and vb == T:
                return T
            if va != F and vb != F:
                possible = True
        for p in range(i + 1, k + 1):
            va = it[a, i, p - 1]
            vb = _hole(sl, b, sidx[p, j], y, si)
            if va == T and vb == T:
                return T
            if va != F and vb != F:
                possible = True
    top = min(sidx[j, j], sidx[k, n])
    lo = (sidx[i, i] * n_nts) >> 6
    hi = ((top + 1) * n_nts - 1) >> 6
    for wd in range(lo, hi + 1):
        if to[x, so, wd] & ti[y, si, wd]:
            return T
    if possible:
        return BOT
    for wd in range(lo, hi + 1):
        if po[x, so, wd] & pi[y, si, wd]:
            return BOT
    return F


@numba.njit(cache=True)
def evaluate(it, sl, po, to, pi, ti, ip, i1, sidx, spi, spj, binary, lhs_start, n_nts, n,
             ch_it, ch_itv, ch_sl, ch_slv):
    size = spi.shape[0]
    m = n + 2
    nci = 0
    ncs = 0
    for so in range(size):
        i, j = spi[so], spj[so]
        if i == j:
            continue
        for x in range(n_nts):
            if it[x, i, j] != BOT:
                continue
            v = _eval_item(it, po, to, ip, i1, sidx, binary, lhs_start, n_nts, x, i, j)
            if v != BOT:
                ch_it[nci] = (x * m + i) * m + j
                ch_itv[nci] = v
                nci += 1
    for so in range(size):
        i, j = spi[so], spj[so]
        if i == j:
            continue
        for k in range(i, j + 1):
            for l in range(k, j + 1):
                if k == i and l == j:
                    continue
                si = sidx[k, l]
                for x in range(n_nts):
                    for y in range(n_nts):
                        if sl[x, so, y, si] != BOT:
                            continue
                        v = _eval_slashed(it, sl, po, to, pi, ti, sidx, binary, lhs_start,
                                          n_nts, n, x, i, j, y, k, l)
                        if v != BOT:
                            ch_sl[ncs] = ((x * size + so) * n_nts + y) * size + si
                            ch_slv[ncs] = v
                            ncs += 1
    return nci, ncs


@numba.njit(cache=True)
def apply(it, sl, po, to, pi, ti, ip, i1, sidx, n_nts, n, ch_it, ch_itv, nci, ch_sl, ch_slv, ncs):
    size = sl.shape[1]
    m = n + 2
    for u in range(nci):
        code = ch_it[u]
        j = code % m
        i = (code // m) % m
        x = code // (m * m)
        v = ch_itv[u]
        it[x, i, j] = v
        b = sidx[i, j] * n_nts + x
        if v == F:
            _clear(ip, b)
        else:
            _set(i1, b)
    for u in range(ncs):
        code = ch_sl[u]
        si = code % size
        code //= size
        y = code % n_nts
        code //= n_nts
        so = code % size
        x = code // size
        v = ch_slv[u]
        sl[x, so, y, si] = v
        if v == F:
            _clear(po[x, so], si * n_nts + y)
            _clear(pi[y, si], so * n_nts + x)
        else:
            _set(to[x, so], si * n_nts + y)
            _set(ti[y, si], so * n_nts + x)


@numba.njit(cache=True)
def run_rounds(it, sl, sidx, spi, spj, binary, lhs_start, n_nts, n, budget, stop_when_decided):
    """Advance ``it``/``sl`` in place for up to ``budget`` rounds; return rounds used."""
    po, to, pi, ti, ip, i1 = build_bits(it, sl, sidx, spi, spj, n_nts, n)
    ch_it = np.empty(it.size, dtype=np.int64)
    ch_itv = np.empty(it.size, dtype=np.int8)
    ch_sl = np.empty(sl.size, dtype=np.int64)
    ch_slv = np.empty(sl.size, dtype=np.int8)
    rounds = 0
    while rounds < budget:
        if stop_when_decided and it[0, 1, n] != BOT:
            break
        nci, ncs = evaluate(it, sl, po, to, pi, ti, ip, i1, sidx, spi, spj, binary, lhs_start,
                            n_nts, n, ch_it, ch_itv, ch_sl, ch_slv)
        rounds += 1
        if nci + ncs == 0:
            break
        apply(it, sl, po, to, pi, ti, ip, i1, sidx, n_nts, n, ch_it, ch_itv, nci, ch_sl, ch_slv, ncs)
    return rounds


# ---------------------------------------------------------------- packed variant
# For grammars with at most 64 nonterminals the slashed cells of one
# (outer span, inner span, X) triple are also kept as two masks over Y:
# ``slt`` (cells equal to 1) and ``slp`` (cells not equal to 0).  Split
# decompositions are then evaluated for every Y at once.

@numba.njit(cache=True)
def build_planes(sl, spi, spj, sidx, n_nts):
    size = spi.shape[0]
    slt = np.zeros((size, size, n_nts), dtype=np.uint64)
    slp = np.zeros((size, size, n_nts), dtype=np.uint64)
    for so in range(size):
        i, j = spi[so], spj[so]
        for k in range(i, j + 1):
            for l in range(k, j + 1):
                if k == i and l == j:
                    continue
                si = sidx[k, l]
                for x in range(n_nts):
                    for y in range(n_nts):
                        v = sl[x, so, y, si]
                        if v != F:
                            slp[so, si, x] |= ONE << np.uint64(y)
                        if v == T:
                            slt[so, si, x] |= ONE << np.uint64(y)
    return slt, slp


@numba.njit(cache=True, inline="always")
def _guess(a_bits, x, so, b_bits, y, si, lo, hi):
    for wd in range(lo, hi + 1):
        if a_bits[x, so, wd] & b_bits[y, si, wd]:
            return True
    return False


@numba.njit(cache=True)
def evaluate_packed(it, slt, slp, po, to, pi, ti, ip, i1, sidx, spi, spj, binary, lhs_start,
                    n_nts, n, ch_it, ch_itv, ch_sl, ch_t, ch_f):
    size = spi.shape[0]
    m = n + 2
    nci = 0
    ncs = 0
    for so in range(size):
        i, j = spi[so], spj[so]
        if i == j:
            continue
        for x in range(n_nts):
            if it[x, i, j] != BOT:
                continue
            v = _eval_item(it, po, to, ip, i1, sidx, binary, lhs_start, n_nts, x, i, j)
            if v != BOT:
                ch_it[nci] = (x * m + i) * m + j
                ch_itv[nci] = v
                nci += 1
    for so in range(size):
        i, j = spi[so], spj[so]
        if i == j:
            continue
        for k in range(i, j + 1):
            for l in range(k, j + 1):
                if k == i and l == j:
                    continue
                si = sidx[k, l]
                top = min(sidx[j, j], sidx[k, n])
                lo = (sidx[i, i] * n_nts) >> 6
                hi = ((top + 1) * n_nts - 1) >> 6
                for x in range(n_nts):
                    bot = slp[so, si, x] & ~slt[so, si, x]
                    if bot == 0:
                        continue
                    tm = np.uint64(0)
                    pm = np.uint64(0)
                    for r in range(lhs_start[x], lhs_start[x + 1]):
                        a, b = binary[r, 1], binary[r, 2]
                        for p in range(l + 1, j + 1):
                            vb = it[b, p, j]
                            if vb == F:
                                continue
                            sa = sidx[i, p - 1]
                            if sa == si:
                                ht = ONE << np.uint64(a)
                                hp = ht
                            else:
                                ht = slt[sa, si, a]
                                hp = slp[sa, si, a]
                            pm |= hp
                            if vb == T:
                                tm |= ht
                        for p in range(i + 1, k + 1):
                            va = it[a, i, p - 1]
                            if va == F:
                                continue
                            sb = sidx[p, j]
                            if sb == si:
                                ht = ONE << np.uint64(b)
                                hp = ht
                            else:
                                ht = slt[sb, si, b]
                                hp = slp[sb, si, b]
                            pm |= hp
                            if va == T:
                                tm |= ht
                    newt = bot & tm
                    newf = np.uint64(0)
                    rest = bot & ~tm
                    if rest:
                        for y in range(n_nts):
                            bit = ONE << np.uint64(y)
                            if not (rest & bit):
                                continue
                            if _guess(to, x, so, ti, y, si, lo, hi):
                                newt |= bit
                            elif not (pm & bit) and not _guess(po, x, so, pi, y, si, lo, hi):
                                newf |= bit
                    if newt | newf:
                        ch_sl[ncs] = (so * size + si) * n_nts + x
                        ch_t[ncs] = newt
                        ch_f[ncs] = newf
                        ncs += 1
    return nci, ncs


@numba.njit(cache=True)
def apply_packed(it, sl, slt, slp, po, to, pi, ti, ip, i1, sidx, n_nts, n,
                 ch_it, ch_itv, nci, ch_sl, ch_t, ch_f, ncs):
    size = sl.shape[1]
    m = n + 2
    for u in range(nci):
        code = ch_it[u]
        j = code % m
        i = (code // m) % m
        x = code // (m * m)
        v = ch_itv[u]
        it[x, i, j] = v
        b = sidx[i, j] * n_nts + x
        if v == F:
            _clear(ip, b)
        else:
            _set(i1, b)
    for u in range(ncs):
        code = ch_sl[u]
        x = code % n_nts
        code //= n_nts
        si = code % size
        so = code // size
        tm = ch_t[u]
        fm = ch_f[u]
        slt[so, si, x] |= tm
        slp[so, si, x] &= ~fm
        bo = so * n_nts + x
        wo = bo >> 6
        mo = ONE << np.uint64(bo & 63)
        for y in range(n_nts):
            bit = ONE << np.uint64(y)
            if not ((tm | fm) & bit):
                continue
            bi = si * n_nts + y
            wi = bi >> 6
            mi = ONE << np.uint64(bi & 63)
            if tm & bit:
                sl[x, so, y, si] = T
                to[x, so, wi] |= mi
                ti[y, si, wo] |= mo
            else:
                sl[x, so, y, si] = F
                po[x, so, wi] &= ~mi
                pi[y, si, wo] &= ~mo


@numba.njit(cache=True)
def run_rounds_packed(it, sl, sidx, spi, spj, binary, lhs_start, n_nts, n, budget,
                      stop_when_decided):
    po, to, pi, ti, ip, i1 = build_bits(it, sl, sidx, spi, spj, n_nts, n)
    slt, slp = build_planes(sl, spi, spj, sidx, n_nts)
    size = spi.shape[0]
    ch_it = np.empty(it.size, dtype=np.int64)
    ch_itv = np.empty(it.size, dtype=np.int8)
    ch_sl = np.empty(size * size * n_nts, dtype=np.int64)
    ch_t = np.empty(size * size * n_nts, dtype=np.uint64)
    ch_f = np.empty(size * size * n_nts, dtype=np.uint64)
    rounds = 0
    while rounds < budget:
        if stop_when_decided and it[0, 1, n] != BOT:
            break
        nci, ncs = evaluate_packed(it, slt, slp, po, to, pi, ti, ip, i1, sidx, spi, spj, binary,
                                   lhs_start, n_nts, n, ch_it, ch_itv, ch_sl, ch_t, ch_f)
        rounds += 1
        if nci + ncs == 0:
            break
        apply_packed(it, sl, slt, slp, po, to, pi, ti, ip, i1, sidx, n_nts, n,
                     ch_it, ch_itv, nci, ch_sl, ch_t, ch_f, ncs)
    return rounds
