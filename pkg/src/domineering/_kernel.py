"""Compiled win/loss search for plain boards (no abstract parts).

The board is held twice: ``rows[r]`` has bit ``c`` set when cell (r, c) is
free, ``cols[c]`` has bit ``r`` set for the same cell.  Horizontal dominoes
lie along rows and vertical ones along columns, so every count below is one
routine applied to the rows (Horizontal) or to the columns (Vertical).

Static cutoffs count moves.  For the player P to move and the opponent O:

* a *safe* placement uses only cells O can never cover;
* a *protected* strip is three cells along a line whose middle cell O can
  never cover.  O needs two moves to deny it and P can answer the first, so
  it is as good as a safe placement;
* a *vulnerable* set is a family of disjoint placements such that no single
  O move touches two of them (or touches one and a protected strip).

Playing vulnerable placements first, answering attacks on protected strips
and keeping safe placements for last, P can make at least
``safe + ceil(vuln / 2)`` moves when moving first and ``safe + vuln // 2``
when moving second.  P wins if the first count exceeds the most moves O
could ever make, and loses if O's second-mover count reaches P's maximum.

The transposition table is keyed by two independent Zobrist hashes, each
taken as the minimum over the four reflections that keep the players'
directions, and stores one result per position and player to move.
"""

from __future__ import annotations

import numpy as np
from numba import njit

WIN = 1
LOSS = 0
ABORT = -1

MAX_SIDE = 62

_SIDE = np.int64(0x2545F4914F6CDD1D)

# flags
USE_TT = 1
VULNERABLE = 2
HISTORY = 4
LOOKAHEAD = 8
PROTECTED = 16
ALL_FEATURES = USE_TT | VULNERABLE | HISTORY | LOOKAHEAD | PROTECTED
# protected strips are sound but cost more time than they save on rectangles
DEFAULT_FLAGS = USE_TT | VULNERABLE | HISTORY | LOOKAHEAD


@njit(cache=True, inline="always")
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True, inline="always")
def _pairs(x):
    """Greedy count of disjoint adjacent pairs of bits (optimal on a line)."""
    c = 0
    while x:
        low = x & -x
        if x & (low << 1):
            c += 1
            x &= ~(low | (low << 1))
        else:
            x &= ~low
    return c


@njit(cache=True)
def _line_stats(lines, n, out, base, flags):
    """Counts for the player whose dominoes lie along ``lines``.

    out[base] = most moves, out[base + 1] = safe placements plus protected
    strips, out[base + 2] = size of a vulnerable set.
    """
    most = 0
    safe = 0
    vul = 0
    prev = 0
    for i in range(n):
        line = lines[i]
        most += _pairs(line)
        nb = 0
        if i > 0:
            nb |= lines[i - 1]
        if i + 1 < n:
            nb |= lines[i + 1]
        only = line & ~nb
        x = only
        used = 0
        while x:
            b = x & -x
            if x & (b << 1):
                used |= b | (b << 1)
                safe += 1
                x &= ~(b | (b << 1))
            else:
                x &= ~b
        if not flags & VULNERABLE:
            continue
        avail = line & ~used & ~prev
        struct = 0
        if flags & PROTECTED:
            mid = avail & only & (avail << 1) & (avail >> 1)
            while mid:
                b = mid & -mid
                struct |= (b >> 1) | b | (b << 1)
                safe += 1
                mid &= ~(b | (b << 1) | (b << 2))
        x = avail & ~struct
        while x:
            b = x & -x
            if x & (b << 1):
                struct |= b | (b << 1)
                vul += 1
                x &= ~(b | (b << 1))
            else:
                x &= ~b
        prev = struct
    out[base] = most
    out[base + 1] = safe
    out[base + 2] = vul


@njit(cache=True)
def counts(rows, cols, h, w, out, flags):
    """out = [max V, guaranteed V, vulnerable V, max H, guaranteed H, vulnerable H]."""
    _line_stats(cols, w, out, 0, flags)
    _line_stats(rows, h, out, 3, flags)


@njit(cache=True, inline="always")
def _static(st, vert):
    """+1 if the player to move wins by counting, -1 if they lose, else 0."""
    if vert:
        if st[1] + (st[2] + 1) // 2 > st[3]:
            return 1
        if st[4] + st[5] // 2 >= st[0]:
            return -1
    else:
        if st[4] + (st[5] + 1) // 2 > st[0]:
            return 1
        if st[1] + st[2] // 2 >= st[3]:
            return -1
    return 0


@njit(cache=True, inline="always")
def _flip(rows, cols, hs, zob, vert, r, c):
    """Place or lift the domino whose top-left cell is (r, c)."""
    if vert:
        rows[r] ^= np.int64(1) << c
        rows[r + 1] ^= np.int64(1) << c
        cols[c] ^= np.int64(3) << r
        r2 = r + 1
        c2 = c
    else:
        rows[r] ^= np.int64(3) << c
        cols[c] ^= np.int64(1) << r
        cols[c + 1] ^= np.int64(1) << r
        r2 = r
        c2 = c + 1
    for s in range(2):
        for k in range(4):
            hs[s, k] ^= zob[s, k, r, c] ^ zob[s, k, r2, c2]


@njit(cache=True, inline="always")
def _tt_key(hs, vert):
    best = 0
    for k in range(1, 4):
        if hs[0, k] < hs[0, best] or (hs[0, k] == hs[0, best] and hs[1, k] < hs[1, best]):
            best = k
    k1 = hs[0, best]
    if vert:
        k1 ^= _SIDE
    return k1, hs[1, best]


@njit(cache=True, inline="always")
def _tt_get(tt1, tt2, ttv, k1, k2):
    slot = (k1 & (tt1.shape[0] - 1)) & ~1
    for j in range(2):
        if ttv[slot + j] != 0 and tt1[slot + j] == k1 and tt2[slot + j] == k2:
            return ttv[slot + j] & 1
    return -1


@njit(cache=True, inline="always")
def _tt_put(tt1, tt2, ttv, k1, k2, result, work):
    """Slot 0 of a bucket keeps the biggest subtree seen, slot 1 the newest."""
    slot = (k1 & (tt1.shape[0] - 1)) & ~1
    if tt1[slot] == k1 and tt2[slot] == k2:
        ttv[slot] = (ttv[slot] & ~1) | result
        return
    lw = 1
    while work > 1 and lw < 62:
        work >>= 1
        lw += 1
    if ttv[slot] == 0 or lw >= (ttv[slot] >> 1):
        tt1[slot + 1] = tt1[slot]
        tt2[slot + 1] = tt2[slot]
        ttv[slot + 1] = ttv[slot]
        dst = slot
    else:
        dst = slot + 1
    tt1[dst] = k1
    tt2[dst] = k2
    ttv[dst] = (lw << 1) | result


@njit(cache=True)
def _search(rows, cols, h, w, vert, depth, zob, hs, tt1, tt2, ttv, hist,
            mr, mc, ms, cnt, stats, budget, flags, wts):
    """Alpha-beta (win/loss) search; the caller has checked the static test."""
    stats[0] += 1
    if stats[0] > budget:
        return ABORT
    start = stats[0]
    use_tt = flags & USE_TT
    k1 = np.int64(0)
    k2 = np.int64(0)
    if use_tt:
        k1, k2 = _tt_key(hs, vert)
        got = _tt_get(tt1, tt2, ttv, k1, k2)
        if got >= 0:
            stats[1] += 1
            return got

    pl = 1 if vert else 0
    n = 0
    xr = mr[depth]
    xc = mc[depth]
    xs = ms[depth]
    st = cnt[depth + 1]
    sign = 1 if vert else -1
    result = LOSS
    done = False
    nlines = w if vert else h
    for i in range(nlines):
        line = cols[i] if vert else rows[i]
        a = line & (line >> 1)
        while a:
            b = a & -a
            a ^= b
            j = _popcount(b - 1)
            r = j if vert else i
            c = i if vert else j
            _flip(rows, cols, hs, zob, vert, r, c)
            counts(rows, cols, h, w, st, flags)
            verdict = _static(st, not vert)
            if verdict == 0 and use_tt and flags & LOOKAHEAD:
                ck1, ck2 = _tt_key(hs, not vert)
                if _tt_get(tt1, tt2, ttv, ck1, ck2) == LOSS:
                    verdict = -1
            _flip(rows, cols, hs, zob, vert, r, c)
            if verdict < 0:
                done = True
                result = WIN
                break
            if verdict > 0:
                continue        # the opponent wins after this move
            s = sign * (wts[0] * (st[1] - st[4]) + wts[1] * (st[2] - st[5]) + wts[2] * (st[0] - st[3]))
            s <<= 20
            if flags & HISTORY:
                s += min(hist[pl, r, c], (1 << 20) - 1)
            k = n
            while k > 0 and xs[k - 1] < s:
                xr[k] = xr[k - 1]
                xc[k] = xc[k - 1]
                xs[k] = xs[k - 1]
                k -= 1
            xr[k] = r
            xc[k] = c
            xs[k] = s
            n += 1
        if done:
            break

    if not done:
        for i in range(n):
            r = xr[i]
            c = xc[i]
            _flip(rows, cols, hs, zob, vert, r, c)
            res = _search(rows, cols, h, w, not vert, depth + 1, zob, hs, tt1, tt2, ttv, hist,
                          mr, mc, ms, cnt, stats, budget, flags, wts)
            _flip(rows, cols, hs, zob, vert, r, c)
            if res == ABORT:
                return ABORT
            if res == LOSS:
                result = WIN
                if flags & HISTORY:
                    hist[pl, r, c] += 1 + i
                break
    if use_tt:
        _tt_put(tt1, tt2, ttv, k1, k2, result, stats[0] - start + 1)
    return result


def default_tt_bits(cells: int) -> int:
    """Table size that grows with the board, up to 2**26 entries (about 1.1 GB)."""
    return max(12, min(26, cells // 2))


def zobrist_tables(h: int, w: int, seed: int = 20240601) -> np.ndarray:
    rng = np.random.default_rng(seed)
    base = rng.integers(0, 2 ** 63 - 1, size=(2, h, w), dtype=np.int64)
    zob = np.empty((2, 4, h, w), np.int64)
    zob[:, 0] = base
    zob[:, 1] = base[:, :, ::-1]
    zob[:, 2] = base[:, ::-1, :]
    zob[:, 3] = base[:, ::-1, ::-1]
    return zob


class BoardSearch:
    """Reusable compiled searcher for one board shape.

    The transposition table persists across calls on the same shape, so
    the two first-player questions share work.
    """

    def __init__(self, h: int, w: int, tt_bits: int | None = None, flags: int = DEFAULT_FLAGS):
        if not (1 <= h <= MAX_SIDE and 1 <= w <= MAX_SIDE):
            raise ValueError(f"kernel boards are at most {MAX_SIDE} on a side")
        if tt_bits is None:
            tt_bits = default_tt_bits(h * w)
        self.h = h
        self.w = w
        self.flags = flags
        self.zob = zobrist_tables(h, w)
        self.tt1 = np.zeros(1 << tt_bits, np.int64)
        self.tt2 = np.zeros(1 << tt_bits, np.int64)
        self.ttv = np.zeros(1 << tt_bits, np.int8)
        self.hist = np.zeros((2, h, w), np.int64)
        depth = h * w // 2 + 2
        self.mr = np.zeros((depth, h * w), np.int64)
        self.mc = np.zeros((depth, h * w), np.int64)
        self.ms = np.zeros((depth, h * w), np.int64)
        self.cnt = np.zeros((depth + 1, 6), np.int64)
        self.wts = np.array([4, 1, 1], np.int64)
        self.stats = np.zeros(2, np.int64)

    @property
    def nodes(self) -> int:
        return int(self.stats[0])

    def first_player_wins(self, rows, vertical: bool, budget: int) -> int:
        """WIN or LOSS for the player to move, or ABORT when the budget runs out."""
        h, w = self.h, self.w
        rows = np.array([int(x) & ((1 << w) - 1) for x in rows], dtype=np.int64)
        if len(rows) != h:
            raise ValueError("row count does not match the board height")
        cols = np.zeros(w, np.int64)
        hs = np.zeros((2, 4), np.int64)
        for r in range(h):
            for c in range(w):
                if (int(rows[r]) >> c) & 1:
                    cols[c] |= 1 << r
                else:
                    hs ^= self.zob[:, :, r, c]
        self.stats[:] = 0
        counts(rows, cols, h, w, self.cnt[0], self.flags)
        verdict = _static(self.cnt[0], vertical)
        if verdict:
            return WIN if verdict > 0 else LOSS
        return int(_search(rows, cols, h, w, vertical, 0, self.zob, hs,
                           self.tt1, self.tt2, self.ttv, self.hist,
                           self.mr, self.mc, self.ms, self.cnt,
                           self.stats, budget, self.flags, self.wts))
