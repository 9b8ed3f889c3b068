"""Hot inner loops: stabilizer-chain sifting and Todd-Coxeter enumeration.

Every kernel exists twice: a loop-based version compiled with ``numba.njit``
and a fallback that uses vectorised numpy (sifting) or plain Python
(coset enumeration).  Set ``HYPERTOPE_NUMBA=0`` in the environment to force
the fallback; it is also used automatically when numba cannot be imported.

Permutations are int32 rows of images.  Products are applied left to right,
so ``p * q`` sends ``x`` to ``q[p[x]]``.
"""
import os
import types

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("HYPERTOPE_NUMBA", "1").strip().lower() not in (
    "0", "false", "no", "off")

# Status codes returned by the coset enumerator.
TC_OK = 0
TC_OVERFLOW = 1


# ---------------------------------------------------------------------------
# sifting
# ---------------------------------------------------------------------------

def _sift_first_failure_loop(elems, base, pos, tinv):
    n, d = elems.shape
    nlev = base.shape[0]
    g = np.empty(d, np.int32)
    h = np.empty(d, np.int32)
    for i in range(n):
        for x in range(d):
            g[x] = elems[i, x]
        level = nlev
        for lev in range(nlev):
            r = pos[lev, g[base[lev]]]
            if r < 0:
                level = lev
                break
            for x in range(d):
                h[x] = tinv[r, g[x]]
            for x in range(d):
                g[x] = h[x]
        if level < nlev:
            return i, level, g.copy()
        for x in range(d):
            if g[x] != x:
                return i, nlev, g.copy()
    return -1, -1, g.copy()


def _sift_mask_loop(elems, base, pos, tinv):
    n, d = elems.shape
    nlev = base.shape[0]
    out = np.zeros(n, np.bool_)
    g = np.empty(d, np.int32)
    h = np.empty(d, np.int32)
    for i in range(n):
        for x in range(d):
            g[x] = elems[i, x]
        ok = True
        for lev in range(nlev):
            r = pos[lev, g[base[lev]]]
            if r < 0:
                ok = False
                break
            for x in range(d):
                h[x] = tinv[r, g[x]]
            for x in range(d):
                g[x] = h[x]
        if ok:
            for x in range(d):
                if g[x] != x:
                    ok = False
                    break
        out[i] = ok
    return out


def _sift_rows_numpy(elems, base, pos, tinv):
    """Sift every row; returns (residues, level at which each row dropped out)."""
    g = np.array(elems, dtype=np.int32, copy=True)
    n, d = g.shape
    nlev = base.shape[0]
    fail = np.full(n, nlev, dtype=np.int64)
    alive = np.arange(n)
    for lev in range(nlev):
        if alive.size == 0:
            break
        r = pos[lev, g[alive, base[lev]]]
        bad = r < 0
        if bad.any():
            fail[alive[bad]] = lev
            alive = alive[~bad]
            r = r[~bad]
        g[alive] = np.take_along_axis(tinv[r], g[alive], axis=1)
    return g, fail


_CHUNK = 512


def _sift_first_failure_numpy(elems, base, pos, tinv):
    n, d = elems.shape
    nlev = base.shape[0]
    ident = np.arange(d, dtype=np.int32)
    for start in range(0, n, _CHUNK):
        g, fail = _sift_rows_numpy(elems[start:start + _CHUNK], base, pos, tinv)
        bad = (fail < nlev) | (g != ident).any(axis=1)
        if bad.any():
            k = int(np.argmax(bad))
            return start + k, int(fail[k]), g[k].copy()
    return -1, -1, ident


def _sift_mask_numpy(elems, base, pos, tinv):
    n, d = elems.shape
    nlev = base.shape[0]
    ident = np.arange(d, dtype=np.int32)
    out = np.zeros(n, dtype=bool)
    for start in range(0, n, _CHUNK):
        g, fail = _sift_rows_numpy(elems[start:start + _CHUNK], base, pos, tinv)
        out[start:start + len(g)] = (fail == nlev) & (g == ident).all(axis=1)
    return out


# ---------------------------------------------------------------------------
# Todd-Coxeter (HLT strategy, every generator an involution)
# ---------------------------------------------------------------------------

def _tc_rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        nxt = p[c]
        p[c] = r
        c = nxt
    return r


def _tc_merge(p, queue, qlen, a, b):
    a = _tc_rep(p, a)
    b = _tc_rep(p, b)
    if a == b:
        return qlen
    if a > b:
        a, b = b, a
    p[b] = a
    queue[qlen] = b
    return qlen + 1


def _tc_coincidence(table, p, queue, a, b):
    ngens = table.shape[1]
    qlen = _tc_merge(p, queue, 0, a, b)
    i = 0
    while i < qlen:
        e = queue[i]
        i += 1
        for x in range(ngens):
            f = table[e, x]
            if f < 0:
                continue
            if table[f, x] == e:
                table[f, x] = -1
            mu = _tc_rep(p, e)
            nu = _tc_rep(p, f)
            if table[mu, x] >= 0:
                qlen = _tc_merge(p, queue, qlen, nu, table[mu, x])
            elif table[nu, x] >= 0:
                qlen = _tc_merge(p, queue, qlen, mu, table[nu, x])
            else:
                table[mu, x] = nu
                table[nu, x] = mu


def _tc_define(table, p, state, c, x):
    n = state[0]
    if n >= table.shape[0]:
        return False
    state[0] = n + 1
    p[n] = n
    table[n, :] = -1
    table[c, x] = n
    table[n, x] = c
    return True


def _tc_scan_and_fill(table, p, queue, state, c, word):
    """Returns False on overflow."""
    f = c
    b = c
    i = 0
    j = word.shape[0] - 1
    while True:
        while i <= j and table[f, word[i]] >= 0:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                _tc_coincidence(table, p, queue, f, b)
            return True
        while j >= i and table[b, word[j]] >= 0:
            b = table[b, word[j]]
            j -= 1
        if j < i:
            _tc_coincidence(table, p, queue, f, b)
            return True
        if i == j:
            x = word[i]
            table[f, x] = b
            table[b, x] = f
            return True
        if not _tc_define(table, p, state, f, word[i]):
            return False


def _todd_coxeter_loop(ngens, rel, rel_off, sub, sub_off, max_cosets):
    table = np.full((max_cosets, ngens), -1, np.int32)
    p = np.zeros(max_cosets, np.int64)
    queue = np.zeros(max_cosets, np.int64)
    state = np.ones(1, np.int64)
    for k in range(sub_off.shape[0] - 1):
        if not _tc_scan_and_fill(table, p, queue, state, 0, sub[sub_off[k]:sub_off[k + 1]]):
            return table[:0], TC_OVERFLOW, state[0]
    c = 0
    while c < state[0]:
        if p[c] == c:
            for k in range(rel_off.shape[0] - 1):
                if not _tc_scan_and_fill(table, p, queue, state, c, rel[rel_off[k]:rel_off[k + 1]]):
                    return table[:0], TC_OVERFLOW, state[0]
                if p[c] != c:
                    break
            if p[c] == c:
                for x in range(ngens):
                    if table[c, x] < 0:
                        if not _tc_define(table, p, state, c, x):
                            return table[:0], TC_OVERFLOW, state[0]
        c += 1
    n = state[0]
    newnum = np.full(n, -1, np.int64)
    live = 0
    for c in range(n):
        if p[c] == c:
            newnum[c] = live
            live += 1
    out = np.empty((live, ngens), np.int32)
    for c in range(n):
        if p[c] == c:
            for x in range(ngens):
                out[newnum[c], x] = newnum[_tc_rep(p, table[c, x])]
    return out, TC_OK, n


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _jit_family(*fns):
    """Compile ``fns`` against a private namespace so helper calls resolve to
    the compiled helpers while the module-level originals stay pure Python."""
    ns = dict(globals())
    for fn in fns:
        clone = types.FunctionType(fn.__code__, ns, fn.__name__, fn.__defaults__, fn.__closure__)
        clone.__qualname__ = fn.__qualname__
        clone.__module__ = fn.__module__
        ns[fn.__name__] = numba.njit(cache=True, nogil=True)(clone)
    return ns


sift_first_failure_py = _sift_first_failure_numpy
sift_mask_py = _sift_mask_numpy
todd_coxeter_py = _todd_coxeter_loop

if numba is not None:
    _ns = _jit_family(_tc_rep, _tc_merge, _tc_coincidence, _tc_define, _tc_scan_and_fill,
                      _todd_coxeter_loop, _sift_first_failure_loop, _sift_mask_loop)
    sift_first_failure_jit = _ns["_sift_first_failure_loop"]
    sift_mask_jit = _ns["_sift_mask_loop"]
    todd_coxeter_jit = _ns["_todd_coxeter_loop"]
    del _ns

if USE_NUMBA:
    sift_first_failure = sift_first_failure_jit
    sift_mask = sift_mask_jit
    todd_coxeter_kernel = todd_coxeter_jit
else:
    sift_first_failure = sift_first_failure_py
    sift_mask = sift_mask_py
    todd_coxeter_kernel = todd_coxeter_py
