# cython: language_level=3, boundscheck=True, wraparound=False, cdivision=True
"""Compiled answer-set search kernel.

Same algorithm and results as ``_search.py``; see that module for the
description.  Only the hot loop (propagation, decisions, bounds and the Horn
minimality check) is compiled; the rare disjunctive minimality check falls
back to the Python implementation.
"""

from array import array

from . import _search

STATUS_OK = 0
STATUS_CAP = 1


cdef inline int[::1] _ints(object xs):
    if len(xs) == 0:
        return array("i", [0])
    return array("i", xs)


cdef class _Kernel:
    cdef int n, n_rules, n_weak, n_levels
    cdef int[::1] h_off, h_at, p_off, p_at, n_off, n_at
    cdef int[::1] occ_off, occ_r, hocc_off, hocc_r
    cdef int[::1] wp_off, wp_at, wn_off, wn_at, w_weight, w_level
    cdef int[::1] val, trail, queue, inq, lb
    cdef int trail_len, q_head, q_len, q_cap

    def __init__(self, prob):
        self.n = prob.n
        self.n_rules = len(prob.h_off) - 1
        self.n_weak = len(prob.w_weight)
        self.n_levels = prob.n_levels
        self.h_off = _ints(prob.h_off)
        self.h_at = _ints(prob.h_at)
        self.p_off = _ints(prob.p_off)
        self.p_at = _ints(prob.p_at)
        self.n_off = _ints(prob.n_off)
        self.n_at = _ints(prob.n_at)
        self.occ_off = _ints(prob.occ_off)
        self.occ_r = _ints(prob.occ_r)
        self.hocc_off = _ints(prob.hocc_off)
        self.hocc_r = _ints(prob.hocc_r)
        self.wp_off = _ints(prob.wp_off)
        self.wp_at = _ints(prob.wp_at)
        self.wn_off = _ints(prob.wn_off)
        self.wn_at = _ints(prob.wn_at)
        self.w_weight = _ints(prob.w_weight)
        self.w_level = _ints(prob.w_level)
        self.val = array("i", [-1] * (self.n + 1))
        self.trail = array("i", [0] * (self.n + 1))
        self.queue = array("i", [0] * (self.n_rules + 1))
        self.inq = array("i", [0] * (self.n_rules + 1))
        self.lb = array("i", [0] * (self.n_levels + 1))
        self.trail_len = 0
        self.q_head = 0
        self.q_len = 0
        self.q_cap = self.n_rules + 1

    cdef inline void assign(self, int a, int v):
        cdef int k, r
        self.val[a] = v
        self.trail[self.trail_len] = a
        self.trail_len += 1
        for k in range(self.occ_off[a], self.occ_off[a + 1]):
            r = self.occ_r[k]
            if not self.inq[r]:
                self.inq[r] = 1
                self.queue[(self.q_head + self.q_len) % self.q_cap] = r
                self.q_len += 1

    cdef inline bint set_value(self, int a, int v):
        cdef int cur = self.val[a]
        if cur == -1:
            self.assign(a, v)
            return True
        return cur == v

    cdef inline bint live(self, int r, int h):
        cdef int k, o
        for k in range(self.p_off[r], self.p_off[r + 1]):
            if self.val[self.p_at[k]] == 0:
                return False
        for k in range(self.n_off[r], self.n_off[r + 1]):
            if self.val[self.n_at[k]] == 1:
                return False
        for k in range(self.h_off[r], self.h_off[r + 1]):
            o = self.h_at[k]
            if o != h and self.val[o] == 1:
                return False
        return True

    cdef bint support(self, int h):
        cdef int count = 0, last = -1, k, r, o
        for k in range(self.hocc_off[h], self.hocc_off[h + 1]):
            r = self.hocc_r[k]
            if self.live(r, h):
                count += 1
                last = r
                if count > 1:
                    return True
        if count == 0:
            return self.set_value(h, 0)
        if self.val[h] == 1:
            for k in range(self.p_off[last], self.p_off[last + 1]):
                if not self.set_value(self.p_at[k], 1):
                    return False
            for k in range(self.n_off[last], self.n_off[last + 1]):
                if not self.set_value(self.n_at[k], 0):
                    return False
            for k in range(self.h_off[last], self.h_off[last + 1]):
                o = self.h_at[k]
                if o != h and not self.set_value(o, 0):
                    return False
        return True

    cdef bint check(self, int r):
        cdef bint body_false = False, head_true = False
        cdef int open_body = 0, open_lit = -1, open_val = 0
        cdef int open_head = 0, head_lit = -1
        cdef int k, v, h
        for k in range(self.p_off[r], self.p_off[r + 1]):
            v = self.val[self.p_at[k]]
            if v == 0:
                body_false = True
                break
            if v == -1:
                open_body += 1
                open_lit = self.p_at[k]
                open_val = 0
        if not body_false:
            for k in range(self.n_off[r], self.n_off[r + 1]):
                v = self.val[self.n_at[k]]
                if v == 1:
                    body_false = True
                    break
                if v == -1:
                    open_body += 1
                    open_lit = self.n_at[k]
                    open_val = 1
        if not body_false:
            for k in range(self.h_off[r], self.h_off[r + 1]):
                v = self.val[self.h_at[k]]
                if v == 1:
                    head_true = True
                    break
                if v == -1:
                    open_head += 1
                    head_lit = self.h_at[k]
            if not head_true:
                if open_body == 0:
                    if open_head == 0:
                        return False
                    if open_head == 1:
                        self.assign(head_lit, 1)
                elif open_body == 1 and open_head == 0:
                    self.assign(open_lit, open_val)
        for k in range(self.h_off[r], self.h_off[r + 1]):
            h = self.h_at[k]
            if self.val[h] != 0 and not self.support(h):
                return False
        return True

    cdef bint propagate(self):
        # The queue is a ring buffer: a rule is queued at most once at a time.
        cdef int r
        cdef bint ok = True
        while self.q_len > 0:
            r = self.queue[self.q_head]
            self.q_head = (self.q_head + 1) % self.q_cap
            self.q_len -= 1
            self.inq[r] = 0
            if not self.check(r):
                ok = False
                break
        while self.q_len > 0:
            self.inq[self.queue[self.q_head]] = 0
            self.q_head = (self.q_head + 1) % self.q_cap
            self.q_len -= 1
        return ok

    cdef void undo(self, int to):
        while self.trail_len > to:
            self.trail_len -= 1
            self.val[self.trail[self.trail_len]] = -1

    cdef void lower_bound(self):
        cdef int w, k
        cdef bint ok
        for k in range(self.n_levels):
            self.lb[k] = 0
        for w in range(self.n_weak):
            ok = True
            for k in range(self.wp_off[w], self.wp_off[w + 1]):
                if self.val[self.wp_at[k]] != 1:
                    ok = False
                    break
            if ok:
                for k in range(self.wn_off[w], self.wn_off[w + 1]):
                    if self.val[self.wn_at[k]] != 0:
                        ok = False
                        break
            if ok:
                self.lb[self.w_level[w]] += self.w_weight[w]

    cdef int compare_lb(self, list best):
        """-1, 0 or 1 comparing the current lower bound with ``best``."""
        cdef int k, b
        for k in range(self.n_levels):
            b = best[k]
            if self.lb[k] < b:
                return -1
            if self.lb[k] > b:
                return 1
        return 0

    cdef bint horn_minimal(self, list active_bodies, list active_heads, int n_true):
        cdef int i, a
        cdef list missing = []
        cdef dict watch = {}
        cdef list queue = []
        cdef set derived = set()
        for i in range(len(active_bodies)):
            body = active_bodies[i]
            missing.append(len(body))
            for a in body:
                watch.setdefault(a, []).append(i)
            if not body and active_heads[i] >= 0:
                queue.append(active_heads[i])
        while queue:
            a = queue.pop()
            if a in derived:
                continue
            derived.add(a)
            for i in watch.get(a, ()):
                missing[i] -= 1
                if missing[i] == 0 and active_heads[i] >= 0:
                    queue.append(active_heads[i])
        return len(derived) == n_true

    cdef bint is_minimal(self, prob):
        cdef int r, k, nh, hd, n_true = 0
        cdef bint skip, horn = True
        cdef list bodies = [], heads = []
        for k in range(self.n):
            if self.val[k] == 1:
                n_true += 1
        for r in range(self.n_rules):
            skip = False
            for k in range(self.p_off[r], self.p_off[r + 1]):
                if self.val[self.p_at[k]] != 1:
                    skip = True
                    break
            if skip:
                continue
            for k in range(self.n_off[r], self.n_off[r + 1]):
                if self.val[self.n_at[k]] == 1:
                    skip = True
                    break
            if skip:
                continue
            nh = 0
            hd = -1
            for k in range(self.h_off[r], self.h_off[r + 1]):
                if self.val[self.h_at[k]] == 1:
                    nh += 1
                    hd = self.h_at[k]
            if nh > 1:
                horn = False
                break
            bodies.append([self.p_at[k] for k in range(self.p_off[r], self.p_off[r + 1])])
            heads.append(hd)
        if horn:
            return self.horn_minimal(bodies, heads, n_true)
        return _search.is_minimal(prob, [self.val[k] for k in range(self.n)])

    def run(self, prob):
        cdef int a, k, r, nxt, tl, v, cmp
        cdef long nodes = 0
        cdef long cap = prob.cap
        cdef int limit = prob.limit
        cdef bint optimal = prob.optimal
        cdef bint ok, flipped, found
        cdef list order = list(prob.order)
        cdef list pref = list(prob.pref)
        cdef list models = [], costs = []
        cdef list best = None
        cdef list decisions = []
        for a in range(self.n):
            if self.hocc_off[a] == self.hocc_off[a + 1]:
                self.assign(a, 0)
        for r in range(self.n_rules):
            if not self.inq[r]:
                self.inq[r] = 1
                self.queue[(self.q_head + self.q_len) % self.q_cap] = r
                self.q_len += 1
        ok = self.propagate()
        while True:
            if not ok:
                found = False
                while decisions:
                    tl, a, v, flipped = decisions.pop()
                    self.undo(tl)
                    if not flipped:
                        decisions.append((tl, a, 1 - v, True))
                        self.assign(a, 1 - v)
                        if self.propagate():
                            found = True
                            break
                if not found:
                    break
                ok = True
            if optimal and best is not None:
                self.lower_bound()
                if self.compare_lb(best) > 0:
                    ok = False
                    continue
            nxt = -1
            for a in order:
                if self.val[a] == -1:
                    nxt = a
                    break
            if nxt == -1:
                if self.is_minimal(prob):
                    self.lower_bound()
                    c = [self.lb[k] for k in range(self.n_levels)]
                    model = [k for k in range(self.n) if self.val[k] == 1]
                    if not optimal:
                        models.append(model)
                        costs.append(c)
                        if limit and len(models) >= limit:
                            break
                    elif best is None or c < best:
                        best = c
                        models = [model]
                        costs = [c]
                    elif c == best:
                        models.append(model)
                        costs.append(c)
                ok = False
                continue
            nodes += 1
            if nodes > cap:
                return STATUS_CAP, models, costs, nodes
            v = pref[nxt]
            decisions.append((self.trail_len, nxt, v, False))
            self.assign(nxt, v)
            ok = self.propagate()
        return STATUS_OK, models, costs, nodes


def search(prob):
    """Compiled counterpart of :func:`deontasp.asp._search.search`."""
    return _Kernel(prob).run(prob)
