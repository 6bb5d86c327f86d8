"""Pure-Python answer-set search kernel.

The program arrives in flat, index-based form (see :class:`Problem` in
``solver.py``): atoms are ``0..n-1`` and every per-rule or per-atom list is
stored CSR style as an offset array plus a data array.  The compiled kernel
in ``_csearch.pyx`` implements the same algorithm on C arrays and must return
identical results.

Search is a DPLL loop with chronological backtracking.  Propagation combines
the rule clauses (``body -> head``) with support: a true atom needs a rule
whose body can still hold and whose other head atoms are not true.  Every
total assignment that survives is checked for minimality against the
positive part of the reduct before it is reported.  In optimisation mode a
lexicographic lower bound over weak constraints whose bodies are already true
prunes strictly worse branches, so all ties are kept.
"""

from __future__ import annotations

STATUS_OK = 0
STATUS_CAP = 1


def search(prob) -> tuple[int, list[list[int]], list[list[int]], int]:
    """Return ``(status, models, costs, nodes)``.

    ``models`` are sorted lists of true atoms; ``costs`` are per-level weight
    lists indexed like ``prob.w_level`` (index 0 is the most important level).
    """
    n = prob.n
    h_off, h_at = prob.h_off, prob.h_at
    p_off, p_at = prob.p_off, prob.p_at
    n_off, n_at = prob.n_off, prob.n_at
    occ_off, occ_r = prob.occ_off, prob.occ_r
    hocc_off, hocc_r = prob.hocc_off, prob.hocc_r
    wp_off, wp_at = prob.wp_off, prob.wp_at
    wn_off, wn_at = prob.wn_off, prob.wn_at
    w_weight, w_level = prob.w_weight, prob.w_level
    n_levels = prob.n_levels
    n_rules = len(h_off) - 1
    n_weak = len(w_weight)
    order, pref = prob.order, prob.pref
    optimal, limit, cap = prob.optimal, prob.limit, prob.cap

    val = [-1] * n
    trail: list[int] = []
    queue: list[int] = []
    inq = [False] * n_rules

    def assign(a: int, v: int) -> None:
        val[a] = v
        trail.append(a)
        for k in range(occ_off[a], occ_off[a + 1]):
            r = occ_r[k]
            if not inq[r]:
                inq[r] = True
                queue.append(r)

    def set_value(a: int, v: int) -> bool:
        cur = val[a]
        if cur == -1:
            assign(a, v)
            return True
        return cur == v

    def live(r: int, h: int) -> bool:
        for k in range(p_off[r], p_off[r + 1]):
            if val[p_at[k]] == 0:
                return False
        for k in range(n_off[r], n_off[r + 1]):
            if val[n_at[k]] == 1:
                return False
        for k in range(h_off[r], h_off[r + 1]):
            o = h_at[k]
            if o != h and val[o] == 1:
                return False
        return True

    def support(h: int) -> bool:
        count = 0
        last = -1
        for k in range(hocc_off[h], hocc_off[h + 1]):
            r = hocc_r[k]
            if live(r, h):
                count += 1
                last = r
                if count > 1:
                    return True
        if count == 0:
            return set_value(h, 0)
        if val[h] == 1:
            for k in range(p_off[last], p_off[last + 1]):
                if not set_value(p_at[k], 1):
                    return False
            for k in range(n_off[last], n_off[last + 1]):
                if not set_value(n_at[k], 0):
                    return False
            for k in range(h_off[last], h_off[last + 1]):
                o = h_at[k]
                if o != h and not set_value(o, 0):
                    return False
        return True

    def check(r: int) -> bool:
        body_false = False
        open_body = 0
        open_lit = -1
        open_val = 0
        for k in range(p_off[r], p_off[r + 1]):
            v = val[p_at[k]]
            if v == 0:
                body_false = True
                break
            if v == -1:
                open_body += 1
                open_lit = p_at[k]
                open_val = 0
        if not body_false:
            for k in range(n_off[r], n_off[r + 1]):
                v = val[n_at[k]]
                if v == 1:
                    body_false = True
                    break
                if v == -1:
                    open_body += 1
                    open_lit = n_at[k]
                    open_val = 1
        if not body_false:
            head_true = False
            open_head = 0
            head_lit = -1
            for k in range(h_off[r], h_off[r + 1]):
                v = val[h_at[k]]
                if v == 1:
                    head_true = True
                    break
                if v == -1:
                    open_head += 1
                    head_lit = h_at[k]
            if not head_true:
                if open_body == 0:
                    if open_head == 0:
                        return False
                    if open_head == 1:
                        assign(head_lit, 1)
                elif open_body == 1 and open_head == 0:
                    assign(open_lit, open_val)
        for k in range(h_off[r], h_off[r + 1]):
            h = h_at[k]
            if val[h] != 0 and not support(h):
                return False
        return True

    def propagate() -> bool:
        i = 0
        ok = True
        while i < len(queue):
            r = queue[i]
            i += 1
            inq[r] = False
            if not check(r):
                ok = False
                break
        for k in range(i, len(queue)):
            inq[queue[k]] = False
        queue.clear()
        return ok

    def undo(to: int) -> None:
        while len(trail) > to:
            val[trail.pop()] = -1

    def lower_bound() -> list[int]:
        lb = [0] * n_levels
        for w in range(n_weak):
            ok = True
            for k in range(wp_off[w], wp_off[w + 1]):
                if val[wp_at[k]] != 1:
                    ok = False
                    break
            if ok:
                for k in range(wn_off[w], wn_off[w + 1]):
                    if val[wn_at[k]] != 0:
                        ok = False
                        break
            if ok:
                lb[w_level[w]] += w_weight[w]
        return lb

    models: list[list[int]] = []
    costs: list[list[int]] = []
    best: list[int] | None = None
    decisions: list[tuple[int, int, int, bool]] = []
    nodes = 0

    def backtrack() -> bool:
        while decisions:
            tl, a, v, flipped = decisions.pop()
            undo(tl)
            if not flipped:
                decisions.append((tl, a, 1 - v, True))
                assign(a, 1 - v)
                if propagate():
                    return True
        return False

    for a in range(n):
        if hocc_off[a] == hocc_off[a + 1]:
            assign(a, 0)
    for r in range(n_rules):
        if not inq[r]:
            inq[r] = True
            queue.append(r)
    ok = propagate()

    while True:
        if not ok:
            if not backtrack():
                break
            ok = True
        if optimal and best is not None:
            if lower_bound() > best:
                ok = False
                continue
        nxt = -1
        for a in order:
            if val[a] == -1:
                nxt = a
                break
        if nxt == -1:
            if is_minimal(prob, val):
                c = lower_bound()
                model = [a for a in range(n) if val[a] == 1]
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
        decisions.append((len(trail), nxt, pref[nxt], False))
        assign(nxt, pref[nxt])
        ok = propagate()
    return STATUS_OK, models, costs, nodes


def is_minimal(prob, val) -> bool:
    """True iff no proper subset of the true atoms satisfies the reduct."""
    h_off, h_at = prob.h_off, prob.h_at
    p_off, p_at = prob.p_off, prob.p_at
    n_off, n_at = prob.n_off, prob.n_at
    n_rules = len(h_off) - 1
    active: list[tuple[list[int], list[int]]] = []
    horn = True
    for r in range(n_rules):
        if any(val[p_at[k]] != 1 for k in range(p_off[r], p_off[r + 1])):
            continue
        if any(val[n_at[k]] == 1 for k in range(n_off[r], n_off[r + 1])):
            continue
        heads = [h_at[k] for k in range(h_off[r], h_off[r + 1]) if val[h_at[k]] == 1]
        if len(heads) > 1:
            horn = False
        active.append(([p_at[k] for k in range(p_off[r], p_off[r + 1])], heads))
    true_atoms = [a for a in range(len(val)) if val[a] == 1]
    if horn:
        return len(_least_model(active)) == len(true_atoms)
    return not _smaller_model_exists(active, true_atoms)


def _least_model(active) -> set[int]:
    missing = []
    watch: dict[int, list[int]] = {}
    queue = []
    for i, (body, heads) in enumerate(active):
        missing.append(len(body))
        for a in body:
            watch.setdefault(a, []).append(i)
        if not body and heads:
            queue.append(heads[0])
    derived: set[int] = set()
    while queue:
        a = queue.pop()
        if a in derived:
            continue
        derived.add(a)
        for i in watch.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0 and active[i][1]:
                queue.append(active[i][1][0])
    return derived


def _smaller_model_exists(active, true_atoms: list[int]) -> bool:
    """SAT check: is there M strictly inside the true atoms satisfying every
    active clause ``body -> some head``?  Literals are ``+(a+1)`` / ``-(a+1)``."""
    clauses = [[-(a + 1) for a in body] + [h + 1 for h in heads] for body, heads in active]
    clauses.append([-(a + 1) for a in true_atoms])
    return _dpll(clauses, {})


def _dpll(clauses: list[list[int]], assignment: dict[int, bool]) -> bool:
    assignment = dict(assignment)
    while True:
        unit = None
        remaining = []
        for clause in clauses:
            satisfied = False
            open_lits = []
            for lit in clause:
                var = abs(lit)
                if var in assignment:
                    if assignment[var] == (lit > 0):
                        satisfied = True
                        break
                else:
                    open_lits.append(lit)
            if satisfied:
                continue
            if not open_lits:
                return False
            if len(open_lits) == 1 and unit is None:
                unit = open_lits[0]
            remaining.append(open_lits)
        if not remaining:
            return True
        if unit is None:
            break
        assignment[abs(unit)] = unit > 0
        clauses = remaining
    var = abs(remaining[0][0])
    for value in (False, True):
        trial = dict(assignment)
        trial[var] = value
        if _dpll(remaining, trial):
            return True
    return False
