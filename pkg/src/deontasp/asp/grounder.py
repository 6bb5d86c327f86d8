"""Bottom-up grounder.

Ground instances are produced by joining positive body literals against the
set of *possibly derivable* literals, computed stratum by stratum over the
predicate dependency graph.  Default negation is ignored while computing that
over-approximation, so every instance that could fire in some answer set is
kept, and negated literals that can never be derived are dropped afterwards.

Builtins are evaluated as soon as their variables are bound.  An equality
whose one side is an unbound variable binds it (``E=C-A``).  A variable that
occurs only in builtins ranges over the integers ``0..maxint``.  Arithmetic
leaving that range, or applied to a non-integer, makes the instance false.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable

from .. import config
from ..errors import GroundingExplosion, UnsafeRule
from .syntax import (
    Arith,
    Comparison,
    Fn,
    Literal,
    Naf,
    Program,
    Rule,
    Var,
    WeakConstraint,
)

log = logging.getLogger(__name__)

Sig = tuple  # (predicate, arity, negated)


class _Undefined(Exception):
    """Raised while evaluating a builtin that has no integer value."""


# -- term evaluation ---------------------------------------------------------


def _order_key(v):
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    return (2, v.name, len(v.args), tuple(_order_key(a) for a in v.args))


def _eval(t, s: dict, maxint: int):
    if isinstance(t, Var):
        return s[t.name]
    if isinstance(t, (str, int)):
        return t
    if isinstance(t, Arith):
        left = _eval(t.left, s, maxint)
        right = _eval(t.right, s, maxint)
        if not (isinstance(left, int) and isinstance(right, int)):
            raise _Undefined
        value = left + right if t.op == "+" else left - right
        if value < 0 or value > maxint:
            raise _Undefined
        return value
    if isinstance(t, Fn):
        return Fn(t.name, tuple(_eval(a, s, maxint) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def compare(op: str, left, right) -> bool:
    """Evaluate a comparison between ground values (int < str < compound)."""
    if op == "=":
        return left == right and type(left) is type(right)
    if op == "!=":
        return not (left == right and type(left) is type(right))
    lk, rk = _order_key(left), _order_key(right)
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    if op == ">=":
        return lk >= rk
    raise ValueError(f"unknown comparison {op}")


def _match(pat, val, s: dict, undo: list) -> bool:
    if isinstance(pat, Var):
        name = pat.name
        if name in s:
            cur = s[name]
            return cur == val and type(cur) is type(val)
        s[name] = val
        undo.append(name)
        return True
    if isinstance(pat, Fn):
        if not isinstance(val, Fn) or val.name != pat.name or len(val.args) != len(pat.args):
            return False
        return all(_match(p, v, s, undo) for p, v in zip(pat.args, val.args))
    return pat == val and type(pat) is type(val)


def _term_vars(t) -> set[str]:
    from .syntax import term_vars

    return term_vars(t, set())


# -- join plans --------------------------------------------------------------


def _plan(body: tuple) -> tuple:
    """Order positive literals and builtins into executable steps.

    Steps: ``("lit", sig, args, key_positions)``, ``("test", cmp)``,
    ``("assign", name, expr)`` and ``("range", name)``.
    """
    lits = [b for b in body if isinstance(b, Literal)]
    cmps = [b for b in body if isinstance(b, Comparison)]
    bound: set[str] = set()
    steps: list = []

    def flush_builtins() -> None:
        progress = True
        while progress:
            progress = False
            for c in list(cmps):
                cv = c.vars()
                if cv <= bound:
                    steps.append(("test", c))
                    cmps.remove(c)
                    progress = True
                elif c.op == "=":
                    for var_side, expr in ((c.left, c.right), (c.right, c.left)):
                        if (
                            isinstance(var_side, Var)
                            and var_side.name not in bound
                            and _term_vars(expr) <= bound
                        ):
                            steps.append(("assign", var_side.name, expr))
                            bound.add(var_side.name)
                            cmps.remove(c)
                            progress = True
                            break

    flush_builtins()
    while lits or cmps:
        if lits:
            best = max(
                range(len(lits)),
                key=lambda i: (
                    lits[i].vars() <= bound,
                    len(lits[i].vars() & bound),
                    -len(lits[i].vars()),
                    -i,
                ),
            )
            lit = lits.pop(best)
            keys = tuple(i for i, a in enumerate(lit.args) if _term_vars(a) <= bound)
            steps.append(("lit", lit.signature, lit.args, keys))
            bound |= lit.vars()
        else:
            free = sorted(set().union(*(c.vars() for c in cmps)) - bound)
            steps.append(("range", free[0]))
            bound.add(free[0])
        flush_builtins()
    return tuple(steps)


_PLAN_CACHE: dict[int, tuple[object, tuple]] = {}
_SAFE: dict[int, object] = {}  # statements already checked, keyed by identity


def _cached_plan(stmt) -> tuple:
    hit = _PLAN_CACHE.get(id(stmt))
    if hit is not None and hit[0] is stmt:
        return hit[1]
    plan = _plan(stmt.body)
    if len(_PLAN_CACHE) > 4096:
        _PLAN_CACHE.clear()
    _PLAN_CACHE[id(stmt)] = (stmt, plan)
    return plan


# -- derivable-literal store ---------------------------------------------------


class _Store:
    """Possibly-derivable ground literals grouped by signature, with lazy indexes."""

    def __init__(self) -> None:
        self.rows: dict[Sig, dict[tuple, None]] = {}
        self.version: dict[Sig, int] = {}
        self.indexes: dict[tuple, tuple[int, dict]] = {}

    def add(self, lit: Literal) -> bool:
        sig = lit.signature
        rows = self.rows.setdefault(sig, {})
        if lit.args in rows:
            return False
        rows[lit.args] = None
        self.version[sig] = self.version.get(sig, 0) + 1
        return True

    def __contains__(self, lit: Literal) -> bool:
        rows = self.rows.get(lit.signature)
        return rows is not None and lit.args in rows

    def lookup(self, sig: Sig, keys: tuple, key_values: tuple):
        rows = self.rows.get(sig)
        if not rows:
            return ()
        if not keys:
            return list(rows)
        if len(keys) == sig[1]:
            return (key_values,) if key_values in rows else ()
        ver = self.version[sig]
        cached = self.indexes.get((sig, keys))
        if cached is None or cached[0] != ver:
            index: dict[tuple, list] = {}
            for args in rows:
                index.setdefault(tuple(args[k] for k in keys), []).append(args)
            cached = (ver, index)
            self.indexes[(sig, keys)] = cached
        return cached[1].get(key_values, ())


# -- the grounder ----------------------------------------------------------------


class Grounder:
    def __init__(self, program: Program, maxint: int | None = None, cap: int | None = None):
        self.program = program
        if maxint is None:
            maxint = program.maxint if program.maxint is not None else config.maxint()
        self.maxint = maxint
        self.cap = config.ground_cap() if cap is None else cap
        self.work = 0
        self.store = _Store()

    def _tick(self, n: int = 1) -> None:
        self.work += n
        if self.work > self.cap:
            raise GroundingExplosion(
                f"more than {self.cap} candidate substitutions; raise DEONTASP_GROUND_CAP "
                "if the program is expected to be this large"
            )

    def _substitutions(self, stmt, emit: Callable[[dict], None]) -> None:
        steps = _cached_plan(stmt)
        store = self.store
        maxint = self.maxint
        s: dict = {}
        n = len(steps)

        def run(i: int) -> None:
            if i == n:
                emit(s)
                return
            step = steps[i]
            kind = step[0]
            if kind == "lit":
                _, sig, pattern, keys = step
                try:
                    key_values = tuple(_eval(pattern[k], s, maxint) for k in keys)
                except _Undefined:
                    return
                candidates = store.lookup(sig, keys, key_values)
                if not candidates:
                    return
                self._tick(len(candidates))
                free = [k for k in range(len(pattern)) if k not in keys]
                for args in candidates:
                    undo: list = []
                    if all(_match(pattern[k], args[k], s, undo) for k in free):
                        run(i + 1)
                    for name in undo:
                        del s[name]
            elif kind == "test":
                cmp = step[1]
                try:
                    ok = compare(cmp.op, _eval(cmp.left, s, maxint), _eval(cmp.right, s, maxint))
                except _Undefined:
                    return
                if ok:
                    run(i + 1)
            elif kind == "assign":
                _, name, expr = step
                try:
                    s[name] = _eval(expr, s, maxint)
                except _Undefined:
                    return
                run(i + 1)
                del s[name]
            else:
                name = step[1]
                self._tick(maxint + 1)
                for v in range(maxint + 1):
                    s[name] = v
                    run(i + 1)
                del s[name]

        run(0)

    def _instances(self, stmt, sink: dict) -> None:
        maxint = self.maxint

        def inst(lit: Literal, s: dict) -> Literal:
            if not lit.args:
                return lit
            return Literal(lit.predicate, tuple(_eval(a, s, maxint) for a in lit.args), lit.negated)

        if isinstance(stmt, Rule):

            def emit(s: dict) -> None:
                head = tuple(inst(h, s) for h in stmt.head)
                body = tuple(
                    inst(b, s) if isinstance(b, Literal) else Naf(inst(b.literal, s))
                    for b in stmt.body
                    if not isinstance(b, Comparison)
                )
                sink[Rule(head, body)] = None

        else:

            def emit(s: dict) -> None:
                body = tuple(
                    inst(b, s) if isinstance(b, Literal) else Naf(inst(b.literal, s))
                    for b in stmt.body
                    if not isinstance(b, Comparison)
                )
                sink[WeakConstraint(body, stmt.weight, stmt.level)] = None

        self._substitutions(stmt, emit)

    def _check_safety(self) -> None:
        for stmt in self.program.statements():
            if _SAFE.get(id(stmt)) is stmt:
                continue
            bound: set[str] = set()
            for b in stmt.body:
                if isinstance(b, (Literal, Comparison)):
                    bound |= b.vars()
            unsafe = stmt.vars() - bound
            if unsafe:
                raise UnsafeRule(stmt, sorted(unsafe)[0])
            if len(_SAFE) > 8192:
                _SAFE.clear()
            _SAFE[id(stmt)] = stmt

    def ground(self) -> Program:
        self._check_safety()
        proper = [r for r in self.program.rules if r.head]
        constraints = [r for r in self.program.rules if not r.head]
        rule_out: dict[Rule, None] = {}
        for component, recursive in _strata(proper):
            while True:
                before = sum(len(v) for v in self.store.rows.values())
                produced: dict[Rule, None] = {}
                for r in component:
                    self._instances(r, produced)
                for g in produced:
                    rule_out[g] = None
                    for h in g.head:
                        self.store.add(h)
                after = sum(len(v) for v in self.store.rows.values())
                if not recursive or after == before:
                    break
        for c in constraints:
            self._instances(c, rule_out)
        weak_out: dict[WeakConstraint, None] = {}
        for w in self.program.weak:
            self._instances(w, weak_out)
        rules = tuple(self._drop_underivable(r) for r in rule_out)
        weak = tuple(dict.fromkeys(self._drop_underivable(w) for w in weak_out))
        rules = tuple(dict.fromkeys(rules))
        log.debug("grounded %d rules, %d weak constraints", len(rules), len(weak))
        return Program(rules, weak, self.program.maxint)

    def _drop_underivable(self, stmt):
        body = tuple(b for b in stmt.body if not (isinstance(b, Naf) and b.literal not in self.store))
        if len(body) == len(stmt.body):
            return stmt
        if isinstance(stmt, Rule):
            return Rule(stmt.head, body)
        return WeakConstraint(body, stmt.weight, stmt.level)


def _strata(rules: list[Rule]) -> Iterable[tuple[list[Rule], bool]]:
    """Group rules into strongly connected components in dependency order."""
    graph: dict[Sig, set[Sig]] = {}
    for r in rules:
        heads = [h.signature for h in r.head]
        for h in heads:
            deps = graph.setdefault(h, set())
            deps.update(b.signature for b in r.pos)
            deps.update(heads)
        for b in r.pos:
            graph.setdefault(b.signature, set())
    comp_of = _tarjan(graph)
    by_comp: dict[int, list[Rule]] = {}
    for r in rules:
        by_comp.setdefault(comp_of[r.head[0].signature], []).append(r)
    for cid in sorted(by_comp):
        members = by_comp[cid]
        recursive = any(comp_of[b.signature] == cid for r in members for b in r.pos)
        yield members, recursive


def _tarjan(graph: dict[Sig, set[Sig]]) -> dict[Sig, int]:
    """Map each node to its SCC id; ids are a topological order (dependencies first)."""
    index: dict[Sig, int] = {}
    low: dict[Sig, int] = {}
    on_stack: set[Sig] = set()
    stack: list[Sig] = []
    comp: dict[Sig, int] = {}
    counter = 0
    next_comp = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(sorted(graph[root], key=repr)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(sorted(graph[nxt], key=repr))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = next_comp
                    if w == node:
                        break
                next_comp += 1
    return comp


def ground(program: Program, maxint: int | None = None, cap: int | None = None) -> Program:
    """Return a variable-free program with the same answer sets.

    A program that is already ground and has no builtins is returned as is.
    """
    if program.is_ground() and not any(s.builtins for s in program.statements()):
        return program
    return Grounder(program, maxint, cap).ground()
