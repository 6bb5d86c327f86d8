"""Answer sets and optimal answer sets of disjunctive programs.

The public entry points accept non-ground programs and ground them first.
Before search the ground program is simplified around its facts; the
residual program is handed to the search kernel in flat integer form.
"""

from __future__ import annotations

import logging
import os
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Sequence

from .. import config
from ..errors import BaseTooLarge, Inconsistent
from .grounder import ground
from .syntax import Literal, Naf, Program, Rule, WeakConstraint

log = logging.getLogger(__name__)


def _load_kernel():
    if os.environ.get("DEONTASP_PURE"):
        from . import _search

        return _search, "python"
    try:
        from . import _csearch  # type: ignore[attr-defined]

        return _csearch, "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _search

        return _search, "python"


_kernel, BACKEND = _load_kernel()


# -- cost vectors --------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class CostVector:
    """Violated weight per level.  Absent levels weigh 0.

    Ordering is lexicographic from the highest level down, so ``a < b`` means
    ``a`` is strictly better.
    """

    weights: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "CostVector":
        return cls(tuple(sorted((lvl, w) for lvl, w in d.items() if w)))

    def __getitem__(self, level: int) -> int:
        return dict(self.weights).get(level, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.weights)

    def _key(self, levels: Iterable[int]) -> tuple[int, ...]:
        d = dict(self.weights)
        return tuple(d.get(l, 0) for l in levels)

    def __lt__(self, other: "CostVector") -> bool:
        levels = sorted({l for l, _ in self.weights} | {l for l, _ in other.weights}, reverse=True)
        return self._key(levels) < other._key(levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CostVector):
            return NotImplemented
        return self.weights == other.weights

    def __hash__(self) -> int:
        return hash(self.weights)

    def __str__(self) -> str:
        if not self.weights:
            return "[]"
        return "[" + ", ".join(f"{w}@{l}" for l, w in sorted(self.weights, reverse=True)) + "]"


# -- definitions, implemented literally --------------------------------------


def _body_holds(interp: frozenset, stmt) -> bool:
    for b in stmt.body:
        if isinstance(b, Literal):
            if b not in interp:
                return False
        elif isinstance(b, Naf):
            if b.literal in interp:
                return False
        else:
            raise ValueError("satisfies() expects a ground rule without builtins")
    return True


def satisfies(interp: Iterable[Literal], rule: Rule) -> bool:
    """``S |= r``: if the body holds then some head literal is in ``S``."""
    interp = frozenset(interp)
    if not _body_holds(interp, rule):
        return True
    return any(h in interp for h in rule.head)


def is_consistent(interp: Iterable[Literal]) -> bool:
    interp = frozenset(interp)
    return not any(l.complement() in interp for l in interp if not l.negated)


def _ground_rules(program: Program) -> tuple[Rule, ...]:
    return ground(program).rules


def is_answer_set(interp: Iterable[Literal], program: Program) -> bool:
    """``S`` satisfies ``Pi(S) = {r | S |= B(r)}`` and no proper subset does."""
    s = frozenset(interp)
    if not is_consistent(s):
        return False
    rules = _ground_rules(program)
    pi = [r for r in rules if _body_holds(s, r)]
    if not all(any(h in s for h in r.head) for r in pi):
        return False
    return not _proper_subset_satisfies(s, pi)


def _proper_subset_satisfies(s: frozenset, rules: Sequence[Rule]) -> bool:
    atoms = sorted(s, key=str)
    index = {a: i for i, a in enumerate(atoms)}
    clauses = []
    for r in rules:
        if any(b not in index for b in r.pos):
            continue  # never fires inside a subset of S
        body_pos = [index[b] for b in r.pos]
        heads = [index[h] for h in r.head if h in index]
        # A subset keeps "not" literals false, so only the positive part can fail.
        clauses.append((body_pos, heads))
    from ._search import _smaller_model_exists

    return _smaller_model_exists(clauses, list(range(len(atoms))))


def is_answer_set_gl(interp: Iterable[Literal], program: Program) -> bool:
    """Textbook check: ``S`` is a minimal model of the Gelfond-Lifschitz reduct."""
    s = frozenset(interp)
    if not is_consistent(s):
        return False
    reduct = []
    for r in _ground_rules(program):
        if any(b in s for b in r.neg):
            continue
        reduct.append(Rule(r.head, tuple(r.pos)))
    if not all(satisfies(s, r) for r in reduct):
        return False
    return not _proper_subset_satisfies(s, reduct)


def cost(interp: Iterable[Literal], program: Program) -> CostVector:
    """Sum of weights of violated ground weak constraints, per level."""
    s = frozenset(interp)
    totals: dict[int, int] = {}
    for w in ground(program).weak:
        if _body_holds(s, w):
            totals[w.level] = totals.get(w.level, 0) + w.weight
    return CostVector.from_dict(totals)


# -- simplification -------------------------------------------------------------


@dataclass
class _Residual:
    facts: frozenset
    rules: list  # (heads, pos, neg) tuples of literals
    weak: list  # (pos, neg, weight, level)
    base_cost: dict = field(default_factory=dict)
    inconsistent: bool = False


def _simplify(program: Program) -> _Residual:
    rules = [(list(r.head), list(r.pos), list(r.neg)) for r in program.rules]
    facts: set[Literal] = set()
    for h, p, n in rules:
        if len(h) == 1 and not p and not n:
            facts.add(h[0])
    changed = True
    while changed:
        changed = False
        if any(f.complement() in facts for f in facts):
            return _Residual(frozenset(facts), [], [], {}, True)
        defined = set()
        for h, _, _ in rules:
            defined.update(h)
        out = []
        for h, p, n in rules:
            if len(h) == 1 and not p and not n:
                out.append((h, p, n))
                continue
            if any(x in facts for x in n):
                changed = True
                continue
            if any(x not in defined or x.complement() in facts for x in p):
                changed = True
                continue
            if any(x in facts for x in h):
                changed = True
                continue
            p2 = [x for x in p if x not in facts]
            n2 = [x for x in n if x in defined and x.complement() not in facts]
            h2 = [x for x in h if x.complement() not in facts]
            if len(p2) != len(p) or len(n2) != len(n) or len(h2) != len(h):
                changed = True
            if not h2 and not p2 and not n2:
                return _Residual(frozenset(facts), [], [], {}, True)
            if len(h2) == 1 and not p2 and not n2:
                facts.add(h2[0])
                changed = True
            out.append((h2, p2, n2))
        rules = out
    defined = set()
    for h, _, _ in rules:
        defined.update(h)
    residual_rules = [(tuple(h), tuple(p), tuple(n)) for h, p, n in rules if not (len(h) == 1 and not p and not n)]
    base: dict[int, int] = {}
    weak = []
    for w in program.weak:
        p, n = w.pos, w.neg
        if any(x in facts for x in n):
            continue
        if any(x not in defined or x.complement() in facts for x in p):
            continue
        p2 = tuple(x for x in p if x not in facts)
        n2 = tuple(x for x in n if x in defined and x.complement() not in facts)
        if not p2 and not n2:
            base[w.level] = base.get(w.level, 0) + w.weight
            continue
        weak.append((p2, n2, w.weight, w.level))
    return _Residual(frozenset(facts), residual_rules, weak, base)


# -- kernel input -----------------------------------------------------------------


@dataclass
class Problem:
    """Flat integer form of a residual ground program; see ``_search.search``."""

    n: int
    h_off: list
    h_at: list
    p_off: list
    p_at: list
    n_off: list
    n_at: list
    occ_off: list
    occ_r: list
    hocc_off: list
    hocc_r: list
    wp_off: list
    wp_at: list
    wn_off: list
    wn_at: list
    w_weight: list
    w_level: list
    n_levels: int
    order: list
    pref: list
    optimal: bool = True
    limit: int = 0
    cap: int = 2**20


def _csr(rows: Sequence[Sequence[int]]) -> tuple[list[int], list[int]]:
    off = [0]
    data: list[int] = []
    for row in rows:
        data.extend(row)
        off.append(len(data))
    return off, data


def build_problem(res: _Residual, optimal: bool, limit: int, cap: int) -> tuple[Problem, list[Literal], list[int]]:
    atoms: dict[Literal, int] = {}

    def ix(l: Literal) -> int:
        i = atoms.get(l)
        if i is None:
            i = atoms[l] = len(atoms)
        return i

    rules = [([ix(x) for x in h], [ix(x) for x in p], [ix(x) for x in n]) for h, p, n in res.rules]
    weak = [([ix(x) for x in p], [ix(x) for x in n], w, l) for p, n, w, l in res.weak]
    for lit in list(atoms):
        if not lit.negated and lit.complement() in atoms:
            rules.append(([], [atoms[lit], atoms[lit.complement()]], []))
    n = len(atoms)
    occ: list[list[int]] = [[] for _ in range(n)]
    hocc: list[list[int]] = [[] for _ in range(n)]
    for r, (h, p, ng) in enumerate(rules):
        for a in dict.fromkeys(h + p + ng):
            occ[a].append(r)
        for a in dict.fromkeys(h):
            hocc[a].append(r)
    levels = sorted({l for *_, l in weak}, reverse=True)
    level_ix = {l: i for i, l in enumerate(levels)}
    top = [len(levels)] * n
    pref = [0] * n
    for p, ng, w, l in weak:
        li = level_ix[l]
        for a in p:
            if li < top[a]:
                top[a], pref[a] = li, 0
        for a in ng:
            if li < top[a]:
                top[a], pref[a] = li, 1
    order = sorted(range(n), key=lambda a: (top[a], a))
    h_off, h_at = _csr([r[0] for r in rules])
    p_off, p_at = _csr([r[1] for r in rules])
    n_off, n_at = _csr([r[2] for r in rules])
    occ_off, occ_r = _csr(occ)
    hocc_off, hocc_r = _csr(hocc)
    wp_off, wp_at = _csr([w[0] for w in weak])
    wn_off, wn_at = _csr([w[1] for w in weak])
    prob = Problem(
        n, h_off, h_at, p_off, p_at, n_off, n_at, occ_off, occ_r, hocc_off, hocc_r,
        wp_off, wp_at, wn_off, wn_at, [w[2] for w in weak], [level_ix[w[3]] for w in weak],
        len(levels), order, pref, optimal, limit, cap,
    )
    return prob, list(atoms), levels


# -- solving ------------------------------------------------------------------------


@dataclass(frozen=True)
class AnswerSet:
    literals: frozenset
    cost: CostVector

    def __iter__(self):
        return iter(sorted_literals(self.literals))

    def __contains__(self, lit) -> bool:
        return lit in self.literals

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        return "{" + ", ".join(str(l) for l in sorted_literals(self.literals)) + "}"


def sorted_literals(lits: Iterable[Literal]) -> list[Literal]:
    return sorted(lits, key=str)


def _order_key(model: frozenset) -> tuple[str, ...]:
    return tuple(sorted(str(l) for l in model))


class _Cache:
    def __init__(self, size: int = 4096):
        self.size = size
        self.data: OrderedDict = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        v = self.data.get(key)
        if v is None:
            self.misses += 1
            return None
        self.hits += 1
        self.data.move_to_end(key)
        return v

    def put(self, key, value) -> None:
        self.data[key] = value
        if len(self.data) > self.size:
            self.data.popitem(last=False)


_CACHE = _Cache()


def _residual_key(res: _Residual, optimal: bool, limit: int) -> str:
    parts = sorted(
        " v ".join(map(str, h)) + ":-" + ",".join(map(str, p)) + "|" + ",".join(map(str, n))
        for h, p, n in res.rules
    )
    wparts = sorted(
        ",".join(map(str, p)) + "|" + ",".join(map(str, n)) + f"[{w}:{l}]" for p, n, w, l in res.weak
    )
    return f"{int(optimal)}/{limit}\n" + "\n".join(parts) + "\n~\n" + "\n".join(wparts)


def _solve_residual(res: _Residual, optimal: bool, limit: int, cap: int):
    key = _residual_key(res, optimal, limit)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    prob, atoms, levels = build_problem(res, optimal, limit, cap)
    status, models, costs, nodes = _kernel.search(prob)
    if status != 0:
        raise BaseTooLarge(
            f"search exceeded {cap} decisions; raise DEONTASP_ENUM_CAP to continue"
        )
    out = []
    for m, c in zip(models, costs):
        lits = frozenset(atoms[a] for a in m)
        out.append((lits, {levels[i]: w for i, w in enumerate(c) if w}))
    log.debug("search: %d atoms, %d nodes, %d models", prob.n, nodes, len(out))
    result = tuple(out)
    _CACHE.put(key, result)
    return result


def solve(
    program: Program,
    *,
    optimal: bool = True,
    limit: int | None = None,
    cap: int | None = None,
) -> list[AnswerSet]:
    """Answer sets of ``program`` in deterministic order.

    With ``optimal`` only the lexicographically cheapest answer sets are
    returned (all ties).  ``limit`` truncates the result; in enumeration mode
    it also stops the search early.
    """
    cap = config.enum_cap() if cap is None else cap
    g = ground(program)
    res = _simplify(g)
    if res.inconsistent:
        return []
    raw = _solve_residual(res, optimal, 0 if optimal else (limit or 0), cap)
    answers = []
    for lits, c in raw:
        total = dict(res.base_cost)
        for lvl, w in c.items():
            total[lvl] = total.get(lvl, 0) + w
        answers.append(AnswerSet(res.facts | lits, CostVector.from_dict(total)))
    answers.sort(key=lambda a: _order_key(a.literals))
    if limit:
        answers = answers[:limit]
    return answers


def enumerate_answer_sets(program: Program, limit: int | None = None) -> list[frozenset]:
    """All answer sets (weak constraints ignored), sorted by literal strings."""
    return [a.literals for a in solve(program, optimal=False, limit=limit)]


def optimal_answer_sets(program: Program) -> list[tuple[frozenset, CostVector]]:
    return [(a.literals, a.cost) for a in solve(program, optimal=True)]


def solve_or_raise(program: Program, **kwargs) -> list[AnswerSet]:
    answers = solve(program, **kwargs)
    if not answers:
        raise Inconsistent("the program has no answer set")
    return answers


def cache_info() -> dict[str, int]:
    return {"hits": _CACHE.hits, "misses": _CACHE.misses, "size": len(_CACHE.data)}


def clear_cache() -> None:
    _CACHE.data.clear()
    _CACHE.hits = _CACHE.misses = 0
