"""Solve every corpus entry and compare it with its expectations."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable

import yaml

from ..asp.parser import parse, parse_literal
from ..asp.solver import solve
from ..asp.syntax import Literal, Program, WeakConstraint, term_str
from ..compiler import compile_system, load_norm_spec
from ..deontic import DeonticVerdict, common_core, core_rules
from ..errors import DeontaspError

CORES = ("full", "rules", "none")


def corpus_path() -> Path:
    return Path(str(resources.files(__package__)))


def golden_path(spec_name: str) -> Path:
    return corpus_path() / "golden" / f"{spec_name}.lp"


def spec_paths() -> list[Path]:
    return sorted((corpus_path() / "specs").glob("*.yaml"))


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    program: Program
    facts: Program
    core: str
    expect: dict
    provenance: dict
    spec: Path | None = None

    def core_program(self) -> Program:
        if self.core == "full":
            return common_core()
        if self.core == "rules":
            return core_rules()
        return Program()

    def full_program(self, source: str = "program") -> Program:
        """The program to solve.  ``source="spec"`` compiles the norm spec instead
        of using the stored program text."""
        if source == "spec":
            if self.spec is None:
                raise ValueError(f"entry {self.name} has no norm spec")
            body = compile_system(load_norm_spec(self.spec), with_core=False)
        else:
            body = self.program
        return self.core_program() + body + self.facts


@dataclass
class EntryResult:
    name: str
    passed: bool
    mismatches: list[str] = field(default_factory=list)
    seconds: float = 0.0
    verdict: DeonticVerdict | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name} ({self.seconds:.3f}s)"
        for m in self.mismatches:
            text += f"\n    {m}"
        return text


def load_entries(name_filter: str | None = None) -> list[CorpusEntry]:
    root = corpus_path()
    manifest = yaml.safe_load((root / "manifest.yaml").read_text(encoding="utf-8"))
    entries = []
    for raw in manifest["entries"]:
        if name_filter and name_filter not in raw["name"]:
            continue
        program = parse((root / raw["program"]).read_text(encoding="utf-8"), raw["program"])
        facts = Program()
        if "facts_file" in raw:
            facts = parse((root / raw["facts_file"]).read_text(encoding="utf-8"), raw["facts_file"])
        if "facts" in raw:
            facts = facts + parse(raw["facts"], f"{raw['name']}:facts")
        core = raw.get("core", "full")
        if core not in CORES:
            raise ValueError(f"entry {raw['name']}: core must be one of {CORES}")
        expect = {k: v["value"] for k, v in raw["expect"].items()}
        provenance = {k: v["provenance"] for k, v in raw["expect"].items()}
        spec = root / raw["spec"] if "spec" in raw else None
        entries.append(CorpusEntry(raw["name"], program, facts, core, expect, provenance, spec))
    return entries


def _literals(texts) -> set[Literal]:
    return {parse_literal(t) for t in texts}


def _fmt(lits) -> str:
    return "{" + ", ".join(sorted(str(l) for l in lits)) + "}"


def _compare(entry: CorpusEntry, verdict: DeonticVerdict) -> list[str]:
    out = []
    exp = entry.expect
    if "optimal_count" in exp and len(verdict) != exp["optimal_count"]:
        out.append(f"optimal_count: expected {exp['optimal_count']}, got {len(verdict)}")
    if "cautious_deontic" in exp:
        want = _literals(exp["cautious_deontic"])
        got = set(verdict.cautious_deontic())
        if want != got:
            lost, extra = want - got, got - want
            out.append(
                f"cautious_deontic: expected {_fmt(want)}, got {_fmt(got)}"
                f" (missing {_fmt(lost)}, unexpected {_fmt(extra)})"
            )
    if "present" in exp:
        missing = _literals(exp["present"]) - set(verdict.cautious())
        if missing:
            out.append(f"present: not in every optimal answer set: {_fmt(missing)}")
    if "absent" in exp:
        found = _literals(exp["absent"]) & set(verdict.brave())
        if found:
            out.append(f"absent: found in some optimal answer set: {_fmt(found)}")
    if "obligation_sets" in exp:
        want = {frozenset(s) for s in exp["obligation_sets"]}
        got = {
            frozenset(term_str(l.args[0]) for l in a.literals if l.predicate == "O" and not l.negated)
            for a in verdict.answer_sets
        }
        if want != got:
            fmt = lambda sets: sorted(sorted(s) for s in sets)  # noqa: E731
            out.append(f"obligation_sets: expected {fmt(want)}, got {fmt(got)}")
    return out


def run_entry(
    entry: CorpusEntry,
    *,
    source: str = "program",
    transform: Callable[[Program], Program] | None = None,
) -> EntryResult:
    """Solve one entry; ``transform`` may rewrite the norm program (mutation checks)."""
    start = time.perf_counter()
    try:
        if transform is not None:
            entry = replace(entry, program=transform(entry.program))
        answers = solve(entry.full_program(source))
        verdict = DeonticVerdict.from_answer_sets(answers)
        mismatches = _compare(entry, verdict)
    except DeontaspError as exc:
        verdict, mismatches = None, [f"{type(exc).__name__}: {exc}"]
    seconds = time.perf_counter() - start
    return EntryResult(entry.name, not mismatches, mismatches, seconds, verdict)


def run_corpus(name_filter: str | None = None, *, source: str = "program") -> list[EntryResult]:
    return [run_entry(e, source=source) for e in load_entries(name_filter)]


def relevel(program: Program, contains: str, level: int) -> Program:
    """Move every weak constraint whose printed body contains ``contains`` to ``level``."""
    weak = tuple(
        WeakConstraint(w.body, w.weight, level) if contains in str(w) else w for w in program.weak
    )
    return Program(program.rules, weak, program.maxint)
