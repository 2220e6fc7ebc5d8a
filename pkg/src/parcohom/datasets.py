"""
Curated regression dataset: printed matrices with their table citations and
job-file cases with expected invariants.

The dataset path defaults to the packaged ``data/fixtures.json`` and can be
overridden with the ``PARCOHOM_DATA`` environment variable.
"""

from __future__ import annotations

import fnmatch
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .jobs import EXIT_OK, run_job, self_check

ENV_VAR = "PARCOHOM_DATA"


@dataclass(frozen=True)
class FixtureCase:
    id: str
    citation: str
    job: dict
    expected: dict

    def as_job(self) -> dict:
        return {**self.job, "id": self.id, "expected": self.expected}


@dataclass(frozen=True)
class PrintedBlock:
    id: str
    citation: str
    data: dict


@dataclass(frozen=True)
class Dataset:
    path: str
    printed: tuple[PrintedBlock, ...]
    cases: tuple[FixtureCase, ...]

    def case(self, case_id: str) -> FixtureCase:
        for c in self.cases:
            if c.id == case_id:
                return c
        raise KeyError(case_id)

    def block(self, block_id: str) -> PrintedBlock:
        for b in self.printed:
            if b.id == block_id:
                return b
        raise KeyError(block_id)


def dataset_path() -> str:
    override = os.environ.get(ENV_VAR)
    if override:
        return override
    return str(resources.files("parcohom") / "data" / "fixtures.json")


def load_dataset(path: str | os.PathLike | None = None) -> Dataset:
    path = str(path) if path is not None else dataset_path()
    data = json.loads(Path(path).read_text())
    printed = []
    for b in data.get("printed", []):
        if not b.get("citation"):
            raise ValueError(f"printed block {b.get('id')} has no citation")
        printed.append(PrintedBlock(b["id"], b["citation"], b))
    cases = []
    for c in data.get("cases", []):
        if not c.get("citation"):
            raise ValueError(f"fixture {c.get('id')} has no citation")
        cases.append(FixtureCase(c["id"], c["citation"], c["job"], c["expected"]))
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise ValueError("fixture ids are not unique")
    return Dataset(path, tuple(printed), tuple(cases))


@dataclass(frozen=True)
class CaseResult:
    id: str
    kind: str
    passed: bool
    exit_code: int
    detail: tuple[str, ...] = ()


@dataclass
class Summary:
    cases: list[CaseResult] = field(default_factory=list)
    checks: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.cases + self.checks)

    @property
    def counts(self) -> dict[str, int]:
        rows = self.cases + self.checks
        return {"total": len(rows), "passed": sum(r.passed for r in rows),
                "failed": sum(not r.passed for r in rows)}

    def to_json(self) -> dict:
        def rows(rs):
            return [{"id": r.id, "kind": r.kind, "passed": r.passed, "exit_code": r.exit_code,
                     "detail": list(r.detail)} for r in rs]
        return {"counts": self.counts, "cases": rows(self.cases), "self_checks": rows(self.checks)}

    def table(self) -> str:
        rows = [(r.id, r.kind, "pass" if r.passed else "FAIL") for r in self.checks + self.cases]
        width = max([len(r[0]) for r in rows] + [2])
        lines = [f"{'id':<{width}}  {'kind':<14}  result"]
        lines += [f"{i:<{width}}  {k:<14}  {p}" for i, k, p in rows]
        c = self.counts
        lines.append(f"{c['passed']}/{c['total']} passed")
        return "\n".join(lines)


def _run_case(case: FixtureCase) -> CaseResult:
    out = run_job(case.as_job())
    detail = tuple(out.mismatches) or ((out.error,) if out.error else ())
    return CaseResult(case.id, case.job["kind"], out.exit_code == EXIT_OK, out.exit_code, detail)


def _check_block(block: PrintedBlock) -> CaseResult:
    out = self_check({**block.data, "id": block.id})
    bad = tuple(k for k, v in out.items() if k.endswith("_ok") and not v)
    if not all(out.get("preserves_gram", [])):
        bad += ("preserves_gram",)
    return CaseResult(block.id, "self-check", out["ok"], EXIT_OK if out["ok"] else 2, bad)


def validate_fixtures(
    pattern: str | None = None,
    dataset: Dataset | None = None,
    workers: int = 1,
) -> Summary:
    """Run the matching fixtures and printed-data self-checks.

    ``pattern`` is a shell-style glob on ids; results are merged in id order
    whatever the worker count.
    """
    ds = dataset or load_dataset()
    match = (lambda i: fnmatch.fnmatchcase(i, pattern)) if pattern else (lambda i: True)
    cases = [c for c in ds.cases if match(c.id)]
    blocks = [b for b in ds.printed if match(b.id)]
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_case, cases))
    else:
        results = [_run_case(c) for c in cases]
    checks = [_check_block(b) for b in blocks]
    return Summary(sorted(results, key=lambda r: r.id), sorted(checks, key=lambda r: r.id))
