"""
Job files: schema, execution and canonical reports.

A job is a JSON object ``{"kind": ..., "payload": {...}, "options": {...},
"expected": {...}}``.  ``expected`` maps dotted report paths to values; any
mismatch turns a successful run into a fixture failure.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from . import __version__
from .analysis import charpoly, fix_signs, format_order, invariant_report, matrix_order, split
from .braids import BraidParseError, parse_braid
from .convolution import convolve, verify_local_types
from .elliptic import FiberConfiguration, KodairaError, euler_characteristic, kodaira_classify
from .lattice import FormInvariants, GramForm, IntMatrix, LatticeError, form_invariants
from .local_system import SYMPLECTIC_J, MonodromyTuple, validate
from .variation import compute_variation

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 64

KINDS = ("compute", "mc", "mh", "twist", "kodaira", "split", "validate-table")

_INT = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _INT}}
_TUPLE = {
    "type": "object",
    "properties": {
        "mats": {"type": "array", "items": _MATRIX, "minItems": 1},
        "points": {"type": "array", "items": {"type": "string"}},
        "types": {"type": "array", "items": {"type": "string"}},
        "pairing": _MATRIX,
    },
    "required": ["mats"],
    "additionalProperties": False,
}
_FIBER = {
    "type": "object",
    "properties": {
        "place": {"type": "string"},
        "kind": {"type": "string"},
        "n": {"type": ["integer", "null"]},
    },
    "required": ["place", "kind"],
    "additionalProperties": False,
}
_TABLE_ROW = {
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "gram": {"anyOf": [_MATRIX, {"type": "null"}]},
        "det": {"anyOf": [_INT, {"type": "null"}]},
        "disc": {"anyOf": [{"type": "array", "items": _INT}, {"type": "null"}]},
        "monodromy": {"type": "array", "items": _MATRIX},
        "labels": {"anyOf": [{"type": "array", "items": {"type": "string"}}, {"type": "null"}]},
        "product": {"enum": ["identity", "sign"]},
        "orders": {"anyOf": [{"type": "array", "items": {"type": "string"}}, {"type": "null"}]},
        "citation": {"type": "string"},
    },
    "required": ["monodromy"],
    "additionalProperties": False,
}


def _obj(props: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


_PAYLOADS = {
    "compute": _obj({
        "tuple": _TUPLE,
        "braids": {"type": "array", "items": {"type": "string"}},
        "labels": {"type": "array", "items": {"type": "string"}},
    }, ["tuple"]),
    "mc": _obj({"tuple": _TUPLE}, ["tuple"]),
    "mh": _obj({"tuple": _TUPLE, "fixed": {"anyOf": [{"type": "string"}, {"type": "integer"}]}},
               ["tuple", "fixed"]),
    "twist": _obj({
        "configuration": {"type": "array", "items": _FIBER},
        "places": {"type": "array", "items": {"type": "string"}},
    }, ["configuration", "places"]),
    "kodaira": _obj({"orders": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3}},
                    ["orders"]),
    "split": _obj({"gram": _MATRIX, "monodromy": {"type": "array", "items": _MATRIX}}, ["gram", "monodromy"]),
    "validate-table": _obj({"rows": {"type": "array", "items": _TABLE_ROW}}, ["rows"]),
}

_OPTIONS = _obj({
    "sign_hints": {"type": "array", "items": {"type": ["integer", "null"]}},
    "trace_targets": {"type": "array", "items": {"type": ["integer", "null"]}},
    "format": {"enum": ["json", "table"]},
}, [])

JOB_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": list(KINDS)},
        "payload": {"type": "object"},
        "options": _OPTIONS,
        "expected": {"type": "object"},
        "id": {"type": "string"},
        "citation": {"type": "string"},
    },
    "required": ["kind", "payload"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": k}}}, "then": {"properties": {"payload": schema}}}
        for k, schema in _PAYLOADS.items()
    ],
}


class JobError(ValueError):
    """Raised for jobs that fail schema validation or carry unparsable input."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def validate_job(job: Any) -> None:
    validator = jsonschema.Draft7Validator(JOB_SCHEMA)
    errors = sorted(validator.iter_errors(job), key=lambda e: list(e.absolute_path))
    if errors:
        # the deepest error is the most specific one for nested payloads
        err = max(errors, key=lambda e: len(e.absolute_path))
        loc = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise JobError(err.message, loc)


# ---------------------------------------------------------------------------
# Canonical output


def canonical(obj: Any) -> Any:
    """Integers become decimal strings; dict keys are sorted on dump."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, IntMatrix):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def job_hash(job: dict) -> str:
    text = json.dumps(canonical(job), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Report pieces


def projective_charpoly(M: IntMatrix) -> list[int]:
    """The smaller of charpoly(M) and charpoly(-M), so the sign of M drops out."""
    c = charpoly(M)
    alt = [x * (-1) ** k for k, x in enumerate(c)]
    if alt[0] < 0:
        alt = [-x for x in alt]
    return min(c, alt)


def _scalar_name(M: IntMatrix) -> str | None:
    n = M.rows
    if M == IntMatrix.identity(n):
        return "I"
    if M == -IntMatrix.identity(n):
        return "-I"
    return None


def form_report(Q: GramForm) -> dict:
    inv: FormInvariants | None = form_invariants(Q) if Q.rank else None
    return {
        "rank": Q.rank,
        "gram": Q.matrix,
        "det": inv.det if inv else None,
        "disc": list(inv.disc) if inv else [],
        "signature": list(inv.signature) if inv and inv.signature else None,
    }


def monodromy_report(labels, mats) -> dict:
    orders = [format_order(matrix_order(m)) for m in mats]
    return {
        "labels": list(labels),
        "matrices": list(mats),
        "traces": [m.trace() for m in mats],
        "orders": orders,
        "orders_sorted": sorted(orders),
        "charpolys": [charpoly(m) for m in mats],
        "charpolys_projective": [projective_charpoly(m) for m in mats],
    }


def _matrix(data, where: str) -> IntMatrix:
    try:
        return IntMatrix.from_json(data)
    except LatticeError as exc:
        raise JobError(str(exc), where) from exc


def _tuple(data: dict) -> MonodromyTuple:
    mats = tuple(_matrix(m, f"payload/tuple/mats/{k}") for k, m in enumerate(data["mats"]))
    pairing = GramForm(_matrix(data["pairing"], "payload/tuple/pairing"), "antisymmetric") \
        if "pairing" in data else SYMPLECTIC_J
    try:
        t = MonodromyTuple(mats, tuple(data.get("points") or ()), pairing)
    except LatticeError as exc:
        raise JobError(str(exc), "payload/tuple") from exc
    problems = validate(t)
    if problems:
        raise JobError("; ".join(problems), "payload/tuple")
    return t


def _braids(words: list[str]):
    out = []
    for k, w in enumerate(words):
        try:
            out.append(parse_braid(w))
        except BraidParseError as exc:
            raise JobError(str(exc), f"payload/braids/{k}") from exc
    return out


def _split_report(res, signs=None) -> dict:
    out = {"fixed_rank": res.fixed.rank, "hypothesis_holds": res.hypothesis_holds,
           "T": invariant_report(res.T_gram, res.T_monodromy)}
    if signs is not None:
        out["signs"] = list(signs)
    return out


# ---------------------------------------------------------------------------
# Runners


def _run_kodaira(payload: dict, options: dict) -> dict:
    try:
        f = kodaira_classify(*payload["orders"])
    except KodairaError as exc:
        raise JobError(str(exc), "payload/orders") from exc
    return {"type": f.name, "euler": f.euler, "monodromy": f.local_monodromy,
            "multiplicative": f.multiplicative}


def _run_twist(payload: dict, options: dict) -> dict:
    try:
        c = FiberConfiguration.from_json(payload["configuration"])
    except KodairaError as exc:
        raise JobError(str(exc), "payload/configuration") from exc
    twisted = c.twisted(payload["places"])
    return {"fibers": twisted.to_json(), "euler_before": euler_characteristic(c),
            "euler_after": euler_characteristic(twisted)}


def _run_compute(payload: dict, options: dict) -> dict:
    t = _tuple(payload["tuple"])
    words = _braids(payload.get("braids", []))
    labels = payload.get("labels")
    hints = options.get("sign_hints")
    res = compute_variation(t, words, hints, labels, with_infinity=bool(words))
    out = {"W": form_report(res.gram), "monodromy": monodromy_report(res.labels, res.monodromy),
           "braids": [str(w) for w in res.braids]}
    targets = options.get("trace_targets")
    if targets is not None:
        choice = fix_signs(res.gram, res.monodromy[:len(words)], targets)
        out["split"] = _split_report(choice.split, choice.signs)
        out["monodromy"] = monodromy_report(res.labels, choice.monodromy)
    return out


def _run_convolution(kind: str, payload: dict, options: dict) -> dict:
    t = _tuple(payload["tuple"])
    if kind == "mc":
        fixed = t.r - 1
    else:
        key = payload["fixed"]
        if isinstance(key, int):
            fixed = key
        elif key in t.points:
            fixed = t.points.index(key)
        else:
            raise JobError(f"no point labelled {key!r}", "payload/fixed")
        if not 0 <= fixed < t.r - 1:
            raise JobError("the Hadamard product needs a finite fixed slot", "payload/fixed")
    res = convolve(t, fixed)
    jordan = verify_local_types(res)
    return {
        "kind": res.kind,
        "fixed": t.points[fixed],
        "predicted_rank": res.predicted_rank,
        "W": form_report(res.gram),
        "monodromy": monodromy_report(res.monodromy.points, res.monodromy.mats),
        "infinity": _scalar_name(res.monodromy.mats[-1]),
        "jordan": jordan,
        "jordan_ok": not any(jordan.values()),
    }


def _run_split(payload: dict, options: dict) -> dict:
    Q = GramForm(_matrix(payload["gram"], "payload/gram"))
    mats = [_matrix(m, f"payload/monodromy/{k}") for k, m in enumerate(payload["monodromy"])]
    targets = options.get("trace_targets")
    if targets is not None:
        choice = fix_signs(Q, mats, targets, with_infinity=False)
        return _split_report(choice.split, choice.signs)
    return _split_report(split(Q, mats))


def self_check(row: dict) -> dict:
    """Checks a printed (Q, monodromy) block for internal consistency."""
    mats = [IntMatrix.from_json(m) for m in row["monodromy"]]
    n = mats[0].rows
    prod = IntMatrix.identity(n)
    for m in mats:
        prod = prod @ m
    want = row.get("product") or "identity"
    ok_product = prod == IntMatrix.identity(n) or (want == "sign" and prod == -IntMatrix.identity(n))
    out: dict = {"id": row.get("id", ""), "product_ok": ok_product}
    if row.get("gram") is not None:
        Q = IntMatrix.from_json(row["gram"])
        out["preserves_gram"] = [m @ Q @ m.T == Q for m in mats]
        det = Q.det()
        out["det"] = det
        if row.get("det") is not None:
            out["det_ok"] = det == int(row["det"])
        if row.get("disc") is not None:
            disc = list(form_invariants(GramForm(Q)).disc)
            out["disc_ok"] = disc == [int(d) for d in row["disc"]]
    if row.get("orders") is not None:
        got = [format_order(matrix_order(m)) for m in mats]
        out["orders"] = got
        out["orders_ok"] = got == [o.replace("+", "") for o in row["orders"]]
    flags = [v for k, v in out.items() if k.endswith("_ok")] + out.get("preserves_gram", [])
    out["ok"] = all(flags)
    return out


def _run_validate_table(payload: dict, options: dict) -> dict:
    rows = [self_check(r) for r in payload["rows"]]
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


_RUNNERS = {
    "kodaira": _run_kodaira,
    "twist": _run_twist,
    "compute": _run_compute,
    "mc": lambda p, o: _run_convolution("mc", p, o),
    "mh": lambda p, o: _run_convolution("mh", p, o),
    "split": _run_split,
    "validate-table": _run_validate_table,
}


# ---------------------------------------------------------------------------
# Expectations

_PATH = re.compile(r"([^.\[\]]+)|\[(-?\d+)\]")


def lookup(report: Any, path: str) -> Any:
    cur = report
    for name, index in _PATH.findall(path):
        if index:
            cur = cur[int(index)]
        else:
            cur = cur[name]
    return cur


def compare(report: dict, expected: dict) -> list[str]:
    mismatches = []
    for path, want in sorted(expected.items()):
        try:
            got = lookup(report, path)
        except (KeyError, IndexError, TypeError):
            mismatches.append(f"{path}: missing from the report")
            continue
        if canonical(got) != canonical(want):
            mismatches.append(f"{path}: got {json.dumps(canonical(got))}, expected {json.dumps(canonical(want))}")
    return mismatches


@dataclass
class JobOutcome:
    exit_code: int
    report: dict
    error: str | None = None
    mismatches: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return dumps(self.report)


def run_job(job: Any) -> JobOutcome:
    """Validate and execute a job; never raises for bad input or failed maths."""
    try:
        validate_job(job)
    except JobError as exc:
        return JobOutcome(EXIT_USAGE, {"version": __version__, "error": f"schema: {exc}"}, str(exc))
    base = {"version": __version__, "job_hash": job_hash(job), "kind": job["kind"]}
    if "id" in job:
        base["id"] = job["id"]
    options = job.get("options", {})
    try:
        result = _RUNNERS[job["kind"]](job["payload"], options)
    except JobError as exc:
        return JobOutcome(EXIT_USAGE, {**base, "error": f"input: {exc}"}, str(exc))
    except (LatticeError, ArithmeticError, ValueError) as exc:
        return JobOutcome(EXIT_COMPUTATION, {**base, "error": f"computation: {exc}"}, str(exc))
    report = {**base, "result": result}
    mismatches = compare(result, job["expected"]) if "expected" in job else []
    if "expected" in job:
        report["check"] = {"passed": not mismatches, "mismatches": mismatches}
    return JobOutcome(EXIT_MISMATCH if mismatches else EXIT_OK, report, None, mismatches)
