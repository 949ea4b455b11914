"""Versioned JSON reports and CSV violation export.

Every integer is written as a decimal string so that no reader can lose
precision on values such as H_k(n). The generation timestamp is carried but
ignored by equality, which keeps fixtures stable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Union

from . import __version__
from .claims import ClaimReport, Violation
from .scanner import GiugaCensus

FORMAT_VERSION = 1
CSV_HEADER = ["claim_id", "n", "k", "observed", "expected", "path"]

Payload = Union[ClaimReport, GiugaCensus]


class ReportParseError(ValueError):
    pass


class VersionMismatch(ValueError):
    pass


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class ReportDocument:
    payload: Payload
    format_version: int = FORMAT_VERSION
    tool_version: str = __version__
    generated_at: str = field(default_factory=_utc_now, compare=False)


# -- encoding -------------------------------------------------------------------------


def _s(value: int | None) -> str | None:
    return None if value is None else str(value)


def _violation_json(v: Violation) -> dict[str, Any]:
    return {
        "claim_id": v.claim_id,
        "n": _s(v.n),
        "k": _s(v.k),
        "j": _s(v.j),
        "observed": str(v.observed),
        "expected": str(v.expected),
        "relation": v.relation,
        "modulus": _s(v.modulus),
        "path": v.path,
    }


def _payload_json(p: Payload) -> tuple[str, dict[str, Any]]:
    if isinstance(p, ClaimReport):
        return "claim_report", {
            "claim_id": p.claim_id,
            "kind": p.kind,
            "n_lo": str(p.n_lo),
            "n_hi": str(p.n_hi),
            "k_policy": p.k_policy,
            "pairs_checked": str(p.pairs_checked),
            "skipped": str(p.skipped),
            "spot_checks": str(p.spot_checks),
            "violation_count": str(p.violation_count),
            "violations": [_violation_json(v) for v in p.violations],
            "verdict": p.verdict,
            "status": p.status,
            "wall_time_ms": str(p.wall_time_ms),
        }
    if isinstance(p, GiugaCensus):
        return "giuga_census", {
            "bound": str(p.bound),
            "composite_satisfiers": [str(n) for n in p.composite_satisfiers],
            "prime_satisfiers": str(p.prime_satisfiers),
            "primes_checked": str(p.primes_checked),
            "G": str(p.G),
        }
    raise TypeError(f"cannot serialize payload of type {type(p).__name__}")


def to_json(doc: ReportDocument, *, volatile: bool = True) -> str:
    """Serialized document; ``volatile=False`` drops timestamp and wall time."""
    kind, body = _payload_json(doc.payload)
    out: dict[str, Any] = {
        "format_version": str(doc.format_version),
        "tool_version": doc.tool_version,
        "payload_type": kind,
        "payload": body,
    }
    if volatile:
        out["generated_at"] = doc.generated_at
    else:
        body.pop("wall_time_ms", None)
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def canonical_bytes(doc: ReportDocument) -> bytes:
    return to_json(doc, volatile=False).encode()


def violations_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    p = doc.payload
    if isinstance(p, ClaimReport):
        for v in p.violations:
            expected = str(v.expected)
            if v.relation == "ne":
                expected = "!=" + expected
            elif v.relation == "lt":
                expected = "<" + expected
            writer.writerow([v.claim_id, _s(v.n) or "", _s(v.k) or "", str(v.observed), expected, v.path])
    else:
        # a composite satisfier has f_G(n) = 0 mod n where a nonzero residue was required
        for n in p.composite_satisfiers:
            writer.writerow(["giuga", str(n), "", "0", "!=0", "modular"])
    return buf.getvalue()


def write_report(doc: ReportDocument, path: str | Path, format: str = "structured-json") -> None:
    path = Path(path)
    if format in ("structured-json", "json"):
        text = to_json(doc)
    elif format in ("csv-violations", "csv"):
        text = violations_csv(doc)
    else:
        raise ValueError(f"unknown report format {format!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# -- decoding -------------------------------------------------------------------------


def _int(value: Any, where: str) -> int:
    if not isinstance(value, str):
        raise ReportParseError(f"{where}: expected a decimal string, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise ReportParseError(f"{where}: not a decimal integer: {value!r}") from None


def _opt_int(value: Any, where: str) -> int | None:
    return None if value is None else _int(value, where)


def _violation_from(d: dict[str, Any], where: str) -> Violation:
    return Violation(
        claim_id=d["claim_id"],
        n=_opt_int(d["n"], where + ".n"),
        k=_opt_int(d["k"], where + ".k"),
        observed=_int(d["observed"], where + ".observed"),
        expected=_int(d["expected"], where + ".expected"),
        relation=d["relation"],
        modulus=_opt_int(d["modulus"], where + ".modulus"),
        path=d["path"],
        j=_opt_int(d["j"], where + ".j"),
    )


def _payload_from(kind: str, b: dict[str, Any]) -> Payload:
    if kind == "claim_report":
        report = ClaimReport(
            claim_id=b["claim_id"],
            kind=b["kind"],
            n_lo=_int(b["n_lo"], "n_lo"),
            n_hi=_int(b["n_hi"], "n_hi"),
            k_policy=b["k_policy"],
            pairs_checked=_int(b["pairs_checked"], "pairs_checked"),
            skipped=_int(b["skipped"], "skipped"),
            violation_count=_int(b["violation_count"], "violation_count"),
            violations=[_violation_from(v, f"violations[{i}]") for i, v in enumerate(b["violations"])],
            spot_checks=_int(b["spot_checks"], "spot_checks"),
            status=b["status"],
            wall_time_ms=_int(b.get("wall_time_ms", "0"), "wall_time_ms"),
        )
        if b["verdict"] != report.verdict:
            raise ReportParseError(f"verdict {b['verdict']!r} inconsistent with violation count")
        return report
    if kind == "giuga_census":
        census = GiugaCensus(
            bound=_int(b["bound"], "bound"),
            composite_satisfiers=tuple(_int(n, "composite_satisfiers") for n in b["composite_satisfiers"]),
            prime_satisfiers=_int(b["prime_satisfiers"], "prime_satisfiers"),
            primes_checked=_int(b["primes_checked"], "primes_checked"),
        )
        if _int(b["G"], "G") != census.G:
            raise ReportParseError("G does not match the number of composite satisfiers")
        return census
    raise ReportParseError(f"unknown payload type {kind!r}")


def from_json(text: str) -> ReportDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ReportParseError("top level must be an object")
    try:
        version = _int(raw["format_version"], "format_version")
        if version != FORMAT_VERSION:
            raise VersionMismatch(f"report format version {version}; this tool reads {FORMAT_VERSION}")
        return ReportDocument(
            payload=_payload_from(raw["payload_type"], raw["payload"]),
            format_version=version,
            tool_version=raw["tool_version"],
            generated_at=raw.get("generated_at", ""),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ReportParseError(f"missing or malformed field: {exc}") from None


def read_report(path: str | Path) -> ReportDocument:
    return from_json(Path(path).read_text(encoding="utf-8"))
