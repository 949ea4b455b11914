"""Chunked, parallel, resumable sweeps over ranges of n.

A sweep splits [n_lo, n_hi] into contiguous chunks, evaluates them in worker
processes and folds the chunk results in chunk order, so the report does not
depend on the worker count or on completion order.

Checkpoints are JSON lines. The first line is a header carrying the config
digest; every later line is one completed chunk with a SHA-256 checksum over
its canonical JSON.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import claims as cl
from .mod_core import giuga_residue
from .primality import is_prime

log = logging.getLogger(__name__)

CENSUS_ID = "giuga-census"
CENSUS_CEILING = 50_000
CHECKPOINT_FORMAT = 1
DEFAULT_CHUNK = 64


class CheckpointError(RuntimeError):
    pass


class DigestMismatch(CheckpointError):
    pass


class CorruptCheckpoint(CheckpointError):
    pass


class ScanInterrupted(RuntimeError):
    """Raised when a sweep stops early on request (``max_chunks``)."""

    def __init__(self, completed: int) -> None:
        super().__init__(f"sweep interrupted after {completed} new chunks")
        self.completed = completed


@dataclass(frozen=True)
class ScanConfig:
    claim_id: str
    n_lo: int
    n_hi: int
    k_policy: str = "auto"
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK
    checkpoint: Path | None = None
    output: Path | None = None
    force: bool = False

    def __post_init__(self) -> None:
        for name in ("checkpoint", "output"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, Path):
                object.__setattr__(self, name, Path(value))
        if self.n_lo > self.n_hi:
            raise ValueError(f"n_lo={self.n_lo} exceeds n_hi={self.n_hi}")
        if self.chunk_size < 1:
            raise ValueError("chunk size must be >= 1")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")
        if self.claim_id != CENSUS_ID:
            cl.get_claim(self.claim_id)
        cl.KPolicy.parse(self.k_policy)

    def identity(self) -> dict[str, Any]:
        # only fields that can change the result; paths and worker count excluded
        return {
            "claim_id": self.claim_id,
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "k_policy": self.k_policy,
            "chunk_size": self.chunk_size,
        }

    def digest(self) -> str:
        return _sha256(self.identity())

    def chunks(self) -> list[tuple[int, int]]:
        return [
            (lo, min(lo + self.chunk_size - 1, self.n_hi))
            for lo in range(self.n_lo, self.n_hi + 1, self.chunk_size)
        ]


@dataclass
class Checkpoint:
    digest: str
    config: dict[str, Any]
    results: dict[int, dict[str, Any]] = field(default_factory=dict)

    @property
    def completed(self) -> list[int]:
        return sorted(self.results)


@dataclass(frozen=True)
class GiugaCensus:
    """Composite and prime solutions of the Giuga congruence below ``bound``."""

    bound: int
    composite_satisfiers: tuple[int, ...]
    prime_satisfiers: int
    primes_checked: int

    @property
    def G(self) -> int:
        return len(self.composite_satisfiers)


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _sha256(obj: Any) -> str:
    return hashlib.sha256(_canonical(obj).encode()).hexdigest()


# -- chunk payloads (plain JSON-able dicts, so they survive checkpoints and pickling) --


def _violation_to_dict(v: cl.Violation) -> dict[str, Any]:
    d = asdict(v)
    for key in ("n", "k", "observed", "expected", "modulus", "j"):
        if d[key] is not None:
            d[key] = str(d[key])
    return d


def _violation_from_dict(d: dict[str, Any]) -> cl.Violation:
    d = dict(d)
    for key in ("n", "k", "observed", "expected", "modulus", "j"):
        if d[key] is not None:
            d[key] = int(d[key])
    return cl.Violation(**d)


def _claim_chunk(claim_id: str, lo: int, hi: int, policy: str, kernels: cl.Kernels) -> dict[str, Any]:
    res = cl.evaluate_chunk(claim_id, lo, hi, cl.KPolicy.parse(policy), kernels)
    return {
        "pairs": res.pairs,
        "skipped": res.skipped,
        "spot_checks": res.spot_checks,
        "violation_count": res.violation_count,
        "violations": [_violation_to_dict(v) for v in res.violations],
    }


def _census_chunk(lo: int, hi: int) -> dict[str, Any]:
    composite: list[int] = []
    prime_failures: list[int] = []
    prime_sat = primes = 0
    for n in range(lo, hi + 1):
        satisfied = giuga_residue(n).r == n - 1
        if is_prime(n):
            primes += 1
            if satisfied:
                prime_sat += 1
            else:
                prime_failures.append(n)
        elif satisfied:
            composite.append(n)
    return {
        "composite_satisfiers": composite,
        "prime_satisfiers": prime_sat,
        "primes": primes,
        "prime_failures": prime_failures,
    }


def _work(cfg_identity: dict[str, Any], lo: int, hi: int, kernels: cl.Kernels) -> dict[str, Any]:
    if cfg_identity["claim_id"] == CENSUS_ID:
        return _census_chunk(lo, hi)
    return _claim_chunk(cfg_identity["claim_id"], lo, hi, cfg_identity["k_policy"], kernels)


# -- checkpoint I/O -----------------------------------------------------------------


def _chunk_record(index: int, lo: int, hi: int, payload: dict[str, Any]) -> str:
    body = {"index": index, "n_lo": lo, "n_hi": hi, "payload": payload}
    return _canonical({"type": "chunk", **body, "checksum": _sha256(body)})


def _write_header(path: Path, cfg: ScanConfig) -> None:
    header = {
        "type": "header",
        "format": CHECKPOINT_FORMAT,
        "digest": cfg.digest(),
        "config": cfg.identity(),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_canonical(header) + "\n")


def _append_record(path: Path, line: str) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def load_checkpoint(path: str | Path) -> Checkpoint:
    """Read a checkpoint, verifying every record's checksum.

    A final line without its newline is a record torn by an interrupted write
    and is ignored; any other malformed or mismatching record is an error.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    elif lines:
        log.warning("checkpoint %s: dropping torn final record", path)
        lines.pop()
    if not lines:
        raise CorruptCheckpoint(f"{path}: missing header")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorruptCheckpoint(f"{path}: unreadable header ({exc})") from None
    if header.get("type") != "header" or header.get("format") != CHECKPOINT_FORMAT:
        raise CorruptCheckpoint(f"{path}: not a version-{CHECKPOINT_FORMAT} checkpoint header")
    if _sha256(header["config"]) != header["digest"]:
        raise CorruptCheckpoint(f"{path}: header digest does not match its config")
    ckpt = Checkpoint(header["digest"], header["config"])
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(line)
            body = {key: rec[key] for key in ("index", "n_lo", "n_hi", "payload")}
            checksum = rec["checksum"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CorruptCheckpoint(f"{path}:{lineno}: malformed record ({exc})") from None
        if _sha256(body) != checksum:
            raise CorruptCheckpoint(f"{path}:{lineno}: checksum mismatch")
        ckpt.results[body["index"]] = body["payload"]
    return ckpt


def config_from_checkpoint(ckpt: Checkpoint, **overrides: Any) -> ScanConfig:
    return ScanConfig(**{**ckpt.config, **overrides})


# -- execution ---------------------------------------------------------------------


def _budget(cfg: ScanConfig) -> None:
    if cfg.claim_id == CENSUS_ID:
        if cfg.n_hi >= CENSUS_CEILING:
            if cl.ceiling_overridden(cfg.force):
                log.warning("census bound %d exceeds ceiling %d; running anyway", cfg.n_hi + 1, CENSUS_CEILING)
            else:
                raise cl.BudgetExceeded(
                    f"census bound {cfg.n_hi + 1} exceeds ceiling {CENSUS_CEILING} "
                    f"(set {cl.CEILING_ENV}=1 or pass force to override)"
                )
        return
    d = cl.get_claim(cfg.claim_id)
    cl.enforce_budget(d, cfg.n_hi, cl.KPolicy.parse(cfg.k_policy), cfg.force)


def _execute(
    cfg: ScanConfig,
    done: dict[int, dict[str, Any]],
    kernels: cl.Kernels,
    max_chunks: int | None,
    on_result: Callable[[int, dict[str, Any]], None],
) -> None:
    chunks = cfg.chunks()
    todo = [i for i in range(len(chunks)) if i not in done]
    ident = cfg.identity()
    forced = cfg.claim_id != CENSUS_ID and cl.get_claim(cfg.claim_id).kind == cl.FORCED
    finished = 0

    def accept(index: int, payload: dict[str, Any]) -> bool:
        nonlocal finished
        done[index] = payload
        on_result(index, payload)
        finished += 1
        if forced and payload["violation_count"]:
            return True
        if max_chunks is not None and finished >= max_chunks and len(done) < len(chunks):
            raise ScanInterrupted(finished)
        return False

    if cfg.workers == 1:
        for i in todo:
            lo, hi = chunks[i]
            if accept(i, _work(ident, lo, hi, kernels)):
                return
        return

    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        pending = {pool.submit(_work, ident, *chunks[i], kernels): i for i in todo}
        try:
            while pending:
                completed, _ = wait(pending, return_when=FIRST_COMPLETED)
                # fold in index order so checkpoint contents do not depend on timing
                for fut in sorted(completed, key=pending.__getitem__):
                    i = pending.pop(fut)
                    if accept(i, fut.result()):
                        return
        finally:
            for fut in pending:
                fut.cancel()


def _run(
    cfg: ScanConfig, ckpt: Checkpoint | None, kernels: cl.Kernels, max_chunks: int | None
) -> dict[int, dict[str, Any]]:
    _budget(cfg)
    done: dict[int, dict[str, Any]] = dict(ckpt.results) if ckpt else {}
    path = cfg.checkpoint
    if path is not None and ckpt is None:
        _write_header(path, cfg)
    chunks = cfg.chunks()

    def on_result(index: int, payload: dict[str, Any]) -> None:
        if path is not None:
            _append_record(path, _chunk_record(index, *chunks[index], payload))

    _execute(cfg, done, kernels, max_chunks, on_result)
    return done


def _claim_report(cfg: ScanConfig, done: dict[int, dict[str, Any]], started: float) -> cl.ClaimReport:
    total = cl.ChunkResult()
    for i in sorted(done):
        p = done[i]
        total.add(
            cl.ChunkResult(
                p["pairs"],
                p["skipped"],
                p["spot_checks"],
                p["violation_count"],
                [_violation_from_dict(v) for v in p["violations"]],
            )
        )
    policy = cl.KPolicy.parse(cfg.k_policy)
    report = cl.new_report(cfg.claim_id, cfg.n_lo, cfg.n_hi, policy)
    cl.finish_report(report, total, started)
    if report.kind == cl.FORCED and report.violation_count:
        raise cl.ForcedIdentityViolation(report)
    return report


def _census(cfg: ScanConfig, done: dict[int, dict[str, Any]]) -> GiugaCensus:
    composite: list[int] = []
    failures: list[int] = []
    prime_sat = primes = 0
    for i in sorted(done):
        p = done[i]
        composite.extend(p["composite_satisfiers"])
        failures.extend(p["prime_failures"])
        prime_sat += p["prime_satisfiers"]
        primes += p["primes"]
    if failures:
        raise cl.ImplementationBug(f"primes failing the Fermat direction: {failures[:10]}")
    return GiugaCensus(cfg.n_hi + 1, tuple(composite), prime_sat, primes)


def sweep(
    cfg: ScanConfig, *, kernels: cl.Kernels = cl.DEFAULT_KERNELS, max_chunks: int | None = None
) -> cl.ClaimReport:
    """Run a claim over the configured range; starts a fresh checkpoint if one is configured.

    ``max_chunks`` stops after that many chunks (raising ScanInterrupted), which
    is how interruption is simulated.
    """
    if cfg.claim_id == CENSUS_ID:
        raise ValueError("use giuga_census() for the census")
    started = time.perf_counter()
    return _claim_report(cfg, _run(cfg, None, kernels, max_chunks), started)


def _matching_checkpoint(checkpoint: Checkpoint | str | Path, cfg: ScanConfig) -> Checkpoint:
    ckpt = checkpoint if isinstance(checkpoint, Checkpoint) else load_checkpoint(checkpoint)
    if ckpt.digest != cfg.digest():
        raise DigestMismatch(f"checkpoint digest {ckpt.digest[:12]} does not match config {cfg.digest()[:12]}")
    return ckpt


def resume(
    checkpoint: Checkpoint | str | Path,
    cfg: ScanConfig,
    *,
    kernels: cl.Kernels = cl.DEFAULT_KERNELS,
    max_chunks: int | None = None,
) -> cl.ClaimReport | GiugaCensus:
    """Finish the chunks a checkpoint is missing; the result equals an uninterrupted run."""
    ckpt = _matching_checkpoint(checkpoint, cfg)
    started = time.perf_counter()
    done = _run(cfg, ckpt, kernels, max_chunks)
    if cfg.claim_id == CENSUS_ID:
        return _census(cfg, done)
    return _claim_report(cfg, done, started)


def census_config(x: int, **kw: Any) -> ScanConfig:
    if x < 3:
        raise ValueError(f"census bound must be >= 3, got {x}")
    return ScanConfig(CENSUS_ID, 2, x - 1, "all", **kw)


def giuga_census(
    x: int,
    *,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
    checkpoint: str | Path | None = None,
    force: bool = False,
    max_chunks: int | None = None,
) -> GiugaCensus:
    """Classify every n < x by the Giuga congruence and by primality."""
    cfg = census_config(
        x,
        workers=workers,
        chunk_size=chunk_size,
        checkpoint=Path(checkpoint) if checkpoint else None,
        force=force,
    )
    return _census(cfg, _run(cfg, None, cl.DEFAULT_KERNELS, max_chunks))
