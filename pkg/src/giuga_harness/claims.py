"""Registry of checkable statements about the Wilson/Giuga interpolation family.

Each claim is a predicate over n (and k where it applies). Claims come in two
kinds:

* ``forced-identity``: the argument behind it uses only operations that are
  valid modulo any n. A violation means our kernels are wrong, so checking
  stops and raises :class:`ForcedIdentityViolation`.
* ``under-test``: the argument divides residues by factors that need not be
  invertible when n is composite. Violations are findings; they are
  collected and the run continues.

Claims whose variable is ``k`` alone (the binomial identities) read the
requested n-range as a k-range.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from . import exact_core as ex
from . import mod_core as mc
from .primality import is_prime

log = logging.getLogger(__name__)

FORCED = "forced-identity"
UNDER_TEST = "under-test"

CONFIRMED = "confirmed-on-range"
VIOLATED = "violated"
SKIPPED = "skipped"

MAX_STORED_VIOLATIONS = 100
SPOT_CHECK_MAX_N = 60
CEILING_ENV = "GIUGA_HARNESS_NO_CEILING"


class UnknownClaimError(KeyError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class ImplementationBug(AssertionError):
    """Modular and exact paths disagree on a spot check."""


class ForcedIdentityViolation(RuntimeError):
    """A forced identity failed; carries the (partial) report."""

    def __init__(self, report: ClaimReport) -> None:
        first = report.violations[0]
        super().__init__(f"forced identity {report.claim_id!r} violated at n={first.n}, k={first.k}")
        self.report = report


# -- k policies ----------------------------------------------------------------


@dataclass(frozen=True)
class KPolicy:
    """Which k to examine for each n.

    ``all``: every k in the claim's domain. ``set``: the fixed values in
    ``ks`` plus ``k = n - d`` for each ``d`` in ``offsets``. ``auto``: ``all``
    up to ``auto_all_limit``, then k in 1..5 plus the band n-5..n-1.
    """

    kind: str = "auto"
    ks: tuple[int, ...] = ()
    offsets: tuple[int, ...] = ()
    auto_all_limit: int = 200

    def __post_init__(self) -> None:
        if self.kind not in ("all", "set", "auto"):
            raise ValueError(f"unknown k-policy kind {self.kind!r}")
        if self.kind == "set" and not (self.ks or self.offsets):
            raise ValueError("k-policy 'set' needs fixed k values or band offsets")

    @classmethod
    def all(cls) -> KPolicy:
        return cls("all")

    @classmethod
    def fixed(cls, *ks: int) -> KPolicy:
        return cls("set", ks=tuple(sorted(set(ks))))

    @classmethod
    def band(cls, *offsets: int) -> KPolicy:
        return cls("set", offsets=tuple(sorted(set(offsets))))

    @classmethod
    def parse(cls, text: str) -> KPolicy:
        """Parse ``all``, ``auto``, ``fixed:2,3``, ``band:2,3`` or ``fixed:..+band:..``."""
        text = text.strip()
        if text in ("all", "auto"):
            return cls(text)
        ks: tuple[int, ...] = ()
        offsets: tuple[int, ...] = ()
        for part in text.split("+"):
            name, _, values = part.partition(":")
            try:
                nums = tuple(sorted({int(v) for v in values.split(",") if v.strip()}))
            except ValueError:
                raise ValueError(f"bad k-policy {text!r}") from None
            if name == "fixed":
                ks = nums
            elif name == "band":
                offsets = nums
            else:
                raise ValueError(f"bad k-policy {text!r}")
        return cls("set", ks=ks, offsets=offsets)

    def __str__(self) -> str:
        if self.kind != "set":
            return self.kind
        parts = []
        if self.ks:
            parts.append("fixed:" + ",".join(map(str, self.ks)))
        if self.offsets:
            parts.append("band:" + ",".join(map(str, self.offsets)))
        return "+".join(parts)

    def select(self, n: int, lo: int, hi: int) -> tuple[list[int], int]:
        """In-domain k values for this n, and how many requested k were out of domain."""
        kind = self.kind
        if kind == "auto":
            if n <= self.auto_all_limit:
                kind = "all"
            else:
                wanted = set(range(1, 6)) | {n - d for d in range(1, 6)}
                chosen = sorted(k for k in wanted if lo <= k <= hi)
                return chosen, len(wanted) - len(chosen)
        if kind == "all":
            if lo > hi:
                return [], 1
            return list(range(lo, hi + 1)), 0
        wanted = set(self.ks) | {n - d for d in self.offsets}
        chosen = sorted(k for k in wanted if lo <= k <= hi)
        return chosen, len(wanted) - len(chosen)


# -- records -------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """A reproducible counterexample.

    ``relation`` is what the claim required of ``observed`` against
    ``expected``: ``eq``, ``ne`` or ``lt``. ``modulus`` is set when both are
    residues. ``j`` is an inner index for claims that quantify over one.
    """

    claim_id: str
    n: int | None
    k: int | None
    observed: int
    expected: int
    relation: str = "eq"
    modulus: int | None = None
    path: str = "modular"
    j: int | None = None

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (self.n or 0, self.k or 0, self.j or 0)

    def holds(self) -> bool:
        return _relation_holds(self.relation, self.observed, self.expected)


def _key(v: Violation) -> tuple[int, int, int]:
    return v.sort_key


def _relation_holds(relation: str, observed: int, expected: int) -> bool:
    if relation == "eq":
        return observed == expected
    if relation == "ne":
        return observed != expected
    if relation == "lt":
        return observed < expected
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class ClaimReport:
    claim_id: str
    kind: str
    n_lo: int
    n_hi: int
    k_policy: str
    pairs_checked: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: list[Violation] = field(default_factory=list)
    spot_checks: int = 0
    status: str = "ok"
    wall_time_ms: int = field(default=0, compare=False)

    @property
    def verdict(self) -> str:
        if self.violation_count:
            return VIOLATED
        if not self.pairs_checked:
            return SKIPPED
        return CONFIRMED


@dataclass
class ChunkResult:
    """Outcome of evaluating one claim over a contiguous n-range."""

    pairs: int = 0
    skipped: int = 0
    spot_checks: int = 0
    violation_count: int = 0
    violations: list[Violation] = field(default_factory=list)

    def add(self, other: ChunkResult) -> None:
        self.pairs += other.pairs
        self.skipped += other.skipped
        self.spot_checks += other.spot_checks
        self.violation_count += other.violation_count
        room = MAX_STORED_VIOLATIONS - len(self.violations)
        if room > 0:
            self.violations.extend(other.violations[:room])


# -- kernels (replaceable for fault-injection tests) -------------------------------


@dataclass(frozen=True)
class Kernels:
    H_mod: Callable[[int, int], mc.Residue] = mc.H_mod
    H_mod_full: Callable[[int, int], mc.Residue] = mc.H_mod_full
    U_mod: Callable[[int, int], mc.Residue] = mc.U_mod
    wilson_residue: Callable[[int], mc.Residue] = mc.wilson_residue
    giuga_residue: Callable[[int], mc.Residue] = mc.giuga_residue


DEFAULT_KERNELS = Kernels()


# -- claim definitions ---------------------------------------------------------------


@dataclass(frozen=True)
class ClaimDescriptor:
    id: str
    statement: str
    kind: str
    domain: str
    anchor: str
    variable: str  # "n", "n,k" or "k"
    path: str  # "modular" or "exact"
    n_min: int
    k_bounds: Callable[[int], tuple[int, int]] | None = field(default=None, repr=False, compare=False)
    ceiling: int = 400
    search_ceiling: int = 500

    @property
    def congruence(self) -> bool:
        return self.path == "modular"


def _k_to(offset: int, lo: int = 1) -> Callable[[int], tuple[int, int]]:
    return lambda n: (lo, n - offset)


_REGISTRY: dict[str, ClaimDescriptor] = {}


def _register(**kw) -> None:
    d = ClaimDescriptor(**kw)
    if d.id in _REGISTRY:
        raise ValueError(f"duplicate claim id {d.id}")
    if d.kind not in (FORCED, UNDER_TEST):
        raise ValueError(f"bad kind for {d.id}")
    _REGISTRY[d.id] = d


_register(
    id="wilson",
    statement="n is prime iff n divides 1 + (n-1)!",
    kind=FORCED,
    domain="n >= 2",
    anchor="Wilson's theorem: n in P <=> n | f_W(n)",
    variable="n",
    path="modular",
    n_min=2,
    ceiling=200_000,
    search_ceiling=5000,
)
_register(
    id="sierpinski",
    statement="every prime p satisfies 1^(p-1) + ... + (p-1)^(p-1) = -1 (mod p)",
    kind=FORCED,
    domain="n >= 2 prime (composites skipped)",
    anchor="Fermat direction of Giuga: sum_{j=1}^{p-1} j^{p-1} = -1 (mod p)",
    variable="n",
    path="modular",
    n_min=2,
    ceiling=50_000,
    search_ceiling=5000,
)
_register(
    id="giuga",
    statement="n is prime iff n divides 1 + S_{n-1}(n)",
    kind=UNDER_TEST,
    domain="n >= 2",
    anchor="Giuga's conjecture: n in P <=> n | f_G(n)",
    variable="n",
    path="modular",
    n_min=2,
    ceiling=50_000,
    search_ceiling=5000,
)
_register(
    id="lemma-h1",
    statement="n is prime iff n divides H_1(n)",
    kind=FORCED,
    domain="n >= 2",
    anchor="H_1 lemma: n in P <=> n | H_1(n), via H_1(n) = f_W(n) (mod n)",
    variable="n",
    path="modular",
    n_min=2,
    ceiling=200_000,
    search_ceiling=5000,
)
_register(
    id="lemma-h2",
    statement="n is prime iff n divides H_2(n)",
    kind=FORCED,
    domain="n >= 3",
    anchor="U_1 lemma consequence: H_2 also characterizes P",
    variable="n",
    path="modular",
    n_min=3,
    ceiling=200_000,
    search_ceiling=5000,
)
_register(
    id="conj-hk",
    statement=(
        "for n >= k+1: n is prime iff n divides H_k(n) "
        "(stated for k >= 2; checked from k = 1, where it is the H_1 lemma)"
    ),
    kind=UNDER_TEST,
    domain="1 <= k <= n-1",
    anchor="H_k conjecture: [n in P, n >= k+1] <=> n | H_k(n)",
    variable="n,k",
    path="modular",
    n_min=2,
    k_bounds=_k_to(1),
)
_register(
    id="cor-hk-h1",
    statement="H_k(n) = H_1(n) (mod n) for every 2 <= k <= n-1",
    kind=UNDER_TEST,
    domain="2 <= k <= n-1",
    anchor="corollary: H_{k+1}(n) = H_1(n) (mod n) for 1 <= k <= n-2",
    variable="n,k",
    path="modular",
    n_min=3,
    k_bounds=_k_to(1, lo=2),
)
_register(
    id="lemma-ordering",
    statement="H_k(n) < H_{k-1}(n) for 2 <= k <= n-1",
    kind=FORCED,
    domain="2 <= k <= n-1",
    anchor="ordering lemma: H_k(n) < H_{k-1}(n)",
    variable="n,k",
    path="exact",
    n_min=3,
    k_bounds=_k_to(1, lo=2),
    ceiling=500,
)
_register(
    id="remark-endpoint",
    statement="H_{n-1}(n) = f_G(n)",
    kind=FORCED,
    domain="n >= 2",
    anchor="endpoint remark: H_{n-1} = f_G",
    variable="n",
    path="exact",
    n_min=2,
    ceiling=2000,
)
_register(
    id="lemma-core",
    statement="H_k(n) = 1 + sum_{i=1}^{k} (n+i-1-k)!/i! * i^k (mod n)",
    kind=FORCED,
    domain="1 <= k <= n-1",
    anchor="core-part lemma: H_k(n) = 1 + sum_{i=1}^k (n+i-1-k)!/i! i^k (mod n)",
    variable="n,k",
    path="modular",
    n_min=2,
    k_bounds=_k_to(1),
)
_register(
    id="lemma-step",
    statement="H_{k+1}(n) = H_k(n) - (n-k-1) * sum_{i=1}^{n-1} (n+i-2-k)!/i! * i^k",
    kind=FORCED,
    domain="1 <= k <= n-2",
    anchor="step lemma: H_{k+1}(n) = H_k(n) - (n-k-1) sum_i (n+i-2-k)!/i! i^k",
    variable="n,k",
    path="exact",
    n_min=3,
    k_bounds=_k_to(2),
    ceiling=200,
)
_register(
    id="remark-ukcong",
    statement="H_{k+1}(n) - H_k(n) = (k+1) U_k(n) (mod n)",
    kind=FORCED,
    domain="1 <= k <= n-2",
    anchor="step remark: H_{k+1}(n) - H_k(n) = (k+1) U_k(n) (mod n)",
    variable="n,k",
    path="modular",
    n_min=3,
    k_bounds=_k_to(2),
)
_register(
    id="lemma-u1",
    statement="U_1(n) = (n-2)! + (n-1)! = 0 (mod n)",
    kind=FORCED,
    domain="n >= 3",
    anchor="U_1 lemma: U_1(n) = 0 (mod n)",
    variable="n",
    path="modular",
    n_min=3,
    ceiling=200_000,
    search_ceiling=5000,
)
_register(
    id="vk-identity",
    statement="V_k = (-1)^(k+1)",
    kind=FORCED,
    domain="k >= 1 (range read as k)",
    anchor="key theorem: V_k = (-1)^{k+1}",
    variable="k",
    path="exact",
    n_min=1,
    ceiling=2000,
)
_register(
    id="lemma-a",
    statement="sum_{i=0}^{k} C(k,i) k^i = (k+1)^k",
    kind=FORCED,
    domain="k >= 1 (range read as k)",
    anchor="binomial lemma: sum_{i=0}^k C(k,i) k^i = (k+1)^k",
    variable="k",
    path="exact",
    n_min=1,
    ceiling=2000,
)
_register(
    id="lemma-b",
    statement=(
        "sum_{i=0}^{k+1} (-1)^i C(k+1,i) i^k = 0; for k <= 50 also the (k+1)-fold "
        "forward difference of j^k vanishes at five base points and matches the sum"
    ),
    kind=FORCED,
    domain="k >= 1 (range read as k)",
    anchor="difference lemma: sum_{i=0}^{k+1} (-1)^i C(k+1,i) i^k = 0",
    variable="k",
    path="exact",
    n_min=1,
    ceiling=2000,
)
_register(
    id="factorial-chain",
    statement="(n-1-k+j)! = (-1)^j * a * k!/(k-j)! (mod n), a = (n-1-k)! mod n, 1 <= j <= k",
    kind=FORCED,
    domain="1 <= k <= n-2",
    anchor="central proof chain: (n-1-k+j)! = (-1)^j a k!/(k-j)! (mod n)",
    variable="n,k",
    path="modular",
    n_min=3,
    k_bounds=_k_to(2),
)
_register(
    id="thm-ukz",
    statement="U_k(n) = 0 (mod n) for 1 <= k <= n-2",
    kind=UNDER_TEST,
    domain="1 <= k <= n-2",
    anchor="central theorem: U_k(n) = 0 (mod n)",
    variable="n,k",
    path="modular",
    n_min=3,
    k_bounds=_k_to(2),
)


def list_claims() -> list[ClaimDescriptor]:
    return list(_REGISTRY.values())


def get_claim(claim_id: str) -> ClaimDescriptor:
    try:
        return _REGISTRY[claim_id]
    except KeyError:
        raise UnknownClaimError(claim_id) from None


# -- per-n evaluation ----------------------------------------------------------------


def _spot_check(n: int, k: int, kernels: Kernels) -> int:
    """Compare modular and exact paths at one pair; returns checks performed."""
    checks = 0
    if 1 <= k <= n - 1:
        if kernels.H_mod(k, n).r != ex.H(k, n) % n:
            raise ImplementationBug(f"H_mod disagrees with exact H at n={n}, k={k}")
        checks += 1
    if 1 <= k <= n - 2:
        if kernels.U_mod(k, n).r != ex.U(k, n) % n:
            raise ImplementationBug(f"U_mod disagrees with exact U at n={n}, k={k}")
        checks += 1
    return checks


def _characterizes(claim_id: str, n: int, residue: int, k: int | None) -> Violation | None:
    prime = is_prime(n)
    if prime == (residue == 0):
        return None
    return Violation(
        claim_id, n, k, residue, 0, relation="eq" if prime else "ne", modulus=n, path="modular"
    )


def _eval_k_free(d: ClaimDescriptor, n: int, kernels: Kernels) -> ChunkResult:
    res = ChunkResult()
    v: Violation | None = None
    cid = d.id
    if cid == "wilson":
        v = _characterizes(cid, n, kernels.wilson_residue(n).r, None)
    elif cid == "giuga":
        v = _characterizes(cid, n, (kernels.giuga_residue(n).r + 1) % n, None)
    elif cid == "sierpinski":
        if not is_prime(n):
            res.skipped = 1
            return res
        r = (kernels.giuga_residue(n).r + 1) % n
        if r:
            v = Violation(cid, n, None, r, 0, modulus=n)
    elif cid == "lemma-h1":
        v = _characterizes(cid, n, kernels.H_mod(1, n).r, 1)
    elif cid == "lemma-h2":
        v = _characterizes(cid, n, kernels.H_mod(2, n).r, 2)
    elif cid == "lemma-u1":
        r = kernels.U_mod(1, n).r
        if r:
            v = Violation(cid, n, 1, r, 0, modulus=n)
    elif cid == "remark-endpoint":
        h = ex.H(n - 1, n)
        g = ex.f_giuga(n)
        if h != g:
            v = Violation(cid, n, n - 1, h, g, path="exact")
    else:
        raise AssertionError(cid)
    res.pairs = 1
    if v is not None:
        res.violation_count = 1
        res.violations.append(v)
    return res


def _eval_k_only(d: ClaimDescriptor, k: int) -> ChunkResult:
    res = ChunkResult(pairs=1)
    found: list[Violation] = []
    cid = d.id
    if cid == "vk-identity":
        v, want = ex.V(k), (-1) ** (k + 1)
        if v != want:
            found.append(Violation(cid, None, k, v, want, path="exact"))
    elif cid == "lemma-a":
        s, want = ex.binomial_power_sum(k), (k + 1) ** k
        if s != want:
            found.append(Violation(cid, None, k, s, want, path="exact"))
    elif cid == "lemma-b":
        s = ex.alternating_power_sum(k)
        if s:
            found.append(Violation(cid, None, k, s, 0, path="exact"))
        if k <= 50:
            for idx, base in enumerate(_difference_bases(k)):
                samples = [(base + t) ** k for t in range(k + 2)]
                diff = ex.iterated_forward_difference(samples, k + 1)
                if diff:
                    found.append(Violation(cid, None, k, diff, 0, path="exact", j=idx + 1))
            at_neg = ex.iterated_forward_difference([(-(k + 1) + t) ** k for t in range(k + 2)])
            if s != (-1) ** k * at_neg:
                found.append(Violation(cid, None, k, s, (-1) ** k * at_neg, path="exact", j=0))
    else:
        raise AssertionError(cid)
    res.violation_count = len(found)
    res.violations.extend(found)
    return res


def _difference_bases(k: int) -> tuple[int, ...]:
    """Five distinct base points in [-(k+1), k+1]."""
    return (-(k + 1), -1, 0, 1, k + 1)


def _eval_pairs(d: ClaimDescriptor, n: int, ks: list[int], kernels: Kernels) -> list[Violation]:
    cid = d.id
    out: list[Violation] = []
    if cid == "conj-hk":
        for k in ks:
            v = _characterizes(cid, n, kernels.H_mod(k, n).r, k)
            if v:
                out.append(v)
    elif cid == "cor-hk-h1":
        h1 = kernels.H_mod(1, n).r
        for k in ks:
            r = kernels.H_mod(k, n).r
            if r != h1:
                out.append(Violation(cid, n, k, r, h1, modulus=n))
    elif cid == "thm-ukz":
        for k in ks:
            r = kernels.U_mod(k, n).r
            if r:
                out.append(Violation(cid, n, k, r, 0, modulus=n))
    elif cid == "lemma-core":
        for k in ks:
            a, b = kernels.H_mod(k, n).r, kernels.H_mod_full(k, n).r
            if a != b:
                out.append(Violation(cid, n, k, a, b, modulus=n))
    elif cid == "remark-ukcong":
        h = {k: kernels.H_mod(k, n).r for k in set(ks) | {k + 1 for k in ks}}
        for k in ks:
            lhs = (h[k + 1] - h[k]) % n
            rhs = (k + 1) * kernels.U_mod(k, n).r % n
            if lhs != rhs:
                out.append(Violation(cid, n, k, lhs, rhs, modulus=n))
    elif cid == "factorial-chain":
        fact = mc.factorials_mod(n)
        for k in ks:
            a = fact[n - 1 - k]
            falling = 1  # k!/(k-j)! mod n, built up one factor at a time
            for j in range(1, k + 1):
                falling = falling * (k - j + 1) % n
                rhs = (-1) ** j * a * falling % n
                lhs = fact[n - 1 - k + j]
                if lhs != rhs:
                    out.append(Violation(cid, n, k, lhs, rhs, modulus=n, j=j))
    elif cid == "lemma-ordering":
        row = ex.H_row(n)
        for k in ks:
            if not row[k - 1] < row[k - 2]:
                out.append(Violation(cid, n, k, row[k - 1], row[k - 2], relation="lt", path="exact"))
    elif cid == "lemma-step":
        row = ex.H_row(n)
        for k in ks:
            want = row[k - 1] - (n - k - 1) * ex.step_sum(k, n)
            if row[k] != want:
                out.append(Violation(cid, n, k, row[k], want, path="exact"))
    else:
        raise AssertionError(cid)
    return out


def evaluate_n(
    claim_id: str, n: int, policy: KPolicy, kernels: Kernels = DEFAULT_KERNELS, spot_check: bool = True
) -> ChunkResult:
    d = get_claim(claim_id)
    if d.variable == "k":
        return _eval_k_only(d, n)
    if n < d.n_min:
        return ChunkResult(skipped=1)
    if d.variable == "n":
        res = _eval_k_free(d, n, kernels)
        if spot_check and d.congruence and n <= SPOT_CHECK_MAX_N and n >= 3:
            res.spot_checks += _spot_check(n, 1 + (7 * n) % (n - 1), kernels)
        return res
    assert d.k_bounds is not None
    lo, hi = d.k_bounds(n)
    ks, skipped = policy.select(n, lo, hi)
    res = ChunkResult(pairs=len(ks), skipped=skipped)
    if not ks:
        return res
    found = _eval_pairs(d, n, ks, kernels)
    res.violation_count = len(found)
    res.violations = found[:MAX_STORED_VIOLATIONS]
    if spot_check and d.congruence and n <= SPOT_CHECK_MAX_N:
        res.spot_checks += _spot_check(n, ks[(7 * n) % len(ks)], kernels)
    return res


def evaluate_chunk(
    claim_id: str,
    n_lo: int,
    n_hi: int,
    policy: KPolicy,
    kernels: Kernels = DEFAULT_KERNELS,
    stop_on_violation: bool = False,
) -> ChunkResult:
    out = ChunkResult()
    for n in range(n_lo, n_hi + 1):
        out.add(evaluate_n(claim_id, n, policy, kernels))
        if stop_on_violation and out.violation_count:
            break
    return out


# -- budget ---------------------------------------------------------------------------


def ceiling_overridden(force: bool = False) -> bool:
    return force or os.environ.get(CEILING_ENV, "") not in ("", "0")


def enforce_budget(d: ClaimDescriptor, n_hi: int, policy: KPolicy, force: bool = False) -> None:
    ceiling = d.ceiling
    if d.variable == "n,k" and policy.kind == "set" and d.path == "modular":
        ceiling = 100_000
    if n_hi <= ceiling:
        return
    if ceiling_overridden(force):
        log.warning("claim %s: n_hi=%d exceeds cost ceiling %d; running anyway", d.id, n_hi, ceiling)
        return
    raise BudgetExceeded(
        f"claim {d.id}: n_hi={n_hi} exceeds cost ceiling {ceiling} for k-policy {policy} "
        f"(set {CEILING_ENV}=1 or pass force to override)"
    )


# -- public checking API --------------------------------------------------------------


def new_report(claim_id: str, n_lo: int, n_hi: int, policy: KPolicy) -> ClaimReport:
    d = get_claim(claim_id)
    return ClaimReport(claim_id, d.kind, n_lo, n_hi, str(policy) if d.variable == "n,k" else "-")


def finish_report(report: ClaimReport, total: ChunkResult, started: float) -> ClaimReport:
    report.pairs_checked = total.pairs
    report.skipped = total.skipped
    report.spot_checks = total.spot_checks
    report.violation_count = total.violation_count
    report.violations = sorted(total.violations, key=_key)[:MAX_STORED_VIOLATIONS]
    report.wall_time_ms = int((time.perf_counter() - started) * 1000)
    if report.violation_count:
        report.status = "implementation-bug" if report.kind == FORCED else "finding"
    return report


def check_claim(
    claim_id: str,
    n_range: tuple[int, int],
    k_policy: KPolicy | None = None,
    *,
    kernels: Kernels = DEFAULT_KERNELS,
    force: bool = False,
) -> ClaimReport:
    """Evaluate a claim at every in-domain pair of the range.

    Raises ForcedIdentityViolation (carrying the report) at the first n where
    a forced identity fails.
    """
    d = get_claim(claim_id)
    n_lo, n_hi = n_range
    if n_lo > n_hi:
        raise ValueError(f"empty range [{n_lo}, {n_hi}]")
    policy = k_policy or KPolicy()
    enforce_budget(d, n_hi, policy, force)
    started = time.perf_counter()
    report = new_report(claim_id, n_lo, n_hi, policy)
    total = evaluate_chunk(claim_id, n_lo, n_hi, policy, kernels, stop_on_violation=d.kind == FORCED)
    finish_report(report, total, started)
    if d.kind == FORCED and report.violation_count:
        raise ForcedIdentityViolation(report)
    return report


def first_violation(
    claim_id: str, ceiling: int | None = None, *, kernels: Kernels = DEFAULT_KERNELS
) -> Violation | None:
    """Least violating (n, k) in lexicographic order, scanning n up to the ceiling."""
    d = get_claim(claim_id)
    top = d.search_ceiling if ceiling is None else ceiling
    policy = KPolicy.all()
    for n in range(d.n_min, top + 1):
        res = evaluate_n(claim_id, n, policy, kernels)
        if res.violations:
            return min(res.violations, key=_key)
    return None


def characterization_test(
    member: str | int,
    n_range: tuple[int, int],
    *,
    kernels: Kernels = DEFAULT_KERNELS,
    force: bool = False,
) -> ClaimReport:
    """Compare divisibility of a family member against the primality oracle.

    ``member`` is ``"fW"``, ``"fG"`` or an integer k for H_k.
    """
    if member == "fW":
        claim_id, policy, k = "wilson", KPolicy(), 1
    elif member == "fG":
        claim_id, policy, k = "giuga", KPolicy(), 1
    elif isinstance(member, int) and member >= 1:
        k = member
        claim_id = {1: "lemma-h1", 2: "lemma-h2"}.get(k, "conj-hk")
        policy = KPolicy.fixed(k)
    else:
        raise ValueError(f"unknown family member {member!r}")
    if n_range[0] < max(2, k + 1):
        raise ValueError(f"range for this member must start at {max(2, k + 1)} or above")
    return check_claim(claim_id, n_range, policy, kernels=kernels, force=force)


OBSERVATION_POLICY = KPolicy("set", ks=(2, 3, 4, 5), offsets=(2, 3, 4, 5))


def reproduce_author_observation(n_max: int = 1000, *, kernels: Kernels = DEFAULT_KERNELS) -> ClaimReport:
    """k in {2,3,4,5} and k in {n-5, ..., n-2} for every n <= n_max."""
    return check_claim("conj-hk", (2, n_max), OBSERVATION_POLICY, kernels=kernels)


# -- replay ---------------------------------------------------------------------------


def _exact_pair(v: Violation) -> tuple[int, int]:
    """Observed and expected values of a violation, recomputed on the exact path."""
    cid, n, k = v.claim_id, v.n, v.k
    if cid == "wilson":
        return ex.f_wilson(n) % n, 0
    if cid in ("giuga", "sierpinski"):
        return ex.f_giuga(n) % n, 0
    if cid in ("lemma-h1", "lemma-h2", "conj-hk"):
        return ex.H(k, n) % n, 0
    if cid == "cor-hk-h1":
        return ex.H(k, n) % n, ex.H(1, n) % n
    if cid in ("thm-ukz", "lemma-u1"):
        return ex.U(k, n) % n, 0
    if cid == "lemma-core":
        full = 1 + sum(ex.falling_quotient(n, i, k) * i**k for i in range(1, n))
        core = 1 + sum(ex.falling_quotient(n, i, k) * i**k for i in range(1, k + 1))
        return core % n, full % n
    if cid == "remark-ukcong":
        return (ex.H(k + 1, n) - ex.H(k, n)) % n, (k + 1) * ex.U(k, n) % n
    if cid == "factorial-chain":
        j = v.j
        a = ex.factorial(n - 1 - k) % n
        rhs = (-1) ** j * a * ex.exact_div(ex.factorial(k), ex.factorial(k - j))
        return ex.factorial(n - 1 - k + j) % n, rhs % n
    if cid == "lemma-ordering":
        return ex.H(k, n), ex.H(k - 1, n)
    if cid == "lemma-step":
        return ex.H(k + 1, n), ex.H(k, n) - (n - k - 1) * ex.step_sum(k, n)
    if cid == "remark-endpoint":
        return ex.H(n - 1, n), ex.f_giuga(n)
    if cid == "vk-identity":
        return ex.V(k), (-1) ** (k + 1)
    if cid == "lemma-a":
        return ex.binomial_power_sum(k), (k + 1) ** k
    if cid == "lemma-b":
        s = ex.alternating_power_sum(k)
        if v.j is None:
            return s, 0
        if v.j == 0:
            at_neg = ex.iterated_forward_difference([(-(k + 1) + t) ** k for t in range(k + 2)])
            return s, (-1) ** k * at_neg
        base = _difference_bases(k)[v.j - 1]
        return ex.iterated_forward_difference([(base + t) ** k for t in range(k + 2)]), 0
    raise UnknownClaimError(cid)


def replay(v: Violation) -> bool:
    """True when the exact path reproduces the violation: same observed value, relation broken."""
    observed, expected = _exact_pair(v)
    return observed == v.observed and expected == v.expected and not _relation_holds(v.relation, observed, expected)


def with_kernels(**overrides) -> Kernels:
    return replace(DEFAULT_KERNELS, **overrides)


def iter_claim_ids(selection: str | Iterable[str]) -> list[str]:
    if isinstance(selection, str):
        if selection == "all":
            return list(_REGISTRY)
        selection = [s.strip() for s in selection.split(",") if s.strip()]
    ids = list(selection)
    for cid in ids:
        get_claim(cid)
    return ids
