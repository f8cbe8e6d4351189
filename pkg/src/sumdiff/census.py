"""Exhaustive census of sum-dominance over all subsets of [0, n-1].

A subset is encoded as an n-bit mask. Shard ``s`` of ``S`` owns the masks
congruent to ``s`` mod ``S``, so shards need no coordination and any shard
can be resumed from a single ``next_mask`` value. Tallies merge by addition,
so the result is independent of the shard count.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Optional

from .errors import CheckpointInvalid, InternalError, InvalidArgument
from .intset import IntSet, mask_cards

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "sumdiff-census-checkpoint/1"
DEFAULT_MAX_N = 28
DEFAULT_WITNESS_CAP = 10_000
DEFAULT_CHECKPOINT_EVERY = 1 << 30


@dataclass
class KTally:
    total: int = 0
    sum_dominant: int = 0
    balanced: int = 0
    diff_dominant: int = 0

    def add(self, other: "KTally") -> None:
        self.total += other.total
        self.sum_dominant += other.sum_dominant
        self.balanced += other.balanced
        self.diff_dominant += other.diff_dominant

    def as_list(self) -> list[int]:
        return [self.total, self.sum_dominant, self.balanced, self.diff_dominant]


@dataclass
class ShardState:
    """Progress of one shard. ``next_mask`` is the first mask not yet tallied."""

    n: int
    k: Optional[int]
    shards: int
    shard_index: int
    next_mask: int
    per_k: list[KTally]
    witnesses: list[int] = field(default_factory=list)
    witness_cap: int = DEFAULT_WITNESS_CAP

    @classmethod
    def fresh(cls, n: int, k: Optional[int], shards: int, shard_index: int, witness_cap: int) -> "ShardState":
        return cls(n, k, shards, shard_index, shard_index, [KTally() for _ in range(n + 1)], [], witness_cap)

    @property
    def done(self) -> bool:
        return self.next_mask >= (1 << self.n)

    def to_json(self) -> dict:
        return {
            "format": CHECKPOINT_FORMAT,
            "n": self.n,
            "k": self.k,
            "shards": self.shards,
            "shard_index": self.shard_index,
            "next_mask": self.next_mask,
            "per_k": [t.as_list() for t in self.per_k],
            "witnesses": self.witnesses,
            "witness_cap": self.witness_cap,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ShardState":
        try:
            per_k = [KTally(*row) for row in data["per_k"]]
            return cls(
                n=data["n"],
                k=data["k"],
                shards=data["shards"],
                shard_index=data["shard_index"],
                next_mask=data["next_mask"],
                per_k=per_k,
                witnesses=list(data["witnesses"]),
                witness_cap=data["witness_cap"],
            )
        except (KeyError, TypeError) as exc:
            raise CheckpointInvalid(f"checkpoint missing or malformed field: {exc}") from None


@dataclass
class CensusResult:
    n: int
    k: Optional[int]
    per_k: dict[int, KTally]
    f_n: int
    witnesses: list[IntSet]
    witnesses_truncated: bool
    shards: int
    exhaustive: bool
    elapsed: float = 0.0
    resumed: bool = False

    def f(self, k: int) -> int:
        return self.per_k[k].sum_dominant

    def payload(self) -> dict:
        """Deterministic JSON payload. Timing and resume lineage are left out on purpose."""
        return {
            "n": self.n,
            "k_filter": self.k,
            "f_n": self.f_n,
            "per_k": [
                {"k": k, "total": t.total, "sum_dominant": t.sum_dominant, "balanced": t.balanced,
                 "diff_dominant": t.diff_dominant}
                for k, t in sorted(self.per_k.items())
            ],
            "witnesses": [list(w.elements) for w in self.witnesses],
            "witnesses_truncated": self.witnesses_truncated,
            "shards": self.shards,
            "exhaustive": self.exhaustive,
            "note": "finite-n evaluation; no limit is asserted",
        }

    def csv_rows(self) -> list[list[int]]:
        return [[k, *t.as_list()] for k, t in sorted(self.per_k.items())]


# --------------------------------------------------------------- checkpoint

def _digest(body: dict) -> str:
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def write_checkpoint(state: ShardState, path: os.PathLike) -> None:
    """Atomically replace ``path`` with the serialized state (temp file + rename)."""
    path = Path(path)
    body = state.to_json()
    text = json.dumps({"body": body, "sha256": _digest(body)}, sort_keys=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_checkpoint(path: os.PathLike) -> ShardState:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CheckpointInvalid(f"cannot read checkpoint {path}: {exc}") from None
    if not text.strip():
        raise CheckpointInvalid(f"checkpoint {path} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckpointInvalid(f"checkpoint {path} is not valid JSON ({exc.msg}); truncated?") from None
    if not isinstance(doc, dict) or "body" not in doc or "sha256" not in doc:
        raise CheckpointInvalid(f"checkpoint {path} lacks body/digest")
    body = doc["body"]
    if not isinstance(body, dict) or body.get("format") != CHECKPOINT_FORMAT:
        got = body.get("format") if isinstance(body, dict) else None
        raise CheckpointInvalid(f"checkpoint format {got!r} does not match {CHECKPOINT_FORMAT!r}")
    if _digest(body) != doc["sha256"]:
        raise CheckpointInvalid(f"checkpoint {path} failed its digest check")
    return ShardState.from_json(body)


def shard_checkpoint_path(path: os.PathLike, shard_index: int, shards: int) -> Path:
    path = Path(path)
    if shards == 1:
        return path
    return path.with_name(f"{path.name}.{shard_index}-of-{shards}")


def _validate_resume(state: ShardState, n: int, k: Optional[int], shards: int, shard_index: int) -> None:
    expected = {"n": n, "k": k, "shards": shards, "shard_index": shard_index}
    got = {"n": state.n, "k": state.k, "shards": state.shards, "shard_index": state.shard_index}
    if got != expected:
        raise CheckpointInvalid(f"checkpoint was written for {got}, this run is {expected}")
    if state.next_mask % shards != shard_index or len(state.per_k) != n + 1:
        raise CheckpointInvalid("checkpoint progress is inconsistent with its shard spec")


# ------------------------------------------------------------------- kernel

def run_shard(
    state: ShardState,
    checkpoint: Optional[os.PathLike] = None,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    stop_after: Optional[int] = None,
    deadline: Optional[float] = None,
) -> ShardState:
    """Advance ``state`` in place until the shard is finished or a stop condition fires.

    ``stop_after`` caps the number of masks visited in this call; ``deadline``
    is a ``time.monotonic()`` value. Either way a checkpoint is written before
    returning if a path was given.
    """
    end = 1 << state.n
    step = state.shards
    k_filter = state.k
    per_k = state.per_k
    witnesses = state.witnesses
    cap = state.witness_cap
    mask = state.next_mask
    visited = 0
    since_ckpt = 0
    try:
        while mask < end:
            if stop_after is not None and visited >= stop_after:
                break
            if deadline is not None and (visited & 0xFFF) == 0 and time.monotonic() > deadline:
                break
            k = mask.bit_count()
            if k_filter is None or k == k_filter:
                tally = per_k[k]
                tally.total += 1
                if k < 2:
                    tally.balanced += 1
                else:
                    s, d = mask_cards(mask)
                    if s > d:
                        tally.sum_dominant += 1
                        if len(witnesses) < cap:
                            witnesses.append(mask)
                    elif s == d:
                        tally.balanced += 1
                    else:
                        tally.diff_dominant += 1
            mask += step
            visited += 1
            since_ckpt += 1
            if checkpoint is not None and since_ckpt >= checkpoint_every:
                state.next_mask = mask
                write_checkpoint(state, checkpoint)
                since_ckpt = 0
    finally:
        state.next_mask = mask
        if checkpoint is not None:
            write_checkpoint(state, checkpoint)
    return state


def _run_shard_job(args) -> ShardState:
    state, ckpt, every, stop_after, deadline = args
    return run_shard(state, ckpt, every, stop_after, deadline)


def merge_states(states: list[ShardState], witness_cap: int) -> tuple[dict[int, KTally], list[int], bool]:
    """Sum tallies and pick the first ``witness_cap`` witnesses in mask order."""
    n = states[0].n
    per_k = {k: KTally() for k in range(n + 1)}
    masks = []
    truncated = False
    for st in states:
        for k, t in enumerate(st.per_k):
            per_k[k].add(t)
        masks.extend(st.witnesses)
        if st.per_k and sum(t.sum_dominant for t in st.per_k) > len(st.witnesses):
            truncated = True
    masks.sort()
    if len(masks) > witness_cap:
        truncated = True
    return per_k, masks[:witness_cap], truncated


def census(
    n: int,
    k: Optional[int] = None,
    shards: int = 1,
    shard_indices: Optional[list[int]] = None,
    workers: int = 1,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    checkpoint: Optional[os.PathLike] = None,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    stop_after: Optional[int] = None,
    time_cap: Optional[float] = None,
    max_n: int = DEFAULT_MAX_N,
) -> CensusResult:
    """Classify every subset of ``[0, n-1]`` (or only those of size ``k``).

    With ``checkpoint`` set, each shard resumes from its checkpoint file if
    one exists. ``stop_after`` (masks per shard) and ``time_cap`` (seconds)
    interrupt the run early; the result is then marked non-exhaustive.
    """
    if n < 1:
        raise InvalidArgument("census needs n >= 1")
    if n > max_n:
        raise InvalidArgument(
            f"n={n} exceeds the configured maximum {max_n}; 2^{n} subsets would take too long. "
            f"Raise max_n (--max-n) deliberately, use --k to take one slice, or shard across machines with --shard-index."
        )
    if k is not None and not 0 <= k <= n:
        raise InvalidArgument(f"k={k} must lie in [0, {n}]")
    if shards < 1:
        raise InvalidArgument("shards must be positive")
    indices = list(range(shards)) if shard_indices is None else sorted(set(shard_indices))
    if any(not 0 <= i < shards for i in indices):
        raise InvalidArgument(f"shard indices must lie in [0, {shards})")
    if witness_cap < 0:
        raise InvalidArgument("witness cap must be nonnegative")

    start = time.monotonic()
    deadline = start + time_cap if time_cap is not None else None
    states = []
    resumed = False
    for i in indices:
        path = shard_checkpoint_path(checkpoint, i, shards) if checkpoint is not None else None
        if path is not None and path.exists():
            st = read_checkpoint(path)
            _validate_resume(st, n, k, shards, i)
            st.witness_cap = witness_cap
            resumed = True
            log.info("resuming shard %d/%d at mask %d", i, shards, st.next_mask)
        else:
            st = ShardState.fresh(n, k, shards, i, witness_cap)
        states.append((st, path))

    jobs = [(st, path, checkpoint_every, stop_after, deadline) for st, path in states]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            finished = list(pool.map(_run_shard_job, jobs))
    else:
        finished = [_run_shard_job(j) for j in jobs]

    per_k, masks, truncated = merge_states(finished, witness_cap)
    exhaustive = len(indices) == shards and all(st.done for st in finished)
    if k is not None:
        per_k = {kk: t for kk, t in per_k.items() if kk == k}
    result = CensusResult(
        n=n,
        k=k,
        per_k=per_k,
        f_n=sum(t.sum_dominant for t in per_k.values()),
        witnesses=[IntSet.from_mask(m) for m in masks],
        witnesses_truncated=truncated,
        shards=shards,
        exhaustive=exhaustive,
        elapsed=time.monotonic() - start,
        resumed=resumed,
    )
    if exhaustive:
        _check_totals(result)
    return result


def _check_totals(result: CensusResult) -> None:
    for k, t in result.per_k.items():
        if t.total != comb(result.n, k) or t.total != t.sum_dominant + t.balanced + t.diff_dominant:
            raise InternalError(f"census tally for k={k} is inconsistent: {t}")


def census_pairs(n: int) -> dict[int, KTally]:
    """Reference census through pair enumeration on :class:`IntSet` (small n only)."""
    from .mstd import SdClass, classify_pairs

    out = {}
    for k in range(n + 1):
        tally = KTally()
        for combo in combinations(range(n), k):
            tally.total += 1
            cls = classify_pairs(IntSet(combo))
            if cls is SdClass.SUM_DOMINANT:
                tally.sum_dominant += 1
            elif cls is SdClass.BALANCED:
                tally.balanced += 1
            else:
                tally.diff_dominant += 1
        out[k] = tally
    return out
