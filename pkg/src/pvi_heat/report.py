"""Check reports and their JSON form."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass

from .checks import CHECKS
from .forms import Theta
from .pipeline import CertificationError

FIELDS = ("check_name", "status", "detail", "witness_digest", "elapsed_ms")


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    status: str  # pass | fail | error
    detail: str
    witness_digest: str
    elapsed_ms: int

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in FIELDS}


def witness_digest(witnesses: dict) -> str:
    h = hashlib.sha256()
    for label in sorted(witnesses):
        h.update(f"{label}={witnesses[label]}\n".encode())
    return h.hexdigest()


def run_check(name: str, theta: Theta, seed: int = 0) -> CheckReport:
    start = time.perf_counter()
    try:
        ok, detail, witnesses = CHECKS[name](theta, random.Random(seed))
        status, digest = ("pass" if ok else "fail"), witness_digest(witnesses)
    except CertificationError as exc:
        status, detail, digest = "fail", str(exc), witness_digest({})
    except Exception as exc:  # reported, not raised: the run must cover every check
        status, detail, digest = "error", f"{type(exc).__name__}: {exc}", witness_digest({})
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return CheckReport(name, status, detail, digest, elapsed)


def reports_to_json(reports) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, ensure_ascii=False) + "\n"
