"""Worker-count policy.

LOPACT_THREADS caps the number of workers; unset or invalid values fall
back to the machine's CPU count.  The library's computations are pure
functions of (inputs, seed) with counter-based randomness, so any schedule
over this many workers produces identical results; the current
implementations run sequentially, which trivially respects the cap.
"""
from __future__ import annotations

import os


def worker_count() -> int:
    raw = os.environ.get("LOPACT_THREADS")
    fallback = os.cpu_count() or 1
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        return fallback
    return max(1, min(value, fallback)) if value > 0 else fallback
