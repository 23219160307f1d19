"""Thread-count policy; WIGX_THREADS caps intra-library parallelism."""

from __future__ import annotations

import os


def max_threads() -> int:
    """Worker cap from the WIGX_THREADS environment variable (default 1)."""
    raw = os.environ.get("WIGX_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
