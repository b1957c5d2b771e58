"""Enumeration caps shared by every module.

All exhaustive checks in the package are bounded by one of these caps. The
``PLONKA_CAP`` environment variable overrides the carrier cap at import time;
the CLI overrides any cap with ``--cap name=value``.
"""

from __future__ import annotations

import dataclasses
import os
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    atoms: int = 16           # atoms per Boolean component
    carrier: int = 64         # elements of a raw algebra / Plonka sum
    subsets: int = 20         # |B| bound for brute force over all subsets
    classes: int = 16         # zero-classes bound for enumerating all opens
    reg_table: int = 512      # regular opens bound for full operation tables
    inclusive_n: int = 3      # enumerate_inclusive chain length
    inclusive_k: int = 5      # enumerate_inclusive weight
    forest_oracle: int = 7    # vertices for the forest brute force


def _from_env() -> Caps:
    raw = os.environ.get("PLONKA_CAP")
    if raw:
        return Caps(carrier=int(raw))
    return Caps()


CAPS = _from_env()


def get_caps() -> Caps:
    return CAPS


def set_caps(**changes: int) -> Caps:
    """Replace the active caps; unknown names raise ``TypeError``."""
    global CAPS
    CAPS = dataclasses.replace(CAPS, **changes)
    return CAPS


@contextmanager
def caps_override(**changes: int):
    global CAPS
    saved = CAPS
    CAPS = dataclasses.replace(CAPS, **changes)
    try:
        yield CAPS
    finally:
        CAPS = saved
