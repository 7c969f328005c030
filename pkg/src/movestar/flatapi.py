"""Flat, C-style session surface for host-simulator bindings.

Everything crosses this boundary as plain numbers and status codes: no
exceptions, no callbacks, no objects. Hosts hold an integer handle per
vehicle; independent handles share one immutable table set.

Status codes:
    0  OK
    1  bad input (negative speed, empty session)
    2  table problem (unknown vehicle code, unloadable tables)
    3  bad handle
"""

from __future__ import annotations

import threading

from .errors import CycleError, MovestarError, TableError
from .session import EmissionSession, session_create
from .tables import TableSet, load_tables_from_dir, resolve_tables_dir

OK = 0
ERR_INPUT = 1
ERR_TABLES = 2
ERR_HANDLE = 3

_lock = threading.Lock()
_sessions: dict[int, EmissionSession] = {}
_next_handle = 1
_shared_tables: TableSet | None = None


def _tables(tables_dir: str | None) -> TableSet:
    global _shared_tables
    if tables_dir is not None:
        return load_tables_from_dir(tables_dir)
    if _shared_tables is None:
        _shared_tables = load_tables_from_dir(resolve_tables_dir())
    return _shared_tables


def create(veh_type: int, tables_dir: str | None = None) -> tuple[int, int]:
    """Open a session. Returns (status, handle); handle is 0 on error."""
    global _next_handle
    try:
        tables = _tables(tables_dir)
        session = session_create(veh_type, tables)
    except (TableError, OSError):
        return ERR_TABLES, 0
    with _lock:
        handle = _next_handle
        _next_handle += 1
        _sessions[handle] = session
    return OK, handle


def step(handle: int, speed_mps: float) -> tuple[int, int, float, float, float, float, float]:
    """Advance one second. Returns (status, opmode, energy, CO, HC, NOx, CO2)."""
    session = _sessions.get(handle)
    if session is None:
        return ERR_HANDLE, -1, 0.0, 0.0, 0.0, 0.0, 0.0
    try:
        mode, vec = session.step(speed_mps)
    except CycleError:
        return ERR_INPUT, -1, 0.0, 0.0, 0.0, 0.0, 0.0
    return (OK, int(mode)) + vec.as_tuple()


def totals(handle: int) -> tuple[int, float, float, float, float, float, float]:
    """Running totals so far. Returns (status, distance_m, energy..CO2)."""
    session = _sessions.get(handle)
    if session is None:
        return ERR_HANDLE, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    return (OK, session.distance_m) + session.running_totals.as_tuple()


def finalize(handle: int) -> tuple[int, float, int, float, float, float, float, float,
                                   float, float, float, float, float]:
    """Close out a session (handle stays valid until destroy).

    Returns (status, distance_m, ef_defined,
             ER energy..CO2, EF energy..CO2 per km; EF zeros when undefined).
    """
    session = _sessions.get(handle)
    if session is None:
        return (ERR_HANDLE, 0.0, 0) + (0.0,) * 10
    try:
        result = session.finalize()
    except MovestarError:
        return (ERR_INPUT, 0.0, 0) + (0.0,) * 10
    ef = result.ef.as_tuple() if result.ef is not None else (0.0,) * 5
    return (OK, result.distance_m, int(result.ef is not None)) \
        + result.totals.as_tuple() + ef


def destroy(handle: int) -> int:
    """Release a handle. Idempotent; unknown handles report ERR_HANDLE."""
    with _lock:
        return OK if _sessions.pop(handle, None) is not None else ERR_HANDLE


def reset_shared_tables() -> None:
    """Drop the cached default table set (test hook)."""
    global _shared_tables
    _shared_tables = None


__all__ = ["OK", "ERR_INPUT", "ERR_TABLES", "ERR_HANDLE",
           "create", "step", "totals", "finalize", "destroy", "reset_shared_tables"]
