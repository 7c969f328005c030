"""Per-timestep emission sessions for embedding in host simulators.

A session consumes one speed sample per call at a fixed 1 s cadence and
returns that second's operating mode and emission mass. The arithmetic is
the same code path as the batch aggregation, step for step, so a session
replaying a cycle reproduces `aggregate_cycle` bit for bit.

Each session is single-caller; independent sessions can run concurrently
against one shared TableSet, which is immutable after load.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    BRAKE_SOFT_RUN_S,
    CycleResult,
    EmissionVector,
    KinematicSample,
    OpMode,
    RateTable,
    SecondRecord,
    SourceType,
    VehicleParams,
    classify_opmode,
    compute_vsp,
    lookup_rate,
    per_second_emissions,
)
from .errors import EmptySession, NegativeSpeed, UnknownSourceType
from .tables import TableSet


@dataclass
class EmissionSession:
    """Incremental pipeline state for one simulated vehicle."""

    params: VehicleParams
    rates: RateTable
    prev_speed: float | None = None
    accel_history: list[float] = field(default_factory=list)
    running_totals: EmissionVector = field(default_factory=EmissionVector.zero)
    distance_m: float = 0.0
    step_count: int = 0
    _records: list[SecondRecord] = field(default_factory=list)

    def step(self, speed_mps: float) -> tuple[OpMode, EmissionVector]:
        """Advance one second; returns (mode, per-second emissions).

        The caller contract is a fixed 1 s cadence; the session does not
        resample. On a NegativeSpeed error the session is left unchanged.
        """
        if speed_mps < 0.0:
            raise NegativeSpeed(speed_mps)
        accel = 0.0 if self.prev_speed is None else speed_mps - self.prev_speed
        sample = KinematicSample(t=self.step_count, v=float(speed_mps), a=accel)
        vsp = compute_vsp(sample, self.params)
        mode = classify_opmode(sample, vsp, self.accel_history)
        step = per_second_emissions(lookup_rate(mode, self.params, self.rates))

        self._records.append(SecondRecord(t=sample.t, opmode=mode, emissions=step))
        self.running_totals = self.running_totals + step
        self.distance_m += sample.v
        self.accel_history.append(accel)
        if len(self.accel_history) > BRAKE_SOFT_RUN_S - 1:
            self.accel_history.pop(0)
        self.prev_speed = float(speed_mps)
        self.step_count += 1
        return mode, step

    def finalize(self) -> CycleResult:
        """Close the session and return the same result shape as the batch path."""
        if self.step_count == 0:
            raise EmptySession("finalize called before any step")
        totals = self.running_totals
        ef = None
        if self.distance_m > 0.0:
            km = self.distance_m / 1000.0
            ef = EmissionVector(totals.energy / km, totals.co / km, totals.hc / km,
                                totals.nox / km, totals.co2 / km)
        return CycleResult(per_second=tuple(self._records), totals=totals,
                           distance_m=self.distance_m, ef=ef)


def session_create(source_type: SourceType | int | str, tables: TableSet) -> EmissionSession:
    """Create a fresh session bound to one source type of a loaded table set."""
    if isinstance(source_type, SourceType):
        st = source_type
    elif isinstance(source_type, int):
        st = SourceType.from_code(source_type)
    elif isinstance(source_type, str):
        st = SourceType.from_token(source_type)
    else:
        raise UnknownSourceType(source_type)
    return EmissionSession(params=tables.params_for(st), rates=tables.rates)


def session_step(session: EmissionSession, speed_mps: float) -> tuple[OpMode, EmissionVector]:
    return session.step(speed_mps)


def session_finalize(session: EmissionSession) -> CycleResult:
    return session.finalize()


__all__ = ["EmissionSession", "session_create", "session_step", "session_finalize"]
