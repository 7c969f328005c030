"""Pure per-second emission computation: VSP, operating modes, rate lookup.

The pipeline turns a 1 Hz speed trace into per-second operating modes and
emission mass flows:

    speed -> acceleration -> VSP -> operating mode -> base rate -> g/s

Everything here is a pure function over immutable inputs; no I/O. Speeds and
accelerations are SI (m/s, m/s^2). Operating-mode thresholds are defined in
mph per the MOVES convention and converted at the boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyCycle, InvalidSample, MissingEntry, NegativeSpeed, UnknownSourceType

# Exact statute conversion; all mph thresholds below are converted with it.
MPS_PER_MPH = 0.44704
GRAVITY_MPS2 = 9.8

# Operating-mode decision constants (mph domain, MOVES convention).
# Braking wins over idle; bins are lower-inclusive, upper-exclusive.
IDLE_MAX_MPH = 1.0
LOW_SPEED_MAX_MPH = 25.0
MID_SPEED_MAX_MPH = 50.0
BRAKE_DECEL_MPHPS = -2.0          # instantaneous trigger: a <= -2 mph/s
BRAKE_SOFT_DECEL_MPHPS = -1.0     # 3-consecutive-second trigger: a < -1 mph/s
BRAKE_SOFT_RUN_S = 3

SECONDS_PER_HOUR = 3600.0


class SourceType(enum.Enum):
    """Supported MOVES source use types (gasoline, running exhaust)."""

    LDV = "LDV"   # light-duty vehicle (passenger car)
    LDT = "LDT"   # light-duty truck (passenger truck / SUV)

    @property
    def code(self) -> int:
        """Numeric selector used by the CLI: 1 = LDV, 2 = LDT."""
        return 1 if self is SourceType.LDV else 2

    @classmethod
    def from_code(cls, code: int) -> "SourceType":
        if code == 1:
            return cls.LDV
        if code == 2:
            return cls.LDT
        raise UnknownSourceType(code)

    @classmethod
    def from_token(cls, token: str) -> "SourceType":
        try:
            return cls(token.strip().upper())
        except ValueError:
            raise UnknownSourceType(token) from None


class OpMode(enum.IntEnum):
    """Discrete operating modes for running exhaust.

    Mode 0 is deceleration/braking and mode 1 is idle; neither needs VSP.
    Modes 11 and 21 are coasting (VSP < 0) in the low and mid speed classes.
    The remaining ids are cruise/acceleration cells keyed on speed class and
    VSP class. The high-speed class has no dedicated coasting id; negative
    VSP above 50 mph falls into mode 33.
    """

    BRAKING = 0
    IDLE = 1
    LOW_COAST = 11
    LOW_VSP_0_3 = 12
    LOW_VSP_3_6 = 13
    LOW_VSP_6_9 = 14
    LOW_VSP_9_12 = 15
    LOW_VSP_12_UP = 16
    MID_COAST = 21
    MID_VSP_0_3 = 22
    MID_VSP_3_6 = 23
    MID_VSP_6_9 = 24
    MID_VSP_9_12 = 25
    MID_VSP_12_18 = 27
    MID_VSP_18_24 = 28
    MID_VSP_24_30 = 29
    MID_VSP_30_UP = 30
    HIGH_VSP_LT_6 = 33
    HIGH_VSP_6_12 = 35
    HIGH_VSP_12_18 = 37
    HIGH_VSP_18_24 = 38
    HIGH_VSP_24_30 = 39
    HIGH_VSP_30_UP = 40


VALID_OPMODE_IDS: tuple[int, ...] = tuple(int(m) for m in OpMode)

# VSP bin edges (kW/t) and the mode ids they select, per speed class.
# A VSP below the first edge selects the first id; bins are [lo, hi).
_LOW_EDGES = (0.0, 3.0, 6.0, 9.0, 12.0)
_LOW_MODES = (OpMode.LOW_COAST, OpMode.LOW_VSP_0_3, OpMode.LOW_VSP_3_6,
              OpMode.LOW_VSP_6_9, OpMode.LOW_VSP_9_12, OpMode.LOW_VSP_12_UP)
_MID_EDGES = (0.0, 3.0, 6.0, 9.0, 12.0, 18.0, 24.0, 30.0)
_MID_MODES = (OpMode.MID_COAST, OpMode.MID_VSP_0_3, OpMode.MID_VSP_3_6,
              OpMode.MID_VSP_6_9, OpMode.MID_VSP_9_12, OpMode.MID_VSP_12_18,
              OpMode.MID_VSP_18_24, OpMode.MID_VSP_24_30, OpMode.MID_VSP_30_UP)
_HIGH_EDGES = (6.0, 12.0, 18.0, 24.0, 30.0)
_HIGH_MODES = (OpMode.HIGH_VSP_LT_6, OpMode.HIGH_VSP_6_12, OpMode.HIGH_VSP_12_18,
               OpMode.HIGH_VSP_18_24, OpMode.HIGH_VSP_24_30, OpMode.HIGH_VSP_30_UP)


@dataclass(frozen=True)
class VehicleParams:
    """Road-load coefficients and masses for one source type.

    A is the rolling term (kW*s/m), B the rotating term (kW*s^2/m^2),
    C the drag term (kW*s^3/m^3); M is source mass and f the fixed mass
    factor, both in metric tons.
    """

    source_type: SourceType
    A: float
    B: float
    C: float
    M: float
    f: float

    def violations(self) -> list[str]:
        out = []
        for name in ("A", "B", "C"):
            if not getattr(self, name) >= 0.0:
                out.append(f"params[{self.source_type.value}]: {name} must be >= 0")
        if not self.M > 0.0:
            out.append(f"params[{self.source_type.value}]: M must be > 0")
        if not self.f > 0.0:
            out.append(f"params[{self.source_type.value}]: f must be > 0")
        return out


@dataclass(frozen=True)
class KinematicSample:
    """One second of vehicle state: time index, speed, acceleration, grade."""

    t: int
    v: float            # m/s
    a: float            # m/s^2
    grade: float = 0.0  # road grade angle theta, radians


@dataclass(frozen=True)
class EmissionVector:
    """One value per output species. Also used for per-hour base rates.

    `energy` is the fuel/energy channel; its unit comes from the rate table
    metadata (grams of fuel per hour in the shipped tables). The pollutant
    channels are grams (per hour for rates, absolute for totals).
    """

    energy: float
    co: float
    hc: float
    nox: float
    co2: float

    def __add__(self, other: "EmissionVector") -> "EmissionVector":
        return EmissionVector(
            self.energy + other.energy,
            self.co + other.co,
            self.hc + other.hc,
            self.nox + other.nox,
            self.co2 + other.co2,
        )

    def scaled(self, k: float) -> "EmissionVector":
        return EmissionVector(self.energy * k, self.co * k, self.hc * k,
                              self.nox * k, self.co2 * k)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.energy, self.co, self.hc, self.nox, self.co2)

    @classmethod
    def zero(cls) -> "EmissionVector":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)


SPECIES_NAMES = ("energy", "CO", "HC", "NOx", "CO2")


@dataclass(frozen=True)
class RateTable:
    """Base emission/energy rates per (source type, operating mode), per hour."""

    entries: Mapping[tuple[SourceType, int], EmissionVector]
    units: Mapping[str, str]

    def lookup(self, source_type: SourceType, mode: int) -> EmissionVector:
        try:
            return self.entries[(source_type, int(mode))]
        except KeyError:
            raise MissingEntry(source_type.value, int(mode)) from None

    def scaled(self, k: float) -> "RateTable":
        return RateTable(
            entries={key: vec.scaled(k) for key, vec in self.entries.items()},
            units=dict(self.units),
        )


@dataclass(frozen=True)
class DriveCycle:
    """A validated 1 Hz drive cycle."""

    samples: tuple[KinematicSample, ...]
    speed_unit_of_origin: str = "m/s"

    def __post_init__(self):
        if not self.samples:
            raise EmptyCycle("drive cycle has no samples")
        for i, s in enumerate(self.samples):
            if s.v < 0.0:
                raise NegativeSpeed(s.v, line=None)
            if s.t != self.samples[0].t + i:
                raise InvalidSample(f"timestamps must increase by 1 s (sample {i})")

    @classmethod
    def from_speeds(cls, speeds: Sequence[float],
                    speed_unit_of_origin: str = "m/s") -> "DriveCycle":
        """Build a cycle from 1 Hz speeds in m/s, deriving accelerations.

        Grade is zero throughout; the first sample's acceleration is zero.
        """
        accels = derive_acceleration(speeds)
        samples = tuple(
            KinematicSample(t=i, v=float(v), a=accels[i], grade=0.0)
            for i, v in enumerate(speeds)
        )
        return cls(samples=samples, speed_unit_of_origin=speed_unit_of_origin)

    @property
    def speeds(self) -> list[float]:
        return [s.v for s in self.samples]

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class SecondRecord:
    """Per-second output: time index, operating mode, emission mass (per s)."""

    t: int
    opmode: OpMode
    emissions: EmissionVector


@dataclass(frozen=True)
class CycleResult:
    """Aggregate output of a cycle run.

    `ef` is None when the cycle covered zero distance; per-distance factors
    are undefined there and deliberately not represented as NaN.
    """

    per_second: tuple[SecondRecord, ...]
    totals: EmissionVector
    distance_m: float
    ef: EmissionVector | None

    @property
    def ef_defined(self) -> bool:
        return self.ef is not None

    @property
    def distance_km(self) -> float:
        return self.distance_m / 1000.0


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def derive_acceleration(speeds: Sequence[float]) -> list[float]:
    """Forward-difference accelerations for a 1 Hz speed sequence.

    a(t) = v(t) - v(t-1) with dt = 1 s; the first sample gets a = 0 since it
    has no predecessor.
    """
    if len(speeds) == 0:
        raise EmptyCycle("cannot derive accelerations from an empty sequence")
    for v in speeds:
        if v < 0.0:
            raise NegativeSpeed(float(v))
    out = [0.0]
    for i in range(1, len(speeds)):
        out.append(float(speeds[i]) - float(speeds[i - 1]))
    return out


def compute_vsp(sample: KinematicSample, params: VehicleParams) -> float:
    """Vehicle specific power in kW per metric ton.

    VSP = (A*v + B*v^2 + C*v^3 + M*(a + g*sin(theta))*v) / f
    """
    v, a = sample.v, sample.a
    if not (math.isfinite(v) and math.isfinite(a)) or v < 0.0:
        raise InvalidSample(f"bad kinematic sample v={v!r} a={a!r}")
    return (params.A * v
            + params.B * v * v
            + params.C * v * v * v
            + params.M * (a + GRAVITY_MPS2 * math.sin(sample.grade)) * v) / params.f


def _bin_mode(vsp: float, edges: tuple[float, ...], modes: tuple[OpMode, ...]) -> OpMode:
    for i, edge in enumerate(edges):
        if vsp < edge:
            return modes[i]
    return modes[-1]


def classify_opmode(sample: KinematicSample, vsp: float,
                    history: Sequence[float] = ()) -> OpMode:
    """Map one second of driving onto its operating mode.

    `history` holds up to the two previous accelerations (m/s^2, oldest
    first); with fewer than two the consecutive-deceleration rule cannot
    fire. Decision order: braking, then idle, then the speed-class / VSP
    cell. Every (v >= 0, finite a, finite vsp) input maps to exactly one
    mode.
    """
    a_mphps = sample.a / MPS_PER_MPH
    if a_mphps <= BRAKE_DECEL_MPHPS:
        return OpMode.BRAKING
    if len(history) >= BRAKE_SOFT_RUN_S - 1 and a_mphps < BRAKE_SOFT_DECEL_MPHPS:
        recent = list(history)[-(BRAKE_SOFT_RUN_S - 1):]
        if all(h / MPS_PER_MPH < BRAKE_SOFT_DECEL_MPHPS for h in recent):
            return OpMode.BRAKING

    v_mph = sample.v / MPS_PER_MPH
    if v_mph < IDLE_MAX_MPH:
        return OpMode.IDLE
    if v_mph < LOW_SPEED_MAX_MPH:
        return _bin_mode(vsp, _LOW_EDGES, _LOW_MODES)
    if v_mph < MID_SPEED_MAX_MPH:
        return _bin_mode(vsp, _MID_EDGES, _MID_MODES)
    return _bin_mode(vsp, _HIGH_EDGES, _HIGH_MODES)


def classify_opmode_array(v_mps: np.ndarray, vsp: np.ndarray,
                          a_mps2: np.ndarray | float = 0.0) -> np.ndarray:
    """Vectorized operating-mode classification (no consecutive-decel rule).

    Intended for grid scans and bulk analysis. Accelerations default to
    zero; only the instantaneous braking trigger is applied, so results for
    gentle sustained decelerations can differ from the scalar path, which
    sees the acceleration history.
    """
    v = np.asarray(v_mps, dtype=float)
    p = np.asarray(vsp, dtype=float)
    a = np.broadcast_to(np.asarray(a_mps2, dtype=float), v.shape)

    v_mph = v / MPS_PER_MPH
    a_mphps = a / MPS_PER_MPH

    out = np.empty(v.shape, dtype=np.int64)

    def fill(mask: np.ndarray, edges: tuple[float, ...], modes: tuple[OpMode, ...]):
        ids = np.array([int(m) for m in modes], dtype=np.int64)
        out[mask] = ids[np.searchsorted(np.asarray(edges), p[mask], side="right")]

    braking = a_mphps <= BRAKE_DECEL_MPHPS
    idle = ~braking & (v_mph < IDLE_MAX_MPH)
    low = ~braking & ~idle & (v_mph < LOW_SPEED_MAX_MPH)
    mid = ~braking & ~idle & ~low & (v_mph < MID_SPEED_MAX_MPH)
    high = ~braking & ~idle & ~low & ~mid

    out[braking] = int(OpMode.BRAKING)
    out[idle] = int(OpMode.IDLE)
    fill(low, _LOW_EDGES, _LOW_MODES)
    fill(mid, _MID_EDGES, _MID_MODES)
    fill(high, _HIGH_EDGES, _HIGH_MODES)
    return out


def lookup_rate(mode: OpMode, params: VehicleParams, rates: RateTable) -> EmissionVector:
    """Per-hour base rates for one (mode, source type). No interpolation."""
    return rates.lookup(params.source_type, int(mode))


def per_second_emissions(rate_per_hour: EmissionVector) -> EmissionVector:
    """Convert a per-hour base rate into a per-second emission mass."""
    return EmissionVector(
        rate_per_hour.energy / SECONDS_PER_HOUR,
        rate_per_hour.co / SECONDS_PER_HOUR,
        rate_per_hour.hc / SECONDS_PER_HOUR,
        rate_per_hour.nox / SECONDS_PER_HOUR,
        rate_per_hour.co2 / SECONDS_PER_HOUR,
    )


def aggregate_cycle(cycle: DriveCycle, params: VehicleParams,
                    rates: RateTable) -> CycleResult:
    """Run the full pipeline over a cycle and aggregate.

    Totals are the exact left-to-right sum of the per-second vectors (there
    is no separate accumulation path). Distance uses the rectangle rule,
    sum(v * 1 s), consistent with per-second attribution. EF is totals per
    kilometre, or None when the distance is zero.
    """
    per_second: list[SecondRecord] = []
    totals = EmissionVector.zero()
    distance_m = 0.0
    history: list[float] = []
    for s in cycle.samples:
        vsp = compute_vsp(s, params)
        mode = classify_opmode(s, vsp, history)
        step = per_second_emissions(lookup_rate(mode, params, rates))
        per_second.append(SecondRecord(t=s.t, opmode=mode, emissions=step))
        totals = totals + step
        distance_m += s.v
        history.append(s.a)
        if len(history) > BRAKE_SOFT_RUN_S - 1:
            history.pop(0)
    ef = None
    if distance_m > 0.0:
        km = distance_m / 1000.0
        ef = EmissionVector(totals.energy / km, totals.co / km, totals.hc / km,
                            totals.nox / km, totals.co2 / km)
    return CycleResult(per_second=tuple(per_second), totals=totals,
                       distance_m=distance_m, ef=ef)


def mps_to_mph(v: float) -> float:
    return v / MPS_PER_MPH


def mph_to_mps(v: float) -> float:
    return v * MPS_PER_MPH


def kmh_to_mps(v: float) -> float:
    return v / 3.6


__all__ = [
    "MPS_PER_MPH", "GRAVITY_MPS2", "SECONDS_PER_HOUR",
    "IDLE_MAX_MPH", "LOW_SPEED_MAX_MPH", "MID_SPEED_MAX_MPH",
    "BRAKE_DECEL_MPHPS", "BRAKE_SOFT_DECEL_MPHPS", "BRAKE_SOFT_RUN_S",
    "SourceType", "OpMode", "VALID_OPMODE_IDS", "SPECIES_NAMES",
    "VehicleParams", "KinematicSample", "EmissionVector", "RateTable",
    "DriveCycle", "SecondRecord", "CycleResult",
    "derive_acceleration", "compute_vsp", "classify_opmode",
    "classify_opmode_array", "lookup_rate", "per_second_emissions",
    "aggregate_cycle", "mps_to_mph", "mph_to_mps", "kmh_to_mps",
]
