"""Model parameters, mode indexing, and run-configuration parsing.

Conventions fixed here and used everywhere else:

* sites are 1-based in user-facing I/O, j in {1, ..., L}, periodic
  (site L+1 is site 1);
* flat mode indices are 0-based with the spin-major ordering
  (1up, ..., Lup, 1dn, ..., Ldn), so flat = site-1 for spin up and
  flat = L + site - 1 for spin down.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError


class Spin(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class ModelParams:
    """Static parameters of the monitored BCS chain.

    L      : site count (even, >= 2; odd values only via allow_odd_L,
             needed by the small exact-diagonalization cross-checks)
    J      : hopping amplitude
    delta  : on-site s-wave pairing amplitude (>= 0)
    gamma  : measurement rate (>= 0); per-site, per-step probability is
             p = gamma * dt, which must be a valid probability
    dt     : Trotter step
    """

    L: int
    J: float = 1.0
    delta: float = 0.0
    gamma: float = 0.0
    dt: float = 0.01
    allow_odd_L: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.L, int) or self.L < 2:
            raise ConfigError(f"L must be an integer >= 2, got {self.L!r}")
        if self.L % 2 != 0 and not self.allow_odd_L:
            raise ConfigError(f"L must be even, got {self.L}")
        if self.delta < 0:
            raise ConfigError(f"delta must be >= 0, got {self.delta}")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if not (self.dt > 0):
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        p = self.gamma * self.dt
        if p > 1.0 + 1e-12:
            raise ConfigError(
                f"gamma*dt = {p:g} is not a valid per-site probability (must be <= 1)"
            )

    @property
    def n_modes(self) -> int:
        return 2 * self.L

    @property
    def p_measure(self) -> float:
        """Per-site measurement probability per Trotter step."""
        return min(self.gamma * self.dt, 1.0)


@dataclass(frozen=True)
class ModeIndex:
    site: int
    spin: Spin
    flat: int


def flatten(site: int, spin: Spin, L: int) -> int:
    """Map (site, spin) to the flat index in the (1up..Lup, 1dn..Ldn) ordering."""
    if not 1 <= site <= L:
        raise IndexError(f"site {site} out of range [1, {L}]")
    offset = 0 if spin is Spin.UP else L
    return offset + site - 1


def unflatten(flat: int, L: int) -> ModeIndex:
    """Inverse of :func:`flatten`."""
    if not 0 <= flat < 2 * L:
        raise IndexError(f"flat index {flat} out of range [0, {2 * L})")
    spin = Spin.UP if flat < L else Spin.DOWN
    site = flat % L + 1
    return ModeIndex(site=site, spin=spin, flat=flat)


# --------------------------------------------------------------------------
# Run-configuration document (flat key-value text file)
# --------------------------------------------------------------------------

_REQUIRED_KEYS = ("L", "delta", "gamma", "t_max", "n_traj", "seed", "output_dir")
_ALL_KEYS = _REQUIRED_KEYS + ("J", "dt", "window_start", "window_end", "init_state", "cut")

_INT_KEYS = {"L", "n_traj", "seed", "cut"}
_FLOAT_KEYS = {"J", "delta", "gamma", "dt", "t_max", "window_start", "window_end"}

WINDOW_REF_L = 32
WINDOW_REF = (150.0, 300.0)  # steady-state window for L = 32 quoted in the source data


def default_window(L: int) -> tuple[float, float]:
    """Steady-state averaging window, scaled linearly with system size."""
    s = L / WINDOW_REF_L
    return (WINDOW_REF[0] * s, WINDOW_REF[1] * s)


@dataclass
class RunConfig:
    """Parsed, validated run configuration.

    Mirrors the config file keys; window defaults scale with L when the
    window keys are absent.
    """

    L: int
    delta: float
    gamma: float
    t_max: float
    n_traj: int
    seed: int
    output_dir: str
    J: float = 1.0
    dt: float = 0.01
    window_start: float | None = None
    window_end: float | None = None
    init_state: str = "neel"
    cut: int | None = None

    def __post_init__(self) -> None:
        if self.init_state not in ("neel", "vacuum"):
            raise ConfigError(
                f"init_state must be 'neel' or 'vacuum', got {self.init_state!r}"
            )
        # Delegates L/J/delta/gamma/dt validation (even L included).
        self.params  # noqa: B018
        if self.window_start is None or self.window_end is None:
            start, end = default_window(self.L)
            if end > self.t_max:
                # short run: fall back to averaging over its second half
                start, end = self.t_max / 2, self.t_max
            self.window_start, self.window_end = start, end
        if not (0 <= self.window_start < self.window_end):
            raise ConfigError(
                f"window [{self.window_start}, {self.window_end}] is not an interval"
            )
        if self.window_end > self.t_max + 1e-9:
            raise ConfigError(
                f"window_end {self.window_end} exceeds t_max {self.t_max}"
            )
        if self.n_traj < 1:
            raise ConfigError(f"n_traj must be >= 1, got {self.n_traj}")
        if self.cut is None:
            self.cut = self.L // 2
        if not 1 <= self.cut < self.L:
            raise ConfigError(f"cut {self.cut} out of range [1, {self.L})")

    @property
    def params(self) -> ModelParams:
        return ModelParams(L=self.L, J=self.J, delta=self.delta,
                           gamma=self.gamma, dt=self.dt)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out


def _parse_scalar(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse value {raw!r}") from None
    return raw


def parse_config_text(text: str, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse the flat key-value run configuration.

    Lines are ``key = value``; '#' starts a comment; blank lines are
    ignored.  Unknown keys fail loudly.  ``overrides`` (from the CLI's
    --set flags) are applied after the file, and are validated against
    the same key set.
    """
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_scalar(key, raw)
    for key, raw in (overrides or {}).items():
        if key not in _ALL_KEYS:
            raise ConfigError(f"--set: unknown key {key!r}")
        values[key] = _parse_scalar(key, raw)
    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    return RunConfig(**values)  # type: ignore[arg-type]


def load_config(path: str, overrides: dict[str, str] | None = None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, overrides)
