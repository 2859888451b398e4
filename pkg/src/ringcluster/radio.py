"""First-order radio energy model.

Transmitting ``l`` bits over distance ``d`` costs ``l*E_elec`` for the
electronics plus an amplifier term that is either free-space (``eps_fs*d^2``)
or multipath (``eps_mp*d^4``).  Receiving costs ``l*E_elec`` and aggregating
``n`` signals costs ``l*n*E_DA``.  All quantities are SI (J, m, bits).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, fields
from pathlib import Path

log = logging.getLogger(__name__)

THRESHOLDED = "thresholded"
FORCE_FREE_SPACE = "force_free_space"
FORCE_MULTIPATH = "force_multipath"
TX_MODES = (THRESHOLDED, FORCE_FREE_SPACE, FORCE_MULTIPATH)


@dataclass(frozen=True)
class RadioParams:
    """Radio and aggregation constants.  Defaults are the reference parameter set."""

    e_elec: float = 50e-9
    e_da: float = 5e-9
    eps_fs: float = 10e-12
    eps_mp: float = 0.0013e-12
    d_threshold: float = 87.0
    packet_bits: int = 4000
    initial_node_energy: float = 0.5

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"radio parameter {f.name} must be > 0, got {value!r}")
        crossover = self.crossover_distance
        if abs(self.d_threshold - crossover) > 0.2 * crossover:
            warnings.warn(
                f"d_threshold={self.d_threshold:g} m is more than 20% away from "
                f"sqrt(eps_fs/eps_mp)={crossover:.3f} m",
                stacklevel=3,
            )
        elif self.d_threshold != crossover:
            log.info("d_threshold=%g m, analytic crossover %.3f m", self.d_threshold, crossover)

    @property
    def crossover_distance(self) -> float:
        return math.sqrt(self.eps_fs / self.eps_mp)


def _check_nonneg(**values):
    for name, v in values.items():
        if v < 0:
            raise ValueError(f"{name} must be >= 0, got {v!r}")


def tx_energy(params: RadioParams, bits: float, distance: float, mode: str = THRESHOLDED) -> float:
    """Energy to transmit ``bits`` over ``distance`` metres.

    ``mode`` selects the amplifier branch: ``"thresholded"`` switches to
    multipath at ``distance >= d_threshold``; the two ``force_*`` modes pin
    the branch regardless of distance.
    """
    _check_nonneg(bits=bits, distance=distance)
    if mode == THRESHOLDED:
        multipath = distance >= params.d_threshold
    elif mode == FORCE_MULTIPATH:
        multipath = True
    elif mode == FORCE_FREE_SPACE:
        multipath = False
    else:
        raise ValueError(f"unknown tx mode {mode!r}; expected one of {TX_MODES}")
    if multipath:
        return bits * params.e_elec + bits * params.eps_mp * distance**4
    return bits * params.e_elec + bits * params.eps_fs * distance**2


def rx_energy(params: RadioParams, bits: float) -> float:
    _check_nonneg(bits=bits)
    return bits * params.e_elec


def aggregation_energy(params: RadioParams, bits: float, signals: float) -> float:
    _check_nonneg(bits=bits, signals=signals)
    return bits * signals * params.e_da


# file key -> (field name, multiplier into SI)
RADIO_FILE_KEYS = {
    "e_elec_nj_per_bit": ("e_elec", 1e-9),
    "e_da_nj_per_bit_signal": ("e_da", 1e-9),
    "eps_fs_pj_per_bit_m2": ("eps_fs", 1e-12),
    "eps_mp_pj_per_bit_m4": ("eps_mp", 1e-12),
    "d_threshold_m": ("d_threshold", 1.0),
    "packet_bytes": ("packet_bits", 8),
    "initial_energy_j": ("initial_node_energy", 1.0),
}


def parse_radio_text(text: str) -> RadioParams:
    """Parse flat ``key=value`` text.  Blank lines and ``#`` comments are ignored."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in RADIO_FILE_KEYS:
            raise ValueError(f"line {lineno}: unknown radio key {key!r}")
        if key in overrides:
            raise ValueError(f"line {lineno}: duplicate radio key {key!r}")
        try:
            number = float(value)
        except ValueError:
            raise ValueError(f"line {lineno}: {key} is not numeric: {value!r}") from None
        overrides[key] = number

    kwargs = {}
    for key, number in overrides.items():
        name, scale = RADIO_FILE_KEYS[key]
        if name == "packet_bits":
            if number != int(number):
                raise ValueError(f"packet_bytes must be an integer, got {number!r}")
            kwargs[name] = int(number) * scale
        else:
            kwargs[name] = number * scale
    return RadioParams(**kwargs)


def load_radio_file(path) -> RadioParams:
    return parse_radio_text(Path(path).read_text(encoding="utf-8"))


def format_radio_text(params: RadioParams) -> str:
    """Inverse of :func:`parse_radio_text` (values in the file's units)."""
    lines = []
    for key, (name, scale) in RADIO_FILE_KEYS.items():
        value = getattr(params, name) / scale
        if name == "packet_bits":
            lines.append(f"{key}={int(round(value))}")
        else:
            lines.append(f"{key}={value!r}")
    return "\n".join(lines) + "\n"
