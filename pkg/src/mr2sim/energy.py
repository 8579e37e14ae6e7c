"""First-order radio energy model and per-node consumption ledger.

Transmitting k bits over distance d costs ``e_elec*k + eps_amp*k*d^2``;
receiving k bits costs ``e_elec*k``.  Sleeping nodes drain at 1/100 of
the reception power, where reception power is the energy to receive at
the full bitrate for one second (``e_elec * bitrate``).  Idle listening
drains at the full reception power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class EnergyParams:
    e_elec: float = 50e-9  # J/bit, radio circuitry
    eps_amp: float = 100e-12  # J/bit/m^2, transmit amplifier
    bitrate: float = 250_000.0  # bit/s
    initial_energy: float = 2.0  # J per node
    sleep_divisor: float = 100.0  # passive drain = rx power / sleep_divisor

    def __post_init__(self):
        for name in ("e_elec", "eps_amp", "bitrate", "initial_energy", "sleep_divisor"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")

    @property
    def rx_power(self) -> float:
        """Watts drawn while the radio listens or receives."""
        return self.e_elec * self.bitrate

    @property
    def sleep_power(self) -> float:
        return self.rx_power / self.sleep_divisor


def energy_tx(k_bits: float, distance_m: float, params: EnergyParams) -> float:
    """Joules to transmit ``k_bits`` over ``distance_m``."""
    if k_bits < 0 or distance_m < 0:
        raise InvalidParameterError("bits and distance must be non-negative")
    return params.e_elec * k_bits + params.eps_amp * k_bits * distance_m * distance_m


def energy_rx(k_bits: float, params: EnergyParams) -> float:
    """Joules to receive ``k_bits``."""
    if k_bits < 0:
        raise InvalidParameterError("bits must be non-negative")
    return params.e_elec * k_bits


def sleep_drain(duration_s: float, params: EnergyParams) -> float:
    """Joules drained by a sleeping radio over ``duration_s``."""
    if duration_s < 0:
        raise InvalidParameterError("duration must be non-negative")
    return duration_s * params.sleep_power


class EnergyLedger:
    """Per-node consumption split into tx/rx/sleep/idle, plus per-class tallies.

    Remaining energy is always derived (initial minus consumed), so the
    conservation identity holds by construction.  Charges clamp at zero
    remaining; a node that hits zero is dead and must not be charged again.
    """

    __slots__ = ("params", "n", "tx", "rx", "sleep", "idle", "by_class")

    def __init__(self, node_count: int, params: EnergyParams):
        self.params = params
        self.n = node_count
        self.tx = [0.0] * node_count
        self.rx = [0.0] * node_count
        self.sleep = [0.0] * node_count
        self.idle = [0.0] * node_count
        self.by_class = {}  # class -> [tx_joules, rx_joules]

    def remaining(self, node: int) -> float:
        used = self.tx[node] + self.rx[node] + self.sleep[node] + self.idle[node]
        rem = self.params.initial_energy - used
        return rem if rem > 0.0 else 0.0

    def charge_tx(self, node: int, amount: float, cls: str) -> float:
        rem = self.remaining(node)
        amount = amount if amount <= rem else rem
        self.tx[node] += amount
        tally = self.by_class.setdefault(cls, [0.0, 0.0])
        tally[0] += amount
        return amount

    def charge_rx(self, node: int, amount: float, cls: str) -> float:
        rem = self.remaining(node)
        amount = amount if amount <= rem else rem
        self.rx[node] += amount
        tally = self.by_class.setdefault(cls, [0.0, 0.0])
        tally[1] += amount
        return amount

    def charge_sleep(self, node: int, amount: float) -> float:
        rem = self.remaining(node)
        amount = amount if amount <= rem else rem
        self.sleep[node] += amount
        return amount

    def charge_idle(self, node: int, amount: float) -> float:
        rem = self.remaining(node)
        amount = amount if amount <= rem else rem
        self.idle[node] += amount
        return amount

    # -- snapshots ---------------------------------------------------------

    def arrays(self) -> dict[str, np.ndarray]:
        return {
            "tx": np.asarray(self.tx),
            "rx": np.asarray(self.rx),
            "sleep": np.asarray(self.sleep),
            "idle": np.asarray(self.idle),
        }

    def total_consumed(self) -> float:
        return float(
            sum(self.tx) + sum(self.rx) + sum(self.sleep) + sum(self.idle)
        )

    def class_energy(self, cls: str) -> float:
        tally = self.by_class.get(cls)
        return 0.0 if tally is None else tally[0] + tally[1]

    def conservation_error(self) -> float:
        """Max relative error of initial = consumed + remaining over nodes."""
        worst = 0.0
        init = self.params.initial_energy
        for k in range(self.n):
            used = self.tx[k] + self.rx[k] + self.sleep[k] + self.idle[k]
            rem = init - used
            if rem < 0.0:
                rem = 0.0
            err = abs(init - (used + rem)) / init
            if err > worst:
                worst = err
        return worst
