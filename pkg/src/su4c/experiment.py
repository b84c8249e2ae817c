"""Simulated two-qubit experiments: state prep, noisy pulse execution,
and projective measurement in the nine two-qubit Pauli settings.

Noise model, applied to a lowered pulse sequence:
  * every R pulse's rotation angle is scaled by (1 + eps) with eps drawn
    fresh per pulse from N(0, overrotation_sigma); Rz is a frame change
    and stays exact
  * a depolarizing mix toward I/4 with weight depolarizing_per_g follows
    every entangling G application
  * single-qubit amplitude damping toward the first basis state acts once
    on each qubit at the end of the circuit, with probability
    damping_per_circuit

Measurement settings are labeled by a Pauli letter per qubit. X and Y are
read out by prerotating with R(pi/2, pi/2) and R(pi/2, 0) respectively and
then measuring in the computational basis; outcome order follows the basis
order (first basis state of qubit 0 first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .circuits import GateElement, lower_to_pulses
from .compiler import decompose
from .config import DEFAULT_TOL, Tolerances
from .gates import G_GATE, r_gate, rz_gate
from .haar import SeededRng
from .linalg import _as_complex, _require_unitary, nearest_unitary

__all__ = [
    "STATE_LABELS",
    "TOMOGRAPHY_INPUT_LABELS",
    "MEASUREMENT_SETTINGS",
    "CALIBRATED_NOISE",
    "InputStateLabel",
    "NoiseModel",
    "MeasurementRecord",
    "input_state",
    "apply_channel",
    "setting_probabilities",
    "measure",
    "run_experiment",
    "exact_experiment",
]

_STATE_VECTORS = {
    "up": np.array([1.0, 0.0], dtype=complex),
    "down": np.array([0.0, 1.0], dtype=complex),
    "plus": np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
    "minus_i": np.array([1.0, -1.0j], dtype=complex) / math.sqrt(2.0),
}

STATE_LABELS = ("up", "down", "plus", "minus_i")

# 16 product preparations spanning the two-qubit operator space, in the
# fixed order used by process tomography and benchmark state assignment.
TOMOGRAPHY_INPUT_LABELS = tuple(product(STATE_LABELS, repeat=2))

MEASUREMENT_SETTINGS = tuple(product(("Z", "X", "Y"), repeat=2))

_PREROTATION = {
    "Z": np.eye(2, dtype=complex),
    "X": r_gate(math.pi / 2.0, math.pi / 2.0),
    "Y": r_gate(math.pi / 2.0, 0.0),
}


@dataclass(frozen=True)
class InputStateLabel:
    """Product preparation, one label per qubit."""

    qubit0: str
    qubit1: str

    def __post_init__(self):
        for name in (self.qubit0, self.qubit1):
            if name not in _STATE_VECTORS:
                raise ValueError(
                    f"unknown state label {name!r}; choose from {STATE_LABELS}"
                )


def _as_label(label: "InputStateLabel | Sequence[str]") -> InputStateLabel:
    if isinstance(label, InputStateLabel):
        return label
    a, b = label
    return InputStateLabel(str(a), str(b))


def input_state(label: "InputStateLabel | Sequence[str]") -> np.ndarray:
    """State vector of a labeled product preparation."""
    lab = _as_label(label)
    return np.kron(_STATE_VECTORS[lab.qubit0], _STATE_VECTORS[lab.qubit1])


@dataclass(frozen=True)
class NoiseModel:
    overrotation_sigma: float = 0.0
    depolarizing_per_g: float = 0.0
    damping_per_circuit: float = 0.0

    def __post_init__(self):
        if self.overrotation_sigma < 0.0:
            raise ValueError("overrotation_sigma must be >= 0")
        for name in ("depolarizing_per_g", "damping_per_circuit"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def is_zero(self) -> bool:
        return (
            self.overrotation_sigma == 0.0
            and self.depolarizing_per_g == 0.0
            and self.damping_per_circuit == 0.0
        )


@dataclass(frozen=True)
class MeasurementRecord:
    """Counts for one measurement setting.

    counts follows the computational-basis outcome order after the setting's
    prerotations. frequencies() is what reconstruction consumes, so exact
    (infinite-shot) surrogates can carry probabilities instead of counts.
    """

    setting: tuple[str, str]
    counts: tuple[float, float, float, float]
    shots: int

    def frequencies(self) -> np.ndarray:
        total = float(sum(self.counts))
        if total <= 0.0:
            raise ValueError("record has no counts")
        return np.asarray(self.counts, dtype=float) / total


def _check_density(rho: np.ndarray, tol: Tolerances, what: str) -> np.ndarray:
    m = _as_complex(rho)
    if np.max(np.abs(m - m.conj().T)) > 1e-9:
        raise ValueError(f"{what} is not Hermitian")
    if abs(np.trace(m).real - 1.0) > 1e-9 or abs(np.trace(m).imag) > 1e-9:
        raise ValueError(f"{what} does not have unit trace")
    if np.min(np.linalg.eigvalsh(m)) < -1e-9:
        raise ValueError(f"{what} has a negative eigenvalue")
    return m


def _embed_batch(m: np.ndarray, target: int) -> np.ndarray:
    """kron with identity on the other qubit, batched over leading axes."""
    eye = np.eye(2, dtype=complex)
    if target == 0:
        return np.einsum("...ij,kl->...ikjl", m, eye).reshape(m.shape[:-2] + (4, 4))
    return np.einsum("ij,...kl->...ikjl", eye, m).reshape(m.shape[:-2] + (4, 4))


def _r_batch(theta: np.ndarray, phi: float) -> np.ndarray:
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    out = np.empty(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -1j * np.exp(-1j * phi) * s
    out[..., 1, 0] = -1j * np.exp(1j * phi) * s
    out[..., 1, 1] = c
    return out


def _damping_kraus(gamma: float) -> list[np.ndarray]:
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def _apply_damping(rho: np.ndarray, gamma: float) -> np.ndarray:
    if gamma == 0.0:
        return rho
    kraus = _damping_kraus(gamma)
    out = np.zeros_like(rho)
    for ka in kraus:
        for kb in kraus:
            k = np.kron(ka, kb)
            out = out + k @ rho @ k.conj().T
    return out


def _run_pulses(
    rho: np.ndarray,
    pulses: Sequence[GateElement],
    noise: NoiseModel,
    rng: SeededRng | None,
) -> np.ndarray:
    """Evolve a batch of density matrices (leading axes arbitrary) through
    the pulse list under one fresh noise realization per batch entry."""
    batch = rho.shape[:-2]
    mixer = np.eye(4, dtype=complex) / 4.0
    for pulse in pulses:
        if pulse.kind == "R":
            theta = np.full(batch, pulse.theta)
            if noise.overrotation_sigma > 0.0:
                eps = rng.generator.normal(0.0, noise.overrotation_sigma, size=batch)
                theta = theta * (1.0 + eps)
            u = _embed_batch(_r_batch(theta, pulse.phi), pulse.target)
        elif pulse.kind == "Rz":
            u = _embed_batch(rz_gate(pulse.phiz), pulse.target)
        else:
            u = G_GATE
        rho = u @ rho @ np.conj(np.swapaxes(u, -1, -2))
        if pulse.kind == "G" and noise.depolarizing_per_g > 0.0:
            p = noise.depolarizing_per_g
            rho = (1.0 - p) * rho + p * mixer
    rho = _apply_damping(rho, noise.damping_per_circuit)
    return 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))


def apply_channel(
    rho: np.ndarray,
    pulses: Sequence[GateElement],
    noise: NoiseModel,
    rng: SeededRng | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """One noise realization of the pulse sequence acting on rho.

    rng may be omitted only when the noise model draws nothing
    (overrotation_sigma == 0).
    """
    m = _check_density(rho, tol, "apply_channel input")
    if noise.overrotation_sigma > 0.0 and rng is None:
        raise ValueError("stochastic noise requires an rng")
    return _run_pulses(m, pulses, noise, rng)


def _setting_frame(setting: Sequence[str]) -> np.ndarray:
    a, b = setting
    try:
        return np.kron(_PREROTATION[a], _PREROTATION[b])
    except KeyError as exc:
        raise ValueError(f"unknown measurement axis {exc.args[0]!r}") from None


def setting_probabilities(rho: np.ndarray, setting: Sequence[str]) -> np.ndarray:
    """Born probabilities of the four outcomes in one measurement setting.

    Works on a single density matrix or a batch (leading axes)."""
    w = _setting_frame(setting)
    rotated = w @ rho @ w.conj().T
    p = np.real(np.diagonal(rotated, axis1=-2, axis2=-1))
    p = np.clip(p, 0.0, None)
    return p / np.sum(p, axis=-1, keepdims=True)


def measure(
    rho: np.ndarray,
    setting: Sequence[str],
    shots: int,
    rng: SeededRng,
) -> MeasurementRecord:
    """Sample shot outcomes for one setting from a single density matrix."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    p = setting_probabilities(rho, setting)
    counts = rng.generator.multinomial(shots, p)
    return MeasurementRecord(
        setting=(setting[0], setting[1]),
        counts=tuple(int(c) for c in counts),
        shots=shots,
    )


def _measure_batch(
    rhos: np.ndarray,
    setting: Sequence[str],
    rng: SeededRng,
) -> MeasurementRecord:
    """One shot from each density matrix in the batch."""
    p = setting_probabilities(rhos, setting)
    edges = np.cumsum(p, axis=-1)
    u = rng.generator.random(p.shape[0])
    outcome = np.sum(u[:, None] >= edges[:, :-1], axis=-1)
    counts = np.bincount(outcome, minlength=4)
    return MeasurementRecord(
        setting=(setting[0], setting[1]),
        counts=tuple(int(c) for c in counts),
        shots=int(p.shape[0]),
    )


def run_experiment(
    u: np.ndarray,
    label: "InputStateLabel | Sequence[str]",
    noise: NoiseModel,
    shots_per_setting: int,
    rng: SeededRng,
    tol: Tolerances = DEFAULT_TOL,
) -> list[MeasurementRecord]:
    """Compile u, prepare the labeled product state, execute the pulse
    sequence, and measure all nine settings.

    The input matrix is polar-projected onto the nearest unitary after a
    loose sanity gate, so matrices quoted to a few decimals are accepted.
    Every shot sees a fresh noise realization; with a noiseless model the
    final state is deterministic and shots are sampled in one batch.
    """
    if shots_per_setting <= 0:
        raise ValueError("shots_per_setting must be positive")
    m = _as_complex(u)
    _require_unitary(m, tol.input_unitarity, "run_experiment input")
    pulses = lower_to_pulses(decompose(nearest_unitary(m), tol))
    psi = input_state(label)
    rho0 = np.outer(psi, psi.conj())

    records = []
    if noise.is_zero:
        rho = _run_pulses(rho0, pulses, noise, None)
        for setting in MEASUREMENT_SETTINGS:
            records.append(measure(rho, setting, shots_per_setting, rng))
    else:
        for setting in MEASUREMENT_SETTINGS:
            batch = np.broadcast_to(
                rho0, (shots_per_setting, 4, 4)
            ).copy()
            rhos = _run_pulses(batch, pulses, noise, rng)
            records.append(_measure_batch(rhos, setting, rng))
    return records


def _exact_records(
    rho: np.ndarray, shots_label: int = 1
) -> list[MeasurementRecord]:
    """Infinite-shot surrogate: records carrying Born probabilities."""
    out = []
    for setting in MEASUREMENT_SETTINGS:
        p = setting_probabilities(rho, setting)
        out.append(
            MeasurementRecord(
                setting=(setting[0], setting[1]),
                counts=tuple(float(x) for x in p),
                shots=shots_label,
            )
        )
    return out


def exact_experiment(
    u: np.ndarray,
    label: "InputStateLabel | Sequence[str]",
    tol: Tolerances = DEFAULT_TOL,
) -> list[MeasurementRecord]:
    """Infinite-shot records of the noiseless circuit: the records carry
    exact Born probabilities instead of sampled counts."""
    m = _as_complex(u)
    _require_unitary(m, tol.input_unitarity, "exact_experiment input")
    pulses = lower_to_pulses(decompose(nearest_unitary(m), tol))
    psi = input_state(label)
    rho = _run_pulses(np.outer(psi, psi.conj()), pulses, NoiseModel(), None)
    return _exact_records(rho)


# Stored profile for demonstration runs: tuned so the packaged benchmark's
# mean reconstructed-state fidelity lands near 0.79 at 100 shots per
# setting (0.789 to 0.793 over several seeds at 160 operations).
CALIBRATED_NOISE = NoiseModel(
    overrotation_sigma=0.06,
    depolarizing_per_g=0.07,
    damping_per_circuit=0.05,
)
