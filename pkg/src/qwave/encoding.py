"""Amplitude-phase encoding of complex values into single-qubit rotations.

A value v with |v| <= 1 maps to a unitary rho(v) whose first column is
(v, sqrt(1-|v|^2)): a Y-rotation by 2*arccos(|v|) followed by a phase on the
|0> component. Applying rho(f(x)) to a fresh ancilla, controlled on the index
register being |x>, writes f into the ancilla-0 amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, ShapeError
from .statevector import QubitLayout, Statevector, apply_controlled_unitary

# Headroom below magnitude 1 so arccos stays well conditioned and the
# complement sqrt(1-|v|^2) never goes negative under roundoff.
EPSILON = 1e-9

# Slack for magnitudes produced by the rescaling itself (one multiply of
# already-validated floats).
_BOUND_SLACK = 1e-12


def magnitude_angle(value: complex) -> float:
    """arccos of |value|, in [0, pi/2]. Magnitude above 1 is an error."""
    mag = abs(value)
    if mag > 1.0 + 1e-12:
        raise NormalizationError(f"|value| = {mag} exceeds 1")
    return float(np.arccos(min(mag, 1.0)))


def build_mu(value: complex) -> np.ndarray:
    """Y-rotation placing |value| on the |0> amplitude: R_y(2*arccos|value|)."""
    theta = magnitude_angle(value)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def build_phi(value: complex) -> np.ndarray:
    """Phase of `value` applied to |0>, identity on |1>. arg(0) is taken as 0."""
    magnitude_angle(value)  # same domain check as the rotation half
    phase = np.exp(1j * np.angle(value))
    return np.array([[phase, 0.0], [0.0, 1.0]], dtype=np.complex128)


def build_rho(value: complex) -> np.ndarray:
    """Fused encoder phi(value) @ mu(value); rho[0, 0] equals value exactly."""
    return build_phi(value) @ build_mu(value)


@dataclass(frozen=True)
class SignalChunk:
    """A power-of-two block of complex samples with magnitudes <= 1 - EPSILON.

    `scale` is the factor the raw samples were multiplied by at ingestion
    (1.0 when no rescaling was needed); callers divide by it to undo.
    """

    values: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.ndim != 1:
            raise ShapeError(f"chunk must be 1-D, got shape {values.shape}")
        size = values.size
        if size < 2 or size & (size - 1):
            raise ShapeError(f"chunk length must be a power of two >= 2, got {size}")
        max_mag = float(np.abs(values).max())
        if max_mag > (1.0 - EPSILON) * (1.0 + _BOUND_SLACK):
            raise NormalizationError(
                f"max |value| = {max_mag} exceeds the {1.0 - EPSILON} bound; "
                "use SignalChunk.from_values to rescale"
            )
        if self.scale <= 0:
            raise NormalizationError(f"scale must be positive, got {self.scale}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, raw, scale: float = 1.0) -> "SignalChunk":
        """Build a chunk, rescaling into the magnitude bound when needed.

        A signal whose peak magnitude exceeds 1 - EPSILON is multiplied by
        (1 - EPSILON) / peak and the combined factor is recorded in `scale`.
        """
        raw = np.asarray(raw, dtype=np.complex128)
        max_mag = float(np.abs(raw).max()) if raw.size else 0.0
        if max_mag > 1.0 - EPSILON:
            factor = (1.0 - EPSILON) / max_mag
            return cls(raw * factor, scale * factor)
        return cls(raw, scale)

    @classmethod
    def full_scale(cls, raw, scale: float = 1.0) -> "SignalChunk":
        """Scale so the peak magnitude sits exactly on the bound.

        Used for Fourier coefficient vectors, which are normalized to full
        range whether or not they already fit; an all-zero input is kept
        as-is. The factor multiplies into `scale` like in from_values.
        """
        raw = np.asarray(raw, dtype=np.complex128)
        peak = float(np.abs(raw).max()) if raw.size else 0.0
        if peak == 0.0:
            return cls(raw, scale)
        factor = (1.0 - EPSILON) / peak
        return cls(raw * factor, scale * factor)

    @property
    def n(self) -> int:
        return int(self.values.size).bit_length() - 1

    def __len__(self) -> int:
        return int(self.values.size)

    def complement(self) -> np.ndarray:
        """sqrt(1 - |values|^2), the amplitude left on the ancilla-1 branch."""
        return np.sqrt(np.maximum(0.0, 1.0 - np.abs(self.values) ** 2))


def encode_function(
    state: Statevector,
    layout: QubitLayout,
    signal: SignalChunk,
    ancilla: int,
) -> Statevector:
    """Write `signal` onto `ancilla` with one controlled rho per index value.

    For each x in ascending order applies rho(signal[x]) to the ancilla,
    controlled on the index register reading x. Assumes the ancilla qubit is
    currently in the |0> factor (not checked; callers prepare it that way).
    """
    if ancilla not in layout.ancillae:
        raise ShapeError(f"qubit {ancilla} is not an ancilla of the layout")
    n = layout.n
    if len(signal) != (1 << n):
        raise ShapeError(
            f"signal has {len(signal)} samples but the register addresses {1 << n}"
        )
    if layout.num_qubits > state.num_qubits:
        raise ShapeError("layout does not fit in the state")
    for x in range(1 << n):
        apply_controlled_unitary(
            state, layout.controls_for_index(x), ancilla, build_rho(signal.values[x])
        )
    return state
