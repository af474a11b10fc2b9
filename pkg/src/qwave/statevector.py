"""Dense statevector engine.

Amplitudes are a single complex128 array of length 2**num_qubits. Basis
states are indexed little-endian in bit position: qubit p is bit p of the
basis integer, so |b_{n-1} ... b_1 b_0> sits at index sum_p b_p * 2**p.

Gates are applied as direct amplitude-pair updates on index arrays rather
than through matrix products or gate decompositions. All apply_* functions
mutate the state in place and return it, so calls can be chained.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, ShapeError, StateError

MAX_QUBITS = 26

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


@dataclass
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray | None = None

    def __post_init__(self):
        if not isinstance(self.num_qubits, (int, np.integer)):
            raise TypeError("num_qubits must be an integer")
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ResourceLimitError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        if self.amplitudes is None:
            amps = np.zeros(1 << self.num_qubits, dtype=np.complex128)
            amps[0] = 1.0
            self.amplitudes = amps
        else:
            amps = np.asarray(self.amplitudes, dtype=np.complex128)
            if amps.shape != (1 << self.num_qubits,):
                raise ShapeError(
                    f"expected {1 << self.num_qubits} amplitudes, got shape {amps.shape}"
                )
            self.amplitudes = amps

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class QubitLayout:
    """Which bit positions hold the index register and which hold ancillae.

    ``index_register`` is ordered most significant first, so the register
    value x of a basis integer b is read directly off those bits. ``ancillae``
    lists the product ancillae with t_f first. The standard layout keeps the
    register in the high bits and ancillae in the low bits, which makes the
    (t_f, t_g) component of index x live at b = x * 4 + 2*t_f + t_g.
    """

    index_register: tuple[int, ...]
    ancillae: tuple[int, ...]

    def __post_init__(self):
        positions = self.index_register + self.ancillae
        if len(positions) == 0 or len(self.index_register) == 0:
            raise ShapeError("layout needs a non-empty index register")
        if any(p < 0 for p in positions):
            raise ShapeError(f"negative qubit position in layout {positions}")
        if len(set(positions)) != len(positions):
            raise ShapeError(f"layout positions overlap: {positions}")

    @classmethod
    def standard(cls, n: int, num_ancillae: int = 2) -> "QubitLayout":
        register = tuple(range(n + num_ancillae - 1, num_ancillae - 1, -1))
        ancillae = tuple(range(num_ancillae - 1, -1, -1))
        return cls(register, ancillae)

    @property
    def n(self) -> int:
        return len(self.index_register)

    @property
    def num_qubits(self) -> int:
        return len(self.index_register) + len(self.ancillae)

    def controls_for_index(self, x: int) -> list[tuple[int, int]]:
        """Control pattern selecting basis states whose register value is x."""
        n = self.n
        if not 0 <= x < (1 << n):
            raise ShapeError(f"index {x} out of range for {n} register qubits")
        return [(self.index_register[n - 1 - j], (x >> j) & 1) for j in range(n)]


def init_state(num_qubits: int) -> Statevector:
    """All-zeros computational basis state |0...0>."""
    return Statevector(num_qubits)


def _check_positions(state: Statevector, positions) -> None:
    seen = set()
    for p in positions:
        if not 0 <= p < state.num_qubits:
            raise ShapeError(f"qubit {p} out of range for {state.num_qubits} qubits")
        if p in seen:
            raise ShapeError(f"qubit {p} listed twice")
        seen.add(p)


def _pair_indices(state: Statevector, target: int, controls=()) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the target=0 half of every amplitude pair selected by controls."""
    idx = np.arange(state.dim)
    keep = ((idx >> target) & 1) == 0
    for pos, bit in controls:
        keep &= ((idx >> pos) & 1) == bit
    lower = idx[keep]
    return lower, lower | (1 << target)


def apply_single_qubit(state: Statevector, qubit: int, u: np.ndarray) -> Statevector:
    return apply_controlled_unitary(state, [], qubit, u)


def apply_hadamard_layer(state: Statevector, qubits) -> Statevector:
    """Hadamard on each listed qubit (order irrelevant, they commute)."""
    qubits = list(qubits)
    _check_positions(state, qubits)
    amps = state.amplitudes
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for q in qubits:
        lo, hi = _pair_indices(state, q)
        a0 = amps[lo].copy()
        a1 = amps[hi]
        amps[lo] = (a0 + a1) * inv_sqrt2
        amps[hi] = (a0 - a1) * inv_sqrt2
    return state


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ShapeError(f"expected a 2x2 matrix, got shape {u.shape}")
    defect = np.abs(u @ u.conj().T - np.eye(2)).max()
    if defect > 1e-9:
        raise StateError(f"matrix is not unitary (defect {defect:.3e})")
    return u


def apply_controlled_unitary(state: Statevector, controls, target: int, u: np.ndarray) -> Statevector:
    """Apply u to `target` on the subspace where every (qubit, bit) control matches.

    controls: iterable of (qubit_position, required_bit). An empty list gives
    an ordinary single-qubit gate. Anti-controls are just bit=0 entries.
    """
    controls = [(int(p), int(b)) for p, b in controls]
    for _, b in controls:
        if b not in (0, 1):
            raise ShapeError(f"control bit must be 0 or 1, got {b}")
    _check_positions(state, [p for p, _ in controls] + [target])
    u = _check_unitary(u)
    lo, hi = _pair_indices(state, target, controls)
    amps = state.amplitudes
    a0 = amps[lo].copy()
    a1 = amps[hi]
    amps[lo] = u[0, 0] * a0 + u[0, 1] * a1
    amps[hi] = u[1, 0] * a0 + u[1, 1] * a1
    return state


def apply_qft(state: Statevector, register, inverse: bool = False) -> Statevector:
    """Fourier transform on the register factor, other qubits untouched.

    `register` lists bit positions most significant first; the transform sends
    amplitude c(x) to (1/sqrt(M)) * sum_y exp(-2j*pi*x*y/M) c(y) over register
    values, M = 2**len(register). `inverse=True` applies the exact adjoint.
    Spectator qubits may be entangled with the register; the transform acts on
    the register index of every amplitude.
    """
    register = list(register)
    if not register:
        raise ShapeError("register must name at least one qubit")
    _check_positions(state, register)
    nq = state.num_qubits
    m = len(register)
    big_m = 1 << m
    # axis k of the reshaped tensor is bit position nq-1-k
    axes = [nq - 1 - p for p in register]
    psi = state.amplitudes.reshape((2,) * nq)
    psi = np.moveaxis(psi, axes, range(m))
    moved_shape = psi.shape
    flat = psi.reshape(big_m, -1)
    if inverse:
        flat = np.fft.ifft(flat, axis=0, norm="ortho")
    else:
        flat = np.fft.fft(flat, axis=0, norm="ortho")
    psi = flat.reshape(moved_shape)
    psi = np.moveaxis(psi, range(m), axes)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def inner_product(a: Statevector, b: Statevector) -> complex:
    """<a|b> with the conjugate on the first argument."""
    if a.num_qubits != b.num_qubits:
        raise ShapeError(
            f"states have different sizes: {a.num_qubits} vs {b.num_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))
