"""Product and convolution pipelines built on the statevector engine.

The two-ancilla product state over N = 2**n indices is

    (1/sqrt(N)) sum_x |x> (f*g|00> + f*g~|01> + f~*g|10> + f~*g~|11>)

with h~ = sqrt(1-|h|^2), so the |00> slice times sqrt(N) is the pointwise
product. Circular convolution reuses the same state on Fourier coefficients,
then undoes the transform on the index register.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import SignalChunk, encode_function
from .errors import ShapeError
from .statevector import (
    QubitLayout,
    Statevector,
    apply_hadamard_layer,
    apply_qft,
    init_state,
)

COMPONENTS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _component_offset(component) -> int:
    bf, bg = component
    if bf not in (0, 1) or bg not in (0, 1):
        raise ShapeError(f"component must be a pair of bits, got {component}")
    return 2 * bf + bg


@dataclass(frozen=True)
class ProductState:
    """Prepared two-ancilla state plus the ingestion scales of its inputs."""

    state: Statevector
    layout: QubitLayout
    scale_f: float = 1.0
    scale_g: float = 1.0

    @property
    def n(self) -> int:
        return self.layout.n


def pointwise_multiply_state(f: SignalChunk, g: SignalChunk) -> ProductState:
    """Encode f on ancilla t_f and g on t_g over a uniform index register."""
    if len(f) != len(g):
        raise ShapeError(f"signals differ in length: {len(f)} vs {len(g)}")
    n = f.n
    layout = QubitLayout.standard(n, num_ancillae=2)
    state = init_state(n + 2)
    apply_hadamard_layer(state, layout.index_register)
    t_f, t_g = layout.ancillae
    encode_function(state, layout, f, t_f)
    encode_function(state, layout, g, t_g)
    return ProductState(state, layout, f.scale, g.scale)


def extract_component(product: ProductState, component=(0, 0)) -> np.ndarray:
    """The (t_f, t_g) = component amplitudes over x, times sqrt(N).

    For (0, 0) this is exactly f*g elementwise; the sqrt(N) undoes the uniform
    superposition weight.
    """
    offset = _component_offset(component)
    big_n = 1 << product.n
    return product.state.amplitudes[offset::4] * np.sqrt(big_n)


def postselect_probability(product: ProductState, component=(0, 0)) -> float:
    """Probability of measuring the ancillae in the given pattern."""
    offset = _component_offset(component)
    slice_ = product.state.amplitudes[offset::4]
    return float(np.sum(np.abs(slice_) ** 2))


def classical_dft(values, inverse: bool = False) -> np.ndarray:
    """Direct O(M^2) discrete Fourier transform, kernel exp(-2j*pi*x*y/M).

    The inverse uses the conjugate kernel and divides by M, so
    classical_dft(classical_dft(v), inverse=True) returns v. This is the
    reference implementation the quantum transforms are checked against;
    it deliberately avoids any FFT routine.
    """
    v = np.asarray(values, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ShapeError(f"expected a non-empty 1-D array, got shape {v.shape}")
    m = v.size
    sign = 1.0 if inverse else -1.0
    ys = np.arange(m)
    out = np.empty(m, dtype=np.complex128)
    for x in range(m):
        out[x] = np.sum(v * np.exp(sign * 2j * np.pi * x * ys / m))
    if inverse:
        out /= m
    return out


def classical_circular_convolution(f, g) -> np.ndarray:
    """Brute-force circular convolution: out[k] = sum_j f[j] g[(k-j) mod M]."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if f.shape != g.shape or f.ndim != 1:
        raise ShapeError(f"need equal-length 1-D arrays, got {f.shape} and {g.shape}")
    m = f.size
    out = np.empty(m, dtype=np.complex128)
    idx = np.arange(m)
    for k in range(m):
        out[k] = np.sum(f * g[(k - idx) % m])
    return out


def zero_pad(chunk: SignalChunk, target_len: int) -> SignalChunk:
    """Extend a chunk with trailing zeros to a larger power-of-two length."""
    if target_len < len(chunk) or target_len & (target_len - 1):
        raise ShapeError(
            f"target length {target_len} must be a power of two >= {len(chunk)}"
        )
    if target_len == len(chunk):
        return chunk
    padded = np.concatenate(
        [chunk.values, np.zeros(target_len - len(chunk), dtype=np.complex128)]
    )
    return SignalChunk(padded, chunk.scale)


def _pad_array(values, target_len: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 1 or values.size == 0:
        raise ShapeError(f"expected a non-empty 1-D array, got shape {values.shape}")
    if values.size > target_len:
        raise ShapeError(f"length {values.size} exceeds padded length {target_len}")
    out = np.zeros(target_len, dtype=np.complex128)
    out[: values.size] = values
    return out


def convolve_via_theorem(f: SignalChunk, g: SignalChunk, pad_to: int) -> np.ndarray:
    """Circular convolution via the convolution theorem.

    Classically Fourier-transform the zero-padded inputs, renormalize the
    coefficient vectors into the encodable magnitude bound, load them into the
    two-ancilla product state, keep the |00> slice, and invert the transform
    on the index register. The recorded renormalization factors are divided
    back out, so the return equals classical_circular_convolution of the
    padded values up to float roundoff.
    """
    fpad = zero_pad(f, pad_to)
    gpad = zero_pad(g, pad_to)
    fhat = SignalChunk.full_scale(classical_dft(fpad.values))
    ghat = SignalChunk.full_scale(classical_dft(gpad.values))
    product = pointwise_multiply_state(fhat, ghat)
    # exact post-selection of the |00> ancilla pattern, register kept
    slice00 = product.state.amplitudes[0::4].copy()
    m = fhat.n
    register_state = Statevector(m, slice00)
    apply_qft(register_state, range(m - 1, -1, -1), inverse=True)
    return register_state.amplitudes / (fhat.scale * ghat.scale)


def convolve_optimized(f: SignalChunk, g_kernel, pad_to: int) -> np.ndarray:
    """Circular convolution with f kept in superposition throughout.

    The signal is encoded once, its ancilla-0 slice is carried forward, and
    the register is Fourier-transformed in place. Only the kernel's Fourier
    coefficients are computed classically; they are renormalized and applied
    as controlled encoders on a second ancilla. Post-selecting that ancilla
    and inverting the register transform yields the convolution, which is
    returned with the renormalization and superposition weights divided out.
    `g_kernel` is a plain time-domain array of length <= pad_to.
    """
    fpad = zero_pad(f, pad_to)
    m = fpad.n
    big_m = pad_to
    layout = QubitLayout.standard(m, num_ancillae=1)

    # stage 1: |f> on the register, encoding ancilla spent and dropped
    prep = init_state(m + 1)
    apply_hadamard_layer(prep, layout.index_register)
    encode_function(prep, layout, fpad, layout.ancillae[0])
    f_slice = prep.amplitudes[0::2].copy()  # ancilla 0, amplitude f(x)/sqrt(M)

    # stage 2: same shape of state, ancilla now holds the kernel
    state = Statevector(m + 1, np.zeros(2 * big_m, dtype=np.complex128))
    state.amplitudes[0::2] = f_slice
    apply_qft(state, layout.index_register)

    ghat = SignalChunk.full_scale(classical_dft(_pad_array(g_kernel, big_m)))
    encode_function(state, layout, ghat, layout.ancillae[0])

    kept = state.amplitudes[0::2].copy()
    register_state = Statevector(m, kept)
    apply_qft(register_state, range(m - 1, -1, -1), inverse=True)
    return register_state.amplitudes * np.sqrt(big_m) / ghat.scale
