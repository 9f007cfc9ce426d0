"""Local operations on subsystems: linear Kraus channels, plus the two
nonstandard maps used by the steering analysis — a probability-shifting
nonlinear filter and a probability-preserving antilinear map.

The nonlinear filter is defined on pure global states only.  Its matrix
``diag(1, lambda)`` acts on one qubit and the *global renormalization* that
follows is what makes the map nonlinear: for ``lambda != 1`` it cannot be
written as any completely positive trace-preserving map, and it shifts
branch weights in a way no local linear channel can.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .seeding import as_generator
from .statevec import (
    NORM_TOL,
    DensityMatrix,
    GateSpec,
    RegisterLayout,
    StateVector,
    _apply_matrix,
    apply_gate,
)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Finite set of equal-dimension Kraus operators acting on ``arity`` qubits.

    Construction checks shapes only; completeness (sum of K†K equal to the
    identity) is checked by :func:`validate_cptp` and enforced wherever a
    channel is applied.
    """

    operators: tuple
    arity: int

    def __post_init__(self):
        ops = tuple(np.array(op, dtype=np.complex128) for op in self.operators)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        dim = 2**self.arity
        for op in ops:
            if op.shape != (dim, dim):
                raise ValueError(
                    f"Kraus operators must all be {dim}x{dim} for arity {self.arity}"
                )
            op.flags.writeable = False
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True)
class NonlinearFilter:
    """One-qubit reweighting ``diag(1, lambda)`` followed by renormalization.

    ``lambda_ = 1`` is the identity; ``lambda_ = 0`` projects onto the 0
    branch of the target subsystem.
    """

    lambda_: float
    target: str

    def __post_init__(self):
        if not np.isfinite(self.lambda_) or self.lambda_ < 0.0:
            raise ValueError("filter weight must be finite and >= 0")


class CptpCheck(NamedTuple):
    valid: bool
    residual: float


def validate_cptp(channel: KrausChannel, tolerance: float = NORM_TOL) -> CptpCheck:
    """Check the completeness relation; residual is the Frobenius deviation."""
    dim = 2**channel.arity
    total = np.zeros((dim, dim), dtype=np.complex128)
    for op in channel.operators:
        total += op.conj().T @ op
    residual = float(np.linalg.norm(total - np.eye(dim)))
    return CptpCheck(residual <= tolerance, residual)


def _rows_apply(entries: np.ndarray, num_qubits: int, targets, matrix: np.ndarray) -> np.ndarray:
    """Left-multiply an operator on the row axes of a (2^n, 2^n) matrix."""
    k = len(targets)
    dim = 2**num_qubits
    tensor = entries.reshape([2] * num_qubits + [dim])
    tensor = np.moveaxis(tensor, targets, range(k))
    tensor = matrix @ tensor.reshape(2**k, -1)
    tensor = np.moveaxis(tensor.reshape([2] * num_qubits + [dim]), range(k), targets)
    return np.ascontiguousarray(tensor).reshape(dim, dim)


def apply_local_channel(state, layout: RegisterLayout, subsystem: str, channel: KrausChannel) -> DensityMatrix:
    """Apply a channel to one subsystem, identity elsewhere; returns the full
    register's density matrix.

    Accepts a StateVector or DensityMatrix.  The channel must pass
    :func:`validate_cptp`.
    """
    targets = layout.qubits(subsystem)
    if len(targets) != channel.arity:
        raise ValueError(
            f"channel arity {channel.arity} does not match subsystem "
            f"{subsystem!r} of {len(targets)} qubit(s)"
        )
    ok, residual = validate_cptp(channel)
    if not ok:
        raise ValueError(f"channel violates completeness (residual {residual:.3e})")
    n = layout.total_qubits
    dim = 2**n
    out = np.zeros((dim, dim), dtype=np.complex128)
    if isinstance(state, StateVector):
        for op in channel.operators:
            branch = _apply_matrix(state.amplitudes, n, targets, op)
            out += np.outer(branch, branch.conj())
    else:
        for op in channel.operators:
            left = _rows_apply(state.entries, n, targets, op)
            # right-multiplication by K† via transposes: rho K† = (conj(K) rho^T)^T
            out += _rows_apply(left.T, n, targets, op.conj()).T
    return DensityMatrix(out, n)


def random_channel(arity: int, num_kraus: int, rng) -> KrausChannel:
    """Random CPTP channel: Ginibre operators normalized by the inverse square
    root of their completeness sum.  Deterministic per seed; a single Kraus
    operator comes out unitary.
    """
    if num_kraus < 1:
        raise ValueError("num_kraus must be >= 1")
    gen = as_generator(rng)
    dim = 2**arity
    raw = []
    for _ in range(num_kraus):
        real = gen.standard_normal((dim, dim))
        imag = gen.standard_normal((dim, dim))
        raw.append((real + 1j * imag) / np.sqrt(2.0))
    total = np.zeros((dim, dim), dtype=np.complex128)
    for op in raw:
        total += op.conj().T @ op
    eigenvalues, vectors = np.linalg.eigh(total)
    inv_sqrt = vectors @ np.diag(eigenvalues**-0.5) @ vectors.conj().T
    return KrausChannel(tuple(op @ inv_sqrt for op in raw), arity)


def apply_nonlinear_filter(state: StateVector, layout: RegisterLayout, filt: NonlinearFilter) -> StateVector:
    """Reweight the target qubit's branches by ``diag(1, lambda)`` and
    renormalize the global state.

    Raises when the filtered state has no remaining support (lambda = 0 with
    nothing on the target's 0 branch).
    """
    targets = layout.qubits(filt.target)
    if len(targets) != 1:
        raise ValueError("nonlinear filter acts on a one-qubit subsystem")
    if filt.lambda_ == 1.0:
        return state
    weights = np.array([[1.0, 0.0], [0.0, filt.lambda_]], dtype=np.complex128)
    filtered = _apply_matrix(state.amplitudes, state.num_qubits, targets, weights)
    norm = float(np.linalg.norm(filtered))
    if norm <= NORM_TOL:
        raise ValueError(
            "degenerate filter: weight 0 with no support on the target's 0 branch"
        )
    return StateVector(filtered / norm, state.num_qubits)


def nonlinear_probabilities(c0: complex, c1: complex, lambda_: float):
    """Shifted two-branch outcome probabilities after the filter.

    For amplitudes (c0, c1) the filter turns the Born weights into
    ``|c0|^2 / (|c0|^2 + lambda^2 |c1|^2)`` and its complement.
    """
    p0 = abs(c0) ** 2
    p1 = abs(c1) ** 2
    if abs(p0 + p1 - 1.0) > NORM_TOL:
        raise ValueError("branch amplitudes must be normalized")
    if lambda_ < 0.0 or not np.isfinite(lambda_):
        raise ValueError("filter weight must be finite and >= 0")
    denominator = p0 + lambda_**2 * p1
    if denominator <= 0.0:
        raise ValueError("filter annihilates both branches")
    return p0 / denominator, lambda_**2 * p1 / denominator


def apply_antilinear(state: StateVector, post_unitary: "GateSpec | None" = None) -> StateVector:
    """Conjugate all amplitudes, then optionally apply a unitary.

    Nonlinear as a map on states, but it never changes any subsystem's Born
    probabilities, so it cannot shift branch weights.
    """
    conjugated = StateVector(state.amplitudes.conj(), state.num_qubits)
    if post_unitary is None:
        return conjugated
    return apply_gate(conjugated, post_unitary)
