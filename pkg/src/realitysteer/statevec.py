"""Dense pure-state and density-matrix core for small composite qubit registers.

Conventions fixed here and relied on everywhere else:

- Amplitude ordering is big-endian over the register: qubit 0 is the most
  significant bit of a basis index.  For a layout listing subsystems
  (C, B, E) of one qubit each, the basis label "011" (C=0, B=1, E=1) sits
  at index 3.
- Complex arithmetic is 64-bit floating point.  Norms, traces, and
  unitarity are enforced within ``NORM_TOL``; exact circuit identities are
  compared at ``EXACT_TOL``.
- Values are immutable after construction; operations return new values and
  are safe to share between threads.
"""

from dataclasses import dataclass

import numpy as np

from .seeding import as_generator, draw_index

NORM_TOL = 1e-10
EXACT_TOL = 1e-12

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def _frozen_array(values, dtype=np.complex128) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


def _is_unitary(matrix: np.ndarray) -> bool:
    d = matrix.shape[0]
    return matrix.shape == (d, d) and bool(
        np.max(np.abs(matrix.conj().T @ matrix - np.eye(d))) <= NORM_TOL
    )


@dataclass(frozen=True)
class RegisterLayout:
    """Named partition of a qubit register into ordered subsystems.

    The qubit indices of all subsystems together must cover
    ``0..total_qubits-1`` exactly once, and names must be unique.  The
    first-listed subsystem holds the most significant bits of every basis
    index.
    """

    subsystems: tuple
    total_qubits: int

    def __post_init__(self):
        names = [name for name, _ in self.subsystems]
        if len(set(names)) != len(names):
            raise ValueError("subsystem names must be unique")
        covered = sorted(q for _, qubits in self.subsystems for q in qubits)
        if covered != list(range(self.total_qubits)):
            raise ValueError(
                "subsystem qubit indices must partition 0..total_qubits-1 "
                "with no overlap and no gaps"
            )

    @classmethod
    def from_sizes(cls, sizes) -> "RegisterLayout":
        """Assign consecutive qubit blocks, e.g. ``from_sizes([("C", 1), ("B", 2)])``."""
        subsystems = []
        next_qubit = 0
        for name, width in sizes:
            if width < 1:
                raise ValueError(f"subsystem {name!r} needs at least one qubit")
            subsystems.append((str(name), tuple(range(next_qubit, next_qubit + width))))
            next_qubit += width
        return cls(subsystems=tuple(subsystems), total_qubits=next_qubit)

    @property
    def names(self):
        return tuple(name for name, _ in self.subsystems)

    def qubits(self, name: str):
        for sub_name, qubits in self.subsystems:
            if sub_name == name:
                return qubits
        raise KeyError(f"unknown subsystem {name!r}")

    def size(self, name: str) -> int:
        return len(self.qubits(name))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of a composite qubit register."""

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = _frozen_array(self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, expected 2**{self.num_qubits}"
            )
        deviation = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
        if deviation > NORM_TOL:
            raise ValueError(f"squared norm deviates from 1 by {deviation:.3e}")

    @property
    def dim(self) -> int:
        return 2**self.num_qubits


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator on k qubits."""

    entries: np.ndarray
    num_qubits: int

    def __post_init__(self):
        mat = _frozen_array(self.entries)
        object.__setattr__(self, "entries", mat)
        dim = 2**self.num_qubits
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape}, expected ({dim}, {dim})")
        if float(np.max(np.abs(mat - mat.conj().T))) > NORM_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        trace_deviation = abs(complex(np.trace(mat)) - 1.0)
        if trace_deviation > NORM_TOL:
            raise ValueError(f"trace deviates from 1 by {trace_deviation:.3e}")
        if float(np.linalg.eigvalsh(mat)[0]) < -NORM_TOL:
            raise ValueError("matrix has an eigenvalue below -1e-10")

    @property
    def dim(self) -> int:
        return 2**self.num_qubits


@dataclass(frozen=True, eq=False)
class GateSpec:
    """A unitary to apply to specific qubits.

    ``kind`` is one of ``x``, ``h``, ``cnot``, ``swap``, ``u``
    (arbitrary unitary on all targets) or ``controlled-u`` (matrix acts on
    the trailing targets when every leading control qubit is 1).  For
    ``cnot`` the targets are (control, target).
    """

    kind: str
    targets: tuple
    matrix: "np.ndarray | None" = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("gate targets must be distinct")
        if any(t < 0 for t in self.targets):
            raise ValueError("gate targets must be non-negative")
        fixed_arity = {"x": 1, "h": 1, "cnot": 2, "swap": 2}
        if self.kind in fixed_arity:
            if len(self.targets) != fixed_arity[self.kind]:
                raise ValueError(f"{self.kind} takes {fixed_arity[self.kind]} target(s)")
            if self.matrix is not None:
                raise ValueError(f"{self.kind} does not take an explicit matrix")
        elif self.kind in ("u", "controlled-u"):
            if self.matrix is None:
                raise ValueError(f"{self.kind} requires a matrix")
            mat = _frozen_array(self.matrix)
            object.__setattr__(self, "matrix", mat)
            if not _is_unitary(mat):
                raise ValueError("gate matrix is not unitary within tolerance")
            acted = int(np.log2(mat.shape[0]))
            if 2**acted != mat.shape[0]:
                raise ValueError("gate matrix dimension must be a power of two")
            if self.kind == "u" and acted != len(self.targets):
                raise ValueError("matrix dimension must match number of targets")
            if self.kind == "controlled-u" and not 0 < acted < len(self.targets):
                raise ValueError("controlled-u needs at least one control qubit")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @classmethod
    def x(cls, qubit: int) -> "GateSpec":
        return cls("x", (qubit,))

    @classmethod
    def h(cls, qubit: int) -> "GateSpec":
        return cls("h", (qubit,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "GateSpec":
        return cls("cnot", (control, target))

    @classmethod
    def swap(cls, qubit_a: int, qubit_b: int) -> "GateSpec":
        return cls("swap", (qubit_a, qubit_b))

    @classmethod
    def unitary(cls, matrix, targets) -> "GateSpec":
        return cls("u", tuple(targets), _frozen_array(matrix))

    @classmethod
    def controlled(cls, matrix, controls, targets) -> "GateSpec":
        return cls("controlled-u", tuple(controls) + tuple(targets), _frozen_array(matrix))

    def resolved_matrix(self) -> np.ndarray:
        """Concrete 2^k x 2^k unitary over ``targets`` in listed order."""
        if self.kind == "x":
            return _X
        if self.kind == "h":
            return _H
        if self.kind == "cnot":
            return _CNOT
        if self.kind == "swap":
            return _SWAP
        if self.kind == "u":
            return np.asarray(self.matrix)
        # controlled-u: identity except the all-controls-1 block
        dim = 2 ** len(self.targets)
        acted = self.matrix.shape[0]
        full = np.eye(dim, dtype=np.complex128)
        full[dim - acted :, dim - acted :] = self.matrix
        return full


def _apply_matrix(amps: np.ndarray, num_qubits: int, targets, matrix: np.ndarray) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the listed qubit axes of a state vector."""
    k = len(targets)
    psi = amps.reshape([2] * num_qubits)
    psi = np.moveaxis(psi, targets, range(k))
    psi = matrix @ psi.reshape(2**k, -1)
    psi = np.moveaxis(psi.reshape([2] * num_qubits), range(k), targets)
    return np.ascontiguousarray(psi).reshape(-1)


def apply_gate(state: StateVector, gate: GateSpec) -> StateVector:
    """Apply a unitary gate, identity on all qubits outside its targets."""
    if any(t >= state.num_qubits for t in gate.targets):
        raise ValueError(
            f"gate targets {gate.targets} out of range for {state.num_qubits} qubits"
        )
    new_amps = _apply_matrix(
        state.amplitudes, state.num_qubits, gate.targets, gate.resolved_matrix()
    )
    return StateVector(new_amps, state.num_qubits)


def basis_index(layout: RegisterLayout, values) -> int:
    """Basis index for per-subsystem values, e.g. ``{"C": 1, "B": 0}``.

    Values may be ints (the subsystem's own basis index) or bit strings.
    Unlisted subsystems default to 0.
    """
    index = 0
    for name, value in values.items():
        qubits = layout.qubits(name)
        if isinstance(value, str):
            if len(value) != len(qubits):
                raise ValueError(
                    f"label for {name!r} has length {len(value)}, expected {len(qubits)}"
                )
            value = int(value, 2)
        value = int(value)
        if not 0 <= value < 2 ** len(qubits):
            raise ValueError(f"value {value} out of range for subsystem {name!r}")
        for position, qubit in enumerate(qubits):
            bit = (value >> (len(qubits) - 1 - position)) & 1
            index |= bit << (layout.total_qubits - 1 - qubit)
    return index


def init_register(layout: RegisterLayout, basis_label) -> StateVector:
    """Computational basis state from a full bit string or per-subsystem values.

    ``init_register(layout, "010")`` reads one bit per qubit in layout order;
    ``init_register(layout, {"C": "1"})`` sets named subsystems and leaves the
    rest blank.
    """
    if isinstance(basis_label, str):
        if len(basis_label) != layout.total_qubits:
            raise ValueError(
                f"label length {len(basis_label)} does not match register "
                f"size {layout.total_qubits}"
            )
        if set(basis_label) - {"0", "1"}:
            raise ValueError("basis label must contain only 0s and 1s")
        index = int(basis_label, 2)
    else:
        index = basis_index(layout, basis_label)
    amps = np.zeros(2**layout.total_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, layout.total_qubits)


def _subsystem_axes(layout: RegisterLayout, keep) -> tuple:
    if isinstance(keep, str):
        keep = [keep]
    keep = list(keep)
    if not keep:
        raise ValueError("keep list must not be empty")
    qubits = []
    for name in keep:
        qubits.extend(layout.qubits(name))
    return keep, qubits


def partial_trace(state, layout: RegisterLayout, keep) -> DensityMatrix:
    """Reduced density matrix over the kept subsystems, in keep-list order.

    Accepts a StateVector or DensityMatrix over the full layout.
    """
    _, keep_qubits = _subsystem_axes(layout, keep)
    n = layout.total_qubits
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape([2] * n)
        psi = np.moveaxis(psi, keep_qubits, range(len(keep_qubits)))
        block = psi.reshape(2 ** len(keep_qubits), -1)
        reduced = block @ block.conj().T
    else:
        kept = set(keep_qubits)
        tensor = state.entries.reshape([2] * (2 * n))
        row_labels = [0] * n
        next_label = 0
        for q in range(n):
            row_labels[q] = next_label
            next_label += 1
        col_labels = list(row_labels)
        for q in range(n):
            if q not in kept:
                continue
            col_labels[q] = next_label
            next_label += 1
        out_labels = [row_labels[q] for q in keep_qubits] + [
            col_labels[q] for q in keep_qubits
        ]
        reduced = np.einsum(tensor, row_labels + col_labels, out_labels)
        d = 2 ** len(keep_qubits)
        reduced = reduced.reshape(d, d)
    return DensityMatrix(reduced, len(keep_qubits))


def born_probabilities(state: StateVector, layout: RegisterLayout, subsystem: str) -> np.ndarray:
    """Measurement probability table over a subsystem's computational basis."""
    qubits = layout.qubits(subsystem)
    psi = state.amplitudes.reshape([2] * state.num_qubits)
    psi = np.moveaxis(psi, qubits, range(len(qubits)))
    probs = np.sum(np.abs(psi.reshape(2 ** len(qubits), -1)) ** 2, axis=1)
    total_deviation = abs(float(probs.sum()) - 1.0)
    if total_deviation > NORM_TOL:
        raise AssertionError(f"probability table sums off unity by {total_deviation:.3e}")
    return probs


def project_onto(state: StateVector, layout: RegisterLayout, subsystem: str, value: int) -> StateVector:
    """Project onto ``subsystem == value`` and renormalize."""
    qubits = layout.qubits(subsystem)
    if not 0 <= value < 2 ** len(qubits):
        raise ValueError(f"value {value} out of range for subsystem {subsystem!r}")
    n = state.num_qubits
    psi = np.array(state.amplitudes)
    psi = np.moveaxis(psi.reshape([2] * n), qubits, range(len(qubits)))
    block = psi.reshape(2 ** len(qubits), -1)
    weight = float(np.sum(np.abs(block[value]) ** 2))
    if weight <= NORM_TOL:
        raise ValueError(
            f"projection of {subsystem!r} onto value {value} has probability ~0"
        )
    kept = block[value] / np.sqrt(weight)
    block[...] = 0.0
    block[value] = kept
    psi = np.moveaxis(block.reshape([2] * n), range(len(qubits)), qubits)
    return StateVector(np.ascontiguousarray(psi).reshape(-1), n)


def sample_outcome(state: StateVector, layout: RegisterLayout, subsystem: str, rng):
    """Born-rule draw on a subsystem; returns (outcome, renormalized post-state).

    ``rng`` is an integer seed or a Generator; identical seed and state give
    an identical outcome.
    """
    probs = born_probabilities(state, layout, subsystem)
    outcome = draw_index(as_generator(rng), probs)
    return outcome, project_onto(state, layout, subsystem, outcome)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); 1 for pure states, 1/2^k for the maximally mixed state."""
    return float(np.real(np.trace(rho.entries @ rho.entries)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; eigenvalues in [-1e-10, 0) are clipped to 0."""
    eigenvalues = np.linalg.eigvalsh(rho.entries)
    eigenvalues = np.where(eigenvalues < 0.0, 0.0, eigenvalues)
    positive = eigenvalues[eigenvalues > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Half the trace norm of the difference, in [0, 1]."""
    if rho1.num_qubits != rho2.num_qubits:
        raise ValueError("trace_distance requires equal dimensions")
    eigenvalues = np.linalg.eigvalsh(rho1.entries - rho2.entries)
    return float(0.5 * np.sum(np.abs(eigenvalues)))
