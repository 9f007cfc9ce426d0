"""Branch-navigation storyline on a composite register.

The register models a measured system C (the cat), an observer memory B
(the brain, or "reality register"), redundant environment records E1..Em,
a clinic ancilla that receives the moved memory record (Af/A), and a
participation flag F.  A trial runs:

    prepare cat -> observe (record write into B and E1) -> spread copies
    -> sample the observer's initial branch -> (conditional) memory erase
    -> optional nonlinear filter -> reobserve -> diagnostics

Two points are easy to get wrong and are deliberate here:

- Sampling the initial branch does NOT collapse the working state.  The
  global superposition persists; the draw only tells us which branch the
  observer we follow experiences.  All erase-stage diagnostics (brain
  entropy, purity) are properties of the uncollapsed global state.
- ``reobserve`` follows the observer whose memory was actually reset: it
  conditions on the blank-memory component before re-coupling.  Branches
  where a record survived belong to observer instances that kept their
  memory; they are unreachable for the erased observer, which is exactly
  what restricts transitions to the participating family.

Record encodings: ``PLAIN`` writes the branch index itself into B (blank
and the first record coincide, a documented degeneracy); ``TAGGED``
prefixes a written-flag qubit so blank, alive records, and dead records
are mutually orthogonal.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channels import NonlinearFilter, apply_nonlinear_filter
from .seeding import as_generator, derive_seed, draw_index
from .statevec import (
    NORM_TOL,
    DensityMatrix,
    GateSpec,
    RegisterLayout,
    StateVector,
    apply_gate,
    born_probabilities,
    partial_trace,
    project_onto,
    purity,
    trace_distance,
    von_neumann_entropy,
)

MAX_QUBITS = 22
# Recovery counts as feasible when the inaccessible remainder is closer to
# branch-independent than branch-revealing; the midpoint criterion puts the
# feasibility transition at the half-access point for Haar-scrambled records.
DECOUPLING_FEASIBLE_THRESHOLD = 0.5


class RecordEncoding(Enum):
    PLAIN = "plain"
    TAGGED = "tagged"


class Participation(Enum):
    ALL = "all"
    DEAD_ONLY = "dead_only"
    ALIVE_ONLY = "alive_only"


@dataclass(frozen=True, eq=False)
class BranchStructure:
    """Families of alive and dead branches with complex amplitude weights.

    Branch indices run alive-first: ``0..num_alive-1`` are alive,
    ``num_alive..num_alive+num_dead-1`` are dead.
    """

    num_alive: int
    num_dead: int
    weights: np.ndarray

    def __post_init__(self):
        if self.num_alive < 1 or self.num_dead < 1:
            raise ValueError("need at least one alive and one dead branch")
        weights = np.array(self.weights, dtype=np.complex128)
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        if weights.shape != (self.num_branches,):
            raise ValueError(
                f"expected {self.num_branches} weights, got {weights.shape}"
            )
        deviation = abs(float(np.sum(np.abs(weights) ** 2)) - 1.0)
        if deviation > NORM_TOL:
            raise ValueError(f"branch weights squared-sum off unity by {deviation:.3e}")

    @classmethod
    def equal(cls, num_alive: int = 1, num_dead: int = 1) -> "BranchStructure":
        n = num_alive + num_dead
        return cls(num_alive, num_dead, np.full(n, 1.0 / math.sqrt(n)))

    @classmethod
    def two_branch(cls, alive_amplitude, dead_amplitude) -> "BranchStructure":
        return cls(1, 1, np.array([alive_amplitude, dead_amplitude]))

    @property
    def num_branches(self) -> int:
        return self.num_alive + self.num_dead

    @property
    def cat_width(self) -> int:
        return max(1, (self.num_branches - 1).bit_length())

    def is_alive(self, branch: int) -> bool:
        return branch < self.num_alive

    def family(self, branch: int) -> str:
        return "alive" if self.is_alive(branch) else "dead"

    def label(self, branch: int) -> str:
        if self.num_branches == 2:
            return "alive" if branch == 0 else "dead"
        if self.is_alive(branch):
            return f"alive_{branch}"
        return f"dead_{branch - self.num_alive}"

    def branches_in(self, participation: Participation):
        if participation is Participation.ALL:
            return tuple(range(self.num_branches))
        if participation is Participation.DEAD_ONLY:
            return tuple(range(self.num_alive, self.num_branches))
        return tuple(range(self.num_alive))


@dataclass(frozen=True)
class Scenario:
    """Complete trial configuration."""

    branch_structure: BranchStructure
    env_qubits: int = 1
    encoding: RecordEncoding = RecordEncoding.PLAIN
    observe_variant: str = "a"
    participation: Participation = Participation.ALL
    nonlinear_lambda: "float | None" = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.env_qubits < 1:
            raise ValueError("env_qubits must be >= 1")
        if self.observe_variant not in ("a", "b", "c"):
            raise ValueError("observe_variant must be one of a, b, c")
        if self.nonlinear_lambda is not None:
            if not np.isfinite(self.nonlinear_lambda) or self.nonlinear_lambda < 0:
                raise ValueError("nonlinear_lambda must be finite and >= 0")
            if self.branch_structure.num_branches != 2:
                raise ValueError(
                    "the nonlinear filter targets a single record qubit and "
                    "supports two-branch scenarios only"
                )
        total = scenario_layout(self).total_qubits
        if total > MAX_QUBITS:
            raise ValueError(
                f"scenario needs {total} qubits, exceeding the {MAX_QUBITS}-qubit budget"
            )


def canonical_scenario(**overrides) -> Scenario:
    """Symmetric two-branch scenario: one environment copy, plain records,
    full participation, no filter."""
    base = dict(
        branch_structure=BranchStructure.equal(1, 1),
        env_qubits=1,
        encoding=RecordEncoding.PLAIN,
        observe_variant="a",
        participation=Participation.ALL,
        nonlinear_lambda=None,
        rng_seed=0,
    )
    base.update(overrides)
    return Scenario(**base)


def scenario_layout(scenario: Scenario) -> RegisterLayout:
    """Register layout: C, B, E1..Em, (Af,) A, F.

    B is the brain (tagged: written-flag qubit first, then the value
    qubits), Af/A the clinic ancilla mirroring B's qubits, and F the
    one-qubit participation flag.
    """
    width = scenario.branch_structure.cat_width
    tagged = scenario.encoding is RecordEncoding.TAGGED
    sizes = [("C", width), ("B", width + 1 if tagged else width)]
    for copy_index in range(1, scenario.env_qubits + 1):
        sizes.append((f"E{copy_index}", width))
    if tagged:
        sizes.append(("Af", 1))
    sizes.append(("A", width))
    sizes.append(("F", 1))
    return RegisterLayout.from_sizes(sizes)


def record_value(encoding: RecordEncoding, cat_width: int, branch: int) -> int:
    """Integer content of the brain register holding branch's record; blank is 0."""
    if encoding is RecordEncoding.TAGGED:
        return (1 << cat_width) | branch
    return branch


def _brain_value_qubits(layout: RegisterLayout, encoding: RecordEncoding):
    qubits = layout.qubits("B")
    return qubits[1:] if encoding is RecordEncoding.TAGGED else qubits


def _ancilla_record_qubits(layout: RegisterLayout, encoding: RecordEncoding):
    if encoding is RecordEncoding.TAGGED:
        return layout.qubits("Af") + layout.qubits("A")
    return layout.qubits("A")


def _assert_blank(state: StateVector, layout: RegisterLayout, names, context: str):
    for name in names:
        blank_mass = float(born_probabilities(state, layout, name)[0])
        if abs(blank_mass - 1.0) > NORM_TOL:
            raise ValueError(f"{context}: register {name!r} is not blank")


def _pairwise_cnots(source_qubits, target_qubits):
    return [GateSpec.cnot(s, t) for s, t in zip(source_qubits, target_qubits)]


def _record_write_gates(layout: RegisterLayout, encoding: RecordEncoding, source: str):
    """Gates coupling a branch-carrying register into the brain."""
    gates = []
    if encoding is RecordEncoding.TAGGED:
        gates.append(GateSpec.x(layout.qubits("B")[0]))
    gates.extend(
        _pairwise_cnots(layout.qubits(source), _brain_value_qubits(layout, encoding))
    )
    return gates


def _apply_all(state: StateVector, gates) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def prepare_cat(branch_structure: BranchStructure, layout: "RegisterLayout | None" = None) -> StateVector:
    """Cat register in the weighted branch superposition.

    Without a layout, returns the bare cat register; with one, returns the
    full register with everything else blank.
    """
    width = branch_structure.cat_width
    if layout is None:
        amps = np.zeros(2**width, dtype=np.complex128)
        amps[: branch_structure.num_branches] = branch_structure.weights
        return StateVector(amps, width)
    if layout.size("C") != width:
        raise ValueError("layout cat register does not match the branch structure")
    amps = np.zeros(2**layout.total_qubits, dtype=np.complex128)
    step = 2 ** (layout.total_qubits - width)  # C occupies the leading qubits
    for branch, weight in enumerate(branch_structure.weights):
        amps[branch * step] = weight
    return StateVector(amps, layout.total_qubits)


def observe(state: StateVector, layout: RegisterLayout, variant: str, encoding: RecordEncoding) -> StateVector:
    """Measurement as record distribution: write the branch into B and E1.

    The three variants couple the registers in different orders — (a) the
    cat writes both records, (b) the brain informs the environment, (c) the
    environment informs the brain — and produce identical states on blank
    registers.
    """
    _assert_blank(state, layout, ["B", "E1"], "observe")
    cat = layout.qubits("C")
    env = layout.qubits("E1")
    if variant == "a":
        gates = _record_write_gates(layout, encoding, "C") + _pairwise_cnots(cat, env)
    elif variant == "b":
        gates = _record_write_gates(layout, encoding, "C") + _pairwise_cnots(
            _brain_value_qubits(layout, encoding), env
        )
    elif variant == "c":
        gates = _pairwise_cnots(cat, env) + _record_write_gates(layout, encoding, "E1")
    else:
        raise ValueError("variant must be one of a, b, c")
    return _apply_all(state, gates)


def spread_to_environment(state: StateVector, layout: RegisterLayout, copies: int) -> StateVector:
    """Fan the branch record out into additional environment slots E2, E3, ..."""
    if copies < 0:
        raise ValueError("copies must be >= 0")
    available = sum(1 for name in layout.names if name.startswith("E")) - 1
    if copies > available:
        raise ValueError(
            f"requested {copies} extra record copies but only {available} "
            "environment slots remain"
        )
    gates = []
    for copy_index in range(2, copies + 2):
        gates.extend(_pairwise_cnots(layout.qubits("C"), layout.qubits(f"E{copy_index}")))
    return _apply_all(state, gates)


def clinic_erase(state: StateVector, layout: RegisterLayout, encoding: RecordEncoding) -> StateVector:
    """Move the memory record from B into the blank ancilla with two CNOT
    layers: copy B into the ancilla, then reset B conditioned on the copy.

    Afterwards B is exactly blank and disentangled; the ancilla carries the
    record, still correlated with cat and environment.
    """
    ancilla_names = ["Af", "A"] if encoding is RecordEncoding.TAGGED else ["A"]
    _assert_blank(state, layout, ancilla_names, "clinic_erase")
    brain = layout.qubits("B")
    ancilla = _ancilla_record_qubits(layout, encoding)
    gates = _pairwise_cnots(brain, ancilla) + _pairwise_cnots(ancilla, brain)
    return _apply_all(state, gates)


def _participation_flag_gates(layout: RegisterLayout, encoding: RecordEncoding,
                              branch_structure: BranchStructure, participation: Participation):
    """Raise F exactly on branches whose brain record participates."""
    flag = layout.qubits("F")[0]
    if participation is Participation.ALL:
        return [GateSpec.x(flag)]
    value_qubits = _brain_value_qubits(layout, encoding)
    x_matrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    gates = []
    for branch in branch_structure.branches_in(participation):
        pattern = [(branch >> (len(value_qubits) - 1 - i)) & 1 for i in range(len(value_qubits))]
        pre = [GateSpec.x(q) for q, bit in zip(value_qubits, pattern) if bit == 0]
        gates.extend(pre)
        gates.append(GateSpec.controlled(x_matrix, value_qubits, (flag,)))
        gates.extend(pre)
    return gates


def conditional_clinic(state: StateVector, layout: RegisterLayout,
                       branch_structure: BranchStructure, participation: Participation,
                       encoding: RecordEncoding) -> StateVector:
    """Erase applied only in participating branches.

    The brain record raises the ancilla's on/off flag F; both CNOT layers of
    the erase then run controlled on F.  With partial participation the flag
    correlates with the branch family and the brain stays entangled with cat
    and environment in the skipped branches.
    """
    ancilla_names = ["Af", "A"] if encoding is RecordEncoding.TAGGED else ["A"]
    _assert_blank(state, layout, ancilla_names + ["F"], "conditional_clinic")
    state = _apply_all(
        state, _participation_flag_gates(layout, encoding, branch_structure, participation)
    )
    flag = layout.qubits("F")[0]
    brain = layout.qubits("B")
    ancilla = _ancilla_record_qubits(layout, encoding)
    x_matrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    gates = [GateSpec.controlled(x_matrix, (flag, b), (a,)) for b, a in zip(brain, ancilla)]
    gates += [GateSpec.controlled(x_matrix, (flag, a), (b,)) for b, a in zip(brain, ancilla)]
    return _apply_all(state, gates)


def rewrite_record(state: StateVector, layout: RegisterLayout, encoding: RecordEncoding) -> StateVector:
    """The re-coupling step of reobservation alone: a fresh record write from
    the cat into the brain, with no sampling."""
    return _apply_all(state, _record_write_gates(layout, encoding, "C"))


def reobserve(state: StateVector, layout: RegisterLayout, encoding: RecordEncoding, rng):
    """Fresh record write followed by a Born draw of the brain register.

    Follows the observer whose memory was reset: the state is first
    conditioned on the blank-memory component (raising an error when none
    exists, i.e. erasure never happened), then re-coupled to the cat, then
    sampled.  Returns ``(branch, post_state)``.
    """
    blank_mass = float(born_probabilities(state, layout, "B")[0])
    if blank_mass <= NORM_TOL:
        raise ValueError("reobserve: brain register is not blank (erasure incomplete)")
    patient = project_onto(state, layout, "B", 0)
    recoupled = rewrite_record(patient, layout, encoding)
    probs = born_probabilities(recoupled, layout, "B")
    outcome = draw_index(as_generator(rng), probs)
    post = project_onto(recoupled, layout, "B", outcome)
    width = layout.size("C")
    branch = outcome & ((1 << width) - 1) if encoding is RecordEncoding.TAGGED else outcome
    return branch, post


@dataclass(frozen=True)
class TrialReport:
    """Per-trial record of one steering attempt.

    ``memory_consistent`` asks whether the followed observer's final record
    and the branch of the post-measurement global state agree — for an
    erased observer, conditioning the re-coupled state on the sampled
    record must pin the cat to the matching branch; for an observer who
    kept their memory, conditioning on their branch must find the record
    intact.
    """

    pre_outcome: str
    post_outcome: str
    pre_branch: int
    post_branch: int
    erased: bool
    brain_purity_after_erase: float
    brain_entropy_after_erase: float
    cat_marginal_before: tuple
    cat_marginal_after: tuple
    memory_consistent: bool


class TrialEngine:
    """Precomputed trial pipeline for one scenario.

    The unitary stages and all state-level diagnostics are seed-independent,
    so they are evaluated once; ``run(seed)`` only draws the observer's
    pre- and post-branch from the precomputed Born tables.  ``run_trial``
    and ``run_ensemble`` are thin wrappers, which keeps large ensembles
    cheap without changing per-trial semantics.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.layout = scenario_layout(scenario)
        structure = scenario.branch_structure
        self.structure = structure
        width = structure.cat_width

        state = prepare_cat(structure, self.layout)
        state = observe(state, self.layout, scenario.observe_variant, scenario.encoding)
        state = spread_to_environment(state, self.layout, scenario.env_qubits - 1)
        self.observed = state

        self.pre_probs = self._branch_probs_from_brain(state)
        self.cat_before = self._cat_marginal(state)

        self.participating = set(structure.branches_in(scenario.participation))
        if scenario.participation is Participation.ALL:
            clinic_state = clinic_erase(state, self.layout, scenario.encoding)
        else:
            clinic_state = conditional_clinic(
                state, self.layout, structure, scenario.participation, scenario.encoding
            )
        self.clinic_state = clinic_state
        brain = partial_trace(clinic_state, self.layout, ["B"])
        self.brain_purity = purity(brain)
        self.brain_entropy = von_neumann_entropy(brain)

        if scenario.nonlinear_lambda is not None:
            self.filtered = apply_nonlinear_filter(
                clinic_state,
                self.layout,
                NonlinearFilter(scenario.nonlinear_lambda, "A"),
            )
        else:
            self.filtered = clinic_state

        # Patient path: condition on the blank-memory observer, re-couple,
        # and tabulate the reachable branches.  Skipped when no branch was
        # erased with any weight (the draw can then never need it).
        participating_mass = float(
            sum(self.pre_probs[b] for b in self.participating)
        )
        self.patient_recoupled = None
        self.post_probs = None
        self.cat_after_patient = None
        self._memory_ok_patient = {}
        if participating_mass > NORM_TOL:
            patient = project_onto(self.filtered, self.layout, "B", 0)
            self.patient_recoupled = rewrite_record(
                patient, self.layout, scenario.encoding
            )
            self.post_probs = self._branch_probs_from_brain(self.patient_recoupled)
            self.cat_after_patient = self._cat_marginal(self.patient_recoupled)
            for branch in range(structure.num_branches):
                if self.post_probs[branch] > NORM_TOL:
                    self._memory_ok_patient[branch] = self._record_pins_cat(
                        self.patient_recoupled, branch
                    )

        self._memory_ok_stay = {}
        for branch in range(structure.num_branches):
            if branch in self.participating or self.pre_probs[branch] <= NORM_TOL:
                continue
            self._memory_ok_stay[branch] = self._branch_keeps_record(
                self.filtered, branch
            )

    def _branch_probs_from_brain(self, state: StateVector) -> np.ndarray:
        structure, encoding = self.structure, self.scenario.encoding
        table = born_probabilities(state, self.layout, "B")
        probs = np.array(
            [
                table[record_value(encoding, structure.cat_width, branch)]
                for branch in range(structure.num_branches)
            ]
        )
        residual = abs(float(probs.sum()) - 1.0)
        if residual > 1e-9:
            raise AssertionError(
                f"brain register holds non-record content (residual {residual:.3e})"
            )
        return probs

    def _cat_marginal(self, state: StateVector) -> tuple:
        table = born_probabilities(state, self.layout, "C")
        return tuple(float(p) for p in table[: self.structure.num_branches])

    def _record_pins_cat(self, state: StateVector, branch: int) -> bool:
        record = record_value(
            self.scenario.encoding, self.structure.cat_width, branch
        )
        conditioned = project_onto(state, self.layout, "B", record)
        return bool(
            born_probabilities(conditioned, self.layout, "C")[branch] >= 1.0 - 1e-9
        )

    def _branch_keeps_record(self, state: StateVector, branch: int) -> bool:
        record = record_value(
            self.scenario.encoding, self.structure.cat_width, branch
        )
        conditioned = project_onto(state, self.layout, "C", branch)
        return bool(
            born_probabilities(conditioned, self.layout, "B")[record] >= 1.0 - 1e-9
        )

    def run(self, seed: int) -> TrialReport:
        rng = as_generator(seed)
        pre = draw_index(rng, self.pre_probs)
        erased = pre in self.participating
        if erased:
            post = draw_index(rng, self.post_probs)
            cat_after = tuple(self.cat_after_patient)
            consistent = self._memory_ok_patient[post]
        else:
            post = pre
            cat_after = tuple(
                1.0 if branch == pre else 0.0
                for branch in range(self.structure.num_branches)
            )
            consistent = self._memory_ok_stay[pre]
        return TrialReport(
            pre_outcome=self.structure.label(pre),
            post_outcome=self.structure.label(post),
            pre_branch=pre,
            post_branch=post,
            erased=erased,
            brain_purity_after_erase=self.brain_purity,
            brain_entropy_after_erase=self.brain_entropy,
            cat_marginal_before=self.cat_before,
            cat_marginal_after=cat_after,
            memory_consistent=consistent,
        )


def run_trial(scenario: Scenario) -> TrialReport:
    """One full steering trial, deterministic per ``scenario.rng_seed``."""
    return TrialEngine(scenario).run(scenario.rng_seed)


def run_ensemble(scenario: Scenario, num_trials: int, *, base_seed: "int | None" = None,
                 first_trial: int = 0) -> list:
    """Independent trials with per-trial seeds ``derive_seed(base, i)``.

    Trial ``i`` is identical to ``run_trial`` on the same scenario with
    ``rng_seed = derive_seed(base, i)``, so serial, chunked, and parallel
    ensembles all agree.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be >= 1")
    base = scenario.rng_seed if base_seed is None else base_seed
    engine = TrialEngine(scenario)
    reports = []
    for index in range(first_trial, first_trial + num_trials):
        try:
            reports.append(engine.run(derive_seed(base, index)))
        except Exception as error:
            raise RuntimeError(f"trial {index} failed: {error}") from error
    return reports


@dataclass(frozen=True)
class DecouplingResult:
    leaked_bits: float
    conditional_trace_distance: float
    feasible: bool


def _haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a Ginibre matrix with the phase convention that makes Q Haar."""
    ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(ginibre / np.sqrt(2.0))
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def _decoupling_metrics(encoded_zero: np.ndarray, encoded_one: np.ndarray,
                        num_record_qubits: int, accessible: int) -> DecouplingResult:
    if accessible == num_record_qubits:
        return DecouplingResult(0.0, 0.0, True)
    hidden = num_record_qubits - accessible
    if accessible > 0:
        layout = RegisterLayout.from_sizes([("accessible", accessible), ("hidden", hidden)])
    else:
        layout = RegisterLayout.from_sizes([("hidden", hidden)])
    rho_zero = partial_trace(StateVector(encoded_zero, num_record_qubits), layout, "hidden")
    rho_one = partial_trace(StateVector(encoded_one, num_record_qubits), layout, "hidden")
    distance = trace_distance(rho_zero, rho_one)
    averaged = DensityMatrix((rho_zero.entries + rho_one.entries) / 2.0, hidden)
    leaked = von_neumann_entropy(averaged) - 0.5 * (
        von_neumann_entropy(rho_zero) + von_neumann_entropy(rho_one)
    )
    return DecouplingResult(
        leaked_bits=float(leaked),
        conditional_trace_distance=float(distance),
        feasible=distance < DECOUPLING_FEASIBLE_THRESHOLD,
    )


def decoupling_diagnostic(num_record_qubits: int, accessible: int, rng) -> DecouplingResult:
    """How much branch information the inaccessible remainder of a scrambled
    record still holds.

    One which-branch qubit is encoded into ``num_record_qubits`` qubits by a
    seeded Haar-random unitary.  Only the first ``accessible`` qubits can be
    manipulated; the diagnostic reports the trace distance between the
    inaccessible remainder's states conditional on branch 0 vs 1, plus the
    Holevo-style information (in bits) the remainder leaks.  Recovery of
    coherence from the accessible part is feasible when that conditional
    trace distance falls below ``DECOUPLING_FEASIBLE_THRESHOLD``.
    """
    if not 1 <= num_record_qubits <= 12:
        raise ValueError("num_record_qubits must be in 1..12")
    if not 0 <= accessible <= num_record_qubits:
        raise ValueError("accessible qubit count out of range")
    gen = as_generator(rng)
    dim = 2**num_record_qubits
    unitary = _haar_unitary(dim, gen)
    encoded_zero = unitary[:, 0]
    encoded_one = unitary[:, dim // 2]  # input |1> on the leading qubit
    return _decoupling_metrics(encoded_zero, encoded_one, num_record_qubits, accessible)


def decoupling_sweep(num_record_qubits: int, accessible_values, num_encodings: int,
                     rng_seed: int) -> dict:
    """Decoupling metrics for many random encodings across accessibility levels.

    Encoding ``j`` uses seed ``derive_seed(rng_seed, j)``; each row matches
    ``decoupling_diagnostic`` for that seed exactly (the random unitary does
    not depend on the accessibility split).
    """
    if num_encodings < 1:
        raise ValueError("num_encodings must be >= 1")
    dim = 2**num_record_qubits
    results = {int(k): [] for k in accessible_values}
    for encoding_index in range(num_encodings):
        gen = as_generator(derive_seed(rng_seed, encoding_index))
        unitary = _haar_unitary(dim, gen)
        encoded_zero = unitary[:, 0]
        encoded_one = unitary[:, dim // 2]
        for k in results:
            results[k].append(
                _decoupling_metrics(encoded_zero, encoded_one, num_record_qubits, k)
            )
    return results
