"""Lowering of logical circuits to the native gate set.

Single-qubit gates go through an exact z-x-z Euler decomposition and come out
as at most three native operations ``[PHASE(gamma), ISWAP(-beta),
PHASE(alpha)]`` (the sign on ISWAP absorbs the fact that its code-space
restriction is an x rotation by minus the angle).  The logical CNOT lowers to
a single controlled-swap operation.  An alternative compilation path
approximates arbitrary single-qubit gates with words over the fixed gates
{ISWAP(pi/2), PHASE(pi/2), PHASE(pi/4)} found by breadth-first search.

PHASE operations are always emitted with the secondary angle phi = 0, whose
code-space action is exactly R_z(theta) with no stray global phase; the
program's accumulated global phase therefore comes from the Euler delta
alone.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .gates import Unitary, as_matrix, _phase_align, rx, rz, standard_gate

ISWAP_KIND = "ISWAP"
PHASE_KIND = "PHASE"
CISWAP_KIND = "CISWAP"

_ARITY = {ISWAP_KIND: (1, 1), PHASE_KIND: (1, 2), CISWAP_KIND: (2, 0)}

SUPPORTED_GATES = ("X", "H", "S", "T", "CNOT")


class CircuitParseError(ValueError):
    """A circuit file line failed to parse; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


@dataclass(frozen=True)
class NativeOp:
    """One native operation on logical-pair targets.

    ``targets`` holds pair indices: one for ISWAP/PHASE, (control, target)
    for CISWAP.  ``angles`` is (theta,) for ISWAP, (theta, phi) for PHASE,
    and empty for CISWAP.
    """

    kind: str
    targets: tuple[int, ...]
    angles: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise ValueError(f"unknown native op kind {self.kind!r}")
        n_targets, n_angles = _ARITY[self.kind]
        if len(self.targets) != n_targets:
            raise ValueError(f"{self.kind} takes {n_targets} target(s), got {self.targets!r}")
        if len(self.angles) != n_angles:
            raise ValueError(f"{self.kind} takes {n_angles} angle(s), got {self.angles!r}")
        if any(t < 0 for t in self.targets):
            raise ValueError(f"targets must be nonnegative, got {self.targets!r}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"targets must be distinct, got {self.targets!r}")
        if not all(np.isfinite(a) for a in self.angles):
            raise ValueError(f"angles must be finite, got {self.angles!r}")

    def format(self) -> str:
        parts = [self.kind] + [f"q{t}" for t in self.targets]
        parts += [f"{a:.12g}" for a in self.angles]
        return " ".join(parts)


@dataclass
class NativeProgram:
    """Ordered native operations plus the accumulated global phase."""

    qubit_count: int
    ops: list[NativeOp] = field(default_factory=list)
    global_phase: complex = 1.0 + 0.0j

    def validate(self) -> None:
        if self.qubit_count < 1:
            raise ValueError("program needs at least one logical qubit")
        for op in self.ops:
            if any(t >= self.qubit_count for t in op.targets):
                raise ValueError(
                    f"op {op.format()!r} touches a pair outside the "
                    f"{self.qubit_count}-qubit register"
                )

    def to_json(self) -> str:
        return json.dumps(
            {
                "qubit_count": self.qubit_count,
                "global_phase": [self.global_phase.real, self.global_phase.imag],
                "ops": [
                    {"kind": op.kind, "targets": list(op.targets), "angles": list(op.angles)}
                    for op in self.ops
                ],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "NativeProgram":
        raw = json.loads(text)
        phase = raw.get("global_phase", [1.0, 0.0])
        program = cls(
            qubit_count=int(raw["qubit_count"]),
            ops=[
                NativeOp(
                    kind=str(o["kind"]),
                    targets=tuple(int(t) for t in o["targets"]),
                    angles=tuple(float(a) for a in o.get("angles", [])),
                )
                for o in raw["ops"]
            ],
            global_phase=complex(phase[0], phase[1]),
        )
        program.validate()
        return program

    def disassemble(self) -> str:
        """Plain-text listing, one op per line, for diffing."""
        lines = [
            f"# qubits {self.qubit_count} global_phase "
            f"{self.global_phase.real:.12g}{self.global_phase.imag:+.12g}j"
        ]
        lines += [op.format() for op in self.ops]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EulerAngles:
    """Angles of the factorization u = e^{i delta} R_z(alpha) R_x(beta) R_z(gamma)."""

    delta: float
    alpha: float
    beta: float
    gamma: float

    def matrix(self) -> np.ndarray:
        return (
            np.exp(1j * self.delta)
            * rz(self.alpha).matrix
            @ rx(self.beta).matrix
            @ rz(self.gamma).matrix
        )


def euler_decompose(u) -> EulerAngles:
    """Factor a 2x2 unitary as e^{i delta} R_z(alpha) R_x(beta) R_z(gamma).

    ``beta`` is canonical in [0, pi]; ``delta`` is chosen in (-pi/2, pi/2]
    via the determinant branch; diagonal inputs take the tie-break
    ``beta = gamma = 0`` so they reduce to a single z rotation.
    """
    m = as_matrix(u)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    defect = np.max(np.abs(m @ m.conj().T - np.eye(2)))
    if defect > 1e-10:
        raise ValueError(f"input is not unitary: defect {defect:.3e}")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    delta = 0.5 * np.angle(det)  # in (-pi/2, pi/2]
    v = np.exp(-1j * delta) * m  # special-unitary part
    c = abs(v[0, 0])
    s = abs(v[1, 0])
    beta = 2.0 * np.arctan2(s, c)
    if s < 1e-12:
        # Diagonal: only alpha + gamma is determined; put it all in alpha.
        alpha = 2.0 * np.angle(v[1, 1])
        gamma = 0.0
        beta = 0.0
    elif c < 1e-12:
        # Antidiagonal: only alpha - gamma is determined.
        alpha = 2.0 * np.angle(v[1, 0]) + np.pi
        gamma = 0.0
        beta = np.pi
    else:
        sum_half = np.angle(v[1, 1])
        diff_half = np.angle(v[1, 0]) + 0.5 * np.pi
        alpha = sum_half + diff_half
        gamma = sum_half - diff_half
    return EulerAngles(delta=float(delta), alpha=float(alpha), beta=float(beta), gamma=float(gamma))


_ANGLE_EPS = 1e-12


def lower_single_qubit(
    u, target: int = 0, sign_convention: str = "matrix"
) -> NativeProgram:
    """Lower a single-qubit gate to at most three native operations.

    Emits ``[PHASE(gamma), ISWAP(-beta), PHASE(alpha)]`` on the target pair
    (identity-angle operations dropped) with the Euler ``delta`` recorded as
    the program's global phase.  ``sign_convention="matrix"`` targets the
    ideal gate matrices; ``"extracted"`` flips the ISWAP angle sign for
    compilation against the hardware-extracted swap, whose off-diagonal
    carries the opposite sign.
    """
    if sign_convention not in ("matrix", "extracted"):
        raise ValueError(f"unknown sign convention {sign_convention!r}")
    angles = euler_decompose(u)
    iswap_sign = -1.0 if sign_convention == "matrix" else 1.0
    ops: list[NativeOp] = []
    if abs(angles.gamma) > _ANGLE_EPS:
        ops.append(NativeOp(PHASE_KIND, (target,), (angles.gamma, 0.0)))
    if abs(angles.beta) > _ANGLE_EPS:
        ops.append(NativeOp(ISWAP_KIND, (target,), (iswap_sign * angles.beta,)))
    if abs(angles.alpha) > _ANGLE_EPS:
        ops.append(NativeOp(PHASE_KIND, (target,), (angles.alpha, 0.0)))
    return NativeProgram(
        qubit_count=target + 1,
        ops=ops,
        global_phase=complex(np.exp(1j * angles.delta)),
    )


def lower_circuit(circuit, qubit_count: int | None = None) -> NativeProgram:
    """Lower a logical circuit over {X, H, S, T, CNOT} to native operations.

    ``circuit`` is a sequence of ``(gate_name, targets)`` pairs with logical
    qubit indices.  Single-qubit gates lower through the Euler path; each
    CNOT becomes one controlled-swap op.  Operation order preserves circuit
    semantics (first listed gate acts first).
    """
    ops: list[NativeOp] = []
    phase = 1.0 + 0.0j
    max_target = -1
    for name, targets in circuit:
        targets = tuple(int(t) for t in targets)
        max_target = max(max_target, *targets) if targets else max_target
        if name == "CNOT":
            if len(targets) != 2 or targets[0] == targets[1]:
                raise ValueError(f"CNOT takes two distinct targets, got {targets!r}")
            ops.append(NativeOp(CISWAP_KIND, targets))
        elif name in SUPPORTED_GATES:
            if len(targets) != 1:
                raise ValueError(f"{name} takes one target, got {targets!r}")
            sub = lower_single_qubit(standard_gate(name), target=targets[0])
            ops.extend(sub.ops)
            phase *= sub.global_phase
        else:
            raise ValueError(f"unsupported gate {name!r}")
    count = qubit_count if qubit_count is not None else max_target + 1
    program = NativeProgram(qubit_count=max(count, 1), ops=ops, global_phase=phase)
    program.validate()
    return program


# Fixed-angle generator set: native op template plus its code-space action.
_FIXED_GENERATORS: tuple[tuple[str, NativeOp, np.ndarray], ...] = (
    ("ISWAP(pi/2)", NativeOp(ISWAP_KIND, (0,), (np.pi / 2,)), rx(-np.pi / 2).matrix),
    ("PHASE(pi/2)", NativeOp(PHASE_KIND, (0,), (np.pi / 2, 0.0)), rz(np.pi / 2).matrix),
    ("PHASE(pi/4)", NativeOp(PHASE_KIND, (0,), (np.pi / 4, 0.0)), rz(np.pi / 4).matrix),
)

_DEDUP_DECIMALS = 6


@dataclass(frozen=True)
class FixedSetResult:
    """Outcome of the fixed-angle search; ``found=False`` is a result, not an
    error."""

    found: bool
    program: NativeProgram | None
    word: tuple[str, ...]
    distance: float
    depth: int


def _dedup_key(m: np.ndarray) -> bytes:
    flat = m.ravel()
    mags = np.abs(flat)
    top = mags.max()
    # First entry within rounding of the top magnitude anchors the phase.
    anchor = flat[int(np.nonzero(mags >= top - 1e-9)[0][0])]
    normalized = m * np.conj(anchor / abs(anchor))
    rounded = np.round(normalized, _DEDUP_DECIMALS) + 0.0  # clear -0.0
    return rounded.tobytes()


def approximate_fixed_set(u, epsilon: float, max_depth: int) -> FixedSetResult:
    """Shortest word over the fixed gates approximating a single-qubit gate.

    Breadth-first search over products of the code-space actions
    {R_x(-pi/2), R_z(pi/2), R_z(pi/4)}, deduplicating visited unitaries up to
    global phase on a 1e-6 grid.  A candidate within phase-invariant distance
    ``epsilon`` is re-multiplied from scratch and re-measured before being
    returned; ties at the minimal depth resolve to the lexicographically
    first word in generator order.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if not 0 < max_depth <= 20:
        raise ValueError("max_depth must be in 1..20")
    target = as_matrix(u)
    if target.shape != (2, 2):
        raise ValueError(f"expected a 2x2 target, got shape {target.shape}")

    def distance(candidate: np.ndarray) -> float:
        return _phase_align(target, candidate)[0]

    def finish(word: tuple[int, ...]) -> FixedSetResult:
        # Re-verify: rebuild the product from the word and measure again.
        product = np.eye(2, dtype=complex)
        for letter in word:
            product = _FIXED_GENERATORS[letter][2] @ product
        dist, phi = _phase_align(target, product)
        if dist > epsilon:
            raise AssertionError("search produced a word that fails re-verification")
        ops = [_FIXED_GENERATORS[letter][1] for letter in word]
        program = NativeProgram(
            qubit_count=1, ops=ops, global_phase=complex(np.exp(1j * phi))
        )
        names = tuple(_FIXED_GENERATORS[letter][0] for letter in word)
        return FixedSetResult(
            found=True, program=program, word=names, distance=dist, depth=len(word)
        )

    identity = np.eye(2, dtype=complex)
    best_seen = distance(identity)
    if best_seen <= epsilon:
        return finish(())
    visited = {_dedup_key(identity)}
    queue: deque[tuple[np.ndarray, tuple[int, ...]]] = deque([(identity, ())])
    while queue:
        matrix, word = queue.popleft()
        if len(word) == max_depth:
            continue
        for index, (_, _, gen) in enumerate(_FIXED_GENERATORS):
            child = gen @ matrix  # the new letter acts after the word so far
            child_word = word + (index,)
            d = distance(child)
            best_seen = min(best_seen, d)
            if d <= epsilon:
                return finish(child_word)
            key = _dedup_key(child)
            if key not in visited:
                visited.add(key)
                queue.append((child, child_word))
    return FixedSetResult(
        found=False, program=None, word=(), distance=best_seen, depth=max_depth
    )


def parse_circuit(text: str) -> list[tuple[str, tuple[int, ...]]]:
    """Parse the one-gate-per-line circuit format.

    Each line is ``NAME target [target2]``; ``#`` starts a comment; blank
    lines are ignored.  Raises :class:`CircuitParseError` with the offending
    line number.
    """
    circuit: list[tuple[str, tuple[int, ...]]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        name = tokens[0]
        if name not in SUPPORTED_GATES:
            raise CircuitParseError(line_number, f"unknown gate {name!r}")
        try:
            targets = tuple(int(t) for t in tokens[1:])
        except ValueError:
            raise CircuitParseError(
                line_number, f"targets must be integers, got {tokens[1:]!r}"
            ) from None
        expected = 2 if name == "CNOT" else 1
        if len(targets) != expected:
            raise CircuitParseError(
                line_number, f"{name} takes {expected} target(s), got {len(targets)}"
            )
        if any(t < 0 for t in targets):
            raise CircuitParseError(line_number, "targets must be nonnegative")
        if len(set(targets)) != len(targets):
            raise CircuitParseError(line_number, "targets must be distinct")
        circuit.append((name, targets))
    return circuit
