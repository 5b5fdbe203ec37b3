"""Exact matrices for the native and standard gate sets, plus the dual-rail
code-space machinery.

Conventions
-----------
Pair-local basis order is ``|00>, |01>, |10>, |11>`` where the left symbol is
the pair's first physical qubit.  The code words are ``|0_L> = |01>`` and
``|1_L> = |10>``; ``|00>`` and ``|11>`` span the leakage subspace.

Rotations use the standard convention::

    R_x(t) = [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]]
    R_z(t) = diag(exp(-i t/2), exp(+i t/2))

With this convention the code-space restriction of ``iswap(t)`` equals
``R_x(-t)``.  The hardware-extracted swap (see :mod:`ensembleqc.dynamics`)
carries ``-i`` off-diagonal entries, i.e. ``iswap(-pi)`` in this convention;
the compiler absorbs the sign when emitting native operations.

Global phases are kept explicit everywhere so that phase-sensitive gate
identities can be checked as exact matrix equalities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNITARITY_ATOL = 1e-12

# Pair-local indices of the code words |01>, |10> and the leakage states.
CODE_INDICES = (1, 2)
LEAKAGE_INDICES = (0, 3)


class CodeSpaceLeakageError(ValueError):
    """A matrix couples the code space to the leakage space."""

    def __init__(self, max_element: float):
        self.max_element = float(max_element)
        super().__init__(
            f"code space not block-preserved: max off-block element "
            f"{self.max_element:.3e}"
        )


class Unitary:
    """Dense complex unitary matrix, validated on construction.

    The dimension must be a power of two (2, 4, 8, ...) and the unitarity
    defect ``max|U U+ - I|`` must stay below ``UNITARITY_ATOL``.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"dimension must be a power of two >= 2, got {dim}")
        defect = np.max(np.abs(m @ m.conj().T - np.eye(dim)))
        if defect > UNITARITY_ATOL:
            raise ValueError(f"matrix is not unitary: defect {defect:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "Unitary":
        return Unitary(self.matrix.conj().T)

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - np.eye(self.dim))))

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return Unitary(self.matrix @ other.matrix)

    def __rmul__(self, phase: complex) -> "Unitary":
        # Unitarity validation rejects anything but a unit-modulus scalar.
        return Unitary(complex(phase) * self.matrix)

    def __repr__(self) -> str:
        return f"Unitary(dim={self.dim})"


def as_matrix(u) -> np.ndarray:
    """Accept a Unitary or array-like and return a complex ndarray."""
    if isinstance(u, Unitary):
        return u.matrix
    return np.asarray(u, dtype=complex)


def rx(theta: float) -> Unitary:
    """Standard x rotation by ``theta``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return Unitary([[c, -1j * s], [-1j * s, c]])


def rz(theta: float) -> Unitary:
    """Standard z rotation by ``theta``."""
    return Unitary([[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]])


def iswap(theta: float) -> Unitary:
    """Partial swap on a physical pair.

    Acts as identity on |00> and |11>; on the code space the middle block is
    ``[[cos t/2, i sin t/2], [i sin t/2, cos t/2]]``, an x rotation by
    ``-theta``.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.eye(4, dtype=complex)
    m[1, 1] = m[2, 2] = c
    m[1, 2] = m[2, 1] = 1j * s
    return Unitary(m)


def phase_gate(theta: float, phi: float | None = None) -> Unitary:
    """Diagonal pair gate realized by shifting one node's frequency.

    Returns ``exp(i phi/2) * diag(exp(-i phi/2), exp(-i theta/2),
    exp(i theta/2), exp(i phi/2))``.  The code-space restriction is
    ``exp(i phi/2) R_z(theta)``; with ``phi = 0`` the restriction is exactly
    ``R_z(theta)``.  ``phi`` defaults to ``theta`` when omitted.
    """
    if phi is None:
        phi = theta
    pre = np.exp(0.5j * phi)
    diag = [np.exp(-0.5j * phi), np.exp(-0.5j * theta), np.exp(0.5j * theta), np.exp(0.5j * phi)]
    return Unitary(pre * np.diag(diag))


def controlled_iswap_ideal() -> Unitary:
    """Ideal photon-controlled swap on (control qubit) x (target pair), 8x8.

    Control ``|0>`` (no blocking photon) applies the full swap with ``-i``
    entries on the pair's code space, matching the dynamics extraction;
    control ``|1>`` applies the identity, with the physical diagonal phase
    normalized to 1 (the compiler owns the phase correction for extracted
    gates).  Basis index is ``4*control + 2*q_first + q_second``.
    """
    swap_branch = np.eye(4, dtype=complex)
    swap_branch[1, 1] = swap_branch[2, 2] = 0.0
    swap_branch[1, 2] = swap_branch[2, 1] = -1j
    m = np.eye(8, dtype=complex)
    m[:4, :4] = swap_branch
    return Unitary(m)


_STANDARD = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    # |control, target> basis with index 2*control + target.
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


def standard_gate(name: str) -> Unitary:
    """Textbook matrix for one of X, H, S, T, CNOT."""
    try:
        return Unitary(_STANDARD[name])
    except KeyError:
        raise ValueError(f"unknown standard gate {name!r}") from None


@dataclass(frozen=True)
class LogicalEncoding:
    """Dual-rail encoding of one logical qubit on a physical pair."""

    code_indices: tuple[int, int] = CODE_INDICES
    leakage_indices: tuple[int, int] = LEAKAGE_INDICES

    @property
    def zero(self) -> np.ndarray:
        v = np.zeros(4, dtype=complex)
        v[self.code_indices[0]] = 1.0
        return v

    @property
    def one(self) -> np.ndarray:
        v = np.zeros(4, dtype=complex)
        v[self.code_indices[1]] = 1.0
        return v

    def code_projector(self) -> np.ndarray:
        p = np.zeros((4, 4), dtype=complex)
        for i in self.code_indices:
            p[i, i] = 1.0
        return p

    def leakage_projector(self) -> np.ndarray:
        return np.eye(4, dtype=complex) - self.code_projector()


DUAL_RAIL = LogicalEncoding()


def restrict_to_logical(u, atol: float = 1e-12) -> Unitary:
    """Restrict a pair unitary to the {|0_L>, |1_L>} block.

    Raises :class:`CodeSpaceLeakageError` when any element coupling the code
    space to {|00>, |11>} exceeds ``atol``.
    """
    m = as_matrix(u)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 pair unitary, got shape {m.shape}")
    code, leak = CODE_INDICES, LEAKAGE_INDICES
    off = max(
        np.max(np.abs(m[np.ix_(leak, code)])),
        np.max(np.abs(m[np.ix_(code, leak)])),
    )
    if off > atol:
        raise CodeSpaceLeakageError(off)
    return Unitary(m[np.ix_(code, code)])


def _phase_align(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Minimize ``max|a - exp(i phi) b|`` over phi.

    Each squared entry difference is ``A_k - 2 Re(z_k e^{i phi})`` with
    ``z_k = conj(a_k) b_k``; the max over entries attains its minimum either
    at a single branch's minimum ``phi = -arg z_k`` or where two branches
    cross.  All candidates are enumerated, so the result is exact up to
    floating-point rounding.  Returns ``(distance, phi)``.
    """
    af, bf = a.ravel(), b.ravel()
    z = np.conj(af) * bf
    amp2 = np.abs(af) ** 2 + np.abs(bf) ** 2
    candidates = [0.0]
    nz = np.abs(z) > 0.0
    candidates.extend((-np.angle(z[nz])).tolist())
    idx = np.nonzero(nz)[0]
    for ii in range(len(idx)):
        for jj in range(ii + 1, len(idx)):
            j, k = idx[ii], idx[jj]
            w = z[j] - z[k]
            mag = abs(w)
            if mag < 1e-300:
                continue
            rhs = (amp2[j] - amp2[k]) / (2.0 * mag)
            if abs(rhs) <= 1.0:
                t = np.arccos(np.clip(rhs, -1.0, 1.0))
                chi = np.angle(w)
                candidates.extend([t - chi, -t - chi])
    phis = np.asarray(candidates)
    diffs = np.abs(af[None, :] - np.exp(1j * phis)[:, None] * bf[None, :]).max(axis=1)
    best = int(np.argmin(diffs))
    return float(diffs[best]), float(phis[best])


def phase_distance(a, b) -> float:
    """Global-phase-invariant distance ``min_phi max|a - exp(i phi) b|``."""
    return _phase_align(as_matrix(a), as_matrix(b))[0]


def phase_alignment(a, b) -> complex:
    """The unit scalar ``exp(i phi)`` minimizing ``max|a - exp(i phi) b|``."""
    return complex(np.exp(1j * _phase_align(as_matrix(a), as_matrix(b))[1]))


def matrix_to_json(u) -> list:
    """Row-major nested lists of [re, im] pairs."""
    m = as_matrix(u)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


@dataclass(frozen=True)
class EncodedCnotReport:
    """Result of checking the controlled-swap construction of the logical CNOT."""

    max_deviation: float
    cases: int
    passed: bool


def _controlled_swap_16() -> np.ndarray:
    """Controlled swap on two pairs: qubits (q0 q1 | q2 q3), index
    ``8*q0 + 4*q1 + 2*q2 + q3``.  When the control pair's first qubit is 1
    the target pair's qubits are exchanged."""
    m = np.zeros((16, 16), dtype=complex)
    for i in range(16):
        q0, q1, q2, q3 = (i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1
        if q0 == 1:
            q2, q3 = q3, q2
        j = (q0 << 3) | (q1 << 2) | (q2 << 1) | q3
        m[j, i] = 1.0
    return m


def verify_encoded_cnot(samples: int = 100, seed: int = 7) -> EncodedCnotReport:
    """Check that a single controlled swap acts as the logical CNOT.

    Applies the 16-dimensional controlled-swap matrix to the four encoded
    basis states and to random encoded superpositions, and verifies the
    coefficient permutation (the two amplitudes with control ``|1_L>`` are
    exchanged) with no extra phases.  Returns the maximum deviation observed.
    """
    cswap = _controlled_swap_16()

    def encode2(x: int, y: int) -> np.ndarray:
        v = np.zeros(16, dtype=complex)
        qx = (0, 1) if x == 0 else (1, 0)
        qy = (0, 1) if y == 0 else (1, 0)
        v[(qx[0] << 3) | (qx[1] << 2) | (qy[0] << 1) | qy[1]] = 1.0
        return v

    basis = [encode2(x, y) for x, y in ((0, 0), (0, 1), (1, 0), (1, 1))]
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = 0

    def check(alphas: np.ndarray) -> None:
        nonlocal worst, cases
        state = sum(a * b for a, b in zip(alphas, basis))
        out = cswap @ state
        # Coefficient permutation of the CNOT: the |1_L>-control amplitudes
        # are exchanged, with no extra phases.
        expected = sum(
            a * b for a, b in zip(alphas[[0, 1, 3, 2]], basis)
        )
        worst = max(worst, float(np.max(np.abs(out - expected))))
        worst = max(worst, abs(float(np.linalg.norm(out)) - float(np.linalg.norm(state))))
        cases += 1

    for k in range(4):
        check(np.eye(4, dtype=complex)[k])
    for _ in range(samples):
        alphas = rng.normal(size=4) + 1j * rng.normal(size=4)
        alphas /= np.linalg.norm(alphas)
        check(alphas)
    return EncodedCnotReport(max_deviation=worst, cases=cases, passed=worst < 1e-12)


def fredkin_classical(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Controlled swap on classical bits: control ``a`` exchanges ``b, c``."""
    for bit in (a, b, c):
        if bit not in (0, 1):
            raise ValueError(f"expected bits 0 or 1, got {bit!r}")
    if a:
        return a, c, b
    return a, b, c


def fredkin_not(a: int) -> int:
    """NOT via controlled swap with ancilla targets (0, 1): third output."""
    return fredkin_classical(a, 0, 1)[2]


def fredkin_and(a: int, b: int) -> int:
    """AND via controlled swap with ancilla 0 as the second target."""
    return fredkin_classical(a, b, 0)[2]


def fredkin_fanout(a: int) -> tuple[int, int]:
    """FANOUT via controlled swap with ancilla targets (1, 0): the control
    line and the third output both carry ``a``."""
    out = fredkin_classical(a, 1, 0)
    return out[0], out[2]
