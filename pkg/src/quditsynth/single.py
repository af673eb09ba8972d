"""One-qudit synthesis: Euler decomposition of two-level blocks and the
recursive AIII-type Cartan factorization of U(d).

Each recursion step writes m = e^{i phase} k1 * middle * k2 where the k
factors act on levels 0..d-2 (bottom-right entry exactly 1) and the middle
factor is a det-1 two-level block on the step's rotation pair.  Recursing on
the k blocks walks down to d = 2, so the emitted rotations use exactly d - 1
distinct level pairs: the "star" ladder (0,1),(0,2),...,(0,d-1) by default,
or the adjacent ladder (0,1),(1,2),... for Lambda/cascade couplings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GlobalPhase, LevelPhase, RegisterShape, Rot
from .linalg import as_matrix, csd, dagger, frobenius, is_unitary

__all__ = [
    "EulerTriple",
    "AIIIStep",
    "euler_two_level",
    "cartan_aiii_step",
    "synth_one_qutrit",
    "synth_one_qudit",
]

_EPS = 1e-12


@dataclass(frozen=True)
class EulerTriple:
    """Angles reproducing a 2x2 unitary as e^{i phase} R1(a1) Ry(b) R1(a2)."""

    mode: str  # "zyz" or "xyx"
    angles: tuple[float, float, float]
    subspace: tuple[int, int]
    residual_phase: float

    def block(self) -> np.ndarray:
        a1, b, a2 = self.angles
        if self.mode == "zyz":
            m = _rz(a1) @ _ry(b) @ _rz(a2)
        else:
            m = _rx(a1) @ _ry(b) @ _rx(a2)
        return np.exp(1j * self.residual_phase) * m


@dataclass(frozen=True)
class AIIIStep:
    """One AIII Cartan step m = e^{i phase} k1 * middle * k2."""

    k1: np.ndarray
    middle: np.ndarray  # full-size two-level embedding, det 1 on the pair
    k2: np.ndarray
    phase: float
    pair: tuple[int, int]

    def reconstruct(self) -> np.ndarray:
        return np.exp(1j * self.phase) * self.k1 @ self.middle @ self.k2


def _rz(t):
    return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]])


def _ry(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _rx(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


_HAD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def euler_two_level(u, subspace=(0, 1), mode: str = "zyz") -> EulerTriple:
    """Euler angles of a 2x2 unitary acting on the given level pair.

    The gimbal-degenerate case beta in {0, pi} uses the convention a2 = 0.
    """
    u = as_matrix(u)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("euler_two_level expects a 2x2 unitary")
    if mode not in ("zyz", "xyx"):
        raise ValueError(f"unknown Euler mode {mode!r}")
    v = u if mode == "zyz" else _HAD @ u @ _HAD

    phase = 0.5 * np.angle(np.linalg.det(v))
    su = np.exp(-1j * phase) * v
    # su = [[cos(b/2) e^{-i(a1+a2)/2}, -sin(b/2) e^{-i(a1-a2)/2}],
    #       [sin(b/2) e^{ i(a1-a2)/2},  cos(b/2) e^{ i(a1+a2)/2}]]
    b = 2 * np.arctan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[1, 0]) < _EPS or abs(su[0, 0]) < _EPS:
        if abs(su[0, 0]) >= _EPS:  # b ~ 0: only a1 + a2 is defined
            a1, a2 = 2 * np.angle(su[1, 1]), 0.0
        else:  # b ~ pi: only a1 - a2 is defined
            a1, a2 = 2 * np.angle(su[1, 0]), 0.0
    else:
        splus = 2 * np.angle(su[1, 1])
        sminus = 2 * np.angle(su[1, 0])
        a1, a2 = (splus + sminus) / 2, (splus - sminus) / 2
    if mode == "xyx":
        b = -b
    trip = EulerTriple(mode, (float(a1), float(b), float(a2)), tuple(subspace), float(phase))
    if frobenius(trip.block() - u) > 1e-11:
        raise ValueError("euler recomposition failed")
    return trip


def _two_level(block: np.ndarray, pair, d: int) -> np.ndarray:
    j, k = pair
    m = np.eye(d, dtype=np.complex128)
    m[j, j], m[j, k] = block[0, 0], block[0, 1]
    m[k, j], m[k, k] = block[1, 0], block[1, 1]
    return m


def _aiii_split(m: np.ndarray, pair_high: bool) -> AIIIStep:
    """Cartan step with rotation pair (d-2, d-1) if pair_high else (0, d-1)."""
    d = m.shape[0]
    res = csd(m, d - 1, 1)
    (u1, u2), (v1, v2) = res.left_blocks, res.right_blocks
    theta = float(res.angles[0])
    a = complex(u2[0, 0])
    b = complex(v2[0, 0])

    lo = d - 2 if pair_high else 0
    pair = (lo, d - 1)
    if pair_high and d > 2:
        # csd pairs coordinate 0 with d-1; relabel so the pairing sits on d-2.
        perm = list(range(d - 1))
        perm[0], perm[d - 2] = perm[d - 2], perm[0]
        u1 = u1[:, perm]
        v1 = v1[:, perm]
    paired = lo

    # Left scalar -> 1 by a diagonal transfer that commutes with the rotation
    # (equal entries 1/a on both paired coordinates).
    dp = np.ones(d - 1, dtype=np.complex128)
    dp[paired] = 1 / a
    k1 = np.eye(d, dtype=np.complex128)
    k1[: d - 1, : d - 1] = u1 * dp  # scales the paired column

    # Right factor (transfer)^-1 diag(v1, v2)^dagger picks up a on the paired
    # row and an a*conj(b) scalar at the bottom-right corner.
    k2_raw_top = dagger(v1)
    k2_raw_top[paired, :] = a * k2_raw_top[paired, :]
    chi = float(np.angle(a * np.conj(b)))

    # Middle block: C(theta) on (paired, d-1) combined with the leftover
    # relative phase, normalized to det 1.
    g = np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]],
        dtype=np.complex128,
    ) @ np.diag([1.0, np.exp(1j * chi)])
    g0 = np.exp(-1j * chi / 2) * g
    middle = _two_level(g0, pair, d)

    # k2: fold the pair-phase bookkeeping into the top block.
    k2 = np.eye(d, dtype=np.complex128)
    top = k2_raw_top * np.exp(-1j * chi / 2)
    top[paired, :] *= np.exp(1j * chi / 2)  # S_paired(chi/2) on the left
    k2[: d - 1, : d - 1] = top
    phase = chi / 2

    step = AIIIStep(k1=k1, middle=middle, k2=k2, phase=float(phase), pair=pair)
    err = frobenius(step.reconstruct() - m)
    if err > 1e-10 * d:
        raise ValueError(f"cartan step reconstruction failed (error {err:.3e})")
    return step


def cartan_aiii_step(m, d: int | None = None) -> AIIIStep:
    """AIII Cartan step with the middle factor on the pair (d-2, d-1)."""
    m = as_matrix(m)
    if d is None:
        d = m.shape[0]
    if m.shape != (d, d) or not is_unitary(m):
        raise ValueError("cartan_aiii_step expects a unitary of size d")
    if d < 2:
        raise ValueError("cartan_aiii_step needs d >= 2")
    return _aiii_split(m, pair_high=True)


def _emit_two_level(gates: list, qudit: int, pair, block: np.ndarray, mode: str):
    """Append elementary gates for a 2x2 unitary block on a level pair."""
    trip = euler_two_level(block, subspace=pair, mode=mode)
    a1, b, a2 = trip.angles
    j, k = pair
    axis1 = "z" if mode == "zyz" else "x"
    if abs(a2) > _EPS:
        gates.append(Rot(qudit, axis1, (j, k), a2))
    if abs(b) > _EPS:
        gates.append(Rot(qudit, "y", (j, k), b))
    if abs(a1) > _EPS:
        gates.append(Rot(qudit, axis1, (j, k), a1))
    if abs(trip.residual_phase) > _EPS:
        gates.append(LevelPhase(qudit, j, trip.residual_phase))
        gates.append(LevelPhase(qudit, k, trip.residual_phase))


def _synth_block(gates: list, m: np.ndarray, qudit: int, reg_d: int, ladder: str, mode: str):
    """Emit gates for a unitary on levels 0..d'-1 of a ``reg_d``-level qudit."""
    d = m.shape[0]
    if d == 1:
        phi = float(np.angle(m[0, 0]))
        if abs(phi) > _EPS:
            gates.append(LevelPhase(qudit, 0, phi))
        return
    if d == 2:
        _emit_two_level(gates, qudit, (0, 1), m, mode)
        return
    step = _aiii_split(m, pair_high=(ladder == "adjacent"))
    lo, hi = step.pair
    _synth_block(gates, step.k2[: d - 1, : d - 1], qudit, reg_d, ladder, mode)
    block = step.middle[np.ix_([lo, hi], [lo, hi])]
    _emit_two_level(gates, qudit, step.pair, block, mode)
    _synth_block(gates, step.k1[: d - 1, : d - 1], qudit, reg_d, ladder, mode)
    if abs(step.phase) > _EPS:
        if d == reg_d:
            gates.append(GlobalPhase(step.phase))
        else:
            # The step phase lives on the block's levels only.
            for lvl in range(d):
                gates.append(LevelPhase(qudit, lvl, step.phase))


def synth_one_qudit(m, d: int | None = None, ladder: str = "star", mode: str = "zyz") -> Circuit:
    """Decompose a one-qudit unitary into two-level rotations and phases.

    ``ladder`` selects the connectivity: "star" uses the pairs
    (0,1),(0,2),...,(0,d-1); "adjacent" uses (0,1),(1,2),...,(d-2,d-1).
    """
    m = as_matrix(m)
    if d is None:
        d = m.shape[0]
    if d > 16:
        raise ValueError("one-qudit synthesis supports d <= 16")
    if m.shape != (d, d) or not is_unitary(m):
        raise ValueError("synth_one_qudit expects a unitary of size d")
    if ladder not in ("star", "adjacent"):
        raise ValueError(f"unknown ladder {ladder!r}")
    gates: list = []
    _synth_block(gates, m, 0, d, ladder, mode)
    return Circuit(RegisterShape(d, 1), gates)


def synth_one_qutrit(m, mode: str = "zyz") -> Circuit:
    """Qutrit case of the Cartan synthesis: blocks on (0,1), (0,2), (0,1)."""
    m = as_matrix(m)
    if m.shape != (3, 3):
        raise ValueError("synth_one_qutrit expects a 3x3 unitary")
    return synth_one_qudit(m, 3, ladder="star", mode=mode)
