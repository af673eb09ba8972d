"""Mixed-radix circuit representation.

Elementary gates are two-level rotations, level phases, a global phase and
the GCX two-qudit gate.  High-level nodes (opaque unitaries, uniformly
controlled gates, controlled diagonals, uniformly controlled rotations) carry
enough data to be evaluated directly and are removed by the synthesis passes
before serialization.

Index convention: qudit 0 is the most significant digit of the basis index,
so ``kron(A, B)`` acts with A on qudit 0.  The gate list is chronological;
the circuit unitary is the product of the gate matrices composed right to
left (first gate rightmost).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import as_matrix, dagger, frobenius

__all__ = [
    "RegisterShape",
    "Rot",
    "LevelPhase",
    "GlobalPhase",
    "GCX",
    "Opaque",
    "UCGate",
    "CtrlDiag",
    "UCRot",
    "Circuit",
    "evaluate",
    "gate_unitary",
    "count_gcx",
    "rewrite_control_level",
    "rewrite_target_levels",
    "equivalent_up_to_phase",
    "circuit_to_json",
    "circuit_from_json",
]

MAX_EVAL_DIM = 4096

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class RegisterShape:
    """A register of ``n`` qudits with ``d`` levels each."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("radix must be >= 2")
        if self.n < 1:
            raise ValueError("qudit count must be >= 1")

    @property
    def dim(self) -> int:
        return self.d**self.n


def _norm_theta(theta: float) -> float:
    """Normalize a rotation angle to (-2*pi, 2*pi]."""
    t = float(theta) % (4 * np.pi)
    if t > 2 * np.pi:
        t -= 4 * np.pi
    if t <= -2 * np.pi:
        t += 4 * np.pi
    return t


def _norm_phi(phi: float) -> float:
    """Normalize a phase to (-pi, pi]."""
    p = float(phi) % (2 * np.pi)
    if p > np.pi:
        p -= 2 * np.pi
    return p


@dataclass(frozen=True)
class Rot:
    """Two-level rotation R_axis^{(j,k)}(theta) = exp(-i theta sigma/2)."""

    qudit: int
    axis: str
    levels: tuple[int, int]
    theta: float

    def __post_init__(self):
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"invalid axis {self.axis!r}")
        j, k = self.levels
        if not 0 <= j < k:
            raise ValueError(f"invalid level pair {self.levels}")
        object.__setattr__(self, "levels", (int(j), int(k)))
        object.__setattr__(self, "theta", _norm_theta(self.theta))

    def block(self) -> np.ndarray:
        half = self.theta / 2
        return np.cos(half) * np.eye(2) - 1j * np.sin(half) * _PAULI[self.axis]


@dataclass(frozen=True)
class LevelPhase:
    """S_m(phi): phase exp(i phi) on a single level of one qudit."""

    qudit: int
    level: int
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", _norm_phi(self.phi))


@dataclass(frozen=True)
class GlobalPhase:
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", _norm_phi(self.phi))


@dataclass(frozen=True)
class GCX:
    """Apply X^{(i,j)} on the target iff the control qudit is |m>."""

    control: int
    control_level: int
    target: int
    levels: tuple[int, int]

    def __post_init__(self):
        i, j = self.levels
        if not 0 <= i < j:
            raise ValueError(f"invalid level pair {self.levels}")
        if self.control == self.target:
            raise ValueError("control and target must differ")
        object.__setattr__(self, "levels", (int(i), int(j)))


# --- high-level nodes -------------------------------------------------------


@dataclass(frozen=True)
class Opaque:
    """An unsynthesized unitary block on an ordered tuple of qudits."""

    qudits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "qudits", tuple(self.qudits))
        object.__setattr__(self, "matrix", as_matrix(self.matrix))


@dataclass(frozen=True)
class UCGate:
    """Uniformly controlled gate: block ``blocks[v]`` on targets when the
    control qudit is |v>."""

    control: int
    targets: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "blocks", tuple(as_matrix(b) for b in self.blocks))


@dataclass(frozen=True)
class CtrlDiag:
    """Controlled diagonal: phases exp(i phases[w]) on the target word w iff
    the control qudit is |control_level>."""

    control: int
    control_level: int
    targets: tuple[int, ...]
    phases: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))


@dataclass(frozen=True)
class UCRot:
    """Uniformly controlled two-level rotation: R_axis^{(levels)}(angles[w])
    on the target, multiplexed over the control word w (mixed-radix, first
    control most significant)."""

    controls: tuple[int, ...]
    target: int
    axis: str
    levels: tuple[int, int]
    angles: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if self.axis not in ("y", "z"):
            raise ValueError("uniformly controlled rotations support y or z")


ELEMENTARY = (Rot, LevelPhase, GlobalPhase, GCX)
HIGH_LEVEL = (Opaque, UCGate, CtrlDiag, UCRot)


@dataclass(frozen=True)
class Circuit:
    shape: RegisterShape
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            self._check_gate(g)

    def _check_gate(self, g):
        d, n = self.shape.d, self.shape.n
        if isinstance(g, Rot):
            ok = 0 <= g.qudit < n and g.levels[1] < d
        elif isinstance(g, LevelPhase):
            ok = 0 <= g.qudit < n and 0 <= g.level < d
        elif isinstance(g, GlobalPhase):
            ok = True
        elif isinstance(g, GCX):
            ok = (
                0 <= g.control < n
                and 0 <= g.target < n
                and 0 <= g.control_level < d
                and g.levels[1] < d
            )
        elif isinstance(g, Opaque):
            ok = all(0 <= q < n for q in g.qudits) and g.matrix.shape == (
                d ** len(g.qudits),
            ) * 2
        elif isinstance(g, UCGate):
            ok = (
                0 <= g.control < n
                and len(g.blocks) == d
                and all(b.shape == (d ** len(g.targets),) * 2 for b in g.blocks)
            )
        elif isinstance(g, CtrlDiag):
            ok = 0 <= g.control < n and len(g.phases) == d ** len(g.targets)
        elif isinstance(g, UCRot):
            ok = (
                0 <= g.target < n
                and g.levels[1] < d
                and len(g.angles) == d ** len(g.controls)
            )
        else:
            raise TypeError(f"unknown gate type {type(g).__name__}")
        if not ok:
            raise ValueError(f"gate {g} is invalid for shape {self.shape}")

    def __len__(self):
        return len(self.gates)

    def extended(self, more) -> "Circuit":
        return replace(self, gates=self.gates + tuple(more))

    def is_elementary(self) -> bool:
        return all(isinstance(g, ELEMENTARY) for g in self.gates)


def count_gcx(circuit: Circuit) -> int:
    return sum(isinstance(g, GCX) for g in circuit.gates)


def count_rot(circuit: Circuit) -> int:
    return sum(isinstance(g, Rot) for g in circuit.gates)


def count_phase(circuit: Circuit) -> int:
    return sum(isinstance(g, (LevelPhase, GlobalPhase)) for g in circuit.gates)


# --- evaluation -------------------------------------------------------------


def _apply_single(acc: np.ndarray, d: int, n: int, qudit: int, block2: np.ndarray, levels):
    """Left-multiply by a two-level one-qudit gate."""
    j, k = levels
    lead = d**qudit
    a3 = acc.reshape(lead, d, -1)
    rj = block2[0, 0] * a3[:, j, :] + block2[0, 1] * a3[:, k, :]
    rk = block2[1, 0] * a3[:, j, :] + block2[1, 1] * a3[:, k, :]
    a3[:, j, :] = rj
    a3[:, k, :] = rk


def _apply_matrix_on(acc: np.ndarray, d: int, n: int, qudits, mat: np.ndarray):
    """Left-multiply by an arbitrary unitary acting on the given qudits."""
    dim = acc.shape[0]
    a = acc.reshape((d,) * n + (dim,))
    axes = list(qudits)
    rest = [ax for ax in range(n) if ax not in axes] + [n]
    perm = axes + rest
    at = np.transpose(a, perm)
    shp = at.shape
    at2 = at.reshape(d ** len(axes), -1)
    at2 = mat @ at2
    at = at2.reshape(shp)
    inv = np.argsort(perm)
    a[...] = np.transpose(at, inv)


def gate_unitary(gate, shape: RegisterShape) -> np.ndarray:
    """Full-register unitary of a single gate."""
    return evaluate(Circuit(shape, (gate,)))


def evaluate(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (product of gates, first gate rightmost)."""
    d, n = circuit.shape.d, circuit.shape.n
    dim = circuit.shape.dim
    if dim > MAX_EVAL_DIM:
        raise ValueError(f"evaluation budget exceeded: d^n = {dim} > {MAX_EVAL_DIM}")
    acc = np.eye(dim, dtype=np.complex128)
    for g in circuit.gates:
        if isinstance(g, GlobalPhase):
            acc *= np.exp(1j * g.phi)
        elif isinstance(g, LevelPhase):
            lead = d**g.qudit
            a3 = acc.reshape(lead, d, -1)
            a3[:, g.level, :] *= np.exp(1j * g.phi)
        elif isinstance(g, Rot):
            _apply_single(acc, d, n, g.qudit, g.block(), g.levels)
        elif isinstance(g, GCX):
            a = acc.reshape((d,) * n + (dim,))
            sel = [slice(None)] * (n + 1)
            sel[g.control] = g.control_level
            sub = a[tuple(sel)]
            t_ax = g.target if g.target < g.control else g.target - 1
            order = list(range(d))
            i, j = g.levels
            order[i], order[j] = j, i
            a[tuple(sel)] = np.take(sub, order, axis=t_ax)
        elif isinstance(g, Opaque):
            _apply_matrix_on(acc, d, n, g.qudits, g.matrix)
        elif isinstance(g, UCGate):
            a = acc.reshape((d,) * n + (dim,))
            for v in range(d):
                sel = [slice(None)] * (n + 1)
                sel[g.control] = v
                sub = a[tuple(sel)].copy()
                tmp = sub.reshape((d,) * (n - 1) + (dim,))
                targs = [t if t < g.control else t - 1 for t in g.targets]
                _apply_uc_block(tmp, d, n - 1, targs, g.blocks[v])
                a[tuple(sel)] = tmp.reshape(sub.shape)
        elif isinstance(g, CtrlDiag):
            a = acc.reshape((d,) * n + (dim,))
            sel = [slice(None)] * (n + 1)
            sel[g.control] = g.control_level
            sub = a[tuple(sel)].copy()
            tmp = sub.reshape((d,) * (n - 1) + (dim,))
            targs = [t if t < g.control else t - 1 for t in g.targets]
            diag = np.exp(1j * np.asarray(g.phases))
            _apply_uc_block(tmp, d, n - 1, targs, np.diag(diag))
            a[tuple(sel)] = tmp.reshape(sub.shape)
        elif isinstance(g, UCRot):
            k = len(g.controls)
            for w in range(d**k):
                digits = _digits(w, d, k)
                a = acc.reshape((d,) * n + (dim,))
                sel = [slice(None)] * (n + 1)
                for c, dig in zip(g.controls, digits):
                    sel[c] = dig
                sub = a[tuple(sel)].copy()
                m = n - k
                tmp = sub.reshape((d,) * m + (dim,))
                t_ax = g.target - sum(1 for c in g.controls if c < g.target)
                rot = Rot(0, g.axis, g.levels, g.angles[w])
                _apply_uc_block(tmp, d, m, [t_ax], _embed_two_level(rot.block(), g.levels, d))
                a[tuple(sel)] = tmp.reshape(sub.shape)
        else:
            raise TypeError(f"cannot evaluate gate {g}")
    return acc


def _apply_uc_block(tensor: np.ndarray, d: int, n_axes: int, qudits, mat: np.ndarray):
    flat = tensor.reshape(d**n_axes, -1) if n_axes else tensor.reshape(1, -1)
    acc = flat  # operate in place through the helper below
    a = acc.reshape((d,) * n_axes + (acc.shape[-1],))
    axes = list(qudits)
    rest = [ax for ax in range(n_axes) if ax not in axes] + [n_axes]
    perm = axes + rest
    at = np.transpose(a, perm)
    shp = at.shape
    at2 = mat @ at.reshape(d ** len(axes), -1)
    a[...] = np.transpose(at2.reshape(shp), np.argsort(perm))


def _embed_two_level(block2: np.ndarray, levels, d: int) -> np.ndarray:
    j, k = levels
    m = np.eye(d, dtype=np.complex128)
    m[j, j], m[j, k] = block2[0, 0], block2[0, 1]
    m[k, j], m[k, k] = block2[1, 0], block2[1, 1]
    return m


def _digits(x: int, d: int, n: int) -> list[int]:
    """Mixed-radix digits of x, most significant first."""
    out = []
    for p in range(n - 1, -1, -1):
        out.append((x // d**p) % d)
    return out


# --- GCX rewrite rules ------------------------------------------------------


def _x_emulation(qudit: int, a: int, b: int) -> list:
    """X^{(a,b)} on one qudit as elementary gates: S_max(pi) then Ry(pi)."""
    lo, hi = min(a, b), max(a, b)
    return [LevelPhase(qudit, hi, np.pi), Rot(qudit, "y", (lo, hi), np.pi)]


def rewrite_control_level(g: GCX, new_level: int) -> list:
    """Fig-2(a) style rewrite: change the control level by conjugating the
    control qudit with X^{(m, m')} (emitted as a rotation plus a phase)."""
    if new_level == g.control_level:
        raise ValueError("new control level equals the current one")
    emu = _x_emulation(g.control, g.control_level, new_level)
    g2 = replace(g, control_level=new_level)
    return emu + [g2] + emu


def rewrite_target_levels(g: GCX, new_levels: tuple[int, int], conj: tuple[int, int]) -> list:
    """Fig-2(b) style rewrite: move the target transposition to new levels by
    conjugating the target qudit with the transposition ``conj``."""
    i, j = g.levels
    ni, nj = min(new_levels), max(new_levels)
    a, b = conj
    mapping = {a: b, b: a}
    image = {mapping.get(ni, ni), mapping.get(nj, nj)}
    if image != {i, j}:
        raise ValueError(f"conjugator {conj} does not map {new_levels} onto {g.levels}")
    emu = _x_emulation(g.target, a, b)
    g2 = replace(g, levels=(ni, nj))
    return emu + [g2] + emu


def equivalent_up_to_phase(a, b, tol: float | None = None):
    """Compare two matrices up to a global phase.

    Returns ``(matches, error)`` where error = ||a - e^{i phi*} b||_F with
    phi* = arg tr(b† a); if the trace is phase-indeterminate the alignment
    falls back to the entry of largest modulus.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if tol is None:
        tol = 1e-8 * a.shape[0]
    t = np.trace(dagger(b) @ a)
    if abs(t) > 1e-9 * a.shape[0]:
        phi = np.angle(t)
    else:
        prod = np.abs(a) * np.abs(b)
        k, l = np.unravel_index(np.argmax(prod), prod.shape)
        phi = np.angle(a[k, l] / b[k, l]) if prod[k, l] > 1e-12 else 0.0
    err = frobenius(a - np.exp(1j * phi) * b)
    return bool(err <= tol), float(err)


# --- serialization ----------------------------------------------------------


def _gate_to_dict(g) -> dict:
    if isinstance(g, GCX):
        return {
            "kind": "gcx",
            "control": g.control,
            "level": g.control_level,
            "target": g.target,
            "i": g.levels[0],
            "j": g.levels[1],
        }
    if isinstance(g, Rot):
        return {
            "kind": "rot",
            "qudit": g.qudit,
            "axis": g.axis,
            "j": g.levels[0],
            "k": g.levels[1],
            "theta": g.theta,
        }
    if isinstance(g, LevelPhase):
        return {"kind": "phase", "qudit": g.qudit, "level": g.level, "phi": g.phi}
    if isinstance(g, GlobalPhase):
        return {"kind": "gphase", "phi": g.phi}
    raise ValueError(f"cannot serialize unlowered gate {type(g).__name__}")


def _gate_from_dict(obj: dict):
    kind = obj.get("kind")
    if kind == "gcx":
        return GCX(obj["control"], obj["level"], obj["target"], (obj["i"], obj["j"]))
    if kind == "rot":
        return Rot(obj["qudit"], obj["axis"], (obj["j"], obj["k"]), obj["theta"])
    if kind == "phase":
        return LevelPhase(obj["qudit"], obj["level"], obj["phi"])
    if kind == "gphase":
        return GlobalPhase(obj["phi"])
    raise ValueError(f"unknown gate kind {kind!r}")


def circuit_to_json(circuit: Circuit) -> str:
    doc = {
        "radix": circuit.shape.d,
        "qudits": circuit.shape.n,
        "gates": [_gate_to_dict(g) for g in circuit.gates],
    }
    return json.dumps(doc, indent=None, separators=(",", ":"))


def circuit_from_json(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid circuit JSON: {exc}") from exc
    for key in ("radix", "qudits", "gates"):
        if key not in doc:
            raise ValueError(f"circuit JSON missing {key!r}")
    shape = RegisterShape(int(doc["radix"]), int(doc["qudits"]))
    gates = [_gate_from_dict(g) for g in doc["gates"]]
    return Circuit(shape, gates)
