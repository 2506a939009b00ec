"""Two-atom reduced state, partial transpose and entanglement measures.

States are stored in the basis ``(dd, uu, ud, du)`` (first letter atom A,
``d`` ground, ``u`` excited).  Operations that need the tensor-product order
``(dd, du, ud, uu)`` convert through :func:`to_product_basis`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .amplitudes import AmplitudeSet
from .errors import PerturbativeRegimeError

BASIS = ("dd", "uu", "ud", "du")
BASIS_TAG = "dd,uu,ud,du"
PSD_FLOOR = 1e-10
HERMITIAN_TOL = 1e-12
MAX_TRANSITION_PROBABILITY = 0.05

# position of each working-basis state in the product order dd, du, ud, uu
_TO_PRODUCT = np.array([0, 3, 2, 1])

_SY = np.array([[0, -1j], [1j, 0]])
_SYSY = np.kron(_SY, _SY)


def to_product_basis(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    out = np.empty_like(m)
    out[np.ix_(_TO_PRODUCT, _TO_PRODUCT)] = m
    return out


def from_product_basis(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return m[np.ix_(_TO_PRODUCT, _TO_PRODUCT)]


@dataclass(frozen=True)
class TwoQubitState:
    matrix: np.ndarray
    normalized: bool = True
    source: object = field(default="external", compare=False)
    raw_trace: float | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"two-qubit state must be 4x4, got {m.shape}")
        scale = max(np.max(np.abs(m)), 1e-300)
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * max(scale, 1.0):
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if self.normalized and abs(np.trace(m).real - 1.0) > 1e-10:
            raise ValueError(f"normalized state must have unit trace, got {np.trace(m).real}")
        if np.linalg.eigvalsh(m).min() < -PSD_FLOOR * max(scale, 1.0):
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_product(cls, m, **kw) -> "TwoQubitState":
        return cls(from_product_basis(m), **kw)

    @property
    def product(self) -> np.ndarray:
        return to_product_basis(self.matrix)

    def to_dict(self) -> dict:
        return {
            "basis": BASIS_TAG,
            "entries": [[float(z.real), float(z.imag)] for z in self.matrix.ravel()],
            "normalized": self.normalized,
            "raw_trace": self.raw_trace,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TwoQubitState":
        if d.get("basis", BASIS_TAG) != BASIS_TAG:
            raise ValueError(f"unsupported basis tag {d.get('basis')!r}; expected {BASIS_TAG!r}")
        e = np.asarray(d["entries"], dtype=float)
        if e.shape != (16, 2):
            raise ValueError("state needs 16 (re, im) entries in row-major order")
        m = (e[:, 0] + 1j * e[:, 1]).reshape(4, 4)
        return cls(m, normalized=d.get("normalized", True), raw_trace=d.get("raw_trace"))


def pure_state(amplitudes) -> TwoQubitState:
    """Projector onto a (normalized here) pure state given in the working basis."""
    v = np.asarray(amplitudes, dtype=complex)
    v = v / np.linalg.norm(v)
    return TwoQubitState(np.outer(v, v.conj()))


_BELL_VECTORS = {
    "phi+": np.array([1, 1, 0, 0]) / np.sqrt(2),
    "phi-": np.array([1, -1, 0, 0]) / np.sqrt(2),
    "psi+": np.array([0, 0, 1, 1]) / np.sqrt(2),
    "psi-": np.array([0, 0, -1, 1]) / np.sqrt(2),
}
BELL_LABELS = tuple(_BELL_VECTORS)


def bell_vector(label: str) -> np.ndarray:
    """Bell vector in the working basis; ``psi-`` is ``(|du> - |ud>)/sqrt 2``."""
    return _BELL_VECTORS[label].astype(complex)


def bell_state(label: str = "phi+") -> TwoQubitState:
    return pure_state(bell_vector(label))


def werner_state(p: float) -> TwoQubitState:
    """``p |psi-><psi-| + (1 - p) I/4``."""
    v = bell_vector("psi-")
    return TwoQubitState(p * np.outer(v, v.conj()) + (1 - p) * np.eye(4) / 4)


def product_state(rho_a, rho_b) -> TwoQubitState:
    """``rho_a (x) rho_b`` for single-qubit matrices in the (d, u) basis."""
    return TwoQubitState.from_product(np.kron(rho_a, rho_b))


def assemble_rho(amp: AmplitudeSet, *, max_transition_probability: float = MAX_TRANSITION_PROBABILITY,
                 psd_floor: float = PSD_FLOOR) -> TwoQubitState:
    """Lowest-order reduced state of the atoms, normalized by its trace.

    Raises
    ------
    PerturbativeRegimeError
        If the raw matrix is not positive, or a first-order transition
        probability recorded in ``amp.provenance`` exceeds
        ``max_transition_probability``.
    """
    pmax = amp.provenance.get("max_transition_probability")
    if pmax is not None and pmax > max_transition_probability:
        raise PerturbativeRegimeError(
            f"largest first-order transition probability is {pmax:.3g} > {max_transition_probability:g}; "
            "second-order perturbation theory does not hold, reduce the coupling")
    raw = np.array([
        [1.0, -np.conj(amp.x0), 0, 0],
        [-amp.x0, amp.x2, 0, 0],
        [0, 0, amp.ea2, np.conj(amp.eab)],
        [0, 0, amp.eab, amp.eb2],
    ], dtype=complex)
    evals = np.linalg.eigvalsh(raw)
    if evals.min() < -psd_floor:
        raise PerturbativeRegimeError(
            f"raw reduced state has eigenvalue {evals.min():.3g}; amplitudes are inconsistent "
            "or the coupling is too large for perturbation theory")
    tr = float(np.trace(raw).real)
    return TwoQubitState(raw / tr, normalized=True, source=amp, raw_trace=tr)


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, TwoQubitState):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def partial_transpose(rho) -> np.ndarray:
    """Transpose on atom B, returned in the working basis."""
    p = to_product_basis(_as_matrix(rho)).reshape(2, 2, 2, 2)
    pt = p.transpose(0, 3, 2, 1).reshape(4, 4)
    return from_product_basis(pt)


def negativity(rho) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    ev = np.linalg.eigvalsh(partial_transpose(rho))
    return float(np.sum(-ev[ev < 0])) + 0.0


def is_npt(rho, tol: float = 0.0) -> bool:
    return bool(np.linalg.eigvalsh(partial_transpose(rho)).min() < -tol)


def concurrence(rho) -> float:
    """Wootters concurrence from the spin-flipped state."""
    p = to_product_basis(_as_matrix(rho))
    flipped = _SYSY @ p.conj() @ _SYSY
    w, v = np.linalg.eigh(p)
    sq = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    r = np.linalg.eigvalsh(sq @ flipped @ sq)
    lam = np.sort(np.sqrt(np.clip(r, 0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def inseparability_inequalities(amp: AmplitudeSet) -> tuple[bool, bool]:
    """Exchange beats emission, and emission overlap beats double excitation."""
    exchange_dominates = abs(amp.x0) ** 2 > amp.ea2 * amp.eb2
    overlap_dominates = abs(amp.eab) ** 2 > amp.x2
    return bool(exchange_dominates), bool(overlap_dominates)


def lowest_order_negativity(amp: AmplitudeSet) -> float:
    """Negativity of the normalized state from the two 2x2 blocks of its partial transpose."""
    tr = 1.0 + amp.x2 + amp.ea2 + amp.eb2
    lows = []
    for d1, d2, off in ((amp.ea2, amp.eb2, abs(amp.x0)), (1.0, amp.x2, abs(amp.eab))):
        lows.append(0.5 * (d1 + d2) - np.hypot(0.5 * (d1 - d2), off))
    return float(sum(-x for x in lows if x < 0) / tr)


def write_state(state: TwoQubitState, path, fmt: str = "json") -> None:
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(state.to_dict(), fh, indent=2)
            fh.write("\n")
        return
    lines = [f"# basis {BASIS_TAG}; 16 entries row-major: re im"]
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in state.matrix.ravel()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_state(path) -> TwoQubitState:
    """Load a state from JSON (``to_dict`` layout) or 16-line ``re im`` text."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return TwoQubitState.from_dict(json.loads(text))
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    vals = np.array(rows, dtype=float)
    if vals.shape != (16, 2):
        raise ValueError(f"{path}: expected 16 lines of 're im'")
    m = (vals[:, 0] + 1j * vals[:, 1]).reshape(4, 4)
    tr = np.trace(m).real
    return TwoQubitState(m / tr, raw_trace=float(tr))
