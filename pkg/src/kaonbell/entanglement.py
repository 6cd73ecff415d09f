"""Concurrence, entanglement of formation and the PPT test.

Entanglement of the evolved two-kaon state is carried entirely by the
surviving-surviving block; the decayed blocks are diagonal in the final
index and can never acquire negative partial-transpose eigenvalues.
Concurrence is evaluated on the unnormalized block, so the damping
factor exp(-gamma_mean (t_l + t_r)) shows up directly in the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteEvolvedState, PureTwoKaonState
from .exceptions import DomainError
from .params import MesonParameters

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_FLIP = np.kron(_SY, _SY).real  # sigma_y (x) sigma_y is real


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: tuple[float, float, float, float]  # descending


def wootters_concurrence(block: np.ndarray, tol: float = 1e-10) -> ConcurrenceResult:
    """Concurrence of a (possibly subnormalized) 4x4 PSD matrix.

    The spin-flip spectrum is obtained from the singular values of
    tau = A^T (sy x sy) A with A the matrix of subnormalized eigenvectors
    of the block.  This keeps rank-deficient blocks exact, unlike taking
    square roots of the (noisy) eigenvalues of block @ flipped-block.
    """
    block = np.asarray(block, dtype=complex)
    if block.shape != (4, 4):
        raise DomainError("concurrence is defined for 4x4 blocks")
    if np.max(np.abs(block - block.conj().T)) > tol:
        raise DomainError("block is not Hermitian")
    w, v = np.linalg.eigh(block)
    if w.min() < -tol * max(w.max(), 1.0):
        raise DomainError("block is not positive semidefinite")
    w = np.where(w > w.max() * 1e-14, w, 0.0)
    a = v * np.sqrt(np.clip(w, 0.0, None))
    tau = a.T @ _FLIP @ a
    lam = np.linalg.svd(tau, compute_uv=False)
    value = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return ConcurrenceResult(value=float(value), lambdas=tuple(float(x) for x in lam))


def concurrence_closed_form(
    psi0: PureTwoKaonState, t_l, t_r, params: MesonParameters
):
    """Initial pure-state concurrence times the damping factor.

    C(t_l, t_r) = 2 |r1 r4 e^{i(phi1+phi4)} - r2 r3 e^{i(phi2+phi3)}|
                  * exp(-gamma_mean (t_l + t_r)).
    Accepts scalar or array times.
    """
    t_l = np.asarray(t_l, dtype=float)
    t_r = np.asarray(t_r, dtype=float)
    if np.any(t_l < 0) or np.any(t_r < 0):
        raise DomainError("detection times must be nonnegative")
    val = psi0.initial_concurrence() * np.exp(-params.gamma_mean * (t_l + t_r))
    return float(val) if val.ndim == 0 else val


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation of a two-qubit state with concurrence c."""
    if not 0.0 <= c <= 1.0 + 1e-12:
        raise DomainError("concurrence must lie in [0, 1]")
    c = min(c, 1.0)
    x = 0.5 * (1.0 + math.sqrt(max(1.0 - c * c, 0.0)))
    return _binary_entropy(x)


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def partial_transpose(block: np.ndarray) -> np.ndarray:
    """Partial transpose of a 4x4 two-qubit matrix over the right factor."""
    block = np.asarray(block, dtype=complex)
    return block.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_min_eigenvalue(state: BipartiteEvolvedState) -> float:
    """Minimum eigenvalue over all blocks after partial transposition.

    Negative implies entanglement; for the blocks other than ssss the
    partial transpose leaves the spectrum unchanged.
    """
    mins = [float(np.linalg.eigvalsh(partial_transpose(state.ssss)).min())]
    for c in range(2):
        mins.append(float(np.linalg.eigvalsh(state.ssff[:, :, c]).min()))
        mins.append(float(np.linalg.eigvalsh(state.ffss[:, :, c]).min()))
    mins.append(float(state.ffff.min()))
    return min(mins)
