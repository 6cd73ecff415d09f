"""Two-kaon states evolved to a pair of detection times (t_l, t_r).

The 16-dimensional density operator is block diagonal: both surviving
(ssss, full 4x4), left surviving / right decayed (ssff), the mirror
(ffss), and both decayed (ffff).  Surviving indices carry the
factorized weights

    w_SS(t) = exp(-gamma_s t),  w_LL(t) = exp(-gamma_l t),
    w_SL(t) = exp(+i delta_m t - gamma_mean t),  w_LS = conj(w_SL),

and decayed indices the channel weights 1 - exp(-gamma_c t).  Cross
blocks (sf/fs) are unphysical and fixed to zero, as are the final-channel
off-diagonals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DomainError
from .params import MesonParameters
from .single_kaon import (
    EvolvedSingleState,
    QuasiSpin,
    SingleKaonInitial,
    validate_projector,
)

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PureTwoKaonState:
    """Pure two-kaon state in the mass product basis.

    Amplitudes r_i (signed reals) and phases phi_i for the components
    |KS KS>, |KS KL>, |KL KS>, |KL KL> in that order; sum r_i^2 = 1.
    """

    r: tuple[float, float, float, float]
    phi: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if len(self.r) != 4 or len(self.phi) != 4:
            raise DomainError("r and phi must have four entries each")
        norm = sum(x * x for x in self.r)
        if abs(norm - 1.0) > 1e-10:
            raise DomainError(f"amplitudes not normalized: sum r_i^2 = {norm}")

    def amplitudes(self) -> np.ndarray:
        """Complex mass-basis amplitude vector (KSKS, KSKL, KLKS, KLKL)."""
        return np.array(
            [ri * np.exp(1j * pi) for ri, pi in zip(self.r, self.phi)]
        )

    def density_matrix(self) -> np.ndarray:
        a = self.amplitudes()
        return np.outer(a, a.conj())

    def gauge_fixed(self) -> "PureTwoKaonState":
        """Rotate the global phase so that phi_4 = 0."""
        phi = tuple(p - self.phi[3] for p in self.phi)
        return PureTwoKaonState(self.r, phi)

    def swapped_sides(self) -> "PureTwoKaonState":
        r = (self.r[0], self.r[2], self.r[1], self.r[3])
        phi = (self.phi[0], self.phi[2], self.phi[1], self.phi[3])
        return PureTwoKaonState(r, phi)

    def initial_concurrence(self) -> float:
        """Concurrence of the pure state at t = 0."""
        r, phi = self.r, self.phi
        return 2.0 * abs(
            r[0] * r[3] * np.exp(1j * (phi[0] + phi[3]))
            - r[1] * r[2] * np.exp(1j * (phi[1] + phi[2]))
        )


_S2 = 1 / _SQRT2

# Bell-state names follow the mass-basis convention used throughout:
# psi(+-) = (|KS KL> +- |KL KS>)/sqrt2, phi(+-) = (|KS KS> +- |KL KL>)/sqrt2.
# Under the strangeness basis change psi- and phi+ map onto themselves
# while psi+ <-> phi- swap.
_BELL = {
    "psi-": PureTwoKaonState((0.0, _S2, _S2, 0.0), (0.0, 0.0, math.pi, 0.0)),
    "psi+": PureTwoKaonState((0.0, _S2, _S2, 0.0), (0.0, 0.0, 0.0, 0.0)),
    "phi+": PureTwoKaonState((_S2, 0.0, 0.0, _S2), (0.0, 0.0, 0.0, 0.0)),
    "phi-": PureTwoKaonState((_S2, 0.0, 0.0, _S2), (math.pi, 0.0, 0.0, 0.0)),
}

def _normalized(r, phi=(0.0, 0.0, 0.0, 0.0)) -> PureTwoKaonState:
    norm = math.sqrt(sum(x * x for x in r))
    return PureTwoKaonState(tuple(x / norm for x in r), phi)


# Non-maximally entangled optima of the strangeness CHSH search; the
# four-decimal amplitudes are renormalized to unit norm.
_NAMED = {
    "xi": _normalized((-0.8335, -0.2446, -0.2446, 0.4308)),
    "chi": _normalized(
        (-0.7823, 0.1460, 0.1460, 0.5877),
        (-0.2751, -0.6784, -0.6784, 0.0),
    ),
}


def bell_state(name: str) -> PureTwoKaonState:
    try:
        return _BELL[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown Bell state {name!r}; choose from {sorted(_BELL)}"
        ) from None


def named_state(name: str) -> PureTwoKaonState:
    """Bell states plus the paper-search optima 'xi' and 'chi'."""
    if name in _BELL:
        return _BELL[name]
    try:
        return _NAMED[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown state {name!r}; choose from {sorted(_BELL) + sorted(_NAMED)}"
        ) from None


def _surviving_weights(t: float, params: MesonParameters) -> np.ndarray:
    """2x2 matrix of weights w_nm(t) applied to surviving indices."""
    gs, gl, dm, g = params.gamma_s, params.gamma_l, params.delta_m, params.gamma_mean
    wsl = np.exp((1j * dm - g) * t)
    return np.array(
        [[math.exp(-gs * t), wsl], [np.conj(wsl), math.exp(-gl * t)]]
    )


def _decay_weights(t: float, params: MesonParameters) -> np.ndarray:
    return np.array(
        [1.0 - math.exp(-params.gamma_s * t), 1.0 - math.exp(-params.gamma_l * t)]
    )


@dataclass(frozen=True)
class BipartiteEvolvedState:
    """Block-diagonal two-kaon density operator at times (t_l, t_r).

    ssff[n, m, c]: left surviving element (n, m), right decayed into the
    channel fed by mass state c; ffss mirrored; ffff[c, d] both decayed.
    """

    ssss: np.ndarray  # 4x4 complex
    ssff: np.ndarray  # (2, 2, 2) complex
    ffss: np.ndarray  # (2, 2, 2) complex
    ffff: np.ndarray  # (2, 2) real
    t_l: float
    t_r: float

    @property
    def total_trace(self) -> float:
        return float(
            np.trace(self.ssss).real
            + np.einsum("nnc->", self.ssff).real
            + np.einsum("nnc->", self.ffss).real
            + self.ffff.sum()
        )

    def block_matrices(self) -> dict[str, np.ndarray]:
        """The four blocks as 4x4 matrices (final index diagonal)."""
        ssff = np.zeros((4, 4), dtype=complex)
        ffss = np.zeros((4, 4), dtype=complex)
        for c in range(2):
            for n in range(2):
                for m in range(2):
                    ssff[2 * n + c, 2 * m + c] = self.ssff[n, m, c]
                    ffss[2 * c + n, 2 * c + m] = self.ffss[n, m, c]
        return {
            "ssss": self.ssss.copy(),
            "ssff": ssff,
            "ffss": ffss,
            "ffff": np.diag(self.ffff.ravel()).astype(complex),
        }

    def left_surviving_marginal(self) -> np.ndarray:
        """2x2 surviving marginal of the left kaon (right traced out)."""
        return (
            np.trace(self.ssss.reshape(2, 2, 2, 2), axis1=1, axis2=3)
            + self.ssff.sum(axis=2)
        )

    def right_surviving_marginal(self) -> np.ndarray:
        return (
            np.trace(self.ssss.reshape(2, 2, 2, 2), axis1=0, axis2=2)
            + self.ffss.sum(axis=2)
        )


def evolve_bipartite(
    psi0: PureTwoKaonState,
    t_l: float,
    t_r: float,
    params: MesonParameters,
) -> BipartiteEvolvedState:
    """Build the block-diagonal sigma(t_l, t_r) from a pure initial state."""
    if t_l < 0 or t_r < 0:
        raise DomainError("detection times must be nonnegative")
    sigma0 = psi0.density_matrix()
    wl = _surviving_weights(t_l, params)
    wr = _surviving_weights(t_r, params)
    gl_dec = _decay_weights(t_l, params)
    gr_dec = _decay_weights(t_r, params)

    s0 = sigma0.reshape(2, 2, 2, 2)  # indices (n, l, m, k): left n/m, right l/k
    ssss = np.einsum("nlmk,nm,lk->nlmk", s0, wl, wr).reshape(4, 4)
    ssff = np.einsum("ncmc,nm,c->nmc", s0, wl, gr_dec)
    ffss = np.einsum("cnck,nk,c->nkc", s0, wr, gl_dec)
    ffff = np.einsum("cdcd,c,d->cd", s0, gl_dec, gr_dec).real
    return BipartiteEvolvedState(
        ssss=ssss, ssff=ssff, ffss=ffss, ffff=ffff, t_l=t_l, t_r=t_r
    )


def left_marginal(
    psi0: PureTwoKaonState, t_l: float, params: MesonParameters
) -> EvolvedSingleState:
    """Single-kaon view of the left subsystem at (t_l, t_r = 0)."""
    state = evolve_bipartite(psi0, t_l, 0.0, params)
    ss = state.left_surviving_marginal()
    ffss_occ = np.einsum("nnc->c", state.ffss).real
    return EvolvedSingleState(
        ss=ss, ff_diag=(float(ffss_occ[1]), float(ffss_occ[0])), t=t_l
    )


def right_marginal(
    psi0: PureTwoKaonState, t_r: float, params: MesonParameters
) -> EvolvedSingleState:
    return left_marginal(psi0.swapped_sides(), t_r, params)


def reduced_initial(psi0: PureTwoKaonState, side: str = "left") -> SingleKaonInitial:
    """Partial trace of |psi0><psi0| over the other subsystem at t = 0."""
    s0 = psi0.density_matrix().reshape(2, 2, 2, 2)
    if side == "left":
        rho = np.trace(s0, axis1=1, axis2=3)
    elif side == "right":
        rho = np.trace(s0, axis1=0, axis2=2)
    else:
        raise DomainError("side must be 'left' or 'right'")
    return SingleKaonInitial.from_matrix(rho)


def expectation_matrix(
    psi0: PureTwoKaonState,
    p_l: np.ndarray | QuasiSpin,
    p_r: np.ndarray | QuasiSpin,
    t_l: float,
    t_r: float,
    params: MesonParameters,
) -> float:
    """Joint expectation value from the evolved blocks (audit path).

    E = 1 - 2 P(Y_l) - 2 P(Y_r) + 4 P(Y_l Y_r); a NO event includes the
    case that the kaon decayed before detection.
    """
    if isinstance(p_l, QuasiSpin):
        p_l = p_l.projector()
    if isinstance(p_r, QuasiSpin):
        p_r = p_r.projector()
    p_l = validate_projector(p_l)
    p_r = validate_projector(p_r)
    state = evolve_bipartite(psi0, t_l, t_r, params)
    p_yy = float(np.trace(np.kron(p_l, p_r) @ state.ssss).real)
    p_yl = float(np.trace(p_l @ state.left_surviving_marginal()).real)
    p_yr = float(np.trace(p_r @ state.right_surviving_marginal()).real)
    return 1.0 - 2.0 * p_yl - 2.0 * p_yr + 4.0 * p_yy


def expectation_closed_form(
    psi0: PureTwoKaonState, t_l, t_r, params: MesonParameters
):
    """Antikaon-antikaon expectation value, closed form (hot path).

    Accepts scalar or broadcastable array times.
    """
    t_l = np.asarray(t_l, dtype=float)
    t_r = np.asarray(t_r, dtype=float)
    if np.any(t_l < 0) or np.any(t_r < 0):
        raise DomainError("detection times must be nonnegative")
    gs, gl, dm, g = params.gamma_s, params.gamma_l, params.delta_m, params.gamma_mean
    r1, r2, r3, r4 = psi0.r
    p1, p2, p3, p4 = psi0.phi
    esl, esr = np.exp(-gs * t_l), np.exp(-gs * t_r)
    ell, elr = np.exp(-gl * t_l), np.exp(-gl * t_r)
    egl, egr = np.exp(-g * t_l), np.exp(-g * t_r)
    val = (
        1.0
        + r1 * r1 * esl * esr
        + r2 * r2 * esl * elr
        + r3 * r3 * ell * esr
        + r4 * r4 * ell * elr
        - r1 * r1 * (esl + esr)
        - r2 * r2 * (esl + elr)
        - r3 * r3 * (ell + esr)
        - r4 * r4 * (ell + elr)
        + 2 * r1 * r2 * (1 - esl) * np.cos(dm * t_r + p1 - p2) * egr
        + 2 * r1 * r3 * np.cos(dm * t_l + p1 - p3) * egl * (1 - esr)
        + 2 * r2 * r4 * np.cos(dm * t_l + p2 - p4) * egl * (1 - elr)
        + 2 * r3 * r4 * (1 - ell) * np.cos(dm * t_r + p3 - p4) * egr
        + 2 * r1 * r4 * np.cos(dm * (t_l + t_r) + p1 - p4) * egl * egr
        + 2 * r2 * r3 * np.cos(dm * (t_l - t_r) + p2 - p3) * egl * egr
    )
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class BipartitePurity:
    raw: float
    normalized: float  # (d Tr sigma^2 - 1)/(d - 1), d = 16


def purity_bipartite(state: BipartiteEvolvedState) -> BipartitePurity:
    """Tr sigma^2 summed over the four blocks, raw and d=16 normalized."""
    raw = float(
        np.sum(np.abs(state.ssss) ** 2)
        + np.sum(np.abs(state.ssff) ** 2)
        + np.sum(np.abs(state.ffss) ** 2)
        + np.sum(state.ffff**2)
    )
    return BipartitePurity(raw=raw, normalized=(16.0 * raw - 1.0) / 15.0)
