"""Single neutral kaon as an open (decaying) quantum system.

The state lives on the enlarged space "surviving (+) final": a 2x2
surviving block in the mass basis {K_S, K_L} plus two final-channel
occupations (fed by K_L and K_S decays respectively).  The closed-form
evolution and a fixed-step RK4 integration of the master equation are
both provided; they must agree and tests enforce that.

Convention: the surviving coherence rotates as exp(+i*delta_m*t), i.e.
m_L > m_S.  All probabilities and purities are phase-insensitive.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .exceptions import DomainError
from .params import MesonParameters

_SQRT2 = math.sqrt(2.0)

# mass-basis components of the strangeness eigenstates:
# K0 = (KS + KL)/sqrt2, K0bar = (-KS + KL)/sqrt2
_K0_MASS = np.array([1.0, 1.0]) / _SQRT2
_K0BAR_MASS = np.array([-1.0, 1.0]) / _SQRT2


@dataclass(frozen=True)
class QuasiSpin:
    """Normalized superposition alpha*|K0> + beta*|K0bar> (strangeness basis)."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise DomainError(f"quasi-spin amplitudes not normalized: |.|^2 = {norm}")

    def mass_vector(self) -> np.ndarray:
        """Components in the mass basis (K_S, K_L)."""
        return self.alpha * _K0_MASS + self.beta * _K0BAR_MASS

    def projector(self) -> np.ndarray:
        """Rank-one projector in the mass basis."""
        v = self.mass_vector()
        return np.outer(v, v.conj())

    @classmethod
    def k0(cls) -> "QuasiSpin":
        return cls(1.0, 0.0)

    @classmethod
    def k0bar(cls) -> "QuasiSpin":
        return cls(0.0, 1.0)

    @classmethod
    def ks(cls) -> "QuasiSpin":
        # KS = (K0 - K0bar)/sqrt2
        return cls(1 / _SQRT2, -1 / _SQRT2)

    @classmethod
    def kl(cls) -> "QuasiSpin":
        return cls(1 / _SQRT2, 1 / _SQRT2)


def validate_projector(p: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Check Hermiticity, idempotence and unit trace of a 2x2 projector."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (2, 2):
        raise DomainError("projector must be a 2x2 matrix")
    if np.max(np.abs(p - p.conj().T)) > tol:
        raise DomainError("projector is not Hermitian")
    if np.max(np.abs(p @ p - p)) > tol:
        raise DomainError("projector is not idempotent")
    if abs(np.trace(p).real - 1.0) > tol:
        raise DomainError("projector must have trace 1")
    return p


@dataclass(frozen=True)
class SingleKaonInitial:
    """Initial surviving-block density matrix in the mass basis."""

    rho_ss_weight: float  # rho_SS
    rho_ll_weight: float  # rho_LL
    rho_sl: complex = 0.0

    def __post_init__(self) -> None:
        if abs(self.rho_ss_weight + self.rho_ll_weight - 1.0) > 1e-10:
            raise DomainError("rho_SS + rho_LL must equal 1")
        if self.rho_ss_weight < -1e-12 or self.rho_ll_weight < -1e-12:
            raise DomainError("diagonal weights must be nonnegative")
        if abs(self.rho_sl) ** 2 > self.rho_ss_weight * self.rho_ll_weight + 1e-10:
            raise DomainError("|rho_SL|^2 must not exceed rho_SS * rho_LL")

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.rho_ss_weight, self.rho_sl],
                [np.conj(self.rho_sl), self.rho_ll_weight],
            ],
            dtype=complex,
        )

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "SingleKaonInitial":
        rho = np.asarray(rho, dtype=complex)
        return cls(rho[0, 0].real, rho[1, 1].real, rho[0, 1])

    @classmethod
    def pure(cls, amp_s: complex, amp_l: complex) -> "SingleKaonInitial":
        norm = abs(amp_s) ** 2 + abs(amp_l) ** 2
        return cls(
            abs(amp_s) ** 2 / norm,
            abs(amp_l) ** 2 / norm,
            amp_s * np.conj(amp_l) / norm,
        )

    @classmethod
    def ks(cls) -> "SingleKaonInitial":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def kl(cls) -> "SingleKaonInitial":
        return cls(0.0, 1.0, 0.0)

    @classmethod
    def k0(cls) -> "SingleKaonInitial":
        return cls.pure(1 / _SQRT2, 1 / _SQRT2)

    @classmethod
    def k0bar(cls) -> "SingleKaonInitial":
        return cls.pure(-1 / _SQRT2, 1 / _SQRT2)


@dataclass(frozen=True)
class EvolvedSingleState:
    """Surviving block + final-channel occupations at time t [tau_S]."""

    ss: np.ndarray  # 2x2 complex, mass basis
    ff_diag: tuple[float, float]  # (fed by K_L, fed by K_S)
    ff_offdiag: complex = 0.0
    t: float = 0.0

    @property
    def total_trace(self) -> float:
        return float(np.trace(self.ss).real + self.ff_diag[0] + self.ff_diag[1])

    def full_matrix(self) -> np.ndarray:
        """4x4 density matrix on the enlarged surviving (+) final space."""
        out = np.zeros((4, 4), dtype=complex)
        out[:2, :2] = self.ss
        out[2, 2] = self.ff_diag[0]
        out[3, 3] = self.ff_diag[1]
        out[2, 3] = np.conj(self.ff_offdiag)
        out[3, 2] = self.ff_offdiag
        return out

    def purity(self) -> float:
        m = self.full_matrix()
        return float(np.sum(np.abs(m) ** 2))


def evolve_single(
    init: SingleKaonInitial,
    t: float,
    params: MesonParameters,
    offdiag_mode: str = "zero",
) -> EvolvedSingleState:
    """Closed-form evolution of the enlarged single-kaon density matrix."""
    if t < 0:
        raise DomainError("time must be nonnegative")
    if offdiag_mode not in ("zero", "formal-X"):
        raise DomainError(f"unknown offdiag_mode {offdiag_mode!r}")
    gs, gl, dm, g = params.gamma_s, params.gamma_l, params.delta_m, params.gamma_mean
    es, el = math.exp(-gs * t), math.exp(-gl * t)
    coher = cmath.exp((1j * dm - g) * t) * init.rho_sl
    ss = np.array(
        [
            [es * init.rho_ss_weight, coher],
            [np.conj(coher), el * init.rho_ll_weight],
        ],
        dtype=complex,
    )
    ff_diag = ((1.0 - el) * init.rho_ll_weight, (1.0 - es) * init.rho_ss_weight)
    x = 0.0 + 0.0j
    if offdiag_mode == "formal-X":
        x = (
            math.sqrt(gs * gl)
            / (1j * dm - g)
            * (cmath.exp((1j * dm - g) * t) - 1.0)
            * init.rho_sl
        )
    return EvolvedSingleState(ss=ss, ff_diag=ff_diag, ff_offdiag=x, t=t)


def integrate_master_equation(
    init: SingleKaonInitial,
    t: float,
    params: MesonParameters,
    step: float = 1e-4,
    offdiag_mode: str = "zero",
) -> EvolvedSingleState:
    """Fixed-step RK4 integration of the decay master equation.

    Surviving block: d(rho_ss)/dt = -i[H, rho_ss] - {Gamma, rho_ss}/2 with
    H = diag(0, delta_m) (co-moving frame, absolute masses dropped) and
    Gamma = diag(gamma_s, gamma_l).  Final block: d(rho_ff)/dt =
    A rho_ss A^dagger with A feeding K_L into channel 0 and K_S into
    channel 1; off-diagonal production is dropped in "zero" mode.
    """
    if t < 0:
        raise DomainError("time must be nonnegative")
    if step <= 0:
        raise DomainError("step must be positive")
    if offdiag_mode not in ("zero", "formal-X"):
        raise DomainError(f"unknown offdiag_mode {offdiag_mode!r}")

    gs, gl, dm = params.gamma_s, params.gamma_l, params.delta_m
    h = np.diag([0.0, dm]).astype(complex)
    a = np.array([[0.0, math.sqrt(gl)], [math.sqrt(gs), 0.0]], dtype=complex)

    def deriv(y: np.ndarray) -> np.ndarray:
        ss = y[:4].reshape(2, 2)
        dss = -1j * (h @ ss - ss @ h) - 0.5 * (
            np.diag([gs, gl]) @ ss + ss @ np.diag([gs, gl])
        )
        dff = a @ ss @ a.conj().T
        if offdiag_mode == "zero":
            dff = np.diag(np.diag(dff))
        return np.concatenate([dss.ravel(), dff.ravel()])

    y = np.concatenate(
        [init.matrix().ravel(), np.zeros(4, dtype=complex)]
    )
    n_full, rem = divmod(t, step)
    steps = [step] * int(n_full)
    if rem > 1e-15 * max(t, 1.0):
        steps.append(rem)
    for hstep in steps:
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * hstep * k1)
        k3 = deriv(y + 0.5 * hstep * k2)
        k4 = deriv(y + hstep * k3)
        y = y + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    ss = y[:4].reshape(2, 2)
    ff = y[4:].reshape(2, 2)
    return EvolvedSingleState(
        ss=ss,
        ff_diag=(ff[0, 0].real, ff[1, 1].real),
        ff_offdiag=ff[1, 0],
        t=t,
    )


def prob_yes(state: EvolvedSingleState, p: np.ndarray | QuasiSpin) -> float:
    """Probability of a YES event: Tr(P rho_ss(t)).

    A NO event covers both "wrong quasi-spin" and "already decayed".
    """
    if isinstance(p, QuasiSpin):
        p = p.projector()
    p = validate_projector(p)
    val = float(np.trace(p @ state.ss).real)
    return min(max(val, 0.0), 1.0)


def expectation_single(state: EvolvedSingleState, p: np.ndarray | QuasiSpin) -> float:
    """E_P(t) = Prob(Y) - Prob(N) = 2 Tr(P rho_ss(t)) - 1."""
    return 2.0 * prob_yes(state, p) - 1.0


def purity_single(init: SingleKaonInitial, t, params: MesonParameters):
    """Purity Tr rho(t)^2 of the enlarged state, final off-diagonals zero.

    Closed form; accepts scalar or array ``t``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be nonnegative")
    gs, gl, g = params.gamma_s, params.gamma_l, params.gamma_mean
    es, el = np.exp(-gs * t), np.exp(-gl * t)
    val = (
        init.rho_ss_weight**2 * (1 - 2 * es + 2 * es**2)
        + init.rho_ll_weight**2 * (1 - 2 * el + 2 * el**2)
        + 2 * abs(init.rho_sl) ** 2 * np.exp(-2 * g * t)
    )
    return float(val) if val.ndim == 0 else val


def purity_minimum_time(
    init: SingleKaonInitial,
    params: MesonParameters,
    t_max: float | None = None,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Bracketed 1-D minimization of purity over time; returns (t_min, value)."""
    if t_max is None:
        t_max = 5.0 * math.log(2.0) / params.gamma_l
    res = minimize_scalar(
        lambda t: purity_single(init, t, params),
        bounds=(0.0, t_max),
        method="bounded",
        options={"xatol": tol},
    )
    return float(res.x), float(res.fun)


def global_purity_minimum(
    params: MesonParameters, n_starts: int = 32, seed: int = 0
) -> tuple[float, float, float]:
    """Minimize purity over initial (rho_SS, rho_SL real, t) jointly.

    Returns (rho_ss_weight, t, value).  The coherence phase never lowers
    the purity, so a real rho_SL suffices; the optimum sits at rho_SL = 0.
    """
    rng = np.random.default_rng(seed)

    def objective(x):
        w, rsl, logt = x
        if not (0.0 <= w <= 1.0):
            return 2.0
        cap = math.sqrt(max(w * (1 - w), 0.0))
        rsl = min(max(rsl, -cap), cap)
        init = SingleKaonInitial(w, 1.0 - w, rsl)
        return purity_single(init, math.exp(logt), params)

    best = (0.5, 0.0, 1.0)
    best_val = 1.0
    for _ in range(n_starts):
        x0 = [rng.uniform(0.1, 0.9), 0.0, rng.uniform(-2, 7)]
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxfev": 4000})
        if res.fun < best_val:
            best_val = float(res.fun)
            best = res.x
    return float(best[0]), float(math.exp(best[2])), best_val
