"""CHSH S-functional over four detection times and four quasi-spins.

S = |E(t1, t2) - E(t1, t3)| + |E(t4, t2) + E(t4, t3)|; local realism
bounds S by 2, the algebraic bound is 4.  The closed path evaluates the
antikaon-antikaon closed form (cheap, used inside optimization loops);
the matrix path supports arbitrary quasi-spins and audits the optima.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, exp

from .bipartite import PureTwoKaonState, expectation_matrix
from .exceptions import DomainError
from .params import MesonParameters
from .single_kaon import QuasiSpin


@dataclass(frozen=True)
class BellConfiguration:
    """Four detection times [tau_S] plus the quasi-spin per setting.

    quasispins = (k_n, k_m, k_n', k_m'): k_n is Alice's first setting
    (times t1), k_n' her second (t4); k_m / k_m' are Bob's (t2 / t3).
    """

    t1: float
    t2: float
    t3: float
    t4: float
    quasispins: tuple[QuasiSpin, QuasiSpin, QuasiSpin, QuasiSpin] = field(
        default_factory=lambda: (
            QuasiSpin.k0bar(),
            QuasiSpin.k0bar(),
            QuasiSpin.k0bar(),
            QuasiSpin.k0bar(),
        )
    )

    def __post_init__(self) -> None:
        if min(self.t1, self.t2, self.t3, self.t4) < 0:
            raise DomainError("detection times must be nonnegative")

    @property
    def times(self) -> tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    def all_antikaon(self) -> bool:
        return all(
            abs(q.alpha) < 1e-12 and abs(abs(q.beta) - 1.0) < 1e-12
            for q in self.quasispins
        )


def s_closed_fast(
    r1: float, r2: float, r3: float, r4: float,
    p1: float, p2: float, p3: float, p4: float,
    t1: float, t2: float, t3: float, t4: float,
    gs: float, gl: float, dm: float,
) -> float:
    """Scalar antikaon-antikaon S value; plain floats for speed.

    This is the optimizer's inner loop, kept free of numpy overhead.
    """
    g = 0.5 * (gs + gl)

    def e(tl: float, tr: float) -> float:
        esl = exp(-gs * tl)
        esr = exp(-gs * tr)
        ell = exp(-gl * tl)
        elr = exp(-gl * tr)
        egl = exp(-g * tl)
        egr = exp(-g * tr)
        return (
            1.0
            + r1 * r1 * esl * esr
            + r2 * r2 * esl * elr
            + r3 * r3 * ell * esr
            + r4 * r4 * ell * elr
            - r1 * r1 * (esl + esr)
            - r2 * r2 * (esl + elr)
            - r3 * r3 * (ell + esr)
            - r4 * r4 * (ell + elr)
            + 2 * r1 * r2 * (1 - esl) * cos(dm * tr + p1 - p2) * egr
            + 2 * r1 * r3 * cos(dm * tl + p1 - p3) * egl * (1 - esr)
            + 2 * r2 * r4 * cos(dm * tl + p2 - p4) * egl * (1 - elr)
            + 2 * r3 * r4 * (1 - ell) * cos(dm * tr + p3 - p4) * egr
            + 2 * r1 * r4 * cos(dm * (tl + tr) + p1 - p4) * egl * egr
            + 2 * r2 * r3 * cos(dm * (tl - tr) + p2 - p3) * egl * egr
        )

    return abs(e(t1, t2) - e(t1, t3)) + abs(e(t4, t2) + e(t4, t3))


def s_value(
    psi0: PureTwoKaonState,
    cfg: BellConfiguration,
    params: MesonParameters,
    path: str = "closed",
) -> float:
    """S for a pure initial state and a Bell configuration."""
    if path == "closed":
        if not cfg.all_antikaon():
            raise DomainError(
                "the closed path supports only antikaon quasi-spins; "
                "use path='matrix'"
            )
        return s_closed_fast(
            *psi0.r, *psi0.phi, *cfg.times,
            params.gamma_s, params.gamma_l, params.delta_m,
        )
    if path == "matrix":
        return s_general(psi0, cfg, params)
    raise DomainError(f"unknown path {path!r}; choose 'closed' or 'matrix'")


def s_general(
    psi0: PureTwoKaonState, cfg: BellConfiguration, params: MesonParameters
) -> float:
    """S via the matrix path, arbitrary quasi-spin projectors."""
    kn, km, knp, kmp = cfg.quasispins
    e12 = expectation_matrix(psi0, kn, km, cfg.t1, cfg.t2, params)
    e13 = expectation_matrix(psi0, kn, kmp, cfg.t1, cfg.t3, params)
    e42 = expectation_matrix(psi0, knp, km, cfg.t4, cfg.t2, params)
    e43 = expectation_matrix(psi0, knp, kmp, cfg.t4, cfg.t3, params)
    return abs(e12 - e13) + abs(e42 + e43)
