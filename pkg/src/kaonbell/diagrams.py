"""Plot-ready tabular data: purity/concurrence trajectories and reference curves.

All emitters return plain records; CSV/JSON serialization and figure
rendering live in ``reporting`` and ``plotting``.  Trajectories carry the
purity normalized with d = 16 (bipartite kaons) and the concurrence of
the surviving block both raw (damping factor included) and renormalized
by the block trace, because the plotting convention differs between the
two and reference comparisons need one each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import BellConfiguration, s_value
from .bipartite import (
    PureTwoKaonState,
    evolve_bipartite,
    purity_bipartite,
)
from .entanglement import wootters_concurrence
from .exceptions import DomainError
from .params import MesonParameters

SCENARIOS = ("equal-times", "left-zero", "left-0.3")


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    purity_raw: float
    purity_norm: float
    concurrence_raw: float
    concurrence_renorm: float


def _scenario_times(scenario: str, t: float) -> tuple[float, float]:
    if scenario == "equal-times":
        return t, t
    if scenario == "left-zero":
        return 0.0, t
    if scenario == "left-0.3":
        return 0.3, t
    raise DomainError(f"unknown scenario {scenario!r}; choose from {SCENARIOS}")


def trajectory(
    psi0: PureTwoKaonState,
    scenario: str,
    params: MesonParameters,
    t_end: float = 100.0,
    step: float = 0.05,
) -> list[TrajectoryPoint]:
    """Sample purity and concurrence along a one-parameter time path."""
    if step <= 0:
        raise DomainError("step must be positive")
    if t_end < step:
        raise DomainError("t_end must be at least one step")
    n = int(math.floor(t_end / step)) + 1
    points = []
    for i in range(n):
        t = i * step
        t_l, t_r = _scenario_times(scenario, t)
        state = evolve_bipartite(psi0, t_l, t_r, params)
        pur = purity_bipartite(state)
        c_raw = wootters_concurrence(state.ssss).value
        tr = float(np.trace(state.ssss).real)
        c_ren = c_raw / tr if tr > 1e-300 else 0.0
        points.append(
            TrajectoryPoint(
                t=t,
                purity_raw=pur.raw,
                purity_norm=pur.normalized,
                concurrence_raw=c_raw,
                concurrence_renorm=c_ren,
            )
        )
    return points


def werner_curve(n_points: int = 200) -> list[tuple[float, float]]:
    """(purity_norm d=4, concurrence) along the two-qubit Werner family.

    rho_W = p |psi-><psi-| + (1-p) I/4 for p in [1/3, 1]:
    concurrence (3p-1)/2, raw purity (1+3p^2)/4, normalized p^2.
    """
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    out = []
    for p in np.linspace(1.0 / 3.0, 1.0, n_points):
        out.append((float(p * p), max(0.0, (3.0 * p - 1.0) / 2.0)))
    return out


def werner_density_matrix(p: float) -> np.ndarray:
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    return p * np.outer(psi, psi) + (1.0 - p) * np.eye(4) / 4.0


def mems_purity_norm(c: float) -> float:
    """Normalized (d=4) purity of the maximally entangled mixed state at concurrence c."""
    g = c / 2.0 if c >= 2.0 / 3.0 else 1.0 / 3.0
    raw = 2.0 * g * g + (1.0 - 2.0 * g) ** 2 + c * c / 2.0
    return (4.0 * raw - 1.0) / 3.0


def mems_density_matrix(c: float) -> np.ndarray:
    g = c / 2.0 if c >= 2.0 / 3.0 else 1.0 / 3.0
    m = np.zeros((4, 4))
    m[0, 0] = m[3, 3] = g
    m[1, 1] = 1.0 - 2.0 * g
    m[0, 3] = m[3, 0] = c / 2.0
    return m


def mems_curve(n_points: int = 200) -> list[tuple[float, float]]:
    """(purity_norm d=4, concurrence) along the MEMS boundary."""
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    return [
        (mems_purity_norm(float(c)), float(c))
        for c in np.linspace(0.0, 1.0, n_points)
    ]


def werner_purity_norm(c: float) -> float:
    """Normalized (d=4) purity of the Werner state at concurrence c (c >= 0)."""
    p = (2.0 * c + 1.0) / 3.0
    return p * p


def s_curve(
    psi0: PureTwoKaonState,
    times_opt: tuple[float, float, float, float],
    params: MesonParameters,
    u_max: float = 3.0,
    n_points: int = 301,
) -> list[tuple[float, float]]:
    """S along the linearly scaled path times(u) = u * times_opt, u in [0, u_max].

    The path parameter u is emitted as the first column; the paper does
    not pin a one-dimensional time path, so this scaling is a labeled
    convention of this tool.
    """
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    if all(t == 0 for t in times_opt):
        raise DomainError("times_opt must have at least one nonzero entry")
    out = []
    for u in np.linspace(0.0, u_max, n_points):
        cfg = BellConfiguration(*(float(u * t) for t in times_opt))
        out.append((float(u), s_value(psi0, cfg, params, path="closed")))
    return out
