"""Multi-start derivative-free maximization of the CHSH S value.

Amplitudes are decoded from hyperspherical angles so the unit-norm
constraint holds exactly; times live in a box [0, t_max].  Each start
runs an independent bounded Nelder-Mead simplex from a low-discrepancy
(Sobol) point, so results are deterministic for a fixed seed and the
per-start bests are non-decreasing in the evaluation budget.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .bell import BellConfiguration, s_closed_fast, s_general
from .bipartite import PureTwoKaonState
from .exceptions import DomainError
from .params import MesonParameters


@dataclass(frozen=True)
class SearchSpace:
    """What the optimizer is allowed to vary.

    With ``fixed_state`` set only the four times are searched; otherwise
    three sphere angles encode the amplitudes and, if ``free_phases``,
    three phases (phi_4 is gauge-fixed to 0) join the times.
    """

    t_max: float = 50.0
    free_phases: bool = False
    fixed_state: PureTwoKaonState | None = None

    def __post_init__(self) -> None:
        if self.t_max <= 0:
            raise DomainError("t_max must be positive")

    @property
    def dimension(self) -> int:
        if self.fixed_state is not None:
            return 4
        return 10 if self.free_phases else 7

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo: list[float] = []
        hi: list[float] = []
        if self.fixed_state is None:
            lo += [0.0, 0.0, 0.0]
            hi += [math.pi, math.pi, 2 * math.pi]
            if self.free_phases:
                lo += [-math.pi] * 3
                hi += [math.pi] * 3
        lo += [0.0] * 4
        hi += [self.t_max] * 4
        return np.array(lo), np.array(hi)

    def decode(self, x: np.ndarray) -> tuple[PureTwoKaonState, tuple[float, ...]]:
        if self.fixed_state is not None:
            return self.fixed_state, tuple(float(t) for t in x)
        th1, th2, th3 = x[0], x[1], x[2]
        s1, s2 = math.sin(th1), math.sin(th2)
        r = (
            math.cos(th1),
            s1 * math.cos(th2),
            s1 * s2 * math.cos(th3),
            s1 * s2 * math.sin(th3),
        )
        if self.free_phases:
            phi = (float(x[3]), float(x[4]), float(x[5]), 0.0)
            times = x[6:]
        else:
            phi = (0.0, 0.0, 0.0, 0.0)
            times = x[3:]
        return PureTwoKaonState(r, phi), tuple(float(t) for t in times)


@dataclass(frozen=True)
class OptimizationResult:
    best_s: float
    best_state: PureTwoKaonState
    best_times: tuple[float, float, float, float]
    matrix_path_s: float
    n_starts: int
    n_evals: int
    seed: int
    history: tuple[float, ...] = field(default=())  # per-start best values

    def as_dict(self) -> dict:
        return {
            "best_s": self.best_s,
            "state": {"r": list(self.best_state.r), "phi": list(self.best_state.phi)},
            "times": list(self.best_times),
            "matrix_path_s": self.matrix_path_s,
            "n_starts": self.n_starts,
            "n_evals": self.n_evals,
            "seed": self.seed,
        }


def _nelder_mead(f, x0, lo, hi, maxfev, xatol=1e-10, fatol=1e-10):
    """Bounded Nelder-Mead minimizer with adaptive shrink; returns (x, fx, nfev)."""
    n = len(x0)
    # adaptive coefficients (scale with dimension)
    rho, chi = 1.0, 1.0 + 2.0 / n
    psi, sigma = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n

    def clip(x):
        return np.minimum(np.maximum(x, lo), hi)

    nfev = 0

    def ev(x):
        nonlocal nfev
        nfev += 1
        return f(x)

    sim = [clip(np.array(x0, dtype=float))]
    span = hi - lo
    for i in range(n):
        y = sim[0].copy()
        step = 0.1 * span[i]
        y[i] = y[i] + step if y[i] + step <= hi[i] else y[i] - step
        sim.append(clip(y))
    sim = np.array(sim)
    fsim = np.array([ev(x) for x in sim])

    while nfev < maxfev:
        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
        if (
            np.max(np.abs(sim[1:] - sim[0])) <= xatol
            and np.max(np.abs(fsim[1:] - fsim[0])) <= fatol
        ):
            break
        centroid = sim[:-1].mean(axis=0)
        xr = clip(centroid + rho * (centroid - sim[-1]))
        fr = ev(xr)
        if fr < fsim[0]:
            xe = clip(centroid + rho * chi * (centroid - sim[-1]))
            fe = ev(xe)
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        else:
            if fr < fsim[-1]:
                xc = clip(centroid + psi * rho * (centroid - sim[-1]))
                fc = ev(xc)
                shrink = fc > fr
            else:
                xc = clip(centroid - psi * (centroid - sim[-1]))
                fc = ev(xc)
                shrink = fc >= fsim[-1]
            if not shrink:
                sim[-1], fsim[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    sim[i] = clip(sim[0] + sigma * (sim[i] - sim[0]))
                    fsim[i] = ev(sim[i])
    best = int(np.argmin(fsim))
    return sim[best], fsim[best], nfev


def _sobol_points(dim: int, n: int, seed: int) -> np.ndarray:
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = max(1, math.ceil(math.log2(max(n, 1))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pts = sampler.random(2**m)
    return pts[:n]


def _structured_starts(space: SearchSpace, n_starts: int, seed: int) -> np.ndarray:
    """Low-discrepancy starts with time coordinates shaped for CHSH landscapes.

    S is flat (= 2) over most of the time box because everything has
    decayed at large times, and the known maxima sit on its boundary with
    paired settings (t1 = t2, t3 = t4, some exactly zero).  So the four
    trailing (time) coordinates are biased cubically toward zero and a
    quarter of the starts each get the paired patterns (a, a, 0, 0) and
    (0, 0, a, a); the rest pin a random subset of times to the boundary.
    """
    lo, hi = space.bounds()
    u = _sobol_points(space.dimension, n_starts, seed)
    rng = np.random.default_rng(seed)
    t_max = space.t_max
    starts = lo + u * (hi - lo)
    for i in range(n_starts):
        a = t_max * u[i, -4] ** 3
        kind = i % 4
        if kind == 0:
            starts[i, -4:] = (a, a, 0.0, 0.0)
        elif kind == 1:
            starts[i, -4:] = (0.0, 0.0, a, a)
        else:
            starts[i, -4:] = t_max * u[i, -4:] ** 3
            mask = rng.uniform(size=4) < 0.5
            starts[i, -4:][mask] = 0.0
    return starts


def _run_start(
    space: SearchSpace,
    params: MesonParameters,
    x0: np.ndarray,
    maxfev: int,
) -> tuple[np.ndarray, float, int]:
    """One local search; module-level so process pools can pickle it."""
    gs, gl, dm = params.gamma_s, params.gamma_l, params.delta_m
    decode = space.decode

    def objective(x: np.ndarray) -> float:
        psi, times = decode(x)
        return -s_closed_fast(*psi.r, *psi.phi, *times, gs, gl, dm)

    lo, hi = space.bounds()
    return _nelder_mead(objective, x0, lo, hi, maxfev=maxfev)


def maximize_s(
    space: SearchSpace,
    params: MesonParameters,
    budget: int = 200_000,
    seed: int = 0,
    n_starts: int = 200,
    target: float | None = None,
    n_jobs: int = 1,
) -> OptimizationResult:
    """Multi-start maximization of the antikaon-antikaon S value.

    ``budget`` caps the total number of objective evaluations across all
    starts; ``target``, if given, stops as soon as some start reaches it
    (the budget remains an upper bound either way).  With ``n_jobs`` > 1
    the starts run in a process pool; the merged best point does not
    depend on the worker count.
    """
    if budget < 1:
        raise DomainError("budget must be at least 1")
    if n_starts < 1:
        raise DomainError("n_starts must be at least 1")
    lo, hi = space.bounds()
    starts = _structured_starts(space, n_starts, seed)
    per_start = max(budget // n_starts, space.dimension + 2)

    best_x: np.ndarray | None = None
    best_f = math.inf
    n_evals = 0
    history: list[float] = []

    def consider(x: np.ndarray, fx: float) -> None:
        nonlocal best_x, best_f
        if fx < best_f or (
            fx == best_f and best_x is not None and tuple(x) < tuple(best_x)
        ):
            best_f, best_x = fx, x

    if n_jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = pool.map(
                _run_start,
                [space] * len(starts),
                [params] * len(starts),
                starts,
                [per_start] * len(starts),
                chunksize=max(1, len(starts) // (4 * n_jobs)),
            )
            for x, fx, nfev in results:
                n_evals += nfev
                history.append(-fx)
                consider(x, fx)
    else:
        for x0 in starts:
            remaining = budget - n_evals
            if remaining < space.dimension + 2:
                break
            x, fx, nfev = _run_start(
                space, params, x0, min(per_start, remaining)
            )
            n_evals += nfev
            history.append(-fx)
            consider(x, fx)
            if target is not None and -best_f >= target:
                break

    assert best_x is not None
    psi, times = space.decode(best_x)
    cfg = BellConfiguration(*times)
    audited = s_general(psi, cfg, params)
    return OptimizationResult(
        best_s=-best_f,
        best_state=psi,
        best_times=tuple(times),
        matrix_path_s=audited,
        n_starts=len(history),
        n_evals=n_evals,
        seed=seed,
        history=tuple(history),
    )


def maximize_s_fixed_state(
    psi0: PureTwoKaonState,
    params: MesonParameters,
    budget: int = 200_000,
    seed: int = 0,
    n_starts: int = 200,
    t_max: float = 50.0,
    target: float | None = None,
) -> OptimizationResult:
    """Maximize S over the four detection times only."""
    space = SearchSpace(t_max=t_max, fixed_state=psi0)
    return maximize_s(
        space, params, budget=budget, seed=seed, n_starts=n_starts, target=target
    )


def random_time_scan(
    psi0: PureTwoKaonState,
    params: MesonParameters,
    n_samples: int = 100_000,
    t_max: float = 50.0,
    seed: int = 0,
    n_refine: int = 20,
    refine_budget: int = 4_000,
) -> float:
    """Best S over random time quadruples plus local refinement of the top hits.

    Used for no-violation checks: vectorized sampling covers the box,
    Nelder-Mead polishes the most promising samples.
    """
    from .bipartite import expectation_closed_form

    rng = np.random.default_rng(seed)
    ts = rng.uniform(0.0, t_max, size=(4, n_samples))
    e12 = expectation_closed_form(psi0, ts[0], ts[1], params)
    e13 = expectation_closed_form(psi0, ts[0], ts[2], params)
    e42 = expectation_closed_form(psi0, ts[3], ts[1], params)
    e43 = expectation_closed_form(psi0, ts[3], ts[2], params)
    s = np.abs(e12 - e13) + np.abs(e42 + e43)
    top = np.argsort(s)[-n_refine:]

    gs, gl, dm = params.gamma_s, params.gamma_l, params.delta_m

    def objective(x):
        return -s_closed_fast(*psi0.r, *psi0.phi, *x, gs, gl, dm)

    lo = np.zeros(4)
    hi = np.full(4, t_max)
    best = float(s.max())
    for idx in top:
        _, fx, _ = _nelder_mead(
            objective, ts[:, idx], lo, hi, maxfev=refine_budget
        )
        best = max(best, -fx)
    return best
