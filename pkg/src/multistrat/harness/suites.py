"""Experiment suites: evaluator agreement, polygonal convergence, transport
statistics and the oracle bundle.

Every path is generated from ``RngSeed(master_seed, stream_index)`` so any row
can be replayed alone. Work is distributed per path (or per block of paths);
results are reassembled in index order, so output does not depend on the
number of workers.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from ..errors import CheckFailure, ConfigError
from ..funcs import Exp, FunctionTuple, Poly, Sin, constant_ones, is_constant_one
from ..multi_index import MultiIndex, enumerate_gn, weight
from ..oracle import (
    SimplexQuadSpec,
    brute_force_J,
    gaussian_power_moments,
    hermite_ito_closed_form,
    midpoint_strat,
    transport_variance,
)
from ..ordinary import ordinary_multiple, ordinary_via_decomposition, relative_sup_difference, sup_error
from ..paths import RngSeed, gen_brownian, gen_transport, polygonal
from ..strat import GridFunction, StratMethod, eval_I_alpha, strat_integral, strat_levels
from .stats import FitError, fit_rate, sample_moments, z_score
from .tolerance import tol

log = logging.getLogger(__name__)

DECOMPOSITION_REL_TOL = 1e-6
MACHINE_FLOOR = 1e-12
REFINEMENT_FACTOR = 1.5

MIXED = (Poly((1.0, 0.5)), Sin(2.0, 0.3), Exp(0.5), Poly((0.5, -1.0, 1.0)))


def mixed_tuple(n: int, T: float = 1.0) -> FunctionTuple:
    """Poly/Sin/Exp test integrands, cycled to length ``n``."""
    return FunctionTuple(tuple(MIXED[i % len(MIXED)] for i in range(n)), T)


def parallel_map(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


# ---------------------------------------------------------------- agreement

PAIRS = (
    ("gnsum", "recursion"),
    ("gnsum", "expansion"),
    ("recursion", "expansion"),
    ("gnsum", "midpoint"),
)
THREE_WAY = PAIRS[:3]


def _all_methods(tup, path) -> dict:
    out = {m.value: strat_integral(tup, path, m).values for m in StratMethod}
    out["midpoint"] = midpoint_strat(tup, path).values
    return out


def pairwise_discrepancies(tup, path) -> dict:
    v = _all_methods(tup, path)
    return {f"{a}-{b}": float(np.max(np.abs(v[a] - v[b]))) for a, b in PAIRS}


def _agreement_task(cfg, coarse_factor: int, index: int):
    w = gen_brownian(cfg.N, cfg.T, RngSeed(cfg.master_seed, index))
    tup = cfg.integrands
    return pairwise_discrepancies(tup, w), pairwise_discrepancies(tup, w.coarsen(coarse_factor))


@dataclass
class AgreementReport:
    n: int
    functions: tuple
    N: int
    tol: float
    fine: list  # one dict of pair -> discrepancy per path
    coarse: list
    coarse_factor: int

    def worst(self, pair: Optional[str] = None) -> float:
        keys = [pair] if pair else [f"{a}-{b}" for a, b in PAIRS]
        return max(d[k] for d in self.fine for k in keys)

    def refinement_ratio(self, pairs=THREE_WAY) -> Optional[float]:
        """Median coarse / median fine of the per-path worst discrepancy.

        ``None`` when the fine median is at machine-precision level, where no
        discretization error is left to shrink.
        """
        keys = [f"{a}-{b}" for a, b in pairs]
        fine = float(np.median([max(d[k] for k in keys) for d in self.fine]))
        coarse = float(np.median([max(d[k] for k in keys) for d in self.coarse]))
        if fine <= MACHINE_FLOOR:
            return None
        return coarse / fine

    @property
    def refined(self) -> bool:
        r = self.refinement_ratio()
        return r is None or r >= REFINEMENT_FACTOR

    @property
    def passed(self) -> bool:
        return self.worst() <= self.tol and self.refined

    def lines(self) -> list[str]:
        out = [f"agreement n={self.n} N={self.N} tol={self.tol:.3e} passed={self.passed}"]
        for a, b in PAIRS:
            k = f"{a}-{b}"
            out.append(f"  {k:22s} max={self.worst(k):.3e}")
        r = self.refinement_ratio()
        out.append(f"  refinement ratio (N/{self.coarse_factor} vs N) = {'n/a (machine precision)' if r is None else f'{r:.2f}'}")
        return out


def run_agreement_suite(cfg, coarse_factor: int = 4) -> AgreementReport:
    if cfg.N % coarse_factor:
        raise ConfigError("N", f"must be divisible by {coarse_factor}")
    res = parallel_map(partial(_agreement_task, cfg, coarse_factor), range(cfg.num_paths), cfg.workers)
    return AgreementReport(
        n=cfg.n,
        functions=tuple(cfg.functions),
        N=cfg.N,
        tol=tol(cfg.N, cfg.T),
        fine=[r[0] for r in res],
        coarse=[r[1] for r in res],
        coarse_factor=coarse_factor,
    )


# ------------------------------------------------------ polygonal convergence


@dataclass(frozen=True)
class ConvergenceRow:
    m: int
    path_index: int
    sup_error: float
    terminal_error: float
    runtime_ms: int
    decomposition_rel: float
    master_seed: int
    stream_index: int


@dataclass
class ConvergenceReport:
    rows: list
    master_seed: int
    n: int
    summary: list = field(default_factory=list)  # (m, median, mean)
    fitted_rate: Optional[float] = None

    def lines(self) -> list[str]:
        out = [f"polygonal convergence n={self.n}"]
        for m, med, mean in self.summary:
            out.append(f"  m={m:<6d} median sup err={med:.4e} mean={mean:.4e}")
        out.append(f"  fitted rate = {self.fitted_rate}")
        return out


def _convergence_task(cfg, index: int) -> list:
    seed = RngSeed(cfg.master_seed, index)
    w = gen_brownian(cfg.N, cfg.T, seed)
    tup = cfg.integrands
    target = GridFunction(w.times, strat_levels(tup, w)[tup.n])
    rows = []
    for m in cfg.m_values:
        m = int(m)
        t0 = time.perf_counter()
        p = polygonal(w, m)
        levels = ordinary_multiple(tup, p, cfg.quad_delta, cfg.rule)
        elapsed = time.perf_counter() - t0
        dec = ordinary_via_decomposition(tup, p, levels[: tup.n], cfg.quad_delta, cfg.rule)
        rel = relative_sup_difference(levels[tup.n], dec)
        if not rel <= DECOMPOSITION_REL_TOL:
            raise CheckFailure(
                f"decomposition mismatch {rel:.3e} > {DECOMPOSITION_REL_TOL} at m={m}, "
                f"master_seed={cfg.master_seed}, stream_index={index}"
            )
        jn = levels[tup.n]
        rows.append(
            ConvergenceRow(
                m=m,
                path_index=index,
                sup_error=sup_error(jn, target),
                terminal_error=abs(jn.terminal - target.terminal),
                runtime_ms=int(round(elapsed * 1000)),
                decomposition_rel=rel,
                master_seed=cfg.master_seed,
                stream_index=index,
            )
        )
    return rows


def summarize(rows) -> tuple[list, Optional[float]]:
    by_m: dict = {}
    for r in rows:
        by_m.setdefault(r.m, []).append(r.sup_error)
    summary = [(m, float(np.median(v)), float(np.mean(v))) for m, v in sorted(by_m.items())]
    try:
        rate = fit_rate([(m, med) for m, med, _ in summary])
    except FitError as exc:
        log.warning("no rate fitted: %s", exc)
        rate = None
    return summary, rate


def run_polygonal_convergence(cfg) -> ConvergenceReport:
    if cfg.family != "polygonal":
        raise ConfigError("family", "polygonal convergence needs family='polygonal'")
    if not cfg.m_values:
        raise ConfigError("m_values", "empty")
    chunks = parallel_map(partial(_convergence_task, cfg), range(cfg.num_paths), cfg.workers)
    rows = sorted((r for c in chunks for r in c), key=lambda r: (r.m, r.path_index))
    summary, rate = summarize(rows)
    return ConvergenceReport(rows=rows, master_seed=cfg.master_seed, n=cfg.n, summary=summary, fitted_rate=rate)


# ------------------------------------------------------------- transport


@dataclass(frozen=True)
class TransportStat:
    m: float
    t: float
    statistic: str
    empirical: float
    target: float
    standard_error: float

    @property
    def z(self) -> float:
        return z_score(self.empirical, self.target, self.standard_error)


@dataclass
class TransportReport:
    stats: list
    n: int
    num_paths: int
    moments_checked: bool

    def distances(self) -> list:
        """``(m, |z|)`` of the mean of ``J_n(T)`` per m, ascending in m."""
        return sorted((s.m, abs(s.z)) for s in self.stats if s.statistic == "mean_J")

    @property
    def variance_ok(self) -> bool:
        return all(abs(s.z) <= 3.0 for s in self.stats if s.statistic == "var_W")

    @property
    def distance_decreasing(self) -> Optional[bool]:
        d = self.distances()
        if not self.moments_checked or len(d) < 2:
            return None
        return d[-1][1] < d[0][1]

    @property
    def passed(self) -> bool:
        return self.variance_ok and self.distance_decreasing is not False

    def lines(self) -> list[str]:
        out = [f"transport n={self.n} paths={self.num_paths} passed={self.passed}"]
        for s in self.stats:
            out.append(
                f"  m={s.m:<7g} t={s.t:<5g} {s.statistic:7s} emp={s.empirical:.5f} "
                f"target={s.target:.5f} se={s.standard_error:.2e} z={s.z:+.2f}"
            )
        return out


def _transport_task(cfg, item):
    m_index, start, stop = item
    m = cfg.m_values[m_index]
    tup = cfg.integrands
    out = np.empty((stop - start, 3))
    for row, p in enumerate(range(start, stop)):
        path = gen_transport(m, cfg.T, RngSeed(cfg.master_seed, m_index * cfg.num_paths + p))
        out[row, 0] = path(cfg.T / 2)
        out[row, 1] = path(cfg.T)
        out[row, 2] = ordinary_multiple(tup, path, cfg.quad_delta, cfg.rule)[tup.n].terminal
    return out


def run_transport_suite(cfg, block: int = 500) -> TransportReport:
    if cfg.family != "transport":
        raise ConfigError("family", "transport suite needs family='transport'")
    if not cfg.m_values:
        raise ConfigError("m_values", "empty")
    items = [(i, s, min(s + block, cfg.num_paths)) for i in range(len(cfg.m_values)) for s in range(0, cfg.num_paths, block)]
    parts = parallel_map(partial(_transport_task, cfg), items, cfg.workers)
    moments_checked = all(is_constant_one(f) for f in cfg.functions)
    if not moments_checked:
        log.warning("moment targets are known only for unit integrands; skipping the J_n check")
    stats = []
    for i, m in enumerate(cfg.m_values):
        data = np.vstack([p for (mi, _, _), p in zip(items, parts) if mi == i])
        for col, t in ((0, cfg.T / 2), (1, cfg.T)):
            mo = sample_moments(data[:, col])
            stats.append(TransportStat(m, t, "mean_W", mo.mean, 0.0, mo.se_mean))
            stats.append(TransportStat(m, t, "var_W", mo.var, transport_variance(m, t), mo.se_var))
        if moments_checked:
            mu, var = gaussian_power_moments(cfg.n, cfg.T)
            mo = sample_moments(data[:, 2])
            stats.append(TransportStat(m, cfg.T, "mean_J", mo.mean, mu, mo.se_mean))
            stats.append(TransportStat(m, cfg.T, "var_J", mo.var, var, mo.se_var))
    return TransportReport(stats=stats, n=cfg.n, num_paths=cfg.num_paths, moments_checked=moments_checked)


# ---------------------------------------------------------------- oracles


@dataclass(frozen=True)
class OracleCheck:
    name: str
    observed: float
    threshold: float
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: observed={self.observed:.3e} threshold={self.threshold:.3e}"


@dataclass
class OracleReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def oracle_paths(T: float = 1.0, master_seed: int = 7) -> list:
    """Fixed paths for the brute-force comparison: three transport paths at
    ``m = 8`` and one polygonal path at ``m = 16``."""
    paths = [(f"transport m=8 stream {i}", gen_transport(8.0, T, RngSeed(master_seed, i))) for i in range(3)]
    w = gen_brownian(2**14, T, RngSeed(master_seed, 3))
    paths.append(("polygonal m=16 stream 3", polygonal(w, 16)))
    return paths


def brute_force_checks(T: float = 1.0, M: int = 2**12, atol: float = 1e-4) -> list:
    checks = []
    for label, path in oracle_paths(T):
        for n in (2, 3):
            for name, tup in (("ones", constant_ones(n, T)), ("mixed", mixed_tuple(n, T))):
                ref = brute_force_J(tup, path, SimplexQuadSpec(n, M))
                val = ordinary_multiple(tup, path)[n].terminal
                d = abs(ref - val)
                checks.append(OracleCheck(f"brute force J n={n} {name} {label}", d, atol, d <= atol))
    return checks


def hermite_fd_checks(h: float = 1e-5) -> list:
    worst = 0.0
    for n in range(1, 7):
        for w in (-1.3, 0.2, 2.0):
            for t in (0.5, 1.0):
                fd = (hermite_ito_closed_form(n, w + h, t) - hermite_ito_closed_form(n, w - h, t)) / (2 * h)
                exact = hermite_ito_closed_form(n - 1, w, t)
                worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
    return [OracleCheck("hermite d/dw p_n = p_(n-1)", worst, 10 * h, worst <= 10 * h)]


def hermite_ito_checks(N: int = 2**14, T: float = 1.0, paths: int = 5, master_seed: int = 11) -> list:
    worst = 0.0
    for i in range(paths):
        w = gen_brownian(N, T, RngSeed(master_seed, i))
        for n in (1, 2, 3, 4):
            alpha = MultiIndex((1,) * n)
            got = eval_I_alpha(alpha, constant_ones(n, T), w).terminal
            worst = max(worst, abs(got - hermite_ito_closed_form(n, w.values[-1], T)))
    return [OracleCheck("iterated Ito of ones vs Hermite closed form", worst, tol(N, T), worst <= tol(N, T))]


def midpoint_refinement_checks(N: int = 2**14, T: float = 1.0, paths: int = 20, master_seed: int = 13, factor: int = 4) -> list:
    checks = []
    for n in (1, 2, 3):
        for name, tup in (("ones", constant_ones(n, T)), ("mixed", mixed_tuple(n, T))):
            fine, coarse = [], []
            for i in range(paths):
                w = gen_brownian(N, T, RngSeed(master_seed, i))
                for arr, path in ((fine, w), (coarse, w.coarsen(factor))):
                    d = midpoint_strat(tup, path).values - strat_integral(tup, path, StratMethod.RECURSION).values
                    arr.append(float(np.max(np.abs(d))))
            mf, mc = float(np.median(fine)), float(np.median(coarse))
            if mf <= MACHINE_FLOOR:
                checks.append(OracleCheck(f"midpoint vs recursion n={n} {name} (identical)", mf, MACHINE_FLOOR, True))
            else:
                ratio = mc / mf
                checks.append(OracleCheck(f"midpoint vs recursion refinement n={n} {name} ratio", ratio, REFINEMENT_FACTOR, ratio >= REFINEMENT_FACTOR))
    return checks


def transport_variance_checks(paths: int = 100_000, m: float = 1.0, t: float = 1.0, master_seed: int = 17) -> list:
    x = np.array([gen_transport(m, t, RngSeed(master_seed, i))(t) for i in range(paths)])
    mo = sample_moments(x)
    z = abs(z_score(mo.var, transport_variance(m, t), mo.se_var))
    lim = abs(transport_variance(1e6, 1.0) - 1.0)
    return [
        OracleCheck(f"transport variance Monte Carlo m={m:g} t={t:g} |z|", z, 3.0, z <= 3.0),
        OracleCheck("transport variance large-m limit", lim, 1e-6, lim <= 1e-6),
    ]


def run_oracle_suite(cfg=None, transport_paths: int = 100_000) -> OracleReport:
    T = cfg.T if cfg is not None else 1.0
    checks = []
    checks += brute_force_checks(T)
    checks += hermite_fd_checks()
    checks += hermite_ito_checks(T=T)
    checks += midpoint_refinement_checks(T=T)
    checks += transport_variance_checks(transport_paths)
    return OracleReport(checks)


def gn_table(n: int) -> list[str]:
    return [f"{str(a):<24s} length={a.length:<3d} weight={weight(a):g}" for a in enumerate_gn(n)]
