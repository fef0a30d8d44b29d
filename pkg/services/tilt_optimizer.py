"""
Vertical tilt optimization: analytic gradient of the performance function,
decayed-step gradient ascent with the partition held fixed, and the
alternating re-partition / ascent loop.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from models import TILT_MAX_DEG, TILT_MIN_DEG, OptimizerConfig
from services import channel
from services.network import NetworkModel
from services.partition import LinkModel, Partition, as_tilt_array, compute_partition, performance, random_partition

logger = logging.getLogger(__name__)

THRESHOLD = "threshold"
CAP = "cap"


def relative_improvement(phi_before: float, phi_after: float) -> float:
    """(after - before) / |before|; positive when the mean RSS went up"""
    if phi_before == 0.0:
        return phi_after - phi_before
    return (phi_after - phi_before) / abs(phi_before)


class FixedPartitionObjective:
    """
    Performance function restricted to one partition.
    value() is bit-identical to partition.performance() for the same partition.
    """

    def __init__(self, link: LinkModel, partition: Partition):
        self.link = link
        self.partition = partition
        self.assignment = partition.assignment
        self.weight = link.grid.weight
        self.theta_3db = link.pattern.theta_3db
        self.n_stations = link.n_stations
        self.elev, self.static = link.assigned_links(self.assignment)
        self.mass = np.bincount(self.assignment, weights=self.weight, minlength=self.n_stations)

    def rss(self, tilts: np.ndarray) -> np.ndarray:
        return self.static + channel.vertical_gain_db(self.theta_3db, tilts[self.assignment], self.elev)

    def value(self, tilts: np.ndarray) -> float:
        return float(np.sum(self.weight * self.rss(tilts)))

    def gradient(self, tilts: np.ndarray) -> np.ndarray:
        mismatch = self.elev - tilts[self.assignment]
        sums = np.bincount(self.assignment, weights=self.weight * mismatch, minlength=self.n_stations)
        return (24.0 / self.theta_3db**2) * sums

    def cell_tilt_term(self, station: int, tilt: float) -> float:
        """Tilt-dependent part of one cell's contribution (its static RSS is left out)"""
        members = self.assignment == station
        return float(np.sum(self.weight[members] * channel.vertical_gain_db(self.theta_3db, tilt, self.elev[members])))


def gradient(link: LinkModel, partition: Partition, tilts) -> np.ndarray:
    """d Phi / d theta_n for every station; zero for cells without mass"""
    tilts = as_tilt_array(tilts, link.n_stations)
    return FixedPartitionObjective(link, partition).gradient(tilts)


def centroid_tilts(link: LinkModel, partition: Partition, tilts) -> np.ndarray:
    """Mass-weighted mean elevation of each cell, the stationary point of the gradient"""
    tilts = as_tilt_array(tilts, link.n_stations)
    objective = FixedPartitionObjective(link, partition)
    sums = np.bincount(objective.assignment, weights=objective.weight * objective.elev, minlength=link.n_stations)
    result = tilts.copy()
    served = objective.mass > 0.0
    result[served] = sums[served] / objective.mass[served]
    return result


@dataclass
class InnerTrace:
    phi: List[float] = field(default_factory=list)
    grad_norm: List[float] = field(default_factory=list)
    eta: List[float] = field(default_factory=list)
    iterations: int = 0
    final_phi: float = 0.0
    final_eta: float = 0.0
    reason: str = ""


@dataclass
class OuterRecord:
    iteration: int
    phi_old: float  # before re-partitioning
    phi_partitioned: float  # after re-partitioning, before the ascent
    phi_new: float  # after the ascent
    inner_iterations: int
    inner_reason: str
    final_eta: float  # step size of the last inner iteration


@dataclass
class ConvergenceTrace:
    initial_phi: float = 0.0
    outer: List[OuterRecord] = field(default_factory=list)
    inner: List[InnerTrace] = field(default_factory=list)
    final_tilts: Optional[np.ndarray] = None
    final_phi: float = 0.0
    reason: str = ""

    @property
    def outer_phi(self) -> List[float]:
        return [record.phi_new for record in self.outer]

    @property
    def outer_iterations(self) -> int:
        return len(self.outer)

    @property
    def inner_iterations(self) -> int:
        return sum(trace.iterations for trace in self.inner)


def gradient_ascent_inner(objective: FixedPartitionObjective, tilts, config: OptimizerConfig, keep_history: bool = True):
    """
    Gradient ascent on the tilts with the partition fixed.
    eta_t = eta0 * kappa^t, the decay applied before each step, so the first step uses eta0 * kappa.
    Stops when the relative improvement of one step drops below eps1, or at the cap.
    """
    tilts = as_tilt_array(tilts, objective.n_stations).copy()
    trace = InnerTrace()
    phi_start = objective.value(tilts)
    for t in range(1, config.max_inner_iters + 1):
        grad = objective.gradient(tilts)
        eta = config.eta0 * config.kappa**t
        tilts = tilts + eta * grad
        phi_end = objective.value(tilts)
        trace.iterations = t
        trace.final_phi = phi_end
        trace.final_eta = eta
        if keep_history:
            trace.phi.append(phi_end)
            trace.grad_norm.append(float(np.linalg.norm(grad)))
            trace.eta.append(eta)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"   inner {t}: phi={phi_end:.12f} |grad|={np.linalg.norm(grad):.3e} eta={eta:.3e}")
        if relative_improvement(phi_start, phi_end) < config.eps1:
            trace.reason = THRESHOLD
            break
        phi_start = phi_end
    else:
        trace.reason = CAP
    return tilts, trace


@dataclass(eq=False)
class OptimizationResult:
    tilts: np.ndarray
    partition: Partition
    trace: ConvergenceTrace


def bs_vat(network: NetworkModel, config: Optional[OptimizerConfig] = None, keep_inner_history: bool = True) -> OptimizationResult:
    """
    Alternate optimal re-partitioning and gradient ascent on the tilts until the
    relative improvement of one round drops below eps2 (or the outer cap is hit).
    Starts from the scenario's initial tilts and a seeded uniformly random partition.
    """
    config = config or network.scenario.optimizer
    link = network.link
    tilts = network.initial_tilts()
    partition = random_partition(len(network.grid), network.n_stations, config.seed)

    trace = ConvergenceTrace()
    phi = performance(link, partition, tilts)
    trace.initial_phi = phi
    logger.info(f"🚀 Tilt optimization: {network.n_stations} stations, {len(network.grid)} points, initial phi={phi:.6f} dBm")

    for outer in range(1, config.max_outer_iters + 1):
        phi_old = phi
        partition, _ = compute_partition(link, tilts)
        objective = FixedPartitionObjective(link, partition)
        phi_partitioned = objective.value(tilts)
        tilts, inner = gradient_ascent_inner(objective, tilts, config, keep_history=keep_inner_history)
        phi = objective.value(tilts)

        trace.inner.append(inner)
        trace.outer.append(
            OuterRecord(
                iteration=outer,
                phi_old=phi_old,
                phi_partitioned=phi_partitioned,
                phi_new=phi,
                inner_iterations=inner.iterations,
                inner_reason=inner.reason,
                final_eta=inner.final_eta,
            )
        )
        gain = relative_improvement(phi_old, phi)
        logger.info(f"🔄 Outer {outer}: phi={phi:.9f} dBm, relative gain={gain:.3e}, inner steps={inner.iterations} ({inner.reason})")
        if gain < config.eps2:
            trace.reason = THRESHOLD
            break
    else:
        trace.reason = CAP
        logger.warning(f"⚠️ Outer loop stopped at the cap of {config.max_outer_iters} iterations")

    final_partition, _ = compute_partition(link, tilts)
    trace.final_tilts = tilts
    trace.final_phi = performance(link, final_partition, tilts)

    outside = np.flatnonzero((tilts < TILT_MIN_DEG) | (tilts > TILT_MAX_DEG))
    if outside.size:
        logger.warning(f"⚠️ Tilts left [-90, +90] for stations {(outside + 1).tolist()}")

    logger.info(f"✅ Optimization finished ({trace.reason}) after {trace.outer_iterations} outer iterations, phi={trace.final_phi:.6f} dBm")
    return OptimizationResult(tilts=tilts, partition=final_partition, trace=trace)


def finite_diff_check(link: LinkModel, tilts, step_deg: float) -> float:
    """
    Largest relative gap between the analytic gradient and central differences
    of the performance function, with the partition frozen at `tilts`.
    Only the vertical gain of the perturbed cell changes, so only that term is differenced.
    """
    if step_deg <= 0:
        raise ValueError(f"step_deg must be > 0, got {step_deg}")
    tilts = as_tilt_array(tilts, link.n_stations)
    partition, _ = compute_partition(link, tilts)
    objective = FixedPartitionObjective(link, partition)
    analytic = objective.gradient(tilts)

    worst = 0.0
    for n in range(link.n_stations):
        if abs(analytic[n]) <= 1e-12:
            continue
        upper = objective.cell_tilt_term(n, tilts[n] + step_deg)
        lower = objective.cell_tilt_term(n, tilts[n] - step_deg)
        numeric = (upper - lower) / (2.0 * step_deg)
        error = abs(analytic[n] - numeric) / max(abs(analytic[n]), abs(numeric))
        worst = max(worst, error)
    return worst
