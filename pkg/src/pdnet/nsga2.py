"""From-scratch NSGA-II engine for the production-distribution network.

The genotype is a real vector in [0,1]^L laid out as
[raw-flow block | plant-DC block | DC-retailer allocation block].  Decoding
maps the first two blocks linearly onto capacity-derived boxes and turns the
last block into per-retailer allocation weights, so every decoded plan meets
demand exactly by construction.  The engine minimizes the pair
(total cost, total constraint violation) as a genuine bi-objective tradeoff
and reports the cheapest zero-violation plan ever seen.  Ranking the two
objectives with plain Pareto domination keeps a spread of near-feasible
individuals alive; collapsing feasible comparisons to cost alone starves the
population of diversity under the low mutation rate and stalls far from the
optimum, so that mode is available in the sort but not used by the loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .network import (
    CostBreakdown,
    DimensionMismatchError,
    FlowPlan,
    NetworkInstance,
    batch_evaluate,
    evaluate_cost,
)


@dataclass(frozen=True)
class SolverConfig:
    population_size: int = 50
    crossover_prob: float = 0.6
    mutation_prob: float = 0.001
    max_generations: int = 200
    stall_generations: int = 50
    stall_tolerance: float = 1e-6
    seed: int = 0
    sbx_eta: float = 15.0
    pm_eta: float = 20.0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 4")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")


@dataclass
class Individual:
    genes: np.ndarray
    plan: FlowPlan
    cost: float
    violation: float
    rank: Optional[int] = None
    crowding: Optional[float] = None

    @property
    def objectives(self):
        return (self.cost, self.violation)


@dataclass
class Population:
    """Generation state as stacked arrays: genes (N,L), cost (N,), violation (N,)."""

    genes: np.ndarray
    cost: np.ndarray
    violation: np.ndarray

    def __len__(self):
        return self.genes.shape[0]


@dataclass
class GenerationRecord:
    generation: int
    best_feasible_cost: Optional[float]
    mean_cost: float
    min_violation: float
    feasible_count: int


@dataclass
class SolveResult:
    best_feasible: Optional[tuple]  # (FlowPlan, CostBreakdown)
    final_front: list  # Individuals with rank 0
    trace: list  # GenerationRecord per generation
    generations_run: int
    terminated_by: str  # "max-generations" | "stall"


# ---------------------------------------------------------------------------
# Genotype <-> phenotype
# ---------------------------------------------------------------------------

def decode_batch(genes: np.ndarray, instance: NetworkInstance):
    """Decode gene rows (n, L) into stacked flows r:(n,S,K), p:(n,K,J), t:(n,J,I).

    Raw gene g_sk spans [0, C_s/K]; plant-DC gene g_kj spans [0, D_k/(u*J)]
    so a plant's total production can reach D_k/u.  The last block holds J
    allocation weights per retailer; shipments are the demand split in
    proportion to the weights (uniform split when all weights are zero).
    """
    s, k, j, i = instance.counts
    n = genes.shape[0]
    if genes.shape[1] != instance.num_genes:
        raise DimensionMismatchError(
            f"chromosome length {genes.shape[1]}, expected {instance.num_genes}"
        )
    raw = genes[:, : s * k].reshape(n, s, k) * (instance.supplier_capacity[None, :, None] / k)
    p_upper = instance.plant_capacity / (instance.utilization * j)
    p = genes[:, s * k : s * k + k * j].reshape(n, k, j) * p_upper[None, :, None]
    w = genes[:, s * k + k * j :].reshape(n, i, j)
    wsum = w.sum(axis=2, keepdims=True)
    frac = np.where(wsum > 0, w / np.where(wsum > 0, wsum, 1.0), 1.0 / j)
    t = (frac * instance.demand[None, :, None]).transpose(0, 2, 1)
    return raw, p, t


def decode(chromosome: np.ndarray, instance: NetworkInstance) -> FlowPlan:
    chromosome = np.asarray(chromosome, dtype=np.float64)
    r, p, t = decode_batch(chromosome[None, :], instance)
    return FlowPlan(r[0], p[0], t[0])


def evaluate(individual: Individual, instance: NetworkInstance):
    """Objectives (cost total, total violation) of a decoded individual."""
    plan = individual.plan
    cost, violation = batch_evaluate(
        instance,
        plan.raw_flow[None],
        plan.plant_dc_flow[None],
        plan.dc_retailer_flow[None],
    )
    individual.cost = float(cost[0])
    individual.violation = float(violation[0])
    return individual.objectives


def init_population(instance: NetworkInstance, config: SolverConfig, rng) -> Population:
    """Uniform random genes on [0,1], decoded and evaluated."""
    genes = rng.random((config.population_size, instance.num_genes))
    cost, violation = batch_evaluate(instance, *decode_batch(genes, instance))
    return Population(genes=genes, cost=cost, violation=violation)


# ---------------------------------------------------------------------------
# Variation operators
# ---------------------------------------------------------------------------

def sbx_pair(parent_a: np.ndarray, parent_b: np.ndarray, eta: float, rng):
    """Simulated binary crossover, gene-wise, children clamped to [0,1]."""
    u = rng.random(parent_a.size)
    exp = 1.0 / (eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exp, (1.0 / (2.0 * (1.0 - u))) ** exp)
    child_a = 0.5 * ((1.0 + beta) * parent_a + (1.0 - beta) * parent_b)
    child_b = 0.5 * ((1.0 - beta) * parent_a + (1.0 + beta) * parent_b)
    return np.clip(child_a, 0.0, 1.0), np.clip(child_b, 0.0, 1.0)


def crossover(parent_a: np.ndarray, parent_b: np.ndarray, config: SolverConfig, rng):
    """With probability crossover_prob apply SBX, otherwise copy the parents."""
    if parent_a.size != parent_b.size:
        raise DimensionMismatchError("parents have different gene lengths")
    if rng.random() < config.crossover_prob:
        return sbx_pair(parent_a, parent_b, config.sbx_eta, rng)
    return parent_a.copy(), parent_b.copy()


def mutate(chromosome: np.ndarray, config: SolverConfig, rng) -> np.ndarray:
    """Polynomial mutation applied per gene with probability mutation_prob."""
    n = chromosome.size
    hit = rng.random(n) < config.mutation_prob
    u = rng.random(n)
    exp = 1.0 / (config.pm_eta + 1.0)
    delta = np.where(u < 0.5, (2.0 * u) ** exp - 1.0, 1.0 - (2.0 * (1.0 - u)) ** exp)
    return np.where(hit, np.clip(chromosome + delta, 0.0, 1.0), chromosome)


def _make_offspring(parent_genes: np.ndarray, config: SolverConfig, rng) -> np.ndarray:
    """Crossover + mutation over the whole mating pool in one batch.

    Pairs are consecutive rows.  Matches the scalar operators: SBX fires per
    pair with probability crossover_prob, polynomial mutation per gene with
    probability mutation_prob, genes stay clamped to [0,1].
    """
    n, length = parent_genes.shape
    a = parent_genes[0::2]
    b = parent_genes[1::2]
    fire = rng.random(n // 2) < config.crossover_prob
    u = rng.random((n // 2, length))
    exp = 1.0 / (config.sbx_eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exp, (1.0 / (2.0 * (1.0 - u))) ** exp)
    child_a = np.clip(0.5 * ((1.0 + beta) * a + (1.0 - beta) * b), 0.0, 1.0)
    child_b = np.clip(0.5 * ((1.0 - beta) * a + (1.0 + beta) * b), 0.0, 1.0)
    children = np.empty_like(parent_genes)
    children[0::2] = np.where(fire[:, None], child_a, a)
    children[1::2] = np.where(fire[:, None], child_b, b)
    hit = rng.random((n, length)) < config.mutation_prob
    um = rng.random((n, length))
    expm = 1.0 / (config.pm_eta + 1.0)
    delta = np.where(um < 0.5, (2.0 * um) ** expm - 1.0, 1.0 - (2.0 * (1.0 - um)) ** expm)
    return np.where(hit, np.clip(children + delta, 0.0, 1.0), children)


# ---------------------------------------------------------------------------
# Ranking machinery
# ---------------------------------------------------------------------------

def _domination_matrix(objectives: np.ndarray, constrained: bool) -> np.ndarray:
    """D[a, b] = True iff a dominates b."""
    le = (objectives[:, None, :] <= objectives[None, :, :]).all(axis=2)
    lt = (objectives[:, None, :] < objectives[None, :, :]).any(axis=2)
    pareto = le & lt
    if not constrained:
        return pareto
    viol = objectives[:, 1]
    feas = viol == 0.0
    fa = feas[:, None]
    fb = feas[None, :]
    by_violation = viol[:, None] < viol[None, :]
    both_infeasible = ~fa & ~fb
    return (fa & ~fb) | (both_infeasible & by_violation) | (fa & fb & pareto)


def fast_non_dominated_sort(objective_pairs, constrained: bool = False):
    """Partition points into fronts: front 0 non-dominated, front n dominated only by earlier fronts.

    Default domination is plain Pareto minimization.  With ``constrained=True``
    the second objective is treated as a violation: zero-violation points
    dominate positive-violation ones and two infeasible points compare by
    violation alone.
    """
    objectives = np.asarray(objective_pairs, dtype=np.float64)
    if objectives.ndim != 2 or objectives.shape[0] < 1:
        raise ValueError("need at least one objective pair")
    if not np.all(np.isfinite(objectives)):
        raise ValueError("objectives must be finite")
    dom = _domination_matrix(objectives, constrained)
    dom_count = dom.sum(axis=0).astype(np.int64)
    fronts = []
    current = np.flatnonzero(dom_count == 0)
    while current.size:
        fronts.append(current.tolist())
        dom_count = dom_count - dom[current].sum(axis=0)
        dom_count[current] = -1
        current = np.flatnonzero(dom_count == 0)
    return fronts


def crowding_distance(front_objectives) -> np.ndarray:
    """Deb-style crowding: boundary points +inf, interiors sum normalized neighbor gaps."""
    objs = np.asarray(front_objectives, dtype=np.float64)
    n = objs.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(objs.shape[1]):
        col = objs[:, m]
        order = np.argsort(col, kind="stable")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = col[order[-1]] - col[order[0]]
        if span > 0:
            gaps = (col[order[2:]] - col[order[:-2]]) / span
            interior = order[1:-1]
            finite = np.isfinite(dist[interior])
            dist[interior] = np.where(finite, dist[interior] + gaps, dist[interior])
    return dist


def _rank_and_crowd(cost: np.ndarray, violation: np.ndarray):
    """(ranks, crowding, survivor order) under Pareto domination on (cost, violation).

    The survivor order lists indices by (rank asc, crowding desc, index asc);
    truncating it at N implements elitist survival.
    """
    objs = np.stack([cost, violation], axis=1)
    fronts = fast_non_dominated_sort(objs)
    n = objs.shape[0]
    ranks = np.empty(n, dtype=np.int64)
    crowd = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    pos = 0
    for r_idx, front in enumerate(fronts):
        front = np.asarray(front)
        ranks[front] = r_idx
        d = crowding_distance(objs[front])
        crowd[front] = d
        # sort by crowding desc, then index asc, for deterministic truncation
        inner = np.lexsort((front, -d))
        order[pos : pos + front.size] = front[inner]
        pos += front.size
    return ranks, crowd, order


def select_next_generation(parents: Population, offspring: Population, config: SolverConfig) -> Population:
    """Elitist survival from the parent+offspring union by (rank, crowding)."""
    if len(parents) != config.population_size or len(offspring) != config.population_size:
        raise ValueError("parents and offspring must each have population_size members")
    genes = np.vstack([parents.genes, offspring.genes])
    cost = np.concatenate([parents.cost, offspring.cost])
    violation = np.concatenate([parents.violation, offspring.violation])
    _, _, order = _rank_and_crowd(cost, violation)
    keep = order[: config.population_size]
    return Population(genes=genes[keep], cost=cost[keep], violation=violation[keep])


def _tournament_indices(ranks, crowd, rng, n_select):
    """Binary tournaments on (rank asc, crowding desc), ties to the lower index."""
    cand = rng.integers(0, ranks.size, size=(n_select, 2))
    a, b = cand[:, 0], cand[:, 1]
    a_wins = (
        (ranks[a] < ranks[b])
        | ((ranks[a] == ranks[b]) & (crowd[a] > crowd[b]))
        | ((ranks[a] == ranks[b]) & (crowd[a] == crowd[b]) & (a <= b))
    )
    return np.where(a_wins, a, b)


# ---------------------------------------------------------------------------
# Main loop
# ---------------------------------------------------------------------------

def solve(instance: NetworkInstance, config: SolverConfig = SolverConfig()) -> SolveResult:
    """Run NSGA-II until max_generations or stall; deterministic per seed."""
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    pop = init_population(instance, config, rng)

    best_cost = np.inf
    best_flows = None
    best_history = []
    trace = []
    terminated_by = "max-generations"

    for gen in range(1, config.max_generations + 1):
        ranks, crowd, _ = _rank_and_crowd(pop.cost, pop.violation)
        mating = _tournament_indices(ranks, crowd, rng, n)

        child_genes = _make_offspring(pop.genes[mating], config, rng)

        c_r, c_p, c_t = decode_batch(child_genes, instance)
        c_cost, c_viol = batch_evaluate(instance, c_r, c_p, c_t)
        offspring = Population(genes=child_genes, cost=c_cost, violation=c_viol)

        # track the cheapest feasible plan ever seen (offspring side; parents
        # were scanned in earlier generations or below at gen 1)
        for cand in ([pop] if gen == 1 else []) + [offspring]:
            feas = np.flatnonzero(cand.violation == 0.0)
            if feas.size:
                j = feas[np.argmin(cand.cost[feas])]
                if cand.cost[j] < best_cost:
                    best_cost = float(cand.cost[j])
                    best_flows = decode(cand.genes[j], instance)

        pop = select_next_generation(pop, offspring, config)

        feasible_count = int(np.count_nonzero(pop.violation == 0.0))
        trace.append(
            GenerationRecord(
                generation=gen,
                best_feasible_cost=None if not np.isfinite(best_cost) else best_cost,
                mean_cost=float(pop.cost.mean()),
                min_violation=float(pop.violation.min()),
                feasible_count=feasible_count,
            )
        )
        best_history.append(best_cost)

        w = config.stall_generations
        if gen > w and np.isfinite(best_history[-1 - w]):
            old = best_history[-1 - w]
            if (old - best_cost) < config.stall_tolerance * max(1.0, abs(old)):
                terminated_by = "stall"
                break

    ranks, crowd, _ = _rank_and_crowd(pop.cost, pop.violation)
    front0 = np.flatnonzero(ranks == 0)
    final_front = []
    for idx in front0:
        final_front.append(
            Individual(
                genes=pop.genes[idx].copy(),
                plan=decode(pop.genes[idx], instance),
                cost=float(pop.cost[idx]),
                violation=float(pop.violation[idx]),
                rank=0,
                crowding=float(crowd[idx]),
            )
        )

    best_feasible = None
    if best_flows is not None:
        best_feasible = (best_flows, evaluate_cost(instance, best_flows))

    return SolveResult(
        best_feasible=best_feasible,
        final_front=final_front,
        trace=trace,
        generations_run=len(trace),
        terminated_by=terminated_by,
    )
