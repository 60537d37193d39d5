#!/usr/bin/env python

"""
The relax, compensate and recover loop.

The model starts fully relaxed, is compensated, and then relaxed equivalences
are recovered a few at a time, largest weighted residual first, until the
budget runs out. Exact marginals of the final model are the approximation.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from rcrmln.exact.elimination import DEFAULT_MAX_FACTOR_VARS, elimination_width
from rcrmln.exact.marginals import MarginalTable
from rcrmln.ground.grounding import DEFAULT_MAX_GROUND_ATOMS
from rcrmln.mln.model import Mln
from rcrmln.rcr.compensation import CompensationParams, CompensationTrace, run_compensation
from rcrmln.rcr.compensation import weak_equivalence_residual
from rcrmln.rcr.relaxation import RelaxedGrounding, RelaxedModel, clone_all, recover, split_ground
from rcrmln.rcr.shattering import check_equiprobability, partition_model
from rcrmln.util.enum_util import BudgetEnum, HeuristicEnum, ModeEnum, get_enum
from rcrmln.util.errors import CapacityError

FRACTION_SLACK = 1e-12

@dataclass(frozen=True)
class RecoveryPolicy:
	budget: BudgetEnum = BudgetEnum.fraction
	limit: float = 0.0
	batch: int = 1
	heuristic: HeuristicEnum = HeuristicEnum.residual
	accumulated: bool = False  # score by the largest residual seen during compensation

	def __post_init__(self):
		if self.batch < 1:
			raise ValueError(f'batch must be positive, got {self.batch}')
		if self.budget == BudgetEnum.fraction and not 0.0 <= self.limit <= 1.0:
			raise ValueError(f'recovery fraction must be in [0, 1], got {self.limit}')
		if self.limit < 0:
			raise ValueError(f'recovery limit must not be negative, got {self.limit}')

@dataclass(frozen=True)
class AuditRecord:
	step: int
	recovered_eq: Optional[int]
	score: Optional[float]
	converged: bool
	iters: int
	ground_equivs_recovered_cum: int

	def to_json(self):
		return {
			'step': self.step,
			'recovered_eq': self.recovered_eq,
			'score': self.score,
			'converged': self.converged,
			'iters': self.iters,
			'ground_equivs_recovered_cum': self.ground_equivs_recovered_cum,
		}

@dataclass
class RcrResult:
	marginals: MarginalTable
	model: RelaxedModel
	audit: List[AuditRecord] = field(default_factory=list)
	traces: List[CompensationTrace] = field(default_factory=list)
	truncated: bool = False

	@property
	def converged(self) -> bool:
		return self.traces[-1].converged

	@property
	def iterations(self) -> int:
		return sum(t.iterations for t in self.traces)

	@property
	def recovered(self):
		return self.model.recovered()

	@property
	def fraction(self) -> float:
		return self.model.recovered_fraction()

def score(eq, marginals, eps=1e-12, peak=None) -> float:
	"""
	Recovery score of a relaxed equivalence: its clone count times the residual
	of its representative marginals @marginals = (Pr(original), Pr(clone))
	"""
	residual = weak_equivalence_residual(eq, *marginals, eps)
	if peak is not None:
		residual = max(residual, peak)
	return eq.n_prime * residual

def rank(rm:RelaxedModel, grounding:RelaxedGrounding, policy:RecoveryPolicy, trace=None, eps=1e-12):
	"""[(score, eq)] for every relaxed equivalence, best first, ties by id."""
	pairs = grounding.pair_marginals(rm)
	scored = []
	for eq in rm.relaxed():
		peak = trace.peak_residuals.get(eq.id) if (policy.accumulated and trace is not None) else None
		scored.append((score(eq, pairs[eq.id], eps, peak), eq))
	scored.sort(key=lambda item: (-item[0], item[1].id))
	return scored

def _select(rm, ranked, policy, num_recovered, max_atoms, max_vars):
	"""
	Cells to recover next. A fraction budget takes cells while the recovered
	fraction is below the limit, so it ends at the first cell that reaches it and
	overshoots by at most that cell.
	"""
	total = sum(eq.n_prime for eq in rm.equivalences)
	done = sum(eq.n_prime for eq in rm.recovered())
	chosen = []
	for value, eq in ranked[:policy.batch]:
		if policy.budget == BudgetEnum.fraction:
			if not total or done / total >= policy.limit - FRACTION_SLACK:
				break
			done += eq.n_prime
		elif policy.budget == BudgetEnum.count:
			if num_recovered + len(chosen) >= policy.limit:
				break
		else:
			candidate = rm
			for _, other in chosen + [(value, eq)]:
				candidate = recover(candidate, other.id)
			width = elimination_width(RelaxedGrounding(candidate, max_atoms, max_vars).factor_graph(candidate))
			if width > policy.limit:
				logging.debug(f'recovering {eq.id} would raise the elimination width to {width}')
				break
		chosen.append((value, eq))
	return chosen

def prepare(mln:Mln, mode) -> RelaxedModel:
	"""Fully relaxed model cut into the equivalences the given mode works on."""
	rm = clone_all(mln)
	if get_enum(ModeEnum, mode) == ModeEnum.lifted:
		return partition_model(rm)
	return split_ground(rm)

def rcr(mln:Mln, policy:RecoveryPolicy, params:CompensationParams, mode=ModeEnum.lifted,
		max_atoms=DEFAULT_MAX_GROUND_ATOMS, max_vars=DEFAULT_MAX_FACTOR_VARS,
		check_equiprobability_trials=0, seed=0) -> RcrResult:
	mode = get_enum(ModeEnum, mode)
	rm = prepare(mln, mode)
	grounding = RelaxedGrounding(rm, max_atoms, max_vars)
	rm, trace = run_compensation(rm, params, mode, grounding)
	result = RcrResult(grounding.marginals(rm), rm, traces=[trace])
	result.audit.append(AuditRecord(0, None, None, trace.converged, trace.iterations, 0))
	logging.debug(f'{len(rm.equivalences)} equivalence(s), initial compensation converged={trace.converged}')

	step, num_recovered = 0, 0
	while rm.relaxed():
		ranked = rank(rm, grounding, policy, trace, params.clamp)
		chosen = _select(rm, ranked, policy, num_recovered, max_atoms, max_vars)
		if not chosen:
			break
		step += 1
		try:
			candidate = rm
			for _, eq in chosen:
				candidate = recover(candidate, eq.id)
			candidate_grounding = RelaxedGrounding(candidate, max_atoms, max_vars)
			candidate, candidate_trace = run_compensation(candidate, params, mode, candidate_grounding)
			marginals = candidate_grounding.marginals(candidate)
		except CapacityError as e:
			logging.warning(f'recovery step {step} exceeds capacity, keeping the previous model: {str(e)}')
			result.truncated = True
			break

		rm, grounding, trace = candidate, candidate_grounding, candidate_trace
		num_recovered += len(chosen)
		cumulative = sum(eq.n_prime for eq in rm.recovered())
		for value, eq in chosen:
			result.audit.append(AuditRecord(step, eq.id, value, trace.converged, trace.iterations, cumulative))
		result.marginals, result.model = marginals, rm
		result.traces.append(trace)
		logging.debug(f'recovery step {step}: recovered {[eq.id for _, eq in chosen]}, fraction {rm.recovered_fraction():.3f}')

		if check_equiprobability_trials and rm.relaxed():
			for report in check_equiprobability(rm, rm.relaxed(), check_equiprobability_trials, seed, max_vars):
				if not report.passed:
					logging.warning(f'equivalence {report.eq_id} lost equiprobability after recovery step {step} '
									f'(spread {report.worst_spread:.3g})')
	return result
