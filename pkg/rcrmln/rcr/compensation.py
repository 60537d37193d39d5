#!/usr/bin/env python

"""
Fixed-point iteration of compensating weights.

For a relaxed equivalence with representative marginals p = Pr(original) and
q = Pr(clone), one update is

	w  <- (n'/n) * (logit(q) - w')
	w' <- logit(p) - (n/n') * w

followed by damping. For ground equivalences n = n' = 1. The term (n/n') * w is
the weight one ground equivalence contributes to its original atom, which is
how the weights are realized in the ground model.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import expit
from scipy.special import logit as _logit

from rcrmln.exact.elimination import DEFAULT_MAX_FACTOR_VARS
from rcrmln.ground.grounding import DEFAULT_MAX_GROUND_ATOMS
from rcrmln.rcr.relaxation import RelaxedGrounding, RelaxedModel
from rcrmln.rcr.shattering import compute_counts
from rcrmln.util.enum_util import ModeEnum, ScheduleEnum, get_enum
from rcrmln.util.errors import EquivalenceStateError, NotCountNormalizedError

DEFAULT_CLAMP = 1e-12

@dataclass(frozen=True)
class CompensationParams:
	damping: float = 0.5
	tol: float = 1e-8
	max_iters: int = 1000
	schedule: ScheduleEnum = ScheduleEnum.sequential
	clamp: float = DEFAULT_CLAMP

	def __post_init__(self):
		if not 0.0 < self.damping <= 1.0:
			raise ValueError(f'damping must be in (0, 1], got {self.damping}')
		if self.tol < 0:
			raise ValueError(f'tolerance must not be negative, got {self.tol}')
		if self.max_iters < 1:
			raise ValueError(f'max_iters must be positive, got {self.max_iters}')
		if not 0.0 < self.clamp < 0.5:
			raise ValueError(f'clamp must be in (0, 0.5), got {self.clamp}')

	@classmethod
	def from_config(cls, section, **overrides) -> 'CompensationParams':
		values = dict(section or {})
		values.update({k: v for k, v in overrides.items() if v is not None})
		return cls(damping=float(values.get('damping', 0.5)),
				tol=float(values.get('tol', 1e-8)),
				max_iters=int(values.get('max_iters', 1000)),
				schedule=get_enum(ScheduleEnum, values.get('schedule', 'seq')),
				clamp=float(values.get('clamp', DEFAULT_CLAMP)))

def logit(p, eps=DEFAULT_CLAMP) -> float:
	return float(_logit(np.clip(p, eps, 1.0 - eps)))

def clamp_log_odds(lo, eps=DEFAULT_CLAMP) -> float:
	"""@lo limited to the log-odds range of probabilities clamped to [eps, 1 - eps]."""
	bound = logit(1.0 - eps, eps)
	return float(np.clip(lo, -bound, bound))

def symmetric_kl(x, y, eps=DEFAULT_CLAMP) -> float:
	"""KL(x||y) + KL(y||x) between Bernoulli distributions."""
	x, y = float(np.clip(x, eps, 1.0 - eps)), float(np.clip(y, eps, 1.0 - eps))
	return (x - y) * (logit(x, eps) - logit(y, eps))

def kld3(p, q, r, eps=DEFAULT_CLAMP) -> float:
	return symmetric_kl(p, q, eps) + symmetric_kl(p, r, eps) + symmetric_kl(q, r, eps)

def weak_equivalence_residual(eq, p, q, eps=DEFAULT_CLAMP) -> float:
	return kld3(p, q, float(expit(eq.share() + eq.w_prime)), eps)

@dataclass(frozen=True)
class StepRecord:
	eq_id: int
	w: float
	w_prime: float
	delta: float
	residual: float

@dataclass
class CompensationTrace:
	steps: List[Tuple[StepRecord, ...]] = field(default_factory=list)
	max_deltas: List[float] = field(default_factory=list)
	peak_residuals: Dict[int, float] = field(default_factory=dict)
	converged: bool = False

	@property
	def iterations(self) -> int:
		return len(self.steps)

	def append(self, records, max_delta):
		self.steps.append(tuple(records))
		self.max_deltas.append(max_delta)
		for r in records:
			self.peak_residuals[r.eq_id] = max(self.peak_residuals.get(r.eq_id, 0.0), r.residual)

	def weights(self, iteration:int):
		"""{eq id: (w, w')} after @iteration (1-based)."""
		return {r.eq_id: (r.w, r.w_prime) for r in self.steps[iteration - 1]}

	def rows(self, offset=0):
		for i, records in enumerate(self.steps, start=offset + 1):
			for r in records:
				yield [i, r.eq_id, repr(r.w), repr(r.w_prime), repr(r.delta), repr(r.residual)]

def _update(eq, lp, lq, params:CompensationParams):
	# lp, lq: log-odds of the representative original and clone
	eps = params.clamp
	w_new = eq.n_prime / eq.n * (clamp_log_odds(lq, eps) - eq.w_prime)
	w_prime_new = clamp_log_odds(lp, eps) - eq.share()
	lam = params.damping
	w = (1.0 - lam) * eq.w + lam * w_new
	w_prime = (1.0 - lam) * eq.w_prime + lam * w_prime_new
	delta = max(abs(w - eq.w), abs(w_prime - eq.w_prime))
	residual = weak_equivalence_residual(eq, float(expit(lp)), float(expit(lq)), eps)
	record = StepRecord(eq.id, w, w_prime, delta, residual)
	return replace(eq, w=w, w_prime=w_prime), record

def _step(rm:RelaxedModel, grounding:RelaxedGrounding, params:CompensationParams):
	ids = [eq.id for eq in rm.relaxed()]
	records = []
	if params.schedule == ScheduleEnum.simultaneous:
		snapshot = grounding.pair_log_odds(rm, ids)
		updated = {}
		for eq_id in ids:
			updated[eq_id], record = _update(rm.equivalence(eq_id), *snapshot[eq_id], params)
			records.append(record)
		rm = rm.with_equivalences([updated.get(eq.id, eq) for eq in rm.equivalences])
	else:
		for eq_id in ids:
			lp, lq = grounding.pair_log_odds(rm, [eq_id])[eq_id]
			eq, record = _update(rm.equivalence(eq_id), lp, lq, params)
			rm = rm.update(eq)
			records.append(record)
	return rm, records, max((r.delta for r in records), default=0.0)

def verify_counts(rm:RelaxedModel):
	"""Every relaxed cell must be count-normalized with the counts it carries."""
	domains = rm.domains()
	for eq in rm.relaxed():
		n, n_prime = compute_counts(eq, domains)
		if (n, n_prime) != (eq.n, eq.n_prime):
			raise NotCountNormalizedError(f'equivalence {eq.id} carries counts ({eq.n}, {eq.n_prime}) '
										f'but has ({n}, {n_prime})')

def ground_step(rm:RelaxedModel, params:CompensationParams, grounding=None):
	"""One update of every relaxed ground equivalence; returns (model, records, max delta)."""
	for eq in rm.relaxed():
		if eq.n_prime != 1:
			raise EquivalenceStateError(f'equivalence {eq.id} is not ground ({eq.n_prime} groundings)')
	return _step(rm, grounding or RelaxedGrounding(rm), params)

def lifted_step(rm:RelaxedModel, params:CompensationParams, grounding=None, verify=True):
	"""One update of every relaxed cell from its representative grounding."""
	if verify:
		verify_counts(rm)
	return _step(rm, grounding or RelaxedGrounding(rm), params)

def run_compensation(rm:RelaxedModel, params:CompensationParams, mode=ModeEnum.lifted, grounding=None,
					max_atoms=DEFAULT_MAX_GROUND_ATOMS, max_vars=DEFAULT_MAX_FACTOR_VARS):
	mode = get_enum(ModeEnum, mode)
	if grounding is None:
		grounding = RelaxedGrounding(rm, max_atoms, max_vars)
	if mode == ModeEnum.lifted:
		verify_counts(rm)

	trace = CompensationTrace()
	for iteration in range(1, params.max_iters + 1):
		if mode == ModeEnum.lifted:
			rm, records, max_delta = lifted_step(rm, params, grounding, verify=False)
		else:
			rm, records, max_delta = ground_step(rm, params, grounding)
		trace.append(records, max_delta)
		logging.debug(f'compensation iteration {iteration}: max delta {max_delta:.3g}')
		if max_delta < params.tol:
			trace.converged = True
			break

	if not trace.converged:
		logging.warning(f'compensation did not converge in {params.max_iters} iteration(s), '
						f'last max delta {trace.max_deltas[-1]:.3g}')
	return rm, trace
