#!/usr/bin/env python

"""
Cloning, first-order equivalences and the relax/recover transitions.

Every atom occurrence of every formula is renamed to a clone whose predicate
carries the formula id, the occurrence letter and the formula's variables.
The link between an original atom and its clone is an Equivalence: relaxed
ones contribute two weighted unit atoms, recovered ones a hard ground
equivalence per solution of their constraint.
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from scipy.special import expit

from rcrmln.exact.elimination import DEFAULT_MAX_FACTOR_VARS, query, ve_marginals
from rcrmln.ground.factor_graph import Factor, FactorGraph
from rcrmln.ground.grounding import DEFAULT_MAX_GROUND_ATOMS, GroundModelBuilder, Provenance
from rcrmln.ground.grounding import ground_atom, ground_evidence, ground_formulas, occurrence_labels
from rcrmln.mln.constraint import Comparison, Constraint, solutions
from rcrmln.mln.formula import AtomNode, Iff
from rcrmln.mln.model import Atom, CloneTag, Constant, Mln, PredicateId
from rcrmln.util.enum_util import HARD, StatusEnum
from rcrmln.util.errors import EquivalenceStateError

@dataclass(frozen=True)
class Equivalence:
	id: int
	constraint: Constraint
	original: Atom
	clone: Atom
	status: StatusEnum = StatusEnum.relaxed
	w: float = 0.0
	w_prime: float = 0.0
	n: int = 1
	n_prime: int = 1
	origin: Optional[int] = None  # whole equivalence this one was cut from

	def is_relaxed(self) -> bool:
		return self.status == StatusEnum.relaxed

	def variables(self):
		# clone variables cover the original's
		return self.clone.variables()

	def share(self) -> float:
		"""Part of the original-side weight carried by one ground equivalence."""
		return self.n / self.n_prime * self.w

	def groundings(self, domains):
		"""[(substitution, original ground atom, clone ground atom)] in solution order."""
		return [(subst, ground_atom(self.original, subst), ground_atom(self.clone, subst))
				for subst in solutions(self.constraint, self.variables(), domains)]

	def to_json(self):
		return {
			'id': self.id,
			'origin': self.origin,
			'constraint': str(self.constraint),
			'original': str(self.original),
			'clone': str(self.clone),
			'status': str(self.status),
			'w': self.w,
			'w_prime': self.w_prime,
			'n': self.n,
			'n_prime': self.n_prime,
		}

	def __str__(self):
		prefix = f'{self.constraint}, ' if not self.constraint.is_trivial() else ''
		return f'{prefix}{self.original} <=> {self.clone}'

def count_groundings(eq:Equivalence, domains) -> Counter:
	"""Number of ground equivalences each original grounding takes part in."""
	per_original = Counter()
	for _, original, _ in eq.groundings(domains):
		per_original[original] += 1
	return per_original

@dataclass(frozen=True)
class RelaxedModel:
	source: Mln
	base: Mln
	equivalences: Tuple[Equivalence, ...] = ()

	def domains(self):
		return self.base.domain_map()

	def equivalence(self, eq_id:int) -> Equivalence:
		for eq in self.equivalences:
			if eq.id == eq_id:
				return eq
		raise EquivalenceStateError(f'unknown equivalence {eq_id}')

	def relaxed(self):
		return [eq for eq in self.equivalences if eq.is_relaxed()]

	def recovered(self):
		return [eq for eq in self.equivalences if not eq.is_relaxed()]

	def with_equivalences(self, equivalences, renumber=False) -> 'RelaxedModel':
		if renumber:
			equivalences = [replace(eq, id=i) for i, eq in enumerate(equivalences, start=1)]
		return replace(self, equivalences=tuple(equivalences))

	def update(self, eq:Equivalence) -> 'RelaxedModel':
		self.equivalence(eq.id)
		return replace(self, equivalences=tuple(eq if e.id == eq.id else e for e in self.equivalences))

	def recovered_fraction(self) -> float:
		total = sum(eq.n_prime for eq in self.equivalences)
		if not total:
			return 1.0
		return sum(eq.n_prime for eq in self.recovered()) / total

	def ground(self, compensation=True, max_atoms=DEFAULT_MAX_GROUND_ATOMS):
		"""
		Ground model of the relaxed MLN: base formulas, evidence, a hard
		equivalence per recovered grounding and, if @compensation, the two
		weighted unit atoms per relaxed grounding
		"""
		builder = GroundModelBuilder(max_atoms)
		domains = self.domains()
		ground_formulas(builder, self.base.formulas, domains)
		ground_evidence(builder, self.base.evidence)
		for eq in self.equivalences:
			if not eq.is_relaxed():
				_add_recovered(builder, eq, domains)
			elif compensation:
				for subst, original, clone in eq.groundings(domains):
					key = tuple(sorted(subst.items()))
					builder.add(eq.share(), AtomNode(original), Provenance('compensation', eq.id, key, 'original'))
					builder.add(eq.w_prime, AtomNode(clone), Provenance('compensation', eq.id, key, 'clone'))
		return builder.build()

def _add_recovered(builder, eq, domains):
	for subst, original, clone in eq.groundings(domains):
		key = tuple(sorted(subst.items()))
		builder.add(HARD, Iff(AtomNode(original), AtomNode(clone)), Provenance('equivalence', eq.id, key))

def clone_all(mln:Mln) -> RelaxedModel:
	domains = mln.domain_map()
	formulas, equivalences = [], []
	for f in mln.formulas:
		signature = f.variables()
		labels = iter(occurrence_labels(f.body.occurrences()))
		pairs = []

		def clone(atom):
			tag = CloneTag(f.id, next(labels), signature)
			cloned = Atom(PredicateId(atom.predicate.name, tag), atom.args)
			pairs.append((atom, cloned))
			return cloned

		formulas.append(replace(f, body=f.body.map_atoms(clone)))
		for original, cloned in pairs:
			eq = Equivalence(len(equivalences) + 1, f.constraint, original, cloned)
			per_original = count_groundings(eq, domains)
			if not per_original:
				logging.debug(f'formula {f.id} has no groundings, skipping {cloned}')
				continue
			eq = replace(eq, n=len(per_original), n_prime=sum(per_original.values()))
			equivalences.append(replace(eq, origin=eq.id))

	base = replace(mln, formulas=tuple(formulas))
	logging.debug(f'cloned {len(equivalences)} atom occurrence(s) in {len(formulas)} formula(s)')
	return RelaxedModel(mln, base, tuple(equivalences))

def recover(rm:RelaxedModel, eq_id:int) -> RelaxedModel:
	eq = rm.equivalence(eq_id)
	if not eq.is_relaxed():
		raise EquivalenceStateError(f'equivalence {eq_id} is already recovered')
	return rm.update(replace(eq, status=StatusEnum.recovered, w=0.0, w_prime=0.0))

def relax(rm:RelaxedModel, eq_id:int, w0=0.0, w0_prime=0.0) -> RelaxedModel:
	eq = rm.equivalence(eq_id)
	if eq.is_relaxed():
		raise EquivalenceStateError(f'equivalence {eq_id} is already relaxed')
	return rm.update(replace(eq, status=StatusEnum.relaxed, w=w0, w_prime=w0_prime))

def ground_equivalences(eq:Equivalence, domains):
	"""One equivalence per solution of @eq, each carrying its per-grounding weights."""
	out = []
	for subst, _, _ in eq.groundings(domains):
		pinned = Constraint.of(*(Comparison.make(v, Constant(subst[v.name]), True) for v in eq.variables()))
		out.append(replace(eq, constraint=pinned, w=eq.share(), n=1, n_prime=1,
						origin=eq.origin if eq.origin is not None else eq.id))
	return out

def split_ground(rm:RelaxedModel) -> RelaxedModel:
	domains = rm.domains()
	pieces = [g for eq in rm.equivalences for g in ground_equivalences(eq, domains)]
	return rm.with_equivalences(pieces, renumber=True)

class RelaxedGrounding:
	"""
	Ground structure of a relaxed model whose set of relaxed equivalences is fixed
	Only the compensating unit factors change between compensation iterations,
	so the base factors are built once and the unit factors are attached per query.
	"""
	def __init__(self, rm:RelaxedModel, max_atoms=DEFAULT_MAX_GROUND_ATOMS,
				max_vars=DEFAULT_MAX_FACTOR_VARS, representative=0):
		self.max_vars = max_vars
		self.relaxed_ids = frozenset(eq.id for eq in rm.relaxed())
		domains = rm.domains()

		builder = GroundModelBuilder(max_atoms)
		ground_formulas(builder, rm.base.formulas, domains)
		ground_evidence(builder, rm.base.evidence)
		for eq in rm.recovered():
			_add_recovered(builder, eq, domains)

		self.slots = {}
		for eq in rm.relaxed():
			self.slots[eq.id] = [(builder.atom(original), builder.atom(clone))
								for _, original, clone in eq.groundings(domains)]
		self.gm = builder.build()
		self.fixed = FactorGraph.from_ground_model(self.gm)
		self.representatives = {eq_id: slots[representative] for eq_id, slots in self.slots.items()}

	def _check(self, rm):
		relaxed = frozenset(eq.id for eq in rm.relaxed())
		if relaxed != self.relaxed_ids:
			raise EquivalenceStateError('relaxed equivalences changed since the grounding was built')

	def factor_graph(self, rm:RelaxedModel) -> FactorGraph:
		self._check(rm)
		units = []
		for eq in rm.relaxed():
			share = eq.share()
			for original, clone in self.slots[eq.id]:
				units.append(Factor.unit(original, share))
				units.append(Factor.unit(clone, eq.w_prime))
		return self.fixed.with_factors(units)

	def pair_log_odds(self, rm:RelaxedModel, eq_ids=None):
		"""{eq id: (log-odds of the original, log-odds of the clone)} at the representative grounding."""
		eq_ids = sorted(self.relaxed_ids) if eq_ids is None else list(eq_ids)
		wanted = {i for eq_id in eq_ids for i in self.representatives[eq_id]}
		_, odds = query(self.factor_graph(rm), wanted, False, self.max_vars, log_odds=True)
		return {eq_id: (odds[self.representatives[eq_id][0]], odds[self.representatives[eq_id][1]])
				for eq_id in eq_ids}

	def pair_marginals(self, rm:RelaxedModel, eq_ids=None):
		"""{eq id: (Pr(original), Pr(clone))} at the representative grounding."""
		return {eq_id: (float(expit(lp)), float(expit(lq))) for eq_id, (lp, lq) in self.pair_log_odds(rm, eq_ids).items()}

	def marginals(self, rm:RelaxedModel, atoms=None):
		"""Marginals of @atoms (default: every original atom) under the current weights."""
		if atoms is None:
			atoms = self.gm.originals()
		return ve_marginals(self.factor_graph(rm), atoms, self.max_vars)
