#!/usr/bin/env python

"""
Preemptive shattering and equivalence partitioning.

An atom is split by every combination of (a) each variable being one of the
explicitly mentioned constants or none of them and (b) every equality pattern
among same-sort variables. Cutting both sides of an equivalence this way and
pairing each clone cell with the original cell it refines yields pieces that
are count-normalized and strongly equiprobable.
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace
from itertools import product
from typing import Mapping, Tuple

import numpy as np

from rcrmln.exact.elimination import DEFAULT_MAX_FACTOR_VARS, query
from rcrmln.ground.grounding import ground_atom
from rcrmln.mln.constraint import Comparison, Constraint, implies, solutions
from rcrmln.mln.model import Atom, constants_by_domain
from rcrmln.rcr.relaxation import Equivalence, RelaxedGrounding, RelaxedModel, count_groundings
from rcrmln.util.errors import NotCountNormalizedError

EQUIPROBABILITY_TOL = 1e-9

@dataclass(frozen=True)
class ConstrainedAtom:
	constraint: Constraint
	atom: Atom

	def groundings(self, domains):
		return [ground_atom(self.atom, subst) for subst in solutions(self.constraint, self.atom.variables(), domains)]

	def __str__(self):
		if self.constraint.is_trivial():
			return str(self.atom)
		return f'{self.constraint}, {self.atom}'

@dataclass(frozen=True)
class AtomPartition:
	source: Atom
	cells: Tuple[ConstrainedAtom, ...] = ()

	def __len__(self):
		return len(self.cells)

	def __iter__(self):
		return iter(self.cells)

def set_partitions(items):
	"""All set partitions of @items, as lists of blocks; the all-singletons one comes last."""
	items = list(items)
	if not items:
		yield []
		return
	first, rest = items[0], items[1:]
	for partition in set_partitions(rest):
		for i in range(len(partition)):
			yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
		yield [[first]] + partition

def _constant_cases(var, K, domains):
	"""@K maps a domain to its constants, or is one flat set filtered by membership."""
	members = set(domains[var.domain])
	ks = K.get(var.domain, ()) if isinstance(K, Mapping) else K
	ks = [k for k in ks if k.name in members]
	ks.sort(key=lambda k: domains[var.domain].index(k.name))
	cases = [[Comparison.make(var, k, True)] for k in ks]
	cases.append([Comparison.make(var, k, False) for k in ks])
	return cases

def _equality_cases(variables):
	by_domain = {}
	for var in variables:
		by_domain.setdefault(var.domain, []).append(var)
	per_domain = []
	for group in by_domain.values():
		cases = []
		for partition in sorted(set_partitions(group), key=len):
			block = {v: i for i, blk in enumerate(partition) for v in blk}
			conjuncts = []
			for i, u in enumerate(group):
				for v in group[i + 1:]:
					conjuncts.append(Comparison.make(u, v, block[u] == block[v]))
			cases.append(conjuncts)
		per_domain.append(cases)
	for combo in product(*per_domain):
		yield [c for conjuncts in combo for c in conjuncts]

def _entailed(comparison, pinned, excluded) -> bool:
	"""Whether a variable-variable comparison follows from the constant comparisons."""
	x, y = comparison.left, comparison.right
	if x in pinned and y in pinned:
		return (pinned[x] == pinned[y]) == comparison.equal
	if comparison.equal:
		return False
	return (x in pinned and pinned[x] in excluded.get(y, ())) or (y in pinned and pinned[y] in excluded.get(x, ()))

def simplify(constraint:Constraint) -> Constraint:
	pinned, excluded = {}, {}
	for c in constraint.conjuncts:
		if not c.is_var_var():
			if c.equal:
				pinned[c.left] = c.right
			else:
				excluded.setdefault(c.left, set()).add(c.right)
	kept = [c for c in constraint.conjuncts if not c.is_var_var() or not _entailed(c, pinned, excluded)]
	return Constraint(frozenset(kept))

def shatter_atom(atom:Atom, K, domains) -> AtomPartition:
	variables = atom.variables()
	constant_cases = product(*(_constant_cases(v, K, domains) for v in variables))
	cells, seen = [], set()
	for c_a, c_b in product(list(constant_cases), list(_equality_cases(variables))):
		constraint = simplify(Constraint(frozenset([c for part in c_a for c in part] + c_b)))
		if constraint in seen or not solutions(constraint, variables, domains):
			continue
		seen.add(constraint)
		cells.append(ConstrainedAtom(constraint, atom))
	logging.debug(f'shattered {atom} into {len(cells)} cell(s)')
	return AtomPartition(atom, tuple(cells))

def check_count_normalized(pairs):
	"""
	Count normalization of a set of ground equivalences given as
	(original, clone) pairs; returns (n, n')
	"""
	per_original = Counter(original for original, _ in pairs)
	return _normalized_counts(per_original)

def _normalized_counts(per_original):
	if not per_original:
		return 0, 0
	items = list(per_original.items())
	first_atom, first_count = items[0]
	for atom, count in items[1:]:
		if count != first_count:
			witness = ((first_atom, first_count), (atom, count))
			raise NotCountNormalizedError(f'{first_atom} takes part in {first_count} ground equivalence(s) '
										f'but {atom} in {count}', witness)
	return len(items), sum(per_original.values())

def compute_counts(eq:Equivalence, domains):
	return _normalized_counts(count_groundings(eq, domains))

def partition_equivalence(eq:Equivalence, K, domains):
	variables = eq.variables()
	original_cells = shatter_atom(eq.original, K, domains).cells
	clone_cells = shatter_atom(eq.clone, K, domains).cells

	pieces = []
	for j, cell in enumerate(clone_cells):
		constraint = simplify(cell.constraint.conjoin(eq.constraint))
		if not solutions(constraint, variables, domains):
			continue
		refined = [i for i, orig in enumerate(original_cells)
					if implies(constraint, orig.constraint, variables, domains)]
		if len(refined) != 1:
			raise ValueError(f'clone cell {constraint} of {eq} refines {len(refined)} original cell(s)')
		piece = replace(eq, constraint=constraint, origin=eq.origin if eq.origin is not None else eq.id)
		n, n_prime = compute_counts(piece, domains)
		pieces.append((refined[0], j, replace(piece, n=n, n_prime=n_prime)))
	pieces.sort(key=lambda item: item[:2])
	return [piece for _, _, piece in pieces]

def _describe(K):
	if isinstance(K, Mapping):
		return {domain: sorted(k.name for k in ks) for domain, ks in sorted(K.items())}
	return sorted(k.name for k in K)

def partition_model(rm:RelaxedModel, K=None) -> RelaxedModel:
	K = constants_by_domain(rm.source) if K is None else K
	domains = rm.domains()
	cells = [piece for eq in rm.equivalences for piece in partition_equivalence(eq, K, domains)]
	logging.debug(f'partitioned {len(rm.equivalences)} equivalence(s) into {len(cells)} cell(s) with K={_describe(K)}')
	return rm.with_equivalences(cells, renumber=True)

@dataclass(frozen=True)
class EquiprobabilityReport:
	eq_id: int
	passed: bool
	worst_spread: float
	trials: int

def _spread(values) -> float:
	return float(max(values) - min(values)) if values else 0.0

def check_equiprobability(rm:RelaxedModel, eqs, trials=5, seed=0, max_vars=DEFAULT_MAX_FACTOR_VARS):
	"""
	For @trials random draws of one (w, w') pair per relaxed cell of @rm in [-2, 2],
	exact marginals of every grounding of each equivalence in @eqs are compared:
	the spread over originals and over clones must stay within tolerance
	"""
	domains = rm.domains()
	grounding = RelaxedGrounding(rm, max_vars=max_vars)
	members = {eq.id: [(grounding.gm.index(a), grounding.gm.index(b)) for _, a, b in eq.groundings(domains)]
			for eq in eqs}
	wanted = {i for pairs in members.values() for pair in pairs for i in pair}
	worst = {eq.id: 0.0 for eq in eqs}

	rng = np.random.default_rng(seed)
	for _ in range(trials):
		drawn = []
		for eq in rm.equivalences:
			if eq.is_relaxed():
				w, w_prime = rng.uniform(-2.0, 2.0, size=2)
				eq = replace(eq, w=float(w), w_prime=float(w_prime))
			drawn.append(eq)
		drawn = rm.with_equivalences(drawn)
		_, probs = query(grounding.factor_graph(drawn), wanted, False, max_vars)
		for eq_id, pairs in members.items():
			spread = max(_spread([probs[a] for a, _ in pairs]), _spread([probs[b] for _, b in pairs]))
			worst[eq_id] = max(worst[eq_id], spread)

	reports = [EquiprobabilityReport(eq.id, worst[eq.id] <= EQUIPROBABILITY_TOL, worst[eq.id], trials) for eq in eqs]
	for report in reports:
		if not report.passed:
			logging.debug(f'equivalence {report.eq_id} is not equiprobable: spread {report.worst_spread:.3g}')
	return reports

def check_strong_equiprobability(rm:RelaxedModel, eq:Equivalence, trials=5, seed=0,
								max_vars=DEFAULT_MAX_FACTOR_VARS) -> EquiprobabilityReport:
	return check_equiprobability(rm, [eq], trials, seed, max_vars)[0]
