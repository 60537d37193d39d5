#!/usr/bin/env python

"""
Exact inference by variable elimination on a FactorGraph.

Each connected component is eliminated along a min-fill order (ties broken by
atom index). When marginals are wanted, the forward elimination is followed by
a backward pass over the resulting bucket tree, so every variable of a
component gets its marginal from one calibrated pass.
"""

import logging

import numpy as np
from scipy.special import logsumexp

from rcrmln.exact.marginals import MarginalTable
from rcrmln.ground.factor_graph import Factor, FactorGraph
from rcrmln.util.errors import CapacityError, InconsistentModelError

DEFAULT_MAX_FACTOR_VARS = 22

def _lse(table, axis=None):
	with np.errstate(divide='ignore', invalid='ignore'):
		return np.asarray(logsumexp(table, axis=axis))

def product(factors, max_vars=None) -> Factor:
	scope = tuple(sorted(set().union(*(f.scope for f in factors))))
	if max_vars is not None and len(scope) > max_vars:
		raise CapacityError(f'elimination needs a factor over {len(scope)} atoms (limit {max_vars})')
	pos = {v: i for i, v in enumerate(scope)}
	total = np.zeros((2,) * len(scope))
	for f in factors:
		shape = [1] * len(scope)
		for v in f.scope:
			shape[pos[v]] = 2
		total = total + np.reshape(f.table, shape)
	return Factor(scope, total)

def sum_out(factor:Factor, var:int) -> Factor:
	axis = factor.scope.index(var)
	scope = factor.scope[:axis] + factor.scope[axis + 1:]
	return Factor(scope, _lse(factor.table, axis=axis))

def sum_to(factor:Factor, keep) -> Factor:
	axes = tuple(i for i, v in enumerate(factor.scope) if v not in keep)
	if not axes:
		return factor
	scope = tuple(v for v in factor.scope if v in keep)
	return Factor(scope, _lse(factor.table, axis=axes))

def _fill_in(adj, v) -> int:
	nbrs = list(adj[v])
	fill = 0
	for i, a in enumerate(nbrs):
		others = adj[a]
		for b in nbrs[i + 1:]:
			if b not in others:
				fill += 1
	return fill

def _min_fill(graph, nodes):
	"""Yields (var, clique size) along a min-fill order."""
	nodes = set(nodes)
	adj = {v: set(graph[v]) & nodes for v in nodes}
	while adj:
		best, best_fill = None, None
		for v in sorted(adj):
			fill = _fill_in(adj, v)
			if best_fill is None or fill < best_fill:
				best, best_fill = v, fill
				if fill == 0:
					break
		nbrs = adj.pop(best)
		for u in nbrs:
			adj[u].discard(best)
			adj[u] |= nbrs - {u}
		yield best, len(nbrs) + 1

def min_fill_order(graph, nodes=None):
	nodes = graph.nodes if nodes is None else nodes
	return [v for v, _ in _min_fill(graph, nodes)]

def elimination_width(fg:FactorGraph) -> int:
	"""Largest bucket scope along the min-fill order."""
	graph = fg.interaction_graph()
	return max((size for _, size in _min_fill(graph, graph.nodes)), default=0)

def calibrate(factors, order, max_vars=DEFAULT_MAX_FACTOR_VARS, marginals=True):
	"""
	Bucket elimination along @order, then a backward pass
	Returns (log Z, {var: unnormalized log marginal}) for the variables in @order
	"""
	pos = {v: i for i, v in enumerate(order)}
	buckets = [[] for _ in order]
	log_z = 0.0
	for f in factors:
		if not f.scope:
			log_z += float(f.table)
			continue
		buckets[min(pos[v] for v in f.scope)].append(f)

	messages = [None] * len(order)
	children = [[] for _ in order]
	for i, var in enumerate(order):
		if not buckets[i]:
			buckets[i].append(Factor((var,), np.zeros(2)))
		lam = sum_out(product(buckets[i], max_vars), var)
		messages[i] = lam
		if lam.scope:
			parent = min(pos[v] for v in lam.scope)
			buckets[parent].append(lam)
			children[parent].append(i)
		else:
			log_z += float(lam.table)

	if not marginals:
		return log_z, {}

	downward = [None] * len(order)
	tables = {}
	for i in reversed(range(len(order))):
		var = order[i]
		incoming = [downward[i]] if downward[i] is not None else []
		belief = product(buckets[i] + incoming)
		tables[var] = sum_to(belief, (var,)).table
		for j in children[i]:
			rest = [f for f in buckets[i] if f is not messages[j]] + incoming
			if rest:
				downward[j] = sum_to(product(rest), messages[j].scope)
	return log_z, tables

def _normalize(table) -> float:
	norm = float(_lse(table))
	if norm == float('-inf'):
		raise InconsistentModelError('every world violates a hard formula')
	return float(np.exp(table[1] - norm))

def _log_odds(table) -> float:
	if table[0] == table[1] == float('-inf'):
		raise InconsistentModelError('every world violates a hard formula')
	return float(table[1] - table[0])

def query(fg:FactorGraph, wanted, with_log_z=True, max_vars=DEFAULT_MAX_FACTOR_VARS, log_odds=False):
	"""
	Marginals of the variable indices in @wanted (or their log-odds, which keep
	full precision near 0 and 1); log Z over all components if requested
	"""
	wanted = set(wanted)
	graph = fg.interaction_graph()
	components = fg.components()
	component_of = {}
	for c, members in enumerate(components):
		for v in members:
			component_of[v] = c
	grouped = [[] for _ in components]
	log_z = 0.0
	for f in fg.factors:
		if f.scope:
			grouped[component_of[f.scope[0]]].append(f)
		else:
			log_z += float(f.table)

	probs = {}
	for c, members in enumerate(components):
		need = wanted.intersection(members)
		if not need and not with_log_z:
			continue
		order = min_fill_order(graph, members)
		z, tables = calibrate(grouped[c], order, max_vars, marginals=bool(need))
		if z == float('-inf'):
			raise InconsistentModelError('every world violates a hard formula')
		log_z += z
		for v in need:
			probs[v] = _log_odds(tables[v]) if log_odds else _normalize(tables[v])
	logging.debug(f'eliminated {len(components)} component(s) for {len(wanted)} query atom(s)')
	return (log_z if with_log_z else float('nan')), probs

def ve_marginals(fg:FactorGraph, queries=None, max_vars=DEFAULT_MAX_FACTOR_VARS) -> MarginalTable:
	index = {atom: i for i, atom in enumerate(fg.variables)}
	if queries is None:
		queries = fg.variables
	unknown = [str(a) for a in queries if a not in index]
	if unknown:
		raise KeyError(f'query atoms not in the model: {", ".join(unknown[:5])}')
	log_z, probs = query(fg, {index[a] for a in queries}, True, max_vars)
	return MarginalTable({fg.variables[v]: p for v, p in sorted(probs.items())}, log_z)

def representative_marginals(gm, pairs, max_vars=DEFAULT_MAX_FACTOR_VARS):
	"""[(Pr(a), Pr(a')) for (a, a') in pairs], from one batched query."""
	fg = FactorGraph.from_ground_model(gm)
	wanted = {gm.index(a) for pair in pairs for a in pair}
	_, probs = query(fg, wanted, False, max_vars)
	return [(probs[gm.index(a)], probs[gm.index(b)]) for a, b in pairs]

def log_partition(fg:FactorGraph, max_vars=DEFAULT_MAX_FACTOR_VARS) -> float:
	log_z, _ = query(fg, (), True, max_vars)
	return log_z
