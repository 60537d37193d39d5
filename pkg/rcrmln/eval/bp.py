#!/usr/bin/env python

"""
Loopy belief propagation on a ground model, used as a reference point.

Every atom occurrence in a ground formula is its own port, so an atom that
appears twice in one formula is connected to it by two edges. Messages are
kept in log space and updated on a flooding schedule; factor-to-port
messages are damped in probability space.
"""

import logging
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import logsumexp

from rcrmln.exact.marginals import MarginalTable
from rcrmln.ground.grounding import GroundModel
from rcrmln.util.errors import InconsistentModelError

@dataclass
class BpResult:
	marginals: MarginalTable
	converged: bool
	iterations: int

def _normalize(msg):
	with np.errstate(invalid='ignore'):
		norm = logsumexp(msg)
	if not np.isfinite(norm):
		raise InconsistentModelError('belief propagation reached a zero message')
	return msg - norm

def _port_table(f):
	ports = len(f.body.occurrences())
	bits = np.array(list(product((False, True), repeat=ports)), dtype=bool).reshape(-1, ports)
	satisfied = np.asarray(f.body.evaluate(iter([bits[:, k] for k in range(ports)])), dtype=bool)
	if f.is_hard():
		table = np.where(satisfied, 0.0, -np.inf)
	else:
		table = np.where(satisfied, float(f.weight), 0.0)
	return table.reshape((2,) * ports)

def _along(msg, axis, ndim):
	shape = [1] * ndim
	shape[axis] = 2
	return msg.reshape(shape)

class _PortGraph:
	def __init__(self, gm:GroundModel):
		self.tables = [_port_table(f) for f in gm.formulas]
		self.scopes = [[gm.index(atom) for atom in f.body.occurrences()] for f in gm.formulas]
		self.ports_of = [[] for _ in gm.atoms]
		for j, scope in enumerate(self.scopes):
			for k, var in enumerate(scope):
				self.ports_of[var].append((j, k))

	def factor_belief(self, j, incoming):
		table = self.tables[j]
		total = table
		for k in range(table.ndim):
			total = total + _along(incoming[j][k], k, table.ndim)
		return total

	def factor_message(self, j, k, incoming):
		table = self.tables[j]
		total = table
		for other in range(table.ndim):
			if other != k:
				total = total + _along(incoming[j][other], other, table.ndim)
		axes = tuple(a for a in range(table.ndim) if a != k)
		with np.errstate(invalid='ignore'):
			msg = logsumexp(total, axis=axes) if axes else total
		return _normalize(np.asarray(msg, dtype=float))

def _beliefs(graph, to_var):
	beliefs = []
	for ports in graph.ports_of:
		total = np.zeros(2)
		for j, k in ports:
			total = total + to_var[j][k]
		beliefs.append(_normalize(total))
	return beliefs

def _to_factor(graph, to_var, to_factor):
	# variable to port: sum of the messages on the variable's other ports
	for ports in graph.ports_of:
		for j, k in ports:
			total = np.zeros(2)
			for j2, k2 in ports:
				if (j2, k2) != (j, k):
					total = total + to_var[j2][k2]
			to_factor[j][k] = _normalize(total)

def _bethe_log_z(graph, to_factor, beliefs):
	log_z = 0.0
	for j, table in enumerate(graph.tables):
		log_b = graph.factor_belief(j, to_factor)
		log_b = log_b - logsumexp(log_b)
		b = np.exp(log_b)
		mask = b > 0
		log_z += float(np.sum(b[mask] * (table[mask] - log_b[mask])))
	for ports, log_b in zip(graph.ports_of, beliefs):
		b = np.exp(log_b)
		mask = b > 0
		log_z += (len(ports) - 1) * float(np.sum(b[mask] * log_b[mask]))
	return log_z

def bp_oracle(gm:GroundModel, max_iters=1000, tol=1e-10, damping=0.5) -> BpResult:
	graph = _PortGraph(gm)
	to_var = [np.zeros((len(scope), 2)) for scope in graph.scopes]
	to_factor = [np.zeros((len(scope), 2)) for scope in graph.scopes]
	beliefs = _beliefs(graph, to_var)
	log_keep, log_new = np.log1p(-damping) if damping < 1 else -np.inf, np.log(damping)

	converged, iteration = False, 0
	for iteration in range(1, max_iters + 1):
		_to_factor(graph, to_var, to_factor)

		updated = []
		for j, scope in enumerate(graph.scopes):
			msgs = np.empty((len(scope), 2))
			for k in range(len(scope)):
				fresh = graph.factor_message(j, k, to_factor)
				msgs[k] = _normalize(np.logaddexp(log_keep + to_var[j][k], log_new + fresh))
			updated.append(msgs)
		to_var = updated

		fresh_beliefs = _beliefs(graph, to_var)
		change = max((abs(np.exp(b[1]) - np.exp(old[1])) for b, old in zip(fresh_beliefs, beliefs)), default=0.0)
		beliefs = fresh_beliefs
		if change < tol:
			converged = True
			break

	_to_factor(graph, to_var, to_factor)
	if not converged:
		logging.warning(f'belief propagation did not converge in {max_iters} iteration(s)')
	logging.debug(f'belief propagation: {iteration} iteration(s), converged={converged}')
	marginals = {atom: float(np.exp(beliefs[i][1])) for i, atom in enumerate(gm.atoms)}
	return BpResult(MarginalTable(marginals, _bethe_log_z(graph, to_factor, beliefs)), converged, iteration)
