#!/usr/bin/env python

"""
Exact marginals by enumerating every world of a ground model.

Worlds are evaluated in chunks: each chunk is a boolean matrix (world x atom)
and every ground formula body is evaluated column-wise on it. Nothing here
goes through the factor tables, so this is an independent check on the
elimination engine.
"""

import logging

import numpy as np
from scipy.special import logsumexp

from rcrmln.exact.marginals import MarginalTable
from rcrmln.ground.grounding import GroundModel
from rcrmln.util.errors import CapacityError, InconsistentModelError

DEFAULT_MAX_BRUTE_FORCE_ATOMS = 25
CHUNK_BITS = 16

def _lse(values, axis=None):
	with np.errstate(divide='ignore', invalid='ignore'):
		return logsumexp(values, axis=axis)

def _world_bits(start, size, num_atoms):
	ids = np.arange(start, start + size, dtype=np.int64)
	return ((ids[:, None] >> np.arange(num_atoms, dtype=np.int64)) & 1).astype(bool)

def brute_force(gm:GroundModel, max_atoms=DEFAULT_MAX_BRUTE_FORCE_ATOMS) -> MarginalTable:
	num_atoms = len(gm.atoms)
	if num_atoms > max_atoms:
		raise CapacityError(f'brute force over {num_atoms} atoms exceeds the limit of {max_atoms}')

	columns = [(f, [gm.index(atom) for atom in f.body.occurrences()]) for f in gm.formulas]
	total = 1 << num_atoms
	chunk = min(total, 1 << CHUNK_BITS)

	z_parts, true_parts = [], []
	for start in range(0, total, chunk):
		bits = _world_bits(start, chunk, num_atoms)
		log_weight = np.zeros(chunk)
		for f, cols in columns:
			satisfied = np.asarray(f.body.evaluate(iter([bits[:, c] for c in cols])), dtype=bool)
			if f.is_hard():
				log_weight[~satisfied] = -np.inf
			else:
				log_weight[satisfied] += f.weight
		z_parts.append(_lse(log_weight))
		true_parts.append([_lse(log_weight[bits[:, i]]) for i in range(num_atoms)])

	log_z = float(_lse(np.array(z_parts)))
	if log_z == float('-inf'):
		raise InconsistentModelError('every world violates a hard formula')
	log_true = _lse(np.array(true_parts).reshape(len(true_parts), num_atoms), axis=0)
	logging.debug(f'enumerated {total} world(s) over {num_atoms} atom(s)')
	marginals = {atom: float(np.exp(log_true[i] - log_z)) for i, atom in enumerate(gm.atoms)}
	return MarginalTable(marginals, log_z)
