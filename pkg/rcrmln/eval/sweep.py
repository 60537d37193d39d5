#!/usr/bin/env python

"""
Approximation quality across recovery levels.

For every point of a recovery grid the RCR approximation is compared with the
exact marginals of the input model; divergences are also reported relative to
the fully relaxed approximation.
"""

import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from rcrmln.exact.brute import DEFAULT_MAX_BRUTE_FORCE_ATOMS, brute_force
from rcrmln.exact.elimination import DEFAULT_MAX_FACTOR_VARS, ve_marginals
from rcrmln.exact.marginals import MarginalTable
from rcrmln.eval.metrics import kl_metrics, normalized_kl
from rcrmln.ground.factor_graph import FactorGraph
from rcrmln.ground.grounding import DEFAULT_MAX_GROUND_ATOMS, ground, ground_atom
from rcrmln.mln.parser import resize
from rcrmln.rcr.recovery import RecoveryPolicy, rcr
from rcrmln.util.enum_util import BudgetEnum, ModeEnum
from rcrmln.util.files import write_csv
from rcrmln.util.job_util import exec_with_timeout

SWEEP_COMMENT = 'rcrmln sweep v1'
SWEEP_HEADER = ['model', 'sizes', 'recovered_fraction', 'raw_kl', 'normalized_kl',
				'iterations', 'converged', 'wall_time', 'error']

@dataclass
class EvalRow:
	model: str
	sizes: str
	recovered_fraction: float
	raw_kl: float = float('nan')
	normalized_kl: float = float('nan')
	iterations: int = 0
	converged: bool = False
	wall_time: float = 0.0
	error: str = ''

	def to_row(self):
		return [self.model, self.sizes, repr(self.recovered_fraction), repr(self.raw_kl), repr(self.normalized_kl),
				self.iterations, self.converged, '%.3f' % self.wall_time, self.error]

@dataclass(frozen=True)
class SweepLimits:
	max_atoms: int = DEFAULT_MAX_GROUND_ATOMS
	max_vars: int = DEFAULT_MAX_FACTOR_VARS
	max_brute_force_atoms: int = DEFAULT_MAX_BRUTE_FORCE_ATOMS

def describe_sizes(mln) -> str:
	return ';'.join(f'{d.name}={d.size}' for d in mln.domains)

def exact_reference(mln, limits:SweepLimits) -> MarginalTable:
	gm = ground(mln, limits.max_atoms)
	if len(gm.atoms) <= limits.max_brute_force_atoms:
		return brute_force(gm, limits.max_brute_force_atoms)
	return ve_marginals(FactorGraph.from_ground_model(gm), max_vars=limits.max_vars)

def query_atoms(mln, exact:MarginalTable):
	evidence = {ground_atom(literal.atom, {}) for literal in mln.evidence}
	return sorted((atom for atom in exact.atoms() if not atom.is_clone() and atom not in evidence), key=str)

def run_point(mln, fraction, params, mode, limits, timeout=None):
	"""One grid point; exceptions become an error marker so a pool never loses a row."""
	policy = RecoveryPolicy(BudgetEnum.fraction, fraction)
	try:
		result, elapsed = exec_with_timeout(f'recovery at {fraction:g}', rcr, args=(mln, policy, params, mode),
											kwargs={'max_atoms': limits.max_atoms, 'max_vars': limits.max_vars},
											timeout=timeout)
		return {
			'marginals': result.marginals.marginals,
			'fraction': result.fraction,
			'iterations': result.iterations,
			'converged': result.converged,
			'wall_time': elapsed,
			'error': '',
		}
	except Exception as e:
		logging.warning(f'grid point {fraction:g} failed: {str(e)}')
		return {'fraction': fraction, 'error': str(e) or type(e).__name__}

def _run_all(mln, points, params, mode, limits, workers, timeout):
	if workers > 1 and len(points) > 1:
		with ProcessPoolExecutor(max_workers=workers) as pool:
			futures = [pool.submit(run_point, mln, p, params, mode, limits, timeout) for p in points]
			return [f.result() for f in futures]
	return [run_point(mln, p, params, mode, limits, timeout) for p in points]

def sweep_model(mln, name, grid, params, mode=ModeEnum.lifted, limits=SweepLimits(), workers=1, timeout=None):
	"""EvalRows of one model, in grid order."""
	grid = [float(p) for p in grid]
	points = grid if 0.0 in grid else [0.0] + grid
	exact = exact_reference(mln, limits)
	queries = query_atoms(mln, exact)
	outcomes = dict(zip(points, _run_all(mln, points, params, mode, limits, workers, timeout)))

	def divergence(outcome):
		return kl_metrics(MarginalTable(outcome['marginals']), exact, queries)[0]

	baseline = outcomes[0.0]
	raw0 = divergence(baseline) if not baseline['error'] else float('nan')

	rows = []
	sizes = describe_sizes(mln)
	for point in grid:
		outcome = outcomes[point]
		if outcome['error']:
			rows.append(EvalRow(name, sizes, point, error=outcome['error']))
			continue
		raw = divergence(outcome)
		rows.append(EvalRow(name, sizes, outcome['fraction'], raw, normalized_kl(raw, raw0),
							outcome['iterations'], outcome['converged'], outcome['wall_time']))
		logging.debug(f'{name} ({sizes}) at {point:g}: raw KL {raw:.3g}')
	return rows

def sweep(mln, sizes, grid, params, mode=ModeEnum.lifted, limits=SweepLimits(), workers=1, timeout=None,
		name='model'):
	"""
	EvalRows for every domain size in @sizes, each size in grid order. The sized
	domains of @mln are redeclared per size; without @sizes @mln is used as is.
	"""
	models = [resize(mln, size) for size in sizes] if sizes else [mln]
	rows = []
	for model in models:
		rows += sweep_model(model, name, grid, params, mode, limits, workers, timeout)
	return rows

def write_sweep(rows, filepath=None):
	if filepath:
		write_csv(filepath, SWEEP_HEADER, [row.to_row() for row in rows], comment=SWEEP_COMMENT)
		return
	sys.stdout.write(f'# {SWEEP_COMMENT}\n')
	writer = csv.writer(sys.stdout, lineterminator='\n')
	writer.writerow(SWEEP_HEADER)
	for row in rows:
		writer.writerow(row.to_row())
