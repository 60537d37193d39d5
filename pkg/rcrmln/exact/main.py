#!/usr/bin/env python

from rcrmln.eval.bp import bp_oracle
from rcrmln.exact.brute import brute_force
from rcrmln.exact.elimination import ve_marginals
from rcrmln.ground.factor_graph import FactorGraph
from rcrmln.ground.main import ground_model, load_model
from rcrmln.rcr.report import write_report
from rcrmln.util.config import load_config
from rcrmln.util.console import msg_alert, msg_fail, msg_info, msg_ok, setup_logging
from rcrmln.util.enum_util import EngineEnum, get_enum

def infer(gm, engine, config):
	if engine == EngineEnum.brute:
		return brute_force(gm, config['exact']['max_brute_force_atoms'])
	if engine == EngineEnum.bp:
		bp = config['bp']
		result = bp_oracle(gm, max_iters=bp['max_iters'], tol=bp['tol'], damping=bp['damping'])
		if not result.converged:
			msg_alert(f'BP did not converge in {result.iterations} iteration(s)')
		return result.marginals
	return ve_marginals(FactorGraph.from_ground_model(gm), max_vars=config['exact']['max_factor_vars'])

def main(args, config_file):
	config = load_config(config_file)
	setup_logging(args.debug)

	mln = load_model(args.model)
	gm = ground_model(mln, config)

	engine = get_enum(EngineEnum, args.engine)
	try:
		msg_info(f'Inference ({engine})...', end='', flush=True)
		table = infer(gm, engine, config)
		msg_ok(f'logZ {table.log_z:.6f}')
	except Exception as e:
		msg_fail(str(e))
		raise

	write_report(table.to_json(), args.out)
