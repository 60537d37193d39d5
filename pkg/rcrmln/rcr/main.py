#!/usr/bin/env python

from rcrmln.ground.main import load_model
from rcrmln.mln.model import constants_by_domain, constants_of
from rcrmln.rcr.compensation import CompensationParams
from rcrmln.rcr.recovery import RecoveryPolicy, rcr
from rcrmln.rcr.relaxation import clone_all
from rcrmln.rcr.report import marginals_report, write_audit, write_report, write_trace
from rcrmln.rcr.shattering import compute_counts, partition_equivalence
from rcrmln.util.config import load_config
from rcrmln.util.console import msg_alert, msg_fail, msg_info, msg_ok, setup_logging
from rcrmln.util.enum_util import BudgetEnum, ModeEnum, get_enum
from rcrmln.util.errors import NonConvergenceError, NotCountNormalizedError

def shatter_report(mln):
	K = constants_by_domain(mln)
	rm = clone_all(mln)
	domains = rm.domains()
	entries = []
	for eq in rm.equivalences:
		entry = {'id': eq.id, 'equivalence': str(eq), 'n': eq.n, 'n_prime': eq.n_prime}
		try:
			compute_counts(eq, domains)
			entry['count_normalized'] = True
		except NotCountNormalizedError as e:
			entry['count_normalized'] = False
			entry['witness'] = [[str(atom), count] for atom, count in e.witness]
		entry['cells'] = [{'constraint': str(cell.constraint), 'n': cell.n, 'n_prime': cell.n_prime}
						for cell in partition_equivalence(eq, K, domains)]
		entries.append(entry)
	return {
		'constants': sorted(k.name for k in constants_of(mln)),
		'equivalences': entries,
		'cells': sum(len(entry['cells']) for entry in entries),
	}

def build_policy(args, config) -> RecoveryPolicy:
	batch = args.batch or config['recovery']['batch']
	accumulated = args.accumulated or bool(config['recovery']['accumulated_residual'])
	if args.recover_count is not None:
		return RecoveryPolicy(BudgetEnum.count, args.recover_count, batch, accumulated=accumulated)
	if args.recover_cost is not None:
		return RecoveryPolicy(BudgetEnum.cost, args.recover_cost, batch, accumulated=accumulated)
	return RecoveryPolicy(BudgetEnum.fraction, args.recover_frac or 0.0, batch, accumulated=accumulated)

def run_rcr(args, config):
	mln = load_model(args.model)
	params = CompensationParams.from_config(config['compensation'], damping=args.damping, tol=args.tol,
											max_iters=args.max_iters, schedule=args.schedule)
	policy = build_policy(args, config)
	mode = get_enum(ModeEnum, args.mode)
	check = config['recovery']['check_equiprobability'] or args.debug
	trials = config['recovery']['equiprobability_trials'] if check else 0

	try:
		msg_info(f'Relax, compensate, recover ({mode}, {policy.budget} {policy.limit:g})...', end='', flush=True)
		result = rcr(mln, policy, params, mode,
					max_atoms=config['grounding']['max_ground_atoms'],
					max_vars=config['exact']['max_factor_vars'],
					check_equiprobability_trials=trials, seed=args.seed)
		msg_ok(f'{len(result.recovered)} recovered, {result.iterations} iteration(s)')
	except Exception as e:
		msg_fail(str(e))
		raise

	if result.truncated:
		msg_alert('recovery stopped early: exact inference exceeded its capacity')
	write_report(marginals_report(result), args.out)
	if args.trace:
		write_trace(result.traces, args.trace)
	if args.audit:
		write_audit(result.audit, args.audit)

	if not result.converged:
		msg_alert('compensation did not converge')
		if args.strict:
			raise NonConvergenceError(f'compensation did not converge within {params.max_iters} iteration(s)')

def main(args, config_file):
	config = load_config(config_file)
	setup_logging(args.debug)

	if args.cmd == 'shatter':
		mln = load_model(args.model)
		write_report(shatter_report(mln), args.out)
	else:
		run_rcr(args, config)
