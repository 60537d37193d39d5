#!/usr/bin/env python

import argparse

from rcrmln.util.enum_util import EngineEnum, GeneratorEnum, ModeEnum, ScheduleEnum

def _grid(text):
	try:
		points = [float(p) for p in text.split(',') if p.strip()]
	except ValueError:
		raise argparse.ArgumentTypeError(f'invalid grid: {text}')
	if not points or any(p < 0 or p > 1 for p in points):
		raise argparse.ArgumentTypeError(f'grid points must lie in [0, 1]: {text}')
	return points

def _sizes(text):
	try:
		sizes = [int(s) for s in text.split(',') if s.strip()]
	except ValueError:
		raise argparse.ArgumentTypeError(f'invalid domain sizes: {text}')
	if not sizes or any(s < 1 for s in sizes):
		raise argparse.ArgumentTypeError(f'domain sizes must be positive: {text}')
	return sizes

class Options():
	__args = None

	def args(self):
		return self.__args

	def __init__(self, argv):
		parser = argparse.ArgumentParser(prog='rcrcli',
						usage='rcrcli <command> [options] args',
						description='Approximate inference for Markov logic networks by relax, compensate and recover')
		subparsers = parser.add_subparsers(title='actions', dest='cmd', help='Command (e.g. rcr, exact, eval)')
		subparsers.required = True

		#############################
		# Ground sub-command
		#############################
		parser_ground = subparsers.add_parser('ground', help='Ground a model and report its size')
		parser_ground.add_argument(dest='model', help='Model file (.mln)', action='store')
		parser_ground.add_argument('--dump', dest='dump', \
					help='Print every ground formula', action='store_true')
		parser_ground.add_argument('-o', '--out', dest='out', \
					help='Write the output to a file instead of stdout', action='store', default=None)
		parser_ground.add_argument("-d", "--debug", dest="debug", \
					help="Enable debugging", action="store_true")

		#############################
		# Exact sub-command
		#############################
		parser_exact = subparsers.add_parser('exact', help='Exact marginals and log partition function')
		parser_exact.add_argument(dest='model', help='Model file (.mln)', action='store')
		parser_exact.add_argument('--engine', dest='engine', choices=[str(e) for e in EngineEnum], \
					help='Brute-force enumeration, variable elimination or the loopy BP oracle', action='store', default=str(EngineEnum.ve))
		parser_exact.add_argument('-o', '--out', dest='out', \
					help='Write the JSON result to a file instead of stdout', action='store', default=None)
		parser_exact.add_argument("-d", "--debug", dest="debug", \
					help="Enable debugging", action="store_true")

		#############################
		# Shatter sub-command
		#############################
		parser_shatter = subparsers.add_parser('shatter', help='Partition the first-order equivalences of a model')
		parser_shatter.add_argument(dest='model', help='Model file (.mln)', action='store')
		parser_shatter.add_argument('-o', '--out', dest='out', \
					help='Write the JSON result to a file instead of stdout', action='store', default=None)
		parser_shatter.add_argument("-d", "--debug", dest="debug", \
					help="Enable debugging", action="store_true")

		#############################
		# RCR sub-command
		#############################
		parser_rcr = subparsers.add_parser('rcr', help='Approximate marginals by relax, compensate and recover')
		parser_rcr.add_argument(dest='model', help='Model file (.mln)', action='store')
		parser_rcr.add_argument('--mode', dest='mode', choices=[str(m) for m in ModeEnum], \
					help='Work on first-order cells or on ground equivalences', action='store', default=str(ModeEnum.lifted))

		# recovery budget
		parser_rcr_budget = parser_rcr.add_mutually_exclusive_group()
		parser_rcr_budget.add_argument('--recover-frac', dest='recover_frac', type=float, \
					help='Fraction of ground equivalences to recover (default 0)', action='store', default=None)
		parser_rcr_budget.add_argument('--recover-count', dest='recover_count', type=int, \
					help='Number of equivalences to recover', action='store', default=None)
		parser_rcr_budget.add_argument('--recover-cost', dest='recover_cost', type=int, \
					help='Largest elimination width to allow', action='store', default=None)
		parser_rcr.add_argument('--batch', dest='batch', type=int, \
					help='Equivalences recovered per step', action='store', default=None)
		parser_rcr.add_argument('--accumulated', dest='accumulated', \
					help='Score by the largest residual seen during compensation', action='store_true')

		# compensation
		parser_rcr.add_argument('--damping', dest='damping', type=float, help='Damping in (0, 1]', action='store', default=None)
		parser_rcr.add_argument('--tol', dest='tol', type=float, help='Convergence tolerance', action='store', default=None)
		parser_rcr.add_argument('--max-iters', dest='max_iters', type=int, help='Iteration limit', action='store', default=None)
		parser_rcr.add_argument('--schedule', dest='schedule', choices=[str(s) for s in ScheduleEnum], \
					help='Update order of the compensating weights', action='store', default=None)
		parser_rcr.add_argument('--seed', dest='seed', type=int, \
					help='Seed for the equiprobability checks', action='store', default=0)
		parser_rcr.add_argument('--strict', dest='strict', \
					help='Exit with code 4 if compensation does not converge', action='store_true')

		# outputs
		parser_rcr.add_argument('-o', '--out', dest='out', \
					help='Write the marginals JSON to a file instead of stdout', action='store', default=None)
		parser_rcr.add_argument('--trace', dest='trace', help='Write the compensation trace (CSV)', action='store', default=None)
		parser_rcr.add_argument('--audit', dest='audit', help='Write the recovery audit log (JSON lines)', action='store', default=None)
		parser_rcr.add_argument("-d", "--debug", dest="debug", \
					help="Enable debugging", action="store_true")

		#############################
		# Eval sub-command
		#############################
		parser_eval = subparsers.add_parser('eval', help='Divergence from exact marginals across recovery levels')
		parser_eval_arg = parser_eval.add_mutually_exclusive_group(required=True)
		parser_eval_arg.add_argument(dest='model', nargs='?', help='Model file (.mln)', action='store', default=None)
		parser_eval_arg.add_argument('--gen', dest='gen', choices=[str(g) for g in GeneratorEnum], \
					help='Generate a benchmark model instead of reading one', action='store', default=None)
		parser_eval.add_argument('--size', dest='size', type=_sizes, \
					help='Domain sizes, one sweep each (e.g., 5,6,7); required with --gen', action='store', default=None)
		parser_eval.add_argument('--grid', dest='grid', type=_grid, \
					help='Recovery fractions (e.g., 0,0.25,0.5,0.75,1)', action='store', default=None)
		parser_eval.add_argument('--mode', dest='mode', choices=[str(m) for m in ModeEnum], \
					help='Work on first-order cells or on ground equivalences', action='store', default=None)
		parser_eval.add_argument('--workers', dest='workers', type=int, help='Worker processes', action='store', default=None)
		parser_eval.add_argument('-o', '--out', dest='out', \
					help='Write the CSV to a file instead of stdout', action='store', default=None)
		parser_eval.add_argument("-d", "--debug", dest="debug", \
					help="Enable debugging", action="store_true")

		# parse args now
		self.__args = parser.parse_args(argv)

if __name__ == '__main__':
	import sys
	opts = Options(sys.argv[1:])
	print(opts.args())
