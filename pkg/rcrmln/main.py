#!/usr/bin/env python

from __future__ import print_function

import sys

# sys.version_info[0] is the major version number. sys.version_info[1] is minor
if sys.version_info[0] != 3:
	print('\n*** WARNING *** Please use Python 3! Exiting.')
	exit(1)

from rcrmln.util.errors import CapacityError, MlnParseError, NonConvergenceError

EXIT_CODES = (
	(MlnParseError, 2),
	(CapacityError, 3),
	(NonConvergenceError, 4),
)

def main(config:str='.rcrmln.yaml', argv=None):
	try:
		# parse command line args
		from rcrmln.options import Options
		opts = Options(sys.argv[1:] if argv is None else argv)
		assert opts, 'Failed to parse cmdline args!'

		args = opts.args()
		assert args, 'Failed to get cmdline args!'

		# configuration file (optional, defaults apply without one)
		from rcrmln.util.config import find_config
		config = find_config(config)

		# ground request
		if args.cmd == 'ground':
			from rcrmln.ground.main import main
			main(args, config)

		# exact inference request
		elif args.cmd == 'exact':
			from rcrmln.exact.main import main
			main(args, config)

		# shatter or rcr request
		elif args.cmd in ('shatter', 'rcr'):
			from rcrmln.rcr.main import main
			main(args, config)

		# evaluation sweep
		elif args.cmd == 'eval':
			from rcrmln.eval.main import main
			main(args, config)

	except Exception as e:
		print(str(e), file=sys.stderr)
		for error_cls, code in EXIT_CODES:
			if isinstance(e, error_cls):
				exit(code)
		exit(1)
