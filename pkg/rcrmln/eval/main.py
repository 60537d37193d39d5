#!/usr/bin/env python

import os

from rcrmln.eval.generators import generate_model
from rcrmln.eval.sweep import SweepLimits, sweep, write_sweep
from rcrmln.ground.main import load_model
from rcrmln.rcr.compensation import CompensationParams
from rcrmln.util.config import load_config
from rcrmln.util.console import msg_fail, msg_info, msg_ok, setup_logging
from rcrmln.util.enum_util import ModeEnum, get_enum

def model_and_name(args, config):
	if args.model:
		return load_model(args.model), os.path.splitext(os.path.basename(args.model))[0]
	if not args.size:
		raise ValueError('--gen needs a domain size (--size)')
	weights = config['eval']['generators'].get(args.gen)
	mln = generate_model(args.gen, args.size[0], weights)
	msg_ok(f'Generated {args.gen} for size(s) {",".join(map(str, args.size))}')
	return mln, args.gen

def main(args, config_file):
	config = load_config(config_file)
	setup_logging(args.debug)

	mln, name = model_and_name(args, config)
	grid = args.grid or config['eval']['grid']
	mode = get_enum(ModeEnum, args.mode or config['eval']['mode'])
	workers = args.workers or config['eval']['workers']
	params = CompensationParams.from_config(config['compensation'])
	limits = SweepLimits(max_atoms=config['grounding']['max_ground_atoms'],
						max_vars=config['exact']['max_factor_vars'],
						max_brute_force_atoms=config['exact']['max_brute_force_atoms'])

	try:
		levels = len(grid) * len(args.size or [None])
		msg_info(f'Sweeping {levels} recovery level(s) on {name}...', end='', flush=True)
		rows = sweep(mln, args.size, grid, params, mode, limits, workers,
					timeout=config['eval']['row_timeout'], name=name)
		failed = sum(1 for row in rows if row.error)
		msg_ok(f'{len(rows)} row(s), {failed} failed')
	except Exception as e:
		msg_fail(str(e))
		raise

	write_sweep(rows, args.out)
