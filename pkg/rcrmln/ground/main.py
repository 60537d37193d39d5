#!/usr/bin/env python

import json
import sys

from rcrmln.ground.grounding import dump_ground_model, ground, verify_disconnected
from rcrmln.mln.parser import parse_mln_file
from rcrmln.util.config import load_config
from rcrmln.util.console import msg_fail, msg_info, msg_ok, setup_logging
from rcrmln.util.files import write_to_file
from rcrmln.util.formatting import format_count

def load_model(filename):
	try:
		msg_info(f'Parsing {filename}...', end='', flush=True)
		mln = parse_mln_file(filename)
		msg_ok(f'{len(mln.formulas)} formula(s), {len(mln.evidence)} evidence literal(s)')
		return mln
	except Exception as e:
		msg_fail(str(e))
		raise

def ground_model(mln, config):
	try:
		msg_info('Grounding...', end='', flush=True)
		gm = ground(mln, config['grounding']['max_ground_atoms'])
		msg_ok(f'{format_count(len(gm.atoms), "atom")}, {format_count(len(gm.formulas), "formula")}')
		return gm
	except Exception as e:
		msg_fail(str(e))
		raise

def emit(text, filepath=None):
	if filepath:
		write_to_file(filepath, text)
	else:
		sys.stdout.write(text)

def main(args, config_file):
	config = load_config(config_file)
	setup_logging(args.debug)

	mln = load_model(args.model)
	gm = ground_model(mln, config)

	if args.dump:
		emit(dump_ground_model(gm), args.out)
		return

	report = verify_disconnected(gm)
	summary = {
		'atoms': len(gm.atoms),
		'formulas': len(gm.formulas),
		'disconnected': report.disconnected,
	}
	if not report:
		summary['shared_atom'] = str(report.atom)
		summary['shared_by'] = [str(f) for f in report.formulas]
	emit(json.dumps(summary, indent=4, sort_keys=True) + '\n', args.out)
