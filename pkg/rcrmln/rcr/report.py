#!/usr/bin/env python

import json
import sys

from rcrmln.util.files import write_csv, write_json_lines, write_json_to_file

TRACE_HEADER = ['iter', 'eq_id', 'w', 'w_prime', 'delta', 'residual']

def marginals_report(result):
	recovered = result.recovered
	return {
		'converged': result.converged,
		'truncated': result.truncated,
		'marginals': result.marginals.to_json()['marginals'],
		'recovered': {
			'fraction': result.fraction,
			'count': len(recovered),
			'equivalences': [eq.to_json() for eq in recovered],
		},
	}

def trace_rows(traces):
	# iteration numbers run on across the compensation runs of one rcr call
	offset = 0
	for trace in traces:
		yield from trace.rows(offset)
		offset += trace.iterations

def write_report(data, filepath=None):
	if filepath:
		write_json_to_file(filepath, data, indent=4)
	else:
		json.dump(data, sys.stdout, indent=4, sort_keys=True)
		sys.stdout.write('\n')

def write_trace(traces, filepath):
	write_csv(filepath, TRACE_HEADER, trace_rows(traces))

def write_audit(audit, filepath):
	write_json_lines(filepath, [record.to_json() for record in audit])
