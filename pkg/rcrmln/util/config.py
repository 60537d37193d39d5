import copy
import os

import yaml

DEFAULTS = {
	'grounding': {
		'max_ground_atoms': 1000000,
	},
	'exact': {
		'max_brute_force_atoms': 25,
		'max_factor_vars': 22,
	},
	'compensation': {
		'damping': 0.5,
		'tol': 1e-8,
		'max_iters': 1000,
		'schedule': 'seq',
		'clamp': 1e-12,
	},
	'recovery': {
		'batch': 1,
		'accumulated_residual': False,
		'check_equiprobability': False,
		'equiprobability_trials': 5,
	},
	'bp': {
		'max_iters': 1000,
		'tol': 1e-10,
		'damping': 0.5,
	},
	'eval': {
		'workers': 1,
		'row_timeout': 600,
		'grid': [0.0, 0.25, 0.5, 0.75, 1.0],
		'mode': 'lifted',
		'generators': {
			'smokers': {'cancer': 1.3, 'friends': 1.5},
			'smokers_drinkers': {'cancer': 1.3, 'friends': 1.5, 'drinks': 1.1, 'drinks_cancer': 0.8},
			'symmetric_smokers': {'cancer': 1.3, 'friends': 1.5, 'symmetry': 1.2},
		},
	},
}

def _merge(base, override):
	for key, val in override.items():
		if isinstance(val, dict) and isinstance(base.get(key), dict):
			_merge(base[key], val)
		else:
			base[key] = val
	return base

def find_config(config:str):
	if not os.path.exists(config):
		config = os.path.expanduser(os.path.join('~', f'{config}'))
	return config if os.path.exists(config) else None

def load_config(filename=None):
	"""Returns DEFAULTS overlaid with the YAML file at @filename (if any)."""
	config = copy.deepcopy(DEFAULTS)
	if not filename:
		return config
	try:
		with open(filename) as f:
			config_data = yaml.safe_load(f) or {}
		assert isinstance(config_data, dict), 'top level must be a mapping'
	except Exception as e:
		raise Exception(f'Failed to parse {filename}: {str(e)}')
	return _merge(config, config_data)
