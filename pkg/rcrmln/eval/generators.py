#!/usr/bin/env python

"""
Benchmark model generators.

smokers is the classic two-formula model. smokers_drinkers and
symmetric_smokers are representative variants (a drinking rule, a friendship
symmetry rule) with configurable weights; they are not reproductions of any
published benchmark definition.
"""

from rcrmln.mln.model import Mln
from rcrmln.mln.parser import parse_mln
from rcrmln.util.config import DEFAULTS
from rcrmln.util.enum_util import GeneratorEnum, get_enum
from rcrmln.util.errors import UnknownGeneratorError

SMOKERS = """\
domain Person = {size}
predicate smokes(Person)
predicate cancer(Person)
predicate friends(Person, Person)
{cancer} smokes(X) => cancer(X)
{friends} smokes(X) ^ friends(X,Y) => smokes(Y)
"""

DRINKERS = """\
predicate drinks(Person)
{drinks} drinks(X) ^ friends(X,Y) => drinks(Y)
{drinks_cancer} drinks(X) => cancer(X)
"""

SYMMETRY = """\
{symmetry} X != Y, friends(X,Y) => friends(Y,X)
"""

TEMPLATES = {
	GeneratorEnum.smokers: SMOKERS,
	GeneratorEnum.smokers_drinkers: SMOKERS + DRINKERS,
	GeneratorEnum.symmetric_smokers: SMOKERS + SYMMETRY,
}

def _size(sizes) -> int:
	if isinstance(sizes, (list, tuple)):
		if len(sizes) != 1:
			raise ValueError(f'expected one domain size, got {len(sizes)}')
		sizes = sizes[0]
	size = int(sizes)
	if size < 1:
		raise ValueError(f'domain size must be positive, got {size}')
	return size

def generate_text(name, sizes, weights=None) -> str:
	try:
		generator = get_enum(GeneratorEnum, name)
	except ValueError:
		raise UnknownGeneratorError(f'unknown generator {name} (expected one of: {", ".join(g.value for g in GeneratorEnum)})')
	values = dict(DEFAULTS['eval']['generators'][generator.value])
	values.update(weights or {})
	return TEMPLATES[generator].format(size=_size(sizes), **values)

def generate_model(name, sizes, weights=None) -> Mln:
	return parse_mln(generate_text(name, sizes, weights))
