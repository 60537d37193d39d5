#!/usr/bin/env python

"""
Line-oriented MLN text format:

	domain Person = 10            // or: domain Person = {a, b, c}
	predicate friends(Person, Person)
	1.5  smokes(X) ^ friends(X,Y) => smokes(Y)
	hard friends(X,X)
	1.2  X != Y, friends(X,Y) => friends(Y,X)
	evidence !friends(a,b)
"""

import logging
import string
from itertools import count

import pyparsing as pp

from rcrmln.mln.constraint import Comparison, Constraint
from rcrmln.mln.formula import AtomNode, Not, And, Or, Implies, Iff
from rcrmln.mln.model import Atom, Constant, DomainDecl, EvidenceLiteral, LogVar, Mln
from rcrmln.mln.model import PredicateDecl, PredicateId, WeightedFormula
from rcrmln.util.enum_util import HARD
from rcrmln.util.errors import MlnParseError
from rcrmln.util.files import read_file

pp.ParserElement.enable_packrat()

class _RawAtom:
	def __init__(self, name, args, col):
		self.name = name
		self.args = args
		self.col = col

class _RawComparison:
	def __init__(self, left, op, right, col):
		self.left = left
		self.equal = op == '='
		self.right = right
		self.col = col

def _is_var(token:str) -> bool:
	return token[:1].isupper()

#############################
# Grammar
#############################
LPAR, RPAR, LBRACE, RBRACE, COMMA = map(pp.Suppress, '(){},')
IDENT = pp.Regex(r'[A-Za-z][A-Za-z0-9_]*')
VAR = pp.Regex(r'[A-Z][A-Za-z0-9_]*')
CONST = pp.Regex(r'[a-z0-9][A-Za-z0-9_]*')
OR_OP = pp.Keyword('v')
PRED = ~OR_OP + pp.Regex(r'[a-z][A-Za-z0-9_]*')
TERM = VAR | CONST

def _make_atom(s, loc, toks):
	args = list(toks[1]) if len(toks) > 1 else []
	return AtomNode(_RawAtom(toks[0], args, pp.col(loc, s)))

def _make_not(toks):
	items = list(toks[0])
	node = items[-1]
	for _ in items[:-1]:
		node = Not(node)
	return node

def _make_nary(cls):
	def action(toks):
		return cls(tuple(list(toks[0])[0::2]))
	return action

def _make_implies(toks):
	operands = list(toks[0])[0::2]
	node = operands[-1]
	for left in reversed(operands[:-1]):
		node = Implies(left, node)
	return node

def _make_iff(toks):
	operands = list(toks[0])[0::2]
	node = operands[0]
	for right in operands[1:]:
		node = Iff(node, right)
	return node

def _make_comparison(s, loc, toks):
	return _RawComparison(toks[0], toks[1], toks[2], pp.col(loc, s))

ATOM = (PRED + pp.Optional(LPAR + pp.Group(pp.Optional(TERM + pp.ZeroOrMore(COMMA + TERM))) + RPAR))
ATOM.set_parse_action(_make_atom)

BODY = pp.infix_notation(ATOM, [
	(pp.Literal('!'), 1, pp.OpAssoc.RIGHT, _make_not),
	(pp.Literal('^'), 2, pp.OpAssoc.LEFT, _make_nary(And)),
	(OR_OP, 2, pp.OpAssoc.LEFT, _make_nary(Or)),
	(pp.Literal('=>'), 2, pp.OpAssoc.RIGHT, _make_implies),
	(pp.Literal('<=>'), 2, pp.OpAssoc.LEFT, _make_iff),
])

COMPARISON = (TERM + pp.one_of('= !=') + TERM + COMMA).set_parse_action(_make_comparison)
WEIGHT = pp.CaselessKeyword('hard') | pp.Regex(r'[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?')
FORMULA_LINE = WEIGHT + pp.Group(pp.ZeroOrMore(COMPARISON)) + BODY

DOMAIN_LINE = (pp.Keyword('domain') + IDENT + pp.Suppress('=') +
			(pp.Regex(r'\d+') | pp.Group(LBRACE + pp.Optional(CONST + pp.ZeroOrMore(COMMA + CONST)) + RBRACE)))
PREDICATE_LINE = (pp.Keyword('predicate') + PRED +
			pp.Optional(LPAR + pp.Group(pp.Optional(IDENT + pp.ZeroOrMore(COMMA + IDENT))) + RPAR))
EVIDENCE_LINE = pp.Keyword('evidence') + pp.Optional(pp.Literal('!')) + ATOM

GRAMMARS = {
	'domain': DOMAIN_LINE,
	'predicate': PREDICATE_LINE,
	'evidence': EVIDENCE_LINE,
}

#############################
# Model construction
#############################
class _Builder:
	def __init__(self):
		self.domains = {}
		self.predicates = {}
		self.formulas = []
		self.evidence = []
		self.mentions = {}

	def add_domain(self, toks, lineno):
		name = toks[1]
		if name in self.domains:
			raise MlnParseError(f'domain {name} declared twice', lineno, 1)
		if isinstance(toks[2], str):
			size, explicit = int(toks[2]), None
		else:
			explicit = list(toks[2])
			size = len(explicit)
			if len(set(explicit)) != size:
				raise MlnParseError(f'domain {name} lists a constant twice', lineno, 1)
		if size < 1:
			raise MlnParseError(f'domain {name} must not be empty', lineno, 1)
		self.domains[name] = (size, explicit, lineno)

	def add_predicate(self, toks, lineno):
		name = toks[1]
		if name in self.predicates:
			raise MlnParseError(f'predicate {name} declared twice', lineno, 1)
		domains = tuple(toks[2]) if len(toks) > 2 else ()
		self.predicates[name] = (domains, lineno)

	def _mention(self, domain, const, lineno):
		self.mentions.setdefault(domain, {}).setdefault(const, lineno)

	def _declared(self, raw, lineno):
		if raw.name not in self.predicates:
			raise MlnParseError(f'undeclared predicate {raw.name}', lineno, raw.col)
		domains, _ = self.predicates[raw.name]
		if len(raw.args) != len(domains):
			raise MlnParseError(f'{raw.name} expects {len(domains)} argument(s), got {len(raw.args)}', lineno, raw.col)
		return domains

	def type_body(self, body, lineno):
		var_domains = {}

		def type_atom(raw):
			domains = self._declared(raw, lineno)
			terms = []
			for arg, domain in zip(raw.args, domains):
				if _is_var(arg):
					prev = var_domains.setdefault(arg, domain)
					if prev != domain:
						raise MlnParseError(f'variable {arg} used as both {prev} and {domain}', lineno, raw.col)
					terms.append(LogVar(arg, domain))
				else:
					self._mention(domain, arg, lineno)
					terms.append(Constant(arg))
			return Atom(PredicateId(raw.name), tuple(terms))

		return body.map_atoms(type_atom), var_domains

	def type_constraint(self, comparisons, var_domains, lineno):
		conjuncts = []
		for raw in comparisons:
			sides = []
			for token in (raw.left, raw.right):
				if not _is_var(token):
					sides.append(token)
				elif token not in var_domains:
					raise MlnParseError(f'variable {token} does not occur in the formula', lineno, raw.col)
				else:
					sides.append(LogVar(token, var_domains[token]))
			variables = [s for s in sides if isinstance(s, LogVar)]
			if not variables:
				raise MlnParseError('comparison needs a logical variable', lineno, raw.col)
			if len(variables) == 2 and variables[0].domain != variables[1].domain:
				raise MlnParseError(f'cannot compare {variables[0].domain} with {variables[1].domain}', lineno, raw.col)
			if len(variables) == 1:
				const = sides[0] if isinstance(sides[1], LogVar) else sides[1]
				self._mention(variables[0].domain, const, lineno)
				sides = [variables[0], Constant(const)]
			conjuncts.append(Comparison.make(sides[0], sides[1], raw.equal))
		return Constraint(frozenset(conjuncts))

	def add_formula(self, toks, lineno):
		weight = HARD if toks[0].lower() == 'hard' else float(toks[0])
		body, var_domains = self.type_body(toks[2], lineno)
		constraint = self.type_constraint(list(toks[1]), var_domains, lineno)
		self.formulas.append(WeightedFormula(len(self.formulas) + 1, weight, constraint, body))

	def add_evidence(self, toks, lineno):
		positive = len(toks) == 2
		node = toks[-1]
		if any(_is_var(arg) for arg in node.atom.args):
			raise MlnParseError(f'evidence {node.atom.name} must be ground', lineno, node.atom.col)
		typed, _ = self.type_body(node, lineno)
		self.evidence.append(EvidenceLiteral(typed.atom, positive))

	def _check_domains(self):
		for name, (domains, lineno) in self.predicates.items():
			for domain in domains:
				if domain not in self.domains:
					raise MlnParseError(f'undeclared domain {domain}', lineno, 1)

	def build(self) -> Mln:
		domains = []
		for name, (size, explicit, lineno) in self.domains.items():
			mentioned = self.mentions.get(name, {})
			if explicit is not None:
				for const, at in mentioned.items():
					if const not in explicit:
						raise MlnParseError(f'constant {const} is not in domain {name}', at, 1)
				domains.append(DomainDecl(name, tuple(explicit)))
			else:
				if len(mentioned) > size:
					raise MlnParseError(f'domain {name} has size {size} but {len(mentioned)} constants are mentioned', lineno, 1)
				taken = list(mentioned)
				domains.append(DomainDecl(name, tuple(taken + _fillers(name, size, taken)), sized=True))
		predicates = tuple(PredicateDecl(name, doms) for name, (doms, _) in self.predicates.items())
		return Mln(tuple(domains), predicates, tuple(self.formulas), tuple(self.evidence))

def _fillers(name, size, taken):
	if size <= len(string.ascii_lowercase):
		pool = iter(string.ascii_lowercase)
	else:
		pool = (f'{name.lower()}{i}' for i in count(1))
	out = []
	taken = set(taken)
	while len(taken) + len(out) < size:
		const = next(pool)
		if const not in taken:
			out.append(const)
	return out

def parse_mln(text:str) -> Mln:
	statements = []
	for lineno, line in enumerate(text.splitlines(), start=1):
		line = line.split('//', 1)[0]
		if not line.strip():
			continue
		keyword = line.split()[0]
		grammar = GRAMMARS.get(keyword, FORMULA_LINE)
		try:
			toks = grammar.parse_string(line, parse_all=True)
		except pp.ParseBaseException as e:
			raise MlnParseError(f'syntax error: {e.msg}', lineno, e.col)
		statements.append((keyword if keyword in GRAMMARS else 'formula', toks, lineno))

	# declarations first, so their position in the file does not matter
	builder = _Builder()
	for kind, toks, lineno in statements:
		if kind == 'domain':
			builder.add_domain(toks, lineno)
		elif kind == 'predicate':
			builder.add_predicate(toks, lineno)
	builder._check_domains()
	# formulas before evidence: sized domains list constants in this mention order
	for kind in ('formula', 'evidence'):
		add = builder.add_formula if kind == 'formula' else builder.add_evidence
		for stmt_kind, toks, lineno in statements:
			if stmt_kind == kind:
				add(toks, lineno)

	mln = builder.build()
	logging.debug(f'parsed {len(mln.formulas)} formula(s), {len(mln.evidence)} evidence literal(s)')
	return mln

def to_text(mln:Mln, domain_lines=None) -> str:
	lines = list(domain_lines) if domain_lines else [str(d) for d in mln.domains]
	lines += [str(p) for p in mln.predicates]
	lines += [str(f) for f in mln.formulas]
	lines += [str(e) for e in mln.evidence]
	return '\n'.join(lines) + '\n'

def parse_mln_file(filename:str) -> Mln:
	return parse_mln(read_file(filename))

def resize(mln:Mln, size:int) -> Mln:
	"""@mln with every sized domain redeclared to hold @size constants."""
	if size < 1:
		raise ValueError(f'domain size must be positive, got {size}')
	if not any(d.sized for d in mln.domains):
		raise ValueError('model has no sized domain (domain D = N) to resize')
	lines = [f'domain {d.name} = {size}' if d.sized else str(d) for d in mln.domains]
	return parse_mln(to_text(mln, lines))
