#!/usr/bin/env python

from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Optional, Tuple, Union

from rcrmln.util.enum_util import Hard, HARD

@dataclass(frozen=True)
class LogVar:
	name: str
	domain: Optional[str] = None

	def __str__(self):
		return self.name

@dataclass(frozen=True)
class Constant:
	name: str

	def __str__(self):
		return self.name

Term = Union[LogVar, Constant]
Weight = Union[float, Hard]

def is_hard(weight) -> bool:
	return weight is HARD or isinstance(weight, Hard)

@dataclass(frozen=True)
class CloneTag:
	formula_id: int
	occurrence: str
	signature: Tuple[LogVar, ...]

	def __str__(self):
		return f'{self.formula_id}{self.occurrence}<{",".join(v.name for v in self.signature)}>'

@dataclass(frozen=True)
class PredicateId:
	name: str
	tag: Optional[CloneTag] = None

	def is_clone(self) -> bool:
		return self.tag is not None

	def __str__(self):
		if self.tag is None:
			return self.name
		return f'{self.name}_{self.tag}'

@dataclass(frozen=True)
class Atom:
	predicate: PredicateId
	args: Tuple[Term, ...] = ()

	def variables(self) -> Tuple[LogVar, ...]:
		"""Logical variables the atom ranges over; a clone ranges over its formula's signature."""
		if self.predicate.is_clone():
			return self.predicate.tag.signature
		seen = {}
		for arg in self.args:
			if isinstance(arg, LogVar):
				seen.setdefault(arg, None)
		return tuple(seen)

	def constants(self):
		return {arg for arg in self.args if isinstance(arg, Constant)}

	def is_ground(self) -> bool:
		return not any(isinstance(arg, LogVar) for arg in self.args)

	def __str__(self):
		if not self.args:
			return str(self.predicate)
		return f'{self.predicate}({",".join(str(a) for a in self.args)})'

@dataclass(frozen=True)
class DomainDecl:
	name: str
	constants: Tuple[str, ...]
	sized: bool = False  # declared as `domain D = N`

	@property
	def size(self) -> int:
		return len(self.constants)

	def __str__(self):
		if self.sized:
			return f'domain {self.name} = {self.size}'
		return f'domain {self.name} = {{{", ".join(self.constants)}}}'

@dataclass(frozen=True)
class PredicateDecl:
	name: str
	domains: Tuple[str, ...] = ()

	@property
	def arity(self) -> int:
		return len(self.domains)

	def __str__(self):
		if not self.domains:
			return f'predicate {self.name}'
		return f'predicate {self.name}({", ".join(self.domains)})'

@dataclass(frozen=True)
class EvidenceLiteral:
	atom: Atom
	positive: bool = True

	def __str__(self):
		return f'evidence {"" if self.positive else "!"}{self.atom}'

@dataclass(frozen=True)
class WeightedFormula:
	id: int
	weight: Weight
	constraint: Any  # Constraint
	body: Any  # Formula

	def is_hard(self) -> bool:
		return is_hard(self.weight)

	def variables(self) -> Tuple[LogVar, ...]:
		"""Formula variables in order of first appearance."""
		seen = {}
		for atom in self.body.occurrences():
			for arg in atom.args:
				if isinstance(arg, LogVar):
					seen.setdefault(arg, None)
		for var in sorted(self.constraint.variables(), key=lambda v: v.name):
			seen.setdefault(var, None)
		return tuple(seen)

	def __str__(self):
		from rcrmln.util.formatting import format_weight
		prefix = f'{self.constraint}, ' if not self.constraint.is_trivial() else ''
		return f'{format_weight(self.weight)} {prefix}{self.body}'

@dataclass(frozen=True)
class Mln:
	domains: Tuple[DomainDecl, ...] = ()
	predicates: Tuple[PredicateDecl, ...] = ()
	formulas: Tuple[WeightedFormula, ...] = ()
	evidence: Tuple[EvidenceLiteral, ...] = ()

	def domain_map(self) -> Dict[str, Tuple[str, ...]]:
		return {d.name: d.constants for d in self.domains}

	def predicate(self, name:str) -> PredicateDecl:
		for decl in self.predicates:
			if decl.name == name:
				return decl
		raise KeyError(name)

	def formula(self, formula_id:int) -> WeightedFormula:
		for f in self.formulas:
			if f.id == formula_id:
				return f
		raise KeyError(formula_id)

def constants_of(mln:Mln):
	"""Constants mentioned explicitly in formulas, constraints and evidence."""
	found = set()
	for f in mln.formulas:
		for atom in f.body.occurrences():
			found |= atom.constants()
		found |= f.constraint.constants()
	for literal in mln.evidence:
		found |= literal.atom.constants()
	return frozenset(found)

def constants_by_domain(mln:Mln) -> Dict[str, FrozenSet[Constant]]:
	"""constants_of, keyed by the domain of the argument or variable each constant is compared with."""
	found = {}
	atoms = [atom for f in mln.formulas for atom in f.body.occurrences()] + [lit.atom for lit in mln.evidence]
	for atom in atoms:
		decl = mln.predicate(atom.predicate.name)
		for domain, arg in zip(decl.domains, atom.args):
			if isinstance(arg, Constant):
				found.setdefault(domain, set()).add(arg)
	for f in mln.formulas:
		for c in f.constraint.conjuncts:
			if not c.is_var_var():
				found.setdefault(c.left.domain, set()).add(c.right)
	return {domain: frozenset(ks) for domain, ks in found.items()}
