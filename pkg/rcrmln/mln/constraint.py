from dataclasses import dataclass, field
from itertools import product
from typing import FrozenSet, Mapping, Sequence, Union

from rcrmln.mln.model import Constant, LogVar

@dataclass(frozen=True)
class Comparison:
	"""Atomic (in)equality; left is always a variable."""
	left: LogVar
	right: Union[LogVar, Constant]
	equal: bool

	@staticmethod
	def make(left, right, equal:bool) -> 'Comparison':
		if isinstance(left, Constant):
			left, right = right, left
		assert isinstance(left, LogVar), 'comparison needs a logical variable'
		if isinstance(right, LogVar) and right.name < left.name:
			left, right = right, left
		return Comparison(left, right, equal)

	def is_var_var(self) -> bool:
		return isinstance(self.right, LogVar)

	def variables(self):
		if self.is_var_var():
			return {self.left, self.right}
		return {self.left}

	def holds(self, subst:Mapping[str, str]) -> bool:
		left = subst[self.left.name]
		right = subst[self.right.name] if self.is_var_var() else self.right.name
		return (left == right) == self.equal

	def sort_key(self):
		return (self.is_var_var(), self.left.name, self.right.name, not self.equal)

	def __str__(self):
		return f'{self.left} {"=" if self.equal else "!="} {self.right}'

@dataclass(frozen=True)
class Constraint:
	conjuncts: FrozenSet[Comparison] = field(default_factory=frozenset)

	@staticmethod
	def of(*comparisons) -> 'Constraint':
		return Constraint(frozenset(comparisons))

	def is_trivial(self) -> bool:
		return not self.conjuncts

	def variables(self):
		out = set()
		for comparison in self.conjuncts:
			out |= comparison.variables()
		return out

	def constants(self):
		return {c.right for c in self.conjuncts if not c.is_var_var()}

	def holds(self, subst:Mapping[str, str]) -> bool:
		return all(c.holds(subst) for c in self.conjuncts)

	def conjoin(self, other:'Constraint') -> 'Constraint':
		return Constraint(self.conjuncts | other.conjuncts)

	def sorted(self):
		return sorted(self.conjuncts, key=Comparison.sort_key)

	def __str__(self):
		return ', '.join(str(c) for c in self.sorted())

TRUE = Constraint()

def solutions(constraint:Constraint, variables:Sequence[LogVar], domains:Mapping[str, Sequence[str]]):
	"""
	All substitutions (var name -> constant) of @variables satisfying @constraint,
	lexicographic in declared constant order
	"""
	names = [v.name for v in variables]
	missing = sorted(v.name for v in constraint.variables() if v.name not in names)
	if missing:
		raise ValueError(f'constraint variables {missing} not in {names}')

	# index-based checks avoid building a dict per rejected tuple
	index = {name: i for i, name in enumerate(names)}
	checks = []
	for c in constraint.conjuncts:
		if c.is_var_var():
			checks.append((index[c.left.name], index[c.right.name], None, c.equal))
		else:
			checks.append((index[c.left.name], None, c.right.name, c.equal))

	out = []
	for values in product(*(domains[v.domain] for v in variables)):
		ok = True
		for i, j, const, equal in checks:
			other = values[j] if j is not None else const
			if (values[i] == other) != equal:
				ok = False
				break
		if ok:
			out.append(dict(zip(names, values)))
	return out

def count_solutions(constraint:Constraint, variables:Sequence[LogVar], domains) -> int:
	return len(solutions(constraint, variables, domains))

def implies(stronger:Constraint, weaker:Constraint, variables:Sequence[LogVar], domains) -> bool:
	"""Decides stronger => weaker by enumerating the solutions of @stronger over @variables."""
	return all(weaker.holds(subst) for subst in solutions(stronger, variables, domains))
