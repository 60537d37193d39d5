#!/usr/bin/env python

"""
Quantifier-free propositional structure of weighted formulas.

Leaves are atoms (first-order or ground). Evaluation consumes one truth value
per atom occurrence, left to right, so the same body can be evaluated on a
world (value per distinct atom) or per occurrence (BP ports). Values may be
Python bools or numpy boolean arrays.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Any, Tuple

import numpy as np

class Formula:
	precedence = 0

	def occurrences(self) -> list:
		raise NotImplementedError

	def evaluate(self, values):
		raise NotImplementedError

	def map_atoms(self, fn) -> 'Formula':
		raise NotImplementedError

	def holds(self, lookup) -> bool:
		"""Truth value under @lookup, a mapping from atom to bool."""
		return bool(self.evaluate(iter([lookup[atom] for atom in self.occurrences()])))

	def atoms(self) -> list:
		"""Distinct atoms in order of first occurrence."""
		seen = {}
		for atom in self.occurrences():
			seen.setdefault(atom, None)
		return list(seen)

	def _wrap(self, child, strict=False):
		text = str(child)
		if child.precedence < self.precedence or (strict and child.precedence == self.precedence):
			return f'({text})'
		return text

@dataclass(frozen=True)
class AtomNode(Formula):
	atom: Any
	precedence = 6

	def occurrences(self):
		return [self.atom]

	def evaluate(self, values):
		return next(values)

	def map_atoms(self, fn):
		return AtomNode(fn(self.atom))

	def __str__(self):
		return str(self.atom)

@dataclass(frozen=True)
class Not(Formula):
	child: Formula
	precedence = 5

	def occurrences(self):
		return self.child.occurrences()

	def evaluate(self, values):
		return np.logical_not(self.child.evaluate(values))

	def map_atoms(self, fn):
		return Not(self.child.map_atoms(fn))

	def __str__(self):
		return '!' + self._wrap(self.child)

@dataclass(frozen=True)
class _Nary(Formula):
	children: Tuple[Formula, ...]
	symbol = None
	op = None

	def occurrences(self):
		return [atom for child in self.children for atom in child.occurrences()]

	def evaluate(self, values):
		# evaluate every child so the occurrence stream stays aligned
		return reduce(self.op, [child.evaluate(values) for child in self.children])

	def map_atoms(self, fn):
		return type(self)(tuple(child.map_atoms(fn) for child in self.children))

	def __str__(self):
		return f' {self.symbol} '.join(self._wrap(child, strict=True) for child in self.children)

class And(_Nary):
	precedence = 4
	symbol = '^'
	op = staticmethod(np.logical_and)

class Or(_Nary):
	precedence = 3
	symbol = 'v'
	op = staticmethod(np.logical_or)

@dataclass(frozen=True)
class Implies(Formula):
	left: Formula
	right: Formula
	precedence = 2

	def occurrences(self):
		return self.left.occurrences() + self.right.occurrences()

	def evaluate(self, values):
		left = self.left.evaluate(values)
		right = self.right.evaluate(values)
		return np.logical_or(np.logical_not(left), right)

	def map_atoms(self, fn):
		left = self.left.map_atoms(fn)
		return Implies(left, self.right.map_atoms(fn))

	def __str__(self):
		return f'{self._wrap(self.left, strict=True)} => {self._wrap(self.right)}'

@dataclass(frozen=True)
class Iff(Formula):
	left: Formula
	right: Formula
	precedence = 1

	def occurrences(self):
		return self.left.occurrences() + self.right.occurrences()

	def evaluate(self, values):
		left = self.left.evaluate(values)
		right = self.right.evaluate(values)
		return np.equal(left, right)

	def map_atoms(self, fn):
		left = self.left.map_atoms(fn)
		return Iff(left, self.right.map_atoms(fn))

	def __str__(self):
		return f'{self._wrap(self.left)} <=> {self._wrap(self.right, strict=True)}'
