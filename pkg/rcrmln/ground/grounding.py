#!/usr/bin/env python

import logging
from string import ascii_lowercase
from dataclasses import dataclass
from typing import Any, Optional, Tuple

from rcrmln.mln.constraint import solutions
from rcrmln.mln.formula import AtomNode, Not
from rcrmln.mln.model import Atom, CloneTag, LogVar, Mln, PredicateId, is_hard
from rcrmln.util.enum_util import HARD
from rcrmln.util.errors import CapacityError
from rcrmln.util.formatting import format_count, format_weight

DEFAULT_MAX_GROUND_ATOMS = 10**6

@dataclass(frozen=True)
class GroundAtom:
	predicate: PredicateId
	args: Tuple[str, ...] = ()
	tag_args: Tuple[str, ...] = ()  # constants bound to a clone's signature

	def is_clone(self) -> bool:
		return self.predicate.is_clone()

	def __str__(self):
		name = self.predicate.name
		if self.predicate.tag is not None:
			tag = self.predicate.tag
			name = f'{name}_{tag.formula_id}{tag.occurrence}<{",".join(self.tag_args)}>'
		if not self.args:
			return name
		return f'{name}({",".join(self.args)})'

def ground_atom(atom:Atom, subst) -> GroundAtom:
	args = tuple(subst[arg.name] if isinstance(arg, LogVar) else arg.name for arg in atom.args)
	tag_args = ()
	if atom.predicate.is_clone():
		tag_args = tuple(subst[v.name] for v in atom.predicate.tag.signature)
	return GroundAtom(atom.predicate, args, tag_args)

@dataclass(frozen=True)
class Provenance:
	kind: str  # formula | evidence | compensation | equivalence
	ref: int  # formula id, evidence index or equivalence id
	substitution: Tuple[Tuple[str, str], ...] = ()
	role: Optional[str] = None  # original | clone for compensation units

	def subst(self):
		return dict(self.substitution)

@dataclass(frozen=True)
class GroundFormula:
	weight: Any
	body: Any
	source: Provenance

	def is_hard(self) -> bool:
		return is_hard(self.weight)

	def __str__(self):
		return f'{format_weight(self.weight)} {self.body}'

class GroundModel:
	"""Ground formulas over an indexed atom set."""
	def __init__(self, atoms, formulas):
		self.__atoms = tuple(atoms)
		self.__formulas = tuple(formulas)
		self.__index = {atom: i for i, atom in enumerate(self.__atoms)}

	@property
	def atoms(self):
		return self.__atoms

	@property
	def formulas(self):
		return self.__formulas

	def index(self, atom) -> int:
		return self.__index[atom]

	def __contains__(self, atom):
		return atom in self.__index

	def __len__(self):
		return len(self.__atoms)

	def originals(self):
		return [atom for atom in self.__atoms if not atom.is_clone()]

class GroundModelBuilder:
	def __init__(self, max_atoms=DEFAULT_MAX_GROUND_ATOMS):
		self.max_atoms = max_atoms
		self.atoms = {}
		self.formulas = []

	def atom(self, atom:GroundAtom) -> int:
		if atom not in self.atoms:
			if len(self.atoms) >= self.max_atoms:
				raise CapacityError(f'ground model exceeds {format_count(self.max_atoms, "atom")}')
			self.atoms[atom] = len(self.atoms)
		return self.atoms[atom]

	def add(self, weight, body, source:Provenance):
		for atom in body.occurrences():
			self.atom(atom)
		self.formulas.append(GroundFormula(weight, body, source))

	def build(self) -> GroundModel:
		return GroundModel(list(self.atoms), self.formulas)

def ground_formulas(builder, formulas, domains):
	for f in formulas:
		variables = f.variables()
		for subst in solutions(f.constraint, variables, domains):
			body = f.body.map_atoms(lambda atom: ground_atom(atom, subst))
			key = tuple((v.name, subst[v.name]) for v in variables)
			builder.add(f.weight, body, Provenance('formula', f.id, key))

def ground_evidence(builder, evidence):
	for i, literal in enumerate(evidence):
		node = AtomNode(ground_atom(literal.atom, {}))
		builder.add(HARD, node if literal.positive else Not(node), Provenance('evidence', i))

def ground(mln:Mln, max_atoms=DEFAULT_MAX_GROUND_ATOMS) -> GroundModel:
	builder = GroundModelBuilder(max_atoms)
	domains = mln.domain_map()
	ground_formulas(builder, mln.formulas, domains)
	ground_evidence(builder, mln.evidence)
	gm = builder.build()
	logging.debug(f'grounded {len(gm.formulas)} formula(s) over {len(gm.atoms)} atom(s)')
	return gm

def weight_of_world(gm:GroundModel, world) -> float:
	"""Log-weight of @world (mapping GroundAtom -> bool); -inf if a hard formula is violated."""
	missing = [str(atom) for atom in gm.atoms if atom not in world]
	if missing:
		raise ValueError(f'world does not assign {", ".join(missing[:5])}')
	total = 0.0
	for f in gm.formulas:
		satisfied = f.body.holds(world)
		if f.is_hard():
			if not satisfied:
				return float('-inf')
		elif satisfied:
			total += f.weight
	return total

@dataclass(frozen=True)
class DisconnectionReport:
	disconnected: bool
	atom: Optional[GroundAtom] = None
	formulas: Tuple[GroundFormula, ...] = ()

	def __bool__(self):
		return self.disconnected

def verify_disconnected(gm:GroundModel) -> DisconnectionReport:
	owner = {}
	for f in gm.formulas:
		for atom in f.body.atoms():
			if atom in owner:
				return DisconnectionReport(False, atom, (owner[atom], f))
			owner[atom] = f
	return DisconnectionReport(True)

def ground_clones(gm:GroundModel, mln:Mln) -> GroundModel:
	"""Clones every atom occurrence of the formula groundings of @gm in place."""
	builder = GroundModelBuilder(max(len(gm.atoms) * 4, DEFAULT_MAX_GROUND_ATOMS))
	for f in gm.formulas:
		if f.source.kind != 'formula':
			builder.add(f.weight, f.body, f.source)
			continue
		source = mln.formula(f.source.ref)
		signature = source.variables()
		subst = f.source.subst()
		tag_args = tuple(subst[v.name] for v in signature)
		labels = iter(occurrence_labels(f.body.occurrences()))

		def clone(atom):
			tag = CloneTag(source.id, next(labels), signature)
			return GroundAtom(PredicateId(atom.predicate.name, tag), atom.args, tag_args)

		builder.add(f.weight, f.body.map_atoms(clone), f.source)
	return builder.build()

def occurrence_letters():
	for letter in ascii_lowercase:
		yield letter
	i = 27
	while True:
		yield f'z{i}'
		i += 1

def occurrence_labels(atoms):
	"""
	Occurrence letter of each atom in @atoms: a, b, ... left to right, counted
	per predicate, so smokes(X) => cancer(X) labels both occurrences a
	(smokes_1a, cancer_1a) and only a repeated predicate reaches b
	"""
	counters = {}
	return [next(counters.setdefault(atom.predicate.name, occurrence_letters())) for atom in atoms]

def dump_ground_model(gm:GroundModel) -> str:
	lines = [f'// {len(gm.atoms)} ground atom(s), {len(gm.formulas)} ground formula(s)']
	lines += [str(f) for f in gm.formulas]
	return '\n'.join(lines) + '\n'
