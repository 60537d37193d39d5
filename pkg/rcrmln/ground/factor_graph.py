from dataclasses import dataclass, field
from itertools import product
from typing import Tuple

import networkx as nx
import numpy as np

from rcrmln.ground.grounding import GroundModel

NEG_INF = float('-inf')

@dataclass(frozen=True, eq=False)
class Factor:
	"""Log-space table; axis i is scope[i], scope sorted ascending."""
	scope: Tuple[int, ...]
	table: np.ndarray = field(repr=False)

	@staticmethod
	def unit(var:int, weight:float) -> 'Factor':
		return Factor((var,), np.array([0.0, weight]))

def formula_table(weight, body, scope_atoms, hard:bool):
	"""Log table over @scope_atoms (in order) for one ground formula."""
	table = np.empty((2,) * len(scope_atoms))
	for bits in product((0, 1), repeat=len(scope_atoms)):
		world = {atom: bool(b) for atom, b in zip(scope_atoms, bits)}
		satisfied = body.holds(world)
		if hard:
			table[bits] = 0.0 if satisfied else NEG_INF
		else:
			table[bits] = weight if satisfied else 0.0
	return table

class FactorGraph:
	def __init__(self, variables, factors):
		self.variables = tuple(variables)
		self.factors = tuple(factors)

	@classmethod
	def from_ground_model(cls, gm:GroundModel) -> 'FactorGraph':
		factors = []
		for f in gm.formulas:
			scope_atoms = sorted(f.body.atoms(), key=gm.index)
			scope = tuple(gm.index(atom) for atom in scope_atoms)
			factors.append(Factor(scope, formula_table(f.weight, f.body, scope_atoms, f.is_hard())))
		return cls(gm.atoms, factors)

	def with_factors(self, extra) -> 'FactorGraph':
		return FactorGraph(self.variables, self.factors + tuple(extra))

	def interaction_graph(self) -> nx.Graph:
		graph = nx.Graph()
		graph.add_nodes_from(range(len(self.variables)))
		for factor in self.factors:
			scope = factor.scope
			for i, u in enumerate(scope):
				for v in scope[i + 1:]:
					graph.add_edge(u, v)
		return graph

	def components(self):
		"""Connected components as sorted variable lists, ordered by smallest member."""
		graph = self.interaction_graph()
		return sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
