import math
from dataclasses import dataclass, field
from typing import Dict

@dataclass
class MarginalTable:
	marginals: Dict = field(default_factory=dict)
	log_z: float = float('nan')

	def __getitem__(self, atom) -> float:
		return self.marginals[atom]

	def __contains__(self, atom):
		return atom in self.marginals

	def atoms(self):
		return set(self.marginals)

	def restrict(self, atoms) -> 'MarginalTable':
		return MarginalTable({atom: self.marginals[atom] for atom in atoms}, self.log_z)

	def to_json(self):
		out = {str(atom): p for atom, p in self.marginals.items()}
		return {
			'logZ': self.log_z if math.isfinite(self.log_z) else str(self.log_z),
			'marginals': dict(sorted(out.items())),
		}
