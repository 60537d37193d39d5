from rcrmln.rcr.compensation import DEFAULT_CLAMP, symmetric_kl
from rcrmln.util.errors import AtomSetMismatchError

def kl_metrics(approx, exact, query_atoms=None, eps=DEFAULT_CLAMP):
	"""
	Sum over @query_atoms of the symmetric KL divergence between the approximate
	and exact Bernoulli marginals; returns (total, {atom: divergence})
	"""
	if query_atoms is None:
		if approx.atoms() != exact.atoms():
			raise AtomSetMismatchError(f'approximate table has {len(approx.atoms())} atom(s), exact has {len(exact.atoms())}')
		query_atoms = exact.atoms()
	missing = [str(atom) for atom in query_atoms if atom not in approx or atom not in exact]
	if missing:
		raise AtomSetMismatchError(f'query atoms missing from a marginal table: {", ".join(sorted(missing)[:5])}')

	per_atom = {atom: symmetric_kl(approx[atom], exact[atom], eps) for atom in query_atoms}
	return sum(per_atom.values()), per_atom

def normalized_kl(raw, baseline) -> float:
	"""@raw as a percentage of the fully relaxed divergence @baseline."""
	if not baseline:
		return 0.0
	return 100.0 * raw / baseline
