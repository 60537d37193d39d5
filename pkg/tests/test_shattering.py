import pytest

from rcrmln.mln.constraint import Comparison, Constraint
from rcrmln.mln.model import Constant, LogVar, constants_by_domain, constants_of
from rcrmln.mln.parser import parse_mln
from rcrmln.rcr.relaxation import clone_all
from rcrmln.rcr.shattering import check_count_normalized, check_equiprobability, check_strong_equiprobability
from rcrmln.rcr.shattering import compute_counts, partition_equivalence, partition_model, set_partitions, shatter_atom
from rcrmln.util.errors import NotCountNormalizedError

from tests.conftest import EVIDENCE, atom, sized, smokers

K_A = frozenset([Constant('a')])
X, Y, A = LogVar('X', 'Person'), LogVar('Y', 'Person'), Constant('a')

FIVE_CELLS = {
	Constraint.of(Comparison.make(X, A, True), Comparison.make(Y, A, True)),
	Constraint.of(Comparison.make(X, A, True), Comparison.make(Y, A, False)),
	Constraint.of(Comparison.make(X, A, False), Comparison.make(Y, A, True)),
	Constraint.of(Comparison.make(X, A, False), Comparison.make(Y, A, False), Comparison.make(X, Y, True)),
	Constraint.of(Comparison.make(X, A, False), Comparison.make(Y, A, False), Comparison.make(X, Y, False)),
}

TOPICS = 'domain Person = 2\ndomain Topic = 2\npredicate attends(Person)\npredicate hot(Topic)\n1.0 attends(a) => hot(T)\n'

def _cells(partition, domains):
	return [set(cell.groundings(domains)) for cell in partition]

class TestSetPartitions:
	def test_bell_numbers(self):
		assert [len(list(set_partitions(range(n)))) for n in range(5)] == [1, 1, 2, 5, 15]

	def test_singletons_last(self):
		assert list(set_partitions('xy'))[-1] == [['x'], ['y']]

class TestShatterAtom:
	def test_no_constants_no_variables_pairs(self, smokers_mln):
		rm = clone_all(smokers_mln)
		partition = shatter_atom(rm.equivalence(1).original, frozenset(), rm.domains())
		assert len(partition) == 1 and partition.cells[0].constraint.is_trivial()

	def test_clone_with_evidence_constant(self):
		rm = clone_all(parse_mln(sized(EVIDENCE, 3)))
		clone = rm.equivalence(3).clone
		assert str(clone) == 'smokes_2a<X,Y>(X)'
		partition = shatter_atom(clone, K_A, rm.domains())
		assert len(partition) == 5
		assert {cell.constraint for cell in partition} == FIVE_CELLS

	def test_original_with_evidence_constant(self):
		rm = clone_all(parse_mln(sized(EVIDENCE, 3)))
		partition = shatter_atom(rm.equivalence(3).original, K_A, rm.domains())
		assert {cell.constraint for cell in partition} == {Constraint.of(Comparison.make(X, A, True)), Constraint.of(Comparison.make(X, A, False))}

	def test_constants_split_their_own_domain_only(self):
		mln = parse_mln(TOPICS)
		K = constants_by_domain(mln)
		assert K == {'Person': K_A}
		hot = clone_all(mln).equivalence(2).original
		assert len(shatter_atom(hot, K, mln.domain_map())) == 1
		assert len(shatter_atom(hot, K_A, mln.domain_map())) == 2

	def test_small_domain_drops_empty_cells(self):
		rm = clone_all(parse_mln(sized(EVIDENCE, 2)))
		assert len(shatter_atom(rm.equivalence(3).clone, K_A, rm.domains())) == 4

	def test_partition_property(self, corpus_mln):
		rm = clone_all(corpus_mln)
		K = constants_of(corpus_mln)
		domains = rm.domains()
		for eq in rm.equivalences:
			for a in (eq.original, eq.clone):
				cells = _cells(shatter_atom(a, K, domains), domains)
				covered = set().union(*cells)
				assert sum(len(c) for c in cells) == len(covered)
				everything = shatter_atom(a, frozenset(), domains)
				assert covered == set().union(*_cells(everything, domains))

class TestCounts:
	def test_smokers_second_formula(self, smokers_mln):
		rm = clone_all(smokers_mln)
		assert compute_counts(rm.equivalence(5), rm.domains()) == (2, 4)

	def test_witness(self):
		pairs = [(atom('smokes', 'a'), 'c1'), (atom('smokes', 'a'), 'c2'), (atom('smokes', 'b'), 'c3')]
		with pytest.raises(NotCountNormalizedError) as e:
			check_count_normalized(pairs)
		assert e.value.witness == ((atom('smokes', 'a'), 2), (atom('smokes', 'b'), 1))

	def test_constrained_equivalence_is_not_normalized(self):
		mln = parse_mln('domain D = {a, b, c}\npredicate p(D)\npredicate q(D, D)\n1.0 X != a, p(X) ^ q(X,Y)\n')
		rm = clone_all(mln)
		p_eq = rm.equivalence(1)
		assert compute_counts(p_eq, rm.domains()) == (2, 6)
		mln = parse_mln('domain D = {a, b, c}\npredicate p(D)\npredicate q(D, D)\n1.0 Y != a, p(X) ^ q(X,Y)\n')
		rm = clone_all(mln)
		assert compute_counts(rm.equivalence(1), rm.domains()) == (3, 6)
		mln = parse_mln('domain D = {a, b, c}\npredicate p(D)\npredicate q(D, D)\n1.0 X != Y, Y != a, p(X) ^ q(X,Y)\n')
		rm = clone_all(mln)
		with pytest.raises(NotCountNormalizedError):
			compute_counts(rm.equivalence(1), rm.domains())

class TestPartitionEquivalence:
	def test_five_pieces_with_evidence(self):
		rm = clone_all(parse_mln(sized(EVIDENCE, 3)))
		pieces = partition_equivalence(rm.equivalence(3), K_A, rm.domains())
		assert len(pieces) == 5
		assert sorted((p.n, p.n_prime) for p in pieces) == [(1, 1), (1, 2), (2, 2), (2, 2), (2, 2)]
		assert all(p.origin == 3 for p in pieces)
		assert {p.constraint for p in pieces} == FIVE_CELLS

	def test_no_constants(self):
		mln = parse_mln(smokers('abc'))
		rm = clone_all(mln)
		pieces = partition_equivalence(rm.equivalence(5), frozenset(), rm.domains())
		assert [(p.n, p.n_prime) for p in pieces] == [(3, 3), (3, 6)]

	def test_pieces_split_the_groundings(self, corpus_mln):
		rm = clone_all(corpus_mln)
		K = constants_of(corpus_mln)
		domains = rm.domains()
		for eq in rm.equivalences:
			whole = [(a, b) for _, a, b in eq.groundings(domains)]
			pieces = [(a, b) for p in partition_equivalence(eq, K, domains) for _, a, b in p.groundings(domains)]
			assert sorted(map(str, pieces)) == sorted(map(str, whole))

	def test_every_cell_is_count_normalized(self, corpus_mln):
		rm = partition_model(clone_all(corpus_mln))
		domains = rm.domains()
		for eq in rm.equivalences:
			assert compute_counts(eq, domains) == (eq.n, eq.n_prime)

class TestPartitionModel:
	def test_renumbered(self, smokers_mln):
		rm = partition_model(clone_all(smokers_mln))
		assert [eq.id for eq in rm.equivalences] == list(range(1, len(rm.equivalences) + 1))
		assert [eq.origin for eq in rm.equivalences] == [1, 2, 3, 3, 4, 4, 5, 5]

	def test_default_constants_are_per_domain(self):
		rm = partition_model(clone_all(parse_mln(TOPICS)))
		assert [eq.origin for eq in rm.equivalences] == [1, 2]
		assert [eq.origin for eq in partition_model(clone_all(parse_mln(TOPICS)), K_A).equivalences] == [1, 1, 2, 2]

	def test_preserves_ground_equivalence_count(self, corpus_mln):
		whole = clone_all(corpus_mln)
		cut = partition_model(whole)
		assert sum(eq.n_prime for eq in cut.equivalences) == sum(eq.n_prime for eq in whole.equivalences)

class TestEquiprobability:
	def test_every_cell_is_strongly_equiprobable(self, corpus_mln):
		rm = partition_model(clone_all(corpus_mln))
		for report in check_equiprobability(rm, rm.equivalences, trials=20, seed=7):
			assert report.passed, f'equivalence {report.eq_id}: spread {report.worst_spread}'

	def test_whole_equivalence_with_evidence_is_not(self):
		rm = clone_all(parse_mln(sized(EVIDENCE, 3)))
		report = check_strong_equiprobability(rm, rm.equivalence(1), trials=3)
		assert not report.passed
		assert report.worst_spread > 1e-3

	def test_deterministic_for_a_seed(self, smokers_mln):
		rm = partition_model(clone_all(smokers_mln))
		first = check_strong_equiprobability(rm, rm.equivalence(3), seed=3)
		second = check_strong_equiprobability(rm, rm.equivalence(3), seed=3)
		assert first == second
