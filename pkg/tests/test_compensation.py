from dataclasses import replace

import pytest
from scipy.special import expit

from rcrmln.exact.brute import brute_force
from rcrmln.ground.grounding import ground
from rcrmln.mln.parser import parse_mln
from rcrmln.rcr.compensation import CompensationParams, ground_step, kld3, lifted_step, logit
from rcrmln.rcr.compensation import run_compensation, symmetric_kl, weak_equivalence_residual
from rcrmln.rcr.relaxation import RelaxedGrounding, clone_all, recover, split_ground
from rcrmln.rcr.shattering import partition_model
from rcrmln.util.config import DEFAULTS
from rcrmln.util.enum_util import ModeEnum, ScheduleEnum
from rcrmln.util.errors import EquivalenceStateError, NotCountNormalizedError

from tests.conftest import CONSTANTS, HARD_CORE, P_R, SICK_DEATH, SYMMETRIC, atom, sized, smokers

TIGHT = CompensationParams(damping=0.5, tol=1e-10, max_iters=2000)

def _recover_origins(rm, origins):
	for eq in rm.equivalences:
		if eq.origin in origins:
			rm = recover(rm, eq.id)
	return rm

class TestDivergences:
	def test_logit_clamps(self):
		assert logit(1.0) == pytest.approx(27.631021, abs=1e-5)
		assert logit(0.0) == pytest.approx(-27.631021, abs=1e-5)
		assert logit(0.5) == 0.0

	def test_symmetric_kl(self):
		assert symmetric_kl(0.3, 0.3) == 0.0
		assert symmetric_kl(0.2, 0.7) == pytest.approx(symmetric_kl(0.7, 0.2))
		assert symmetric_kl(0.2, 0.7) > 0

	def test_kld3(self):
		assert kld3(0.9, 0.5, 0.5) == pytest.approx(1.75777966, abs=1e-8)
		assert kld3(0.4, 0.4, 0.4) == 0.0

	def test_residual_uses_the_share(self, smokers_mln):
		eq = replace(clone_all(smokers_mln).equivalence(5), w=2.0, w_prime=-0.3)
		r = float(expit(1.0 - 0.3))
		assert weak_equivalence_residual(eq, r, r) == pytest.approx(0.0, abs=1e-12)

class TestParams:
	def test_defaults_match_config(self):
		params = CompensationParams.from_config(DEFAULTS['compensation'])
		assert params == CompensationParams()
		assert params.schedule == ScheduleEnum.sequential

	def test_overrides(self):
		params = CompensationParams.from_config(DEFAULTS['compensation'], damping=1.0, schedule='sim', tol=None)
		assert params.damping == 1.0 and params.schedule == ScheduleEnum.simultaneous
		assert params.tol == DEFAULTS['compensation']['tol']

	@pytest.mark.parametrize('kwargs', [{'damping': 0.0}, {'damping': 1.5}, {'tol': -1.0}, {'max_iters': 0}, {'clamp': 0.5}])
	def test_invalid(self, kwargs):
		with pytest.raises(ValueError):
			CompensationParams(**kwargs)

class TestUnitClauses:
	def _model(self, unit_mln):
		return recover(partition_model(clone_all(unit_mln)), 1)

	def test_first_step_is_damped(self, unit_mln):
		rm = self._model(unit_mln)
		rm, records, delta = lifted_step(rm, TIGHT)
		eq = rm.equivalence(2)
		assert eq.w == pytest.approx(0.75)
		assert eq.w_prime == pytest.approx(0.65)
		assert delta == pytest.approx(0.75)
		assert [r.eq_id for r in records] == [2]

	def test_converges_to_the_other_weight(self, unit_mln):
		rm, trace = run_compensation(self._model(unit_mln), TIGHT)
		assert trace.converged
		eq = rm.equivalence(2)
		assert eq.w == pytest.approx(1.5, abs=1e-8)
		assert eq.w_prime == pytest.approx(1.3, abs=1e-8)
		table = RelaxedGrounding(rm).marginals(rm)
		assert table[atom('p')] == pytest.approx(float(expit(2.8)), abs=1e-8)
		assert table[atom('p')] == pytest.approx(0.94267582, abs=1e-7)

	def test_undamped_converges_in_one_step(self, unit_mln):
		params = replace(TIGHT, damping=1.0)
		rm, trace = run_compensation(self._model(unit_mln), params)
		assert trace.converged and trace.iterations == 2
		assert trace.weights(1)[2] == pytest.approx((1.5, 1.3))

class TestRunCompensation:
	def test_fixed_point_has_small_residuals(self, corpus_mln):
		rm = partition_model(clone_all(corpus_mln))
		rm, trace = run_compensation(rm, TIGHT)
		assert trace.converged
		grounding = RelaxedGrounding(rm)
		for eq_id, (p, q) in grounding.pair_marginals(rm).items():
			assert weak_equivalence_residual(rm.equivalence(eq_id), p, q) < 1e-6

	def test_trace_rows(self, smokers_mln):
		rm = partition_model(clone_all(smokers_mln))
		_, trace = run_compensation(rm, TIGHT)
		rows = list(trace.rows())
		assert len(rows) == trace.iterations * len(rm.equivalences)
		assert rows[0][:2] == [1, 1]
		assert trace.max_deltas[-1] < TIGHT.tol

	def test_non_convergence_is_flagged(self, smokers_mln):
		rm = partition_model(clone_all(smokers_mln))
		rm, trace = run_compensation(rm, replace(TIGHT, max_iters=2))
		assert not trace.converged
		assert trace.iterations == 2
		assert rm.equivalence(1).w != 0.0

	def test_nothing_relaxed(self, smokers_mln):
		rm = clone_all(smokers_mln)
		for eq in rm.equivalences:
			rm = recover(rm, eq.id)
		rm, trace = run_compensation(rm, TIGHT)
		assert trace.converged and trace.iterations == 1

	def test_lifted_and_ground_agree(self, smokers_mln):
		params = replace(TIGHT, schedule=ScheduleEnum.simultaneous)
		lifted, _ = run_compensation(partition_model(clone_all(smokers_mln)), params, ModeEnum.lifted)
		grounded, _ = run_compensation(split_ground(clone_all(smokers_mln)), params, ModeEnum.ground)
		domains = lifted.domains()
		pieces = {(eq.origin, eq.groundings(domains)[0][2]): eq for eq in grounded.equivalences}
		for cell in lifted.equivalences:
			for _, _, clone in cell.groundings(domains):
				piece = pieces[(cell.origin, clone)]
				assert piece.w == pytest.approx(cell.share(), abs=1e-6)
				assert piece.w_prime == pytest.approx(cell.w_prime, abs=1e-6)
		lifted_table = RelaxedGrounding(lifted).marginals(lifted)
		ground_table = RelaxedGrounding(grounded).marginals(grounded)
		for a in lifted_table.atoms():
			assert lifted_table[a] == pytest.approx(ground_table[a], abs=1e-8)

class TestSteps:
	def test_ground_step_needs_ground_equivalences(self, smokers_mln):
		with pytest.raises(EquivalenceStateError):
			ground_step(clone_all(smokers_mln), TIGHT)

	def test_lifted_step_checks_counts(self, smokers_mln):
		rm = clone_all(smokers_mln)
		rm = rm.update(replace(rm.equivalence(5), n=1))
		with pytest.raises(NotCountNormalizedError):
			lifted_step(rm, TIGHT)

	def test_simultaneous_uses_one_snapshot(self, smokers_mln):
		rm = split_ground(clone_all(smokers_mln))
		seq, seq_records, _ = ground_step(rm, TIGHT)
		sim, sim_records, _ = ground_step(rm, replace(TIGHT, schedule=ScheduleEnum.simultaneous))
		# the first update of a step sees the same state either way
		assert seq_records[0] == sim_records[0]
		assert [r.eq_id for r in sim_records] == [eq.id for eq in rm.equivalences]

class TestTrajectories:
	@pytest.mark.parametrize('people', ['ab', 'abc', 'abcd'])
	@pytest.mark.parametrize('recovered', [(), (4,)])
	def test_lifted_and_ground_match_every_iteration(self, people, recovered):
		mln = parse_mln(smokers(people))
		params = CompensationParams(damping=0.5, tol=0.0, max_iters=50, schedule=ScheduleEnum.simultaneous)
		lifted = _recover_origins(partition_model(clone_all(mln)), recovered)
		grounded = _recover_origins(split_ground(clone_all(mln)), recovered)
		_, lifted_trace = run_compensation(lifted, params, ModeEnum.lifted)
		_, ground_trace = run_compensation(grounded, params, ModeEnum.ground)
		assert lifted_trace.iterations == ground_trace.iterations == 50

		domains = lifted.domains()
		pieces = {(eq.origin, eq.groundings(domains)[0][2]): eq.id for eq in grounded.relaxed()}
		for i in range(1, 51):
			cells, singles = lifted_trace.weights(i), ground_trace.weights(i)
			for cell in lifted.relaxed():
				w, w_prime = cells[cell.id]
				for _, _, clone in cell.groundings(domains):
					piece_w, piece_w_prime = singles[pieces[(cell.origin, clone)]]
					assert piece_w == pytest.approx(cell.n / cell.n_prime * w, abs=1e-9), (i, cell.id)
					assert piece_w_prime == pytest.approx(w_prime, abs=1e-9), (i, cell.id)

class TestFixedPoint:
	@pytest.mark.parametrize('text', [smokers('abc'), sized(SYMMETRIC, 3), sized(CONSTANTS, 3)])
	def test_representative_choice_does_not_matter(self, text):
		rm = partition_model(clone_all(parse_mln(text)))
		first, first_trace = run_compensation(rm, TIGHT)
		last, last_trace = run_compensation(rm, TIGHT, grounding=RelaxedGrounding(rm, representative=-1))
		assert first_trace.converged and last_trace.converged
		for eq in first.equivalences:
			assert last.equivalence(eq.id).w == pytest.approx(eq.w, abs=1e-7)
			assert last.equivalence(eq.id).w_prime == pytest.approx(eq.w_prime, abs=1e-7)
		odds = RelaxedGrounding(first).pair_log_odds(first)
		other = RelaxedGrounding(first, representative=-1).pair_log_odds(first)
		for eq_id, (lp, lq) in odds.items():
			assert other[eq_id] == pytest.approx((lp, lq), abs=1e-9)

	def test_undamped_step_at_the_fixed_point_changes_nothing(self, smokers_mln):
		rm, trace = run_compensation(partition_model(clone_all(smokers_mln)), TIGHT)
		assert trace.converged
		after, _, delta = lifted_step(rm, replace(TIGHT, damping=1.0))
		assert delta < 1e-8
		for eq in rm.equivalences:
			assert after.equivalence(eq.id).w == pytest.approx(eq.w, abs=1e-8)

	@pytest.mark.parametrize('text,relaxed_id', [(sized(P_R, 2), 3), (sized(SICK_DEATH, 2), 1)])
	def test_exact_when_the_relaxed_equivalence_disconnects(self, text, relaxed_id):
		mln = parse_mln(text)
		rm = clone_all(mln)
		for eq in rm.equivalences:
			if eq.id != relaxed_id:
				rm = recover(rm, eq.id)
		rm, trace = run_compensation(rm, TIGHT)
		assert trace.converged
		table = RelaxedGrounding(rm).marginals(rm)
		exact = brute_force(ground(mln))
		for a in exact.atoms():
			assert table[a] == pytest.approx(exact[a], abs=1e-9), str(a)

class TestOscillation:
	def _model(self):
		return split_ground(clone_all(parse_mln(sized(HARD_CORE, 4))))

	def test_damping_settles_what_undamped_updates_cannot(self):
		params = CompensationParams(damping=1.0, tol=1e-8, max_iters=100, schedule=ScheduleEnum.simultaneous)
		_, undamped = run_compensation(self._model(), params, ModeEnum.ground)
		_, damped = run_compensation(self._model(), replace(params, damping=0.5, max_iters=2000), ModeEnum.ground)
		assert not undamped.converged
		assert undamped.iterations == 100
		assert damped.max_deltas[-1] < undamped.max_deltas[-1]
		assert damped.converged == (damped.max_deltas[-1] < params.tol)

	def test_undamped_deltas_do_not_shrink(self):
		params = CompensationParams(damping=1.0, tol=1e-8, max_iters=100, schedule=ScheduleEnum.simultaneous)
		_, trace = run_compensation(self._model(), params, ModeEnum.ground)
		assert min(trace.max_deltas[-10:]) > 1e-3
