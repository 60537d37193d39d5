import csv
import json

import pytest

from rcrmln.main import main
from rcrmln.util.files import read_from_csv

from tests.conftest import model_path

@pytest.fixture
def run(tmp_path):
	config = str(tmp_path / 'missing.yaml')

	def _run(*argv, config=config):
		try:
			main(config=config, argv=list(argv))
		except SystemExit as e:
			return e.code
		return 0
	return _run

def _stdout_json(capsys):
	return json.loads(capsys.readouterr().out)

class TestGround:
	def test_summary(self, run, capsys):
		assert run('ground', model_path('smokers.mln')) == 0
		summary = _stdout_json(capsys)
		assert (summary['atoms'], summary['formulas']) == (8, 6)
		assert summary['disconnected'] is False
		assert summary['shared_atom']

	def test_dump_to_file(self, run, tmp_path):
		out = tmp_path / 'ground.txt'
		assert run('ground', model_path('smokers.mln'), '--dump', '-o', str(out)) == 0
		assert out.read_text().startswith('// 8 ground atom(s)')

class TestExact:
	@pytest.mark.parametrize('engine', ['ve', 'brute', 'bp'])
	def test_engines(self, run, capsys, engine):
		assert run('exact', model_path('smokers.mln'), '--engine', engine) == 0
		result = _stdout_json(capsys)
		assert len(result['marginals']) == 8
		assert 'smokes(a)' in result['marginals']
		assert isinstance(result['logZ'], float)

	def test_engines_agree(self, run, tmp_path):
		tables = {}
		for engine in ('ve', 'brute'):
			out = tmp_path / f'{engine}.json'
			assert run('exact', model_path('sick_death.mln'), '--engine', engine, '-o', str(out)) == 0
			tables[engine] = json.loads(out.read_text())
		for name, p in tables['ve']['marginals'].items():
			assert p == pytest.approx(tables['brute']['marginals'][name], abs=1e-9)

class TestShatter:
	def test_cells(self, run, capsys):
		assert run('shatter', model_path('smokers_evidence.mln')) == 0
		report = _stdout_json(capsys)
		assert report['constants'] == ['a', 'b']
		assert len(report['equivalences']) == 5
		assert all(eq['count_normalized'] for eq in report['equivalences'])
		assert report['cells'] == sum(len(eq['cells']) for eq in report['equivalences'])

	def test_witness_for_uneven_equivalence(self, run, capsys, tmp_path):
		path = tmp_path / 'uneven.mln'
		path.write_text('domain D = {a, b, c}\npredicate p(D)\npredicate q(D, D)\n1.0 X != Y, Y != a, p(X) ^ q(X,Y)\n')
		assert run('shatter', str(path)) == 0
		first = _stdout_json(capsys)['equivalences'][0]
		assert first['count_normalized'] is False
		assert len(first['witness']) == 2

class TestRcr:
	def test_outputs(self, run, tmp_path):
		out, trace, audit = tmp_path / 'm.json', tmp_path / 'trace.csv', tmp_path / 'audit.jsonl'
		assert run('rcr', model_path('smokers.mln'), '--recover-frac', '0.5', '-o', str(out),
					'--trace', str(trace), '--audit', str(audit)) == 0
		result = json.loads(out.read_text())
		assert result['converged'] is True
		assert len(result['marginals']) == 8
		assert result['recovered']['fraction'] >= 0.5
		with open(trace) as f:
			rows = list(csv.reader(f))
		assert rows[0] == ['iter', 'eq_id', 'w', 'w_prime', 'delta', 'residual']
		iterations = [int(row[0]) for row in rows[1:]]
		assert iterations == sorted(iterations)
		records = [json.loads(line) for line in audit.read_text().splitlines()]
		assert records[0]['step'] == 0 and records[0]['recovered_eq'] is None
		assert len(records) == 1 + result['recovered']['count']

	def test_repeatable(self, run, tmp_path):
		outputs = []
		for i in range(2):
			out, audit = tmp_path / f'm{i}.json', tmp_path / f'audit{i}.jsonl'
			assert run('rcr', model_path('smokers.mln'), '--recover-frac', '0.5', '-o', str(out), '--audit', str(audit)) == 0
			outputs.append((out.read_bytes(), audit.read_bytes()))
		assert outputs[0] == outputs[1]

	def test_ground_mode(self, run, capsys):
		assert run('rcr', model_path('smokers.mln'), '--mode', 'ground', '--recover-count', '2', '--schedule', 'sim') == 0
		assert _stdout_json(capsys)['recovered']['count'] == 2

	def test_strict_non_convergence(self, run, tmp_path):
		out = tmp_path / 'm.json'
		assert run('rcr', model_path('smokers.mln'), '--max-iters', '1', '--strict', '-o', str(out)) == 4
		assert json.loads(out.read_text())['converged'] is False

	def test_non_convergence_without_strict(self, run, capsys):
		assert run('rcr', model_path('smokers.mln'), '--max-iters', '1') == 0
		assert _stdout_json(capsys)['converged'] is False

	def test_budgets_are_exclusive(self, run):
		assert run('rcr', model_path('smokers.mln'), '--recover-frac', '0.5', '--recover-count', '1') != 0

class TestEval:
	def test_generated_sweep(self, run, tmp_path):
		out = tmp_path / 'sweep.csv'
		assert run('eval', '--gen', 'smokers', '--size', '2', '--grid', '0,1', '-o', str(out)) == 0
		assert out.read_text().splitlines()[0] == '# rcrmln sweep v1'
		rows = list(read_from_csv(str(out), skip_header=True))
		assert [row[2] for row in rows] == ['0.0', '1.0']
		assert all(row[0] == 'smokers' and row[-1] == '' for row in rows)

	def test_several_sizes(self, run, tmp_path):
		out = tmp_path / 'sweep.csv'
		assert run('eval', '--gen', 'smokers', '--size', '2,3', '--grid', '0,1', '-o', str(out)) == 0
		rows = list(read_from_csv(str(out), skip_header=True))
		assert [row[1] for row in rows] == ['Person=2', 'Person=2', 'Person=3', 'Person=3']

	def test_bad_sizes(self, run):
		assert run('eval', '--gen', 'smokers', '--size', '2,0') != 0

	def test_model_file(self, run, capsys):
		assert run('eval', model_path('smokers.mln'), '--grid', '0') == 0
		out = capsys.readouterr().out.splitlines()
		assert out[2].startswith('smokers,Person=2,0.0,')

	def test_gen_needs_size(self, run):
		assert run('eval', '--gen', 'smokers') == 1

	def test_bad_grid(self, run):
		assert run('eval', '--gen', 'smokers', '--size', '2', '--grid', '0,2') != 0

class TestExitCodes:
	def test_parse_error(self, run, tmp_path):
		path = tmp_path / 'bad.mln'
		path.write_text('predicate p\n1.0 p ^\n')
		assert run('ground', str(path)) == 2

	def test_capacity(self, run, tmp_path):
		config = tmp_path / 'small.yaml'
		config.write_text('grounding:\n  max_ground_atoms: 3\n')
		assert run('ground', model_path('smokers.mln'), config=str(config)) == 3

	def test_missing_file(self, run, tmp_path):
		assert run('exact', str(tmp_path / 'nope.mln')) == 1

	def test_config_overrides(self, run, tmp_path, capsys):
		config = tmp_path / 'tuned.yaml'
		config.write_text('compensation:\n  max_iters: 1\n')
		assert run('rcr', model_path('smokers.mln'), '--strict', config=str(config)) == 4
