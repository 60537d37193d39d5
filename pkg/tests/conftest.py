import os

import pytest

from rcrmln.ground.grounding import GroundAtom
from rcrmln.mln.model import PredicateId
from rcrmln.mln.parser import parse_mln

MODELS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'models')

SMOKERS = """\
domain Person = {people}
predicate smokes(Person)
predicate cancer(Person)
predicate friends(Person, Person)
1.3 smokes(X) => cancer(X)
1.5 smokes(X) ^ friends(X,Y) => smokes(Y)
"""

UNIT_CLAUSES = """\
predicate p
1.3 p
1.5 p
"""

P_R = """\
domain D = {size}
predicate p(D)
predicate r
1.1 p(X) => r
0.4 r
"""

SICK_DEATH = """\
domain Person = {size}
predicate epidemic
predicate sick(Person)
predicate death(Person)
0.5 epidemic
1.2 epidemic => sick(X)
2.0 sick(X) => death(X)
-1.0 death(X)
"""

SYMMETRIC = """\
domain Person = {size}
predicate friends(Person, Person)
predicate smokes(Person)
1.2 X != Y, friends(X,Y) => friends(Y,X)
0.9 smokes(X) ^ friends(X,Y) => smokes(Y)
"""

CHAIN = """\
domain D = {size}
predicate a(D)
predicate b(D)
predicate c(D)
0.7 a(X) => b(X)
-0.6 b(X) v c(X)
1.4 c(X) <=> a(X)
"""

PAIRS = """\
domain D = {size}
predicate link(D, D)
predicate node(D)
0.8 X != Y, link(X,Y) ^ node(X) => node(Y)
-0.5 node(X)
"""

CONSTANTS = """\
domain D = {size}
predicate q(D)
predicate s(D, D)
1.0 q(a) => q(X)
0.6 X != a, s(a,X) v !q(X)
"""

HARD = """\
domain D = {size}
predicate on(D)
predicate lit(D)
hard on(X) => lit(X)
0.9 on(X)
-0.4 lit(X) ^ on(X)
"""

EVIDENCE = """\
domain Person = {size}
predicate smokes(Person)
predicate cancer(Person)
predicate friends(Person, Person)
1.3 smokes(X) => cancer(X)
1.5 smokes(X) ^ friends(X,Y) => smokes(Y)
evidence smokes(a)
"""

TWO_SORTS = """\
domain Person = {size}
domain Topic = {{learning, logic}}
predicate attends(Person)
predicate series
predicate hot(Topic)
1.1 hot(T) ^ attends(X) => series
0.8 attends(X)
-0.3 hot(T)
"""

# no two sites on at once; simultaneous undamped compensation falls into a 2-cycle at size 4
HARD_CORE = """\
domain Site = {size}
predicate on(Site)
2.0 on(X)
hard X != Y, !on(X) v !on(Y)
"""

def smokers(people=('a', 'b')):
	return SMOKERS.format(people='{' + ', '.join(people) + '}')

def sized(template, size):
	return template.format(size=size)

# (name, text); every model grounds to at most 20 atoms
CORPUS = (
	[('unit_clauses', UNIT_CLAUSES)]
	+ [(f'smokers_{n}', smokers('abc'[:n])) for n in (1, 2, 3)]
	+ [(f'p_r_{n}', sized(P_R, n)) for n in (1, 2, 3, 4, 5)]
	+ [(f'sick_death_{n}', sized(SICK_DEATH, n)) for n in (1, 2, 3, 4)]
	+ [(f'symmetric_{n}', sized(SYMMETRIC, n)) for n in (2, 3)]
	+ [(f'chain_{n}', sized(CHAIN, n)) for n in (1, 2, 3, 4)]
	+ [(f'pairs_{n}', sized(PAIRS, n)) for n in (2, 3)]
	+ [(f'constants_{n}', sized(CONSTANTS, n)) for n in (2, 3)]
	+ [(f'hard_{n}', sized(HARD, n)) for n in (1, 2, 3)]
	+ [(f'evidence_{n}', sized(EVIDENCE, n)) for n in (2, 3)]
	+ [(f'two_sorts_{n}', sized(TWO_SORTS, n)) for n in (1, 2, 3)]
)

CORPUS_IDS = [name for name, _ in CORPUS]

def atom(name, *args):
	return GroundAtom(PredicateId(name), tuple(args))

def model_path(name):
	return os.path.join(MODELS_DIR, name)

@pytest.fixture
def smokers_mln():
	return parse_mln(smokers())

@pytest.fixture
def unit_mln():
	return parse_mln(UNIT_CLAUSES)

@pytest.fixture(params=CORPUS, ids=CORPUS_IDS)
def corpus_mln(request):
	return parse_mln(request.param[1])
