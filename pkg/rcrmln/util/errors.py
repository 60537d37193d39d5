class RcrError(Exception):
	pass

class MlnParseError(RcrError):
	def __init__(self, message:str, line:int=None, column:int=None):
		self.line = line
		self.column = column
		if line is not None:
			message = f'line {line}, col {column or 1}: {message}'
		super().__init__(message)

class CapacityError(RcrError):
	pass

class InconsistentModelError(RcrError):
	"""Every world violates some hard formula."""
	pass

class NotCountNormalizedError(RcrError):
	def __init__(self, message:str, witness=None):
		# witness: ((atom, count), (atom, count))
		self.witness = witness
		super().__init__(message)

class EquivalenceStateError(RcrError):
	pass

class NonConvergenceError(RcrError):
	pass

class UnknownGeneratorError(RcrError):
	pass

class AtomSetMismatchError(RcrError):
	pass
