import logging
import time

from func_timeout import func_timeout, FunctionTimedOut

def exec_with_timeout(name, func, args=(), kwargs=None, timeout=None):
	"""
	Runs func(*args, **kwargs), aborting after @timeout seconds
	Returns (result, elapsed seconds)
	"""
	start = time.perf_counter()
	try:
		if timeout:
			result = func_timeout(timeout, func, args=args, kwargs=kwargs or {})
		else:
			result = func(*args, **(kwargs or {}))
	except FunctionTimedOut:
		logging.warning(f'{name} timed out after {timeout} seconds')
		raise Exception(f'{name} timed out after {timeout} seconds!')
	return result, time.perf_counter() - start
