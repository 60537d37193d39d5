def format_count(count, noun):
	"""'@count @noun(s)', with a K or M suffix from a thousand up."""
	for unit, scale in (('M', 10**6), ('K', 10**3)):
		if count >= scale:
			value = f'{count / scale:.1f}'.rstrip('0').rstrip('.')
			return f'{value}{unit} {noun}(s)'
	return f'{count} {noun}(s)'

def format_weight(w):
	# repr keeps the printed weight parseable back to the same float
	return str(w) if not isinstance(w, float) else repr(w)
