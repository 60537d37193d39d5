import csv
import json

def read_file(filename):
	try:
		with open(filename, 'r') as f:
			return f.read()
	except Exception as e:
		raise Exception("Failed to read file %s: %s" % (filename, str(e)))

def read_from_csv(filename, skip_header=False):
	with open(filename, "r") as csvfile:
		rows = (row for row in csv.reader(csvfile, delimiter=",") if len(row) and not row[0].startswith("#"))
		if skip_header:
			next(rows, None)
		yield from rows

def write_json_to_file(filepath, data_json, indent=0):
	try:
		with open(filepath, "w+") as f:
			json.dump(data_json, f, indent=indent, sort_keys=True)
	except Exception as e:
		raise Exception("Failed to dump json content to file %s: %s" % (filepath, str(e)))

def write_json_lines(filepath, records):
	try:
		with open(filepath, "w+") as f:
			for record in records:
				f.write(json.dumps(record, sort_keys=True) + '\n')
	except Exception as e:
		raise Exception("Failed to dump json lines to file %s: %s" % (filepath, str(e)))

def write_csv(filepath, header, rows, comment=None):
	try:
		with open(filepath, 'w+', newline='') as f:
			if comment:
				f.write(f'# {comment}\n')
			writer = csv.writer(f, delimiter=',', lineterminator='\n')
			writer.writerow(header)
			for row in rows:
				writer.writerow(row)
	except Exception as e:
		raise Exception("Failed to write csv file %s: %s" % (filepath, str(e)))

def write_to_file(filename, data):
	try:
		with open(filename, 'w+') as f:
			f.write("%s" % (data))
	except Exception as e:
		raise Exception("Failed to write to file %s: %s" % (filename, str(e)))
