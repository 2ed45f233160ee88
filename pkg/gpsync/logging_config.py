import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()


def addLoggingLevel(levelName, levelNum, methodName=None):
	"""
	Adds a new logging level to the `logging` module and the currently
	configured logging class.

	`levelName` becomes an attribute of the `logging` module with the value
	`levelNum`; `methodName` (default `levelName.lower()`) becomes a
	convenience method on both `logging` and the logger class.

	Raises `AttributeError` if the level or method name is already taken.

	Example
	-------
	>>> addLoggingLevel('TRACE', logging.DEBUG - 5)
	>>> logging.getLogger(__name__).trace('that worked')
	"""
	if not methodName:
		methodName = levelName.lower()

	if hasattr(logging, levelName):
		raise AttributeError('{} already defined in logging module'.format(levelName))
	if hasattr(logging, methodName):
		raise AttributeError('{} already defined in logging module'.format(methodName))
	if hasattr(logging.getLoggerClass(), methodName):
		raise AttributeError('{} already defined in logger class'.format(methodName))

	def logForLevel(self, message, *args, **kwargs):
		if self.isEnabledFor(levelNum):
			self._log(levelNum, message, args, **kwargs)

	def logToRoot(message, *args, **kwargs):
		logging.log(levelNum, message, *args, **kwargs)

	logging.addLevelName(levelNum, levelName)
	setattr(logging, levelName, levelNum)
	setattr(logging.getLoggerClass(), methodName, logForLevel)
	setattr(logging, methodName, logToRoot)


class GpSyncFormatter(logging.Formatter):
	def format(self, record):
		if isinstance(record.name, str) and record.name.startswith('gpsync.'):
			parts = record.name.split('.')
			record.name = parts[1] if len(parts) > 1 else parts[0]
		return super().format(record)


def setup_logging():
	try:
		addLoggingLevel('RESULT', 35)
	except AttributeError:
		pass

	log_type = os.getenv('GPSYNC_LOGGING_LEVEL', 'info').lower()

	gpsync_logger = logging.getLogger('gpsync')
	if gpsync_logger.handlers:
		return

	# stderr keeps CSV and result tables on stdout clean
	console = logging.StreamHandler(sys.stderr)
	if log_type == 'result':
		console.setFormatter(GpSyncFormatter('%(message)s'))
	else:
		console.setFormatter(GpSyncFormatter('%(levelname)-8s [%(name)s] %(message)s'))

	if log_type == 'result':
		level = logging.getLevelName('RESULT')
	elif log_type == 'debug':
		level = logging.DEBUG
	else:
		level = logging.INFO

	gpsync_logger.propagate = False
	gpsync_logger.addHandler(console)
	gpsync_logger.setLevel(level)
	gpsync_logger.debug('gpsync logging setup complete with level %s', log_type)

	for name in ['matplotlib', 'matplotlib.font_manager', 'PIL.PngImagePlugin']:
		third_party = logging.getLogger(name)
		third_party.setLevel(logging.ERROR)
		third_party.propagate = False
