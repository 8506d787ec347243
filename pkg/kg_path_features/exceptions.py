class MiningError(Exception):
	"""Base error of the package; `exit_code` is what the CLI returns."""

	exit_code = 3

	def __init__(self, message, stage=None):
		super().__init__(message)
		self.message = message
		self.stage = stage


class ValidationError(MiningError):
	exit_code = 1


class InvalidInputError(MiningError):
	exit_code = 2


class NotFoundError(MiningError):
	exit_code = 2


class InputIOError(MiningError):
	exit_code = 2


class ParseError(InvalidInputError):
	def __init__(self, message, line_number=None, stage=None):
		if line_number is not None:
			message = f"line {line_number}: {message}"
		super().__init__(message, stage=stage)
		self.line_number = line_number


class InvariantViolation(MiningError):
	exit_code = 3
