# Copyright (c) 2024, kg_path_features contributors
# For license information, please see license.txt

import json
import math
from dataclasses import dataclass
from pathlib import Path

from kg_path_features.exceptions import InputIOError, ValidationError
from kg_path_features.utils import Blacklist, logger, throw

SCHEMA_PATH = Path(__file__).with_name("mining_settings.json")


@dataclass(frozen=True)
class Diagnostic:
	level: str  # "error" | "warning"
	field: str
	message: str

	def __str__(self):
		return f"{self.level}: {self.field}: {self.message}"


def load_schema():
	with open(SCHEMA_PATH, encoding="utf-8") as f:
		return json.load(f)


def parse_limit(value):
	if isinstance(value, str):
		value = value.strip().lower()
		if value in ("inf", "+inf", "infinity"):
			return math.inf
		try:
			return int(value)
		except ValueError:
			throw(f"expected an integer or inf, got {value!r}")
	if isinstance(value, float) and math.isinf(value):
		return math.inf
	return int(value)


def _coerce(fieldtype, value):
	if fieldtype == "Int":
		return int(value)
	if fieldtype == "Limit":
		return parse_limit(value)
	if fieldtype == "Check":
		if isinstance(value, str):
			return value.strip().lower() in ("1", "true", "yes", "on")
		return bool(int(value))
	if fieldtype == "List":
		if isinstance(value, str):
			value = [v for v in value.split(",")]
		return [str(v) for v in value]
	if fieldtype == "Groups":
		return {str(name): [str(v) for v in entries] for name, entries in dict(value).items()}
	return str(value)


class MiningSettings:
	"""Parameters of a mining run, one attribute per field of mining_settings.json."""

	def __init__(self, **values):
		self._fields = {f["fieldname"]: f for f in load_schema()["fields"]}
		for name, meta in self._fields.items():
			setattr(self, name, _coerce(meta["fieldtype"], meta["default"]))
		self.update(**values)

	@classmethod
	def from_file(cls, path, **overrides):
		try:
			with open(path, encoding="utf-8") as f:
				values = json.load(f)
		except OSError as e:
			raise InputIOError(f"cannot read config {path}: {e}")
		except json.JSONDecodeError as e:
			raise ValidationError(f"config {path} is not valid JSON: {e}")
		if not isinstance(values, dict):
			throw(f"config {path} must hold a JSON object")
		settings = cls(**values)
		settings.update(**overrides)
		return settings

	def update(self, **values):
		for name, value in values.items():
			if value is None:
				continue
			if name not in self._fields:
				throw(f"unknown setting {name!r}")
			try:
				setattr(self, name, _coerce(self._fields[name]["fieldtype"], value))
			except (TypeError, ValueError) as e:
				throw(f"invalid value for {name}: {value!r} ({e})")
		return self

	def as_dict(self):
		out = {}
		for name in self._fields:
			value = getattr(self, name)
			out[name] = "inf" if isinstance(value, float) and math.isinf(value) else value
		return out

	@property
	def predicate_blacklist(self):
		return Blacklist.from_entries(self.b_predicates)

	@property
	def exp_blacklist(self):
		return Blacklist.from_entries(self.b_exp_types)

	@property
	def gen_blacklist(self):
		return Blacklist.from_entries(self.b_gen_types)

	def validate(self):
		"""Clean values, raise on violated invariants, return the warnings."""
		for name in ("type_uri", "subclassof_uri", "sameas_uri", "top_uri"):
			setattr(self, name, getattr(self, name).strip())
		for name in ("b_predicates", "b_exp_types", "b_gen_types", "filter"):
			setattr(self, name, [v.strip() for v in getattr(self, name) if v.strip()])

		diagnostics = []

		def report(level, field, message):
			diagnostics.append(Diagnostic(level, field, message))

		for name, meta in self._fields.items():
			minimum = meta.get("minimum")
			if minimum is not None and getattr(self, name) < minimum:
				report("error", name, f"must be >= {minimum}")
		if self.l_min > self.l_max:
			report("error", "l_min", f"l_min ({self.l_min}) exceeds l_max ({self.l_max})")
		for name in ("type_uri", "subclassof_uri", "sameas_uri", "top_uri"):
			if not getattr(self, name):
				report("error", name, "must not be empty")
		for group in self.filter:
			if group not in self.filter_groups:
				report("error", "filter", f"unknown filter group {group!r}")

		if self.t >= 4 and not self.b_gen_types:
			report("warning", "t", f"t={self.t} without b_gen_types generalizes up to very general classes")
		if math.isinf(self.d):
			report("warning", "d", "d=inf disables the hub rule; neighborhoods may explode")
		if self.sameas_uri in self.predicate_blacklist.exact:
			report("warning", "b_predicates", "the sameAs predicate is contracted before traversal")

		errors = [d for d in diagnostics if d.level == "error"]
		warnings = [d for d in diagnostics if d.level == "warning"]
		for d in warnings:
			logger("settings").warning(str(d))
		if errors:
			throw("; ".join(str(d) for d in errors))
		return warnings
