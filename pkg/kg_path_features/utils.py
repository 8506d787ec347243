import logging
from dataclasses import dataclass, field
from pathlib import Path

from kg_path_features.exceptions import InputIOError, ValidationError

LOGGER_NAME = "kg_path_features"


def logger(module=None):
    """Package logger, optionally a child named after the calling module."""
    name = LOGGER_NAME if not module else f"{LOGGER_NAME}.{module}"
    return logging.getLogger(name)


def log_error(message, title):
    logger().error("[%s] %s", title, message)


def throw(message, exc=ValidationError, **kwargs):
    raise exc(message, **kwargs)


def setup_logging(verbose=False):
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger(LOGGER_NAME)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel(level)


@dataclass(frozen=True)
class Blacklist:
    """URIs matched exactly, plus prefixes (written with a trailing `*`)."""

    exact: frozenset = field(default_factory=frozenset)
    prefixes: tuple = ()

    @classmethod
    def from_entries(cls, entries):
        exact, prefixes = set(), []
        for entry in entries or ():
            entry = entry.strip()
            if not entry:
                continue
            if entry.endswith("*"):
                prefixes.append(entry[:-1])
            else:
                exact.add(entry)
        return cls(frozenset(exact), tuple(sorted(set(prefixes))))

    def matches(self, uri):
        return uri in self.exact or any(uri.startswith(p) for p in self.prefixes)

    def __bool__(self):
        return bool(self.exact or self.prefixes)

    def entries(self):
        return sorted(self.exact) + [p + "*" for p in self.prefixes]


def read_list_file(path):
    """One entry per line; blank lines and `#` comments are skipped."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise InputIOError(f"cannot read {path}: {e}")
    return [line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")]


def ensure_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputIOError(f"cannot create directory {path}: {e}")
    return path
