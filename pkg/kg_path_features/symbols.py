"""
Dense integer interning of URIs and of path-feature atom sequences.

Every downstream structure carries the small integers handed out here instead
of URIs or atom lists. Ids of a table are always exactly {0..n-1}.
"""

import threading

from kg_path_features.exceptions import InvalidInputError, NotFoundError, ValidationError

VERTEX = "vertex"
PREDICATE = "predicate"
FEATURE = "feature"
KINDS = (VERTEX, PREDICATE, FEATURE)

# Vertex key of the top class. Parsed terms always contain a colon (IRIs need
# a scheme, blank nodes are `_:label`), so no term of a graph can collide.
TOP_KEY = "⊤"


class SymbolTable:
    def __init__(self, kind):
        if kind not in KINDS:
            raise ValidationError(f"unknown symbol table kind {kind!r}")
        self.kind = kind
        self._forward = {}
        self._reverse = []
        self._frozen = False
        self._lock = threading.Lock()

    def intern(self, key):
        """Id of `key`, allocating the next dense id on first sight."""
        if not key:
            raise InvalidInputError(f"cannot intern an empty {self.kind} key")
        sid = self._forward.get(key)
        if sid is not None:
            return sid
        with self._lock:
            sid = self._forward.get(key)
            if sid is None:
                if self._frozen:
                    raise ValidationError(f"{self.kind} table is frozen, cannot intern {key!r}")
                sid = len(self._reverse)
                self._reverse.append(key)
                self._forward[key] = sid
        return sid

    def lookup(self, key):
        """Id of an already interned key, or None."""
        return self._forward.get(key)

    def resolve(self, sid):
        if not isinstance(sid, int) or sid < 0 or sid >= len(self._reverse):
            raise NotFoundError(f"no {self.kind} with id {sid!r}")
        return self._reverse[sid]

    def freeze(self):
        self._frozen = True

    @property
    def frozen(self):
        return self._frozen

    def __len__(self):
        return len(self._reverse)

    def __contains__(self, key):
        return key in self._forward

    def __iter__(self):
        return iter(range(len(self._reverse)))

    def items(self):
        return enumerate(self._reverse)


def dump_tsv(table, path, render=str):
    """Write `id<TAB>string` lines ordered by id."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sid, key in table.items():
            f.write(f"{sid}\t{render(key)}\n")
