"""
Paths and path patterns as tuples of atoms.

An atom is (predicate, direction, element, is_class). Paths only hold
individuals; a pattern holds at least one class. Tuples compare and hash by
value, and the same tuple is the key interned in the feature table.
"""

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

from kg_path_features.exceptions import InvalidInputError
from kg_path_features.neighbors import BACKWARD

PATH = "path"
PATTERN = "pattern"


class Atom(NamedTuple):
    predicate: int
    direction: int
    element: int
    is_class: bool = False


@dataclass(frozen=True)
class PathFeature:
    atoms: tuple
    id: int = None
    support: object = None

    @property
    def kind(self):
        return kind_of(self.atoms)

    def __len__(self):
        return len(self.atoms)


def kind_of(atoms):
    return PATTERN if any(a.is_class for a in atoms) else PATH


def _atoms(feature):
    return feature.atoms if isinstance(feature, PathFeature) else feature


def atom_more_specific(a, b, ontology):
    return (
        a.predicate == b.predicate
        and a.direction == b.direction
        and ontology.element_more_specific(a.element, a.is_class, b.element, b.is_class)
    )


def feature_more_specific(p1, p2, ontology):
    a1, a2 = _atoms(p1), _atoms(p2)
    return len(a1) == len(a2) and all(atom_more_specific(x, y, ontology) for x, y in zip(a1, a2))


def strictly_more_specific(p1, p2, ontology):
    return feature_more_specific(p1, p2, ontology) and not feature_more_specific(p2, p1, ontology)


def render_atom(atom, tables):
    predicate = tables.predicates.resolve(atom.predicate)
    element = tables.vertices.resolve(atom.element)
    if atom.is_class:
        element += "#class"
    if atom.direction == BACKWARD:
        return f"<-[{predicate}]-({element})"
    return f"-[{predicate}]->({element})"


def render(feature, tables):
    return "".join(render_atom(a, tables) for a in _atoms(feature))


def enumerate_generalizations(path, ontology, t, b_gen=None):
    """Every pattern capturing `path` within `t` levels, `path` excluded."""
    atoms = _atoms(path)
    if kind_of(atoms) != PATH:
        raise InvalidInputError("only paths can be enumerated for generalizations")
    options = []
    for a in atoms:
        choices = [a]
        for c in sorted(ontology.generalizations(a.element, t, b_gen)):
            choices.append(Atom(a.predicate, a.direction, c, True))
        options.append(choices)
    return {tuple(p) for p in product(*options)} - {tuple(atoms)}

