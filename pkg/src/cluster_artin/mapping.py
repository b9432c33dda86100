"""The explicit homomorphisms between diagram Artin groups.

Three maps are provided.  For a mutation G' = mu_k(G), `phi(G, k)` sends the
group of G' into the group of G by conjugating at k along arrows into k.
`delta(G)` inverts every generator into the group of the opposite diagram.
`psi(G, k)` is the composite delta' . phi_op . delta running the other way
around the mutation square; on generators the round trips with phi reduce to
the identity as free words, with no relations needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .diagram import Diagram, mutate_diagram, opposite
from .presentation import Presentation, Word, artin_presentation


class MappingError(ValueError):
    """Word and map alphabets do not line up."""


Presenter = Callable[[Diagram], Presentation]


@dataclass(frozen=True)
class GroupMap:
    """A generator-image assignment between two presentations."""

    source: Presentation
    target: Presentation
    images: tuple[Word, ...]
    label: str
    stages: tuple["GroupMap", ...] = ()

    def __post_init__(self):
        if len(self.images) != self.source.n_generators:
            raise MappingError("one image word per source generator required")
        for w in self.images:
            if w.max_generator() > self.target.n_generators:
                raise MappingError(f"image {w.letters} leaves the target alphabet")

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "images": [w.to_json() for w in self.images],
        }


def transport(gmap: GroupMap, w: Word) -> Word:
    """Homomorphic extension of the generator images, freely reduced."""
    if w.max_generator() > gmap.source.n_generators:
        raise MappingError(
            f"word {w.letters} is not over the source alphabet of {gmap.label}"
        )
    letters: list[int] = []
    for x in w.letters:
        image = gmap.images[abs(x) - 1]
        if x < 0:
            image = image.inverse()
        letters.extend(image.letters)
    return Word(tuple(letters))


def compose(outer: GroupMap, inner: GroupMap) -> GroupMap:
    """outer . inner, with precomposed images."""
    if inner.target.label != outer.source.label:
        raise MappingError(
            f"cannot compose {outer.label} after {inner.label}: alphabets differ"
        )
    images = tuple(transport(outer, w) for w in inner.images)
    return GroupMap(inner.source, outer.target, images,
                    f"{outer.label}.{inner.label}", stages=(inner, outer))


def phi(G: Diagram, k: int, presenter: Presenter = artin_presentation) -> GroupMap:
    """The mutation comparison map from the group of mu_k(G) into the group of G.

    A generator r_i maps to s_k s_i s_k^-1 exactly when G has an arrow
    i -> k, and to s_i otherwise (including i = k).
    """
    source = presenter(mutate_diagram(G, k))
    target = presenter(G)
    images = tuple(
        Word((k, i, -k)) if G.arrow(i, k) else Word((i,))
        for i in range(1, G.n + 1)
    )
    return GroupMap(source, target, images, f"Phi({k})")


def delta(G: Diagram, presenter: Presenter = artin_presentation) -> GroupMap:
    """Generator inversion into the opposite diagram's group."""
    source = presenter(G)
    target = presenter(opposite(G))
    images = tuple(Word((-i,)) for i in range(1, G.n + 1))
    return GroupMap(source, target, images, "Delta")


def psi(G: Diagram, k: int, presenter: Presenter = artin_presentation) -> GroupMap:
    """The composite Delta' . phi_op . Delta from the group of G to that of mu_k(G).

    phi_op is the comparison map based at the opposite of the mutated diagram;
    the composite is stored stage by stage so reports can show intermediate
    words exactly as in the proof.
    """
    d1 = delta(G, presenter)
    base_op = mutate_diagram(opposite(G), k)
    f_op = phi(base_op, k, presenter)
    d2 = delta(base_op, presenter)
    if d1.target.label != f_op.source.label or f_op.target.label != d2.source.label:
        raise MappingError("mutation and opposite failed to commute")
    images = tuple(
        transport(d2, transport(f_op, transport(d1, Word((i,)))))
        for i in range(1, G.n + 1)
    )
    return GroupMap(d1.source, d2.target, images, f"Psi({k})",
                    stages=(d1, f_op, d2))
