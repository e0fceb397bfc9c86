"""
Separadores: validación, generación mínima, clasificación y preórdenes de
entailment.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from lattice import Element
from implicative import ImplicativeAlgebra, ImplicativeStructure, InternalInvariantError

logger = logging.getLogger(__name__)


class SeparatorViolation(ValueError):
    """El conjunto no es un separador; el mensaje nombra la condición y el testigo."""


class Separator:
    """Separador almacenado como bitset sobre los elementos de la estructura."""

    def __init__(self, structure: ImplicativeStructure, mask: np.ndarray):
        self.structure = structure
        mask = np.array(mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask

    @property
    def member_indices(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.mask)]

    @property
    def members(self) -> List[Element]:
        return [self.structure.lattice.at(i) for i in self.member_indices]

    def contains_i(self, a: int) -> bool:
        return bool(self.mask[a])

    def contains(self, e: Element) -> bool:
        return self.contains_i(self.structure.lattice.index_of(e))

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Separator) and other.structure is self.structure
                and bool(np.array_equal(other.mask, self.mask)))

    def __hash__(self) -> int:
        return hash(self.mask.tobytes())

    @property
    def min_index(self) -> Optional[int]:
        """Índice de s₀ = min(S) si el ínfimo de S pertenece a S."""
        s0 = self.structure.lattice.meet_indices(self.member_indices)
        return s0 if self.mask[s0] else None

    @property
    def min_element(self) -> Optional[Element]:
        s0 = self.min_index
        return None if s0 is None else self.structure.lattice.at(s0)

    def __repr__(self) -> str:
        return f"Separator({{{' '.join(e.name for e in self.members)}}})"


def _violation(structure: ImplicativeStructure, mask: np.ndarray) -> Optional[str]:
    lat = structure.lattice
    names = lat.names
    n = lat.size
    for a in np.flatnonzero(mask):
        for b in lat.up_set(int(a)):
            if not mask[b]:
                return (f"Clausura hacia arriba violada: {names[a]} ∈ S, "
                        f"{names[a]} ≤ {names[b]} pero {names[b]} ∉ S")
    for name in ('K', 'S'):
        c = structure.combinator_i(name)
        if not mask[c]:
            return f"Axiomas de Hilbert violados: {name} = {names[c]} ∉ S"
    for a in np.flatnonzero(mask):
        for b in range(n):
            if mask[structure.imp_i(int(a), b)] and not mask[b]:
                return (f"Modus ponens violado: ({names[a]}→{names[b]}) ∈ S y "
                        f"{names[a]} ∈ S pero {names[b]} ∉ S")
    return None


def validate_separator(structure: ImplicativeStructure, members: Iterable[Element]) -> Separator:
    """Verifica exhaustivamente las tres condiciones de separador."""
    mask = np.zeros(structure.size, dtype=bool)
    for e in members:
        mask[structure.lattice.index_of(e)] = True
    problem = _violation(structure, mask)
    if problem:
        raise SeparatorViolation(problem)
    return Separator(structure, mask)


def generate(structure: ImplicativeStructure, generators: Iterable[Element] = ()) -> Separator:
    """
    Menor separador que contiene los generadores.

    Punto fijo desde generadores ∪ {K, S}, alternando clausura hacia arriba y
    barridos de modus ponens hasta estabilizar (a lo sumo |A| rondas).
    """
    lat = structure.lattice
    n = lat.size
    mask = np.zeros(n, dtype=bool)
    for e in generators:
        mask[lat.index_of(e)] = True
    mask[structure.combinator_i('K')] = True
    mask[structure.combinator_i('S')] = True

    order = lat.order_table
    rounds = 0
    while True:
        rounds += 1
        upward = order[mask].any(axis=0)
        grown = upward.copy()
        for a in np.flatnonzero(upward):
            for b in range(n):
                if upward[structure.imp_i(int(a), b)]:
                    grown[b] = True
        if np.array_equal(grown, mask):
            break
        mask = grown

    problem = _violation(structure, mask)
    if problem:
        raise InternalInvariantError(f"El punto fijo de generación no es un separador: {problem}")
    logger.debug(f"Separador generado en {rounds} rondas: {int(mask.sum())} elementos")
    return Separator(structure, mask)


@dataclass(frozen=True)
class SeparatorFlags:
    consistent: bool
    classical: bool
    filter: bool
    principal: bool

    def as_dict(self) -> dict:
        return {'consistent': self.consistent, 'classical': self.classical,
                'filter': self.filter, 'principal': self.principal}


def classify(alg: ImplicativeAlgebra) -> SeparatorFlags:
    """consistente: ⊥ ∉ S; clásico: cc ∈ S; filtro: fork ∈ S; principal: ⋀S ∈ S."""
    structure = alg.structure
    sep = alg.separator
    flags = SeparatorFlags(
        consistent=not sep.contains_i(structure.lattice.bottom_index),
        classical=sep.contains_i(structure.combinator_i('cc')),
        filter=sep.contains_i(structure.combinator_i('fork')),
        principal=sep.min_index is not None,
    )
    if flags.principal and not flags.filter:
        raise InternalInvariantError(f"Separador principal que no es filtro en {alg.name}")
    return flags


def entails(alg: ImplicativeAlgebra, a: Element, b: Element) -> bool:
    """a ⊢_S b :≡ (a→b) ∈ S."""
    return alg.contains(alg.structure.imp(a, b))


def entails_indexed(alg: ImplicativeAlgebra, phi: Sequence[Element], psi: Sequence[Element]) -> bool:
    """φ ⊢_S[I] ψ :≡ ⋀_i (φ_i → ψ_i) ∈ S, con I posicional."""
    if len(phi) != len(psi):
        raise ValueError(f"Familias de distinto largo: {len(phi)} y {len(psi)}")
    structure = alg.structure
    lat = structure.lattice
    value = lat.meet_indices(structure.imp_i(lat.index_of(a), lat.index_of(b)) for a, b in zip(phi, psi))
    return alg.contains_i(value)


def entailment_classes(alg: ImplicativeAlgebra) -> List[List[Element]]:
    """Clases de inter-entailment en orden declarado (el portador de A/S)."""
    lat = alg.lattice
    structure = alg.structure
    assigned = [False] * lat.size
    classes = []
    for a in range(lat.size):
        if assigned[a]:
            continue
        cls = []
        for b in range(a, lat.size):
            if (not assigned[b] and alg.contains_i(structure.imp_i(a, b))
                    and alg.contains_i(structure.imp_i(b, a))):
                assigned[b] = True
                cls.append(lat.at(b))
        classes.append(cls)
    return classes
