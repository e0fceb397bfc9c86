"""
Retículos completos finitos.

Un retículo se construye a partir de una relación de cobertura; el orden es su
clausura reflexiva y transitiva. Los elementos se referencian por posición en
el orden declarado y todas las tablas son matrices densas de numpy.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import networkx as nx

logger = logging.getLogger(__name__)


class LatticeError(ValueError):
    """Error base de construcción o uso de retículos."""


class CycleError(LatticeError):
    """La clausura de la relación de cobertura viola la antisimetría."""


class NotALattice(LatticeError):
    """Falta un ínfimo, un supremo, el tope o el fondo."""


class NotHeyting(LatticeError):
    """El retículo no es un álgebra de Heyting completa."""


class ForeignElement(LatticeError):
    """Se mezclaron elementos de retículos distintos."""


@dataclass(frozen=True)
class Element:
    """Elemento de un retículo finito, identificado por su posición."""
    index: int
    lattice: 'FiniteLattice' = field(repr=False)

    @property
    def name(self) -> str:
        return self.lattice.names[self.index]

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Element({self.name!r})"


class FiniteLattice:
    """
    Retículo completo finito.

    La igualdad es por identidad: dos retículos construidos por separado no
    comparten elementos aunque tengan las mismas tablas.
    """

    def __init__(self, names: Sequence[str], leq: np.ndarray):
        self.names: Tuple[str, ...] = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise LatticeError(f"Nombres de elementos duplicados: {list(self.names)}")
        self._positions: Dict[str, int] = {n: i for i, n in enumerate(self.names)}

        table = np.array(leq, dtype=bool)
        n = len(self.names)
        if table.shape != (n, n):
            raise LatticeError(f"La tabla de orden debe ser {n}x{n}, se recibió {table.shape}")
        table.setflags(write=False)
        self._leq = table

        self._check_order()
        self._meet_table = self._scan_binary(lower=True)
        self._join_table = self._scan_binary(lower=False)
        self.top_index = self._extreme(top=True)
        self.bottom_index = self._extreme(top=False)
        self._elements = [Element(i, self) for i in range(n)]

    # ------------------------------------------------------------------
    # Validación

    def _check_order(self):
        leq = self._leq
        n = len(self.names)
        if n == 0:
            raise NotALattice("Un retículo completo necesita al menos un elemento (tope y fondo)")
        if not np.all(np.diag(leq)):
            raise LatticeError("El orden no es reflexivo")
        off = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
        if len(off):
            a, b = off[0]
            raise CycleError(f"Antisimetría violada entre '{self.names[a]}' y '{self.names[b]}'")
        # transitividad: leq∘leq ⊆ leq
        composed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        bad = np.argwhere(composed & ~leq)
        if len(bad):
            a, c = bad[0]
            raise LatticeError(f"El orden no es transitivo en ('{self.names[a]}', '{self.names[c]}')")

    def _scan_binary(self, lower: bool) -> np.ndarray:
        """Ínfimos (o supremos) binarios por barrido de candidatos."""
        n = len(self.names)
        order = self._leq if lower else self._leq.T
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                bound = self._greatest(np.flatnonzero(order[:, a] & order[:, b]), order)
                if bound is None:
                    kind = 'ínfimo' if lower else 'supremo'
                    raise NotALattice(
                        f"El par ('{self.names[a]}', '{self.names[b]}') no tiene {kind}")
                table[a, b] = table[b, a] = bound
        table.setflags(write=False)
        return table

    @staticmethod
    def _greatest(candidates: np.ndarray, order: np.ndarray):
        for g in candidates:
            if order[candidates, g].all():
                return int(g)
        return None

    def _extreme(self, top: bool) -> int:
        order = self._leq if top else self._leq.T
        for i in range(len(self.names)):
            if order[:, i].all():
                return i
        raise NotALattice("Falta el tope" if top else "Falta el fondo")

    # ------------------------------------------------------------------
    # Acceso a elementos

    def __len__(self) -> int:
        return len(self.names)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> List[Element]:
        return list(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def element(self, name: str) -> Element:
        try:
            return self._elements[self._positions[name]]
        except KeyError:
            raise LatticeError(f"Elemento desconocido: '{name}'") from None

    def at(self, index: int) -> Element:
        return self._elements[index]

    def has_name(self, name: str) -> bool:
        return name in self._positions

    @property
    def top(self) -> Element:
        return self._elements[self.top_index]

    @property
    def bottom(self) -> Element:
        return self._elements[self.bottom_index]

    def index_of(self, e: Element) -> int:
        if not isinstance(e, Element) or e.lattice is not self:
            raise ForeignElement(f"El elemento {e!r} no pertenece a este retículo")
        return e.index

    # ------------------------------------------------------------------
    # Orden, ínfimos y supremos

    @property
    def order_table(self) -> np.ndarray:
        return self._leq

    def leq_index(self, a: int, b: int) -> bool:
        return bool(self._leq[a, b])

    def meet_index(self, a: int, b: int) -> int:
        return int(self._meet_table[a, b])

    def join_index(self, a: int, b: int) -> int:
        return int(self._join_table[a, b])

    def meet_indices(self, indices: Iterable[int]) -> int:
        result = self.top_index
        for i in indices:
            result = self._meet_table[result, i]
        return int(result)

    def join_indices(self, indices: Iterable[int]) -> int:
        result = self.bottom_index
        for i in indices:
            result = self._join_table[result, i]
        return int(result)

    def leq(self, a: Element, b: Element) -> bool:
        return self.leq_index(self.index_of(a), self.index_of(b))

    def meet(self, a: Element, b: Element) -> Element:
        return self._elements[self.meet_index(self.index_of(a), self.index_of(b))]

    def join(self, a: Element, b: Element) -> Element:
        return self._elements[self.join_index(self.index_of(a), self.index_of(b))]

    def meet_all(self, subset: Iterable[Element]) -> Element:
        """Ínfimo de un subconjunto; el ínfimo del vacío es el tope."""
        return self._elements[self.meet_indices(self.index_of(e) for e in subset)]

    def join_all(self, subset: Iterable[Element]) -> Element:
        """Supremo de un subconjunto; el supremo del vacío es el fondo."""
        return self._elements[self.join_indices(self.index_of(e) for e in subset)]

    def up_set(self, a: int) -> List[int]:
        return [int(b) for b in np.flatnonzero(self._leq[a, :])]

    def covers(self) -> List[Tuple[int, int]]:
        """Pares de cobertura (diagrama de Hasse) en orden declarado."""
        n = len(self.names)
        strict = self._leq & ~np.eye(n, dtype=bool)
        pairs = []
        for a in range(n):
            for b in range(n):
                if strict[a, b] and not any(strict[a, c] and strict[c, b] for c in range(n)):
                    pairs.append((a, b))
        return pairs

    def table_bytes(self) -> bytes:
        return self._leq.tobytes()

    def __repr__(self) -> str:
        return f"FiniteLattice({list(self.names)})"


def build_lattice(elements: Sequence[str], cover_pairs: Iterable[Tuple[str, str]]) -> FiniteLattice:
    """
    Construye un retículo finito desde una relación de cobertura.

    Args:
        elements: Nombres de los elementos en orden declarado
        cover_pairs: Pares (inferior, superior)

    Returns:
        FiniteLattice validado
    """
    names = list(elements)
    if len(set(names)) != len(names):
        raise LatticeError(f"Nombres de elementos duplicados: {names}")
    position = {n: i for i, n in enumerate(names)}

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(names)))
    for lower, upper in cover_pairs:
        if lower not in position or upper not in position:
            raise LatticeError(f"Par de cobertura con nombre no declarado: ({lower}, {upper})")
        if lower != upper:
            graph.add_edge(position[lower], position[upper])

    if not nx.is_directed_acyclic_graph(graph):
        cycle = [names[u] for u, _ in nx.find_cycle(graph)]
        raise CycleError(f"La relación de cobertura tiene un ciclo: {' < '.join(cycle)}")

    leq = np.eye(len(names), dtype=bool)
    for i in range(len(names)):
        for j in nx.descendants(graph, i):
            leq[i, j] = True

    lattice = FiniteLattice(names, leq)
    logger.debug(f"Retículo construido con {len(names)} elementos")
    return lattice


def heyting_implication(lattice: FiniteLattice) -> np.ndarray:
    """
    Implicación de Heyting: a→b := ⋁{c : c∧a ≤ b}.

    La adjunción c∧a ≤ b ⇔ c ≤ a→b se verifica para todas las ternas antes de
    devolver la tabla.
    """
    n = lattice.size
    table = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            table[a, b] = lattice.join_indices(
                c for c in range(n) if lattice.leq_index(lattice.meet_index(c, a), b))

    for a in range(n):
        for b in range(n):
            for c in range(n):
                left = lattice.leq_index(lattice.meet_index(c, a), b)
                right = lattice.leq_index(c, int(table[a, b]))
                if left != right:
                    names = lattice.names
                    raise NotHeyting(
                        f"Adjunción de Heyting violada en (a={names[a]}, b={names[b]}, c={names[c]})")
    table.setflags(write=False)
    return table


def powerset_lattice(points: Sequence[str]) -> FiniteLattice:
    """Partes de un conjunto finito ordenadas por inclusión; el índice es la máscara de bits."""
    points = list(points)
    k = len(points)

    def label(mask: int) -> str:
        return '{' + ','.join(p for i, p in enumerate(points) if mask >> i & 1) + '}'

    names = [label(mask) for mask in range(1 << k)]
    covers = [(names[mask], names[mask | (1 << i)])
              for mask in range(1 << k) for i in range(k) if not mask >> i & 1]
    return build_lattice(names, covers)
