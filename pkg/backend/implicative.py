"""
Estructuras y álgebras implicativas.

Una estructura implicativa es un retículo completo con una implicación que
cumple los axiomas de varianza y de distribución de ínfimos. Aquí viven la
aplicación y la abstracción, los conectivos codificados, los combinadores
canónicos y los constructores desde álgebras de Heyting y estructuras
aplicativas totales.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, TYPE_CHECKING

import numpy as np

from lattice import Element, FiniteLattice, heyting_implication, powerset_lattice

if TYPE_CHECKING:
    from separator import Separator

logger = logging.getLogger(__name__)

CONNECTIVES = ('bot', 'top', 'neg', 'conj', 'disj', 'exists')
COMBINATORS = ('K', 'S', 'I', 'cc', 'fork', 'KI')


class StructureError(ValueError):
    """Error base de estructuras implicativas."""


class AxiomViolation(StructureError):
    """La tabla de implicación no cumple un axioma; el mensaje lleva el testigo."""


class ArityError(StructureError):
    """Número de argumentos incorrecto para un conectivo."""


class InternalInvariantError(RuntimeError):
    """Una garantía de la teoría no se cumplió: indica un error de implementación."""


class ImplicativeStructure:
    """
    Terna (A, ≤, →) sobre un retículo finito.

    La tabla `imp` es una matriz densa de índices. La tabla de aplicación se
    precalcula como memo interno; su valor es siempre el ínfimo de la definición.
    """

    def __init__(self, lattice: FiniteLattice, imp: np.ndarray, origin: str = 'explicit'):
        self.lattice = lattice
        table = np.array(imp, dtype=np.int64)
        table.setflags(write=False)
        self.imp_table = table
        self.origin = origin
        self._app_table: Optional[np.ndarray] = None
        self._combinators: Dict[str, int] = {}

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def is_heyting(self) -> bool:
        return self.origin == 'heyting'

    # ------------------------------------------------------------------
    # Nivel de índices (uso interno y de los demás módulos)

    def imp_i(self, a: int, b: int) -> int:
        return int(self.imp_table[a, b])

    def app_i(self, a: int, b: int) -> int:
        if self._app_table is None:
            n = self.size
            lat = self.lattice
            table = np.zeros((n, n), dtype=np.int64)
            for x in range(n):
                for y in range(n):
                    table[x, y] = lat.meet_indices(
                        c for c in range(n) if lat.leq_index(x, int(self.imp_table[y, c])))
            table.setflags(write=False)
            self._app_table = table
        return int(self._app_table[a, b])

    def abs_i(self, values: Sequence[int]) -> int:
        """λf := ⋀_a (a → f(a)), con f dada como lista indexada por posición."""
        return self.lattice.meet_indices(int(self.imp_table[a, values[a]]) for a in range(self.size))

    def conj_i(self, a: int, b: int) -> int:
        imp = self.imp_table
        return self.lattice.meet_indices(
            imp[imp[a, imp[b, c]], c] for c in range(self.size))

    def disj_i(self, a: int, b: int) -> int:
        imp = self.imp_table
        return self.lattice.meet_indices(
            imp[imp[a, c], imp[imp[b, c], c]] for c in range(self.size))

    def exists_i(self, family: Sequence[int]) -> int:
        imp = self.imp_table
        lat = self.lattice
        return lat.meet_indices(
            imp[lat.meet_indices(imp[a, c] for a in family), c] for c in range(self.size))

    def combinator_i(self, name: str) -> int:
        if name not in COMBINATORS:
            raise StructureError(f"Combinador desconocido: '{name}'")
        if name not in self._combinators:
            self._combinators[name] = self._compute_combinator(name)
        return self._combinators[name]

    def _compute_combinator(self, name: str) -> int:
        imp = self.imp_table
        lat = self.lattice
        elems = range(self.size)
        if name == 'K':
            values = (imp[a, imp[b, a]] for a in elems for b in elems)
        elif name == 'KI':
            values = (imp[a, imp[b, b]] for a in elems for b in elems)
        elif name == 'S':
            values = (imp[imp[a, imp[b, c]], imp[imp[a, b], imp[a, c]]]
                      for a in elems for b in elems for c in elems)
        elif name == 'I':
            return self.abs_i(list(elems))
        elif name == 'cc':
            values = (imp[imp[imp[a, b], a], a] for a in elems for b in elems)
        else:
            values = (imp[a, imp[b, lat.meet_index(a, b)]] for a in elems for b in elems)
        return lat.meet_indices(int(v) for v in values)

    # ------------------------------------------------------------------
    # API con elementos

    def _idx(self, e: Element) -> int:
        return self.lattice.index_of(e)

    def _el(self, i: int) -> Element:
        return self.lattice.at(i)

    def imp(self, a: Element, b: Element) -> Element:
        return self._el(self.imp_i(self._idx(a), self._idx(b)))

    def app(self, a: Element, b: Element) -> Element:
        """ab := ⋀{c : a ≤ (b → c)}."""
        return self._el(self.app_i(self._idx(a), self._idx(b)))

    def abs(self, f: Mapping[Element, Element]) -> Element:
        """λf := ⋀_a (a → f(a)) para una función finita total."""
        values = [None] * self.size
        for a, b in f.items():
            values[self._idx(a)] = self._idx(b)
        if any(v is None for v in values):
            missing = [self.lattice.names[i] for i, v in enumerate(values) if v is None]
            raise StructureError(f"La función no es total; faltan: {missing}")
        return self._el(self.abs_i(values))

    def connective(self, kind: str, *args) -> Element:
        """Conectivos por codificación de segundo orden."""
        arity = {'bot': 0, 'top': 0, 'neg': 1, 'conj': 2, 'disj': 2, 'exists': 1}
        if kind not in arity:
            raise StructureError(f"Conectivo desconocido: '{kind}'")
        if len(args) != arity[kind]:
            raise ArityError(f"'{kind}' espera {arity[kind]} argumento(s), se recibieron {len(args)}")
        lat = self.lattice
        if kind == 'bot':
            return lat.bottom
        if kind == 'top':
            return lat.top
        if kind == 'neg':
            return self._el(self.imp_i(self._idx(args[0]), lat.bottom_index))
        if kind == 'conj':
            return self._el(self.conj_i(self._idx(args[0]), self._idx(args[1])))
        if kind == 'disj':
            return self._el(self.disj_i(self._idx(args[0]), self._idx(args[1])))
        family = [self._idx(e) for e in args[0]]
        return self._el(self.exists_i(family))

    def neg(self, a: Element) -> Element:
        return self.connective('neg', a)

    def conj(self, a: Element, b: Element) -> Element:
        return self.connective('conj', a, b)

    def disj(self, a: Element, b: Element) -> Element:
        return self.connective('disj', a, b)

    def exists(self, family: Iterable[Element]) -> Element:
        return self.connective('exists', list(family))

    def combinator(self, name: str) -> Element:
        return self._el(self.combinator_i(name))

    def row(self, a: Element) -> Tuple[Element, ...]:
        i = self._idx(a)
        return tuple(self._el(int(v)) for v in self.imp_table[i])

    def __repr__(self) -> str:
        return f"ImplicativeStructure({list(self.lattice.names)}, origin={self.origin!r})"


@dataclass(frozen=True, eq=False)
class ImplicativeAlgebra:
    """Estructura implicativa equipada con un separador."""
    structure: ImplicativeStructure
    separator: 'Separator'
    name: str = 'A'

    def __post_init__(self):
        if self.separator.structure is not self.structure:
            raise StructureError("El separador pertenece a otra estructura implicativa")

    @property
    def lattice(self) -> FiniteLattice:
        return self.structure.lattice

    def contains_i(self, a: int) -> bool:
        return self.separator.contains_i(a)

    def contains(self, e: Element) -> bool:
        return self.separator.contains(e)

    def __repr__(self) -> str:
        members = ' '.join(str(e) for e in self.separator.members)
        return f"ImplicativeAlgebra({self.name}: S={{{members}}})"


def validate_structure(lattice: FiniteLattice, table) -> ImplicativeStructure:
    """
    Verifica exhaustivamente los dos axiomas de una tabla de implicación.

    El axioma de distribución se comprueba fila por fila: cada b ↦ a→b debe
    preservar ínfimos binarios y enviar ⊤ a ⊤, lo que basta por finitud.
    """
    n = lattice.size
    table = np.array(table, dtype=np.int64)
    if table.shape != (n, n):
        raise StructureError(f"La tabla de implicación debe ser {n}x{n}, se recibió {table.shape}")
    if table.size and (table.min() < 0 or table.max() >= n):
        raise StructureError("La tabla de implicación contiene índices fuera de rango")
    return _validated(lattice, table, origin='explicit')


def _validated(lattice: FiniteLattice, table: np.ndarray, origin: str) -> ImplicativeStructure:
    n = lattice.size
    names = lattice.names
    leq = lattice.leq_index

    for b in range(n):
        for a in range(n):
            for a2 in range(n):
                if leq(a2, a) and not leq(int(table[a, b]), int(table[a2, b])):
                    raise AxiomViolation(
                        f"Axioma de varianza violado: {names[a2]} ≤ {names[a]} pero "
                        f"({names[a]}→{names[b]}) ≰ ({names[a2]}→{names[b]})")
    for a in range(n):
        for b in range(n):
            for b2 in range(n):
                if leq(b, b2) and not leq(int(table[a, b]), int(table[a, b2])):
                    raise AxiomViolation(
                        f"Axioma de varianza violado: {names[b]} ≤ {names[b2]} pero "
                        f"({names[a]}→{names[b]}) ≰ ({names[a]}→{names[b2]})")

    top = lattice.top_index
    for a in range(n):
        if table[a, top] != top:
            raise AxiomViolation(
                f"Axioma de distribución violado (ínfimo vacío): {names[a]}→⊤ = "
                f"{names[int(table[a, top])]} ≠ ⊤")
        for b in range(n):
            for b2 in range(b + 1, n):
                lhs = int(table[a, lattice.meet_index(b, b2)])
                rhs = lattice.meet_index(int(table[a, b]), int(table[a, b2]))
                if lhs != rhs:
                    raise AxiomViolation(
                        f"Axioma de distribución violado en a={names[a]}, "
                        f"B={{{names[b]}, {names[b2]}}}")

    return ImplicativeStructure(lattice, table, origin=origin)


def from_heyting(lattice: FiniteLattice) -> ImplicativeStructure:
    """Estructura implicativa de un álgebra de Heyting completa (implicación por adjunción)."""
    table = heyting_implication(lattice)
    structure = _validated(lattice, table, origin='heyting')
    logger.debug(f"Estructura de Heyting sobre {list(lattice.names)}")
    return structure


def from_applicative(carrier: Sequence[str], apply_table: Mapping[Tuple[str, str], str]) -> ImplicativeStructure:
    """
    Estructura de Kleene sobre las partes de una estructura aplicativa total.

    a → b := {x : ∀y ∈ a, x·y ∈ b}; el índice de cada elemento es su máscara de bits.
    """
    points = list(carrier)
    position = {p: i for i, p in enumerate(points)}
    k = len(points)
    product = np.zeros((k, k), dtype=np.int64)
    for x in points:
        for y in points:
            if (x, y) not in apply_table:
                raise StructureError(f"La tabla de aplicación no es total: falta {x}·{y}")
            value = apply_table[(x, y)]
            if value not in position:
                raise StructureError(f"{x}·{y} = {value} no pertenece al portador")
            product[position[x], position[y]] = position[value]

    lattice = powerset_lattice(points)
    size = 1 << k
    table = np.zeros((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            mask = 0
            for x in range(k):
                if all(b >> int(product[x, y]) & 1 for y in range(k) if a >> y & 1):
                    mask |= 1 << x
            table[a, b] = mask

    try:
        return _validated(lattice, table, origin='applicative')
    except AxiomViolation as e:
        raise InternalInvariantError(f"La implicación de Kleene debería cumplir los axiomas: {e}") from e
