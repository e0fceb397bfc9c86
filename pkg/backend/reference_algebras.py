"""
Álgebras de referencia y generadores aleatorios para pruebas y para la
suite de propiedades.

Proporciona las cinco álgebras de referencia (B2, H3, N3, M2, K1), el
pentágono (retículo no distributivo), términos λ cerrados aleatorios y
familias de asambleas pequeñas.
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from lattice import Element, FiniteLattice, build_lattice
from implicative import ImplicativeAlgebra, from_applicative, from_heyting, validate_structure
from separator import generate, validate_separator
from lambda_calculus import Abstraction, Application, Cc, Parameter, Term, Variable
from assemblies import Assembly, make_assembly, small_assemblies

logger = logging.getLogger(__name__)

REFERENCE_NAMES = ('B2', 'H3', 'N3', 'M2', 'K1')


def chain(names: Sequence[str]) -> FiniteLattice:
    names = list(names)
    return build_lattice(names, list(zip(names, names[1:])))


def pentagon_lattice() -> FiniteLattice:
    """N5: 0 < a < c < 1 y 0 < b < 1; no es distributivo."""
    return build_lattice(['0', 'a', 'b', 'c', '1'],
                         [('0', 'a'), ('a', 'c'), ('c', '1'), ('0', 'b'), ('b', '1')])


def diamond_lattice() -> FiniteLattice:
    return build_lattice(['0', 'a', 'b', '1'], [('0', 'a'), ('0', 'b'), ('a', '1'), ('b', '1')])


def _top_separator(structure):
    return validate_separator(structure, [structure.lattice.top])


class ReferenceAlgebraGenerator:
    """
    Generador de álgebras de referencia y de datos aleatorios reproducibles.
    """

    def __init__(self, random_seed: int = 42):
        """
        Args:
            random_seed: Semilla para términos y elementos aleatorios
        """
        self.random_seed = random_seed
        self.rng = np.random.default_rng(random_seed)

    # ------------------------------------------------------------------
    # Álgebras

    def b2(self) -> ImplicativeAlgebra:
        """Álgebra de Boole de dos elementos con S = {⊤}."""
        structure = from_heyting(chain(['0', '1']))
        return ImplicativeAlgebra(structure, _top_separator(structure), 'B2')

    def h3(self) -> ImplicativeAlgebra:
        """Cadena de Heyting 0 < u < 1 con S = {⊤}."""
        structure = from_heyting(chain(['0', 'u', '1']))
        return ImplicativeAlgebra(structure, _top_separator(structure), 'H3')

    def n3(self) -> ImplicativeAlgebra:
        """
        Cadena 0 < u < 1 con implicación no Heyting: la fila de 0 es
        constante 1 y las de u y 1 son la identidad. S se genera desde ∅.
        """
        lattice = chain(['0', 'u', '1'])
        table = np.array([[2, 2, 2], [0, 1, 2], [0, 1, 2]], dtype=np.int64)
        structure = validate_structure(lattice, table)
        return ImplicativeAlgebra(structure, generate(structure), 'N3')

    def m2(self) -> ImplicativeAlgebra:
        """Diamante de Heyting {0, a, b, 1} con S = {⊤}."""
        structure = from_heyting(diamond_lattice())
        return ImplicativeAlgebra(structure, _top_separator(structure), 'M2')

    def k1(self) -> ImplicativeAlgebra:
        """Kleene sobre las partes de la estructura aplicativa de un punto (e·e = e)."""
        structure = from_applicative(['e'], {('e', 'e'): 'e'})
        return ImplicativeAlgebra(structure, generate(structure), 'K1')

    def reference_algebras(self) -> Dict[str, ImplicativeAlgebra]:
        return {'B2': self.b2(), 'H3': self.h3(), 'N3': self.n3(), 'M2': self.m2(), 'K1': self.k1()}

    def algebra(self, name: str) -> ImplicativeAlgebra:
        builders = {'B2': self.b2, 'H3': self.h3, 'N3': self.n3, 'M2': self.m2, 'K1': self.k1}
        if name not in builders:
            raise ValueError(f"Álgebra de referencia desconocida: '{name}'. Opciones: {list(builders)}")
        return builders[name]()

    # ------------------------------------------------------------------
    # Datos aleatorios

    def random_element(self, lattice: FiniteLattice) -> Element:
        return lattice.at(int(self.rng.integers(lattice.size)))

    def random_term(self, depth: int, parameters: Sequence[Element] = (),
                    allow_cc: bool = False, _scope: Optional[List[str]] = None) -> Term:
        """
        Término cerrado aleatorio de profundidad a lo sumo `depth`.

        Las hojas son variables ligadas en alcance, parámetros tomados de
        `parameters` o, si se permite, cc.
        """
        scope = list(_scope or [])
        leaves: List[Term] = [Variable(v) for v in scope]
        leaves += [Parameter(p) for p in parameters]
        if allow_cc:
            leaves.append(Cc())
        if depth <= 0 or (leaves and self.rng.random() < 0.25):
            if not leaves:
                var = f"v{len(scope)}"
                return Abstraction(var, Variable(var))
            return leaves[int(self.rng.integers(len(leaves)))]
        if self.rng.random() < 0.5 or not leaves:
            var = f"v{len(scope)}"
            body = self.random_term(depth - 1, parameters, allow_cc, scope + [var])
            return Abstraction(var, body)
        fun = self.random_term(depth - 1, parameters, allow_cc, scope)
        arg = self.random_term(depth - 1, parameters, allow_cc, scope)
        return Application(fun, arg)

    def random_terms(self, count: int, depth: int, parameters: Sequence[Element] = (),
                     allow_cc: bool = False) -> List[Term]:
        return [self.random_term(depth, parameters, allow_cc) for _ in range(count)]

    def random_redex(self, depth: int, parameters: Sequence[Element] = (),
                     allow_cc: bool = False, _scope: Optional[List[str]] = None) -> Term:
        """Término cerrado con al menos un β-redex (λv. M) N, a veces bajo abstracciones."""
        scope = list(_scope or [])
        depth = max(depth, 2)
        var = f"v{len(scope)}"
        if depth > 2 and self.rng.random() < 0.3:
            return Abstraction(var, self.random_redex(depth - 1, parameters, allow_cc, scope + [var]))
        body = self.random_term(depth - 2, parameters, allow_cc, scope + [var])
        arg = self.random_term(depth - 2, parameters, allow_cc, scope)
        return Application(Abstraction(var, body), arg)

    def random_redexes(self, count: int, depth: int, parameters: Sequence[Element] = (),
                       allow_cc: bool = False) -> List[Term]:
        return [self.random_redex(depth, parameters, allow_cc) for _ in range(count)]

    def assembly_family(self, alg: ImplicativeAlgebra, max_carrier: int = 2) -> List[Assembly]:
        return small_assemblies(alg, max_carrier)

    def random_assembly(self, alg: ImplicativeAlgebra, size: int, name: str = 'X') -> Assembly:
        members = alg.separator.members
        points = [f"x{i}" for i in range(size)]
        values = [members[int(self.rng.integers(len(members)))] for _ in points]
        return make_assembly(alg, points, values, name)
