"""
Tests unitarios para estructuras implicativas.

Valida los axiomas sobre tablas explícitas, la aplicación y la abstracción
definidas por ínfimos, los conectivos codificados y los combinadores sobre
las álgebras de referencia.
"""

import unittest
import itertools
import sys
import os

import numpy as np

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from implicative import (
    ArityError, AxiomViolation, ImplicativeAlgebra, StructureError,
    from_applicative, from_heyting, validate_structure,
)
from lattice import NotHeyting
from separator import generate
from reference_algebras import ReferenceAlgebraGenerator, chain, pentagon_lattice


class TestValidateStructure(unittest.TestCase):
    """Tests para la validación de tablas de implicación."""

    def setUp(self):
        self.chain3 = chain(['0', 'u', '1'])

    def test_non_heyting_chain_is_valid(self):
        table = [[2, 2, 2], [0, 1, 2], [0, 1, 2]]
        structure = validate_structure(self.chain3, table)
        self.assertFalse(structure.is_heyting)
        self.assertEqual([e.name for e in structure.row(self.chain3.element('0'))], ['1', '1', '1'])

    def test_variance_violation(self):
        table = [[2, 2, 2], [0, 0, 2], [0, 1, 2]]
        with self.assertRaises(AxiomViolation) as ctx:
            validate_structure(self.chain3, table)
        self.assertIn('varianza', str(ctx.exception))

    def test_empty_meet_violation(self):
        with self.assertRaises(AxiomViolation) as ctx:
            validate_structure(chain(['0', '1']), [[1, 1], [0, 0]])
        self.assertIn('distribución', str(ctx.exception))

    def test_wrong_shape(self):
        with self.assertRaises(StructureError):
            validate_structure(self.chain3, np.zeros((2, 2), dtype=int))

    def test_out_of_range(self):
        with self.assertRaises(StructureError):
            validate_structure(self.chain3, [[2, 2, 5], [0, 1, 2], [0, 1, 2]])

    def test_pentagon_has_no_heyting_structure(self):
        with self.assertRaises(NotHeyting):
            from_heyting(pentagon_lattice())


class TestOperations(unittest.TestCase):
    """Tests para aplicación, abstracción, conectivos y combinadores."""

    def setUp(self):
        generator = ReferenceAlgebraGenerator(random_seed=42)
        self.b2 = generator.b2().structure
        self.h3 = generator.h3().structure
        self.n3 = generator.n3().structure
        self.algebras = generator.reference_algebras()

    def el(self, structure, name):
        return structure.lattice.element(name)

    def test_b2_values(self):
        s = self.b2
        one, zero = self.el(s, '1'), self.el(s, '0')
        self.assertEqual(s.app(one, zero), zero)
        self.assertEqual(s.abs({zero: zero, one: zero}), zero)
        self.assertEqual(s.exists([one]), one)
        self.assertEqual(s.combinator('K'), one)
        self.assertEqual(s.combinator('cc'), one)

    def test_n3_values(self):
        s = self.n3
        u, one = self.el(s, 'u'), self.el(s, '1')
        self.assertEqual(s.app(u, u), u)
        for name in ('K', 'S', 'fork', 'I', 'KI'):
            self.assertEqual(s.combinator(name), u, name)
        self.assertEqual(s.conj(one, one), u)
        identity = {e: e for e in s.lattice.elements}
        self.assertEqual(s.abs(identity), u)

    def test_h3_peirce(self):
        self.assertEqual(self.h3.combinator('cc').name, 'u')

    def test_abs_requires_total_function(self):
        s = self.b2
        with self.assertRaises(StructureError):
            s.abs({self.el(s, '0'): self.el(s, '1')})

    def test_connective_arity(self):
        s = self.n3
        with self.assertRaises(ArityError):
            s.connective('neg')
        with self.assertRaises(ArityError):
            s.connective('conj', self.el(s, 'u'))
        self.assertEqual(s.connective('bot').name, '0')
        self.assertEqual(s.connective('top').name, '1')
        with self.assertRaises(StructureError):
            s.connective('implies', self.el(s, 'u'))

    def test_unknown_combinator(self):
        with self.assertRaises(StructureError):
            self.n3.combinator('Y')

    def test_adjunction_exhaustive(self):
        for name, alg in self.algebras.items():
            s = alg.structure
            lat = s.lattice
            for a, b, c in itertools.product(range(lat.size), repeat=3):
                self.assertEqual(lat.leq_index(s.app_i(a, b), c),
                                 lat.leq_index(a, s.imp_i(b, c)), name)

    def test_application_monotone(self):
        for name, alg in self.algebras.items():
            s = alg.structure
            lat = s.lattice
            for a, a2, b, b2 in itertools.product(range(lat.size), repeat=4):
                if lat.leq_index(a, a2) and lat.leq_index(b, b2):
                    self.assertTrue(lat.leq_index(s.app_i(a, b), s.app_i(a2, b2)), name)

    def test_beta_and_eta_inequalities(self):
        for name, alg in self.algebras.items():
            s = alg.structure
            lat = s.lattice
            n = lat.size
            for values in itertools.product(range(n), repeat=n):
                lam = s.abs_i(list(values))
                for a in range(n):
                    self.assertTrue(lat.leq_index(s.app_i(lam, a), values[a]), name)
            for a in range(n):
                self.assertTrue(lat.leq_index(a, s.abs_i([s.app_i(a, x) for x in range(n)])), name)

    def test_heyting_application_is_meet(self):
        for name in ('B2', 'H3', 'M2'):
            s = self.algebras[name].structure
            lat = s.lattice
            for a in range(lat.size):
                for b in range(lat.size):
                    self.assertEqual(s.app_i(a, b), lat.meet_index(a, b), name)


class TestApplicative(unittest.TestCase):
    """Tests para la estructura de Kleene sobre una estructura aplicativa."""

    def test_one_point_is_boolean(self):
        s = from_applicative(['e'], {('e', 'e'): 'e'})
        lat = s.lattice
        self.assertEqual(list(lat.names), ['{}', '{e}'])
        self.assertEqual(s.imp(lat.element('{e}'), lat.element('{}')).name, '{}')
        self.assertEqual(s.imp(lat.element('{}'), lat.element('{}')).name, '{e}')
        self.assertEqual(s.combinator('K').name, '{e}')

    def test_incomplete_table(self):
        with self.assertRaises(StructureError):
            from_applicative(['e', 'f'], {('e', 'e'): 'e'})

    def test_value_outside_carrier(self):
        with self.assertRaises(StructureError):
            from_applicative(['e'], {('e', 'e'): 'z'})


class TestImplicativeAlgebra(unittest.TestCase):
    """Tests para la asociación estructura-separador."""

    def test_separator_from_other_structure(self):
        generator = ReferenceAlgebraGenerator(random_seed=42)
        a, b = generator.n3(), generator.n3()
        with self.assertRaises(StructureError):
            ImplicativeAlgebra(a.structure, b.separator)

    def test_contains(self):
        alg = ReferenceAlgebraGenerator(random_seed=42).n3()
        self.assertTrue(alg.contains(alg.lattice.element('u')))
        self.assertFalse(alg.contains(alg.lattice.element('0')))
        self.assertEqual(generate(alg.structure), alg.separator)


if __name__ == '__main__':
    unittest.main()
