"""
Tests unitarios para el objeto de números naturales.

Compara el cálculo exacto de E_ℕ(n) con el oráculo de sucesiones
eventualmente periódicas, verifica la cota de Church y el recursor.
"""

import unittest
import sys
import os

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from assemblies import check_morphism, make_assembly, terminal
from lambda_calculus import church, interpret
from implicative import from_heyting
from nno import (
    GRAPH_CACHE_SIZE, nat_constant_bound, nat_exists, nat_exists_table, nat_oracle, recursor,
    tail_meet_graph, tail_meets, truncated_nno,
)
from reference_algebras import ReferenceAlgebraGenerator, chain

RECURSOR_CHECKS = {'zero', 'step', 'tracker_in_separator', 'tracking', 'diagram', 'unique'}


class TestNatExists(unittest.TestCase):
    """Tests para E_ℕ(n)."""

    def setUp(self):
        generator = ReferenceAlgebraGenerator(random_seed=42)
        self.algebras = {name: generator.algebra(name) for name in ('B2', 'H3', 'N3')}

    def test_heyting_values_are_top(self):
        for name in ('B2', 'H3'):
            alg = self.algebras[name]
            self.assertEqual([e.name for e in nat_exists_table(alg, 4)], ['1'] * 5, name)

    def test_agrees_with_oracle(self):
        for name, alg in self.algebras.items():
            size = alg.lattice.size
            for n in range(5):
                self.assertEqual(nat_exists(alg, n), nat_oracle(alg, n, size * size + n, size),
                                 f"{name} n={n}")

    def test_church_bound_and_separator(self):
        for name, alg in self.algebras.items():
            lat = alg.lattice
            ceiling = nat_constant_bound(alg)
            for n in range(9):
                value = nat_exists(alg, n)
                self.assertTrue(lat.leq(interpret(church(n), alg.structure), value), f"{name} n={n}")
                self.assertTrue(alg.contains(value), f"{name} n={n}")
                self.assertTrue(lat.leq(value, ceiling), f"{name} n={n}")

    def test_negative_index(self):
        with self.assertRaises(ValueError):
            nat_exists(self.algebras['B2'], -1)

    def test_tail_meets_contain_top_chain(self):
        alg = self.algebras['N3']
        lat = alg.lattice
        for x in lat.elements:
            limits = tail_meets(alg, x)
            self.assertTrue(limits)
            self.assertIn(alg.structure.imp(x, x), limits)

    def test_graph_cache_is_bounded(self):
        structure = self.algebras['N3'].structure
        self.assertIs(tail_meet_graph(structure), tail_meet_graph(structure))
        for _ in range(GRAPH_CACHE_SIZE + 8):
            tail_meet_graph(from_heyting(chain(['0', '1'])))
        self.assertLessEqual(tail_meet_graph.cache_info().currsize, GRAPH_CACHE_SIZE)


class TestTruncation(unittest.TestCase):
    """Tests para ℕ truncado."""

    def setUp(self):
        self.n3 = ReferenceAlgebraGenerator(random_seed=42).n3()

    def test_shape(self):
        nat = truncated_nno(self.n3, 3)
        self.assertEqual(nat.assembly.points, ('0', '1', '2'))
        self.assertEqual(nat.zero.images, (0,))
        self.assertEqual(nat.succ.images, (1, 2))
        self.assertIsNotNone(nat.succ.certificate)
        self.assertEqual(list(nat.assembly.exists), nat_exists_table(self.n3, 2))

    def test_invalid_bound(self):
        with self.assertRaises(ValueError):
            truncated_nno(self.n3, 0)


class TestRecursor(unittest.TestCase):
    """Tests para el recursor sobre una asamblea finita."""

    def setUp(self):
        generator = ReferenceAlgebraGenerator(random_seed=42)
        self.n3 = generator.n3()
        self.b2 = generator.b2()
        lat = self.n3.lattice
        self.X = make_assembly(self.n3, ['a', 'b'], [lat.element('u'), lat.element('1')], 'X')
        one = terminal(self.n3).obj
        self.q = check_morphism(one, self.X, ['a'])
        self.swap = check_morphism(self.X, self.X, ['b', 'a'])

    def test_periodic_orbit(self):
        report = recursor(self.n3, self.X, self.q, self.swap, 6)
        self.assertEqual(report.u, ('a', 'b', 'a', 'b', 'a', 'b'))
        self.assertEqual((report.prefix_length, report.period), (0, 2))
        self.assertEqual(report.pair_meet.name, 'u')
        self.assertEqual(set(report.checks), RECURSOR_CHECKS)
        self.assertTrue(report.passed, report.checks)

    def test_terminal_is_constant(self):
        for alg in (self.n3, self.b2):
            one = terminal(alg).obj
            point = check_morphism(one, one, [one.points[0]])
            report = recursor(alg, one, point, point, 5)
            self.assertEqual(report.u, (one.points[0],) * 5)
            self.assertEqual((report.prefix_length, report.period), (0, 1))
            self.assertEqual(set(report.checks), RECURSOR_CHECKS)
            self.assertTrue(all(report.checks.values()), f"{alg.name}: {report.checks}")

    def test_boolean_swap(self):
        top = self.b2.lattice.top
        X = make_assembly(self.b2, ['p', 'q'], [top, top], 'X')
        q = check_morphism(terminal(self.b2).obj, X, ['p'])
        swap = check_morphism(X, X, ['q', 'p'])
        report = recursor(self.b2, X, q, swap, 6)
        self.assertEqual(report.u, ('p', 'q', 'p', 'q', 'p', 'q'))
        self.assertEqual((report.prefix_length, report.period), (0, 2))
        self.assertEqual(report.pair_meet, top)
        self.assertEqual(set(report.checks), RECURSOR_CHECKS)
        self.assertTrue(all(report.checks.values()), report.checks)

    def test_uniqueness_beyond_enumeration(self):
        # 2^18 sucesiones candidatas: más que el tope de hom-sets por defecto
        report = recursor(self.n3, self.X, self.q, self.swap, 18)
        self.assertEqual(len(report.u), 18)
        self.assertTrue(report.checks['unique'])
        self.assertTrue(report.passed, report.checks)

    def test_fixed_point_after_prefix(self):
        to_b = check_morphism(self.X, self.X, ['b', 'b'])
        report = recursor(self.n3, self.X, self.q, to_b, 4)
        self.assertEqual(report.u, ('a', 'b', 'b', 'b'))
        self.assertEqual((report.prefix_length, report.period), (1, 1))
        self.assertTrue(report.passed, report.checks)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            recursor(self.n3, self.X, self.q, self.swap, 0)
        with self.assertRaises(ValueError):
            recursor(self.n3, self.X, self.swap, self.swap, 3)


if __name__ == '__main__':
    unittest.main()
