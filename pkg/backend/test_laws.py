"""
Tests unitarios para la suite de propiedades.
"""

import unittest
import sys
import os

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import Settings
from laws import LAWS, LawResult, run_law_suite
from reference_algebras import ReferenceAlgebraGenerator

SMALL = Settings(lambda_samples=15, closure_samples=10, term_depth=3,
                 universal_max_carrier=1, nno_max_n=3)


class TestLawResult(unittest.TestCase):
    """Tests para el acumulador de resultados."""

    def test_status(self):
        result = LawResult('demo')
        self.assertEqual(result.status, 'omitida')
        result.check(True, 'nunca')
        self.assertEqual(result.status, 'ok')
        result.check(False, 'falla')
        self.assertEqual(result.status, 'FALLA')
        self.assertFalse(result.passed)

    def test_failures_are_truncated(self):
        result = LawResult('demo')
        for i in range(30):
            result.check(False, f"fallo {i}")
        self.assertEqual(result.checked, 30)
        self.assertEqual(len(result.failures), 21)
        self.assertEqual(result.failures[-1], '...')


class TestLawSuite(unittest.TestCase):
    """Tests para run_law_suite sobre las álgebras de referencia."""

    def setUp(self):
        self.generator = ReferenceAlgebraGenerator(random_seed=42)

    def test_b2_passes(self):
        report = run_law_suite(self.generator.b2(), SMALL)
        self.assertTrue(report.passed, report.failure_lines())
        summary = report.summary()
        self.assertEqual(list(summary.columns), ['law', 'checked', 'skipped', 'failures', 'status'])
        self.assertEqual(list(summary['law']), list(LAWS))

    def test_reference_algebras_pass(self):
        for name in ('H3', 'N3', 'K1'):
            report = run_law_suite(self.generator.algebra(name), SMALL)
            self.assertTrue(report.passed, f"{name}: {report.failure_lines()}")

    def test_only_subset(self):
        report = run_law_suite(self.generator.m2(), SMALL, only=['application_adjunction', 'nno'])
        self.assertEqual([r.name for r in report.results], ['application_adjunction', 'nno'])
        self.assertTrue(report.passed, report.failure_lines())
        self.assertGreater(report.results[0].checked, 0)

    def test_max_carrier_override(self):
        report = run_law_suite(self.generator.b2(), SMALL, max_carrier=0, only=['category'])
        self.assertTrue(report.passed)

    def test_pi_adjunction_covers_every_instance(self):
        report = run_law_suite(self.generator.b2(), SMALL, max_carrier=2, only=['pi_adjunction'])
        result = report.results[0]
        self.assertTrue(report.passed, report.failure_lines())
        self.assertEqual((result.checked, result.skipped), (279, 0))

    def test_instances_over_cap_are_sampled(self):
        capped = SMALL.with_overrides(hom_set_cap=50)
        report = run_law_suite(self.generator.b2(), capped, max_carrier=2, only=['pi_adjunction'])
        result = report.results[0]
        self.assertEqual(result.checked, SMALL.closure_samples)
        self.assertEqual(result.checked + result.skipped, 279)

    def test_universal_limits_cover_every_pair_on_n3(self):
        report = run_law_suite(self.generator.n3(), SMALL, max_carrier=2,
                               only=['universal_limits', 'subobject_classifier'])
        self.assertTrue(report.passed, report.failure_lines())
        limits = report.results[0]
        self.assertEqual(limits.skipped, 0)
        # terminal e inicial, 4 por cada uno de los 49 pares y 4 por cada uno de los 307 pares paralelos
        self.assertGreaterEqual(limits.checked, 2 + 49 * 4 + 307 * 4)

    def test_unknown_law(self):
        with self.assertRaises(ValueError):
            run_law_suite(self.generator.b2(), SMALL, only=['associativity'])


if __name__ == '__main__':
    unittest.main()
