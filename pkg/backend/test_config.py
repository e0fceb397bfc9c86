"""
Tests unitarios para la carga de configuración YAML.
"""

import unittest
import tempfile
import sys
import os
from unittest import mock

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import DEFAULT_CONFIG_PATH, ConfigError, Settings, load_settings


class TestLoadSettings(unittest.TestCase):
    """Tests para load_settings."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text: str) -> str:
        path = os.path.join(self.tmp.name, 'config.yaml')
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def test_default_file(self):
        settings = load_settings(DEFAULT_CONFIG_PATH)
        self.assertEqual(settings.random_seed, 42)
        self.assertEqual(settings.universal_max_carrier, 2)
        self.assertEqual(settings.n_jobs, 1)

    def test_partial_file_keeps_defaults(self):
        settings = load_settings(self.write("hom_set_cap: 50\nlog_level: DEBUG\n"))
        self.assertEqual(settings.hom_set_cap, 50)
        self.assertEqual(settings.log_level, 'DEBUG')
        self.assertEqual(settings.term_depth, Settings().term_depth)

    def test_missing_file(self):
        settings = load_settings(os.path.join(self.tmp.name, 'nope.yaml'))
        self.assertEqual(settings, Settings())

    def test_environment_variable(self):
        path = self.write("lambda_samples: 7\n")
        with mock.patch.dict(os.environ, {'IMPALG_CONFIG': path}):
            self.assertEqual(load_settings().lambda_samples, 7)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            load_settings(self.write("hom_cap: 10\n"))

    def test_wrong_type(self):
        with self.assertRaises(ConfigError):
            load_settings(self.write("term_depth: deep\n"))

    def test_not_a_mapping(self):
        with self.assertRaises(ConfigError):
            load_settings(self.write("- 1\n- 2\n"))

    def test_invalid_workers(self):
        with self.assertRaises(ConfigError):
            load_settings(self.write("n_jobs: 0\n"))

    def test_overrides(self):
        settings = Settings().with_overrides(universal_max_carrier=1)
        self.assertEqual(settings.universal_max_carrier, 1)
        self.assertEqual(Settings().universal_max_carrier, 2)


if __name__ == '__main__':
    unittest.main()
