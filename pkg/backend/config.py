"""
Configuración del toolkit cargada desde YAML.

El archivo por defecto es `config.yaml` junto a este módulo; la variable de
entorno IMPALG_CONFIG permite apuntar a otro archivo.
"""

import os
import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config.yaml')


class ConfigError(ValueError):
    """Archivo de configuración inválido."""


@dataclass(frozen=True)
class Settings:
    log_level: str = 'INFO'
    log_file: Optional[str] = None
    random_seed: int = 42
    universal_max_carrier: int = 2
    hom_set_cap: int = 100000
    dependent_product_cap: int = 100000
    lambda_samples: int = 200
    closure_samples: int = 100
    term_depth: int = 5
    nno_max_n: int = 8
    search_batch: int = 64
    n_jobs: int = 1

    def with_overrides(self, **overrides) -> 'Settings':
        return replace(self, **overrides)


def load_settings(path: Optional[str] = None) -> Settings:
    """
    Carga la configuración desde un archivo YAML.

    Args:
        path: Ruta explícita; si es None se usa IMPALG_CONFIG o el archivo por defecto

    Returns:
        Settings validado
    """
    path = path or os.environ.get('IMPALG_CONFIG') or DEFAULT_CONFIG_PATH
    if not os.path.exists(path):
        logger.warning(f"Archivo de configuración no encontrado: {path}. Usando valores por defecto")
        return Settings()

    with open(path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}

    if not isinstance(data, dict):
        raise ConfigError(f"La configuración debe ser un mapa clave/valor: {path}")

    known = {f.name: f for f in fields(Settings)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"Claves de configuración desconocidas: {', '.join(unknown)}")

    for key, value in data.items():
        if value is None:
            continue
        expected = int if known[key].type in (int, 'int') else None
        if expected is int and not isinstance(value, int):
            raise ConfigError(f"'{key}' debe ser un entero, se recibió {value!r}")

    settings = Settings(**data)
    if settings.universal_max_carrier < 0 or settings.n_jobs == 0:
        raise ConfigError("universal_max_carrier debe ser >= 0 y n_jobs distinto de 0")
    return settings


_cached: Optional[Settings] = None


def get_settings() -> Settings:
    global _cached
    if _cached is None:
        _cached = load_settings()
    return _cached
