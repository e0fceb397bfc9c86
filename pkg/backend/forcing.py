"""
Análisis de forcing.

Compara el objeto 𝟚 con Δ2, agrega las condiciones equivalentes de
principalidad del separador en un reporte y busca estructuras implicativas
pequeñas que cumplan un predicado sobre sus banderas.
"""

import logging
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from lattice import Element, FiniteLattice
from implicative import (
    AxiomViolation, ImplicativeAlgebra, InternalInvariantError, validate_structure,
)
from separator import SeparatorFlags, classify, entailment_classes, generate
from assemblies import (
    Assembly, Morphism, check_morphism, delta, hom_set, is_iso, make_assembly,
    small_assemblies, unit_to_delta,
)
from config import Settings, get_settings

logger = logging.getLogger(__name__)

FLAG_NAMES = ('valid', 'consistent', 'classical', 'filter', 'principal')


def two_assembly(alg: ImplicativeAlgebra) -> Assembly:
    """𝟚 con E(0) = (λxy.x)^A y E(1) = (λxy.y)^A."""
    structure = alg.structure
    return make_assembly(alg, ['0', '1'], [structure.combinator('K'), structure.combinator('KI')], '𝟚')


def canonical_i(alg: ImplicativeAlgebra) -> Morphism:
    """i : 𝟚 → Δ2, la identidad sobre {0, 1}."""
    return check_morphism(two_assembly(alg), delta(alg, ['0', '1'], 'Δ2'), ['0', '1'])


def check_i_iso(alg: ImplicativeAlgebra) -> bool:
    """i es iso exactamente cuando S es un filtro (fork ∈ S)."""
    result = is_iso(canonical_i(alg))
    if result != classify(alg).filter:
        raise InternalInvariantError(
            f"En {alg.name}: i es iso = {result} pero filtro = {classify(alg).filter}")
    return result


def gamma_fullness_sample(alg: ImplicativeAlgebra, family: Sequence[Assembly]) -> bool:
    """¿Todo mapa entre portadores de la familia es un morfismo?"""
    for X in family:
        for Y in family:
            if len(hom_set(X, Y)) != Y.size ** X.size:
                logger.debug(f"Hom({X}, {Y}) no es lleno")
                return False
    return True


def balance_witness(alg: ImplicativeAlgebra) -> bool:
    """La identidad de la asamblea S (E(s) = s) en ΔS es iso exactamente cuando S es principal."""
    members = alg.separator.members
    names = [e.name for e in members]
    S = make_assembly(alg, names, members, 'S')
    return is_iso(check_morphism(S, delta(alg, names, 'ΔS'), names))


def unit_iso_sampled(alg: ImplicativeAlgebra, family: Sequence[Assembly]) -> bool:
    """¿Cada unidad η_X : X → ΔΓX de la familia es iso?"""
    return all(is_iso(unit_to_delta(X)) for X in family)


@dataclass(frozen=True)
class ForcingReport:
    flags: SeparatorFlags
    i_is_iso: bool
    gamma_full_sampled: bool
    balance_witness_iso: bool
    unit_iso_sampled: bool
    min_element: Optional[Element]
    quotient_size: int

    @property
    def forcing(self) -> bool:
        return self.flags.principal

    @property
    def equivalences_consistent(self) -> bool:
        values = {self.flags.principal, self.i_is_iso, self.gamma_full_sampled,
                  self.balance_witness_iso, self.unit_iso_sampled}
        return len(values) == 1

    def as_dict(self) -> Dict[str, object]:
        data = dict(self.flags.as_dict())
        data.update({
            'forcing': self.forcing,
            'i_is_iso': self.i_is_iso,
            'gamma_full_sampled': self.gamma_full_sampled,
            'balance_witness_iso': self.balance_witness_iso,
            'unit_iso_sampled': self.unit_iso_sampled,
            'equivalences_consistent': self.equivalences_consistent,
            'min': self.min_element.name if self.min_element is not None else '-',
            'quotient_size': self.quotient_size,
        })
        return data


def forcing_report(alg: ImplicativeAlgebra, family: Optional[Sequence[Assembly]] = None,
                   settings: Optional[Settings] = None) -> ForcingReport:
    """
    Agrega clasificación, el test de i, la plenitud de Γ y los testigos de
    balance y de la unidad sobre la familia de prueba.
    """
    settings = settings or get_settings()
    if family is None:
        family = small_assemblies(alg, settings.universal_max_carrier)
    report = ForcingReport(
        flags=classify(alg),
        i_is_iso=check_i_iso(alg),
        gamma_full_sampled=gamma_fullness_sample(alg, family),
        balance_witness_iso=balance_witness(alg),
        unit_iso_sampled=unit_iso_sampled(alg, family),
        min_element=alg.separator.min_element,
        quotient_size=len(entailment_classes(alg)),
    )
    if not report.equivalences_consistent:
        logger.warning(f"Equivalencias inconsistentes en {alg.name}: {report.as_dict()}")
    return report


# ----------------------------------------------------------------------
# Búsqueda de estructuras

def parse_predicate(text: str) -> List[Tuple[str, bool]]:
    """
    'consistent&!filter' -> [('consistent', True), ('filter', False)].

    Las banderas válidas son valid, consistent, classical, filter y principal.
    """
    clauses = []
    for raw in text.split('&'):
        token = raw.strip()
        wanted = True
        if token.startswith('!'):
            wanted, token = False, token[1:].strip()
        if token not in FLAG_NAMES:
            raise ValueError(f"Bandera desconocida en el predicado: '{token}'")
        clauses.append((token, wanted))
    return clauses


def _holds(flags: Dict[str, bool], clauses: List[Tuple[str, bool]]) -> bool:
    return all(flags[name] == wanted for name, wanted in clauses)


def candidate_rows(lattice: FiniteLattice) -> List[Tuple[int, ...]]:
    """Autoaplicaciones que preservan ínfimos binarios y el tope."""
    n = lattice.size
    top = lattice.top_index
    rows = []
    for row in itertools.product(range(n), repeat=n):
        if row[top] != top:
            continue
        if all(row[lattice.meet_index(b, c)] == lattice.meet_index(row[b], row[c])
               for b in range(n) for c in range(b + 1, n)):
            rows.append(row)
    return rows


def enumerate_tables(lattice: FiniteLattice):
    """Tablas fila por fila, con filas antítonas en el primer argumento."""
    n = lattice.size
    rows = candidate_rows(lattice)
    chosen: List[Tuple[int, ...]] = []

    def compatible(a: int, row: Tuple[int, ...]) -> bool:
        for a2, other in enumerate(chosen):
            if lattice.leq_index(a2, a) and not all(lattice.leq_index(row[b], other[b]) for b in range(n)):
                return False
            if lattice.leq_index(a, a2) and not all(lattice.leq_index(other[b], row[b]) for b in range(n)):
                return False
        return True

    def extend(a: int):
        if a == n:
            yield np.array(chosen, dtype=np.int64)
            return
        for row in rows:
            if compatible(a, row):
                chosen.append(row)
                yield from extend(a + 1)
                chosen.pop()

    yield from extend(0)


def _evaluate_batch(lattice: FiniteLattice, tables: List[np.ndarray],
                    clauses: List[Tuple[str, bool]]) -> List[Tuple[np.ndarray, Dict[str, bool]]]:
    hits = []
    for table in tables:
        try:
            structure = validate_structure(lattice, table)
        except AxiomViolation:
            continue
        alg = ImplicativeAlgebra(structure, generate(structure), 'candidate')
        flags = dict(classify(alg).as_dict(), valid=True)
        if _holds(flags, clauses):
            hits.append((table, flags))
    return hits


def search_structures(lattice: FiniteLattice, predicate: str, limit: int,
                      settings: Optional[Settings] = None) -> List[ImplicativeAlgebra]:
    """
    Enumera las tablas de implicación sobre el retículo, genera el separador
    mínimo desde ∅ y devuelve hasta `limit` álgebras que cumplen el predicado.
    """
    settings = settings or get_settings()
    clauses = parse_predicate(predicate)
    tables = enumerate_tables(lattice)
    batch = settings.search_batch
    workers = max(1, settings.n_jobs) if settings.n_jobs > 0 else 4
    hits: List[ImplicativeAlgebra] = []
    examined = 0

    with Parallel(n_jobs=settings.n_jobs) as parallel:
        while len(hits) < limit:
            chunk = [list(itertools.islice(tables, batch)) for _ in range(workers)]
            chunk = [c for c in chunk if c]
            if not chunk:
                break
            examined += sum(len(c) for c in chunk)
            results = parallel(delayed(_evaluate_batch)(lattice, c, clauses) for c in chunk)
            for batch_hits in results:
                for table, _ in batch_hits:
                    if len(hits) >= limit:
                        break
                    structure = validate_structure(lattice, table)
                    alg = ImplicativeAlgebra(structure, generate(structure), f"hit{len(hits)}")
                    check_i_iso(alg)
                    hits.append(alg)

    logger.info(f"Búsqueda '{predicate}' sobre {list(lattice.names)}: "
                f"{examined} tablas examinadas, {len(hits)} coincidencias")
    return hits


def hits_table(hits: Sequence[ImplicativeAlgebra]) -> pd.DataFrame:
    """Resumen tabular de las coincidencias: una fila por álgebra."""
    rows = []
    for alg in hits:
        flags = classify(alg)
        lattice = alg.lattice
        rows.append({
            'name': alg.name,
            **{k: 'yes' if v else 'no' for k, v in flags.as_dict().items()},
            'S': ' '.join(e.name for e in alg.separator.members),
            'table': ' | '.join(' '.join(lattice.names[int(v)] for v in row)
                                for row in alg.structure.imp_table),
        })
    return pd.DataFrame(rows, columns=['name', 'consistent', 'classical', 'filter', 'principal', 'S', 'table'])
