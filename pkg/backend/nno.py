"""
Objeto de números naturales.

El predicado E_ℕ(n) = ⋀_{a∈A^ℕ} (a₀ → ⋀_p (a_p → a_{p+1}) → a_n) es un
ínfimo sobre sucesiones infinitas. Se calcula exactamente factorizando cada
sucesión en un prefijo a₀..a_n y una cola desde a_n:

  - el ínfimo acumulado de una cadena de flechas es no creciente y toma
    valores en un conjunto finito, así que se estabiliza;
  - en el grafo de estados (y, m) con aristas (y, m) → (y', m ∧ (y→y')) una
    cadena infinita visita infinitas veces algún estado, que entonces está en
    un ciclo y cuyo m es el límite; y todo estado en un ciclo alcanzable desde
    (x, ⊤) se realiza con una cadena eventualmente periódica.

Luego los límites posibles de las colas desde x son exactamente los m de los
estados cíclicos alcanzables desde (x, ⊤). El oráculo `nat_oracle` recorre
sucesiones eventualmente periódicas de forma independiente y debe coincidir.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Set, Tuple

import networkx as nx

from lattice import Element
from implicative import ImplicativeAlgebra, ImplicativeStructure, InternalInvariantError
from lambda_calculus import church, interpret, macro
from assemblies import (
    Assembly, Morphism, derived_assembly, derived_morphism, terminal,
)

logger = logging.getLogger(__name__)


class TailMeetGraph:
    """Grafo de estados (actual, acumulado) de las cadenas de flechas."""

    def __init__(self, structure: ImplicativeStructure):
        self.structure = structure
        lat = structure.lattice
        n = lat.size
        graph = nx.DiGraph()
        for y in range(n):
            for m in range(n):
                for y2 in range(n):
                    graph.add_edge((y, m), (y2, lat.meet_index(m, structure.imp_i(y, y2))))
        self.graph = graph
        self.cyclic: Set[Tuple[int, int]] = set()
        for component in nx.strongly_connected_components(graph):
            if len(component) > 1:
                self.cyclic.update(component)
        self.cyclic.update(u for u, v in nx.selfloop_edges(graph))
        self._achievable: Dict[int, FrozenSet[int]] = {}

    def achievable(self, x: int) -> FrozenSet[int]:
        if x not in self._achievable:
            start = (x, self.structure.lattice.top_index)
            reach = nx.descendants(self.graph, start) | {start}
            self._achievable[x] = frozenset(m for (y, m) in reach if (y, m) in self.cyclic)
        return self._achievable[x]


GRAPH_CACHE_SIZE = 32


@lru_cache(maxsize=GRAPH_CACHE_SIZE)
def tail_meet_graph(structure: ImplicativeStructure) -> TailMeetGraph:
    return TailMeetGraph(structure)


def tail_meets(alg: ImplicativeAlgebra, x: Element) -> List[Element]:
    """Límites de ⋀_p (a_p → a_{p+1}) sobre las cadenas infinitas con a₀ = x."""
    lat = alg.lattice
    graph = tail_meet_graph(alg.structure)
    return [lat.at(m) for m in sorted(graph.achievable(lat.index_of(x)))]


def _nat_exists_index(structure: ImplicativeStructure, n: int) -> int:
    lat = structure.lattice
    size = lat.size
    graph = tail_meet_graph(structure)
    # estados (a₀, a_k, ⋀_{p<k}(a_p → a_{p+1}))
    states = {(a, a, lat.top_index) for a in range(size)}
    for _ in range(n):
        states = {(x0, nxt, lat.meet_index(acc, structure.imp_i(cur, nxt)))
                  for x0, cur, acc in states for nxt in range(size)}
    return lat.meet_indices(
        structure.imp_i(x0, structure.imp_i(lat.meet_index(acc, h), cur))
        for x0, cur, acc in states for h in graph.achievable(cur))


def nat_exists(alg: ImplicativeAlgebra, n: int) -> Element:
    """
    Valor exacto de E_ℕ(n).

    Verifica que quede sobre (λx f. fⁿx)^A y dentro del separador.
    """
    if n < 0:
        raise ValueError(f"n debe ser >= 0, se recibió {n}")
    structure = alg.structure
    lat = alg.lattice
    value = lat.at(_nat_exists_index(structure, n))
    bound = interpret(church(n), structure)
    if not lat.leq(bound, value):
        raise InternalInvariantError(
            f"E_ℕ({n}) = {value.name} no está sobre el numeral de Church ({bound.name})")
    if not alg.contains(value):
        raise InternalInvariantError(f"E_ℕ({n}) = {value.name} ∉ S")
    return value


def nat_exists_table(alg: ImplicativeAlgebra, upto: int) -> List[Element]:
    return [nat_exists(alg, n) for n in range(upto + 1)]


def nat_oracle(alg: ImplicativeAlgebra, n: int, prefix_bound: int, period_bound: int) -> Element:
    """
    Ínfimo del término de E_ℕ(n) sobre las sucesiones eventualmente periódicas
    con prefijo de largo L ≤ prefix_bound y período k ≤ period_bound.

    Para cada (L, k) se recorre un desenrollado prefijo+período guardando
    (a₀, a_n, último, acumulado, inicio del ciclo); el ciclo se cierra con
    la flecha último → inicio.
    """
    structure = alg.structure
    lat = alg.lattice
    size = lat.size
    result = lat.top_index
    for L in range(prefix_bound + 1):
        for k in range(1, period_bound + 1):
            pos_n = n if n < L else L + (n - L) % k
            states = {(None, None, None, lat.top_index, None)}
            for i in range(L + k):
                grown = set()
                for a0, an, last, acc, c0 in states:
                    for v in range(size):
                        grown.add((
                            v if i == 0 else a0,
                            v if i == pos_n else an,
                            v,
                            acc if last is None else lat.meet_index(acc, structure.imp_i(last, v)),
                            v if i == L else c0,
                        ))
                states = grown
            for a0, an, last, acc, c0 in states:
                closed = lat.meet_index(acc, structure.imp_i(last, c0))
                result = lat.meet_index(result, structure.imp_i(a0, structure.imp_i(closed, an)))
    return lat.at(result)


def nat_constant_bound(alg: ImplicativeAlgebra) -> Element:
    """Restricción a sucesiones constantes: ⋀_a (a → (a→a) → a), cota superior de todo E_ℕ(n)."""
    structure = alg.structure
    lat = alg.lattice
    return lat.at(lat.meet_indices(
        structure.imp_i(a, structure.imp_i(structure.imp_i(a, a), a)) for a in range(lat.size)))


# ----------------------------------------------------------------------
# Truncaciones

@dataclass(frozen=True)
class TruncatedNaturals:
    bound: int
    assembly: Assembly
    zero: Morphism
    succ: Morphism


def truncated_nno(alg: ImplicativeAlgebra, N: int) -> TruncatedNaturals:
    """
    ℕ restringido a {0..N-1} con predicados exactos, z : 1 → ℕ y
    s : {0..N-2} → {0..N-1}, certificados por λz x f. x y λn x f. f (n x f).
    """
    if N < 1:
        raise ValueError(f"La truncación requiere N >= 1, se recibió {N}")
    values = nat_exists_table(alg, N - 1)
    nat = derived_assembly(alg, [str(i) for i in range(N)], values, f"ℕ<{N}")
    one = terminal(alg).obj
    zero = derived_morphism(one, nat, [0], 'z', macro('nno_zero'))
    shorter = derived_assembly(alg, [str(i) for i in range(N - 1)], values[:N - 1], f"ℕ<{N - 1}")
    succ = derived_morphism(shorter, nat, list(range(1, N)), 's', macro('nno_succ'))
    return TruncatedNaturals(N, nat, zero, succ)


# ----------------------------------------------------------------------
# Recursor

@dataclass
class RecursorReport:
    u: Tuple[str, ...]
    prefix_length: int
    period: int
    pair_meet: Element
    tracker: Element
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def recursor(alg: ImplicativeAlgebra, X: Assembly, q: Morphism, f: Morphism,
             N: int) -> RecursorReport:
    """
    u(0) = q(*), u(n+1) = f(u(n)) sobre {0..N-1}.

    Como |X| es finito, u es eventualmente periódica y el ínfimo
    ⋀_p (E_X(u(p)) → E_X(u(p+1))) se calcula exactamente sobre los pares
    consecutivos distintos. El reporte verifica:
      (i) τ(q)⊤ ≤ E_X(u(0));
      (ii) τ(f) ≤ el ínfimo exacto de pares;
      (iii) (λm. m (τ(q)⊤) τ(f))^A ≤ E_ℕ(n) → E_X(u(n)) para todo n < N;
      (iv) u es la única función que cumple las dos recurrencias.
    """
    if N < 1:
        raise ValueError(f"El recursor requiere N >= 1, se recibió {N}")
    if q.target != X or f.source != X or f.target != X or q.source.size != 1:
        raise ValueError("Se espera q : 1 → X y f : X → X")
    structure = alg.structure
    lat = alg.lattice

    # órbita hasta la primera repetición
    orbit = [q.images[0]]
    seen = {orbit[0]: 0}
    while True:
        nxt = f.images[orbit[-1]]
        if nxt in seen:
            prefix_length, period = seen[nxt], len(orbit) - seen[nxt]
            break
        seen[nxt] = len(orbit)
        orbit.append(nxt)

    def u_at(n: int) -> int:
        if n < len(orbit):
            return orbit[n]
        return orbit[prefix_length + (n - prefix_length) % period]

    pairs = {(orbit[i], f.images[orbit[i]]) for i in range(len(orbit))}
    pair_meet = lat.meet_indices(structure.imp_i(X.exists_index(a), X.exists_index(b)) for a, b in pairs)

    q_top = structure.app_i(lat.index_of(q.tracking_value), lat.top_index)
    tracker = interpret(macro('rec_tracker', lat.at(q_top), f.tracking_value), structure)

    checks = {
        'zero': lat.leq_index(q_top, X.exists_index(u_at(0))),
        'step': lat.leq_index(lat.index_of(f.tracking_value), pair_meet),
        'tracker_in_separator': alg.contains(tracker),
    }
    checks['tracking'] = all(
        lat.leq_index(tracker.index,
                      structure.imp_i(_nat_exists_index(structure, n), X.exists_index(u_at(n))))
        for n in range(N))

    nat = truncated_nno(alg, N)
    u_images = [u_at(n) for n in range(N)]
    checks['diagram'] = (
        u_images[nat.zero.images[0]] == q.images[0]
        and all(u_images[nat.succ.images[n]] == f.images[u_images[n]] for n in range(N - 1)))

    # número de sucesiones que cumplen ambas recurrencias, capa por capa
    counts = [1 if x == q.images[0] else 0 for x in range(X.size)]
    unique = sum(counts) == 1 and counts[u_images[0]] == 1
    for n in range(N - 1):
        layer = [0] * X.size
        for x, c in enumerate(counts):
            layer[f.images[x]] += c
        counts = layer
        unique = unique and sum(counts) == 1 and counts[u_images[n + 1]] == 1
    checks['unique'] = unique

    report = RecursorReport(tuple(X.points[i] for i in u_images), prefix_length, period,
                            lat.at(pair_meet), tracker, checks)
    logger.info(f"Recursor sobre {X.name}: prefijo {prefix_length}, período {period}, "
                f"{'OK' if report.passed else 'FALLA'}")
    return report
