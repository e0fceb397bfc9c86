"""
Suite de propiedades del toolkit (comando `check laws`).

Cada ley recorre exhaustivamente tablas, familias de asambleas con
portadores acotados e instancias de rebanadas mientras quepan bajo
`hom_set_cap`; los términos λ y lo que supera el tope se muestrean. El
resultado se resume en un DataFrame de pandas.
"""

import logging
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import networkx as nx
import pandas as pd

from implicative import ImplicativeAlgebra, InternalInvariantError
from separator import SeparatorViolation, classify, entails, generate, validate_separator
from lambda_calculus import (
    beta_reducts, eta_expand, free_variables, interpret, parse,
)
from assemblies import (
    Assembly, CombinatorialLimitError, compose, compose_images, coproduct, coequalizer,
    equalizer, hom_set, identity, initial, is_epi, is_epi_categorical, is_mono,
    is_mono_categorical, product, small_assemblies, subobject_classifier, terminal,
    verify_universal_property,
)
from lccc import sliced, verify_exponential_adjunction, verify_pi_adjunction
from nno import nat_exists, nat_exists_table, nat_oracle, recursor, truncated_nno
from forcing import check_i_iso, forcing_report
from reference_algebras import ReferenceAlgebraGenerator
from config import Settings, get_settings

logger = logging.getLogger(__name__)


@dataclass
class LawResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    def check(self, ok: bool, message: str):
        self.checked += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(message)
        elif not ok and self.failures[-1] != '...':
            self.failures.append('...')

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if self.failures:
            return 'FALLA'
        return 'ok' if self.checked else 'omitida'


@dataclass
class LawContext:
    alg: ImplicativeAlgebra
    settings: Settings
    family: List[Assembly]
    generator: ReferenceAlgebraGenerator

    def sample(self, items: Sequence, k: int) -> List:
        items = list(items)
        if len(items) <= k:
            return items
        chosen = self.generator.rng.choice(len(items), size=k, replace=False)
        return [items[int(i)] for i in sorted(chosen)]

    def all_or_sample(self, items: Sequence, result: 'LawResult') -> List:
        """Todos los casos si caben bajo `hom_set_cap`; si no, una muestra de `closure_samples`."""
        items = list(items)
        cap = self.settings.hom_set_cap
        if len(items) <= cap:
            return items
        chosen = self.sample(items, self.settings.closure_samples)
        result.skipped += len(items) - len(chosen)
        logger.warning(f"{result.name}: {len(items)} casos superan el tope {cap}, se verifican {len(chosen)}")
        return chosen


# ----------------------------------------------------------------------
# Retículo y estructura

def law_lattice_bounds(ctx: LawContext, result: LawResult):
    lat = ctx.alg.lattice
    n = lat.size
    for a in range(n):
        for b in range(n):
            m = lat.meet_index(a, b)
            j = lat.join_index(a, b)
            ok = (lat.leq_index(m, a) and lat.leq_index(m, b)
                  and all(lat.leq_index(c, m) for c in range(n) if lat.leq_index(c, a) and lat.leq_index(c, b))
                  and lat.leq_index(a, j) and lat.leq_index(b, j)
                  and all(lat.leq_index(j, c) for c in range(n) if lat.leq_index(a, c) and lat.leq_index(b, c)))
            result.check(ok, f"ínfimo/supremo de ({lat.names[a]}, {lat.names[b]})")


def law_application_adjunction(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    n = lat.size
    for a, b, c in itertools.product(range(n), repeat=3):
        left = lat.leq_index(structure.app_i(a, b), c)
        right = lat.leq_index(a, structure.imp_i(b, c))
        result.check(left == right, f"adjunción en ({lat.names[a]}, {lat.names[b]}, {lat.names[c]})")


def law_application_monotone(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    n = lat.size
    for a, a2, b, b2 in itertools.product(range(n), repeat=4):
        if lat.leq_index(a, a2) and lat.leq_index(b, b2):
            result.check(lat.leq_index(structure.app_i(a, b), structure.app_i(a2, b2)),
                         f"monotonía en {lat.names[a]}≤{lat.names[a2]}, {lat.names[b]}≤{lat.names[b2]}")


def law_beta_eta_inequalities(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    n = lat.size
    if n ** n > ctx.settings.hom_set_cap:
        result.skipped += 1
        return
    for values in itertools.product(range(n), repeat=n):
        lam = structure.abs_i(list(values))
        for a in range(n):
            result.check(lat.leq_index(structure.app_i(lam, a), values[a]),
                         f"β: (λf){lat.names[a]} ≰ f({lat.names[a]})")
    for a in range(n):
        expanded = structure.abs_i([structure.app_i(a, x) for x in range(n)])
        result.check(lat.leq_index(a, expanded), f"η: {lat.names[a]} ≰ λx.{lat.names[a]}x")


def law_heyting_collapse(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    if not structure.is_heyting:
        return
    lat = structure.lattice
    n = lat.size
    for a in range(n):
        for b in range(n):
            result.check(structure.app_i(a, b) == lat.meet_index(a, b),
                         f"ab ≠ a∧b en ({lat.names[a]}, {lat.names[b]})")
    for t in ctx.generator.random_terms(ctx.settings.closure_samples, ctx.settings.term_depth):
        result.check(interpret(t, structure) == lat.top, "término puro cerrado distinto de ⊤")


def law_combinators_exact(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    for name, source in (('K', r"\x y. x"), ('S', r"\x y z. x z (y z)"), ('KI', r"\x y. y")):
        result.check(interpret(parse(source), structure) == structure.combinator(name),
                     f"({source})^A ≠ {name}")


# ----------------------------------------------------------------------
# λ-cálculo

def law_beta_soundness(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    samples = ctx.settings.lambda_samples
    # la mitad con un redex plantado: un término aleatorio suele estar ya en forma normal
    terms = ctx.generator.random_terms(samples // 2, ctx.settings.term_depth,
                                       parameters=lat.elements, allow_cc=True)
    terms += ctx.generator.random_redexes(samples - samples // 2, ctx.settings.term_depth,
                                          parameters=lat.elements, allow_cc=True)
    for t in terms:
        value = interpret(t, structure)
        for reduct in beta_reducts(t):
            result.check(lat.leq(value, interpret(reduct, structure)), "un β-reducto baja el valor")


def law_eta_direction(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    terms = ctx.generator.random_terms(ctx.settings.closure_samples, ctx.settings.term_depth,
                                       parameters=lat.elements)
    for t in terms:
        result.check(lat.leq(interpret(t, structure), interpret(eta_expand(t), structure)),
                     "la η-expansión baja el valor")


# ----------------------------------------------------------------------
# Separadores

def law_separator_closure(ctx: LawContext, result: LawResult):
    alg = ctx.alg
    members = alg.separator.members
    for t in ctx.generator.random_terms(ctx.settings.closure_samples, ctx.settings.term_depth,
                                        parameters=members):
        if free_variables(t):
            continue
        result.check(alg.contains(interpret(t, alg.structure)), "término con parámetros en S fuera de S")


def law_generate_minimal(ctx: LawContext, result: LawResult):
    structure = ctx.alg.structure
    lat = structure.lattice
    n = lat.size
    if n <= 10:
        masks = list(range(1 << n))
    else:
        masks = [int(m) for m in ctx.generator.rng.integers(0, 1 << n, size=ctx.settings.closure_samples)]
    subsets = [[lat.at(i) for i in range(n) if mask >> i & 1] for mask in masks]
    for gens in subsets:
        generated = generate(structure, gens)
        result.check(generate(structure, generated.members) == generated, "generate no es idempotente")
    if n > 4:
        result.skipped += 1
        return
    separators = []
    for members in subsets:
        try:
            separators.append(validate_separator(structure, members))
        except SeparatorViolation:
            continue
    for gens in subsets:
        wanted = set(e.index for e in gens)
        containing = [s for s in separators if wanted <= set(s.member_indices)]
        meet = set(range(n))
        for s in containing:
            meet &= set(s.member_indices)
        result.check(set(generate(structure, gens).member_indices) == meet,
                     f"generate({[e.name for e in gens]}) no es el menor separador")


def law_entailment_preorder(ctx: LawContext, result: LawResult):
    alg = ctx.alg
    structure = alg.structure
    lat = alg.lattice
    elems = lat.elements
    for a in elems:
        result.check(entails(alg, a, a), f"⊢ no es reflexivo en {a.name}")
    for a, b, c in itertools.product(elems, repeat=3):
        if entails(alg, a, b) and entails(alg, b, c):
            result.check(entails(alg, a, c), f"⊢ no es transitivo en {a.name}, {b.name}, {c.name}")
    for a, b in itertools.product(elems, repeat=2):
        conj = structure.conj(a, b)
        disj = structure.disj(a, b)
        result.check(entails(alg, conj, a) and entails(alg, conj, b), f"a×b ⊬ a en {a.name}, {b.name}")
        result.check(entails(alg, a, disj) and entails(alg, b, disj), f"a ⊬ a+b en {a.name}, {b.name}")
        if alg.contains(a) and alg.contains(b):
            result.check(alg.contains(conj), f"{a.name}×{b.name} ∉ S")
        if alg.contains(a) or alg.contains(b):
            result.check(alg.contains(disj), f"{a.name}+{b.name} ∉ S")
    flags = classify(alg)
    result.check(not flags.principal or flags.filter, "principal sin ser filtro")


# ----------------------------------------------------------------------
# Asambleas

def _pairs(ctx: LawContext, result: LawResult) -> List[tuple]:
    return ctx.all_or_sample(itertools.product(ctx.family, repeat=2), result)


def _parallel_pairs(ctx: LawContext, result: LawResult) -> List[tuple]:
    pairs = []
    for X, Y in itertools.product(ctx.family, repeat=2):
        maps = hom_set(X, Y)
        pairs.extend((f, g) for f in maps for g in maps)
    return ctx.all_or_sample(pairs, result)


def law_universal_limits(ctx: LawContext, result: LawResult):
    alg = ctx.alg
    family = ctx.family
    report = verify_universal_property('terminal', terminal(alg), family)
    result.check(report.passed, f"terminal: {report.failures}")
    report = verify_universal_property('initial', initial(alg), family)
    result.check(report.passed, f"inicial: {report.failures}")

    for A, B in _pairs(ctx, result):
        prod = product(A, B)
        result.check(prod.obj.size == A.size * B.size, f"Γ(A×B) ≠ ΓA×ΓB para {A}, {B}")
        report = verify_universal_property('product', prod, family)
        result.check(report.passed, f"producto {A}×{B}: {report.failures}")
        p1, p2 = prod.legs
        for X in family:
            for f in hom_set(X, A):
                for g in hom_set(X, B):
                    h = prod.mediator(f, g)
                    result.check(compose_images(p1, h) == f.images and compose_images(p2, h) == g.images,
                                 f"⟨f,g⟩ no conmuta para {A}×{B}")

        sum_ = coproduct(A, B)
        result.check(sum_.obj.size == A.size + B.size, f"Γ(A+B) ≠ ΓA+ΓB para {A}, {B}")
        report = verify_universal_property('coproduct', sum_, family)
        result.check(report.passed, f"coproducto {A}+{B}: {report.failures}")

    for f, g in _parallel_pairs(ctx, result):
        eq = equalizer(f, g)
        expected = [p for i, p in enumerate(f.source.points) if f.images[i] == g.images[i]]
        result.check(list(eq.obj.points) == expected, "Γ del ecualizador distinto del de conjuntos")
        report = verify_universal_property('equalizer', eq, ctx.family)
        result.check(report.passed, f"ecualizador: {report.failures}")

        coeq = coequalizer(f, g)
        graph = nx.Graph()
        graph.add_nodes_from(range(f.target.size))
        graph.add_edges_from(zip(f.images, g.images))
        result.check(coeq.obj.size == nx.number_connected_components(graph),
                     "Γ del coecualizador distinto del de conjuntos")
        report = verify_universal_property('coequalizer', coeq, ctx.family)
        result.check(report.passed, f"coecualizador: {report.failures}")


def law_subobject_classifier(ctx: LawContext, result: LawResult):
    report = verify_universal_property('classifier', subobject_classifier(ctx.alg), ctx.family)
    result.check(report.passed, f"clasificador: {report.failures}")


def law_mono_epi(ctx: LawContext, result: LawResult):
    for X, Y in itertools.product(ctx.family, repeat=2):
        for f in hom_set(X, Y):
            result.check(is_mono(f) == is_mono_categorical(f, ctx.family),
                         f"mono ≠ inyectiva para {f}")
            if ctx.settings.universal_max_carrier >= 2:
                result.check(is_epi(f) == is_epi_categorical(f, ctx.family),
                             f"epi ≠ sobreyectiva para {f}")


def law_category(ctx: LawContext, result: LawResult):
    triples = []
    for X, Y, Z in ctx.sample(list(itertools.product(ctx.family, repeat=3)), ctx.settings.closure_samples):
        for f in hom_set(X, Y)[:2]:
            for g in hom_set(Y, Z)[:2]:
                triples.append((f, g))
    for f, g in triples:
        gf = compose(g, f)
        result.check(compose(identity(g.target), gf).images == gf.images
                     and compose(gf, identity(f.source)).images == gf.images, "ley de identidad")
        for h in hom_set(g.target, g.target)[:2]:
            result.check(compose(h, gf).images == compose(compose(h, g), f).images, "asociatividad")


# ----------------------------------------------------------------------
# Clausura cartesiana local

def law_pi_adjunction(ctx: LawContext, result: LawResult):
    over = {X: [sliced(p) for P in ctx.family for p in hom_set(P, X)] for X in ctx.family}
    instances = []
    for X, Y in itertools.product(ctx.family, repeat=2):
        for f in hom_set(X, Y):
            for p in over[Y]:
                for q in over[X]:
                    instances.append((f, p, q))
    for f, p, q in ctx.all_or_sample(instances, result):
        try:
            report = verify_pi_adjunction(f, p, q)
        except CombinatorialLimitError:
            result.skipped += 1
            continue
        result.check(report.passed, f"adjunción Π en f = {f}: {report}")


def law_exponential(ctx: LawContext, result: LawResult):
    triples = list(itertools.product(ctx.family, repeat=3))
    for A, B, C in ctx.sample(triples, ctx.settings.closure_samples):
        try:
            report = verify_exponential_adjunction(A, B, C)
        except CombinatorialLimitError:
            result.skipped += 1
            continue
        result.check(report.passed, f"exponencial {B}^{A} contra {C}: {report}")


# ----------------------------------------------------------------------
# Números naturales

def law_nno(ctx: LawContext, result: LawResult):
    alg = ctx.alg
    size = alg.lattice.size
    table = nat_exists_table(alg, ctx.settings.nno_max_n)
    result.check(len(table) == ctx.settings.nno_max_n + 1, "tabla de E_ℕ incompleta")
    if size <= 3:
        for n in range(5):
            exact = nat_exists(alg, n)
            oracle = nat_oracle(alg, n, size * size + n, size)
            result.check(exact == oracle, f"E_ℕ({n}) = {exact.name} pero el oráculo da {oracle.name}")
    else:
        result.skipped += 1
    big = truncated_nno(alg, 5)
    for M in range(1, 5):
        small = truncated_nno(alg, M)
        result.check(big.assembly.exists[:M] == small.assembly.exists, f"truncación inconsistente en {M}")

    one = terminal(alg).obj
    cases = []
    for X in ctx.family:
        if X.size == 0:
            continue
        for q in hom_set(one, X):
            for f in hom_set(X, X):
                cases.append((X, q, f))
    for X, q, f in ctx.sample(cases, ctx.settings.closure_samples):
        report = recursor(alg, X, q, f, 4)
        result.check(report.passed, f"recursor sobre {X}: {report.checks}")


# ----------------------------------------------------------------------
# Forcing

def law_forcing(ctx: LawContext, result: LawResult):
    flags = classify(ctx.alg)
    result.check(check_i_iso(ctx.alg) == flags.filter, "filtro ≠ i iso")
    report = forcing_report(ctx.alg, ctx.family, ctx.settings)
    result.check(report.equivalences_consistent, f"equivalencias inconsistentes: {report.as_dict()}")


LAWS: Dict[str, Callable[[LawContext, LawResult], None]] = {
    'lattice_bounds': law_lattice_bounds,
    'application_adjunction': law_application_adjunction,
    'application_monotone': law_application_monotone,
    'beta_eta_inequalities': law_beta_eta_inequalities,
    'heyting_collapse': law_heyting_collapse,
    'combinators_exact': law_combinators_exact,
    'beta_soundness': law_beta_soundness,
    'eta_direction': law_eta_direction,
    'separator_closure': law_separator_closure,
    'generate_minimal': law_generate_minimal,
    'entailment_preorder': law_entailment_preorder,
    'universal_limits': law_universal_limits,
    'subobject_classifier': law_subobject_classifier,
    'mono_epi': law_mono_epi,
    'category': law_category,
    'pi_adjunction': law_pi_adjunction,
    'exponential': law_exponential,
    'nno': law_nno,
    'forcing': law_forcing,
}


@dataclass
class LawReport:
    algebra: str
    results: List[LawResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'law': r.name,
            'checked': r.checked,
            'skipped': r.skipped,
            'failures': len(r.failures),
            'status': r.status,
        } for r in self.results], columns=['law', 'checked', 'skipped', 'failures', 'status'])

    def failure_lines(self) -> List[str]:
        return [f"{r.name}: {message}" for r in self.results for message in r.failures]


def run_law_suite(alg: ImplicativeAlgebra, settings: Optional[Settings] = None,
                  max_carrier: Optional[int] = None, only: Optional[Sequence[str]] = None) -> LawReport:
    """
    Ejecuta la suite completa (o las leyes de `only`) sobre un álgebra.

    Un InternalInvariantError dentro de una ley se registra como fallo de esa ley.
    """
    settings = settings or get_settings()
    if max_carrier is not None:
        settings = settings.with_overrides(universal_max_carrier=max_carrier)
    ctx = LawContext(alg, settings, small_assemblies(alg, settings.universal_max_carrier),
                     ReferenceAlgebraGenerator(settings.random_seed))
    names = list(only) if only is not None else list(LAWS)
    unknown = [n for n in names if n not in LAWS]
    if unknown:
        raise ValueError(f"Leyes desconocidas: {unknown}")

    results = []
    for name in names:
        result = LawResult(name)
        logger.info(f"Verificando {name} sobre {alg.name}")
        try:
            LAWS[name](ctx, result)
        except InternalInvariantError as e:
            result.failures.append(f"invariante interno: {e}")
        except CombinatorialLimitError as e:
            logger.warning(f"{name} omitida: {e}")
            result.skipped += 1
        results.append(result)
        if result.failures:
            logger.warning(f"{name}: {len(result.failures)} fallos")
    return LawReport(alg.name, results)
