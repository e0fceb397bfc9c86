"""
Clausura cartesiana local: f-secciones, el producto dependiente Π_f como
adjunto a derecha del pullback, su unidad y su transpuesta, y exponenciales.

Los puntos de Π_f(t) son pares (y, s) con s una f-sección seguida sobre y.
Se nombran "(y;x1↦w1,x2↦w2)" sin espacios, en el orden declarado de la fibra.
"""

import logging
import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from lattice import Element
from implicative import InternalInvariantError
from lambda_calculus import macro
from assemblies import (
    Assembly, AssemblyError, CombinatorialLimitError, CompositionMismatch, Morphism,
    compose_images, derived_assembly, derived_morphism,
    fiber, hom_set, identity, product, pullback, terminal, tracking_index,
)
from config import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlicedObject:
    """Objeto de la rebanada sobre `base`: total --projection--> base."""
    total: Assembly
    base: Assembly
    projection: Morphism

    def __post_init__(self):
        if self.projection.source != self.total or self.projection.target != self.base:
            raise CompositionMismatch("La proyección no va de total a base")


def sliced(projection: Morphism) -> SlicedObject:
    return SlicedObject(projection.source, projection.target, projection)


def identity_slice(X: Assembly) -> SlicedObject:
    return sliced(identity(X))


@dataclass(frozen=True)
class SectionPoint:
    """f-sección sobre `basepoint`; `section[k]` es el índice en W de la imagen del k-ésimo punto de la fibra."""
    basepoint: str
    fiber_points: Tuple[str, ...]
    section: Tuple[int, ...]
    tracking_value: Element

    def label(self, total: Assembly) -> str:
        body = ','.join(f"{x}↦{total.points[w]}" for x, w in zip(self.fiber_points, self.section))
        return f"({self.basepoint};{body})"


def _candidates(f: Morphism, t: SlicedObject, y: str):
    if t.base != f.source:
        raise CompositionMismatch("El objeto de la rebanada no está sobre el dominio de f")
    fib = fiber(f, y)
    F = fib.obj
    X_indices = fib.legs[0].images
    options = [[w for w in range(t.total.size) if t.projection.images[w] == x] for x in X_indices]
    return F, X_indices, options


def sections(f: Morphism, t: SlicedObject, y: str) -> List[SectionPoint]:
    """
    Todas las f-secciones de t sobre y: funciones s de la fibra en |W| con
    t∘s = id cuyo seguimiento desde la fibra pertenece al separador.
    """
    F, _, options = _candidates(f, t, y)
    alg = f.source.algebra
    lattice = alg.lattice
    result = []
    for choice in itertools.product(*options):
        tau = tracking_index(F, t.total, choice)
        if alg.contains_i(tau):
            result.append(SectionPoint(y, F.points, tuple(choice), lattice.at(tau)))
    return result


def section_count_bound(f: Morphism, t: SlicedObject) -> int:
    total = 0
    for y in f.target.points:
        _, _, options = _candidates(f, t, y)
        count = 1
        for o in options:
            count *= len(o)
        total += count
    return total


@dataclass(frozen=True)
class DependentProduct:
    f: Morphism
    t: SlicedObject
    sliced: SlicedObject
    points: Tuple[SectionPoint, ...]

    @property
    def obj(self) -> Assembly:
        return self.sliced.total

    def find(self, basepoint: str, section: Sequence[int]) -> Optional[int]:
        for k, sp in enumerate(self.points):
            if sp.basepoint == basepoint and sp.section == tuple(section):
                return k
        return None


def dependent_product(f: Morphism, t: SlicedObject, cap: Optional[int] = None) -> DependentProduct:
    """
    Π_f(t) con E(y,s) = E_Y(y) ∧ ⋀_{x∈f⁻¹(y)} (E_X(x) → E_W(s(x))) y la
    proyección al punto base seguida por π₁.
    """
    cap = cap if cap is not None else get_settings().dependent_product_cap
    bound = section_count_bound(f, t)
    if bound > cap:
        raise CombinatorialLimitError(
            f"Π_f requiere enumerar {bound} secciones candidatas (tope {cap})")

    X, Y, W = f.source, f.target, t.total
    alg = X.algebra
    structure = alg.structure
    lattice = alg.lattice
    section_points, labels, values, bases = [], [], [], []
    for j, y in enumerate(Y.points):
        for sp in sections(f, t, y):
            sigma = lattice.meet_indices(
                structure.imp_i(X.exists_index(X.position(x)), W.exists_index(w))
                for x, w in zip(sp.fiber_points, sp.section))
            if not alg.contains_i(sigma):
                raise InternalInvariantError(f"Sección seguida con σ ∉ S sobre {y}")
            section_points.append(sp)
            labels.append(sp.label(W))
            values.append(lattice.at(structure.conj_i(Y.exists_index(j), sigma)))
            bases.append(j)

    P = derived_assembly(alg, labels, values, f"Π({W.name})")
    bp = derived_morphism(P, Y, bases, 'bp', macro('pi1'))
    logger.debug(f"Π_f construido con {len(section_points)} secciones sobre {Y.size} puntos base")
    return DependentProduct(f, t, SlicedObject(P, Y, bp), tuple(section_points))


def reindex(f: Morphism, p: SlicedObject) -> SlicedObject:
    """f*p por pullback; la nueva proyección es la primera."""
    if p.base != f.target:
        raise CompositionMismatch("El objeto no está sobre el codominio de f")
    square = pullback(f, p.projection)
    return SlicedObject(square.obj, f.source, square.legs[0])


def slice_hom_set(a: SlicedObject, b: SlicedObject) -> List[Morphism]:
    """Morfismos h : a.total → b.total con b∘h = a."""
    if a.base != b.base:
        raise CompositionMismatch("Objetos de rebanadas distintas")
    return [h for h in hom_set(a.total, b.total)
            if compose_images(b.projection, h) == a.projection.images]


def _point_pairs(f: Morphism, p: SlicedObject) -> List[Tuple[int, int]]:
    """Pares (x, a) del pullback f*p en el orden de sus puntos."""
    square = pullback(f, p.projection)
    return list(zip(square.legs[0].images, square.legs[1].images))


def pi_unit(f: Morphism, p: SlicedObject, pi: Optional[DependentProduct] = None) -> Morphism:
    """η_p(a) = (p(a), x ↦ (x, a)) seguido por λs t. t (ϖ s) (λx z. z x s)."""
    q = reindex(f, p)
    pi = pi or dependent_product(f, q)
    pairs = _point_pairs(f, p)
    images = []
    for a in range(p.total.size):
        y = p.base.points[p.projection.images[a]]
        fib = fiber(f, y)
        section = [pairs.index((x, a)) for x in fib.legs[0].images]
        k = pi.find(y, section)
        if k is None:
            raise InternalInvariantError(f"La sección constante de {p.total.points[a]} no está seguida")
        images.append(k)
    return derived_morphism(p.total, pi.obj, images, 'η_p', macro('pi_unit', p.projection.tracking_value))


def pi_transpose(f: Morphism, p: SlicedObject, q: SlicedObject, w: Morphism,
                 pi: Optional[DependentProduct] = None) -> Morphism:
    """
    w̄ : f*p → q con w̄(x,a) = s_{w,a}(x), seguido por
    λv. π₂ (ξ (π₂ v)) (π₁ v) con ξ = τ(w).
    """
    pi = pi or dependent_product(f, q)
    if w.source != p.total or w.target != pi.obj:
        raise CompositionMismatch("w debe ir de p a Π_f(q)")
    if compose_images(pi.sliced.projection, w) != p.projection.images:
        raise AssemblyError("w no es un morfismo de la rebanada sobre la base")
    reindexed = reindex(f, p)
    pairs = _point_pairs(f, p)
    images = []
    for x, a in pairs:
        sp = pi.points[w.images[a]]
        images.append(sp.section[sp.fiber_points.index(f.source.points[x])])
    return derived_morphism(reindexed.total, q.total, images, 'w̄',
                             macro('pi_transpose', w.tracking_value))


def pi_map(f: Morphism, u: Morphism, source: DependentProduct, target: DependentProduct) -> Morphism:
    """Π_f(u) : (y, s) ↦ (y, u∘s), seguido por λw s. s (π₁ w) (λx. υ ((π₂ w) x))."""
    if u.source != source.t.total or u.target != target.t.total:
        raise CompositionMismatch("u no va entre los totales de las rebanadas")
    if compose_images(target.t.projection, u) != source.t.projection.images:
        raise AssemblyError("u no es un morfismo de la rebanada")
    images = []
    for sp in source.points:
        k = target.find(sp.basepoint, [u.images[w] for w in sp.section])
        if k is None:
            raise InternalInvariantError(f"u∘s no es una sección seguida sobre {sp.basepoint}")
        images.append(k)
    return derived_morphism(source.obj, target.obj, images, 'Π_f(u)',
                             macro('pi_map', u.tracking_value))


@dataclass
class PiAdjunctionReport:
    left_count: int
    right_count: int
    bijective: bool
    triangle: bool
    unique: bool

    @property
    def passed(self) -> bool:
        return (self.left_count == self.right_count and self.bijective
                and self.triangle and self.unique)


def verify_pi_adjunction(f: Morphism, p: SlicedObject, q: SlicedObject) -> PiAdjunctionReport:
    """
    Hom_/X(f*p, q) ≅ Hom_/Y(p, Π_f q): cuenta ambos lados, realiza la
    biyección con la transpuesta y verifica w = Π_f(w̄) ∘ η_p y la unicidad de w̄.
    """
    reindexed = reindex(f, p)
    pi_q = dependent_product(f, q)
    pi_fp = dependent_product(f, reindexed)
    eta = pi_unit(f, p, pi_fp)

    left = slice_hom_set(reindexed, q)
    right = slice_hom_set(p, pi_q.sliced)

    transposes = [pi_transpose(f, p, q, w, pi_q) for w in right]
    left_images = {v.images for v in left}
    bijective = (all(v.images in left_images for v in transposes)
                 and len({v.images for v in transposes}) == len(transposes))

    triangle = True
    unique = True
    pushed = {v.images: compose_images(pi_map(f, v, pi_fp, pi_q), eta) for v in left}
    for w, w_bar in zip(right, transposes):
        if pushed.get(w_bar.images) != w.images:
            triangle = False
        if sum(1 for images in pushed.values() if images == w.images) != 1:
            unique = False

    report = PiAdjunctionReport(len(left), len(right), bijective, triangle, unique)
    logger.debug(f"Adjunción Π: {report}")
    return report


# ----------------------------------------------------------------------
# Exponenciales

@dataclass(frozen=True)
class Exponential:
    obj: Assembly
    base: Assembly
    codomain: Assembly
    maps: Tuple[Tuple[int, ...], ...]
    evaluation: Morphism

    def curry(self, h: Morphism, C: Assembly) -> Morphism:
        """Λh : C → B^A con Λh(c) = h(c, -); h sale de product(C, A)."""
        A, B = self.base, self.codomain
        prod = product(C, A).obj
        if h.source != prod or h.target != B:
            raise CompositionMismatch("h debe ir de C×A a B")
        images = []
        for c in range(C.size):
            g = tuple(h.images[c * A.size + x] for x in range(A.size))
            if g not in self.maps:
                raise InternalInvariantError("El currificado de un morfismo seguido no está en B^A")
            images.append(self.maps.index(g))
        return derived_morphism(C, self.obj, images, 'Λh')


def exponential(A: Assembly, B: Assembly) -> Exponential:
    """B^A = Π a lo largo de A → 1 de A×B sobre A; los puntos se nombran "[x↦b,...]"."""
    one = terminal(A.algebra)
    bang = one.mediator(A)
    pr = product(A, B)
    pi = dependent_product(bang, sliced(pr.legs[0]))
    maps = tuple(tuple(pr.legs[1].images[w] for w in sp.section) for sp in pi.points)
    labels = ['[' + ','.join(f"{A.points[x]}↦{B.points[b]}" for x, b in enumerate(g)) + ']' for g in maps]
    E = derived_assembly(A.algebra, labels, pi.obj.exists, f"{B.name}^{A.name}")

    domain = product(E, A).obj
    ev_images = [maps[g][x] for g in range(len(maps)) for x in range(A.size)]
    evaluation = derived_morphism(domain, B, ev_images, 'ev')
    return Exponential(E, A, B, maps, evaluation)


@dataclass
class ExponentialReport:
    hom_count: int
    curried_count: int
    bijective: bool
    evaluation_ok: bool

    @property
    def passed(self) -> bool:
        return self.hom_count == self.curried_count and self.bijective and self.evaluation_ok


def verify_exponential_adjunction(A: Assembly, B: Assembly, C: Assembly) -> ExponentialReport:
    """Hom(C×A, B) ≅ Hom(C, B^A) con ev ∘ (Λh × id) = h."""
    exp = exponential(A, B)
    prod = product(C, A).obj
    left = hom_set(prod, B)
    right = hom_set(C, exp.obj)
    curried = [exp.curry(h, C) for h in left]
    right_images = {g.images for g in right}
    bijective = (all(g.images in right_images for g in curried)
                 and len({g.images for g in curried}) == len(curried))
    evaluation_ok = True
    for h, g in zip(left, curried):
        recovered = tuple(exp.evaluation.images[g.images[c] * A.size + x]
                          for c in range(C.size) for x in range(A.size))
        if recovered != h.images:
            evaluation_ok = False
    return ExponentialReport(len(left), len(right), bijective, evaluation_ok)
