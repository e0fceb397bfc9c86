"""
La categoría de asambleas implicativas a escala finita.

Una asamblea es un conjunto finito de puntos con un predicado de existencia
valuado en el separador. Los morfismos son funciones entre portadores cuyo
valor de seguimiento τ(f) = ⋀_x (E_X(x) → E_Y(f(x))) pertenece al separador;
τ(f) es el mayor tracker y es el que se guarda. Los trackers λ de cada
construcción se interpretan y se verifican como cotas inferiores de τ.
"""

import logging
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from lattice import Element
from implicative import ImplicativeAlgebra, InternalInvariantError
from lambda_calculus import Term, interpret, macro

logger = logging.getLogger(__name__)

TERMINAL_POINT = '*'


class AssemblyError(ValueError):
    """Error base de la categoría de asambleas."""


class CarrierMismatch(AssemblyError):
    """La función no es total, nombra puntos inexistentes o mezcla álgebras."""


class NotTracked(AssemblyError):
    """La función no cumple la condición de seguimiento; lleva τ(f)."""

    def __init__(self, message: str, tracking_value: Element):
        super().__init__(message)
        self.tracking_value = tracking_value


class NotStrongMono(AssemblyError):
    """Se pidió clasificar un mono que no es extremal."""


class CompositionMismatch(AssemblyError):
    """Dominio y codominio no encajan."""


class CombinatorialLimitError(ValueError):
    """La enumeración pedida supera el tope configurado."""


# ----------------------------------------------------------------------
# Objetos y morfismos

@dataclass(frozen=True)
class Assembly:
    points: Tuple[str, ...]
    exists: Tuple[Element, ...]
    algebra: ImplicativeAlgebra = field(compare=False, repr=False)
    name: str = field(default='X', compare=False)

    @property
    def size(self) -> int:
        return len(self.points)

    def position(self, point: str) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise CarrierMismatch(f"'{point}' no es un punto de {self.name}") from None

    def has_point(self, point: str) -> bool:
        return point in self.points

    def exists_of(self, point: str) -> Element:
        return self.exists[self.position(point)]

    def exists_index(self, i: int) -> int:
        return self.exists[i].index

    def __str__(self) -> str:
        body = ' '.join(f"{p}:{e.name}" for p, e in zip(self.points, self.exists))
        return f"{self.name}{{{body}}}"


def make_assembly(alg: ImplicativeAlgebra, points: Sequence[str],
                  exists: Union[Mapping[str, Element], Sequence[Element]], name: str = 'X') -> Assembly:
    """Construye una asamblea verificando que cada E(x) pertenezca al separador."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise AssemblyError(f"Puntos duplicados en {name}: {list(points)}")
    if isinstance(exists, Mapping):
        missing = [p for p in points if p not in exists]
        if missing:
            raise AssemblyError(f"Predicado de existencia incompleto en {name}: faltan {missing}")
        values = tuple(exists[p] for p in points)
    else:
        values = tuple(exists)
        if len(values) != len(points):
            raise AssemblyError(f"{name}: {len(points)} puntos y {len(values)} valores de existencia")
    for p, e in zip(points, values):
        alg.lattice.index_of(e)
        if not alg.contains(e):
            raise AssemblyError(
                f"Predicado de existencia fuera del separador en {name}: E({p}) = {e.name} ∉ S")
    return Assembly(points, values, alg, name)


def derived_assembly(alg: ImplicativeAlgebra, points, values, name: str) -> Assembly:
    try:
        return make_assembly(alg, points, values, name)
    except AssemblyError as e:
        raise InternalInvariantError(f"Construcción con predicado fuera del separador: {e}") from e


@dataclass(frozen=True)
class Morphism:
    source: Assembly
    target: Assembly
    images: Tuple[int, ...]
    tracking_value: Element = field(compare=False)
    certificate: Optional[Element] = field(default=None, compare=False)

    def apply(self, point: str) -> str:
        return self.target.points[self.images[self.source.position(point)]]

    @property
    def mapping(self) -> Dict[str, str]:
        return {p: self.target.points[j] for p, j in zip(self.source.points, self.images)}

    def __str__(self) -> str:
        body = ' '.join(f"{p}:{q}" for p, q in self.mapping.items())
        return f"{self.source.name} -> {self.target.name} [{body}] τ={self.tracking_value.name}"


def _same_algebra(X: Assembly, Y: Assembly):
    if X.algebra is not Y.algebra:
        raise CarrierMismatch(f"{X.name} y {Y.name} pertenecen a álgebras distintas")


def tracking_index(X: Assembly, Y: Assembly, images: Sequence[int]) -> int:
    structure = X.algebra.structure
    return structure.lattice.meet_indices(
        structure.imp_i(X.exists_index(i), Y.exists_index(j)) for i, j in enumerate(images))


def _images_of(X: Assembly, Y: Assembly, map_) -> Tuple[int, ...]:
    if isinstance(map_, Mapping):
        unknown = [p for p in map_ if not X.has_point(p)]
        if unknown:
            raise CarrierMismatch(f"Puntos inexistentes en {X.name}: {unknown}")
        missing = [p for p in X.points if p not in map_]
        if missing:
            raise CarrierMismatch(f"La función no es total en {X.name}: faltan {missing}")
        targets = [map_[p] for p in X.points]
    else:
        targets = list(map_)
        if len(targets) != X.size:
            raise CarrierMismatch(f"La función debe dar {X.size} imágenes, se recibieron {len(targets)}")
    images = []
    for t in targets:
        if isinstance(t, int):
            if not 0 <= t < Y.size:
                raise CarrierMismatch(f"Índice {t} fuera del portador de {Y.name}")
            images.append(t)
        else:
            if not Y.has_point(t):
                raise CarrierMismatch(f"'{t}' no es un punto de {Y.name}")
            images.append(Y.position(t))
    return tuple(images)


def check_morphism(X: Assembly, Y: Assembly, map_) -> Morphism:
    """
    Verifica la condición de seguimiento de una función entre portadores.

    Args:
        X: Asamblea dominio
        Y: Asamblea codominio
        map_: Mapa punto→punto, o lista de imágenes (nombres o índices) en orden de X

    Returns:
        Morphism con τ(f) como valor de seguimiento
    """
    _same_algebra(X, Y)
    images = _images_of(X, Y, map_)
    tau = tracking_index(X, Y, images)
    lattice = X.algebra.lattice
    if not X.algebra.contains_i(tau):
        raise NotTracked(
            f"Condición de seguimiento violada: τ = {lattice.names[tau]} ∉ S "
            f"({X.name} -> {Y.name})", lattice.at(tau))
    return Morphism(X, Y, images, lattice.at(tau))


def certify(term: Term, f: Morphism, what: str) -> Morphism:
    """Interpreta el tracker de la construcción y exige que quede bajo τ(f)."""
    structure = f.source.algebra.structure
    value = interpret(term, structure)
    if not structure.lattice.leq(value, f.tracking_value):
        raise InternalInvariantError(
            f"El tracker de {what} vale {value.name} y no está bajo τ = {f.tracking_value.name}")
    return Morphism(f.source, f.target, f.images, f.tracking_value, value)


def derived_morphism(X: Assembly, Y: Assembly, images: Sequence[int], what: str,
                      tracker: Optional[Term] = None) -> Morphism:
    try:
        f = check_morphism(X, Y, list(images))
    except NotTracked as e:
        raise InternalInvariantError(f"{what} debería estar seguido: {e}") from e
    return certify(tracker, f, what) if tracker is not None else f


def identity(X: Assembly) -> Morphism:
    return derived_morphism(X, X, range(X.size), f"id_{X.name}", macro('identity'))


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g∘f, recalculando τ y certificando λx. s_g (s_f x) con s = τ."""
    if f.target != g.source:
        raise CompositionMismatch(f"No se puede componer: {f.target.name} ≠ {g.source.name}")
    images = tuple(g.images[i] for i in f.images)
    tracker = macro('compose', f.tracking_value, g.tracking_value)
    return derived_morphism(f.source, g.target, images, 'la composición', tracker)


def compose_images(g: Morphism, f: Morphism) -> Tuple[int, ...]:
    return tuple(g.images[i] for i in f.images)


# ----------------------------------------------------------------------
# Γ ⊣ Δ, hom-sets, monos y epis

def delta(alg: ImplicativeAlgebra, points: Iterable[str], name: str = 'Δ') -> Assembly:
    points = tuple(points)
    top = alg.lattice.top
    return make_assembly(alg, points, [top] * len(points), name)


def gamma(X: Assembly) -> Tuple[str, ...]:
    return X.points


def unit_to_delta(X: Assembly) -> Morphism:
    """Unidad η_X : X → ΔΓX (la identidad, seguida por ⊤)."""
    target = delta(X.algebra, X.points, f"ΔΓ{X.name}")
    return derived_morphism(X, target, range(X.size), 'la unidad de Γ⊣Δ')


def hom_set(X: Assembly, Y: Assembly, cap: Optional[int] = None) -> List[Morphism]:
    """Todos los morfismos X → Y, en orden lexicográfico de imágenes."""
    _same_algebra(X, Y)
    total = Y.size ** X.size
    if cap is not None and total > cap:
        raise CombinatorialLimitError(
            f"Hom({X.name}, {Y.name}) tiene {total} funciones candidatas (tope {cap})")
    lattice = X.algebra.lattice
    result = []
    for images in itertools.product(range(Y.size), repeat=X.size):
        tau = tracking_index(X, Y, images)
        if X.algebra.contains_i(tau):
            result.append(Morphism(X, Y, tuple(images), lattice.at(tau)))
    return result


def is_mono(f: Morphism) -> bool:
    return len(set(f.images)) == len(f.images)


def is_epi(f: Morphism) -> bool:
    return set(f.images) == set(range(f.target.size))


def is_mono_categorical(f: Morphism, family: Sequence[Assembly]) -> bool:
    """Cancelable a izquierda contra la familia de prueba."""
    for X in family:
        maps = hom_set(X, f.source)
        seen: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for h in maps:
            key = compose_images(f, h)
            if key in seen and seen[key] != h.images:
                return False
            seen[key] = h.images
    return True


def is_epi_categorical(f: Morphism, family: Sequence[Assembly]) -> bool:
    """Cancelable a derecha contra la familia de prueba."""
    for X in family:
        maps = hom_set(f.target, X)
        seen: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for h in maps:
            key = compose_images(h, f)
            if key in seen and seen[key] != h.images:
                return False
            seen[key] = h.images
    return True


def inverse_images(f: Morphism) -> Optional[Tuple[int, ...]]:
    if not (is_mono(f) and is_epi(f)):
        return None
    inverse = [0] * f.target.size
    for i, j in enumerate(f.images):
        inverse[j] = i
    return tuple(inverse)


def is_iso(f: Morphism) -> bool:
    """Biyectiva y con inversa seguida."""
    inverse = inverse_images(f)
    if inverse is None:
        return False
    return f.source.algebra.contains_i(tracking_index(f.target, f.source, inverse))


# ----------------------------------------------------------------------
# Construcciones

@dataclass(frozen=True)
class Construction:
    """Objeto construido, sus morfismos estructurales y el constructor de mediadores."""
    kind: str
    obj: Assembly
    legs: Tuple[Morphism, ...]
    diagram: Tuple[Morphism, ...] = ()
    mediator: Optional[Callable[..., Morphism]] = field(default=None, compare=False, repr=False)


def terminal(alg: ImplicativeAlgebra) -> Construction:
    one = delta(alg, [TERMINAL_POINT], '1')

    def mediator(X: Assembly) -> Morphism:
        return derived_morphism(X, one, [0] * X.size, f"{X.name} -> 1")

    return Construction('terminal', one, (), (), mediator)


def initial(alg: ImplicativeAlgebra) -> Construction:
    zero = delta(alg, [], '0')

    def mediator(X: Assembly) -> Morphism:
        return derived_morphism(zero, X, [], f"0 -> {X.name}")

    return Construction('initial', zero, (), (), mediator)


def product(A: Assembly, B: Assembly) -> Construction:
    """A×B con E(a,b) = E_A(a) ∧ E_B(b) (conjunción codificada)."""
    _same_algebra(A, B)
    alg = A.algebra
    structure = alg.structure
    points, values, pairs = [], [], []
    for i, a in enumerate(A.points):
        for j, b in enumerate(B.points):
            points.append(f"({a},{b})")
            values.append(structure.lattice.at(structure.conj_i(A.exists_index(i), B.exists_index(j))))
            pairs.append((i, j))
    P = derived_assembly(alg, points, values, f"{A.name}×{B.name}")
    p1 = derived_morphism(P, A, [i for i, _ in pairs], 'π₁', macro('pi1'))
    p2 = derived_morphism(P, B, [j for _, j in pairs], 'π₂', macro('pi2'))

    def mediator(f: Morphism, g: Morphism) -> Morphism:
        if f.source != g.source or f.target != A or g.target != B:
            raise CompositionMismatch("El cono no tiene la forma X -> A, X -> B")
        images = [f.images[x] * B.size + g.images[x] for x in range(f.source.size)]
        tracker = macro('pair_tracker', f.tracking_value, g.tracking_value)
        return derived_morphism(f.source, P, images, '⟨f,g⟩', tracker)

    return Construction('product', P, (p1, p2), (), mediator)


def equalizer(f: Morphism, g: Morphism) -> Construction:
    """Ker(f,g) = {a : f(a) = g(a)} con E_A restringido e inclusión seguida por λx.x."""
    if f.source != g.source or f.target != g.target:
        raise CompositionMismatch("El par no es paralelo")
    A = f.source
    kept = [i for i in range(A.size) if f.images[i] == g.images[i]]
    E = derived_assembly(A.algebra, [A.points[i] for i in kept], [A.exists[i] for i in kept],
                          f"Ker({A.name})")
    k = derived_morphism(E, A, kept, 'la inclusión del ecualizador', macro('identity'))

    def mediator(h: Morphism) -> Morphism:
        if h.target != A:
            raise CompositionMismatch(f"El cono debe llegar a {A.name}")
        if compose_images(f, h) != compose_images(g, h):
            raise AssemblyError("El morfismo no iguala el par")
        images = [kept.index(i) for i in h.images]
        result = derived_morphism(h.source, E, images, "h'")
        if not A.algebra.lattice.leq(h.tracking_value, result.tracking_value):
            raise InternalInvariantError("El tracker de h no sirve para h'")
        return Morphism(result.source, result.target, result.images, result.tracking_value,
                        h.tracking_value)

    return Construction('equalizer', E, (k,), (f, g), mediator)


def pullback(f: Morphism, g: Morphism) -> Construction:
    """X ×_Y A con E(x,a) = E_X(x) ∧ E_A(a) y proyecciones seguidas por π₁, π₂."""
    if f.target != g.target:
        raise CompositionMismatch("Los morfismos no comparten codominio")
    X, A = f.source, g.source
    structure = X.algebra.structure
    points, values, pairs = [], [], []
    for i in range(X.size):
        for j in range(A.size):
            if f.images[i] == g.images[j]:
                points.append(f"({X.points[i]},{A.points[j]})")
                values.append(structure.lattice.at(structure.conj_i(X.exists_index(i), A.exists_index(j))))
                pairs.append((i, j))
    P = derived_assembly(X.algebra, points, values, f"{X.name}×_{f.target.name}{A.name}")
    p1 = derived_morphism(P, X, [i for i, _ in pairs], 'p₁', macro('pi1'))
    p2 = derived_morphism(P, A, [j for _, j in pairs], 'p₂', macro('pi2'))

    def mediator(u: Morphism, v: Morphism) -> Morphism:
        if u.source != v.source or u.target != X or v.target != A:
            raise CompositionMismatch("El cono no tiene la forma Z -> X, Z -> A")
        if compose_images(f, u) != compose_images(g, v):
            raise AssemblyError("El cono no conmuta: f∘u ≠ g∘v")
        images = [pairs.index((u.images[z], v.images[z])) for z in range(u.source.size)]
        tracker = macro('pair_tracker', u.tracking_value, v.tracking_value)
        return derived_morphism(u.source, P, images, '⟨u,v⟩', tracker)

    return Construction('pullback', P, (p1, p2), (f, g), mediator)


def point_subassembly(Y: Assembly, y: str) -> Construction:
    """Sub-asamblea {y} con E_Y(y) y su inclusión."""
    j = Y.position(y)
    point = derived_assembly(Y.algebra, [y], [Y.exists[j]], f"{{{y}}}")
    inclusion = derived_morphism(point, Y, [j], f"{{{y}}} ↪ {Y.name}", macro('identity'))
    return Construction('point', point, (inclusion,))


def fiber(f: Morphism, y: str) -> Construction:
    """
    Fibra f⁻¹(y): pullback de f a lo largo de {y} ↪ Y, con los puntos
    renombrados a los originales y E(x) = E_X(x) ∧ E_Y(y).
    """
    inclusion = point_subassembly(f.target, y).legs[0]
    square = pullback(f, inclusion)
    X = f.source
    kept = list(square.legs[0].images)
    F = derived_assembly(X.algebra, [X.points[i] for i in kept], square.obj.exists,
                          f"{f.source.name}⁻¹({y})")
    leg = derived_morphism(F, X, kept, 'la inclusión de la fibra', macro('pi1'))
    return Construction('fiber', F, (leg,), (f,))


def coproduct(A: Assembly, B: Assembly) -> Construction:
    """A+B con E(inl:a) = K ∧ E_A(a), E(inr:b) = KI ∧ E_B(b)."""
    _same_algebra(A, B)
    alg = A.algebra
    structure = alg.structure
    k = structure.combinator_i('K')
    ki = structure.combinator_i('KI')
    points = [f"inl:{a}" for a in A.points] + [f"inr:{b}" for b in B.points]
    values = ([structure.lattice.at(structure.conj_i(k, A.exists_index(i))) for i in range(A.size)] +
              [structure.lattice.at(structure.conj_i(ki, B.exists_index(j))) for j in range(B.size)])
    C = derived_assembly(alg, points, values, f"{A.name}+{B.name}")
    i1 = derived_morphism(A, C, range(A.size), 'σ₁', macro('inl'))
    i2 = derived_morphism(B, C, [A.size + j for j in range(B.size)], 'σ₂', macro('inr'))

    def mediator(f: Morphism, g: Morphism) -> Morphism:
        if f.target != g.target or f.source != A or g.source != B:
            raise CompositionMismatch("El cocono no tiene la forma A -> X, B -> X")
        images = list(f.images) + list(g.images)
        tracker = macro('case_tracker', f.tracking_value, g.tracking_value)
        return derived_morphism(C, f.target, images, '[f,g]', tracker)

    return Construction('coproduct', C, (i1, i2), (), mediator)


class UnionFind:
    """Clases de equivalencia sobre índices; el representante es el menor."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        if self.parent[x] != x:
            self.parent[x] = self.find(self.parent[x])
        return self.parent[x]

    def union(self, x: int, y: int):
        px, py = self.find(x), self.find(y)
        self.parent[px] = self.parent[py] = min(px, py)


def coequalizer(f: Morphism, g: Morphism) -> Construction:
    """|B|/∼ con E(c) = ∃_{b∈c} E_B(b); clases nombradas por su menor punto."""
    if f.source != g.source or f.target != g.target:
        raise CompositionMismatch("El par no es paralelo")
    B = f.target
    structure = B.algebra.structure
    uf = UnionFind(B.size)
    for a in range(f.source.size):
        uf.union(f.images[a], g.images[a])
    representatives = sorted({uf.find(b) for b in range(B.size)})
    members = {r: [b for b in range(B.size) if uf.find(b) == r] for r in representatives}
    values = [structure.lattice.at(structure.exists_i([B.exists_index(b) for b in members[r]]))
              for r in representatives]
    Q = derived_assembly(B.algebra, [B.points[r] for r in representatives], values,
                          f"Coker({B.name})")
    cls = [representatives.index(uf.find(b)) for b in range(B.size)]
    q = derived_morphism(B, Q, cls, 'el cociente', macro('quotient'))

    def mediator(h: Morphism) -> Morphism:
        if h.source != B:
            raise CompositionMismatch(f"El cocono debe salir de {B.name}")
        if compose_images(h, f) != compose_images(h, g):
            raise AssemblyError("El morfismo no coiguala el par")
        images = [h.images[r] for r in representatives]
        tracker = macro('coequalizer_mediator', h.tracking_value)
        return derived_morphism(Q, h.target, images, "h'", tracker)

    return Construction('coequalizer', Q, (q,), (f, g), mediator)


# ----------------------------------------------------------------------
# Imagen y clasificador de subobjetos

@dataclass(frozen=True)
class ImageFactorization:
    epi: Morphism
    mono: Morphism
    image: Assembly


def image_factorize(f: Morphism) -> ImageFactorization:
    B = f.target
    kept = sorted(set(f.images))
    Im = derived_assembly(B.algebra, [B.points[j] for j in kept], [B.exists[j] for j in kept],
                           f"Im({B.name})")
    epi = derived_morphism(f.source, Im, [kept.index(j) for j in f.images], 'f̂')
    if not B.algebra.lattice.leq(f.tracking_value, epi.tracking_value):
        raise InternalInvariantError("τ(f) no sigue a f̂")
    epi = Morphism(epi.source, epi.target, epi.images, epi.tracking_value, f.tracking_value)
    mono = derived_morphism(Im, B, kept, 'm_f', macro('identity'))
    return ImageFactorization(epi, mono, Im)


def is_extremal_mono(f: Morphism) -> bool:
    return is_mono(f) and is_iso(image_factorize(f).epi)


def subobject_classifier(alg: ImplicativeAlgebra) -> Construction:
    """Ω = ΔP(1) con t(*) = full."""
    omega = delta(alg, ['empty', 'full'], 'Ω')
    one = terminal(alg).obj
    t = derived_morphism(one, omega, [1], 't')
    return Construction('classifier', omega, (t,), (), classify_mono)


def represents_same_subobject(m: Morphism, inclusion: Morphism) -> bool:
    """¿Existe un iso φ : dom(m) → dom(inclusion) con inclusion∘φ = m?"""
    if m.target != inclusion.target:
        return False
    position = {j: i for i, j in enumerate(inclusion.images)}
    if len(position) != len(inclusion.images) or set(m.images) != set(position):
        return False
    if not is_mono(m):
        return False
    phi = [position[j] for j in m.images]
    forward = tracking_index(m.source, inclusion.source, phi)
    if not m.source.algebra.contains_i(forward):
        return False
    back = [0] * len(phi)
    for i, j in enumerate(phi):
        back[j] = i
    return m.source.algebra.contains_i(tracking_index(inclusion.source, m.source, back))


def classify_mono(m: Morphism) -> Morphism:
    """χ_m(b) = full si b ∈ Im(m); seguido por ⊤. Verifica que pullback(χ, t) ≅ dom(m)."""
    if not is_extremal_mono(m):
        raise NotStrongMono(f"El mono {m.source.name} -> {m.target.name} no es extremal")
    classifier = subobject_classifier(m.source.algebra)
    omega, t = classifier.obj, classifier.legs[0]
    B = m.target
    image = set(m.images)
    chi = derived_morphism(B, omega, [1 if j in image else 0 for j in range(B.size)], 'χ')
    square = pullback(chi, t)
    if not represents_same_subobject(m, square.legs[0]):
        raise InternalInvariantError("pullback(χ, t) no representa el subobjeto clasificado")
    return chi


# ----------------------------------------------------------------------
# Familias de prueba y verificación de propiedades universales

def small_assemblies(alg: ImplicativeAlgebra, max_carrier: int) -> List[Assembly]:
    """Todas las asambleas con portador {x0..x(k-1)}, k ≤ max_carrier, y E en S."""
    members = alg.separator.members
    family = []
    for k in range(max_carrier + 1):
        points = [f"x{i}" for i in range(k)]
        for values in itertools.product(members, repeat=k):
            label = ','.join(v.name for v in values)
            family.append(Assembly(tuple(points), tuple(values), alg, f"T[{label}]"))
    return family


@dataclass
class UniversalPropertyReport:
    kind: str
    passed: bool = True
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    def fail(self, message: str):
        self.passed = False
        if len(self.failures) < 10:
            self.failures.append(message)


class _HomCache:
    def __init__(self, cap: Optional[int]):
        self.cap = cap
        self.cache: Dict[Tuple[Assembly, Assembly], List[Morphism]] = {}

    def __call__(self, X: Assembly, Y: Assembly) -> List[Morphism]:
        key = (X, Y)
        if key not in self.cache:
            self.cache[key] = hom_set(X, Y, self.cap)
        return self.cache[key]


def verify_universal_property(kind: str, construction: Construction, family: Sequence[Assembly],
                              cap: Optional[int] = None) -> UniversalPropertyReport:
    """
    Comprueba existencia y unicidad de mediadores seguidos para cada cono (o
    cocono) sobre la familia de prueba, enumerando hom-sets.

    Args:
        kind: terminal, product, equalizer, initial, coproduct, coequalizer o classifier
        construction: Objeto candidato con sus morfismos estructurales
        family: Objetos de prueba
        cap: Tope opcional de funciones candidatas por hom-set

    Returns:
        UniversalPropertyReport con contraejemplos si los hay
    """
    hom = _HomCache(cap)
    report = UniversalPropertyReport(kind)
    obj = construction.obj

    def expect_one(count: int, context: str):
        report.checked += 1
        if count != 1:
            report.fail(f"{context}: {count} mediadores")

    if kind == 'terminal':
        for X in family:
            expect_one(len(hom(X, obj)), f"{X} -> 1")
    elif kind == 'initial':
        for X in family:
            expect_one(len(hom(obj, X)), f"0 -> {X}")
    elif kind == 'product':
        p1, p2 = construction.legs
        for X in family:
            for f in hom(X, p1.target):
                for g in hom(X, p2.target):
                    count = sum(1 for h in hom(X, obj)
                                if compose_images(p1, h) == f.images and compose_images(p2, h) == g.images)
                    expect_one(count, f"cono {f.images},{g.images} desde {X}")
    elif kind == 'coproduct':
        i1, i2 = construction.legs
        for X in family:
            for f in hom(i1.source, X):
                for g in hom(i2.source, X):
                    count = sum(1 for h in hom(obj, X)
                                if compose_images(h, i1) == f.images and compose_images(h, i2) == g.images)
                    expect_one(count, f"cocono {f.images},{g.images} hacia {X}")
    elif kind == 'equalizer':
        (k,), (f, g) = construction.legs, construction.diagram
        for X in family:
            for h in hom(X, f.source):
                if compose_images(f, h) != compose_images(g, h):
                    continue
                count = sum(1 for m in hom(X, obj) if compose_images(k, m) == h.images)
                expect_one(count, f"h = {h.images} desde {X}")
    elif kind == 'coequalizer':
        (q,), (f, g) = construction.legs, construction.diagram
        for X in family:
            for h in hom(f.target, X):
                if compose_images(h, f) != compose_images(h, g):
                    continue
                count = sum(1 for m in hom(obj, X) if compose_images(m, q) == h.images)
                expect_one(count, f"h = {h.images} hacia {X}")
    elif kind == 'classifier':
        (t,) = construction.legs
        for A in family:
            for B in family:
                for m in hom(A, B):
                    if not is_extremal_mono(m):
                        continue
                    count = 0
                    for chi in hom(B, obj):
                        if represents_same_subobject(m, pullback(chi, t).legs[0]):
                            count += 1
                    expect_one(count, f"mono {m.images}: {A} -> {B}")
    else:
        raise ValueError(f"Propiedad universal desconocida: '{kind}'")

    logger.debug(f"Propiedad universal {kind}: {report.checked} casos, "
                 f"{len(report.failures)} fallos registrados")
    return report
