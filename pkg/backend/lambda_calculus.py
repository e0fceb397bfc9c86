"""
λ-términos con parámetros en un álgebra implicativa.

Gramática de la CLI:

    term    := '\\' ident+ '.' term | appterm
    appterm := atom+                      (aplicación asociativa a izquierda)
    atom    := ident | '#' elemento | 'cc' | '(' term ')'

La interpretación recorre el término por recursión estructural usando la
aplicación y la abstracción de la estructura. Cada abstracción enumera todo
A para su variable ligada, así que el costo es |A|^(anidamiento); los
resultados se memorizan por (subtérmino, entorno restringido a sus variables
libres), de modo que los subtérminos cerrados se evalúan una sola vez.
"""

import re
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from lattice import Element, FiniteLattice
from implicative import ImplicativeStructure

logger = logging.getLogger(__name__)


class TermError(ValueError):
    """Error base de λ-términos."""


class ParseError(TermError):
    """Texto fuera de la gramática; lleva la posición (0-based) del problema."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (posición {position})")
        self.position = position


class UnboundVariable(TermError):
    """Variable libre sin valor en el entorno."""


class UnknownMacro(TermError):
    """Nombre de macro inexistente."""


class UnfilledHole(TermError):
    """Macro instanciada sin llenar todos sus huecos."""


# ----------------------------------------------------------------------
# Sintaxis abstracta

@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Abstraction:
    var: str
    body: 'Term'


@dataclass(frozen=True)
class Application:
    fun: 'Term'
    arg: 'Term'


@dataclass(frozen=True)
class Parameter:
    """Constante del álgebra; `value` es un Element o, sin retículo declarado, su nombre."""
    value: Union[Element, str]

    @property
    def name(self) -> str:
        return self.value.name if isinstance(self.value, Element) else self.value


@dataclass(frozen=True)
class Cc:
    """call/cc: sólo tiene valor de verdad (el de Peirce), nunca reduce."""


Term = Union[Variable, Abstraction, Application, Parameter, Cc]


# ----------------------------------------------------------------------
# Parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<lam>\\)
  | (?P<dot>\.)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<param>\#[^\s()\\]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def _tokenize(source: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        if match is None:
            raise ParseError(f"Carácter inesperado {source[pos]!r}", pos)
        kind = match.lastgroup
        if kind != 'ws':
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(('eof', '', len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, lattice: Optional[FiniteLattice]):
        self.tokens = _tokenize(source)
        self.index = 0
        self.lattice = lattice

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> Tuple[str, str, int]:
        token = self.peek()
        if token[0] != kind:
            raise ParseError(f"Se esperaba {what}", token[2])
        return self.advance()

    def term(self) -> Term:
        if self.peek()[0] == 'lam':
            self.advance()
            names = []
            while self.peek()[0] == 'ident':
                token = self.advance()
                if token[1] == 'cc':
                    raise ParseError("'cc' no puede usarse como variable ligada", token[2])
                names.append(token[1])
            if not names:
                raise ParseError("Se esperaba al menos una variable tras '\\'", self.peek()[2])
            self.expect('dot', "'.'")
            body = self.term()
            for name in reversed(names):
                body = Abstraction(name, body)
            return body
        return self.appterm()

    def appterm(self) -> Term:
        result = self.atom()
        while self.peek()[0] in ('ident', 'param', 'lpar', 'lam'):
            if self.peek()[0] == 'lam':
                # `f \x. x` : la abstracción final se extiende hasta el cierre
                result = Application(result, self.term())
                break
            result = Application(result, self.atom())
        return result

    def atom(self) -> Term:
        kind, text, pos = self.peek()
        if kind == 'ident':
            self.advance()
            return Cc() if text == 'cc' else Variable(text)
        if kind == 'param':
            self.advance()
            name = text[1:]
            if self.lattice is None:
                return Parameter(name)
            if not self.lattice.has_name(name):
                raise ParseError(f"Elemento desconocido '{name}'", pos)
            return Parameter(self.lattice.element(name))
        if kind == 'lpar':
            self.advance()
            inner = self.term()
            self.expect('rpar', "')'")
            return inner
        if kind == 'eof':
            raise ParseError("Fin de texto inesperado", pos)
        raise ParseError(f"Token inesperado {text!r}", pos)


def parse(source: str, lattice: Optional[FiniteLattice] = None) -> Term:
    """
    Analiza un término de la gramática de la CLI.

    Args:
        source: Texto del término
        lattice: Si se indica, los parámetros `#nombre` se resuelven contra él

    Returns:
        Árbol sintáctico con los binders múltiples expandidos
    """
    parser = _Parser(source, lattice)
    result = parser.term()
    kind, text, pos = parser.peek()
    if kind != 'eof':
        raise ParseError(f"Texto sobrante {text!r}", pos)
    return result


# ----------------------------------------------------------------------
# Variables, sustitución y α-equivalencia

@lru_cache(maxsize=None)
def free_variables(t: Term) -> FrozenSet[str]:
    if isinstance(t, Variable):
        return frozenset([t.name])
    if isinstance(t, Abstraction):
        return free_variables(t.body) - {t.var}
    if isinstance(t, Application):
        return free_variables(t.fun) | free_variables(t.arg)
    return frozenset()


def _all_names(t: Term) -> FrozenSet[str]:
    if isinstance(t, Variable):
        return frozenset([t.name])
    if isinstance(t, Abstraction):
        return _all_names(t.body) | {t.var}
    if isinstance(t, Application):
        return _all_names(t.fun) | _all_names(t.arg)
    return frozenset()


def fresh_name(base: str, avoid: FrozenSet[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, name: str, value: Term) -> Term:
    """t[name := value] sin captura de variables."""
    if isinstance(t, Variable):
        return value if t.name == name else t
    if isinstance(t, Application):
        return Application(substitute(t.fun, name, value), substitute(t.arg, name, value))
    if isinstance(t, Abstraction):
        if t.var == name or name not in free_variables(t.body):
            return t
        value_free = free_variables(value)
        if t.var in value_free:
            renamed = fresh_name(t.var, value_free | _all_names(t.body) | {name})
            body = substitute(t.body, t.var, Variable(renamed))
            return Abstraction(renamed, substitute(body, name, value))
        return Abstraction(t.var, substitute(t.body, name, value))
    return t


def canonical(t: Term, _depth: int = 0, _bound: Tuple[Tuple[str, str], ...] = ()) -> Term:
    """Renombra las variables ligadas por profundidad de binder; '%' no es un identificador válido."""
    if isinstance(t, Variable):
        for original, renamed in reversed(_bound):
            if original == t.name:
                return Variable(renamed)
        return t
    if isinstance(t, Abstraction):
        renamed = f"%{_depth}"
        return Abstraction(renamed, canonical(t.body, _depth + 1, _bound + ((t.var, renamed),)))
    if isinstance(t, Application):
        return Application(canonical(t.fun, _depth, _bound), canonical(t.arg, _depth, _bound))
    return t


def alpha_equal(t: Term, u: Term) -> bool:
    return canonical(t) == canonical(u)


def beta_reducts(t: Term) -> List[Term]:
    """Todos los reductos a un paso, en orden de posición del redex (exterior primero)."""
    reducts: List[Term] = []
    if isinstance(t, Application):
        if isinstance(t.fun, Abstraction):
            reducts.append(substitute(t.fun.body, t.fun.var, t.arg))
        reducts.extend(Application(f, t.arg) for f in beta_reducts(t.fun))
        reducts.extend(Application(t.fun, a) for a in beta_reducts(t.arg))
    elif isinstance(t, Abstraction):
        reducts.extend(Abstraction(t.var, b) for b in beta_reducts(t.body))
    return reducts


def eta_expand(t: Term) -> Term:
    """λx. t x con x fresca."""
    x = fresh_name('x', free_variables(t))
    return Abstraction(x, Application(t, Variable(x)))


def church(n: int) -> Term:
    """Numeral λx.λf.fⁿx."""
    if n < 0:
        raise TermError(f"Los numerales de Church requieren n >= 0, se recibió {n}")
    body: Term = Variable('x')
    for _ in range(n):
        body = Application(Variable('f'), body)
    return Abstraction('x', Abstraction('f', body))


def term_to_text(t: Term) -> str:
    """Imprime en la gramática de la CLI; parse(term_to_text(t)) es α-igual a t."""
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, Parameter):
        return '#' + t.name
    if isinstance(t, Cc):
        return 'cc'
    if isinstance(t, Abstraction):
        names = []
        body = t
        while isinstance(body, Abstraction):
            names.append(body.var)
            body = body.body
        return '\\' + ' '.join(names) + '. ' + term_to_text(body)
    fun = term_to_text(t.fun)
    if isinstance(t.fun, Abstraction):
        fun = f"({fun})"
    arg = term_to_text(t.arg)
    if isinstance(t.arg, (Application, Abstraction)):
        arg = f"({arg})"
    return f"{fun} {arg}"


# ----------------------------------------------------------------------
# Interpretación

class _Interpreter:
    def __init__(self, structure: ImplicativeStructure):
        self.structure = structure
        self.lattice = structure.lattice
        self.memo: Dict[Tuple[Term, Tuple[Tuple[str, int], ...]], int] = {}

    def parameter_index(self, p: Parameter) -> int:
        if isinstance(p.value, Element):
            return self.lattice.index_of(p.value)
        if not self.lattice.has_name(p.value):
            raise TermError(f"Parámetro desconocido '#{p.value}'")
        return self.lattice.element(p.value).index

    def eval(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Variable):
            if t.name not in env:
                raise UnboundVariable(f"Variable libre sin valor: '{t.name}'")
            return env[t.name]
        if isinstance(t, Parameter):
            return self.parameter_index(t)
        if isinstance(t, Cc):
            return self.structure.combinator_i('cc')

        key = (t, tuple(sorted((v, env[v]) for v in free_variables(t) if v in env)))
        if key in self.memo:
            return self.memo[key]
        if isinstance(t, Application):
            value = self.structure.app_i(self.eval(t.fun, env), self.eval(t.arg, env))
        else:
            values = []
            for a in range(self.lattice.size):
                inner = dict(env)
                inner[t.var] = a
                values.append(self.eval(t.body, inner))
            value = self.structure.abs_i(values)
        self.memo[key] = value
        return value


def interpret(t: Term, structure: ImplicativeStructure,
              env: Optional[Mapping[str, Element]] = None) -> Element:
    """
    Valor (t)^A de un término.

    Args:
        t: Término con parámetros en A
        structure: Estructura implicativa
        env: Valores de las variables libres

    Returns:
        Elemento de la estructura
    """
    lattice = structure.lattice
    index_env = {name: lattice.index_of(e) for name, e in (env or {}).items()}
    missing = sorted(free_variables(t) - set(index_env))
    if missing:
        raise UnboundVariable(f"Variables libres sin valor: {', '.join(missing)}")
    # los valores del entorno que no aparecen libres se descartan
    index_env = {k: v for k, v in index_env.items() if k in free_variables(t)}
    return lattice.at(_Interpreter(structure).eval(t, index_env))


# ----------------------------------------------------------------------
# Macros (trackers de las construcciones categóricas)

PI1 = r"\z. z (\x y. x)"
PI2 = r"\z. z (\x y. y)"

# nombre -> (plantilla, huecos); los huecos son variables libres en mayúscula
MACROS: Dict[str, Tuple[str, Tuple[str, ...]]] = {
    'identity': (r"\x. x", ()),
    'K': (r"\x y. x", ()),
    'KI': (r"\x y. y", ()),
    'S': (r"\x y z. x z (y z)", ()),
    'pi1': (PI1, ()),
    'pi2': (PI2, ()),
    'pair': (r"\s. s A B", ('A', 'B')),
    'compose': (r"\x. G (F x)", ('F', 'G')),
    'pair_tracker': (r"\x z. z (F x) (G x)", ('F', 'G')),
    'inl': (r"\x0 z. z (\x y. x) x0", ()),
    'inr': (r"\y0 z. z (\x y. y) y0", ()),
    'case_tracker': (r"\z. z (\u v. u (F v) (G v))", ('F', 'G')),
    'quotient': (r"\x z. z x", ()),
    'coequalizer_mediator': (r"\z. z H", ('H',)),
    'nno_zero': (r"\z x f. x", ()),
    'nno_succ': (r"\n x f. f (n x f)", ()),
    'rec_tracker': (r"\m. m Q F", ('Q', 'F')),
    'pi_unit': (r"\s t. t (P s) (\x z. z x s)", ('P',)),
    'pi_transpose': (rf"\v. ({PI2}) (W (v ({PI2}))) (({PI1}) v)", ('W',)),
    'pi_map': (rf"\w s. s (({PI1}) w) (\x. U ((({PI2}) w) x))", ('U',)),
}


def macro(name: str, *fills: Union[Term, Element]) -> Term:
    """
    Instancia una macro de la biblioteca.

    Los huecos se llenan en el orden declarado; un Element se convierte en
    Parameter.
    """
    if name not in MACROS:
        raise UnknownMacro(f"Macro desconocida: '{name}'")
    template, holes = MACROS[name]
    if len(fills) < len(holes):
        raise UnfilledHole(f"La macro '{name}' tiene huecos sin llenar: {', '.join(holes[len(fills):])}")
    if len(fills) > len(holes):
        raise TermError(f"La macro '{name}' tiene {len(holes)} hueco(s), se recibieron {len(fills)}")
    term = parse(template)
    for hole, fill in zip(holes, fills):
        value = Parameter(fill) if isinstance(fill, Element) else fill
        term = substitute(term, hole, value)
    return term
