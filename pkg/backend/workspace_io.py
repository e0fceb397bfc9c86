"""
Formato de archivo IMPALG v1.

Documento de texto orientado a líneas con secciones entre corchetes:
[lattice], [implication], [separator], [assembly NOMBRE] y
[morphism NOMBRE : ORIGEN -> DESTINO]. `#` comenta hasta el fin de línea.
La carga ejecuta todas las validaciones de los módulos; el guardado es canónico.
"""

import re
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from lattice import FiniteLattice, LatticeError, build_lattice
from implicative import (
    ImplicativeAlgebra, ImplicativeStructure, StructureError, from_heyting, validate_structure,
)
from separator import Separator, SeparatorViolation, generate, validate_separator
from assemblies import Assembly, AssemblyError, Morphism, check_morphism, make_assembly

logger = logging.getLogger(__name__)

FORMAT_NAME = 'IMPALG v1'


class WorkspaceParseError(ValueError):
    """Error de sintaxis con línea y columna (ambas desde 1)."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"línea {line}, columna {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(ValueError):
    """El documento es sintácticamente correcto pero viola un invariante."""


@dataclass
class MorphismDecl:
    name: str
    source: str
    target: str
    morphism: Morphism


@dataclass
class WorkspaceDocument:
    lattice: FiniteLattice
    structure: ImplicativeStructure
    algebra: ImplicativeAlgebra
    heyting: bool = False
    separator_mode: str = 'generators'
    separator_names: Tuple[str, ...] = ()
    assemblies: Dict[str, Assembly] = field(default_factory=dict)
    morphisms: Dict[str, MorphismDecl] = field(default_factory=dict)

    @property
    def separator(self) -> Separator:
        return self.algebra.separator

    def assembly(self, name: str) -> Assembly:
        if name not in self.assemblies:
            raise ValidationError(f"Asamblea no declarada: '{name}'")
        return self.assemblies[name]

    def morphism(self, name: str) -> Morphism:
        if name not in self.morphisms:
            raise ValidationError(f"Morfismo no declarado: '{name}'")
        return self.morphisms[name].morphism

    def add_assembly(self, name: str, X: Assembly) -> Assembly:
        """Registra una asamblea bajo `name`, revalidando su predicado."""
        if name in self.assemblies:
            raise ValidationError(f"Asamblea duplicada: '{name}'")
        try:
            renamed = make_assembly(self.algebra, X.points, X.exists, name)
        except AssemblyError as e:
            raise ValidationError(str(e)) from e
        self.assemblies[name] = renamed
        return renamed

    def add_morphism(self, name: str, source: str, target: str, images: Sequence[int]) -> Morphism:
        """Registra un morfismo entre asambleas del documento verificando su seguimiento."""
        if name in self.morphisms:
            raise ValidationError(f"Morfismo duplicado: '{name}'")
        try:
            f = check_morphism(self.assembly(source), self.assembly(target), list(images))
        except AssemblyError as e:
            raise ValidationError(str(e)) from e
        self.morphisms[name] = MorphismDecl(name, source, target, f)
        return f


# ----------------------------------------------------------------------
# Lectura

_HEADER = re.compile(r'^\[\s*(?P<kind>lattice|implication|separator|assembly|morphism)\b(?P<rest>[^\]]*)\]$')
_MORPHISM_HEADER = re.compile(r'^\s*(?P<name>\S+)\s*:\s*(?P<source>\S+)\s*->\s*(?P<target>\S+)\s*$')


@dataclass
class _Line:
    number: int
    text: str
    indent: int


@dataclass
class _Section:
    kind: str
    argument: str
    line: int
    entries: List[Tuple[str, str, _Line, int]] = field(default_factory=list)


def _strip_comment(raw: str) -> str:
    pos = raw.find('#')
    return raw if pos < 0 else raw[:pos]


def _sections(text: str) -> List[_Section]:
    sections: List[_Section] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).rstrip()
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        line = _Line(number, body, indent)
        if stripped.startswith('['):
            match = _HEADER.match(stripped)
            if not match:
                raise WorkspaceParseError(f"Encabezado de sección inválido: {stripped}", number, indent + 1)
            sections.append(_Section(match.group('kind'), match.group('rest').strip(), number))
            continue
        if not sections:
            raise WorkspaceParseError("Contenido fuera de una sección", number, indent + 1)
        if '=' not in stripped:
            raise WorkspaceParseError("Se esperaba 'clave = valor'", number, indent + 1)
        key, value = stripped.split('=', 1)
        after = body.index('=') + 1
        value_column = after + (len(body[after:]) - len(body[after:].lstrip())) + 1
        sections[-1].entries.append((key.strip(), value.strip(), line, value_column))
    return sections


def _tokens(value: str, line: _Line, column: int) -> List[Tuple[str, int]]:
    """Tokens separados por espacios con su columna (desde 1)."""
    return [(m.group(0), column + m.start()) for m in re.finditer(r'\S+', value)]


def _split_resolving(token: str, sep: str, left_ok: Callable[[str], bool],
                     right_ok: Callable[[str], bool], line: int, column: int,
                     last_only: bool = False) -> Tuple[str, str]:
    """Divide `token` en la única posición de `sep` donde ambos lados resuelven."""
    positions = [m.start() for m in re.finditer(re.escape(sep), token)]
    if last_only:
        positions = positions[-1:]
    splits = [(token[:p], token[p + len(sep):]) for p in positions
              if left_ok(token[:p]) and right_ok(token[p + len(sep):])]
    if len(splits) != 1:
        reason = 'no resuelve' if not splits else 'es ambigua'
        raise WorkspaceParseError(f"La entrada '{token}' {reason}", line, column)
    return splits[0]


def _single(section: _Section, key: str, required: bool = True) -> Optional[Tuple[str, _Line, int]]:
    found = [(v, line, col) for k, v, line, col in section.entries if k == key]
    if len(found) > 1:
        raise WorkspaceParseError(f"Clave repetida '{key}' en [{section.kind}]", found[1][1].number)
    if not found:
        if required:
            raise WorkspaceParseError(f"Falta la clave '{key}' en [{section.kind}]", section.line)
        return None
    return found[0]


def _check_keys(section: _Section, allowed: Sequence[str], prefixes: Sequence[str] = ()):
    for key, _, line, _ in section.entries:
        if key in allowed or any(key.startswith(p) for p in prefixes):
            continue
        raise WorkspaceParseError(f"Clave desconocida '{key}' en [{section.kind}]", line.number, line.indent + 1)


def _parse_lattice(section: _Section) -> FiniteLattice:
    _check_keys(section, ('elements', 'cover'))
    value, line, col = _single(section, 'elements')
    names = [t for t, _ in _tokens(value, line, col)]
    if not names:
        raise WorkspaceParseError("El retículo no declara elementos", line.number, col)
    known = set(names)
    covers = []
    cover = _single(section, 'cover', required=False)
    if cover is not None:
        cvalue, cline, ccol = cover
        for token, column in _tokens(cvalue, cline, ccol):
            covers.append(_split_resolving(token, '<', known.__contains__, known.__contains__,
                                           cline.number, column))
    try:
        return build_lattice(names, covers)
    except LatticeError as e:
        raise ValidationError(f"Retículo inválido: {e}") from e


def _parse_implication(section: Optional[_Section], lattice: FiniteLattice) -> Tuple[ImplicativeStructure, bool]:
    if section is None:
        raise ValidationError("Falta la sección [implication]")
    _check_keys(section, ('heyting',), prefixes=('row ',))
    heyting = _single(section, 'heyting', required=False)
    rows = [(k[4:].strip(), v, line, col) for k, v, line, col in section.entries if k.startswith('row ')]
    if heyting is not None:
        value, line, col = heyting
        if value not in ('true', 'false'):
            raise WorkspaceParseError(f"heyting debe ser true o false, se recibió '{value}'", line.number, col)
        if value == 'true':
            if rows:
                raise WorkspaceParseError("heyting = true excluye filas explícitas", rows[0][2].number)
            try:
                return from_heyting(lattice), True
            except LatticeError as e:
                raise ValidationError(f"El retículo no es de Heyting: {e}") from e

    n = lattice.size
    table = np.full((n, n), -1, dtype=np.int64)
    for name, value, line, col in rows:
        if not lattice.has_name(name):
            raise WorkspaceParseError(f"Fila de un elemento no declarado: '{name}'", line.number, line.indent + 1)
        a = lattice.index_of(lattice.element(name))
        if table[a, 0] != -1:
            raise WorkspaceParseError(f"Fila repetida para '{name}'", line.number, line.indent + 1)
        tokens = _tokens(value, line, col)
        if len(tokens) != n:
            raise WorkspaceParseError(f"La fila '{name}' debe tener {n} valores, tiene {len(tokens)}",
                                      line.number, col)
        for b, (token, column) in enumerate(tokens):
            if not lattice.has_name(token):
                raise WorkspaceParseError(f"Elemento desconocido '{token}'", line.number, column)
            table[a, b] = lattice.index_of(lattice.element(token))
    missing = [lattice.names[a] for a in range(n) if table[a, 0] == -1]
    if missing:
        raise ValidationError(f"Tabla de implicación incompleta: faltan las filas {missing}")
    try:
        return validate_structure(lattice, table), False
    except StructureError as e:
        raise ValidationError(f"Estructura implicativa inválida: {e}") from e


def _parse_separator(section: Optional[_Section], structure: ImplicativeStructure) -> Tuple[Separator, str, Tuple[str, ...]]:
    lattice = structure.lattice
    if section is None:
        return generate(structure), 'generators', ()
    _check_keys(section, ('generators', 'members'))
    gens = _single(section, 'generators', required=False)
    members = _single(section, 'members', required=False)
    if gens is not None and members is not None:
        raise WorkspaceParseError("Use 'generators' o 'members', no ambos", members[1].number)
    mode, entry = ('members', members) if members is not None else ('generators', gens)
    names: List[str] = []
    if entry is not None:
        value, line, col = entry
        for token, column in _tokens(value, line, col):
            if not lattice.has_name(token):
                raise WorkspaceParseError(f"Elemento desconocido '{token}'", line.number, column)
            names.append(token)
    elements = [lattice.element(n) for n in names]
    if mode == 'members':
        try:
            return validate_separator(structure, elements), mode, tuple(names)
        except SeparatorViolation as e:
            raise ValidationError(f"Separador inválido: {e}") from e
    return generate(structure, elements), mode, tuple(names)


def _parse_assembly(section: _Section, alg: ImplicativeAlgebra) -> Assembly:
    name = section.argument
    if not name or len(name.split()) != 1:
        raise WorkspaceParseError("[assembly NOMBRE] requiere un nombre sin espacios", section.line)
    _check_keys(section, ('points', 'exists'))
    value, line, col = _single(section, 'points')
    points = [t for t, _ in _tokens(value, line, col)]
    point_set = set(points)
    lattice = alg.lattice
    exists: Dict[str, object] = {}
    evalue, eline, ecol = _single(section, 'exists')
    for token, column in _tokens(evalue, eline, ecol):
        p, e = _split_resolving(token, ':', point_set.__contains__, lattice.has_name,
                                eline.number, column, last_only=True)
        if p in exists:
            raise WorkspaceParseError(f"Punto repetido en exists: '{p}'", eline.number, column)
        exists[p] = lattice.element(e)
    try:
        return make_assembly(alg, points, exists, name)
    except AssemblyError as e:
        raise ValidationError(f"Asamblea {name} inválida: {e}") from e


def _parse_morphism(section: _Section, assemblies: Dict[str, Assembly]) -> MorphismDecl:
    match = _MORPHISM_HEADER.match(section.argument)
    if not match:
        raise WorkspaceParseError("Se esperaba [morphism NOMBRE : ORIGEN -> DESTINO]", section.line)
    name, source, target = match.group('name'), match.group('source'), match.group('target')
    for ref in (source, target):
        if ref not in assemblies:
            raise ValidationError(f"El morfismo {name} referencia una asamblea no declarada: '{ref}'")
    X, Y = assemblies[source], assemblies[target]
    _check_keys(section, ('map',))
    value, line, col = _single(section, 'map')
    mapping: Dict[str, str] = {}
    for token, column in _tokens(value, line, col):
        p, q = _split_resolving(token, ':', X.has_point, Y.has_point, line.number, column)
        if p in mapping:
            raise WorkspaceParseError(f"Punto repetido en map: '{p}'", line.number, column)
        mapping[p] = q
    try:
        f = check_morphism(X, Y, mapping)
    except AssemblyError as e:
        raise ValidationError(f"Morfismo {name} inválido: {e}") from e
    return MorphismDecl(name, source, target, f)


def loads(text: str, name: str = 'A') -> WorkspaceDocument:
    """Interpreta y valida un documento IMPALG v1 desde texto."""
    sections = _sections(text)
    by_kind: Dict[str, List[_Section]] = {}
    for s in sections:
        by_kind.setdefault(s.kind, []).append(s)
    for kind in ('lattice', 'implication', 'separator'):
        if len(by_kind.get(kind, [])) > 1:
            raise WorkspaceParseError(f"Sección [{kind}] repetida", by_kind[kind][1].line)
    if 'lattice' not in by_kind:
        raise ValidationError("Falta la sección [lattice]")

    lattice = _parse_lattice(by_kind['lattice'][0])
    structure, heyting = _parse_implication(by_kind.get('implication', [None])[0], lattice)
    separator, mode, names = _parse_separator(by_kind.get('separator', [None])[0], structure)
    alg = ImplicativeAlgebra(structure, separator, name)
    doc = WorkspaceDocument(lattice, structure, alg, heyting, mode, names)

    for s in by_kind.get('assembly', []):
        X = _parse_assembly(s, alg)
        if X.name in doc.assemblies:
            raise WorkspaceParseError(f"Asamblea duplicada: '{X.name}'", s.line)
        doc.assemblies[X.name] = X
    for s in by_kind.get('morphism', []):
        decl = _parse_morphism(s, doc.assemblies)
        if decl.name in doc.morphisms:
            raise WorkspaceParseError(f"Morfismo duplicado: '{decl.name}'", s.line)
        doc.morphisms[decl.name] = decl

    logger.info(f"Documento cargado: {lattice.size} elementos, |S| = {len(separator)}, "
                f"{len(doc.assemblies)} asambleas, {len(doc.morphisms)} morfismos")
    return doc


def load(path: str) -> WorkspaceDocument:
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    logger.info(f"Leyendo {FORMAT_NAME}: {path}")
    return loads(text)


# ----------------------------------------------------------------------
# Escritura canónica

def dumps(doc: WorkspaceDocument) -> str:
    lattice = doc.lattice
    names = lattice.names
    lines = ['[lattice]', f"elements = {' '.join(names)}"]
    covers = ' '.join(f"{names[a]}<{names[b]}" for a, b in lattice.covers())
    lines.append(f"cover = {covers}".rstrip())

    lines += ['', '[implication]']
    if doc.heyting:
        lines.append('heyting = true')
    else:
        for a in range(lattice.size):
            row = ' '.join(names[int(v)] for v in doc.structure.imp_table[a])
            lines.append(f"row {names[a]} = {row}")

    lines += ['', '[separator]']
    if doc.separator_mode == 'members':
        chosen = [e.name for e in doc.separator.members]
    else:
        chosen = list(doc.separator_names)
    lines.append(f"{doc.separator_mode} = {' '.join(chosen)}".rstrip())

    for key, X in doc.assemblies.items():
        lines += ['', f"[assembly {key}]", f"points = {' '.join(X.points)}".rstrip()]
        entries = ' '.join(f"{p}:{e.name}" for p, e in zip(X.points, X.exists))
        lines.append(f"exists = {entries}".rstrip())
    for decl in doc.morphisms.values():
        lines += ['', f"[morphism {decl.name} : {decl.source} -> {decl.target}]"]
        entries = ' '.join(f"{p}:{q}" for p, q in decl.morphism.mapping.items())
        lines.append(f"map = {entries}".rstrip())
    return '\n'.join(lines) + '\n'


def save(doc: WorkspaceDocument, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(doc))
    logger.info(f"Documento guardado en {path}")
