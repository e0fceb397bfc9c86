import sys
import logging
import argparse
from typing import List, Optional, Sequence, Tuple

from lattice import LatticeError
from implicative import InternalInvariantError, StructureError
from separator import SeparatorViolation
from lambda_calculus import ParseError, TermError, interpret, parse
from assemblies import (
    AssemblyError, CombinatorialLimitError, Construction, Morphism, coequalizer, coproduct,
    equalizer, product,
)
from lccc import dependent_product, exponential, sliced
from nno import nat_exists, nat_oracle
from forcing import forcing_report, hits_table, parse_predicate, search_structures
from laws import run_law_suite
from workspace_io import ValidationError, WorkspaceParseError, load, save
from config import ConfigError, Settings, get_settings, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CONSTRUCTIONS = ('product', 'coproduct', 'equalizer', 'coequalizer', 'exponential', 'pi')


class UsageError(ValueError):
    """Argumentos de línea de comandos inválidos."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def configure_logging(settings: Settings):
    """Logging a stderr (stdout queda para los reportes) y, si se configura, a archivo."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=getattr(logging, str(settings.log_level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='impalg', description='Toolkit de álgebras implicativas y asambleas')
    parser.add_argument('--config', help='Archivo YAML de configuración')
    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    p = commands.add_parser('validate', help='Carga y valida un documento IMPALG')
    p.add_argument('file')

    p = commands.add_parser('eval', help='Interpreta un término λ en el álgebra')
    p.add_argument('file')
    p.add_argument('term')

    p = commands.add_parser('classify', help='Banderas del separador y reporte de forcing')
    p.add_argument('file')

    p = commands.add_parser('construct', help='Construye un objeto categórico')
    p.add_argument('kind', choices=CONSTRUCTIONS)
    p.add_argument('file')
    p.add_argument('args', nargs=2, metavar='NAME',
                   help='Dos asambleas (product, coproduct, exponential) o dos morfismos')
    p.add_argument('--name', help='Nombre de la asamblea construida en el documento')
    p.add_argument('--out', help='Escribe el documento ampliado con la construcción')

    p = commands.add_parser('check', help='Ejecuta la suite de propiedades')
    p.add_argument('what', choices=('laws',))
    p.add_argument('file')
    p.add_argument('--max-carrier', type=int, default=None)

    p = commands.add_parser('nno', help='Predicado de existencia de ℕ')
    p.add_argument('file')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--oracle', action='store_true')

    p = commands.add_parser('search', help='Busca estructuras implicativas sobre el retículo')
    p.add_argument('file')
    p.add_argument('--predicate', required=True)
    p.add_argument('--limit', type=int, default=10)
    return parser


def _yes(value: bool) -> str:
    return 'yes' if value else 'no'


# ----------------------------------------------------------------------
# Comandos

def cmd_validate(args, settings: Settings) -> Tuple[int, List[str]]:
    doc = load(args.file)
    return EXIT_OK, [
        f"lattice = {' '.join(doc.lattice.names)}",
        f"implication = {'heyting' if doc.heyting else 'explicit'}",
        f"separator = {' '.join(e.name for e in doc.separator.members)}",
        f"assemblies = {' '.join(doc.assemblies)}",
        f"morphisms = {' '.join(doc.morphisms)}",
        'status = ok',
    ]


def cmd_eval(args, settings: Settings) -> Tuple[int, List[str]]:
    doc = load(args.file)
    term = parse(args.term, doc.lattice)
    return EXIT_OK, [interpret(term, doc.structure).name]


def cmd_classify(args, settings: Settings) -> Tuple[int, List[str]]:
    doc = load(args.file)
    report = forcing_report(doc.algebra, settings=settings)
    lines = []
    for key, value in report.as_dict().items():
        lines.append(f"{key} = {_yes(value) if isinstance(value, bool) else value}")
    return EXIT_OK, lines


def cmd_construct(args, settings: Settings) -> Tuple[int, List[str]]:
    doc = load(args.file)
    first, second = args.args
    kind = args.kind
    legs: List[Tuple[str, str, str, Morphism]] = []
    extra: List[Tuple[str, object]] = []

    if kind in ('product', 'coproduct', 'exponential'):
        A, B = doc.assembly(first), doc.assembly(second)
        if kind == 'product':
            key = args.name or f"{first}_x_{second}"
            built: Construction = product(A, B)
            obj = built.obj
            legs = [(f"{key}_pi1", key, first, built.legs[0]), (f"{key}_pi2", key, second, built.legs[1])]
        elif kind == 'coproduct':
            key = args.name or f"{first}_plus_{second}"
            built = coproduct(A, B)
            obj = built.obj
            legs = [(f"{key}_inl", first, key, built.legs[0]), (f"{key}_inr", second, key, built.legs[1])]
        else:
            key = args.name or f"{second}_pow_{first}"
            exp = exponential(A, B)
            obj = exp.obj
            ev_source = f"{key}_x_{first}"
            extra = [(ev_source, exp.evaluation.source)]
            legs = [(f"{key}_ev", ev_source, second, exp.evaluation)]
    else:
        f, g = doc.morphism(first), doc.morphism(second)
        decl_f, decl_g = doc.morphisms[first], doc.morphisms[second]
        if kind == 'equalizer':
            key = args.name or f"Eq_{first}_{second}"
            built = equalizer(f, g)
            obj = built.obj
            legs = [(f"{key}_incl", key, decl_f.source, built.legs[0])]
        elif kind == 'coequalizer':
            key = args.name or f"Coeq_{first}_{second}"
            built = coequalizer(f, g)
            obj = built.obj
            legs = [(f"{key}_quot", decl_f.target, key, built.legs[0])]
        else:
            key = args.name or f"Pi_{first}_{second}"
            if decl_g.target != decl_f.source:
                raise ValidationError(f"{second} debe llegar al dominio de {first}")
            pi = dependent_product(f, sliced(g), settings.dependent_product_cap)
            obj = pi.obj
            legs = [(f"{key}_bp", key, decl_f.target, pi.sliced.projection)]

    doc.add_assembly(key, obj)
    for name, X in extra:
        doc.add_assembly(name, X)
    for name, source, target, m in legs:
        doc.add_morphism(name, source, target, m.images)

    lines = [f"construction = {kind}", f"object = {key}"]
    for p, e in zip(obj.points, obj.exists):
        lines.append(f"E({p}) = {e.name}")
    for name, _, _, m in legs:
        body = ' '.join(f"{p}:{q}" for p, q in doc.morphisms[name].morphism.mapping.items())
        lines.append(f"{name} = {body} τ={doc.morphisms[name].morphism.tracking_value.name}")

    if args.out:
        save(doc, args.out)
        load(args.out)
        lines.append(f"out = {args.out}")
    logger.info(f"Construcción {kind} registrada como {key}")
    return EXIT_OK, lines


def cmd_check(args, settings: Settings) -> Tuple[int, List[str]]:
    doc = load(args.file)
    report = run_law_suite(doc.algebra, settings, max_carrier=args.max_carrier)
    lines = report.summary().to_string(index=False).splitlines()
    lines += report.failure_lines()
    lines.append(f"result = {'ok' if report.passed else 'FALLA'}")
    return (EXIT_OK if report.passed else EXIT_FAILURE), lines


def cmd_nno(args, settings: Settings) -> Tuple[int, List[str]]:
    if args.n < 0:
        raise UsageError("--n debe ser >= 0")
    doc = load(args.file)
    alg = doc.algebra
    size = alg.lattice.size
    lines = []
    agree = True
    for n in range(args.n + 1):
        value = nat_exists(alg, n)
        lines.append(f"E_N({n}) = {value.name}")
        if args.oracle:
            oracle = nat_oracle(alg, n, size * size + n, size)
            lines.append(f"oracle({n}) = {oracle.name}")
            agree = agree and oracle == value
    if args.oracle:
        lines.append(f"agree = {_yes(agree)}")
    return (EXIT_OK if agree else EXIT_FAILURE), lines


def cmd_search(args, settings: Settings) -> Tuple[int, List[str]]:
    if args.limit < 0:
        raise UsageError("--limit debe ser >= 0")
    try:
        parse_predicate(args.predicate)
    except ValueError as e:
        raise UsageError(str(e)) from e
    doc = load(args.file)
    hits = search_structures(doc.lattice, args.predicate, args.limit, settings)
    lines = [f"predicate = {args.predicate}", f"hits = {len(hits)}"]
    if hits:
        lines += hits_table(hits).to_string(index=False).splitlines()
    return EXIT_OK, lines


COMMANDS = {
    'validate': cmd_validate,
    'eval': cmd_eval,
    'classify': cmd_classify,
    'construct': cmd_construct,
    'check': cmd_check,
    'nno': cmd_nno,
    'search': cmd_search,
}


def run_command(argv: Sequence[str], settings: Optional[Settings] = None) -> Tuple[int, str]:
    """
    Ejecuta un comando de la CLI.

    Args:
        argv: Argumentos sin el nombre del programa
        settings: Configuración explícita (si es None se usa --config o la global)

    Returns:
        (código de salida, reporte de texto)
    """
    try:
        args = build_parser().parse_args(list(argv))
        if settings is None:
            settings = load_settings(args.config) if args.config else get_settings()
        logger.info(f"Ejecutando comando: {args.command}")
        code, lines = COMMANDS[args.command](args, settings)
        logger.info(f"Comando {args.command} finalizado con código {code}")
        return code, '\n'.join(lines) + '\n'
    except (UsageError, WorkspaceParseError, ParseError, TermError, ConfigError) as e:
        logger.warning(f"Error de uso o sintaxis: {e}")
        return EXIT_USAGE, f"error: {e}\n"
    except FileNotFoundError as e:
        logger.warning(f"Archivo no encontrado: {e.filename}")
        return EXIT_USAGE, f"error: archivo no encontrado: {e.filename}\n"
    except (ValidationError, LatticeError, StructureError, SeparatorViolation, AssemblyError,
            CombinatorialLimitError) as e:
        logger.warning(f"Validación fallida: {e}")
        return EXIT_FAILURE, f"error: {e}\n"
    except InternalInvariantError as e:
        logger.error(f"Invariante interno violado: {e}", exc_info=True)
        return EXIT_FAILURE, f"error interno: {e}\n"
    except Exception as e:
        logger.error(f"Error inesperado: {str(e)}", exc_info=True)
        return EXIT_FAILURE, f"error: {e}\n"


def logging_settings(argv: Sequence[str]) -> Settings:
    """Configuración para el logging: la de --config si se pasó, si no la global."""
    pre = _Parser(add_help=False)
    pre.add_argument('--config')
    try:
        known, _ = pre.parse_known_args(list(argv))
        return load_settings(known.config) if known.config else get_settings()
    except (UsageError, ConfigError):
        # run_command reporta el error con código 2
        return Settings()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    configure_logging(logging_settings(argv))
    code, output = run_command(argv)
    stream = sys.stderr if output.startswith('error') else sys.stdout
    stream.write(output)
    return code


if __name__ == '__main__':
    sys.exit(main())
