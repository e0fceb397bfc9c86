"""
Tests unitarios para el λ-cálculo con parámetros.

Incluye pruebas basadas en propiedades (hypothesis) para la corrección de
la β-reducción respecto de la interpretación y para la impresión de
términos.
"""

import unittest
import sys
import os

from hypothesis import given, settings, strategies as st

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from lambda_calculus import (
    Abstraction, Application, Cc, Parameter, ParseError, TermError, UnboundVariable,
    UnfilledHole, UnknownMacro, Variable, alpha_equal, beta_reducts, church, eta_expand,
    free_variables, interpret, macro, parse, substitute, term_to_text,
)
from reference_algebras import ReferenceAlgebraGenerator

GENERATOR = ReferenceAlgebraGenerator(random_seed=42)
STRUCTURES = {name: alg.structure for name, alg in GENERATOR.reference_algebras().items()
              if name in ('B2', 'H3', 'N3')}


def _close(term):
    for name in sorted(free_variables(term), reverse=True):
        term = Abstraction(name, term)
    return term


_leaves = st.sampled_from([Variable('x'), Variable('y'), Variable('z'),
                           Parameter('0'), Parameter('1'), Cc()])
_terms = st.recursive(
    _leaves,
    lambda inner: st.one_of(
        st.builds(Application, inner, inner),
        st.builds(Abstraction, st.sampled_from(['x', 'y', 'z']), inner),
    ),
    max_leaves=8,
)
closed_terms = _terms.map(_close)


class TestParser(unittest.TestCase):
    """Tests para el análisis sintáctico."""

    def test_multi_binder(self):
        t = parse(r"\x y. x")
        self.assertEqual(t, Abstraction('x', Abstraction('y', Variable('x'))))

    def test_application_is_left_associative(self):
        t = parse("f a b")
        self.assertEqual(t, Application(Application(Variable('f'), Variable('a')), Variable('b')))

    def test_trailing_abstraction_extends_right(self):
        t = parse(r"f \x. x y")
        self.assertEqual(t.fun, Variable('f'))
        self.assertIsInstance(t.arg, Abstraction)

    def test_cc_keyword(self):
        self.assertEqual(parse("cc"), Cc())
        with self.assertRaises(ParseError):
            parse(r"\cc. cc")

    def test_parameter_resolution(self):
        lattice = STRUCTURES['N3'].lattice
        t = parse("#u", lattice)
        self.assertEqual(t, Parameter(lattice.element('u')))
        self.assertEqual(parse("#u"), Parameter('u'))

    def test_unknown_parameter_reports_position(self):
        lattice = STRUCTURES['B2'].lattice
        with self.assertRaises(ParseError) as ctx:
            parse(r"\x. #w", lattice)
        self.assertEqual(ctx.exception.position, 4)

    def test_syntax_errors(self):
        for source in (r"\. x", "(x", "x )", "", "x $"):
            with self.assertRaises(ParseError, msg=source):
                parse(source)


class TestTerms(unittest.TestCase):
    """Tests para sustitución, α-equivalencia y reducción."""

    def test_substitution_avoids_capture(self):
        t = substitute(parse(r"\y. x"), 'x', Variable('y'))
        self.assertTrue(alpha_equal(t, parse(r"\w. y")))
        self.assertEqual(free_variables(t), frozenset({'y'}))

    def test_alpha_equal(self):
        self.assertTrue(alpha_equal(parse(r"\x y. x"), parse(r"\a b. a")))
        self.assertFalse(alpha_equal(parse(r"\x y. x"), parse(r"\a b. b")))

    def test_beta_reducts(self):
        reducts = beta_reducts(parse(r"(\x. x) ((\y. y) z)"))
        self.assertEqual(len(reducts), 2)
        self.assertTrue(alpha_equal(reducts[0], parse(r"(\y. y) z")))
        self.assertTrue(alpha_equal(reducts[1], parse(r"(\x. x) z")))

    def test_eta_expand_uses_fresh_variable(self):
        t = eta_expand(Variable('x'))
        self.assertEqual(free_variables(t), frozenset({'x'}))
        self.assertNotEqual(t.var, 'x')

    def test_church(self):
        self.assertEqual(term_to_text(church(2)), r"\x f. f (f x)")
        with self.assertRaises(TermError):
            church(-1)


class TestInterpretation(unittest.TestCase):
    """Tests para la interpretación en estructuras implicativas."""

    def test_k_value(self):
        self.assertEqual(interpret(parse(r"\x y. x"), STRUCTURES['B2']).name, '1')
        self.assertEqual(interpret(parse(r"\x y. x"), STRUCTURES['N3']).name, 'u')

    def test_cc_value(self):
        self.assertEqual(interpret(Cc(), STRUCTURES['H3']).name, 'u')

    def test_environment(self):
        s = STRUCTURES['B2']
        env = {'x': s.lattice.element('0'), 'unused': s.lattice.element('1')}
        self.assertEqual(interpret(parse("x"), s, env).name, '0')

    def test_unbound_variable(self):
        with self.assertRaises(UnboundVariable):
            interpret(parse("x y"), STRUCTURES['B2'])

    def test_unknown_string_parameter(self):
        with self.assertRaises(TermError):
            interpret(parse("#w"), STRUCTURES['B2'])

    def test_macros_match_combinators(self):
        for name, s in STRUCTURES.items():
            for key in ('K', 'KI', 'S'):
                self.assertEqual(interpret(macro(key), s), s.combinator(key), f"{name} {key}")
            self.assertEqual(interpret(macro('identity'), s), s.combinator('I'), name)

    def test_macro_errors(self):
        with self.assertRaises(UnknownMacro):
            macro('Y')
        with self.assertRaises(UnfilledHole):
            macro('pair', Variable('a'))
        with self.assertRaises(TermError):
            macro('K', Variable('a'))

    def test_macro_fills_elements(self):
        s = STRUCTURES['N3']
        u = s.lattice.element('u')
        t = macro('compose', u, u)
        self.assertEqual(free_variables(t), frozenset())
        self.assertEqual(t.body.fun, Parameter(u))


class TestProperties(unittest.TestCase):
    """Propiedades sobre términos cerrados aleatorios."""

    @settings(max_examples=60, deadline=None)
    @given(closed_terms)
    def test_beta_reduction_does_not_decrease_value(self, term):
        for s in STRUCTURES.values():
            before = interpret(term, s)
            for reduct in beta_reducts(term):
                self.assertTrue(s.lattice.leq(before, interpret(reduct, s)))

    @settings(max_examples=60, deadline=None)
    @given(closed_terms)
    def test_printing_reparses(self, term):
        self.assertTrue(alpha_equal(parse(term_to_text(term)), term))

    @settings(max_examples=40, deadline=None)
    @given(closed_terms)
    def test_eta_expansion_bounds_value_from_above(self, term):
        for s in STRUCTURES.values():
            self.assertTrue(s.lattice.leq(interpret(term, s), interpret(eta_expand(term), s)))

    def test_planted_redexes_reduce_soundly(self):
        generator = ReferenceAlgebraGenerator(random_seed=7)
        for name, s in STRUCTURES.items():
            lat = s.lattice
            for term in generator.random_redexes(40, 5, parameters=lat.elements, allow_cc=True):
                self.assertEqual(free_variables(term), frozenset())
                reducts = beta_reducts(term)
                self.assertTrue(reducts, f"{name}: {term_to_text(term)}")
                before = interpret(term, s)
                for reduct in reducts:
                    self.assertTrue(lat.leq(before, interpret(reduct, s)), f"{name}: {term_to_text(term)}")


if __name__ == '__main__':
    unittest.main()
