"""
Tests unitarios para asambleas y morfismos seguidos.

Cubre la condición de seguimiento, la composición, el par Γ ⊣ Δ, las
construcciones finitas con sus propiedades universales y el clasificador
de subobjetos.
"""

import unittest
import itertools
import sys
import os

# Añadir el directorio actual al path para importar módulos
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from assemblies import (
    AssemblyError, CarrierMismatch, CombinatorialLimitError, CompositionMismatch, NotStrongMono,
    check_morphism, classify_mono, coequalizer, compose, coproduct, delta, equalizer, fiber,
    gamma, hom_set, identity, image_factorize, initial, is_epi, is_epi_categorical,
    is_extremal_mono, is_iso, is_mono, is_mono_categorical, make_assembly, product, pullback,
    small_assemblies, subobject_classifier, terminal, unit_to_delta, verify_universal_property,
)
from reference_algebras import ReferenceAlgebraGenerator


class AssemblyTestCase(unittest.TestCase):
    """Base con X{p:1,q:1}, Y{r:1} sobre B2 y X{a:u,b:1}, Y{c:u} sobre N3."""

    def setUp(self):
        generator = ReferenceAlgebraGenerator(random_seed=42)
        self.b2 = generator.b2()
        self.n3 = generator.n3()
        top = self.b2.lattice.top
        self.X = make_assembly(self.b2, ['p', 'q'], {'p': top, 'q': top}, 'X')
        self.Y = make_assembly(self.b2, ['r'], [top], 'Y')
        self.swap = check_morphism(self.X, self.X, {'p': 'q', 'q': 'p'})
        self.f = check_morphism(self.X, self.Y, ['r', 'r'])

        lat = self.n3.lattice
        u, one = lat.element('u'), lat.element('1')
        self.NX = make_assembly(self.n3, ['a', 'b'], [u, one], 'X')
        self.NY = make_assembly(self.n3, ['c'], [u], 'Y')
        self.nswap = check_morphism(self.NX, self.NX, {'a': 'b', 'b': 'a'})


class TestMorphisms(AssemblyTestCase):
    """Tests para la condición de seguimiento y la composición."""

    def test_existence_outside_separator(self):
        with self.assertRaises(AssemblyError):
            make_assembly(self.b2, ['p'], [self.b2.lattice.bottom], 'Z')

    def test_incomplete_existence_predicate(self):
        with self.assertRaises(AssemblyError):
            make_assembly(self.b2, ['p', 'q'], {'p': self.b2.lattice.top}, 'Z')

    def test_tracking_value(self):
        self.assertEqual(self.nswap.tracking_value.name, 'u')
        self.assertEqual(self.swap.tracking_value.name, '1')
        self.assertEqual(self.swap.mapping, {'p': 'q', 'q': 'p'})
        self.assertEqual(self.f.apply('q'), 'r')

    def test_carrier_mismatch(self):
        with self.assertRaises(CarrierMismatch):
            check_morphism(self.X, self.Y, {'p': 'r'})
        with self.assertRaises(CarrierMismatch):
            check_morphism(self.X, self.Y, {'p': 'r', 'q': 'z'})
        with self.assertRaises(CarrierMismatch):
            check_morphism(self.X, self.Y, [0, 3])

    def test_assemblies_from_different_algebras(self):
        other = ReferenceAlgebraGenerator(random_seed=42).b2()
        Z = make_assembly(other, ['z'], [other.lattice.top], 'Z')
        with self.assertRaises(CarrierMismatch):
            check_morphism(self.Y, Z, ['z'])

    def test_composition(self):
        twice = compose(self.nswap, self.nswap)
        self.assertEqual(twice.images, (0, 1))
        self.assertEqual(twice, identity(self.NX))
        self.assertIsNotNone(twice.certificate)
        self.assertTrue(self.n3.lattice.leq(twice.certificate, twice.tracking_value))
        with self.assertRaises(CompositionMismatch):
            compose(self.swap, self.f)

    def test_identity_is_certified(self):
        ident = identity(self.NX)
        self.assertEqual(ident.tracking_value.name, 'u')
        self.assertEqual(ident.certificate.name, 'u')


class TestGammaDelta(AssemblyTestCase):
    """Tests para Δ, Γ y los hom-sets."""

    def test_delta_and_gamma(self):
        D = delta(self.n3, ['s', 't'])
        self.assertEqual([e.name for e in D.exists], ['1', '1'])
        self.assertEqual(gamma(self.NX), ('a', 'b'))

    def test_unit(self):
        unit = unit_to_delta(self.NX)
        self.assertEqual(unit.images, (0, 1))
        self.assertTrue(is_iso(unit))
        self.assertTrue(is_iso(unit_to_delta(self.X)))

    def test_hom_set(self):
        self.assertEqual(len(hom_set(self.X, self.X)), 4)
        self.assertEqual(len(hom_set(self.NX, self.NY)), 1)
        with self.assertRaises(CombinatorialLimitError):
            hom_set(self.X, self.X, cap=3)

    def test_mono_and_epi(self):
        self.assertTrue(is_mono(self.swap) and is_epi(self.swap))
        self.assertTrue(is_iso(self.swap))
        self.assertFalse(is_mono(self.f))
        self.assertTrue(is_epi(self.f))
        family = small_assemblies(self.b2, 2)
        self.assertFalse(is_mono_categorical(self.f, family))
        self.assertTrue(is_epi_categorical(self.f, family))
        self.assertTrue(is_mono_categorical(self.swap, family))


class TestConstructions(AssemblyTestCase):
    """Tests para límites y colímites finitos."""

    def test_terminal_and_initial(self):
        one = terminal(self.n3)
        self.assertEqual(one.obj.points, ('*',))
        self.assertEqual(one.mediator(self.NX).images, (0, 0))
        zero = initial(self.n3)
        self.assertEqual(zero.obj.size, 0)
        self.assertEqual(zero.mediator(self.NX).images, ())

    def test_product(self):
        built = product(self.X, self.Y)
        self.assertEqual(built.obj.points, ('(p,r)', '(q,r)'))
        p1, p2 = built.legs
        self.assertEqual(p1.images, (0, 1))
        self.assertEqual(p2.images, (0, 0))
        pairing = built.mediator(identity(self.X), self.f)
        self.assertEqual(pairing.images, (0, 1))

    def test_product_existence_uses_encoded_conjunction(self):
        built = product(self.NY, self.NY)
        self.assertEqual(built.obj.exists[0], self.n3.structure.conj(self.NY.exists[0], self.NY.exists[0]))

    def test_coproduct(self):
        built = coproduct(self.NX, self.NY)
        self.assertEqual(built.obj.points, ('inl:a', 'inl:b', 'inr:c'))
        i1, i2 = built.legs
        self.assertEqual(i2.images, (2,))
        case = built.mediator(identity(self.NX), check_morphism(self.NY, self.NX, ['a']))
        self.assertEqual(case.images, (0, 1, 0))

    def test_equalizer(self):
        built = equalizer(self.swap, identity(self.X))
        self.assertEqual(built.obj.size, 0)
        same = equalizer(self.swap, self.swap)
        self.assertEqual(same.obj.points, ('p', 'q'))
        with self.assertRaises(CompositionMismatch):
            equalizer(self.swap, self.f)

    def test_coequalizer(self):
        built = coequalizer(self.swap, identity(self.X))
        self.assertEqual(built.obj.points, ('p',))
        self.assertEqual(built.legs[0].images, (0, 0))
        self.assertEqual(built.obj.exists[0].name, '1')
        mediated = built.mediator(self.f)
        self.assertEqual(mediated.images, (0,))
        with self.assertRaises(AssemblyError):
            built.mediator(identity(self.X))

    def test_pullback_and_fiber(self):
        square = pullback(self.f, self.f)
        self.assertEqual(square.obj.size, 4)
        fib = fiber(self.f, 'r')
        self.assertEqual(fib.obj.points, ('p', 'q'))
        self.assertEqual(fib.legs[0].images, (0, 1))

    def test_image_factorization(self):
        factor = image_factorize(self.f)
        self.assertEqual(factor.image.points, ('r',))
        self.assertEqual(factor.epi.images, (0, 0))
        self.assertTrue(is_extremal_mono(self.swap))


class TestUniversalProperties(AssemblyTestCase):
    """Tests para la verificación de propiedades universales."""

    def test_constructions_pass(self):
        family = small_assemblies(self.b2, 2)
        cases = [
            ('terminal', terminal(self.b2)),
            ('initial', initial(self.b2)),
            ('product', product(self.X, self.Y)),
            ('coproduct', coproduct(self.X, self.Y)),
            ('equalizer', equalizer(self.swap, identity(self.X))),
            ('coequalizer', coequalizer(self.swap, identity(self.X))),
            ('classifier', subobject_classifier(self.b2)),
        ]
        for kind, built in cases:
            report = verify_universal_property(kind, built, family)
            self.assertTrue(report.passed, f"{kind}: {report.failures}")
            self.assertGreater(report.checked, 0, kind)

    def test_n3_product(self):
        family = small_assemblies(self.n3, 1)
        report = verify_universal_property('product', product(self.NX, self.NY), family)
        self.assertTrue(report.passed, report.failures)

    def test_n3_every_construction(self):
        family = small_assemblies(self.n3, 2)
        self.assertEqual(len(family), 7)
        for kind, built in (('terminal', terminal(self.n3)), ('initial', initial(self.n3)),
                            ('classifier', subobject_classifier(self.n3))):
            report = verify_universal_property(kind, built, family)
            self.assertTrue(report.passed, f"{kind}: {report.failures}")

        pairs = 0
        for A, B in itertools.product(family, repeat=2):
            for kind, built in (('product', product(A, B)), ('coproduct', coproduct(A, B))):
                report = verify_universal_property(kind, built, family)
                self.assertTrue(report.passed, f"{kind} {A} {B}: {report.failures}")
            pairs += 1
        self.assertEqual(pairs, 49)

        parallel = 0
        for X, Y in itertools.product(family, repeat=2):
            maps = hom_set(X, Y)
            for f, g in itertools.product(maps, repeat=2):
                for kind, built in (('equalizer', equalizer(f, g)), ('coequalizer', coequalizer(f, g))):
                    report = verify_universal_property(kind, built, family)
                    self.assertTrue(report.passed, f"{kind} {f.images} {g.images}: {report.failures}")
                parallel += 1
        self.assertEqual(parallel, 307)

    def test_wrong_candidate_fails(self):
        family = small_assemblies(self.b2, 2)
        report = verify_universal_property('terminal', product(self.X, self.Y), family)
        self.assertFalse(report.passed)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            verify_universal_property('limit', terminal(self.b2), [])


class TestSubobjectClassifier(AssemblyTestCase):
    """Tests para Ω y los morfismos característicos."""

    def test_classifier_points(self):
        built = subobject_classifier(self.n3)
        self.assertEqual(built.obj.points, ('empty', 'full'))
        self.assertEqual(built.legs[0].images, (1,))

    def test_characteristic_map(self):
        point = check_morphism(self.Y, self.X, ['q'])
        chi = classify_mono(point)
        self.assertEqual(chi.images, (0, 1))
        self.assertEqual(classify_mono(identity(self.X)).images, (1, 1))

    def test_non_mono_is_rejected(self):
        with self.assertRaises(NotStrongMono):
            classify_mono(self.f)


if __name__ == '__main__':
    unittest.main()
