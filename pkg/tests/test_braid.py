import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest

from g0wb.braid import (
    BURAU_S1,
    BURAU_S2,
    BraidWord,
    EXTENDED_IDENTITY,
    ExtendedElement,
    braid_multiplier,
    burau,
    cyclic_group,
    dedekind_sum,
    degree,
    dihedral_group,
    emit_group_table,
    eta_multiplier_matrix,
    eta_multiplier_phase,
    extended_inverse,
    extended_mul,
    lift_braid,
    parse_group_table,
    quilt_orbit,
    quilt_orbits,
    quilt_step,
    sigma_class,
    symmetric_group_3,
)
from g0wb.errors import NotUnimodular, ParseError, RequiresPositiveC
from g0wb.exactnum import CyclotomicNumber
from g0wb.matrices import IDENTITY, IntMatrix

HALF_TWIST = BraidWord.parse("s1 s2 s1")


def random_word(rng, max_len=12):
    return BraidWord.from_letters(
        (rng.choice([1, 2]), rng.choice([-2, -1, 1, 2]))
        for _ in range(rng.randint(0, max_len)))


class TestWords:
    def test_parse_and_print(self):
        word = BraidWord.parse("s1 s2^-3 s1^2")
        assert word.letters == ((1, 1), (2, -3), (1, 2))
        assert str(word) == "s1 s2^-3 s1^2"

    def test_free_reduction(self):
        assert BraidWord.parse("s1 s1^-1").letters == ()
        assert BraidWord.parse("s1 s2 s2^-1 s1").letters == ((1, 2),)

    def test_bad_token(self):
        with pytest.raises(ParseError):
            BraidWord.parse("s3")

    def test_inverse(self):
        word = BraidWord.parse("s1 s2^2")
        assert (word * word.inverse()).letters == ()


class TestDegree:
    def test_examples(self):
        assert degree(BraidWord.parse("s1")) == 1
        assert degree(HALF_TWIST) == 3
        assert degree(BraidWord.parse("s1 s2^-1")) == 0

    def test_invariant_under_relation_and_reduction(self):
        rng = random.Random(11)
        for _ in range(200):
            w = random_word(rng)
            seam = HALF_TWIST * w * BraidWord.parse("s2 s1 s2").inverse()
            assert degree(seam) == degree(w)


class TestBurau:
    def test_generator_images(self):
        assert burau(BraidWord.parse("s1")) == BURAU_S1
        assert burau(BraidWord.parse("s2")) == BURAU_S2

    def test_empty_word(self):
        assert burau(BraidWord.identity()) == IDENTITY

    def test_half_twist(self):
        assert burau(HALF_TWIST) == IntMatrix(0, 1, -1, 0)

    def test_braid_relation(self):
        assert burau(BraidWord.parse("s1 s2 s1")) == burau(BraidWord.parse("s2 s1 s2"))

    def test_lands_in_sl2(self):
        rng = random.Random(5)
        for _ in range(100):
            assert burau(random_word(rng)).det() == 1


class TestMultiplier:
    def test_generator(self):
        assert braid_multiplier(BraidWord.parse("s1")) == CyclotomicNumber.root_of_unity(24)

    def test_degree_24_is_trivial(self):
        assert braid_multiplier(BraidWord.parse("s1^24")) == 1

    def test_full_twist_squared(self):
        assert braid_multiplier(HALF_TWIST ** 4) == -1

    def test_character_property(self):
        rng = random.Random(13)
        for _ in range(100):
            a, b = random_word(rng), random_word(rng)
            assert braid_multiplier(a * b) == braid_multiplier(a) * braid_multiplier(b)


class TestSigmaClass:
    def test_four_cases(self):
        assert sigma_class(IDENTITY) == 0
        assert sigma_class(IntMatrix(1, 0, -1, 1)) == 1
        assert sigma_class(IntMatrix(-1, 0, 0, -1)) == 2
        assert sigma_class(IntMatrix(0, -1, 1, 0)) == 3

    def test_requires_unimodular(self):
        with pytest.raises(NotUnimodular):
            sigma_class(IntMatrix(2, 0, 0, 1))


class TestExtendedGroup:
    def test_identity_law(self):
        a = ExtendedElement(IntMatrix(1, 0, -1, 1), 1)
        assert extended_mul(EXTENDED_IDENTITY, a) == a
        assert extended_mul(a, EXTENDED_IDENTITY) == a

    def test_quarter_turn_squares(self):
        s = ExtendedElement(IntMatrix(0, -1, 1, 0), 3)
        s2 = extended_mul(s, s)
        assert s2 == ExtendedElement(IntMatrix(-1, 0, 0, -1), 6)
        assert extended_mul(s2, s2) == ExtendedElement(IDENTITY, 12)

    def test_invariant_enforced(self):
        with pytest.raises(ValueError):
            ExtendedElement(IDENTITY, 1)

    def test_inverse(self):
        rng = random.Random(3)
        for _ in range(200):
            x = lift_braid(random_word(rng))
            assert extended_mul(x, extended_inverse(x)) == EXTENDED_IDENTITY
            assert extended_mul(extended_inverse(x), x) == EXTENDED_IDENTITY

    def test_associativity_battery(self):
        rng = random.Random(77)
        for _ in range(2000):
            x, y, z = (lift_braid(random_word(rng)) for _ in range(3))
            assert extended_mul(extended_mul(x, y), z) == extended_mul(x, extended_mul(y, z))

    def test_projection_intertwines(self):
        rng = random.Random(21)
        for _ in range(200):
            a, b = random_word(rng), random_word(rng)
            prod = extended_mul(lift_braid(a), lift_braid(b))
            assert prod.matrix == burau(a) * burau(b)


class TestLift:
    def test_relation_agreement(self):
        assert lift_braid(BraidWord.parse("s1 s2 s1")) == \
            lift_braid(BraidWord.parse("s2 s1 s2")) == \
            ExtendedElement(IntMatrix(0, 1, -1, 0), 1)

    def test_full_twist_squared_detects_kernel(self):
        lifted = lift_braid(HALF_TWIST ** 4)
        assert lifted == ExtendedElement(IDENTITY, 4)
        assert burau(HALF_TWIST ** 4) == IDENTITY
        assert lifted != EXTENDED_IDENTITY

    def test_empty_word(self):
        assert lift_braid(BraidWord.identity()) == EXTENDED_IDENTITY

    def test_relation_safe_exhaustively(self):
        # any single application of the defining relation inside a short
        # positive word leaves the lift unchanged
        gens = [(1, 1), (1, -1), (2, 1), (2, -1)]
        for length in range(0, 4):
            for prefix in itertools.product(gens, repeat=length):
                left = BraidWord.from_letters(prefix) * BraidWord.parse("s1 s2 s1")
                right = BraidWord.from_letters(prefix) * BraidWord.parse("s2 s1 s2")
                assert lift_braid(left) == lift_braid(right)

    def test_matrix_component_is_projection(self):
        rng = random.Random(9)
        for _ in range(300):
            w = random_word(rng)
            assert lift_braid(w).matrix == burau(w)


class TestEtaMultiplier:
    def test_requires_positive_c(self):
        with pytest.raises(RequiresPositiveC):
            eta_multiplier_matrix(IntMatrix(1, 1, 0, 1))
        with pytest.raises(RequiresPositiveC):
            eta_multiplier_matrix(IntMatrix(1, 0, -1, 1))

    def test_empty_dedekind_sum(self):
        assert dedekind_sum(1, 1) == 0
        assert dedekind_sum(5, 1) == 0

    def test_dedekind_sum_value(self):
        assert dedekind_sum(1, 3) == Fraction(1, 18)

    def test_half_kappa_reference_values(self):
        # with the constant 1/2 the formula gives exp(-i pi / 3) and
        # exp(-i pi / 2) at the two standard matrices
        v1 = eta_multiplier_matrix(IntMatrix(1, 0, 1, 1), Fraction(1, 2))
        assert abs(v1 - cmath.exp(-1j * math.pi / 3)) < 1e-12
        v2 = eta_multiplier_matrix(IntMatrix(0, -1, 1, 0), Fraction(1, 2))
        assert abs(v2 - cmath.exp(-1j * math.pi / 2)) < 1e-12

    def test_default_kappa_quarter(self):
        phase = eta_multiplier_phase(IntMatrix(0, -1, 1, 0))
        assert phase == Fraction(-1, 4) % 2

    def test_unit_modulus(self):
        for mat in (IntMatrix(1, 0, 1, 1), IntMatrix(1, 1, 1, 2), IntMatrix(1, 0, 3, 1)):
            assert abs(abs(eta_multiplier_matrix(mat)) - 1) < 1e-12


GROUPS = [cyclic_group(2), symmetric_group_3(), dihedral_group(4)]


class TestQuilt:
    def test_stabilized_pairs(self):
        s3 = symmetric_group_3()
        h = s3.index("(123)")
        g = s3.index("(12)")
        assert quilt_step((0, h), "s1", s3) == (0, h)
        assert quilt_step((g, 0), "s2", s3) == (g, 0)

    def test_cayley_lookup_example(self):
        s3 = symmetric_group_3()
        g, h = s3.index("(12)"), s3.index("(123)")
        stepped = quilt_step((g, h), "s1", s3)
        assert stepped == (g, s3.product(g, h))

    def test_identity_orbit_is_singleton(self):
        for table in GROUPS:
            assert quilt_orbit((0, 0), table) == frozenset({(0, 0)})

    @pytest.mark.parametrize("table", GROUPS, ids=lambda t: f"order{t.order}")
    def test_generators_are_bijections_satisfying_relation(self, table):
        n = table.order
        pairs = [(g, h) for g in range(n) for h in range(n)]

        def act(pair, word):
            for gen in word:
                pair = quilt_step(pair, gen, table)
            return pair

        for gen in ("s1", "s2"):
            image = {quilt_step(p, gen, table) for p in pairs}
            assert len(image) == len(pairs)
            inverse = gen + "^-1"
            for p in pairs:
                assert quilt_step(quilt_step(p, gen, table), inverse, table) == p
        for p in pairs:
            assert act(p, ["s1", "s2", "s1"]) == act(p, ["s2", "s1", "s2"])

    @pytest.mark.parametrize("table", GROUPS, ids=lambda t: f"order{t.order}")
    def test_orbits_partition(self, table):
        orbits = quilt_orbits(table)
        total = sum(len(o) for o in orbits)
        assert total == table.order ** 2
        seen = set()
        for orbit in orbits:
            assert not (orbit & seen)
            seen |= orbit

    def test_orbit_size_example(self):
        s3 = symmetric_group_3()
        orbit = quilt_orbit((s3.index("(12)"), s3.index("(123)")), s3)
        assert len(orbit) == 9


class TestGroupTable:
    def test_roundtrip(self):
        table = symmetric_group_3()
        text = emit_group_table(table)
        assert parse_group_table(text) == table
        assert emit_group_table(parse_group_table(text)) == text

    def test_rejects_non_group(self):
        text = "order: 2\ne g\ng g\n"
        with pytest.raises(ParseError):
            parse_group_table(text)

    def test_rejects_bad_header(self):
        with pytest.raises(ParseError):
            parse_group_table("2\ne g\ng e\n")

    def test_rejects_unknown_label(self):
        with pytest.raises(ParseError):
            parse_group_table("order: 2\ne g\ng x\n")

    def test_validation_catches_non_associative(self):
        # a Latin square with two-sided identity and inverses that is not a
        # group: (a a) b = b while a (a b) = d
        text = ("order: 5\n"
                "e a b c d\n"
                "a e c d b\n"
                "b d e a c\n"
                "c b d e a\n"
                "d c a b e\n")
        with pytest.raises(ParseError, match="associative"):
            parse_group_table(text)
