"""Central-extension word algebra: free reduction, the area cocycle,
normal forms, the word problem, and mesh-loop classes."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import areaholonomy as ah
from areaholonomy import (
    GammaRElement,
    GenusMismatchError,
    clip,
    gamma_identity,
    gamma_inv,
    gamma_mul,
    loop_class,
    relator_letters,
    word_problem,
    wrap_mod1,
)

LETTERS_G2 = [i for i in range(-4, 5) if i != 0]


def random_element(genus: int, rng: np.random.Generator, max_len: int = 10) -> GammaRElement:
    if genus == 0:
        return GammaRElement(0, (), float(rng.normal()))
    alphabet = [i for i in range(-2 * genus, 2 * genus + 1) if i != 0]
    letters = [int(l) for l in rng.choice(alphabet, size=rng.integers(0, max_len + 1))]
    return GammaRElement(genus, letters, float(rng.normal()))


def t_distance(x: float, genus: int) -> float:
    return abs(wrap_mod1(x)) if genus == 0 else abs(x)


class TestClip:
    def test_full_cancellation(self):
        assert clip([1, 2, -2, -1]) == ()

    def test_no_adjacent_cancellation(self):
        assert clip([1, 2, -1]) == (1, 2, -1)

    @settings(max_examples=200)
    @given(st.lists(st.sampled_from(LETTERS_G2), max_size=30))
    def test_word_times_reverse_inverse_cancels(self, letters):
        inverse = [-l for l in reversed(letters)]
        assert clip(letters + inverse) == ()

    def test_thousand_random_words(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            letters = [int(l) for l in rng.choice(LETTERS_G2, size=rng.integers(0, 20))]
            inverse = [-l for l in reversed(letters)]
            assert clip(letters + inverse) == ()

    def test_order_independence(self):
        # stack reduction equals repeated single-pass deletion
        def slow_clip(letters):
            letters = list(letters)
            changed = True
            while changed:
                changed = False
                for i in range(len(letters) - 1):
                    if letters[i] == -letters[i + 1]:
                        del letters[i:i + 2]
                        changed = True
                        break
            return tuple(letters)

        rng = np.random.default_rng(32)
        for _ in range(200):
            letters = [int(l) for l in rng.choice(LETTERS_G2, size=rng.integers(0, 16))]
            assert clip(letters) == slow_clip(letters)


class TestGammaMul:
    def test_genus1_commutation(self):
        ab = gamma_mul(GammaRElement(1, "a1"), GammaRElement(1, "b1"))
        assert str(ab.word) == "a1 b1" and ab.t == 0.0
        ba = gamma_mul(GammaRElement(1, "b1"), GammaRElement(1, "a1"))
        assert str(ba.word) == "a1 b1" and ba.t == -1.0

    def test_genus2_relator_normalizes_to_central_one(self):
        rel = GammaRElement(2, relator_letters(2), 0.0)
        assert rel.word.letters == ()
        assert rel.t == 1.0

    def test_relator_conjugates(self):
        # oracle: free reduction cancels w against w^-1 once the central
        # relator value J is extracted, so the class is (empty, 1)
        rng = np.random.default_rng(33)
        rel = GammaRElement(2, relator_letters(2), 0.0)
        for _ in range(100):
            w = random_element(2, rng)
            conj = gamma_mul(gamma_mul(w, rel), gamma_inv(w))
            assert conj.word.letters == ()
            assert abs(conj.t - 1.0) < 1e-12

    def test_genus_mismatch(self):
        with pytest.raises(GenusMismatchError):
            gamma_mul(GammaRElement(1, "a1"), GammaRElement(2, "a1"))

    @pytest.mark.parametrize("genus", [0, 1, 2, 3])
    def test_group_axioms(self, genus):
        rng = np.random.default_rng(40 + genus)
        ident = gamma_identity(genus)
        for _ in range(200):
            x, y, z = (random_element(genus, rng) for _ in range(3))
            lhs = gamma_mul(gamma_mul(x, y), z)
            rhs = gamma_mul(x, gamma_mul(y, z))
            assert lhs.word.letters == rhs.word.letters
            assert t_distance(lhs.t - rhs.t, genus) < 1e-12
            assert gamma_mul(x, ident).word.letters == x.word.letters
            assert t_distance(gamma_mul(x, ident).t - x.t, genus) < 1e-15
            inv_prod = gamma_mul(x, gamma_inv(x))
            assert inv_prod.word.letters == ()
            assert t_distance(inv_prod.t, genus) < 1e-12

    @pytest.mark.parametrize("genus", [1, 2, 3])
    def test_centrality_of_central_coordinate(self, genus):
        rng = np.random.default_rng(50 + genus)
        j = GammaRElement(genus, (), 1.7)
        for _ in range(50):
            x = random_element(genus, rng)
            left = gamma_mul(j, x)
            right = gamma_mul(x, j)
            assert left.word.letters == right.word.letters
            assert abs(left.t - right.t) < 1e-12

    def test_genus1_abelianization(self):
        # forgetting t is a homomorphism onto the surface group: the word
        # part is determined by the exponent pair (p, q)
        rng = np.random.default_rng(54)
        for _ in range(100):
            x = random_element(1, rng)
            y = random_element(1, rng)
            prod = gamma_mul(x, y)
            count = lambda el, g: sum(1 if l == g else -1 if l == -g else 0 for l in el.word.letters)
            assert count(prod, 1) == count(x, 1) + count(y, 1)
            assert count(prod, 2) == count(x, 2) + count(y, 2)

    def test_dehn_shortens(self):
        # normalizing never lengthens, and trivial words vanish entirely
        rng = np.random.default_rng(55)
        rel = relator_letters(3)
        for _ in range(50):
            w = random_element(3, rng, max_len=8)
            padded = GammaRElement(3, w.word.letters + rel + tuple(-l for l in reversed(w.word.letters)), 0.0)
            assert padded.word.letters == ()
            assert padded.t == 1.0


class TestGammaInv:
    def test_central(self):
        assert gamma_inv(GammaRElement(1, (), 0.7)).t == -0.7

    def test_genus0(self):
        assert gamma_inv(GammaRElement(0, (), 0.3)).t == pytest.approx(-0.3)

    def test_genus1_roundtrip(self):
        x = GammaRElement(1, "a1 b1", 0.0)
        prod = gamma_mul(x, gamma_inv(x))
        assert prod.word.letters == () and prod.t == 0.0


class TestWordProblem:
    def test_reflexive(self):
        x = GammaRElement(1, "a1 b1", 0.25)
        assert word_problem(x, x)

    def test_distinct_area_classes(self):
        assert not word_problem(GammaRElement(1, "a1 b1", 0.0), GammaRElement(1, "a1 b1", 0.5))

    def test_relator_conjugate_equals_j(self):
        rng = np.random.default_rng(56)
        rel = GammaRElement(2, relator_letters(2), 0.0)
        j = GammaRElement(2, (), 1.0)
        w = random_element(2, rng)
        assert word_problem(gamma_mul(gamma_mul(w, rel), gamma_inv(w)), j)

    def test_genus0_mod1(self):
        assert word_problem(GammaRElement(0, (), 0.25), GammaRElement(0, (), 1.25))
        assert not word_problem(GammaRElement(0, (), 0.25), GammaRElement(0, (), 0.5))

    @settings(max_examples=100)
    @given(st.lists(st.sampled_from(LETTERS_G2), max_size=12), st.floats(-3, 3))
    def test_relator_absorption(self, letters, t):
        # x * R == J * x for every x: the relator is the central generator
        x = GammaRElement(2, letters, t)
        rel = GammaRElement(2, relator_letters(2), 0.0)
        j = GammaRElement(2, (), 1.0)
        assert word_problem(gamma_mul(x, rel), gamma_mul(j, x))


class TestLoopClass:
    def test_single_face_at_basepoint(self):
        mesh = ah.build_torus_mesh(2)
        loop = ah.face_boundary_loop(mesh, 0)
        assert loop.base == mesh.basepoint
        cls = loop_class(mesh, loop)
        assert cls.word.letters == ()
        assert cls.t == pytest.approx(0.25, abs=1e-15)

    def test_alpha_is_standard(self, torus4):
        cls = loop_class(torus4, ah.alpha_loop(torus4))
        assert str(cls.word) == "a1" and cls.t == 0.0

    def test_homomorphism(self, torus4):
        rng = np.random.default_rng(57)
        for _ in range(200):
            w1 = (int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
            w2 = (int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
            l1 = ah.random_loop(torus4, rng, 8, windings=w1)
            l2 = ah.random_loop(torus4, rng, 8, windings=w2)
            combined = loop_class(torus4, ah.loop_concat(l1, l2))
            expected = gamma_mul(loop_class(torus4, l1), loop_class(torus4, l2))
            assert combined.word.letters == expected.word.letters
            assert abs(combined.t - expected.t) < 1e-12

    def test_sphere_class_in_half_open_interval(self, sphere2):
        rng = np.random.default_rng(58)
        for _ in range(100):
            loop = ah.random_loop(sphere2, rng, 10)
            cls = loop_class(sphere2, loop)
            assert cls.word.letters == ()
            assert -0.5 < cls.t <= 0.5

    def test_base_mismatch(self, torus4):
        loop = ah.face_boundary_loop(torus4, 5)
        assert loop.base != torus4.basepoint
        with pytest.raises(ah.MalformedLoopError):
            loop_class(torus4, loop)


class TestParsing:
    def test_text_roundtrip(self):
        el = GammaRElement(2, "a1 b1 a1^-1 b2^-1", 0.5)
        back = GammaRElement(2, str(el.word), el.t)
        assert back == el

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            GammaRElement(1, "c1")
        with pytest.raises(ValueError):
            GammaRElement(1, "a2")  # index beyond genus

    def test_genus0_rejects_letters(self):
        with pytest.raises(ValueError):
            GammaRElement(0, "a1")

    def test_wrap_boundary(self):
        assert GammaRElement(0, (), 0.5).t == 0.5
        assert GammaRElement(0, (), -0.5).t == 0.5
        assert GammaRElement(0, (), 1.5).t == 0.5
        assert GammaRElement(0, (), 0.7).t == pytest.approx(-0.3)

    def test_json_roundtrip(self):
        el = GammaRElement(2, "a1 b2", -0.75)
        assert ah.gamma_from_json(ah.gamma_to_json(el)) == el
