import itertools
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodromy.braid import BraidWord, full_twist, inverse
from monodromy.free_group import cyclic_reduce_letters
from monodromy.factorization import (
    Block,
    BlockedPuiseuxFactor,
    Factorization,
    PuiseuxFactorization,
    expand,
    hurwitz_orbit,
    orbit_count_components,
    pseudo_coxeter,
)
from monodromy.presentation import (
    AbelianInvariants,
    BudgetExceeded,
    Presentation,
    abelianize,
    count_homs,
    format_presentation,
    parse_presentation,
    permutation_group,
    relation_matrix,
    smith_normal_form,
    symmetric_group,
    tietze_simplify,
    zvk_affine,
    zvk_projective,
    zvk_puiseux,
)

from conftest import braids
from oracles import SNF_BATTERY, abelian_rank, brute_force_homs, snf_by_elementary_ops, snf_by_minors, snf_by_sympy
from oracles import symmetric_group as oracle_sym
from test_factorization import CONCURRENT_TRIPLE, DEFORMED_TRIPLE, F, factorizations

S3, S4 = symmetric_group(3), symmetric_group(4)


def cyclic_class(r):
    """All rotations of the cyclic reduction of r and of its inverse."""
    r = cyclic_reduce_letters(r)
    inv = tuple(-k for k in reversed(r))
    return {w[i:] + w[:i] for w in (tuple(r), inv) for i in range(len(r))}


def P(g, *rels):
    return Presentation(g, tuple(tuple(r) for r in rels))


class TestZvK:
    def test_trefoil(self):
        p = zvk_affine(F(2, [1, 1, 1]))
        assert p.relators == ((1, 2, 1, 2, -1, -2, -1, -1),)
        # after simplification: mu1 mu2 mu1 = mu2 mu1 mu2, up to rotation and inversion
        q = tietze_simplify(p)
        assert q.generators == 2 and len(q.relators) == 1
        assert cyclic_class(q.relators[0]) & cyclic_class((1, 2, 1, -2, -1, -2))

    def test_empty_factorization_is_free(self):
        assert zvk_affine(Factorization(3)) == Presentation(3)

    def test_single_crossing_identifies_meridians(self):
        p = zvk_affine(F(2, [1]))
        assert p.relators == ((1, 2, -1, -1),)
        assert tietze_simplify(p) == Presentation(1)

    def test_include_last(self):
        f = F(3, [1], [2])
        assert len(zvk_affine(f, include_last=True).relators) >= len(zvk_affine(f).relators)
        assert abelianize(zvk_affine(f, include_last=True)) == abelianize(zvk_affine(f))

    def test_projective_conic(self):
        p = zvk_projective(F(2, [1], [1]))
        expected = [(1, -2), (1, 2)]
        assert len(p.relators) == 2
        for r in p.relators:
            # each relator is cyclically equivalent to one of mu1 mu2^-1, mu1 mu2
            assert any(cyclic_class(r) & cyclic_class(e) for e in expected)

    def test_projective_concurrent_lines(self):
        # three concurrent lines: H_1 of the complement in P^2 is Z^2
        assert abelianize(zvk_projective(CONCURRENT_TRIPLE)) == AbelianInvariants(2, ())

    def test_projective_one_strand(self):
        assert abelianize(zvk_projective(Factorization(1))) == AbelianInvariants(0, ())

    def test_projective_warns(self):
        with pytest.warns(UserWarning):
            zvk_projective(F(2, [1]))


def puiseux(n, *entries):
    return PuiseuxFactorization(
        n,
        tuple(
            BlockedPuiseuxFactor(BraidWord(n, tuple(alpha)), tuple(Block(t, w, BraidWord(w, tuple(b))) for t, w, b in blocks))
            for alpha, blocks in entries
        ),
    )


class TestPuiseuxPresentation:
    def test_one_relator_per_block(self):
        p = puiseux(3, ([], [(1, 2, [1, 1, 1])]))
        assert len(zvk_puiseux(p).relators) == 1
        assert len(zvk_puiseux(p, full_blocks=True).relators) == 2
        assert len(zvk_affine(expand(p)).relators) == 2

    def test_tangency_identifies_block_meridians(self):
        p = puiseux(4, ([], [(1, 3, [2, 1])]))
        q = tietze_simplify(zvk_puiseux(p))
        # mu1 = mu2 = mu3, mu4 free: the free group of rank 2
        assert q.generators == 2 and q.relators == ()

    def test_ordinary_point_gives_commutations(self):
        p = puiseux(3, ([], [(1, 3, [2, 1, 2, 1, 2, 1])]))
        g = zvk_puiseux(p)
        assert abelianize(g) == AbelianInvariants(3, ())
        assert count_homs(g, S3, nonabelian_only=True) == count_homs(zvk_affine(CONCURRENT_TRIPLE), S3, nonabelian_only=True)

    def test_conjugated_entry(self):
        p = puiseux(3, ([1], [(2, 2, [1, 1])]), ([-2], [(1, 2, [1])]))
        a, b = zvk_puiseux(p), zvk_affine(expand(p))
        assert abelianize(a) == abelianize(b)
        assert count_homs(a, S3) == count_homs(b, S3)


class TestTietze:
    def test_examples(self):
        assert tietze_simplify(P(2, [1, -2])) == Presentation(1)
        assert tietze_simplify(zvk_affine(F(2, [1], [1]))) == Presentation(1)
        assert tietze_simplify(Presentation(1)) == Presentation(1)

    def test_drops_cyclic_duplicates(self):
        q = tietze_simplify(P(2, [1, 2, -1, -2], [2, -1, -2, 1], [2, 1, -2, -1]))
        assert len(q.relators) == 1

    def test_budget_zero_keeps_group(self):
        p = zvk_affine(DEFORMED_TRIPLE)
        assert abelianize(tietze_simplify(p, budget=0)) == abelianize(p)

    def test_deformed_triple_point(self):
        q = tietze_simplify(zvk_affine(DEFORMED_TRIPLE))
        assert q.generators == 3 and len(q.relators) == 3
        assert all(len(r) == 4 for r in q.relators)


class TestSmithNormalForm:
    def test_examples(self):
        assert smith_normal_form([[1, 0], [0, 1]]) == [1, 1]
        assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
        assert smith_normal_form([[1, -1]]) == [1]

    @pytest.mark.parametrize("matrix", SNF_BATTERY)
    def test_against_oracles(self, matrix):
        got = smith_normal_form(matrix)
        assert got == snf_by_minors(matrix) == snf_by_sympy(matrix) == snf_by_elementary_ops(matrix)

    def test_divisibility_chain(self):
        for m in SNF_BATTERY:
            d = [x for x in smith_normal_form(m) if x]
            assert all(b % a == 0 for a, b in zip(d, d[1:]))

    def test_empty(self):
        assert smith_normal_form([]) == []


@settings(max_examples=60)
@given(
    st.integers(1, 4).flatmap(
        lambda r: st.integers(1, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_snf_random_against_minors(matrix):
    assert smith_normal_form(matrix) == snf_by_minors(matrix)


class TestAbelianize:
    def test_examples(self):
        assert abelianize(zvk_projective(F(2, [1], [1]))) == AbelianInvariants(0, (2,))
        assert abelianize(zvk_affine(F(2, [1, 1, 1]))) == AbelianInvariants(1, ())
        assert abelianize(Presentation(3)) == AbelianInvariants(3, ())

    def test_text(self):
        assert str(AbelianInvariants(0, (2, 6))) == "rank 0 torsion [2, 6]"

    def test_relation_matrix(self):
        assert relation_matrix(P(2, [1, 1, -2])) == [[2, -1]]


class TestHomCounts:
    def test_trivial_group(self):
        assert count_homs(P(1, [1]), S3) == 1

    def test_free_group(self):
        assert count_homs(Presentation(2), S3) == 36

    def test_no_generators(self):
        assert count_homs(Presentation(0), S3) == 1
        assert count_homs(Presentation(0), S3, nonabelian_only=True) == 0

    def test_trefoil_against_pair_enumeration(self):
        rel = (1, 2, 1, -2, -1, -2)
        assert count_homs(P(2, rel), S3) == brute_force_homs(2, [rel], oracle_sym(3)) == 12

    def test_concurrent_lines_surject(self):
        assert count_homs(zvk_affine(CONCURRENT_TRIPLE), S3, nonabelian_only=True) > 0

    def test_deformed_triple_is_abelian(self):
        p = zvk_affine(DEFORMED_TRIPLE)
        assert count_homs(p, S3, nonabelian_only=True) == 0
        assert count_homs(p, S3) == brute_force_homs(3, p.relators, oracle_sym(3))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            count_homs(Presentation(4), S4, max_assignments=1000)

    def test_workers_agree(self):
        # 24^4 assignments: large enough to go through the process pool
        p = zvk_affine(Factorization(4, (full_twist(4),)))
        assert count_homs(p, S4, nonabelian_only=True, workers=1) == count_homs(p, S4, nonabelian_only=True, workers=2)

    def test_generated_group(self):
        cyclic3 = permutation_group("C3", [(1, 2, 0)])
        assert len(cyclic3) == 3
        assert count_homs(P(1, [1, 1, 1]), cyclic3) == 3


class TestTextFormat:
    def test_round_trip(self):
        p = P(3, [1, 2, -1], [3])
        text = format_presentation(p)
        assert text == "gens 3\nrel 3\nrel 1 2 -1\n"
        assert parse_presentation(text) == Presentation(3, ((3,), (1, 2, -1)))

    def test_bad_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_presentation("gens 2\nrel 3\n")


# --- properties -----------------------------------------------------------------


@settings(max_examples=60)
@given(factorizations(max_factors=3, max_len=4))
def test_rank_equals_components(f):
    inv = abelianize(zvk_affine(f))
    assert inv.free_rank == orbit_count_components(f)
    assert inv.torsion == ()
    assert inv.free_rank == abelian_rank(f.strands, zvk_affine(f).relators)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rank_equals_components_exhaustive_single_letters(n):
    letters = [k for i in range(1, n) for k in (i, -i)]
    for r in (1, 2):
        for combo in itertools.product(letters, repeat=r):
            f = Factorization(n, tuple(BraidWord(n, (k,)) for k in combo))
            assert abelianize(zvk_affine(f)).free_rank == orbit_count_components(f)


@settings(max_examples=40)
@given(factorizations(min_factors=1, max_factors=3, max_len=3))
def test_projective_transitive_gives_cyclic_torsion(f):
    # close f up to a projective factorization by appending the missing factor
    closing = inverse(pseudo_coxeter(f)) * full_twist(f.strands)
    g = Factorization(f.strands, f.factors + (closing,))
    if orbit_count_components(g) == 1:
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            inv = abelianize(zvk_projective(g))
        assert inv == AbelianInvariants(0, (f.strands,))


@settings(max_examples=40)
@given(factorizations(max_factors=2, max_len=4))
def test_tietze_preserves_invariants(f):
    p = zvk_affine(f)
    q = tietze_simplify(p)
    assert q.generators <= p.generators
    assert abelianize(q) == abelianize(p)
    assert count_homs(q, S3) == count_homs(p, S3)


@st.composite
def puiseux_factorizations(draw):
    n = draw(st.integers(2, 4))
    entries = []
    for _ in range(draw(st.integers(1, 2))):
        alpha = draw(braids(strands=n, max_len=3))
        blocks, pos = [], 1
        while pos < n:
            width = draw(st.integers(2, n - pos + 1))
            if draw(st.booleans()):
                beta = draw(st.lists(st.integers(1, width - 1), min_size=1, max_size=3))
                blocks.append(Block(pos, width, BraidWord(width, tuple(beta))))
            pos += width
        entries.append(BlockedPuiseuxFactor(alpha, tuple(blocks)))
    return PuiseuxFactorization(n, tuple(entries))


@settings(max_examples=40)
@given(puiseux_factorizations())
def test_puiseux_presentation_matches_expansion(p):
    a, b = zvk_puiseux(p), zvk_affine(expand(p))
    assert abelianize(a) == abelianize(b)
    assert count_homs(a, S3) == count_homs(b, S3)
    assert count_homs(a, S4) == count_homs(b, S4)


def test_hurwitz_invariance_along_orbit():
    f = F(3, [1, 1], [2], [-1, 2, 1])
    ref = zvk_affine(f)
    inv, homs = abelianize(ref), count_homs(ref, S3)
    for state in hurwitz_orbit(f, 40).states.values():
        g = zvk_affine(state)
        assert abelianize(g) == inv
        assert count_homs(g, S3) == homs
