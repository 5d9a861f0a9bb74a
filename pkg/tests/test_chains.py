import random
from fractions import Fraction as F
from itertools import product

import pytest

import oracles as O
from hopflift import combinat as cb
from hopflift import hopf
from hopflift.chains import (CHAIN_NAMES, ChainSpec, HarmonicityError, NegativeEntryError,
                             NonPositiveEtaError, bottom_r_shuffle_matrix, chain_algebra,
                             diagonalisability_probe, doob_transform, down_up_multiplicities,
                             fixed_point_comparison, insertion_identity_check,
                             multistep_identity_compare, named_chain, passed, predicted_spectrum,
                             random_spec, spectrum_certificate, stationary_distribution,
                             verify_stationary)
from hopflift.exactalg import Matrix, min_poly, verify_row_stochastic
from hopflift.hopf import Algebra, DescentOpSpec


def sequential_insertion(n, r):
    """Bottom-r shuffle as r successive uniform insertions into the growing top pile."""
    perms_n = cb.permutations(n)
    m = Matrix(perms_n, kind="perm")
    for i, x in enumerate(perms_n):
        top, bottom = list(x[: n - r]), x[n - r:]
        choices = [range(n - r + k + 1) for k in range(r)]
        total = 1
        for c in choices:
            total *= len(c)
        for picks in product(*choices):
            deck = list(top)
            for card, p in zip(bottom, picks):
                deck.insert(p, card)
            j = m.index[tuple(deck)]
            m.rows[i][j] = m.rows[i].get(j, 0) + F(1, total)
    return m


# Doob transform ------------------------------------------------------------

def test_doob_rejects_negative_entry():
    k = Matrix.from_dense("ab", [[F(3, 2), F(-1, 2)], [0, 1]])
    with pytest.raises(NegativeEntryError):
        doob_transform(k, {"a": 1, "b": 1})


def test_doob_rejects_nonpositive_eta():
    k = Matrix.from_dense("ab", [[F(1, 2), F(1, 2)], [0, 1]])
    with pytest.raises(NonPositiveEtaError):
        doob_transform(k, {"a": 1, "b": 0})


def test_doob_rejects_non_harmonic_eta():
    k = Matrix.from_dense("ab", [[F(1, 2), F(1, 2)], [0, 1]])
    with pytest.raises(HarmonicityError):
        doob_transform(k, {"a": 1, "b": 2})


def test_doob_reference_lambda3():
    k = Matrix.from_dense(O.PARTS3, O.LAMBDA3_PRE_DOOB)
    out = doob_transform(k, {lam: cb.dim(lam) for lam in O.PARTS3})
    assert out.to_dense() == O.LAMBDA3_DOOB


# degree-3 reference matrices ---------------------------------------------

def test_degree3_named_chains():
    assert named_chain("partition-downup", 3).to_dense() == O.LAMBDA3_DOOB
    assert named_chain("partition-downup", 3, doob=False).to_dense() == O.LAMBDA3_PRE_DOOB
    assert named_chain("tableau-downup", 3).to_dense() == O.FSYM3_DOOB
    assert named_chain("b2r-std", 3).reorder(O.PERMS3_DISPLAY).to_dense() == O.FQSYM3_DOOB


@pytest.mark.parametrize("n", range(1, 6))
def test_direct_and_transported_chains_agree(n):
    for name in ("partition-downup", "tableau-downup"):
        alg = chain_algebra(name)
        via = ChainSpec(alg, DescentOpSpec.preset("down-up", n)).matrix()
        assert named_chain(name, n) == via


@pytest.mark.parametrize("name", sorted(O.TRAJECTORIES))
def test_reference_trajectories(name):
    k = named_chain(name, 5)
    traj = O.TRAJECTORIES[name]
    for x, y in zip(traj, traj[1:]):
        assert k.rows[k.index[x]].get(k.index[y]) == F(1, 5)


def test_reference_tableau_trajectory():
    k = named_chain("tableau-downup", 5)
    traj = O.TABLEAU_TRAJECTORY
    for x, y in zip(traj, traj[1:]):
        assert k.rows[k.index[x]].get(k.index[y], 0) > 0


def test_q_mix_endpoints():
    assert named_chain("q-mix", 4, q=F(0)) == named_chain("b2r-std", 4)
    assert named_chain("q-mix", 4, q=F(1)) == named_chain("twisted-t2r-std", 4)
    half = named_chain("q-mix", 4, q="1/2")
    both = named_chain("b2r-std", 4).scale(F(1, 2)) + named_chain("twisted-t2r-std", 4).scale(F(1, 2))
    assert half == both


@pytest.mark.parametrize("n", range(1, 5))
def test_bottom_r_shuffle_matches_sequential_insertion(n):
    for r in range(1, n + 1):
        assert bottom_r_shuffle_matrix(n, r) == sequential_insertion(n, r)


def test_bottom_r_bounds():
    with pytest.raises(ValueError):
        bottom_r_shuffle_matrix(3, 0)
    with pytest.raises(ValueError):
        named_chain("bottom-r-std", 3, r=4)
    with pytest.raises(ValueError):
        named_chain("riffle", 3)


@pytest.mark.parametrize("n", range(1, 6))
def test_catalogue_is_stochastic_and_stationary(n):
    for name in CHAIN_NAMES:
        for r in sorted({1, n}):
            k = named_chain(name, n, r=r)
            assert verify_row_stochastic(k) == (True, None), name
            pi = stationary_distribution(chain_algebra(name), n)
            assert verify_stationary(pi, k), name


def test_stationary_reference_n3():
    pi = stationary_distribution("lambda", 3)
    assert pi == {(3,): F(1, 6), (2, 1): F(2, 3), (1, 1, 1): F(1, 6)}
    assert not verify_stationary({(3,): F(1)}, named_chain("partition-downup", 3))


# spectra ----------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 8))
def test_down_up_prediction_is_general_formula(n):
    for alg in Algebra:
        assert predicted_spectrum(alg, DescentOpSpec.preset("down-up", n)) == down_up_multiplicities(alg, n)


def test_down_up_multiplicities_reference():
    assert down_up_multiplicities("lambda", 4) == {F(1): 1, F(1, 2): 1, F(1, 4): 1, F(0): 2}
    # dims 1, 1, 2, 6: the eigenvalue 2/3 has multiplicity zero
    assert down_up_multiplicities("fqsym", 3) == {F(1): 1, F(1, 3): 1, F(0): 4}


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("alg", list(Algebra))
def test_down_up_spectrum(n, alg):
    name = {Algebra.FQSYM: "b2r-std", Algebra.FSYM: "tableau-downup", Algebra.LAMBDA: "partition-downup"}[alg]
    rep = spectrum_certificate(named_chain(name, n), alg, n)
    assert passed(rep), rep["witness"]
    assert rep["diagonalisable"]


@pytest.mark.parametrize("n", range(2, 5))
@pytest.mark.parametrize("alg", list(Algebra))
def test_fuzzed_spectrum(n, alg):
    rng = random.Random(7 * n)
    for _ in range(6):
        spec = random_spec(n, rng)
        rep = spectrum_certificate(ChainSpec(alg, spec).matrix(), alg, n, spec=spec, with_min_poly=False)
        assert passed(rep), (spec.to_json(), rep["witness"])


def test_spectrum_failure_has_witness():
    k = named_chain("twisted-t2r-std", 4)
    rep = spectrum_certificate(k, "fqsym", 4, spec=DescentOpSpec.preset("bottom-r:2", 4))
    assert rep["verdict"] == "fail" and "char_poly" in rep["witness"]


@pytest.mark.parametrize("n", range(2, 6))
def test_b2r_std_diagonalisable(n):
    assert min_poly(named_chain("b2r-std", n)).is_squarefree()


def test_probe_and_fixed_points_are_informational():
    probe = diagonalisability_probe(3, trials=4, seed=1)
    assert probe["verdict"] == "info"
    fp = fixed_point_comparison(4)
    assert fp["verdict"] == "info"
    assert sum(fp["fixed_point_counts"].values()) == 24
    assert sum(fp["shuffle_multiplicities"].values()) == 24


# operator identities --------------------------------------------------------

@pytest.mark.parametrize("n", range(2, 7))
def test_insertion_operator_identity(n):
    for r in range(1, n):
        assert passed(insertion_identity_check(n, r))


def test_insertion_identity_range():
    with pytest.raises(ValueError):
        insertion_identity_check(4, 4)


@pytest.mark.parametrize("n", range(2, 6))
def test_multistep_equality(n):
    for t in range(0, 5):
        assert passed(multistep_identity_compare(n, t))


@pytest.mark.parametrize("n,r", [(4, 2), (4, 3), (5, 2), (5, 4)])
def test_multistep_equality_other_r(n, r):
    assert passed(multistep_identity_compare(n, 3, r=r))


def test_multistep_reference_witness():
    rep = multistep_identity_compare(4, 2, target=O.MULTISTEP_TARGET)
    w = rep["witness"]
    assert passed(rep)
    assert w["std_prob"] == w["shuffle_prob"] == "1/16"
    assert F(w["std_prob"]) == O.MULTISTEP_PROB
    assert w["std_via"] == [cb.format_perm(p) for p in O.MULTISTEP_VIA_STD]
    assert w["shuffle_via"] == [cb.format_perm(p) for p in O.MULTISTEP_VIA_SHUFFLE]


def test_standardised_and_plain_one_step_differ():
    # the laws agree from the identity, not as matrices
    assert named_chain("b2r-std", 3) != bottom_r_shuffle_matrix(3, 1)
    assert hopf.descent_operator_matrix("fqsym", DescentOpSpec.preset("bottom-r:1", 3)) == named_chain("b2r-std", 3)


def test_found_non_diagonalisable_instance():
    # a two-term operator at n=4 whose permutation chain has a nontrivial Jordan block;
    # its tableau and partition images stay diagonalisable
    spec = DescentOpSpec.build(4, [((2, 2), None, F(1, 3)), ((1, 3), (2, 1), F(2, 3))])
    rep = spectrum_certificate(ChainSpec(Algebra.FQSYM, spec).matrix(), "fqsym", 4, spec=spec)
    assert passed(rep) and rep["diagonalisable"] is False
    assert rep["geometric"]["1/6"] < rep["observed"]["1/6"]
    for alg in (Algebra.FSYM, Algebra.LAMBDA):
        assert min_poly(ChainSpec(alg, spec).matrix()).is_squarefree()
