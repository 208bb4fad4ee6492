"""Tandem network and transient-distribution tests.

The Monte Carlo checks all run on fixed seeds with 3-sigma tolerances,
so they are deterministic.  The closed forms transient_k3_special and
transient_constant are checked for what they actually are: strict
overcounts of their target events (see the module docstrings); the
tests pin the exact counterexample and the direction of the error
rather than pretending the forms match simulation.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rskpath.paths import word_to_walk
from rskpath.queueing import (
    PoissonDrive,
    TandemState,
    barnes_g,
    bessel_i,
    beta_statistic,
    constant_departure_factor,
    depoissonized_dist,
    queuelen_k2,
    simulate_poisson,
    simulate_word,
    transient_constant,
    transient_dist,
    transient_k2,
    transient_k3_special,
)
from rskpath.tableaux import num_standard, rs
from rskpath.transform import triangular

F = Fraction
HALF = (F(1, 2), F(1, 2))
SKEW3 = (F(1, 2), F(1, 4), F(1, 4))


def words(k, n):
    return itertools.product(range(1, k + 1), repeat=n)


# ---------------------------------------------------------------------------
# Word-driven network vs the convolution transform.


def test_simulate_word_matches_transform_exhaustive():
    for k in (2, 3):
        for n in range(0, 6):
            for w in words(k, n):
                arr = triangular(word_to_walk(w, k))
                states = simulate_word(w, k)
                for m in range(n + 1):
                    dmat, qmat = states[m]
                    assert dmat == arr.d_matrix(m)
                    assert qmat == arr.q_matrix(m)
    for w in words(4, 4):
        arr = triangular(word_to_walk(w, 4))
        dmat, qmat = simulate_word(w, 4)[4]
        assert dmat == arr.d_matrix(4)
        assert qmat == arr.q_matrix(4)


@settings(deadline=None, max_examples=120)
@given(st.integers(2, 4).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(st.integers(1, k), max_size=10))
))
def test_simulate_word_matches_transform_random(case):
    k, w = case
    arr = triangular(word_to_walk(w, k))
    for m, (dmat, qmat) in enumerate(simulate_word(w, k)):
        assert dmat == arr.d_matrix(m)
        assert qmat == arr.q_matrix(m)


def test_empty_word_all_zero():
    dmat, qmat = simulate_word((), 3)[0]
    assert dmat == ((0, 0, 0), (0, 0), (0,))
    assert qmat == ((0, 0), (0,))


def test_all_ones_word_only_first_station():
    dmat, _ = simulate_word((1,) * 5, 3)[-1]
    assert dmat[0] == (5, 0, 0)
    # every stage's first queue fires too: the event cascades down
    assert dmat == ((5, 0, 0), (5, 0), (5,))


def test_feed_rejects_bad_letters_and_clocks():
    state = TandemState(2)
    with pytest.raises(ValueError):
        state.feed(3)
    state.feed(1, at=1.0)
    with pytest.raises(ValueError):
        state.feed(1, at=0.5)


# ---------------------------------------------------------------------------
# De-Poissonized law of the stage-1 departures.


def brute_delta(p, n):
    """Stage-1 departure law after n letters, straight off the network."""
    k = len(p)
    out = {}
    for w in words(k, n):
        mass = math.prod(p[a - 1] for a in w)
        d = tuple(simulate_word(w, k)[n][0][0])
        out[d] = out.get(d, F(0)) + mass
    return out


def test_depoissonized_equals_network_enumeration():
    for p, nmax in ((HALF, 6), (SKEW3, 5), ((F(1, 6), F(1, 3), F(1, 2)), 5)):
        for n in range(nmax + 1):
            assert depoissonized_dist(p, n) == brute_delta(p, n)


def test_depoissonized_k2_n2_from_four_words():
    # 11 -> (2,0); 22 -> (0,0) (second station idle); of 12/21 one
    # feeds the second station and one wastes the service
    dist = depoissonized_dist(HALF, 2)
    assert dist == {(0, 0): F(1, 4), (1, 0): F(1, 4), (2, 0): F(1, 4), (1, 1): F(1, 4)}


def test_depoissonized_edge_cases():
    assert depoissonized_dist(HALF, 0) == {(0, 0): F(1)}
    uniform3 = (F(1, 3),) * 3
    assert sum(depoissonized_dist(uniform3, 4).values()) == 1
    with pytest.raises(ValueError):
        depoissonized_dist((F(1, 2), F(1, 3)), 2)


def test_beta_statistic_matches_insertion_tableau():
    # the departure vector is the count of i's in row i of the P tableau
    for w in words(3, 4):
        tab = rs(list(w)).p
        assert beta_statistic(tab, 3) == simulate_word(w, 3)[4][0][0]


# ---------------------------------------------------------------------------
# Generic transient mixture.


def test_transient_dist_zero_vector_small_t():
    out = transient_dist(HALF, F(1, 100), (0, 0))
    # no events at all dominates; P(D=0) = P(no first-station service)
    assert out.value == pytest.approx(math.exp(-0.005), abs=1e-9)
    assert out.tail_bound <= 1e-9


def test_transient_dist_truncation_error_is_loud():
    with pytest.raises(ValueError, match="tail bound"):
        transient_dist(HALF, 1, (0, 0), truncation=1)
    with pytest.raises(ValueError):
        transient_dist(HALF, 1, (0,))


def test_transient_normalization_covers_one():
    total = 0.0
    for d1 in range(26):
        for d2 in range(d1 + 1):
            total += transient_dist(HALF, 1, (d1, d2), tolerance=1e-13).value
    assert abs(total - 1.0) < 1e-9


def test_transient_k2_agrees_with_generic_on_random_points():
    rng = np.random.default_rng(20260825)
    mus = (HALF, (F(1, 3), F(2, 3)), (F(3, 4), F(1, 4)))
    for _ in range(20):
        mu = mus[rng.integers(len(mus))]
        t = F(int(rng.integers(1, 30)), 10)
        d1 = int(rng.integers(0, 5))
        d2 = int(rng.integers(0, d1 + 1))
        lhs = transient_k2(mu, t, (d1, d2))
        rhs = transient_dist(mu, t, (d1, d2), tolerance=1e-12)
        assert abs(lhs - rhs.value) < 1e-9


def test_transient_k2_no_overtaking_and_mass():
    assert transient_k2(HALF, 1, (1, 2)) == 0.0
    total = sum(
        transient_k2(HALF, 1, (d1, d2))
        for d1 in range(26)
        for d2 in range(d1 + 1)
    )
    assert abs(total - 1.0) < 1e-9


def test_transient_k2_single_queue_reduction():
    # with d2 = 0 the hook factor is 1 and the series is a plain
    # exponential sum; rebuild it independently in floats
    mu = (F(1, 3), F(2, 3))
    for t, d1 in ((F(1), 0), (F(2), 1), (F(3, 2), 3)):
        s, p1, p2 = float(t), 1 / 3, 2 / 3
        direct = math.exp(-s) * math.fsum(
            s**n * p1**d1 * p2 ** (n - d1) * (n + 1) / math.factorial(n + 1)
            for n in range(d1, 80)
        )
        assert transient_k2(mu, t, (d1, 0)) == pytest.approx(direct, rel=1e-12)


# ---------------------------------------------------------------------------
# Bessel series and the k = 2 queue length.


def test_bessel_small_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(0, 1.0) == pytest.approx(1.2660658777520084, abs=1e-12)
    with pytest.raises(ValueError):
        bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_i(0, -1.0)


def test_bessel_against_mpmath_grid():
    mpmath = pytest.importorskip("mpmath")
    for order in (0, 1, 2, 5, 12, 20):
        for z in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0):
            want = float(mpmath.besseli(order, z))
            assert bessel_i(order, z) == pytest.approx(want, rel=1e-12)


def test_queuelen_point_mass_at_zero_time():
    assert queuelen_k2(HALF, 0, 0) == 1.0
    assert queuelen_k2(HALF, 0, 3) == 0.0


def test_queuelen_equals_summed_departure_law():
    mu = (F(1, 3), F(2, 3))
    for q in range(5):
        direct = sum(transient_k2(mu, 2, (q + j, j)) for j in range(60))
        assert queuelen_k2(mu, 2, q) == pytest.approx(direct, rel=1e-10)


def test_queuelen_mass_and_monotone_tail():
    total = sum(queuelen_k2(HALF, 2, q) for q in range(60))
    assert abs(total - 1.0) < 1e-9
    mu = (F(1, 3), F(2, 3))  # light inflow: longer queues ever rarer
    values = [queuelen_k2(mu, 2, q) for q in range(9)]
    assert all(a > b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# The k = 3 and constant-d closed forms: exact where they are exact,
# and honestly quantified where they are not.


def mixed_event_prob(mu, t, d):
    """P(D1 = d1, D2 >= d2, D3 = d3), exact generic route."""
    return sum(
        transient_dist(mu, t, (d[0], j, d[2]), tolerance=1e-12).value
        for j in range(d[1], d[0] + 1)
    )


def test_k3_zero_vector_is_exact():
    drive = PoissonDrive.of(SKEW3)
    for t in (F(1, 2), F(1), F(2)):
        want = math.exp(-float(drive.p[0] * drive.total * t))
        assert transient_k3_special(SKEW3, t, (0, 0, 0)) == pytest.approx(
            want, rel=1e-14
        )
        have = mixed_event_prob(SKEW3, t, (0, 0, 0))
        assert have == pytest.approx(want, abs=1e-9)


def test_k3_domain_errors():
    with pytest.raises(ValueError):
        transient_k3_special(HALF, 1, (1, 0, 0))
    with pytest.raises(ValueError):
        transient_k3_special((F(1, 2), F(1, 3), F(1, 6)), 1, (1, 0, 0))
    with pytest.raises(ValueError):
        transient_k3_special(SKEW3, 1, (0, 1, 0))
    with pytest.raises(ValueError):
        transient_k3_special(SKEW3, 1, (1, 0, -1))


def test_k3_closed_form_overcounts_its_event():
    # the counterexample, fully exact: at n = 3 the per-shape rewrite
    # p^d s_{l/d}(p2,p3) claims 3/16 where the true event mass is 1/8
    from rskpath.symfunc import skew_schur

    p = SKEW3
    full = depoissonized_dist(p, 3)
    event = sum(
        m for key, m in full.items()
        if key[0] == 1 and key[1] >= 1 and key[2] == 0
    )
    assert event == F(1, 8)
    skew_route = F(0)
    for lam in ((2, 1), (1, 1, 1)):  # shapes of 3 containing (1,1); (3) does not
        skew_route += num_standard(lam) * skew_schur(lam, (1, 1), (p[1], p[2]))
    skew_route *= p[0] * p[1]
    assert skew_route == F(3, 16)

    # and at the mixture level the form strictly exceeds the event law
    for t in (F(1, 2), F(1), F(2)):
        for d in ((1, 0, 0), (1, 1, 0), (2, 1, 0), (1, 1, 1), (2, 2, 1)):
            form = transient_k3_special(SKEW3, t, d)
            true = mixed_event_prob(SKEW3, t, d)
            assert form > true + 1e-12
            assert form - true < 0.05


def test_k3_pinned_gap_at_reference_point():
    form = transient_k3_special(SKEW3, 1, (1, 1, 0))
    true = mixed_event_prob(SKEW3, 1, (1, 1, 0))
    assert form == pytest.approx(0.037908166232, abs=1e-9)
    assert true == pytest.approx(0.032144937572, abs=1e-8)
    sigma = math.sqrt(true * (1 - true) / 1e5)
    assert form - true > 10 * sigma  # unbridgeable by a 1e5-run simulation


def test_barnes_g_values():
    assert barnes_g(1) == 1
    assert barnes_g(2) == 1
    assert barnes_g(4) == 12
    assert barnes_g(6) == math.prod(math.factorial(i) for i in range(1, 6))
    with pytest.raises(ValueError):
        barnes_g(0)


def test_constant_factor_matches_hook_route_exactly():
    for k in range(1, 6):
        for m in range(5):
            shape = (m,) * k if m else ()
            want = F(num_standard(shape), math.factorial(m * k))
            assert constant_departure_factor(k, m) == want


def test_constant_zero_and_errors():
    drive = PoissonDrive.of((1, 2, 3))
    want = math.exp(-float(drive.p[0] * drive.total * F(1, 2)))
    assert transient_constant((1, 2, 3), F(1, 2), 0) == pytest.approx(want, rel=1e-14)
    with pytest.raises(ValueError):
        transient_constant((1,), 1, 1)
    with pytest.raises(ValueError):
        transient_constant(HALF, 1, -1)


def test_constant_form_overcounts_even_at_two_queues():
    for mu, t, m in ((HALF, F(3, 2), 1), (HALF, F(3, 2), 2), ((F(1, 3),) * 3, F(1), 1)):
        form = transient_constant(mu, t, m)
        true = transient_dist(mu, t, (m,) * len(mu), tolerance=1e-12).value
        assert form > true + 1e-12
        assert form - true < 0.05


# ---------------------------------------------------------------------------
# Poisson-driven simulation.


def test_simulate_poisson_zero_time_and_determinism():
    state = simulate_poisson((1, 1), 0.0, seed=5)
    assert state.snapshot() == ((0, 0), (0,))
    a = simulate_poisson((1, 1, 2), 3.0, seed=42).snapshot()
    b = simulate_poisson((1, 1, 2), 3.0, seed=42).snapshot()
    assert a == b
    assert PoissonDrive.of((1, 1, 2)).p == (F(1, 4), F(1, 4), F(1, 2))
    with pytest.raises(ValueError):
        PoissonDrive((1, 0))


def test_simulate_poisson_matches_transient_dist():
    # unit rates, t = 1; shared generator across runs
    rng = np.random.default_rng(90210)
    runs = 10**5
    counts = {}
    for _ in range(runs):
        d = simulate_poisson((1, 1), 1.0, seed=rng).snapshot()[0]
        counts[d] = counts.get(d, 0) + 1
    for d in ((0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1)):
        want = transient_dist((1, 1), 1, d).value
        got = counts.get(d, 0) / runs
        sigma = math.sqrt(want * (1 - want) / runs)
        assert abs(got - want) <= 3 * sigma + 1e-9


def test_simulate_poisson_queue_length_matches_bessel_series():
    rng = np.random.default_rng(4)
    runs = 10**5
    hits = 0
    for _ in range(runs):
        d = simulate_poisson(HALF, 2.0, seed=rng).snapshot()[0]
        hits += d[0] - d[1] == 0
    want = queuelen_k2(HALF, 2, 0)
    sigma = math.sqrt(want * (1 - want) / runs)
    assert abs(hits / runs - want) <= 3 * sigma


def test_poisson_embedding_conditional_on_event_count():
    # grouping runs by their event count must reproduce the word law
    rng = np.random.default_rng(777)
    runs = 6 * 10**4
    buckets: dict[int, dict] = {}
    for _ in range(runs):
        state = simulate_poisson(SKEW3, 4.0, seed=rng)
        per = buckets.setdefault(state.events, {})
        d = state.snapshot()[0]
        per[d] = per.get(d, 0) + 1
    for n in range(7):
        per = buckets.get(n, {})
        seen = sum(per.values())
        assert seen > 300  # enough mass at t = 4 for every n <= 6
        exact = depoissonized_dist(SKEW3, n)
        for d, mass in exact.items():
            want = float(mass)
            got = per.get(d, 0) / seen
            sigma = math.sqrt(want * (1 - want) / seen)
            assert abs(got - want) <= 3 * sigma + 1e-9


def test_k3_simulation_sides_with_generic_route_not_closed_form():
    # the event {D1=1, D2>=1, D3=0} at the pinned point: Monte Carlo
    # lands on the generic mixture and rejects the closed form
    rng = np.random.default_rng(1729)
    runs = 10**5
    hits = 0
    for _ in range(runs):
        d = simulate_poisson(SKEW3, 1.0, seed=rng).snapshot()[0]
        hits += d[0] == 1 and d[1] >= 1 and d[2] == 0
    est = hits / runs
    true = mixed_event_prob(SKEW3, 1, (1, 1, 0))
    form = transient_k3_special(SKEW3, 1, (1, 1, 0))
    sigma = math.sqrt(true * (1 - true) / runs)
    assert abs(est - true) <= 3 * sigma
    assert form - est > 3 * sigma
