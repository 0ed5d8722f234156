import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandclust import (COLS, ROWS, Arrangement, BboConfig, ConfigError, InputError, Interchange,
                       Island, SolveResult, apply_arrangement, bandwidth_cost,
                       initialize_population, interchanges_to_arrangement, migrate_position,
                       mutate, rank_by_hsi, run_bbo)
from bandclust.bbo import arrangement_to_interchanges, check_population, resolve_threads, substream
from bandclust.matrix import is_permutation

from strategies import perms

FAST = dict(pop_size=8, generations=15)


def one_mode(perm):
    perm = np.asarray(perm)
    return Island(perm, np.arange(1))


# --- interchange encoding ---------------------------------------------------

def test_empty_interchange_list_is_identity():
    assert interchanges_to_arrangement([], 3, 4).is_identity()


def test_double_swap_is_identity():
    assert interchanges_to_arrangement([(ROWS, 0, 1), (ROWS, 0, 1)], 2, 2).is_identity()


def test_mixed_interchanges_compose():
    arr = interchanges_to_arrangement([Interchange(ROWS, 0, 1), Interchange(COLS, 2, 0)], 3, 3)
    assert arr.row_perm.tolist() == [1, 0, 2]
    assert arr.col_perm.tolist() == [2, 1, 0]
    # oracle: physically swap rows 0,1 then columns 2,0 of a labelled matrix
    A = np.arange(9.0).reshape(3, 3)
    B = A.copy()
    B[[0, 1]] = B[[1, 0]]
    B[:, [2, 0]] = B[:, [0, 2]]
    assert np.array_equal(apply_arrangement(A, arr).values, B)


def test_interchange_errors():
    with pytest.raises(IndexError):
        interchanges_to_arrangement([(ROWS, 0, 5)], 3, 3)
    with pytest.raises(ValueError):
        interchanges_to_arrangement([(COLS, 1, 1)], 3, 3)


@given(st.integers(1, 7), st.integers(1, 7), st.data())
def test_interchange_round_trip(m, n, data):
    arr = Arrangement(data.draw(perms(m)), data.draw(perms(n)))
    moves = arrangement_to_interchanges(arr)
    assert interchanges_to_arrangement(moves, m, n) == arr
    assert len(moves) <= (m - 1) + (n - 1)


# --- population -------------------------------------------------------------

def test_population_of_size_one_perms():
    pop = initialize_population(1, 2, np.random.default_rng(0))
    assert [p.tolist() for p in pop] == [[0], [0]]


@given(st.integers(1, 12), st.integers(2, 20), st.integers(0, 1000))
def test_population_contract(k, P, seed):
    pop = initialize_population(k, P, np.random.default_rng(seed))
    assert len(pop) == P
    assert pop[0].tolist() == list(range(k))
    assert all(is_permutation(p, k) for p in pop)


def test_population_is_diverse():
    for seed in range(20):
        pop = initialize_population(18, 30, np.random.default_rng(seed))
        assert len({tuple(p) for p in pop}) >= 25


def test_population_needs_two():
    with pytest.raises(ConfigError):
        initialize_population(3, 1, np.random.default_rng(0))


# --- ranking ----------------------------------------------------------------

def test_rank_by_cost():
    assert rank_by_hsi([5, 1, 3]).tolist() == [0, 2, 1]


def test_rank_ties_follow_index():
    assert rank_by_hsi([2.0, 2.0, 2.0]).tolist() == [0, 1, 2]


def test_rank_requires_costs():
    with pytest.raises(ValueError):
        rank_by_hsi([Island(np.arange(2), np.arange(2))])


@given(st.lists(st.integers(0, 5), min_size=1, max_size=30))
def test_rank_is_bijection_and_orders_costs(costs):
    ranks = rank_by_hsi(costs)
    assert sorted(ranks.tolist()) == list(range(len(costs)))
    by_rank = np.array(costs)[np.argsort(ranks)]
    assert np.all(np.diff(by_rank) <= 0)


# --- migration and mutation -------------------------------------------------

def test_migrate_single_repair_swap():
    out = migrate_position(one_mode([0, 1, 2]), 0, one_mode([2, 1, 0]))
    assert out.row_perm.tolist() == [2, 1, 0]


def test_migrate_same_donor_is_noop():
    island = one_mode([3, 0, 2, 1])
    island.cost = 7.0
    for p in range(4):
        out = migrate_position(island, p, island)
        assert out.row_perm.tolist() == [3, 0, 2, 1] and out.cost == 7.0


def test_migrate_column_mode_leaves_rows():
    target = Island(np.array([1, 0]), np.array([0, 1, 2]), 4.0)
    donor = Island(np.array([0, 1]), np.array([2, 0, 1]))
    out = migrate_position(target, 1, donor, COLS)
    assert out.col_perm.tolist() == [1, 0, 2]
    assert out.row_perm.tolist() == [1, 0]
    assert out.cost is None


@settings(max_examples=300)
@given(st.integers(1, 12).flatmap(lambda k: st.tuples(perms(k), perms(k), st.integers(0, k - 1))))
def test_migrate_property(case):
    target, donor, p = case
    out = migrate_position(one_mode(target), p, one_mode(donor)).row_perm
    assert is_permutation(out, target.size)
    assert out[p] == donor[p]
    assert np.sum(out != target) in (0, 2)


def test_mutate_prob_zero_identity():
    rng = np.random.default_rng(0)
    island = Island(np.arange(5), np.arange(3), 1.0)
    for _ in range(50):
        out = mutate(island, 0.0, rng)
        assert out.row_perm.tolist() == list(range(5)) and out.cost == 1.0


def test_mutate_size_one_unchanged():
    out = mutate(one_mode([0]), 1.0, np.random.default_rng(0))
    assert out.row_perm.tolist() == [0]


@given(st.integers(2, 15), st.integers(0, 10**6))
def test_mutate_swaps_exactly_two(k, seed):
    island = Island(np.arange(k), np.arange(2), 3.0)
    out = mutate(island, 1.0, np.random.default_rng(seed))
    assert np.sum(out.row_perm != island.row_perm) == 2
    assert out.cost is None
    assert is_permutation(out.row_perm, k)


def test_mutate_column_mode():
    island = Island(np.arange(2), np.arange(6))
    out = mutate(island, 1.0, np.random.default_rng(1), COLS)
    assert np.sum(out.col_perm != np.arange(6)) == 2
    assert out.row_perm.tolist() == [0, 1]


# --- configuration ----------------------------------------------------------

@pytest.mark.parametrize("bad", [dict(pop_size=1), dict(generations=0), dict(mutation_prob=1.5),
                                 dict(swap_trial_rate=-0.1), dict(elite_count=0),
                                 dict(elite_count=30), dict(stagnation_window=-1), dict(seed=-3),
                                 dict(pop_size=2.5), dict(generations="ten")])
def test_config_validated(bad):
    with pytest.raises(ConfigError):
        BboConfig(**bad)


def test_config_round_trip():
    cfg = BboConfig(pop_size=12, seed=9)
    assert BboConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_substreams_independent_and_reproducible():
    a = substream(5, "migration", 0, 3).random(4)
    assert np.array_equal(a, substream(5, "migration", 0, 3).random(4))
    assert not np.array_equal(a, substream(5, "migration", 0, 4).random(4))
    assert not np.array_equal(a, substream(5, "mutation", 0, 3).random(4))


def test_resolve_threads(monkeypatch):
    monkeypatch.setenv("BANDCLUST_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(1) == 1
    assert resolve_threads(0) == 1


# --- run_bbo ----------------------------------------------------------------

def test_block_diagonal_input_stays_optimal():
    A = np.kron(np.eye(3), np.ones((1, 1))) * 4
    result = run_bbo(A, BboConfig(**FAST))
    assert result.best_cost == 0
    assert bandwidth_cost(A, result.best) == 0
    assert result.generations_run == 1


def test_anti_diagonal_solved():
    result = run_bbo([[0, 1], [1, 0]], BboConfig(pop_size=4, generations=10, seed=3))
    assert result.best_cost == 0


def test_empty_matrix_rejected():
    with pytest.raises(InputError):
        run_bbo(np.zeros((0, 3)))


def test_result_cost_matches_arrangement():
    A = np.random.default_rng(4).integers(0, 5, (9, 7))
    result = run_bbo(A, BboConfig(**FAST, seed=2))
    assert result.best_cost == bandwidth_cost(A, result.best)
    assert result.best_cost <= result.initial_cost == bandwidth_cost(A)
    assert np.all(np.diff(result.cost_trace) <= 0)
    assert len(result.cost_trace) == result.generations_run


def test_generation_invariants():
    A = np.random.default_rng(8).integers(0, 4, (10, 8))
    seen = []

    def check(state):
        assert check_population(state.population, A.shape)
        for isl in state.population:
            assert isl.cost == pytest.approx(bandwidth_cost(A, isl.arrangement()), abs=1e-9)
        assert state.best_cost == min(isl.cost for isl in state.population)
        seen.append(state.best_cost)

    result = run_bbo(A, BboConfig(**FAST, seed=1), threads=1, on_generation=check)
    assert seen == result.cost_trace


def test_stagnation_window_stops_early():
    A = np.random.default_rng(2).integers(0, 4, (6, 6))
    result = run_bbo(A, BboConfig(pop_size=6, generations=200, stagnation_window=3, seed=0))
    assert result.generations_run < 200
    tail = result.cost_trace[-4:]
    assert len(set(tail)) == 1


def test_deterministic_across_runs_and_threads():
    A = np.random.default_rng(11).integers(0, 6, (12, 9))
    cfg = BboConfig(**FAST, seed=21)
    docs = {run_bbo(A, cfg, threads=t).to_json() for t in (1, 1, 4)}
    assert len(docs) == 1


def test_seed_changes_search():
    A = np.random.default_rng(12).integers(0, 6, (12, 9))
    a = run_bbo(A, BboConfig(**FAST, seed=1), threads=1)
    b = run_bbo(A, BboConfig(**FAST, seed=2), threads=1)
    assert a.cost_trace != b.cost_trace or a.best != b.best


def test_solve_result_json_round_trip():
    A = np.random.default_rng(5).integers(0, 3, (5, 4))
    result = run_bbo(A, BboConfig(**FAST))
    doc = json.loads(result.to_json())
    assert "wall_time" not in doc
    assert "wall_time" in result.to_dict(include_timing=True)
    back = SolveResult.from_dict(doc)
    assert back.best == result.best and back.cost_trace == result.cost_trace
    assert BboConfig.from_dict(doc["config"]) == BboConfig(**FAST)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_run_bbo_small_shapes(m, n, seed):
    A = np.random.default_rng(seed).integers(0, 4, (m, n))
    result = run_bbo(A, BboConfig(pop_size=4, generations=5, seed=seed), threads=1)
    assert is_permutation(result.best.row_perm, m) and is_permutation(result.best.col_perm, n)
    assert result.best_cost == bandwidth_cost(A, result.best)
