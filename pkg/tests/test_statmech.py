import math
import random

import pytest

from statindex.statmech import (
    ConvergenceError,
    LevelSystem,
    TailBoundError,
    bose_geometric_sum,
    correspondence_check,
    grand_ensemble,
    level_partition,
    log_level_partition,
    occupation,
    occupation_by_derivative,
)

LN2 = math.log(2.0)


def test_level_partition_closed_forms():
    assert abs(level_partition("BE", LN2) - 2.0) < 1e-15
    assert level_partition("FD", LN2) == 1.5
    with pytest.raises(ConvergenceError):
        level_partition("BE", 0.0)
    with pytest.raises(ConvergenceError):
        level_partition("BE", -1.0)


def test_occupation_closed_forms():
    assert abs(occupation("BE", LN2) - 1.0) < 1e-15
    assert abs(occupation("FD", LN2) - 1.0 / 3.0) < 1e-16
    assert occupation("FD", 0.0) == 0.5
    assert occupation("MB", 2.0) == math.exp(-2.0)
    with pytest.raises(ConvergenceError):
        occupation("BE", 0.0)


def test_occupation_by_derivative_matches_closed_forms():
    assert abs(occupation_by_derivative("FD", LN2, 1e-6) - 1.0 / 3.0) < 1e-10
    assert abs(occupation_by_derivative("BE", 1.0, 1e-6) - 1.0 / (math.e - 1.0)) < 1e-9
    assert abs(occupation_by_derivative("MB", 2.0, 1e-6) - math.exp(-2.0)) < 1e-9
    with pytest.raises(ConvergenceError):
        occupation_by_derivative("BE", 1e-7, 1e-6)


def test_derivative_converges_at_second_order():
    # halving h divides the error by about 4
    for stat, x in (("FD", LN2), ("BE", 1.0), ("MB", 0.7)):
        exact = occupation(stat, x)
        err_h = abs(occupation_by_derivative(stat, x, 1e-2) - exact)
        err_half = abs(occupation_by_derivative(stat, x, 5e-3) - exact)
        ratio = err_h / err_half
        assert 3.8 <= ratio <= 4.2


def test_fd_particle_hole_symmetry():
    for x in (-3.0, -0.5, 0.0, 0.2, 1.7, 10.0):
        assert abs(occupation("FD", x) + occupation("FD", -x) - 1.0) <= 1e-14


def test_statistics_ordering():
    rng = random.Random(20260810)
    for _ in range(50):
        x = rng.uniform(0.05, 8.0)
        be = occupation("BE", x)
        mb = occupation("MB", x)
        fd = occupation("FD", x)
        assert be > mb > fd


def test_grand_ensemble_fd_singleton():
    system = LevelSystem(levels=(LN2,), mu=0.0, beta=1.0, statistics="FD")
    report = grand_ensemble(system)
    assert report.xi == 1.5
    assert abs(report.per_level_occupation[0] - 1.0 / 3.0) < 1e-16
    assert abs(report.omega - (-math.log(1.5))) < 1e-15
    assert report.system.temperature == 1.0


def test_grand_ensemble_be_two_identical_levels():
    system = LevelSystem(levels=(LN2, LN2), mu=0.0, beta=1.0, statistics="BE")
    report = grand_ensemble(system)
    assert abs(report.xi - 4.0) < 1e-14
    assert abs(report.mean_particle_number - 2.0) < 1e-14


def test_be_maxwell_boltzmann_regime():
    deviation = abs(occupation("BE", 20.0) / math.exp(-20.0) - 1.0)
    assert deviation <= 3e-9


def test_be_convergence_error_names_level():
    with pytest.raises(ConvergenceError, match="level 1"):
        LevelSystem(levels=(1.0, 0.5), mu=0.5, beta=1.0, statistics="BE")


def test_log_domain_consistency():
    rng = random.Random(5)
    levels = tuple(rng.uniform(0.2, 4.0) for _ in range(200))
    system = LevelSystem(levels=levels, mu=0.0, beta=1.3, statistics="FD")
    report = grand_ensemble(system)
    direct = math.fsum(
        log_level_partition("FD", x) for x in system.thermo_arguments()
    )
    assert report.log_xi == direct


def test_beta_mu_kb_parameterization():
    # x = beta*(eps - mu) no matter what kB is; temperature folds kB in
    system = LevelSystem(levels=(2.0,), mu=0.5, beta=2.0, statistics="FD", kB=3.0)
    assert system.thermo_arguments() == (3.0,)
    assert system.sheaf_arguments() == (1.5,)
    assert system.chern_roots() == (-3.0,)
    assert abs(system.temperature - 1.0 / 6.0) < 1e-16


def test_bose_geometric_sum_tail_bound():
    value, terms, tail = bose_geometric_sum(-LN2, tol=1e-13)
    assert abs(value - 2.0) < 1e-12
    assert tail <= 1e-13
    assert terms < 60
    with pytest.raises(TailBoundError):
        bose_geometric_sum(-1e-9, tol=1e-13, max_terms=1000)


def test_correspondence_fermion_singleton():
    system = LevelSystem(levels=(LN2,), mu=0.0, beta=1.0, statistics="FD")
    report = correspondence_check(system)
    assert report.ok
    assert report.character_values[0] == report.ensemble_values[0] == 1.5
    assert abs(report.series_values[0] - 1.5) < 1e-15


def test_correspondence_boson_singleton():
    system = LevelSystem(levels=(LN2,), mu=0.0, beta=1.0, statistics="BE")
    report = correspondence_check(system, tol=1e-12)
    assert report.ok
    assert abs(report.character_values[0] - 2.0) < 1e-13


def test_correspondence_three_boson_levels():
    system = LevelSystem(levels=(1.0, 2.0, 3.0), mu=0.0, beta=1.0, statistics="BE")
    report = correspondence_check(system, tol=1e-12)
    assert report.ok
    assert report.max_relative_deviation <= 1e-12


def test_correspondence_rejects_mb():
    system = LevelSystem(levels=(1.0,), mu=0.0, beta=1.0, statistics="MB")
    with pytest.raises(ValueError):
        correspondence_check(system)


def test_level_system_validation():
    with pytest.raises(ValueError):
        LevelSystem(levels=(1.0,), mu=0.0, beta=0.0, statistics="FD")
    with pytest.raises(ValueError):
        LevelSystem(levels=(1.0,), mu=0.0, beta=1.0, statistics="XX")


def test_ensemble_report_json():
    system = LevelSystem(levels=(LN2,), mu=0.0, beta=1.0, statistics="FD")
    data = grand_ensemble(system).to_json_dict()
    assert data["xi"] == 1.5
    assert len(data["per_level"]) == 1
    rows = grand_ensemble(system).csv_rows()
    assert rows[0][0] == "level"
    assert len(rows) == 2
