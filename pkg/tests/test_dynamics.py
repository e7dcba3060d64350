import io
import math

import numpy as np
import pytest

from contactkit import contact as C
from contactkit.config import IntegratorConfig, Tolerances
from contactkit.dynamics import flow, monitor_invariants, pullback_check, reversed_field, rotation_numbers
from contactkit.errors import ChartExitError
from contactkit.geomcore import ScalarField
from contactkit.systems import builtin

D3 = builtin("darboux3")
HOPF = builtin("hopf_s3")
CANON = builtin("canonical_r1s0")
TWO_PI = 2 * math.pi


def test_darboux_reeb_translation():
    traj = flow(D3.vector_field(), [0, 0, 0], IntegratorConfig(t_end=1.0))
    assert np.allclose(traj.final, [0, 0, 1], atol=1e-9)
    assert traj.times[0] == 0.0 and traj.times[-1] == 1.0


def test_hopf_reeb_returns_after_two_pi():
    traj = flow(HOPF.vector_field(), [math.pi / 4, 0, 0], IntegratorConfig(t_end=TWO_PI))
    final = traj.final
    assert abs(final[0] - math.pi / 4) <= 1e-9
    assert np.allclose(np.remainder(final[1:] + 1, TWO_PI) - 1, 0, atol=1e-8)


def test_canonical_reeb_over_four_pi():
    traj = flow(CANON.vector_field(), [0, 0, 1.0], IntegratorConfig(t_end=4 * math.pi))
    assert traj.final[0] == pytest.approx(TWO_PI, abs=1e-8)
    assert traj.final[1] == pytest.approx(4 * math.pi, abs=1e-8)


def test_zero_time_gives_single_row():
    traj = flow(D3.vector_field(), [0.1, 0.2, 0.3], IntegratorConfig(t_end=0.0))
    assert traj.states.shape == (1, 3) and traj.x0.tolist() == [0.1, 0.2, 0.3]


def test_time_reversal():
    cfg = IntegratorConfig(t_end=5.0)
    X = C.HamiltonianField(ScalarField("cos(u)^2 + 0.1*sin(th1)", HOPF.coords), HOPF.contact)
    x0 = np.array([0.7, 0.3, 1.1])
    fwd = flow(X, x0, cfg)
    back = flow(reversed_field(X), fwd.final, cfg)
    assert np.max(np.abs(back.final - x0)) <= 10 * (cfg.rel_tol + cfg.abs_tol) * cfg.t_end


def test_drift_table():
    traj = flow(HOPF.vector_field(), [0.6, 0, 0], IntegratorConfig(t_end=10.0), {"u": HOPF.field("u")})
    assert traj.drift["u"] <= 1e-8
    table = monitor_invariants(traj, {"u": HOPF.field("u"), "th1": HOPF.field("th1")})
    assert table[0][0] == "th1" and table[0][1] == pytest.approx(10.0, abs=1e-8)
    xp = D3.vector_field("Xp")
    traj = flow(xp, [0, 1, 0], IntegratorConfig(t_end=1.0), {"p": D3.field("p")})
    assert traj.final[0] == pytest.approx(1.0, abs=1e-12)
    assert traj.drift["p"] <= 1e-12


def test_commuting_integral_is_conserved():
    # functions of p alone commute, and dp is semi-basic: p is an integral of X_f
    X = C.HamiltonianField(ScalarField("cos(p) + 0.5*p^3", D3.coords), D3.contact)
    traj = flow(X, [0.1, 0.4, -0.3], IntegratorConfig(t_end=10.0), {"p": D3.field("p")})
    assert traj.drift["p"] <= 1e-6


def test_chart_exit_reports_partial_trajectory():
    lo, hi = D3.chart.flow_bounds()
    with pytest.raises(ChartExitError) as ei:
        flow(D3.vector_field(), [0, 0, 0], IntegratorConfig(t_end=5.0), lower=lo, upper=hi)
    e = ei.value
    assert e.time == pytest.approx(1.8, abs=1e-8)
    assert e.trajectory.times[-1] <= e.time


def test_csv_format():
    traj = flow(D3.vector_field(), [0, 0, 0], IntegratorConfig(t_end=1.0, dense_output_stride=0.5))
    text = traj.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "t,x0,x1,x2"
    assert lines[1] == "0,0,0,0"
    assert lines[-1].startswith("1,0,0,")
    buf = io.StringIO()
    traj.to_csv(buf)
    assert buf.getvalue() == text


def test_pullback_translation_and_hopf():
    traj = flow(D3.vector_field(), [0.1, 0.2, 0.3], IntegratorConfig(t_end=1.0))
    assert pullback_check(D3.contact, D3.vector_field(), traj).verdict
    X = HOPF.vector_field()
    traj = flow(X, [0.9, 0.1, 0.2], IntegratorConfig(t_end=10.0))
    rep = pullback_check(HOPF.contact, X, traj)
    assert rep.status == "pass" and rep["pullback"].worst_residual <= 1e-6


def test_pullback_semibasic_hamiltonian():
    X = HOPF.vector_field("f1")
    traj = flow(X, [0.9, 0.1, 0.2], IntegratorConfig(t_end=10.0))
    rep = pullback_check(HOPF.contact, X, traj)
    assert rep.status == "pass"


def test_pullback_control_is_precondition_failure():
    X = D3.vector_field("z")
    traj = flow(X, [0.1, 0.2, 0.3], IntegratorConfig(t_end=1.0))
    rep = pullback_check(D3.contact, X, traj, tolerances=Tolerances())
    assert rep.status == "precondition_failed"
    assert rep["pullback"].worst_residual > 1e-2


def test_rotation_numbers():
    traj = flow(CANON.vector_field(), [0, 0, 1.0], IntegratorConfig(t_end=20.0))
    est = rotation_numbers(traj, [0, 1])
    assert np.allclose(est.omega, [0.5, 1.0], atol=1e-4) and est.linear
    traj = flow(HOPF.vector_field(), [0.5, 0, 0], IntegratorConfig(t_end=20.0))
    assert np.allclose(rotation_numbers(traj, [1, 2]).omega, [1, 1], atol=1e-4)
    traj = flow(D3.vector_field(), [0, 0, 0], IntegratorConfig(t_end=3.0))
    est = rotation_numbers(traj, [2])
    assert est.omega[0] == pytest.approx(1.0, abs=1e-12) and est.residual <= 1e-10


def test_rotation_numbers_invariant_under_initial_angle():
    oms = [
        rotation_numbers(flow(CANON.vector_field(), [a, b, 0.5], IntegratorConfig(t_end=20.0)), [0, 1]).omega
        for a, b in [(0, 0), (1.3, 4.0), (5.9, 2.2)]
    ]
    assert np.max(np.abs(np.array(oms) - oms[0])) <= 1e-4


def test_nonlinear_angle_is_flagged():
    # theta(t) = t + sin(2t)-like motion: the pendulum-ish field on (q,p,z), q flagged as an angle
    X = C.HamiltonianField(ScalarField("p^2/2 - cos(q)", D3.coords), D3.contact)
    traj = flow(X, [0.0, 1.0, 0.0], IntegratorConfig(t_end=10.0))
    assert not rotation_numbers(traj, [0]).linear


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=0)
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=-1)
