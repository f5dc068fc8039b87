import numpy as np
import pytest

from nakajima_bundles.point_rep import PointRep, StabilityParams, moment_complex
from nakajima_bundles.quiver import Label, a2_quiver, jordan_quiver, star_quiver
from nakajima_bundles.solver import (SolverConfig, kempf_ness_flow, numerical_rank, project_complex, solve,
                                     stabilizer_dimension, tangent_dimension)

A2, R11 = a2_quiver(), Label((1, 1))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tolerance_mu=0)
    with pytest.raises(ValueError):
        SolverConfig(rank_tolerance=1.0)


def test_project_fixed_point_unchanged(rng):
    p = PointRep(A2, R11, {"a": [[1]]}, {"a": [[0]]})
    proj = project_complex(p)
    assert proj.converged and np.array_equal(proj.point.to_vector(), p.to_vector())
    q, l = jordan_quiver(), Label((1,))
    pj = PointRep(q, l, {"a": [[1]]}, {"a": [[1]]})
    assert np.array_equal(project_complex(pj).point.to_vector(), pj.to_vector())


def test_project_a2():
    p = PointRep(A2, R11, {"a": [[1]]}, {"a": [[1]]})
    proj = project_complex(p)
    assert proj.converged
    pt = proj.point
    assert abs(pt.x["a"][0, 0] * pt.y["a"][0, 0]) < 1e-8


def test_project_random_star(rng):
    q, l = star_quiver(), Label((2, 1, 1))
    proj = project_complex(PointRep.random(q, l, rng))
    assert proj.converged
    assert max(np.linalg.norm(m) for m in moment_complex(proj.point).values()) <= 1e-8


def test_solve_a2_oracle():
    sp = StabilityParams((1, 1), (1.0, -1.0))
    res = solve(A2, R11, sp)
    assert res.converged and res.iterations < 10000
    assert res.residual_real < 1e-8 and res.residual_complex < 1e-8
    assert tangent_dimension(res) == 0
    assert res.stabilizer_dimension == 1  # the diagonal scalars act trivially


def test_solve_from_start_other_orientation():
    p = PointRep(A2, R11, {"a": [[2]]}, {"a": [[0]]})
    res = solve(A2, R11, StabilityParams((1, 1), (-1.0, 1.0)), start=p)
    assert res.converged
    assert abs(abs(res.point.x["a"][0, 0]) - 1) < 1e-8


def test_obstructed_level_not_converged():
    res = solve(A2, R11, StabilityParams((1, 1), (1.0, 1.0)), SolverConfig(max_iterations=2000))
    assert not res.converged
    with pytest.raises(ValueError):
        tangent_dimension(res)


def test_flow_reports_converged_at_solution():
    p = PointRep(A2, R11, {"a": [[0]]}, {"a": [[1]]})
    res = kempf_ness_flow(p, StabilityParams((1, 1), (1.0, -1.0)), SolverConfig())
    assert res.converged and res.iterations == 0


def test_jordan_rank_one_dimension():
    # mu_R and mu_C vanish identically, so the level set is all of C^2 (real 4)
    q, l = jordan_quiver(), Label((1,))
    res = solve(q, l, StabilityParams((1,), (0.0,)))
    assert res.converged and tangent_dimension(res) == 4
    assert stabilizer_dimension(res.point) == 1


def test_star_solution_frozen():
    q, l = star_quiver(), Label((2, 1, 1))
    res = solve(q, l, StabilityParams((1, 1, 1), (1.0, -1.0, -1.0)))
    assert res.converged
    assert tangent_dimension(res) == 0


def test_numerical_rank():
    a = np.diag([1.0, 1e-3, 1e-12])
    assert numerical_rank(a, 1e-8)[0] == 2
    assert numerical_rank(np.zeros((2, 2)), 1e-8)[0] == 0
