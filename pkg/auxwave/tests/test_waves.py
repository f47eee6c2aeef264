import numpy as np
import pytest

from auxwave.calculus import nth_derivative
from auxwave.catalog import catalog_case, case1_reduced
from auxwave.exceptions import NoBalanceError, ReductionError, UnboundCoefficientError
from auxwave.expr import XI, ZERO, expand, sub, subs
from auxwave.numeric import equal_numeric
from auxwave.parser import parse
from auxwave.waves import (
    Ansatz,
    PDEProblem,
    TravellingODE,
    b_equation,
    balance,
    compose,
    derive_system,
    lifted_derivatives,
    reduce_travelling,
    sample_pde,
    verify_solution,
)

MECHANICAL_B2 = "-c*mu*U_1 + c*mu^3*U_3 - mu*U*U_1 + 2*mu^3*U_1*U_2 - mu^3*U*U_3"


def test_mechanical_reduction_of_b_equation():
    ode = reduce_travelling(b_equation(-2), "mechanical")
    assert ode.expression == expand(parse(MECHANICAL_B2))
    assert ode.max_order == 3


def test_mechanical_reduction_of_advection():
    ode = reduce_travelling(PDEProblem(parse("u_t + u_x")), "mechanical")
    assert ode.expression == parse("mu*U_1 - c*mu*U_1")


def test_printed_reduction_only_for_b_minus_two():
    ode = reduce_travelling(b_equation(-2), "paper-eq8")
    assert ode.mode == "paper-eq8"
    with pytest.raises(ReductionError):
        reduce_travelling(b_equation(-1), "paper-eq8")


@pytest.mark.parametrize("mode", ["mechanical", "paper-eq8"])
def test_balance_of_b_equation(mode):
    result = balance(reduce_travelling(b_equation(-2), mode))
    assert result.order == 2
    assert result.candidates == (2,)


def test_balance_examples():
    assert balance(TravellingODE.from_text("U_2 + U^2")).order == 2
    with pytest.raises(NoBalanceError):
        balance(TravellingODE.from_text("U_2 + U"))
    ode = TravellingODE.from_text("U_2 + U^2")
    assert balance(ode, override=3).order == 3
    with pytest.raises(NoBalanceError):
        balance(ode, override=0)


def test_top_coefficient_of_quadratic_term():
    aux, _ = catalog_case(4)
    system = derive_system(TravellingODE.from_text("-mu*U*U_1"), Ansatz(2), aux)
    assert system.unknowns == ("g0", "g1", "g2")
    assert len(system.equations) == 6
    assert expand(system.equations[5]) == expand(parse("-2*mu*g2^2*B"))


@pytest.mark.parametrize("mode", ["mechanical", "paper-eq8"])
def test_top_of_b_equation_system(mode):
    aux, _ = catalog_case(4)
    ode = reduce_travelling(b_equation(-2), mode)
    system = derive_system(ode, Ansatz(2), aux)
    assert len(system.equations) == 8
    assert expand(system.equations[7]) == ZERO
    derived = parse("10*mu^3*g2*B*(g2*A*B - g1*B^2)")
    assert expand(sub(system.equations[6], derived)) == ZERO


def test_zero_ansatz_gives_zero_system():
    aux, _ = catalog_case(1)
    system = derive_system(reduce_travelling(b_equation(-2)), Ansatz(2), aux)
    zero = {"g0": 0, "g1": 0, "g2": 0}
    assert all(expand(subs(e, zero)) == ZERO for e in system.equations)


def test_lifted_derivative_follows_aux():
    aux, _ = catalog_case(4)
    first = lifted_derivatives(parse("z"), aux, 1)[1]
    assert first == expand(parse("A*z + B*z^2"))


@pytest.mark.parametrize(
    ("index", "c1"),
    [(1, 3), (2, 3), (4, 5)],
)
def test_system_reconstructs_the_ode(index, c1):
    aux, aux_sol = catalog_case(index)
    ode = reduce_travelling(b_equation(-2))
    system = derive_system(ode, Ansatz(2), aux)
    z = subs(aux_sol.z, {"C1": c1})

    u = parse("g0 + g1*z + g2*z^2")
    u = subs(u, {"z": z})
    table = {f"U_{m}": nth_derivative(u, XI, m) for m in range(1, 4)}
    table["U"] = u
    direct = subs(ode.expression, table)
    collected = system.reconstruct(z)

    rng = np.random.default_rng(index)
    n = 100
    samples = {
        "xi": rng.uniform(-0.5, 0.5, n),
        "g0": rng.uniform(-1, 1, n),
        "g1": rng.uniform(-1, 1, n),
        "g2": rng.uniform(-1, 1, n),
        "c": rng.uniform(0.5, 1.5, n),
        "mu": rng.uniform(0.5, 1.5, n),
        "A": rng.uniform(0.5, 1.5, n),
        "B": rng.uniform(-1, 1, n),
    }
    assert equal_numeric(collected, direct, samples, tol=1e-8)


def test_compose_needs_every_coefficient():
    _, aux_sol = catalog_case(4)
    with pytest.raises(UnboundCoefficientError):
        compose({"g0": 1, "g2": 1}, aux_sol, 1, 1, order=2)


def test_constant_solution_has_zero_residual():
    ode = reduce_travelling(b_equation(-2))
    _, aux_sol = catalog_case(4)
    sol = compose({"g0": 3}, aux_sol, 1, 1, order=0)
    report = verify_solution(ode, sol, {}, (-1, 1), 21, 1e-12)
    assert report.passed and report.max_abs == 0


def test_reduced_case1_travelling_wave():
    ode = reduce_travelling(b_equation(-2))
    _, aux_sol = case1_reduced()
    bound_z = subs(aux_sol.z, {"B": 1, "C1": 1})
    assert equal_numeric(bound_z, parse("1/(-1 + exp(-xi))"), {"xi": np.linspace(0.5, 2, 7)})
    sol = compose({"g0": 0, "g1": 1, "g2": 1}, aux_sol, 0, 1)
    bound = {"B": 1, "C1": 1}
    report = verify_solution(ode, sol, bound, (-5, 5), 101, 1e-6)
    assert report.passed
    pde = verify_solution(b_equation(-2), sol, bound, (1, 5), 21, 1e-5, t_points=3)
    assert pde.passed


def test_sample_pde_rows():
    _, aux_sol = catalog_case(4)
    sol = compose({"g0": 0, "g1": 1}, aux_sol, 2, 1)
    rows, excluded = sample_pde(sol, {"A": 1, "B": -1, "C1": 1}, (-1, 1), 5, (0, 1), 3)
    assert len(rows) + len(excluded) == 15
    assert [(r.x, r.t) for r in rows[:3]] == [(-1.0, 0.0), (-1.0, 0.5), (-1.0, 1.0)]
    first = rows[0]
    # u(x, t) = z(mu*(x - c*t)) with the logistic z
    assert first.re == pytest.approx(1 / (1 + np.exp(1)))
