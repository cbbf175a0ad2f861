"""Branch solving, section systems, and the tennis-ball product formulas."""
import random

import pytest

from pathfence.appell import appell_data, counts_for
from pathfence.boundary import (
    Boundary,
    StepShape,
    make_arithmetic,
    make_staircase,
    make_tennis,
)
from pathfence.converter import (
    _det_field,
    _solve_branch_reference,
    all_branches,
    alternant_check,
    assemble_ogf,
    ogf_series,
    section_gfs,
    solve_branch_zero,
    tennis_catalan_product,
    tennis_q0_product,
)
from pathfence.errors import (
    DomainError,
    InsufficientOrder,
    PreconditionViolated,
)
from pathfence.rings import CycloNum, rat
from pathfence.series import RamifiedSeries, TruncatedSeries


def _pinned_base(l, order):
    return (TruncatedSeries([1, -1], order) ** l).truncate(order)


def test_branch_solver_agrees_with_reference():
    for k, l in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        order = 10
        h = _pinned_base(l, order)
        fast = solve_branch_zero(h, k, order)
        slow = _solve_branch_reference(h, k, order)
        assert fast == slow


def test_branch_solver_geometric_base():
    order = 9
    h = TruncatedSeries([1] * (order + 1), order)
    fast = solve_branch_zero(h, 2, order)
    slow = _solve_branch_reference(h, 2, order)
    assert fast == slow


def test_branch_satisfies_defining_equation():
    order = 12
    h = _pinned_base(2, order)
    tau = solve_branch_zero(h, 3, order)
    lhs = (tau ** 3) * tau.compose_truncated(h)
    res = lhs - RamifiedSeries.u_power(3, 3, lhs.top)
    assert res.is_known_zero()


def test_branch_k1_inverts_t_times_base():
    # For k = l = 1, tau solves z = t(1-t), so tau is the Catalan-flavored
    # inverse: tau = z + z^2 + 2 z^3 + 5 z^4 + ...
    h = _pinned_base(1, 8)
    tau = solve_branch_zero(h, 1, 8)
    zs = tau.z_series()
    assert list(zs.coeffs)[1:7] == [1, 1, 2, 5, 14, 42]


def test_branch_guards():
    h = _pinned_base(1, 6)
    with pytest.raises(PreconditionViolated):
        solve_branch_zero(h, 0, 4)
    with pytest.raises(PreconditionViolated):
        solve_branch_zero(h, 2, 0)
    with pytest.raises(PreconditionViolated):
        solve_branch_zero(TruncatedSeries([2, 1], 4), 1, 3)
    with pytest.raises(InsufficientOrder):
        solve_branch_zero(_pinned_base(1, 3), 2, 10)


def test_all_branches_twists_and_verifies():
    k = 3
    order = 9
    h = _pinned_base(1, order)
    tau0 = solve_branch_zero(h, k, order)
    bset = all_branches(tau0, k, h)
    assert bset.k == k
    assert len(bset.branches) == k
    assert bset.branches[0] == tau0
    zeta = CycloNum.zeta(k)
    tm = bset.branches[1]
    for i in range(1, order + 1):
        want = CycloNum.from_rational(k, tau0.coefficient(i)) * zeta ** i
        assert tm.coefficient(i) == want


def test_all_branches_ram_mismatch():
    h = _pinned_base(1, 6)
    tau0 = solve_branch_zero(h, 2, 6)
    with pytest.raises(PreconditionViolated):
        all_branches(tau0, 3, h)


def _check_sections(bnd, shape, sigma, q_max):
    data = appell_data(bnd, 1, shape, sigma)
    k = data.height
    r = data.prefix_len
    counts = counts_for(bnd, r + k * q_max + k - 1, shape, sigma)
    gfs = section_gfs(data, q_max)
    assert gfs.height == k
    assert gfs.prefix_len == r
    for j, sec in enumerate(gfs.sections):
        for q in range(q_max + 1):
            assert sec.coefficient(q) == counts[r + q * k + j]


def test_sections_lattice_small_heights():
    _check_sections(make_arithmetic(1, 1), None, None, 6)
    _check_sections(make_tennis(2, 2), None, None, 5)
    _check_sections(make_tennis(3, 1), None, None, 3)
    _check_sections(Boundary([2], [0, 1]), None, None, 4)


def test_sections_weighted():
    _check_sections(make_arithmetic(1, 1), StepShape(1, 1), rat(1), 5)
    _check_sections(make_staircase("3/2"), StepShape(1, 2), rat("1/2"), 3)


def test_sections_need_numeric_weight():
    data = appell_data(make_arithmetic(1, 1), 1, StepShape(1, 1), None)
    with pytest.raises(DomainError):
        section_gfs(data, 3)


def test_assemble_ogf_round_trip():
    bnd = make_tennis(2, 1)
    data = appell_data(bnd, 1)
    gfs = section_gfs(data, 4)
    ogf = assemble_ogf(gfs, data.prefix_counts)
    table = counts_for(bnd, ogf.order)
    assert list(ogf.coeffs) == table


def test_assemble_ogf_prefix_mismatch():
    bnd = make_tennis(2, 2)
    data = appell_data(bnd, 1)
    gfs = section_gfs(data, 3)
    with pytest.raises(PreconditionViolated):
        assemble_ogf(gfs, [])


def test_ogf_series_lattice():
    for bnd in [make_arithmetic(2, 3), make_tennis(2, 1), Boundary([1], [0, 1])]:
        got = ogf_series(bnd, 11)
        assert list(got.coeffs) == counts_for(bnd, 11)


def test_ogf_series_weighted():
    bnd = make_arithmetic(1, 1)
    shape = StepShape(1, 1)
    got = ogf_series(bnd, 8, shape, rat(1))
    assert list(got.coeffs) == counts_for(bnd, 8, shape, rat(1))


def test_tennis_q0_product_small_cases():
    # Coefficient q of the product is the count at index 1 + k*q in the
    # original tennis indexing, prefix term included.
    for k, l in [(1, 1), (2, 1), (2, 2), (3, 1)]:
        order = 4
        prod = tennis_q0_product(k, l, order)
        table = counts_for(make_tennis(k, l), 1 + k * order)
        for q in range(order + 1):
            assert prod.coefficient(q) == table[1 + k * q]


def test_tennis_q0_product_pinned_square_case():
    prod = tennis_q0_product(2, 2, 5)
    assert list(prod.coeffs) == [1, 6, 53, 554, 6362, 77580]


def test_tennis_catalan_product_matches_general():
    for k in (1, 2, 3):
        order = 4
        a = tennis_catalan_product(k, order)
        b = tennis_q0_product(k, k, order)
        assert list(a.coeffs) == list(b.coeffs)


def test_tennis_product_guards():
    with pytest.raises(PreconditionViolated):
        tennis_q0_product(0, 1, 3)
    with pytest.raises(PreconditionViolated):
        tennis_q0_product(1, 0, 3)
    with pytest.raises(PreconditionViolated):
        tennis_catalan_product(0, 3)


def test_det_field_small_matrices():
    assert _det_field([[rat(1)]]) == 1
    assert _det_field([[rat(1), rat(2)], [rat(3), rat(4)]]) == -2
    assert _det_field([[rat(1), rat(2)], [rat(2), rat(4)]]) == 0


def test_alternant_identity_on_randoms():
    rng = random.Random(333)
    for k in range(1, 6):
        for _ in range(10):
            pts = set()
            while len(pts) < k:
                val = rat(rng.randint(-30, 30)) / rng.randint(1, 7)
                if val != 1:
                    pts.add(val)
            assert alternant_check(sorted(pts))


def test_alternant_guards():
    with pytest.raises(PreconditionViolated):
        alternant_check([])
    with pytest.raises(PreconditionViolated):
        alternant_check([rat(2), rat(2)])
    with pytest.raises(PreconditionViolated):
        alternant_check([rat(1), rat(2)])
