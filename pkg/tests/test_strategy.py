import pytest
from hypothesis import given, settings

from corelab.auction import run_auction
from corelab.errors import ContractViolation, UsageError
from corelab.hardness import build_mbsbm, complete_graph_k4
from corelab.market import Market, Outcome, PriceVector
from corelab.strategy import (
    BACKWARD,
    FORWARD,
    MAX_PRICE,
    TERMINAL,
    Verdict,
    WalkGraph,
    auction_mechanism,
    format_walk,
    general_position_check,
    ic_counterexample,
    ic_market,
    misreport_experiment,
    solver_mechanism,
    walk_weight,
)

from helpers import SINGLE_EXCLUSION, markets


def test_single_bidder_in_general_position():
    """With v=3, b=5 the two walks weigh 0 and 2."""
    res = general_position_check(Market([[3]], [5]))
    assert res.verdict is Verdict.TRUE
    assert res.walks_enumerated == 2


def test_equal_budgets_break_general_position():
    m = Market([[10, 10], [10, 10], [10, 10]], [1, 1, 1])
    res = general_position_check(m)
    assert res.verdict is Verdict.FALSE
    a, b = res.witness
    assert a[0][1] == b[0][1]
    assert walk_weight(a) == walk_weight(b)
    assert a[-1][:3] != b[-1][:3]


def test_witness_walks_are_well_formed():
    res = general_position_check(SINGLE_EXCLUSION)
    assert res.verdict is Verdict.FALSE
    for walk in res.witness:
        kinds = [e[0] for e in walk]
        assert kinds[-1] in (MAX_PRICE, TERMINAL)
        assert all(k == (FORWARD if n % 2 == 0 else BACKWARD) for n, k in enumerate(kinds[:-1]))
        assert len({e[:3] for e in walk}) == len(walk)
        assert "bidder 1" in format_walk(walk)


def test_gadget_market_not_in_general_position():
    gm = build_mbsbm(complete_graph_k4(), 1)
    assert general_position_check(gm.market).verdict is Verdict.FALSE


def test_bounded_enumeration_is_inconclusive():
    m = Market([[1, 2], [3, 5]], [7, 11])
    res = general_position_check(m, max_walks=3)
    assert res.verdict is Verdict.UNKNOWN_WITHIN_BOUND
    with pytest.raises(UsageError):
        general_position_check(m, max_len=1)
    with pytest.raises(TypeError):
        bool(res)


def test_walk_graph_edge_count():
    g = WalkGraph(SINGLE_EXCLUSION)
    assert g.edge_count() == 3 * 3 * 2 + 3
    assert g.backward(1, 0) == [(BACKWARD, 1, 1, 0), (BACKWARD, 1, 2, 10)]


@settings(max_examples=150, deadline=None)
@given(markets(max_n=3, max_m=3, max_value=30, max_budget=30))
def test_general_position_limits_conflicts(market):
    """Exhaustively in general position implies single-bidder conflicts and single exclusions."""
    res = general_position_check(market)
    if res.verdict is not Verdict.TRUE:
        return
    out = run_auction(market)
    for row in out.step3_events:
        assert len(row.conflict) == 1
        assert len(row.excluded) == 1


@pytest.mark.parametrize("mechanism", [auction_mechanism, solver_mechanism], ids=["auction", "solver"])
def test_ic_counterexample(mechanism):
    report = ic_counterexample(mechanism)
    assert report.manipulator == 0
    assert report.truthful_utility == 0
    assert report.deviating_utility == 9
    assert tuple(report.deviating_prices) == (1, 1)
    assert report.experiment.gain == 9
    assert "budget 2" in report.describe()


def test_misreport_truthful_is_neutral():
    res = misreport_experiment(ic_market(), 1)
    assert res.gain == 0
    assert res.description == "bidder 2 reports truthfully"


def test_misreport_overbid_can_backfire():
    """Overstating the budget wins a good priced above the true budget: utility -inf."""
    m = Market([[10], [10]], [1, 5])
    res = misreport_experiment(m, 0, reported_budget=9)
    assert res.deviating_utility == float("-inf")
    assert res.gain == float("-inf")


def test_non_core_mechanism_is_rejected():
    def nobody_wins(market):
        return Outcome((0,) * market.n, PriceVector(market.reserves))

    with pytest.raises(ContractViolation):
        misreport_experiment(ic_market(), 0, mechanism=nobody_wins)
