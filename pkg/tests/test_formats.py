import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxcon import (
    Graph,
    Instance,
    ParseError,
    TwoSatFormula,
    brute_force_oracle,
    clique_to_maxcon,
    generate_random,
    grouped_search,
    parse_cnf2,
    parse_graph,
    parse_instance,
    write_instance,
)
from maxcon.formats import (
    certificate_to_dict,
    format_scalar,
    parse_scalar,
    result_to_dict,
    write_cnf2,
    write_graph,
)
from maxcon.reductions import verify_clique

MINIMAL = '{"d": 1, "epsilon": "1/2", "points": [{"a": ["1"], "b": "0"}]}'


def test_minimal_instance_round_trip():
    inst = parse_instance(MINIMAL)
    assert inst.epsilon == Fraction(1, 2) and inst.exact
    text = write_instance(inst)
    assert write_instance(parse_instance(text)) == text
    assert parse_instance(text) == inst


@pytest.mark.parametrize(
    "bad, where",
    [
        ('{"d": 1, "epsilon": "1/-2", "points": [{"a": ["1"], "b": "0"}]}', "$.epsilon"),
        ('{"d": 1, "epsilon": "1/0", "points": [{"a": ["1"], "b": "0"}]}', "$.epsilon"),
        ('{"d": 2, "epsilon": "1", "points": [{"a": ["1"], "b": "0"}]}', "$.points[0].a"),
        ('{"d": 1, "epsilon": "1", "points": [{"a": ["x"], "b": "0"}]}', "$.points[0].a[0]"),
        ('{"d": 1, "epsilon": "1", "points": [{"a": [1], "b": "0"}]}', "$.points[0].a[0]"),
        ('{"d": 1, "epsilon": "-1", "points": [{"a": ["1"], "b": "0"}]}', "$.epsilon"),
        ('{"d": 1, "epsilon": "1", "points": []}', "$.points"),
        ('{"d": 0, "epsilon": "1", "points": [{"a": [], "b": "0"}]}', "$.d"),
        ('{"d": 1, "epsilon": "1", "mode": "fuzzy", "points": [{"a": ["1"], "b": "0"}]}', "$.mode"),
        ('{"d": 1, "epsilon": "1", "mode": "float", "points": [{"a": ["1e400"], "b": "0"}]}', "$.points[0].a[0]"),
        ('{"format_version": 2, "d": 1, "epsilon": "1", "points": [{"a": ["1"], "b": "0"}]}', "$.format_version"),
        ('{"d": 1,\n "epsilon": }', "line 2"),
    ],
)
def test_instance_errors_are_positioned(bad, where):
    with pytest.raises(ParseError) as exc:
        parse_instance(bad)
    assert exc.value.where.startswith(where)


def test_decimal_is_exact():
    assert parse_scalar("0.1", "exact", "x") == Fraction(1, 10)
    assert parse_scalar("-2.5e-1", "exact", "x") == Fraction(-1, 4)
    assert parse_scalar("3/6", "float", "x") == 0.5
    assert format_scalar(Fraction(-3, 6)) == "-1/2"
    assert format_scalar(Fraction(4)) == "4"


def test_float_round_trip_byte_identical():
    inst = generate_random(10, 3, 0.7, seed=4)
    text = write_instance(inst)
    again = parse_instance(text)
    assert again.points == inst.points
    assert write_instance(again) == text


def test_clique_instance_file_reparse_same_optimum():
    inst, _, _ = clique_to_maxcon(Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)]), 3)
    text = write_instance(inst)
    assert len(json.loads(text)["points"]) == 27
    back = parse_instance(text)
    assert back == inst
    # N = 27 is past the oracle's guard; use the exact grouped search
    assert grouped_search(back).consensus == grouped_search(inst).consensus == 6


fractions_st = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)


@given(
    st.integers(1, 3).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.tuples(st.lists(fractions_st, min_size=d, max_size=d), fractions_st), min_size=1, max_size=6),
            fractions_st.map(abs),
        )
    )
)
def test_exact_round_trip_property(data):
    d, rows, eps = data
    inst = Instance.build([r[0] for r in rows], [r[1] for r in rows], eps, exact=True)
    text = write_instance(inst)
    assert parse_instance(text) == inst
    assert write_instance(parse_instance(text)) == text


def test_parse_graph_triangle_and_dedup():
    g = parse_graph("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert g == Graph.from_edges(3, [(1, 2), (2, 3), (1, 3)])
    g = parse_graph("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n")
    assert len(g.edges) == 1
    assert parse_graph(write_graph(g)) == g


@pytest.mark.parametrize(
    "bad",
    [
        "p edge 3 1\ne 1 1\n",
        "p edge 3 1\ne 1 4\n",
        "e 1 2\n",
        "",
        "p edge 3 1\nq 1 2\n",
        "p edge x 1\n",
        "p edge 3 1\ne 1\n",
    ],
)
def test_parse_graph_errors(bad):
    with pytest.raises(ParseError):
        parse_graph(bad)


def test_parse_cnf2():
    f = parse_cnf2("c demo\np cnf 2 1\n1 2 0\n")
    assert f == TwoSatFormula(2, (((1, False), (2, False)),))
    f = parse_cnf2("p cnf 1 1\n1 -1 0\n")
    assert f.clauses == (((1, False), (1, True)),)
    # clauses may span lines
    f = parse_cnf2("p cnf 3 2\n1 -2\n0 3 3 0\n")
    assert f.num_clauses == 2
    assert parse_cnf2(write_cnf2(f)) == f


@pytest.mark.parametrize(
    "bad", ["p cnf 3 1\n1 2 3 0\n", "p cnf 3 1\n1 0\n", "p cnf 2 1\n1 3 0\n", "1 2 0\n", "p cnf 2 1\n1 2\n", "p cnf 2 1\n1 a 0\n"]
)
def test_parse_cnf2_errors(bad):
    with pytest.raises(ParseError):
        parse_cnf2(bad)


def test_result_and_certificate_json():
    inst = parse_instance('{"d": 1, "epsilon": "1/2", "points": [{"a": ["1"], "b": "0"}, {"a": ["1"], "b": "5"}]}')
    res = brute_force_oracle(inst)
    out = result_to_dict(res, "oracle")
    assert out["inliers"] == [1] and out["consensus"] == 1
    json.dumps(out)
    cert = certificate_to_dict(verify_clique(Graph.from_edges(2, [(1, 2)]), 2))
    assert cert["verdict"] is True and cert["threshold_used"] == "1/8"
    json.dumps(cert)
