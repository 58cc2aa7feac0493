import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import table
from sentirank.aggregation import ArticleStats, AuthorProfile
from sentirank.errors import AnalysisError, InputError
from sentirank.metrics import (
    AuthorNetwork,
    EdgeWeight,
    aif,
    build_author_network,
    canonical_metric,
    compute_metric,
    h_index,
    network_to_dot,
    pagerank,
    s_aif,
    sh_index,
)


def profile(np_, nc, snc):
    return AuthorProfile("x", frozenset(f"P{i}" for i in range(np_)), nc, snc)


class TestImpactFactor:
    @pytest.mark.parametrize("np_,nc,snc,want_aif,want_saif", [
        (4, 490, 8.625, 122.50, 2.15625),
        (1, 434, 62.125, 434.0, 62.125),
        (3, 0, 0.0, 0.0, 0.0),
    ])
    def test_values(self, np_, nc, snc, want_aif, want_saif):
        p = profile(np_, nc, snc)
        assert abs(aif(p) - want_aif) <= 1e-9
        assert abs(s_aif(p) - want_saif) <= 1e-9

    def test_three_significant_figures(self):
        assert f"{s_aif(profile(4, 490, 8.625)):.3g}" == "2.16"

    def test_zero_publications(self):
        with pytest.raises(AnalysisError):
            aif(profile(0, 0, 0.0))
        with pytest.raises(AnalysisError):
            s_aif(profile(0, 0, 0.0))


def h_oracle(counts):
    return max([h for h in range(len(counts) + 1) if sum(c >= h for c in counts) >= h])


def sh_oracle(scores):
    ranked = sorted(scores, reverse=True)
    return max([s for s in range(len(ranked) + 1) if all(v >= s for v in ranked[:s])])


class TestHirsch:
    @pytest.mark.parametrize("counts,h", [([], 0), ([6, 5, 4, 3, 2, 1], 3), ([10, 10, 10], 3), ([0, 0], 0)])
    def test_h_examples(self, counts, h):
        assert h_index(counts) == h

    @pytest.mark.parametrize("scores,s", [([-1.0], 0), ([3.5, 2.1, 0.5], 2), ([], 0), ([1.0], 1)])
    def test_sh_examples(self, scores, s):
        assert sh_index(scores) == s

    @given(st.lists(st.integers(0, 30), max_size=25))
    def test_h_matches_definition(self, counts):
        assert h_index(counts) == h_oracle(counts)

    @given(st.lists(st.floats(-20, 20, allow_nan=False), max_size=25))
    def test_sh_matches_definition(self, scores):
        assert sh_index(scores) == sh_oracle(scores)

    @given(st.lists(st.integers(0, 30), max_size=25))
    def test_sh_equals_h_on_integers(self, counts):
        assert sh_index([float(c) for c in counts]) == h_index(counts)


def klein_fixture():
    """Six articles each cited >= 6 times; only one has total sentiment > 1."""
    sentiments = [2.5, 0.5, -1.0, 0.0, 0.75, -0.25]
    stats = {}
    for k, s in enumerate(sentiments):
        n = 6 + k
        scores = {f"c{k}-{i}": 0.0 for i in range(n)}
        scores[f"c{k}-0"] = s
        stats[f"K{k}"] = ArticleStats(f"K{k}", scores)
    prof = AuthorProfile("Klein", frozenset(stats), sum(s.citation_count for s in stats.values()), 0.0)
    return prof, stats


def test_klein_divergence():
    prof, stats = klein_fixture()
    h = compute_metric("h", profiles={"Klein": prof}, author_article_stats=stats).values["Klein"]
    s = compute_metric("sh", profiles={"Klein": prof}, author_article_stats=stats).values["Klein"]
    assert (h, s) == (6, 1)


class TestNetwork:
    def test_liu_brown_edge(self):
        pairs = {("L1", "B1"): -0.25, ("L2", "B1"): 0.0, ("L1", "B2"): -0.25}
        auth = table(L1=("Liu, Qun",), L2=("Liu, Qun", "Xiong"), B1=("Brown, Peter F.",), B2=("Brown, Peter F.",))
        net = build_author_network(pairs, auth)
        assert net.edges[("Liu, Qun", "Brown, Peter F.")] == EdgeWeight(3, -0.5)
        assert net.edges[("Xiong", "Brown, Peter F.")] == EdgeWeight(1, 0.0)
        assert 'label="3(-0.5)"' in network_to_dot(net)

    def test_fan_out(self):
        net = build_author_network({("C", "D"): 0.75}, table(C=("u",), D=("v", "w")))
        assert net.edges == {("u", "v"): EdgeWeight(1, 0.75), ("u", "w"): EdgeWeight(1, 0.75)}

    def test_empty(self):
        net = build_author_network({}, table(C=("u",)))
        assert not net.nodes and not net.edges

    def test_shared_author_no_loop(self):
        net = build_author_network({("C", "D"): 1.0}, table(C=("u", "v"), D=("v",)))
        assert net.edges == {("u", "v"): EdgeWeight(1, 1.0)}

    def test_invariants(self):
        with pytest.raises(InputError):
            AuthorNetwork(frozenset("a"), {("a", "a"): EdgeWeight(1, 0.0)})
        with pytest.raises(InputError):
            AuthorNetwork(frozenset("ab"), {("a", "b"): EdgeWeight(0, 0.0)})


def dense_oracle(nodes, edges, source, d):
    """Fixed point of x = (1-d)/N + d (M x) solved directly with a dense matrix."""
    names = sorted(nodes)
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    m = np.zeros((n, n))
    for (u, v), w in edges.items():
        m[idx[v], idx[u]] += w.count if source == "count" else w.sentiment
    col = np.abs(m).sum(axis=0)
    for j in range(n):
        m[:, j] = m[:, j] / col[j] if col[j] > 0 else 1.0 / n
    x = np.linalg.solve(np.eye(n) - d * m, np.full(n, (1 - d) / n))
    return {name: x[idx[name]] for name in names}


@st.composite
def networks(draw, signed=False):
    n = draw(st.integers(1, 10))
    nodes = [f"n{i}" for i in range(n)]
    possible = [(u, v) for u, v in itertools.permutations(nodes, 2)]
    chosen = draw(st.lists(st.sampled_from(possible), unique=True, max_size=len(possible))) if possible else []
    sentiment = st.floats(-3, 3, allow_nan=False) if signed else st.just(0.0)
    edges = {e: EdgeWeight(draw(st.integers(1, 5)), draw(sentiment)) for e in chosen}
    return AuthorNetwork(frozenset(nodes), edges)


class TestPageRank:
    @settings(max_examples=200)
    @given(networks(), st.sampled_from([0.55, 0.85]))
    def test_count_matches_dense_oracle(self, net, d):
        res = pagerank(net, "count", d)
        assert res.converged
        oracle = dense_oracle(net.nodes, net.edges, "count", d)
        assert abs(sum(res.scores.values()) - 1.0) <= 1e-6
        for k in oracle:
            assert abs(res.scores[k] - oracle[k]) <= 1e-8

    @settings(max_examples=100)
    @given(networks(signed=True), st.sampled_from([0.55, 0.85]))
    def test_signed_matches_dense_oracle(self, net, d):
        res = pagerank(net, "sentiment", d)
        oracle = dense_oracle(net.nodes, net.edges, "sentiment", d)
        for k in oracle:
            assert abs(res.scores[k] - oracle[k]) <= 1e-8

    @given(networks(), st.integers(2, 7))
    def test_scale_invariant(self, net, c):
        scaled = AuthorNetwork(net.nodes, {e: EdgeWeight(w.count * c, w.sentiment) for e, w in net.edges.items()})
        a, b = pagerank(net).scores, pagerank(scaled).scores
        assert all(abs(a[k] - b[k]) <= 1e-12 for k in a)

    def test_five_node_fixture(self):
        edges = {("a", "b"): 3, ("a", "c"): 1, ("b", "c"): 2, ("c", "a"): 1, ("d", "c"): 4, ("d", "e"): 1}
        net = AuthorNetwork(frozenset("abcde"), {e: EdgeWeight(w, 0.0) for e, w in edges.items()})
        oracle = dense_oracle(net.nodes, net.edges, "count", 0.55)
        res = pagerank(net, "count", 0.55)
        assert all(abs(res.scores[k] - oracle[k]) <= 1e-8 for k in oracle)

    def test_single_node(self):
        assert pagerank(AuthorNetwork(frozenset({"a"}))).scores == {"a": 1.0}

    def test_two_cycle(self):
        net = AuthorNetwork(frozenset("ab"), {("a", "b"): EdgeWeight(2, 1.0), ("b", "a"): EdgeWeight(2, 1.0)})
        for d in (0.55, 0.85):
            assert pagerank(net, "count", d).scores == {"a": 0.5, "b": 0.5}

    def test_negative_in_edges(self):
        edges = {
            ("a", "t"): EdgeWeight(2, -1.5), ("b", "t"): EdgeWeight(1, -0.75),
            ("c", "t"): EdgeWeight(3, -2.0), ("c", "a"): EdgeWeight(1, 0.5),
            ("t", "a"): EdgeWeight(1, 0.25), ("a", "b"): EdgeWeight(1, 0.5),
        }
        net = AuthorNetwork(frozenset("abct"), edges)
        assert pagerank(net, "count").scores["t"] > 0
        assert pagerank(net, "sentiment").scores["t"] < 0

    def test_not_converged_flag(self, caplog):
        net = AuthorNetwork(frozenset("abc"), {("a", "b"): EdgeWeight(1, 0.0), ("b", "c"): EdgeWeight(1, 0.0)})
        res = pagerank(net, max_iterations=1)
        assert not res.converged and res.iterations == 1
        assert "did not converge" in caplog.text

    @pytest.mark.parametrize("d", [0.0, 1.0, 1.5, -0.1])
    def test_damping_range(self, d):
        with pytest.raises(InputError):
            pagerank(AuthorNetwork(frozenset("a")), damping=d)

    def test_empty_network(self):
        with pytest.raises(AnalysisError):
            pagerank(AuthorNetwork(frozenset()))


def test_metric_names():
    assert canonical_metric("h_index") == "h"
    with pytest.raises(InputError):
        canonical_metric("impact")


def test_compute_metric_skips_authors_without_publications():
    profiles = {"a": profile(2, 10, 1.5), "b": AuthorProfile("b", frozenset(), 0, 0.0)}
    assert compute_metric("aif", profiles=profiles).values == {"a": 5.0}
    assert compute_metric("s_aif", profiles=profiles).values == {"a": 0.75}
