#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "srcloc/localizer.hpp"
#include "srcloc/simulator.hpp"

using namespace srcloc;

namespace {

ExpectedDistances hand_distances(std::vector<NodeId> candidates, std::vector<NodeId> observed,
                                 std::vector<double> t_hat)
{
    ExpectedDistances d;
    d.candidates = std::move(candidates);
    d.observed = std::move(observed);
    d.n_samples = 1;
    d.t_hat = std::move(t_hat);
    for (double t : d.t_hat)
        d.reach_count.push_back(t == kUnreachable ? 0 : 1);
    return d;
}

}  // namespace

TEST_CASE("start time examples")
{
    const std::vector<double> t{5.0, 7.0}, th{2.0, 3.0};
    CHECK(estimate_start_time(t, th) == 3.5);
    CHECK(std::fabs(oracle::grid_start_time(t, th, -10.0, 10.0, 1e-3) - 3.5) <= 1e-3);
    CHECK(estimate_start_time(t, t) == 0.0);
    CHECK(estimate_start_time(std::vector<double>{4.0}, std::vector<double>{1.0}) == 3.0);
    CHECK_THROWS_AS(estimate_start_time(t, std::vector<double>{2.0, kUnreachable}), std::domain_error);
    CHECK_THROWS_AS(estimate_start_time(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_start_time(t, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("start time is a first-order optimum and shifts with the data")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + rng() % 8;
        std::vector<double> t(k), th(k);
        for (std::size_t i = 0; i < k; ++i) {
            t[i] = u(rng);
            th[i] = u(rng) / 2.0;
        }
        const double ts = estimate_start_time(t, th);
        const double best = oracle::start_time_objective(t, th, ts);
        for (double eps : {1e-3, 1e-2, 1e-1}) {
            CHECK(best <= oracle::start_time_objective(t, th, ts + eps));
            CHECK(best <= oracle::start_time_objective(t, th, ts - eps));
        }

        const double shift = u(rng);
        std::vector<double> moved = t;
        for (double& v : moved)
            v += shift;
        CHECK(std::fabs(estimate_start_time(moved, th) - (ts + shift)) <= 1e-9);
    }
}

TEST_CASE("candidate score on hand-built evidence")
{
    const PartialObservation obs(4, {{2, 5.0}, {3, 7.0}});
    const auto dist = hand_distances({0, 1}, {2, 3}, {2.0, 3.0, 2.0, kUnreachable});
    const std::vector<CascadeEvidence> ev{{obs, dist}};

    const CandidateScore s0 = score_candidate(0, ev);
    CHECK(s0.sse == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s0.start_times[0] == 3.5);
    CHECK(s0.coverage == 1.0);
    CHECK(s0.admissible_cascades == 1);

    // independent residual sum
    double rss = 0.0;
    for (auto [t, th] : {std::pair{5.0, 2.0}, std::pair{7.0, 3.0}})
        rss += (th + 3.5 - t) * (th + 3.5 - t);
    CHECK(s0.sse == rss);

    const CandidateScore s1 = score_candidate(1, ev);
    CHECK(s1.admissible_cascades == 0);
    CHECK_FALSE(s1.start_times[0].has_value());
    CHECK(s1.coverage == 0.5);
    CHECK(ranks_before(s0, s1));

    CHECK_THROWS_AS(score_candidate(3, ev), std::invalid_argument);
    CHECK_THROWS_AS(score_candidate(0, std::vector<CascadeEvidence>{}), std::invalid_argument);
}

TEST_CASE("perfect candidate scores zero and extra noisy cascades only add")
{
    const PartialObservation a(3, {{1, 4.0}, {2, 6.0}});
    const auto da = hand_distances({0}, {1, 2}, {1.0, 3.0});
    const PartialObservation b(3, {{1, 2.0}, {2, 9.0}});
    const auto db = hand_distances({0}, {1, 2}, {1.0, 3.0});

    std::vector<CascadeEvidence> ev{{a, da}};
    const CandidateScore perfect = score_candidate(0, ev);
    CHECK(perfect.sse == 0.0);
    CHECK(perfect.start_times[0] == 3.0);
    ev.push_back({b, db});
    CHECK(score_candidate(0, ev).sse > perfect.sse);
}

TEST_CASE("sse is invariant under a common time shift in one cascade")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Infection> o1, o2;
        std::vector<double> th;
        const double shift = u(rng);
        for (NodeId v = 1; v <= 4; ++v) {
            const double t = u(rng);
            o1.push_back({v, t});
            o2.push_back({v, t + shift});
            th.push_back(u(rng) / 2);
        }
        const PartialObservation p1(5, o1), p2(5, o2);
        const auto d = hand_distances({0}, {1, 2, 3, 4}, th);
        const CandidateScore s1 = score_candidate(0, std::vector<CascadeEvidence>{{p1, d}});
        const CandidateScore s2 = score_candidate(0, std::vector<CascadeEvidence>{{p2, d}});
        CHECK(std::fabs(*s2.start_times[0] - *s1.start_times[0] - shift) <= 1e-9);
        CHECK(std::fabs(s2.sse - s1.sse) <= 1e-9);
    }
}

TEST_CASE("true source scores zero on a noiseless line")
{
    // 0 -> 1 -> 2 -> 3 -> 4, unit mean delays; expected distances are hop counts
    const PartialObservation obs(5, {{3, 10.0}, {4, 11.0}});
    const auto d = hand_distances({0, 1, 2}, {3, 4}, {3.0, 4.0, 2.0, 3.0, 1.0, 2.0});
    const std::vector<CascadeEvidence> ev{{obs, d}};
    const CandidateScore s = score_candidate(0, ev);
    CHECK(s.sse == 0.0);
    CHECK(s.start_times[0] == 7.0);
}

TEST_CASE("the only node reaching every observation ranks first")
{
    // 0 -> 1 -> {2, 3}; 4 -> 2 only; 5 isolated
    const Network net(6, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {4, 2, 1.0}});
    const std::vector<PartialObservation> obs{PartialObservation(6, {{2, 3.0}}), PartialObservation(6, {{3, 4.0}})};
    const Ranking r = rank_sources(net, obs, 50, 7);
    REQUIRE(r.entries.size() == 4);  // 0, 1, 4, 5
    CHECK(r.entries[0].admissible_cascades == 2);
    CHECK(r.entries[0].candidate <= 1);
    CHECK(r.entries[1].candidate <= 1);
    CHECK(r.rank_of(5) > 2);
    CHECK_FALSE(r.rank_of(2).has_value());

    // node 1 is observed in a third cascade, leaving 0 as the only full reacher
    std::vector<PartialObservation> more = obs;
    more.emplace_back(6, std::vector<Infection>{{1, 2.0}});
    const Ranking r2 = rank_sources(net, more, 50, 7);
    CHECK(r2.entries[0].candidate == 0);
    CHECK(r2.rank_of(0) == 1u);
}

TEST_CASE("ranking ignores cascade order and is deterministic")
{
    std::mt19937_64 rng(3);
    const Network net = oracle::random_graph(rng, 30, 0.12, 0.5, 2.0);
    std::vector<PartialObservation> obs;
    for (std::uint64_t c = 0; c < 4; ++c) {
        const Cascade cas = simulate_cascade(net, 5, 1.0 + c, 6.0, 100 + c);
        if (cas.infected_count() >= 3)
            obs.push_back(observe_random(cas, 30, 0.2, c));
    }
    REQUIRE(obs.size() >= 2);
    const Ranking a = rank_sources(net, obs, 60, 11);
    const Ranking again = rank_sources(net, obs, 60, 11);
    std::vector<PartialObservation> reversed(obs.rbegin(), obs.rend());
    const Ranking b = rank_sources(net, reversed, 60, 11);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
        CHECK(a.entries[k].candidate == b.entries[k].candidate);
        CHECK(a.entries[k].sse == b.entries[k].sse);
        CHECK(a.entries[k].coverage == b.entries[k].coverage);
        CHECK(a.entries[k].candidate == again.entries[k].candidate);
        CHECK(a.entries[k].sse == again.entries[k].sse);
        std::vector<std::optional<double>> flipped(b.entries[k].start_times.rbegin(), b.entries[k].start_times.rend());
        CHECK(a.entries[k].start_times == flipped);
    }
}

TEST_CASE("candidate pool and its errors")
{
    const Network net(3, {{0, 1, 1.0}});
    const std::vector<PartialObservation> obs{PartialObservation(3, {{1, 1.0}}), PartialObservation(3, {{2, 1.0}})};
    CHECK(candidate_pool(obs) == std::vector<NodeId>{0});
    const std::vector<PartialObservation> all{PartialObservation(3, {{0, 0.0}, {1, 1.0}, {2, 1.0}})};
    CHECK_THROWS_AS(rank_sources(net, all, 10, 1), std::runtime_error);
    CHECK_THROWS_AS(rank_sources(net, std::vector<PartialObservation>{}, 10, 1), std::invalid_argument);
}
