#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "srcloc/formats.hpp"

using namespace srcloc;

namespace {

CascadeFile parse_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_cascade_file(in, "test");
}

std::size_t cascade_error_line(const std::string& text)
{
    try {
        parse_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::size_t network_error_line(const std::string& text)
{
    std::istringstream in(text);
    try {
        parse_network_file(in, "test");
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

CascadeFile random_cascade_file(std::mt19937_64& rng)
{
    CascadeFile f;
    const std::size_t n = 1 + rng() % 15;
    for (std::size_t v = 0; v < n; ++v)
        f.nodes.labels.push_back("site" + std::to_string(rng() % 1000) + (v % 3 == 0 ? ".example.org" : ""));
    if (rng() % 2)
        f.window = std::uniform_real_distribution<double>(0.1, 100.0)(rng);
    const std::size_t m = rng() % 6;
    std::uniform_real_distribution<double> time(0.0, 50.0);
    for (std::size_t c = 0; c < m; ++c) {
        CascadeRecord r;
        r.id = "c" + std::to_string(c);
        std::vector<NodeId> nodes(n);
        for (NodeId v = 0; v < n; ++v)
            nodes[v] = v;
        std::shuffle(nodes.begin(), nodes.end(), rng);
        const std::size_t k = 1 + rng() % n;
        for (std::size_t i = 0; i < k; ++i)
            r.infections.push_back({nodes[i], rng() % 5 == 0 ? 0.0 : time(rng)});
        std::sort(r.infections.begin(), r.infections.end(), [](const Infection& a, const Infection& b) {
            return a.time != b.time ? a.time < b.time : a.node < b.node;
        });
        f.records.push_back(std::move(r));
    }
    return f;
}

}  // namespace

TEST_CASE("cascade record parse example")
{
    const CascadeFile f = parse_text("# node 0 a\n# node 1 b\n# node 2 c\nc1; 0:0.0, 2:1.5\n");
    REQUIRE(f.records.size() == 1);
    CHECK(f.records[0].id == "c1");
    REQUIRE(f.records[0].infections.size() == 2);
    CHECK(f.records[0].infections[1] == Infection{2, 1.5});
    CHECK(f.nodes.labels == std::vector<std::string>{"a", "b", "c"});
    CHECK_FALSE(f.window.has_value());
    const auto cs = f.cascades(4.0);
    CHECK(cs[0].infected_count() == 2);
    CHECK(cs[0].window() == 4.0);
}

TEST_CASE("reader tolerates any pair order and writer sorts by time")
{
    const CascadeFile f = parse_text("# node 0\n# node 1\n# node 2\n# window 9\nx; 2:3, 0:1.25, 1:1.25\n");
    CHECK(f.window == 9.0);
    CHECK(f.nodes.labels[1] == "1");
    std::ostringstream out;
    write_cascade_file(out, f);
    CHECK(out.str() == "# node 0 0\n# node 1 1\n# node 2 2\n# window 9\nx; 0:1.25, 1:1.25, 2:3\n");
}

TEST_CASE("malformed cascade files name the offending line")
{
    const std::string header = "# node 0 a\n# node 1 b\n";
    CHECK(cascade_error_line(header + "c1; 0:0.0, 99:1.5\n") == 3);
    CHECK(cascade_error_line(header + "c1; 0:0.0\nc2 0:1\n") == 4);
    CHECK(cascade_error_line(header + "c1; 0:abc\n") == 3);
    CHECK(cascade_error_line(header + "c1; 0:-1\n") == 3);
    CHECK(cascade_error_line(header + "c1; 0:1, 0:2\n") == 3);
    CHECK(cascade_error_line(header + "# node 1 again\n") == 3);
    CHECK(cascade_error_line(header + "c1; 0:1,\n") == 3);
    CHECK(cascade_error_line("# node 1 b\nc1; 1:0\n") == 2);  // ids must start at 0
    CHECK(cascade_error_line(header + "# window 0\n") == 3);

    try {
        parse_text(header + "c1; 0:0.0, 99:1.5\n");
    } catch (const ParseError& e) {
        CHECK(e.column() == 12);
        CHECK(std::string(e.what()).find("test:3:12") == 0);
    }
}

TEST_CASE("cascade files round-trip")
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const CascadeFile f = random_cascade_file(rng);
        std::ostringstream out;
        write_cascade_file(out, f);
        const CascadeFile back = parse_text(out.str());
        CHECK(back.nodes.labels == f.nodes.labels);
        CHECK(back.window == f.window);
        CHECK(back.records == f.records);
        std::ostringstream again;
        write_cascade_file(again, back);
        CHECK(again.str() == out.str());
    }
}

TEST_CASE("network files round-trip")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 20;
        const Network net = oracle::random_graph(rng, n, 0.2, 1e-3, 50.0);
        std::ostringstream out;
        write_network_file(out, net);
        std::istringstream in(out.str());
        const Network back = parse_network_file(in);
        CHECK(back.size() == net.size());
        REQUIRE(back.edge_count() == net.edge_count());
        for (std::size_t k = 0; k < net.edge_count(); ++k)
            CHECK(back.edge(k) == net.edge(k));
    }
}

TEST_CASE("malformed network files name the offending line")
{
    CHECK(network_error_line("0 1 1.0\n1 2\n") == 2);
    CHECK(network_error_line("# edges\n0 1 x\n") == 2);
    CHECK(network_error_line("0 1 1.0\n\n1 1 2.0\n") == 3);
    CHECK(network_error_line("0 1 1.0\n0 1 2.0\n") == 2);
    CHECK(network_error_line("0 1 -3\n") == 1);
    CHECK(network_error_line("# nodes 2\n0 2 1\n") == 2);

    std::istringstream implicit("2 0 0.5\n");
    CHECK(parse_network_file(implicit).size() == 3);
}

TEST_CASE("ranking files re-parse")
{
    Ranking r;
    r.entries.push_back({4, 0.25, {1.5, std::nullopt}, 0.75, 1});
    r.entries.push_back({2, 1e-17, {3.0, 2.0}, 1.0, 2});
    r.entries.push_back({0, 7.0, {std::nullopt, std::nullopt}, 0.0, 0});
    NodeDictionary nodes;
    nodes.labels = {"zero", "one", "two words", "three", "four"};
    std::ostringstream out;
    write_ranking_file(out, r, nodes, 2, 2);
    std::istringstream in(out.str());
    const RankingFile f = parse_ranking_file(in);
    CHECK(f.cascades == 2);
    CHECK(f.candidates == 3);
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[0].rank == 1);
    CHECK(f.rows[0].node == 4);
    CHECK(f.rows[0].sse == 0.25);
    CHECK(f.rows[0].start_times == r.entries[0].start_times);
    CHECK(f.rows[0].label == "four");
    CHECK(f.rows[1].sse == 1e-17);
    CHECK(f.rows[1].label == "two words");
}

TEST_CASE("trial config parse and write")
{
    std::istringstream in("[network]\nn_nodes = 32\nrate_min = 0.25\n\n[observation]\nregime = final\n"
                          "[localization]\nk_list = 1, 3\n[solver]\ntolerance = 1e-8\n");
    const TrialConfig c = parse_trial_config(in);
    CHECK(c.n_nodes == 32);
    CHECK(c.rate_min == 0.25);
    CHECK(c.regime == Regime::final_nodes);
    CHECK(c.k_list == std::vector<std::size_t>{1, 3});
    CHECK(c.solver.tolerance == 1e-8);
    CHECK(c.n_samples == TrialConfig{}.n_samples);

    std::ostringstream out;
    write_trial_config(out, c);
    std::istringstream back_in(out.str());
    const TrialConfig back = parse_trial_config(back_in);
    std::ostringstream again;
    write_trial_config(again, back);
    CHECK(again.str() == out.str());

    std::istringstream unknown("[network]\nnodes = 3\n");
    CHECK_THROWS_AS(parse_trial_config(unknown), ParseError);
    std::istringstream bad_value("[network]\nn_nodes = many\n");
    CHECK_THROWS_AS(parse_trial_config(bad_value), ParseError);
    std::istringstream bad_regime("[observation]\nregime = sideways\n");
    CHECK_THROWS_AS(parse_trial_config(bad_regime), ParseError);
    std::istringstream broken("[network\nn_nodes = 3\n");
    CHECK_THROWS_AS(parse_trial_config(broken), ParseError);

    std::istringstream late("[network]\nn_nodes = 4\n\n[solver]\nbogus = 1\n");
    try {
        parse_trial_config(late);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
}

TEST_CASE("reports re-parse")
{
    ExperimentResult r;
    r.config.k_list = {1, 10};
    r.completed = 1;
    r.skipped = 1;
    r.success_prob = 1.0;
    r.topk = {{1, 1.0}, {10, 1.0}};
    r.baseline = {{1, 0.1}, {10, 1.0}};
    r.mean_candidates = 10;
    r.start_time_mae = 0.125;
    TrialRow ok;
    ok.trial = 0;
    ok.true_source = 3;
    ok.rank = 1;
    ok.n_candidates = 10;
    ok.true_starts = {1.0, 2.0};
    ok.estimated_starts = {1.25, std::nullopt};
    TrialRow skipped;
    skipped.trial = 1;
    skipped.skipped = true;
    skipped.skip_reason = "no_long_cascades";
    r.rows = {ok, skipped};

    std::ostringstream out;
    write_report(out, r);
    std::istringstream in(out.str());
    const ReportFile f = parse_report(in);
    CHECK(f.config.at("network.n_nodes") == "64");
    CHECK(f.summary.at("top_k.10") == "1");
    CHECK(f.summary.at("start_time_mae") == "0.125");
    REQUIRE(f.trials.size() == 2);
    CHECK(f.trials[0] == std::vector<std::string>{"0", "ok", "3", "1", "10", "0.25", "1,2", "1.25,-"});
    CHECK(f.trials[1][1] == "skipped:no_long_cascades");
}
