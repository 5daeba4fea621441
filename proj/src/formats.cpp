#include "srcloc/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace srcloc {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line), column_(column)
{
}

std::string format_double(double value)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc())
        throw std::runtime_error("cannot format number");
    return std::string(buf, end);
}

NodeDictionary NodeDictionary::numbered(std::size_t n_nodes)
{
    NodeDictionary d;
    d.labels.reserve(n_nodes);
    for (std::size_t v = 0; v < n_nodes; ++v)
        d.labels.push_back(std::to_string(v));
    return d;
}

namespace {

constexpr std::string_view kSpace = " \t\r";

/// A token together with its 1-based column in the source line.
struct Token {
    std::string_view text;
    std::size_t column;
};

Token trim(Token t)
{
    const auto first = t.text.find_first_not_of(kSpace);
    if (first == std::string_view::npos)
        return {{}, t.column + t.text.size()};
    const auto last = t.text.find_last_not_of(kSpace);
    return {t.text.substr(first, last - first + 1), t.column + first};
}

std::vector<Token> split(Token t, char sep)
{
    std::vector<Token> out;
    std::size_t begin = 0;
    for (;;) {
        const auto pos = t.text.find(sep, begin);
        const auto len = (pos == std::string_view::npos ? t.text.size() : pos) - begin;
        out.push_back({t.text.substr(begin, len), t.column + begin});
        if (pos == std::string_view::npos)
            break;
        begin = pos + 1;
    }
    return out;
}

std::vector<Token> words(Token t)
{
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < t.text.size()) {
        const auto first = t.text.find_first_not_of(kSpace, pos);
        if (first == std::string_view::npos)
            break;
        auto last = t.text.find_first_of(kSpace, first);
        if (last == std::string_view::npos)
            last = t.text.size();
        out.push_back({t.text.substr(first, last - first), t.column + first});
        pos = last;
    }
    return out;
}

struct LineContext {
    const std::string& source;
    std::size_t line;

    [[noreturn]] void fail(std::size_t column, const std::string& what) const
    {
        throw ParseError(source, line, column, what);
    }

    double real(Token t, const char* what) const
    {
        double v = 0.0;
        const char* first = t.text.data();
        const char* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (t.text.empty() || ec != std::errc() || ptr != last)
            fail(t.column, std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
        return v;
    }

    std::size_t count(Token t, const char* what) const
    {
        std::size_t v = 0;
        const char* first = t.text.data();
        const char* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (t.text.empty() || ec != std::errc() || ptr != last)
            fail(t.column, std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
        return v;
    }

    NodeId node(Token t) const
    {
        const std::size_t v = count(t, "a node id");
        if (v > std::numeric_limits<NodeId>::max())
            fail(t.column, "node id out of range");
        return static_cast<NodeId>(v);
    }
};

bool starts_with_word(std::string_view text, std::string_view word)
{
    return text.size() >= word.size() && text.substr(0, word.size()) == word &&
           (text.size() == word.size() || kSpace.find(text[word.size()]) != std::string_view::npos);
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

std::vector<Cascade> CascadeFile::cascades(std::optional<double> window_override) const
{
    const std::optional<double> w = window_override ? window_override : window;
    std::vector<Cascade> out;
    out.reserve(records.size());
    for (const CascadeRecord& r : records) {
        double cw = 0.0;
        if (w) {
            cw = *w;
        } else {
            for (const Infection& inf : r.infections)
                cw = std::max(cw, inf.time);
            if (!(cw > 0.0))
                cw = 1.0;
        }
        out.emplace_back(r.infections, cw);
    }
    return out;
}

std::vector<PartialObservation> CascadeFile::observations() const
{
    std::vector<PartialObservation> out;
    out.reserve(records.size());
    for (const CascadeRecord& r : records)
        out.emplace_back(nodes.size(), r.infections);
    return out;
}

CascadeFile parse_cascade_file(std::istream& in, const std::string& source)
{
    CascadeFile file;
    std::vector<std::optional<std::string>> labels;
    std::vector<std::size_t> declared_on;
    std::string raw;
    std::size_t line_no = 0;
    std::size_t first_record_line = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{source, line_no};
        const Token line = trim({raw, 1});
        if (line.text.empty())
            continue;
        if (line.text.front() == '#') {
            const Token body = trim({line.text.substr(1), line.column + 1});
            if (starts_with_word(body.text, "node")) {
                const Token rest = trim({body.text.substr(4), body.column + 4});
                const auto ws = words(rest);
                if (ws.empty())
                    ctx.fail(rest.column, "node declaration needs an id");
                const NodeId id = ctx.node(ws[0]);
                const Token label = trim({rest.text.substr(ws[0].text.size()), ws[0].column + ws[0].text.size()});
                if (first_record_line != 0)
                    ctx.fail(line.column, "node declared after the first cascade record");
                if (id >= labels.size()) {
                    labels.resize(id + 1);
                    declared_on.resize(id + 1, 0);
                }
                if (labels[id])
                    ctx.fail(ws[0].column, "node " + std::to_string(id) + " already declared on line " +
                                               std::to_string(declared_on[id]));
                labels[id] = label.text.empty() ? std::to_string(id) : std::string(label.text);
                declared_on[id] = line_no;
            } else if (starts_with_word(body.text, "window")) {
                const auto ws = words({body.text.substr(6), body.column + 6});
                if (ws.size() != 1)
                    ctx.fail(body.column, "window directive takes exactly one value");
                const double w = ctx.real(ws[0], "a window length");
                if (!(w > 0.0) || !std::isfinite(w))
                    ctx.fail(ws[0].column, "window must be positive");
                file.window = w;
            }
            continue;
        }

        if (first_record_line == 0) {
            first_record_line = line_no;
            for (std::size_t id = 0; id < labels.size(); ++id) {
                if (!labels[id])
                    ctx.fail(1, "node ids must be dense: node " + std::to_string(id) + " is not declared");
            }
        }
        const auto semi = line.text.find(';');
        if (semi == std::string_view::npos)
            ctx.fail(line.column, "cascade record needs '<id>; <node>:<time>, ...'");
        CascadeRecord record;
        const Token id = trim({line.text.substr(0, semi), line.column});
        if (id.text.empty())
            ctx.fail(line.column, "empty cascade id");
        if (id.text.find_first_of(kSpace) != std::string_view::npos)
            ctx.fail(id.column, "cascade id must not contain whitespace");
        record.id = std::string(id.text);

        std::set<NodeId> seen;
        for (Token pair : split({line.text.substr(semi + 1), line.column + semi + 1}, ',')) {
            pair = trim(pair);
            if (pair.text.empty())
                ctx.fail(pair.column, "empty node:time entry");
            const auto colon = pair.text.find(':');
            if (colon == std::string_view::npos)
                ctx.fail(pair.column, "expected <node>:<time>, got '" + std::string(pair.text) + "'");
            const Token node_tok = trim({pair.text.substr(0, colon), pair.column});
            const Token time_tok = trim({pair.text.substr(colon + 1), pair.column + colon + 1});
            const NodeId node = ctx.node(node_tok);
            if (node >= labels.size() || !labels[node])
                ctx.fail(node_tok.column, "node " + std::to_string(node) + " is not declared");
            const double time = ctx.real(time_tok, "an infection time");
            if (!(time >= 0.0) || !std::isfinite(time))
                ctx.fail(time_tok.column, "infection time must be finite and non-negative");
            if (!seen.insert(node).second)
                ctx.fail(node_tok.column, "node " + std::to_string(node) + " appears twice in one cascade");
            record.infections.push_back({node, time});
        }
        file.records.push_back(std::move(record));
    }
    if (first_record_line == 0) {
        for (std::size_t id = 0; id < labels.size(); ++id) {
            if (!labels[id])
                throw ParseError(source, line_no, 1,
                                 "node ids must be dense: node " + std::to_string(id) + " is not declared");
        }
    }
    for (auto& l : labels)
        file.nodes.labels.push_back(std::move(*l));
    return file;
}

CascadeFile read_cascade_file(const std::string& path)
{
    auto in = open_input(path);
    return parse_cascade_file(in, path);
}

void write_cascade_file(std::ostream& out, const CascadeFile& file)
{
    for (std::size_t v = 0; v < file.nodes.size(); ++v)
        out << "# node " << v << ' ' << file.nodes.labels[v] << '\n';
    if (file.window)
        out << "# window " << format_double(*file.window) << '\n';
    for (const CascadeRecord& r : file.records) {
        std::vector<Infection> sorted = r.infections;
        std::sort(sorted.begin(), sorted.end(), [](const Infection& a, const Infection& b) {
            return a.time != b.time ? a.time < b.time : a.node < b.node;
        });
        out << r.id << ';';
        for (std::size_t k = 0; k < sorted.size(); ++k)
            out << (k == 0 ? " " : ", ") << sorted[k].node << ':' << format_double(sorted[k].time);
        out << '\n';
    }
}

Network parse_network_file(std::istream& in, const std::string& source)
{
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> seen;
    std::optional<std::size_t> declared;
    std::size_t n_nodes = 0;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{source, line_no};
        const Token line = trim({raw, 1});
        if (line.text.empty())
            continue;
        if (line.text.front() == '#') {
            const Token body = trim({line.text.substr(1), line.column + 1});
            if (starts_with_word(body.text, "nodes")) {
                const auto ws = words({body.text.substr(5), body.column + 5});
                if (ws.size() != 1)
                    ctx.fail(body.column, "nodes directive takes exactly one value");
                declared = ctx.count(ws[0], "a node count");
            }
            continue;
        }
        const auto ws = words(line);
        if (ws.size() != 3)
            ctx.fail(line.column, "expected '<src> <dst> <rate>'");
        const NodeId src = ctx.node(ws[0]);
        const NodeId dst = ctx.node(ws[1]);
        const double rate = ctx.real(ws[2], "a transmission rate");
        if (src == dst)
            ctx.fail(ws[1].column, "self-loop on node " + std::to_string(src));
        if (!(rate > 0.0) || !std::isfinite(rate))
            ctx.fail(ws[2].column, "transmission rate must be positive and finite");
        if (!seen.emplace(src, dst).second)
            ctx.fail(ws[0].column, "duplicate edge " + std::to_string(src) + " " + std::to_string(dst));
        if (declared && (src >= *declared || dst >= *declared))
            ctx.fail(ws[src >= *declared ? 0 : 1].column, "node id exceeds the declared node count");
        n_nodes = std::max<std::size_t>(n_nodes, std::max(src, dst) + std::size_t{1});
        edges.push_back({src, dst, rate});
    }
    return Network(declared ? *declared : n_nodes, std::move(edges));
}

Network read_network_file(const std::string& path)
{
    auto in = open_input(path);
    return parse_network_file(in, path);
}

void write_network_file(std::ostream& out, const Network& network)
{
    out << "# nodes " << network.size() << '\n';
    for (const Edge& e : network.edges())
        out << e.src << ' ' << e.dst << ' ' << format_double(e.rate) << '\n';
}

void write_ranking_file(std::ostream& out, const Ranking& ranking, const NodeDictionary& nodes,
                        std::size_t n_cascades, std::size_t top_k)
{
    out << "# srcloc ranking\n";
    out << "# cascades " << n_cascades << '\n';
    out << "# candidates " << ranking.entries.size() << '\n';
    out << "# rank node sse coverage admissible start_times label\n";
    const std::size_t n = std::min(top_k, ranking.entries.size());
    for (std::size_t k = 0; k < n; ++k) {
        const CandidateScore& s = ranking.entries[k];
        out << k + 1 << ' ' << s.candidate << ' ' << format_double(s.sse) << ' ' << format_double(s.coverage)
            << ' ' << s.admissible_cascades << ' ';
        for (std::size_t c = 0; c < s.start_times.size(); ++c) {
            if (c > 0)
                out << ',';
            out << (s.start_times[c] ? format_double(*s.start_times[c]) : "-");
        }
        if (s.start_times.empty())
            out << '-';
        const std::string& label = s.candidate < nodes.size() ? nodes.labels[s.candidate] : std::to_string(s.candidate);
        out << ' ' << label << '\n';
    }
}

RankingFile parse_ranking_file(std::istream& in, const std::string& source)
{
    RankingFile file;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{source, line_no};
        const Token line = trim({raw, 1});
        if (line.text.empty())
            continue;
        if (line.text.front() == '#') {
            const auto ws = words({line.text.substr(1), line.column + 1});
            if (ws.size() == 2 && ws[0].text == "cascades")
                file.cascades = ctx.count(ws[1], "a cascade count");
            else if (ws.size() == 2 && ws[0].text == "candidates")
                file.candidates = ctx.count(ws[1], "a candidate count");
            continue;
        }
        const auto ws = words(line);
        if (ws.size() < 7)
            ctx.fail(line.column, "expected '<rank> <node> <sse> <coverage> <admissible> <start_times> <label>'");
        RankingRow row;
        row.rank = ctx.count(ws[0], "a rank");
        row.node = ctx.node(ws[1]);
        row.sse = ctx.real(ws[2], "an sse value");
        row.coverage = ctx.real(ws[3], "a coverage fraction");
        row.admissible = ctx.count(ws[4], "an admissible cascade count");
        if (ws[5].text != "-" || file.cascades > 0) {
            for (Token t : split(ws[5], ',')) {
                if (t.text == "-")
                    row.start_times.emplace_back(std::nullopt);
                else
                    row.start_times.emplace_back(ctx.real(t, "a start time"));
            }
        }
        const std::size_t label_at = ws[6].column - line.column;
        row.label = std::string(line.text.substr(label_at));
        file.rows.push_back(std::move(row));
    }
    return file;
}

namespace {

std::string join_counts(const std::vector<std::size_t>& values)
{
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0)
            s += ',';
        s += std::to_string(values[k]);
    }
    return s;
}

using ConfigEntry = std::tuple<std::string, std::string, std::string>;

std::vector<ConfigEntry> config_entries(const TrialConfig& c)
{
    return {
        {"network", "n_nodes", std::to_string(c.n_nodes)},
        {"network", "edge_density", format_double(c.edge_density)},
        {"network", "rate_min", format_double(c.rate_min)},
        {"network", "rate_max", format_double(c.rate_max)},
        {"cascades", "window", format_double(c.window)},
        {"cascades", "n_train_cascades", std::to_string(c.n_train_cascades)},
        {"cascades", "n_test_cascades_per_source", std::to_string(c.n_test_cascades_per_source)},
        {"cascades", "min_cascade_len", std::to_string(c.min_cascade_len)},
        {"cascades", "start_spread", format_double(c.start_spread)},
        {"observation", "observed_fraction", format_double(c.observed_fraction)},
        {"observation", "regime", regime_name(c.regime)},
        {"localization", "n_samples", std::to_string(c.n_samples)},
        {"localization", "k_list", join_counts(c.k_list)},
        {"experiment", "n_trials", std::to_string(c.n_trials)},
        {"experiment", "master_seed", std::to_string(c.master_seed)},
        {"solver", "step_size", format_double(c.solver.step_size)},
        {"solver", "max_iters", std::to_string(c.solver.max_iters)},
        {"solver", "tolerance", format_double(c.solver.tolerance)},
        {"solver", "prune_threshold", format_double(c.solver.prune_threshold)},
        {"solver", "initial_rate", format_double(c.solver.initial_rate)},
    };
}

template <typename T>
T convert(const std::string& text, const std::string& key)
{
    T v{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw std::invalid_argument("bad value '" + text + "' for " + key);
    return v;
}

void apply_entry(TrialConfig& c, const std::string& section, const std::string& key, const std::string& value)
{
    const std::string name = section + "." + key;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"network.n_nodes", [&](const std::string& v) { c.n_nodes = convert<std::size_t>(v, name); }},
        {"network.edge_density", [&](const std::string& v) { c.edge_density = convert<double>(v, name); }},
        {"network.rate_min", [&](const std::string& v) { c.rate_min = convert<double>(v, name); }},
        {"network.rate_max", [&](const std::string& v) { c.rate_max = convert<double>(v, name); }},
        {"cascades.window", [&](const std::string& v) { c.window = convert<double>(v, name); }},
        {"cascades.n_train_cascades", [&](const std::string& v) { c.n_train_cascades = convert<std::size_t>(v, name); }},
        {"cascades.n_test_cascades_per_source",
         [&](const std::string& v) { c.n_test_cascades_per_source = convert<std::size_t>(v, name); }},
        {"cascades.min_cascade_len", [&](const std::string& v) { c.min_cascade_len = convert<std::size_t>(v, name); }},
        {"cascades.start_spread", [&](const std::string& v) { c.start_spread = convert<double>(v, name); }},
        {"observation.observed_fraction", [&](const std::string& v) { c.observed_fraction = convert<double>(v, name); }},
        {"observation.regime", [&](const std::string& v) { c.regime = parse_regime(v); }},
        {"localization.n_samples", [&](const std::string& v) { c.n_samples = convert<std::size_t>(v, name); }},
        {"localization.k_list",
         [&](const std::string& v) {
             c.k_list.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) {
                 item.erase(0, item.find_first_not_of(" \t"));
                 item.erase(item.find_last_not_of(" \t") + 1);
                 c.k_list.push_back(convert<std::size_t>(item, name));
             }
         }},
        {"experiment.n_trials", [&](const std::string& v) { c.n_trials = convert<std::size_t>(v, name); }},
        {"experiment.master_seed", [&](const std::string& v) { c.master_seed = convert<std::uint64_t>(v, name); }},
        {"solver.step_size", [&](const std::string& v) { c.solver.step_size = convert<double>(v, name); }},
        {"solver.max_iters", [&](const std::string& v) { c.solver.max_iters = convert<std::size_t>(v, name); }},
        {"solver.tolerance", [&](const std::string& v) { c.solver.tolerance = convert<double>(v, name); }},
        {"solver.prune_threshold", [&](const std::string& v) { c.solver.prune_threshold = convert<double>(v, name); }},
        {"solver.initial_rate", [&](const std::string& v) { c.solver.initial_rate = convert<double>(v, name); }},
    };
    auto it = setters.find(name);
    if (it == setters.end())
        throw std::invalid_argument("unknown configuration key " + name);
    it->second(value);
}

}  // namespace

namespace {

/// Line of `key` inside `[section]`, for errors the INI reader cannot place.
std::size_t locate_key(const std::string& text, const std::string& section, const std::string& key)
{
    std::istringstream in(text);
    std::string raw, current;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const Token line = trim({raw, 1});
        if (line.text.empty() || line.text.front() == ';' || line.text.front() == '#')
            continue;
        if (line.text.front() == '[') {
            current = std::string(trim({line.text.substr(1, line.text.find(']') - 1), 0}).text);
            continue;
        }
        const Token name = trim({line.text.substr(0, line.text.find('=')), 0});
        if (current == section && name.text == key)
            return line_no;
    }
    return 0;
}

}  // namespace

TrialConfig parse_trial_config(std::istream& in, const std::string& source)
{
    namespace pt = boost::property_tree;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::istringstream ini(text);
    pt::ptree tree;
    try {
        pt::read_ini(ini, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(source, e.line(), 1, e.message());
    }
    TrialConfig config;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw ParseError(source, locate_key(text, "", section), 1,
                             "key '" + section + "' must sit inside a [section]");
        for (const auto& [key, value] : body) {
            try {
                apply_entry(config, section, key, value.get_value<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ParseError(source, locate_key(text, section, key), 1, e.what());
            }
        }
    }
    return config;
}

TrialConfig read_trial_config(const std::string& path)
{
    auto in = open_input(path);
    return parse_trial_config(in, path);
}

void write_trial_config(std::ostream& out, const TrialConfig& config)
{
    std::string current;
    for (const auto& [section, key, value] : config_entries(config)) {
        if (section != current) {
            out << (current.empty() ? "" : "\n") << '[' << section << "]\n";
            current = section;
        }
        out << key << " = " << value << '\n';
    }
}

void write_report(std::ostream& out, const ExperimentResult& result)
{
    out << "# srcloc evaluation report\n[config]\n";
    for (const auto& [section, key, value] : config_entries(result.config))
        out << section << '.' << key << " = " << value << '\n';

    out << "\n[summary]\n";
    out << "trials = " << result.rows.size() << '\n';
    out << "completed = " << result.completed << '\n';
    out << "skipped = " << result.skipped << '\n';
    out << "success_probability = " << format_double(result.success_prob) << '\n';
    for (const auto& [k, v] : result.topk)
        out << "top_k." << k << " = " << format_double(v) << '\n';
    for (const auto& [k, v] : result.baseline)
        out << "baseline." << k << " = " << format_double(v) << '\n';
    out << "mean_candidates = " << format_double(result.mean_candidates) << '\n';
    out << "start_time_mae = " << (result.start_time_mae ? format_double(*result.start_time_mae) : "-") << '\n';

    out << "\n[trials]\n";
    out << "# trial status source rank candidates start_time_mae true_starts estimated_starts\n";
    for (const TrialRow& row : result.rows) {
        out << row.trial << ' ';
        if (row.skipped) {
            out << "skipped:" << row.skip_reason << " - - - - - -\n";
            continue;
        }
        out << "ok " << row.true_source << ' ' << (row.rank ? std::to_string(*row.rank) : "-") << ' '
            << row.n_candidates << ' ';
        const auto err = row.start_time_error();
        out << (err ? format_double(*err) : "-") << ' ';
        for (std::size_t c = 0; c < row.true_starts.size(); ++c)
            out << (c ? "," : "") << format_double(row.true_starts[c]);
        out << ' ';
        for (std::size_t c = 0; c < row.estimated_starts.size(); ++c)
            out << (c ? "," : "") << (row.estimated_starts[c] ? format_double(*row.estimated_starts[c]) : "-");
        out << '\n';
    }
}

ReportFile parse_report(std::istream& in, const std::string& source)
{
    ReportFile report;
    std::string raw, section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineContext ctx{source, line_no};
        const Token line = trim({raw, 1});
        if (line.text.empty() || line.text.front() == '#')
            continue;
        if (line.text.front() == '[') {
            if (line.text.back() != ']')
                ctx.fail(line.column, "unterminated section header");
            section = std::string(line.text.substr(1, line.text.size() - 2));
            if (section != "config" && section != "summary" && section != "trials")
                ctx.fail(line.column + 1, "unknown section '" + section + "'");
            continue;
        }
        if (section == "trials") {
            const auto ws = words(line);
            if (ws.size() != 8)
                ctx.fail(line.column, "trial rows have 8 columns");
            std::vector<std::string> row;
            for (const Token& t : ws)
                row.emplace_back(t.text);
            report.trials.push_back(std::move(row));
            continue;
        }
        if (section.empty())
            ctx.fail(line.column, "entry outside any section");
        const auto eq = line.text.find('=');
        if (eq == std::string_view::npos)
            ctx.fail(line.column, "expected 'key = value'");
        const Token key = trim({line.text.substr(0, eq), line.column});
        const Token value = trim({line.text.substr(eq + 1), line.column + eq + 1});
        if (key.text.empty())
            ctx.fail(key.column, "empty key");
        auto& target = section == "config" ? report.config : report.summary;
        target[std::string(key.text)] = std::string(value.text);
    }
    return report;
}

}  // namespace srcloc
