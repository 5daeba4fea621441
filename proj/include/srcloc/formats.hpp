#pragma once

// Text file formats.
//
// Cascade file:
//   # node <id> <label>        one per node; ids must be exactly 0..n-1
//   # window <T>               optional observation window
//   # anything else            comment
//   <cascade id>; <node>:<time>, <node>:<time>, ...
// Pairs are written ascending by time (ties by node); any order is read.
//
// Network file:
//   # nodes <N>                optional; otherwise max id + 1
//   <src> <dst> <rate>
//
// Ranking file (output of `locate`):
//   # srcloc ranking
//   # cascades <m>
//   # candidates <|H_C|>
//   <rank> <node> <sse> <coverage> <admissible> <t_s,...|-> <label>
// where the start-time list holds one entry per cascade, "-" where the
// candidate is inadmissible for that cascade.
//
// Evaluation report: sections [config], [summary] (key = value) and [trials]
// (whitespace-separated rows, see write_report). Timings are never written,
// so a fixed seed reproduces the report byte for byte.
//
// Doubles are written in shortest round-trip form.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "srcloc/evaluation.hpp"
#include "srcloc/localizer.hpp"
#include "srcloc/model.hpp"

namespace srcloc {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Missing, unreadable or unwritable file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double value);

struct NodeDictionary {
    std::vector<std::string> labels;  // indexed by NodeId

    std::size_t size() const { return labels.size(); }
    static NodeDictionary numbered(std::size_t n_nodes);
};

struct CascadeRecord {
    std::string id;
    std::vector<Infection> infections;

    friend bool operator==(const CascadeRecord&, const CascadeRecord&) = default;
};

struct CascadeFile {
    NodeDictionary nodes;
    std::optional<double> window;
    std::vector<CascadeRecord> records;

    /// Full cascades; `window` overrides the file's window directive.
    std::vector<Cascade> cascades(std::optional<double> window_override = std::nullopt) const;
    /// Each record taken as already restricted to its observed nodes.
    std::vector<PartialObservation> observations() const;
};

CascadeFile parse_cascade_file(std::istream& in, const std::string& source = "<cascades>");
CascadeFile read_cascade_file(const std::string& path);
void write_cascade_file(std::ostream& out, const CascadeFile& file);

Network parse_network_file(std::istream& in, const std::string& source = "<network>");
Network read_network_file(const std::string& path);
void write_network_file(std::ostream& out, const Network& network);

struct RankingRow {
    std::size_t rank = 0;
    NodeId node = 0;
    double sse = 0.0;
    double coverage = 0.0;
    std::size_t admissible = 0;
    std::vector<std::optional<double>> start_times;
    std::string label;
};

struct RankingFile {
    std::size_t cascades = 0;
    std::size_t candidates = 0;
    std::vector<RankingRow> rows;
};

/// Writes the first min(top_k, ranking size) entries.
void write_ranking_file(std::ostream& out, const Ranking& ranking, const NodeDictionary& nodes,
                        std::size_t n_cascades, std::size_t top_k);
RankingFile parse_ranking_file(std::istream& in, const std::string& source = "<ranking>");

/// Flat sectioned key = value configuration mirroring TrialConfig.
TrialConfig parse_trial_config(std::istream& in, const std::string& source = "<config>");
TrialConfig read_trial_config(const std::string& path);
void write_trial_config(std::ostream& out, const TrialConfig& config);

void write_report(std::ostream& out, const ExperimentResult& result);

struct ReportFile {
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> summary;
    std::vector<std::vector<std::string>> trials;
};
ReportFile parse_report(std::istream& in, const std::string& source = "<report>");

}  // namespace srcloc
