#include "srcloc/netrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace srcloc {

namespace {

void check_window(std::span<const Cascade> cascades, double window)
{
    if (!(window > 0.0) || !std::isfinite(window))
        throw std::invalid_argument("observation window must be positive");
    for (const Cascade& c : cascades) {
        if (c.last_time() > window)
            throw std::invalid_argument("cascade has an infection after the observation window");
    }
}

void check_nodes(const Cascade& cascade, std::size_t n_nodes)
{
    if (cascade.infections().empty())
        return;
    NodeId top = 0;
    for (const Infection& inf : cascade.infections())
        top = std::max(top, inf.node);
    if (top >= n_nodes)
        throw std::invalid_argument("cascade references node " + std::to_string(top) +
                                    " outside the rate matrix");
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

}  // namespace

RateMatrix RateMatrix::from_cascades(std::span<const Cascade> cascades, std::size_t n_nodes, double initial_rate)
{
    std::vector<std::vector<NodeId>> parents(n_nodes);
    for (const Cascade& c : cascades) {
        check_nodes(c, n_nodes);
        auto inf = c.infections();
        for (std::size_t i = 0; i < inf.size(); ++i) {
            for (std::size_t j = 0; j < i && inf[j].time < inf[i].time; ++j)
                parents[inf[i].node].push_back(inf[j].node);
        }
    }
    RateMatrix m(n_nodes);
    for (std::size_t v = 0; v < n_nodes; ++v) {
        auto& p = parents[v];
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        m.rates_[v].assign(p.size(), initial_rate);
        m.parents_[v] = std::move(p);
    }
    return m;
}

std::size_t RateMatrix::candidate_count() const
{
    std::size_t n = 0;
    for (const auto& p : parents_)
        n += p.size();
    return n;
}

bool RateMatrix::is_candidate(NodeId src, NodeId dst) const
{
    return dst < size() && std::binary_search(parents_[dst].begin(), parents_[dst].end(), src);
}

double RateMatrix::get(NodeId src, NodeId dst) const
{
    if (dst >= size())
        return 0.0;
    const auto& p = parents_[dst];
    auto it = std::lower_bound(p.begin(), p.end(), src);
    if (it == p.end() || *it != src)
        return 0.0;
    return rates_[dst][static_cast<std::size_t>(it - p.begin())];
}

void RateMatrix::set(NodeId src, NodeId dst, double value)
{
    if (dst >= size())
        throw std::out_of_range("destination outside the rate matrix");
    const auto& p = parents_[dst];
    auto it = std::lower_bound(p.begin(), p.end(), src);
    if (it == p.end() || *it != src)
        throw std::out_of_range("(" + std::to_string(src) + ", " + std::to_string(dst) + ") is not a candidate edge");
    rates_[dst][static_cast<std::size_t>(it - p.begin())] = value;
}

void RateMatrix::add_candidate(NodeId src, NodeId dst, double value)
{
    if (src >= size() || dst >= size() || src == dst)
        throw std::out_of_range("invalid candidate edge");
    auto& p = parents_[dst];
    auto it = std::lower_bound(p.begin(), p.end(), src);
    const auto pos = it - p.begin();
    if (it != p.end() && *it == src) {
        rates_[dst][static_cast<std::size_t>(pos)] = value;
        return;
    }
    p.insert(it, src);
    rates_[dst].insert(rates_[dst].begin() + pos, value);
}

void SolverConfig::validate() const
{
    if (!(step_size > 0.0))
        throw std::invalid_argument("step size must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("max_iters must be at least 1");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("tolerance must be positive");
    if (!(prune_threshold >= 0.0))
        throw std::invalid_argument("prune threshold must be non-negative");
    if (!(initial_rate > 0.0))
        throw std::invalid_argument("initial rate must be positive");
}

double cascade_loglik(const RateMatrix& alpha, const Cascade& cascade, double window)
{
    check_window(std::span<const Cascade>(&cascade, 1), window);
    check_nodes(cascade, alpha.size());

    double ll = 0.0;
    const double root_time = cascade.start_time();
    for (const Infection& inf : cascade.infections()) {
        if (inf.time == root_time)
            continue;  // no potential parents
        double hazard = 0.0;
        double exposure = 0.0;
        auto parents = alpha.parents(inf.node);
        auto rates = alpha.rates(inf.node);
        for (std::size_t k = 0; k < parents.size(); ++k) {
            auto tj = cascade.time_of(parents[k]);
            if (tj && *tj < inf.time) {
                hazard += rates[k];
                exposure += rates[k] * (inf.time - *tj);
            }
        }
        if (!(hazard > 0.0))
            return kImpossible;
        ll += -exposure + std::log(hazard);
    }
    for (NodeId m = 0; m < alpha.size(); ++m) {
        if (cascade.is_infected(m))
            continue;
        auto parents = alpha.parents(m);
        auto rates = alpha.rates(m);
        for (std::size_t k = 0; k < parents.size(); ++k) {
            if (auto tj = cascade.time_of(parents[k]))
                ll -= rates[k] * (window - *tj);
        }
    }
    return ll;
}

double total_loglik(const RateMatrix& alpha, std::span<const Cascade> cascades, double window)
{
    double ll = 0.0;
    for (const Cascade& c : cascades) {
        const double part = cascade_loglik(alpha, c, window);
        if (is_impossible(part))
            return kImpossible;
        ll += part;
    }
    return ll;
}

RateMatrix loglik_gradient(const RateMatrix& alpha, std::span<const Cascade> cascades, double window)
{
    check_window(cascades, window);
    RateMatrix grad = alpha;
    for (NodeId i = 0; i < alpha.size(); ++i) {
        auto g = grad.rates(i);
        std::fill(g.begin(), g.end(), 0.0);
    }

    for (const Cascade& c : cascades) {
        check_nodes(c, alpha.size());
        for (NodeId i = 0; i < alpha.size(); ++i) {
            auto parents = alpha.parents(i);
            auto rates = alpha.rates(i);
            auto g = grad.rates(i);
            const auto ti = c.time_of(i);
            if (!ti) {
                for (std::size_t k = 0; k < parents.size(); ++k) {
                    if (auto tj = c.time_of(parents[k]))
                        g[k] -= window - *tj;
                }
                continue;
            }
            if (*ti == c.start_time())
                continue;
            double hazard = 0.0;
            for (std::size_t k = 0; k < parents.size(); ++k) {
                auto tj = c.time_of(parents[k]);
                if (tj && *tj < *ti)
                    hazard += rates[k];
            }
            if (!(hazard > 0.0))
                throw std::domain_error("gradient undefined: node " + std::to_string(i) +
                                        " has zero incoming hazard");
            for (std::size_t k = 0; k < parents.size(); ++k) {
                auto tj = c.time_of(parents[k]);
                if (tj && *tj < *ti)
                    g[k] += -(*ti - *tj) + 1.0 / hazard;
            }
        }
    }
    return grad;
}

DestinationProblem::DestinationProblem(std::span<const Cascade> cascades, double window, NodeId node,
                                       std::span<const NodeId> parents)
    : node_(node), linear_(parents.size(), 0.0)
{
    check_window(cascades, window);
    for (const Cascade& c : cascades) {
        const auto ti = c.time_of(node);
        if (!ti) {
            for (std::size_t k = 0; k < parents.size(); ++k) {
                if (auto tj = c.time_of(parents[k]))
                    linear_[k] += window - *tj;
            }
            continue;
        }
        if (*ti == c.start_time())
            continue;
        for (std::size_t k = 0; k < parents.size(); ++k) {
            auto tj = c.time_of(parents[k]);
            if (tj && *tj < *ti) {
                linear_[k] += *ti - *tj;
                group_members_.push_back(static_cast<std::uint32_t>(k));
            }
        }
        // an empty group makes the problem infeasible (log of zero hazard)
        group_offsets_.push_back(static_cast<std::uint32_t>(group_members_.size()));
    }
    scratch_.resize(group_count());
}

double DestinationProblem::value(std::span<const double> rates) const
{
    double v = -dot(linear_, rates);
    for (std::size_t r = 0; r + 1 < group_offsets_.size(); ++r) {
        double h = 0.0;
        for (std::uint32_t k = group_offsets_[r]; k < group_offsets_[r + 1]; ++k)
            h += rates[group_members_[k]];
        if (!(h > 0.0))
            return kImpossible;
        v += std::log(h);
    }
    return v;
}

void DestinationProblem::gradient(std::span<const double> rates, std::span<double> out) const
{
    for (std::size_t k = 0; k < linear_.size(); ++k)
        out[k] = -linear_[k];
    for (std::size_t r = 0; r + 1 < group_offsets_.size(); ++r) {
        double h = 0.0;
        for (std::uint32_t k = group_offsets_[r]; k < group_offsets_[r + 1]; ++k)
            h += rates[group_members_[k]];
        if (!(h > 0.0))
            throw std::domain_error("gradient undefined: zero incoming hazard");
        const double inv = 1.0 / h;
        for (std::uint32_t k = group_offsets_[r]; k < group_offsets_[r + 1]; ++k)
            out[group_members_[k]] += inv;
    }
}

NodeSolveResult solve_destination(const DestinationProblem& problem, std::span<const double> initial,
                                  const SolverConfig& config)
{
    config.validate();
    const std::size_t n = problem.dimension();
    if (initial.size() != n)
        throw std::invalid_argument("initial point has the wrong dimension");

    NodeSolveResult res;
    res.rates.assign(initial.begin(), initial.end());
    for (double& a : res.rates)
        a = std::max(a, 0.0);

    if (problem.group_count() == 0) {
        // only exposure terms: the optimum is every rate at zero
        res.trajectory.push_back(problem.value(res.rates));
        std::fill(res.rates.begin(), res.rates.end(), 0.0);
        res.trajectory.push_back(problem.value(res.rates));
        res.converged = true;
        return res;
    }

    double f = problem.value(res.rates);
    if (is_impossible(f))
        throw std::invalid_argument("initial rates give node " + std::to_string(problem.node()) +
                                    " zero incoming hazard");
    res.trajectory.push_back(f);

    std::vector<double> g(n), g_next(n), trial(n), step_vec(n);
    problem.gradient(res.rates, g);
    double step = config.step_size;
    constexpr double armijo = 1e-4;

    while (res.iterations < config.max_iters) {
        double f_next = f;
        double ascent = 0.0;
        for (;;) {
            for (std::size_t k = 0; k < n; ++k) {
                trial[k] = std::max(0.0, res.rates[k] + step * g[k]);
                step_vec[k] = trial[k] - res.rates[k];
            }
            ascent = dot(g, step_vec);
            if (!(ascent > 0.0))
                break;  // projected gradient vanishes: stationary
            f_next = problem.value(trial);
            if (!is_impossible(f_next) && f_next >= f + armijo * ascent)
                break;
            step *= 0.5;
            if (step < 1e-30) {
                ascent = 0.0;
                break;
            }
        }
        if (!(ascent > 0.0)) {
            res.converged = true;
            break;
        }
        ++res.iterations;
        problem.gradient(trial, g_next);

        // Barzilai-Borwein trial step for the next iteration (concave: s.y < 0)
        double sy = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sy += step_vec[k] * (g_next[k] - g[k]);
            ss += step_vec[k] * step_vec[k];
        }
        step = sy < 0.0 ? ss / -sy : step * 2.0;
        step = std::clamp(step, 1e-12, 1e12);

        const double rel = (f_next - f) / std::max(1.0, std::fabs(f_next));
        res.rates.swap(trial);
        g.swap(g_next);
        f = f_next;
        res.trajectory.push_back(f);
        if (rel < config.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

InferenceResult infer_network(std::span<const Cascade> cascades, std::size_t n_nodes, double window,
                              const SolverConfig& config)
{
    config.validate();
    if (cascades.empty())
        throw std::invalid_argument("network inference needs at least one cascade");
    check_window(cascades, window);

    InferenceResult out;
    out.rates = RateMatrix::from_cascades(cascades, n_nodes, config.initial_rate);
    std::vector<Edge> edges;
    double ll = 0.0;
    for (NodeId i = 0; i < n_nodes; ++i) {
        auto parents = out.rates.parents(i);
        const DestinationProblem problem(cascades, window, i, parents);
        const NodeSolveResult solved = solve_destination(problem, out.rates.rates(i), config);
        std::copy(solved.rates.begin(), solved.rates.end(), out.rates.rates(i).begin());
        ll += solved.trajectory.back();
        out.iterations = std::max(out.iterations, solved.iterations);
        if (!solved.converged) {
            out.converged = false;
            out.unconverged_nodes.push_back(i);
        }
        for (std::size_t k = 0; k < parents.size(); ++k) {
            if (solved.rates[k] > config.prune_threshold)
                edges.push_back({parents[k], i, solved.rates[k]});
        }
    }
    out.loglik = ll;
    out.network = Network(n_nodes, std::move(edges));
    return out;
}

}  // namespace srcloc
