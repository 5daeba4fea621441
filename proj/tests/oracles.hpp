#pragma once

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "srcloc/model.hpp"
#include "srcloc/netrate.hpp"

namespace oracle {

using srcloc::Cascade;
using srcloc::Edge;
using srcloc::Infection;
using srcloc::Network;
using srcloc::NodeId;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Network random_graph(std::mt19937_64& rng, std::size_t n, double density, double rmin = 0.3,
                            double rmax = 3.0)
{
    std::uniform_real_distribution<double> coin(0.0, 1.0), rate(rmin, rmax);
    std::vector<Edge> edges;
    for (NodeId s = 0; s < n; ++s)
        for (NodeId d = 0; d < n; ++d)
            if (s != d && coin(rng) < density)
                edges.push_back({s, d, rate(rng)});
    return Network(n, std::move(edges));
}

/// Minimum over all simple directed paths root -> v of the summed delays,
/// accumulated from the root outward.
inline std::vector<double> all_simple_paths_min(const Network& net, std::span<const double> delays, NodeId root)
{
    std::vector<double> best(net.size(), kInf);
    std::vector<char> on_path(net.size(), 0);
    std::function<void(NodeId, double)> dfs = [&](NodeId v, double len) {
        best[v] = std::min(best[v], len);
        on_path[v] = 1;
        for (std::size_t k = 0; k < net.edge_count(); ++k) {
            const Edge& e = net.edge(k);
            if (e.src == v && !on_path[e.dst])
                dfs(e.dst, len + delays[k]);
        }
        on_path[v] = 0;
    };
    dfs(root, 0.0);
    return best;
}

/// Log of the cascade likelihood evaluated in product form from the
/// density and survival functions:
///   prod_i [prod_{k earlier} S(t_i - t_k)] * sum_{j earlier} f(t_i - t_j) / S(t_i - t_j)
///   * prod_{i infected, m ignorant} S(T - t_i)
inline double product_form_loglik(const srcloc::RateMatrix& alpha, const Cascade& c, double window)
{
    double like = 1.0;
    auto inf = c.infections();
    for (const Infection& i : inf) {
        double surv = 1.0, ratio = 0.0;
        bool has_parent = false;
        for (const Infection& j : inf) {
            if (!(j.time < i.time))
                continue;
            has_parent = true;
            const double a = alpha.get(j.node, i.node);
            if (a > 0.0) {
                const double tau = i.time - j.time;
                surv *= srcloc::exp_survival(tau, a);
                ratio += srcloc::exp_density(tau, a) / srcloc::exp_survival(tau, a);
            }
        }
        like *= surv * (has_parent ? ratio : 1.0);
    }
    for (NodeId m = 0; m < alpha.size(); ++m) {
        if (c.is_infected(m))
            continue;
        for (const Infection& i : inf) {
            const double a = alpha.get(i.node, m);
            if (a > 0.0)
                like *= srcloc::exp_survival(window - i.time, a);
        }
    }
    return std::log(like);
}

/// Sum over i of (t_i - t_hat_i - ts)^2.
inline double start_time_objective(std::span<const double> t, std::span<const double> t_hat, double ts)
{
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = t[i] - t_hat[i] - ts;
        s += r * r;
    }
    return s;
}

/// Grid minimizer of start_time_objective over [lo, hi] with the given step.
inline double grid_start_time(std::span<const double> t, std::span<const double> t_hat, double lo, double hi,
                              double step)
{
    double best = lo, best_val = kInf;
    const auto n = static_cast<long>(std::floor((hi - lo) / step));
    for (long k = 0; k <= n; ++k) {
        const double ts = lo + static_cast<double>(k) * step;
        const double v = start_time_objective(t, t_hat, ts);
        if (v < best_val) {
            best_val = v;
            best = ts;
        }
    }
    return best;
}

/// Random fully observed training-style cascades on n nodes with times in
/// [0, window), generated without the simulator.
inline std::vector<Cascade> random_cascades(std::mt19937_64& rng, std::size_t n, std::size_t count, double window)
{
    std::uniform_real_distribution<double> time(0.0, window * 0.9);
    std::uniform_int_distribution<std::size_t> size(2, n - 1);
    std::vector<Cascade> out;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<NodeId> nodes(n);
        for (NodeId v = 0; v < n; ++v)
            nodes[v] = v;
        std::shuffle(nodes.begin(), nodes.end(), rng);
        nodes.resize(size(rng));
        std::vector<Infection> infs;
        infs.push_back({nodes[0], 0.0});
        for (std::size_t k = 1; k < nodes.size(); ++k)
            infs.push_back({nodes[k], 0.05 + time(rng)});
        out.emplace_back(std::move(infs), window);
    }
    return out;
}

/// Central-difference derivative of total_loglik along one candidate rate.
inline double fd_partial(srcloc::RateMatrix alpha, std::span<const Cascade> cs, double window, NodeId src,
                         NodeId dst, double h)
{
    const double a = alpha.get(src, dst);
    alpha.set(src, dst, a + h);
    const double up = srcloc::total_loglik(alpha, cs, window);
    alpha.set(src, dst, a - h);
    const double down = srcloc::total_loglik(alpha, cs, window);
    return (up - down) / (2.0 * h);
}

}  // namespace oracle
