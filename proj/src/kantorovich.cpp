#include "bdqm/kantorovich.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "bdqm/parallel.hpp"
#include "bdqm/rng.hpp"

namespace bdqm {

namespace {

struct RestartOutcome {
    double value = -std::numeric_limits<double>::infinity();
    RealVector maximizer;
    bool degenerate = false;
};

RestartOutcome run_restart(const QMSpace& sp, const RealVector& g, const RealVector& u,
                           const SolverParams& p, int restart) {
    const int d = sp.dim();
    Rng rng(mix_seed(p.seed, std::uint64_t(restart)));

    RealVector x(d);
    if (restart == 0) {
        x = g;  // the linear functional itself is the natural first ansatz
    } else {
        for (int j = 0; j < d; ++j) x[j] = rng.gauss();
    }
    x -= x.dot(u) * u;

    RestartOutcome out;
    double lx = sp.lip(x);
    if (!(lx > p.degenerate_tol)) {
        if (x.norm() > 1e-6) out.degenerate = true;
        return out;
    }
    x /= lx;
    out.value = std::abs(g.dot(x));
    out.maximizer = (g.dot(x) >= 0) ? x : RealVector(-x);

    double step = p.initial_step;
    for (int it = 0; it < p.iterations; ++it) {
        const double v = g.dot(x);
        const RealVector sg = sp.lip_subgradient(x);
        RealVector dir = g - v * sg;  // ascent direction of the ratio at lip(x) = 1
        dir -= dir.dot(u) * u;
        const double dn = dir.norm();
        if (dn < 1e-14) break;
        x += step * std::max(x.norm(), 1e-12) * dir / dn;
        x -= x.dot(u) * u;
        lx = sp.lip(x);
        if (!(lx > p.degenerate_tol)) {
            out.degenerate = out.degenerate || x.norm() > 1e-6;
            for (int j = 0; j < d; ++j) x[j] = rng.gauss();
            x -= x.dot(u) * u;
            lx = sp.lip(x);
            if (!(lx > p.degenerate_tol)) break;
        }
        x /= lx;
        const double val = std::abs(g.dot(x));
        if (val > out.value) {
            out.value = val;
            out.maximizer = (g.dot(x) >= 0) ? x : RealVector(-x);
        }
        step *= p.step_decay;
    }
    return out;
}

}  // namespace

KantorovichResult kantorovich(const QMSpace& space, const StateFunctional& phi,
                              const StateFunctional& psi, const SolverParams& params) {
    const int d = space.dim();
    if (phi.w.size() != d || psi.w.size() != d)
        throw std::invalid_argument("kantorovich: state dimension mismatch");

    KantorovichResult res;
    res.maximizer = RealVector::Zero(d);

    RealVector g = phi.w - psi.w;
    const RealVector u = space.unit() / space.unit().norm();
    g -= g.dot(u) * u;
    if (g.norm() < 1e-15) return res;  // identical states

    std::vector<RestartOutcome> outs(std::size_t(params.restarts));
    par::parallel_for(params.restarts,
                      [&](long r) { outs[std::size_t(r)] = run_restart(space, g, u, params, int(r)); });

    double lo = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int r = 0; r < params.restarts; ++r) {
        const auto& o = outs[std::size_t(r)];
        res.degenerate = res.degenerate || o.degenerate;
        if (!std::isfinite(o.value)) continue;
        lo = std::min(lo, o.value);
        if (best < 0 || o.value > outs[std::size_t(best)].value) best = r;
    }
    if (best >= 0) {
        res.value = outs[std::size_t(best)].value;
        res.maximizer = outs[std::size_t(best)].maximizer;
        res.restart_spread = res.value - lo;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Exact transportation oracle (successive shortest paths on the bipartite
// surplus/deficit graph, Bellman-Ford distances, real-valued mass).

double kantorovich_exact_finite(const Eigen::MatrixXd& distances, const RealVector& mu,
                                const RealVector& nu) {
    const int k = int(distances.rows());
    if (distances.cols() != k) throw std::invalid_argument("distance matrix must be square");
    if (k > 64) throw std::invalid_argument("oracle limited to 64 points");
    if (mu.size() != k || nu.size() != k)
        throw std::invalid_argument("probability vector size mismatch");
    for (int i = 0; i < k; ++i)
        if (mu[i] < -1e-12 || nu[i] < -1e-12)
            throw std::invalid_argument("probability vectors must be nonnegative");
    if (std::abs(mu.sum() - 1.0) > 1e-9 || std::abs(nu.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("probability vectors must sum to 1");

    const RealVector w = mu - nu;
    std::vector<int> sources, sinks;
    for (int i = 0; i < k; ++i) {
        if (w[i] > 1e-15) sources.push_back(i);
        if (w[i] < -1e-15) sinks.push_back(i);
    }
    if (sources.empty()) return 0.0;

    struct Edge {
        int to;
        double cap;
        double cost;
        int rev;
    };
    const int ns = int(sources.size()), nt = int(sinks.size());
    const int V = ns + nt + 2, S = ns + nt, T = ns + nt + 1;
    std::vector<std::vector<Edge>> adj(std::size_t(V));
    auto add_edge = [&](int a, int b, double cap, double cost) {
        adj[std::size_t(a)].push_back({b, cap, cost, int(adj[std::size_t(b)].size())});
        adj[std::size_t(b)].push_back({a, 0.0, -cost, int(adj[std::size_t(a)].size()) - 1});
    };
    for (int i = 0; i < ns; ++i) add_edge(S, i, w[sources[std::size_t(i)]], 0.0);
    for (int j = 0; j < nt; ++j) add_edge(ns + j, T, -w[sinks[std::size_t(j)]], 0.0);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j)
            add_edge(i, ns + j, std::numeric_limits<double>::infinity(),
                     distances(sources[std::size_t(i)], sinks[std::size_t(j)]));

    double total = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 4 * V * V; ++round) {
        std::vector<double> dist(std::size_t(V), inf);
        std::vector<int> pv(std::size_t(V), -1), pe(std::size_t(V), -1);
        dist[std::size_t(S)] = 0.0;
        for (int it = 0; it < V; ++it) {  // Bellman-Ford
            bool changed = false;
            for (int a = 0; a < V; ++a) {
                if (dist[std::size_t(a)] == inf) continue;
                for (int e = 0; e < int(adj[std::size_t(a)].size()); ++e) {
                    const Edge& ed = adj[std::size_t(a)][std::size_t(e)];
                    if (ed.cap <= 1e-15) continue;
                    const double nd = dist[std::size_t(a)] + ed.cost;
                    if (nd < dist[std::size_t(ed.to)] - 1e-15) {
                        dist[std::size_t(ed.to)] = nd;
                        pv[std::size_t(ed.to)] = a;
                        pe[std::size_t(ed.to)] = e;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (dist[std::size_t(T)] == inf) break;
        double push = inf;
        for (int vtx = T; vtx != S; vtx = pv[std::size_t(vtx)])
            push = std::min(push, adj[std::size_t(pv[std::size_t(vtx)])][std::size_t(pe[std::size_t(vtx)])].cap);
        for (int vtx = T; vtx != S; vtx = pv[std::size_t(vtx)]) {
            Edge& ed = adj[std::size_t(pv[std::size_t(vtx)])][std::size_t(pe[std::size_t(vtx)])];
            ed.cap -= push;
            adj[std::size_t(vtx)][std::size_t(ed.rev)].cap += push;
        }
        total += push * dist[std::size_t(T)];
    }
    return total;
}

double hausdorff(const std::function<double(int, int)>& metric, int na, int nb) {
    if (na < 1 || nb < 1) throw std::invalid_argument("hausdorff: empty set");
    double dab = 0.0;
    for (int i = 0; i < na; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < nb; ++j) best = std::min(best, metric(i, j));
        dab = std::max(dab, best);
    }
    double dba = 0.0;
    for (int j = 0; j < nb; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < na; ++i) best = std::min(best, metric(i, j));
        dba = std::max(dba, best);
    }
    return std::max(dab, dba);
}

Eigen::MatrixXd kantorovich_matrix(const QMSpace& space, const std::vector<StateFunctional>& a,
                                   const std::vector<StateFunctional>& b,
                                   const SolverParams& params) {
    const long na = long(a.size()), nb = long(b.size());
    Eigen::MatrixXd out(na, nb);
    par::parallel_for(na * nb, [&](long idx) {
        const long i = idx / nb, j = idx % nb;
        out(i, j) = kantorovich(space, a[std::size_t(i)], b[std::size_t(j)], params).value;
    });
    return out;
}

}  // namespace bdqm
