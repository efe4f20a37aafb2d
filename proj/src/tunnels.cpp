#include "bdqm/tunnels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdqm/parallel.hpp"
#include "bdqm/rng.hpp"

namespace bdqm {

Tunnel evident_tunnel(const Bridge& bridge, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("evident_tunnel: r must be positive");
    auto dom = bridge.domain;
    auto cod = bridge.codomain;
    auto embed = bridge.embed;

    PairLip pair;
    pair.value = [dom, cod, embed, r](const RealVector& a, const RealVector& b) {
        const double la = dom->lip(a);
        const double lb = cod->lip(b);
        const double gap = cod->norm(embed(a) - b) / r;
        return std::max({la, lb, gap});
    };
    // numeric fallback subgradient is fine at toy dimensions; analytic branch
    // selection happens inside the factor lips anyway
    auto total = std::make_shared<DirectSumSpace>(
        dom, cod, std::move(pair),
        "evident tunnel (r=" + std::to_string(r) + ") over " + bridge.label);
    return {total, r, bridge.label};
}

namespace {

RealVector random_direction(const QMSpace& sp, Rng& rng) {
    RealVector x(sp.dim());
    for (int j = 0; j < sp.dim(); ++j) x[j] = rng.gauss();
    const RealVector u = sp.unit() / sp.unit().norm();
    x -= x.dot(u) * u;
    return x;
}

}  // namespace

ModifiedLip modified_lipnorm_cond_exp(std::shared_ptr<const QMSpace> space,
                                      std::function<RealVector(const RealVector&)> expectation,
                                      double eps, std::uint64_t seed) {
    if (!(eps > 0.0)) throw std::invalid_argument("modified_lipnorm_cond_exp: eps must be > 0");
    ModifiedLip out;

    // sampled hypotheses: E idempotent, unital, L(E(a)) <= L(a)
    Rng rng(mix_seed(seed, 41));
    const RealVector unit = space->unit();
    if (space->norm(expectation(unit) - unit) > 1e-8) {
        out.hypothesis_ok = false;
        out.note = "expectation is not unital";
    }
    for (int k = 0; k < 10 && out.hypothesis_ok; ++k) {
        const RealVector x = random_direction(*space, rng);
        const RealVector ex = expectation(x);
        if (space->norm(expectation(ex) - ex) > 1e-7) {
            out.hypothesis_ok = false;
            out.note = "expectation is not idempotent";
        } else if (space->lip(ex) > space->lip(x) + 1e-7) {
            out.hypothesis_ok = false;
            out.note = "lip does not contract under the expectation";
        }
    }

    out.value = [space, expectation, eps](const RealVector& a) {
        return std::max(space->lip(a), space->norm(a - expectation(a)) / eps);
    };
    return out;
}

ModifiedLip modified_lipnorm_bilip(std::shared_ptr<const QMSpace> space_a,
                                   std::shared_ptr<const QMSpace> space_b,
                                   std::function<RealVector(const RealVector&)> alpha,
                                   std::function<RealVector(const RealVector&)> alpha_inverse,
                                   std::function<RealVector(const RealVector&)> expectation,
                                   double eps, std::uint64_t seed) {
    if (!(eps > 0.0)) throw std::invalid_argument("modified_lipnorm_bilip: eps must be > 0");
    ModifiedLip out;

    Rng rng(mix_seed(seed, 43));
    for (int k = 0; k < 10; ++k) {
        const RealVector a = random_direction(*space_a, rng);
        const double la = space_a->lip(a);
        const double lba = space_b->lip(alpha(a));
        if (lba > la + 1e-7) {
            out.hypothesis_ok = false;
            out.note = "upper Lipschitz hypothesis fails on a sample";
            break;
        }
        const RealVector b = random_direction(*space_b, rng);
        if (space_b->lip(expectation(b)) > space_b->lip(b) + 1e-7) {
            out.hypothesis_ok = false;
            out.note = "expectation does not contract lip";
            break;
        }
    }

    out.value = [space_a, space_b, alpha_inverse, expectation, eps](const RealVector& b) {
        const RealVector eb = expectation(b);
        return std::max({space_b->lip(b), space_b->norm(b - eb) / eps,
                         space_a->lip(alpha_inverse(eb))});
    };
    return out;
}

BridgeLengthReport bridge_length_estimate(const Bridge& bridge, bool from_domain,
                                          const std::function<RealVector(const RealVector&)>& candidate,
                                          int samples, std::uint64_t seed) {
    const QMSpace& from = from_domain ? *bridge.domain : *bridge.codomain;
    const QMSpace& to = from_domain ? *bridge.codomain : *bridge.domain;

    BridgeLengthReport rep;
    rep.samples.resize(std::size_t(samples));
    par::parallel_for(samples, [&](long k) {
        Rng rng(mix_seed(seed, std::uint64_t(k)));
        RealVector x = random_direction(from, rng);
        const double lx = from.lip(x);
        if (lx > 1e-12) x /= lx;  // unit ball boundary
        const RealVector partner = candidate(x);

        BridgeSample s;
        s.partner_lip = to.lip(partner);
        s.certificate = s.partner_lip <= 1.0 + 1e-8;
        if (from_domain)
            s.distance = bridge.codomain->norm(bridge.embed(x) - partner);
        else
            s.distance = bridge.codomain->norm(bridge.embed(partner) - x);
        rep.samples[std::size_t(k)] = s;
    });
    for (const auto& s : rep.samples) rep.empirical_sup = std::max(rep.empirical_sup, s.distance);
    return rep;
}

double tunnel_extent_estimate(const Tunnel& tunnel, const StateNet& net_a, const StateNet& net_b,
                              const SolverParams& params) {
    if (net_a.states.empty() || net_b.states.empty())
        throw std::invalid_argument("tunnel_extent_estimate: empty net");
    std::vector<StateFunctional> lifted_a, lifted_b;
    lifted_a.reserve(net_a.states.size());
    lifted_b.reserve(net_b.states.size());
    for (const auto& s : net_a.states) lifted_a.push_back(lift_state(*tunnel.total, s, true));
    for (const auto& s : net_b.states) lifted_b.push_back(lift_state(*tunnel.total, s, false));

    const Eigen::MatrixXd K = kantorovich_matrix(*tunnel.total, lifted_a, lifted_b, params);
    return hausdorff([&](int i, int j) { return K(i, j); }, int(lifted_a.size()),
                     int(lifted_b.size()));
}

BoundReport distq_chain_bound(const SupernaturalSequence& sigma, int from_stage, int to_stage) {
    if (from_stage < 0 || to_stage < from_stage || to_stage > sigma.length())
        throw std::invalid_argument("distq_chain_bound: invalid stage range");
    BoundReport rep;
    rep.norm_convention =
        "gap coefficient 2^m (epsilon_m = 2^-m); the literal 1/2^m reading is non-contractive";
    for (int j = from_stage; j < to_stage; ++j) {
        BoundLink link;
        link.from_stage = j;
        link.to_stage = j + 1;
        link.theorem = "consecutive-stage bound, 4*beta(j)";
        link.constant = 4.0 * std::ldexp(1.0, -j);
        rep.links.push_back(link);
        rep.total += link.constant;
    }
    BoundLink tail;
    tail.from_stage = from_stage;
    tail.to_stage = -1;  // limit object
    tail.theorem = "tail-to-limit bound, 4*sum_{j>=n} beta(j)";
    tail.constant = std::ldexp(1.0, 3 - from_stage);
    rep.tail = tail;
    return rep;
}

BaireDistance baire_distance(const std::vector<int>& x, const std::vector<int>& y) {
    const std::size_t depth = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < depth; ++i) {
        if (x[i] != y[i]) {
            BaireDistance d;
            d.first_difference = int(i) + 1;
            d.value = std::ldexp(1.0, -d.first_difference);
            return d;
        }
    }
    BaireDistance d;
    d.prefix_equal = true;
    return d;
}

BaireCheck baire_lipschitz_check(const std::vector<int>& x, const std::vector<int>& y, int depth,
                                 int samples, std::uint64_t seed, const GridParams& gp) {
    BaireCheck out;
    const BaireDistance d = baire_distance(x, y);
    if (d.prefix_equal) {
        out.prefix_equal = true;
        out.pass = false;
        return out;
    }
    out.n = d.first_difference;
    if (out.n > depth) throw std::invalid_argument("baire_lipschitz_check: depth too small");
    out.distance = d.value;

    // stage evaluator agreement on every shared stage
    const SupernaturalSequence sx(std::vector<int>(x.begin(), x.end()));
    const SupernaturalSequence sy(std::vector<int>(y.begin(), y.end()));
    double disc = 0.0;
    for (int m = 0; m <= out.n - 1 && m <= std::min(sx.length(), sy.length()); ++m) {
        for (int k = 0; k < samples; ++k) {
            const auto ax = random_stage_element(sx, m, 1, mix_seed(seed, std::uint64_t(m * 100 + k)));
            const StageElement ay(sy, m, ax.f);
            const double vx = recursive_seminorm(ax, gp);
            const double vy = recursive_seminorm(ay, gp);
            disc = std::max(disc, std::abs(vx - vy));
        }
    }
    out.evaluator_discrepancy = disc;

    // 8*sum_{j>=n} 2^{-j} + 0 + 8*sum_{j>=n} 2^{-j} = 32*2^{-n}
    const double tail = std::ldexp(1.0, 1 - out.n);
    out.chain = 8.0 * tail + 0.0 + 8.0 * tail;
    out.ratio = out.chain / (32.0 * out.distance);
    out.pass = (out.chain == 32.0 * out.distance) && disc < 1e-9;
    return out;
}

}  // namespace bdqm
