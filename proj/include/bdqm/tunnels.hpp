#ifndef BDQM_TUNNELS_HPP
#define BDQM_TUNNELS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bdqm/kantorovich.hpp"
#include "bdqm/spaces.hpp"

namespace bdqm {

// Bridge with identity pivot: a unital linear realization of the domain
// inside the codomain.
struct Bridge {
    std::shared_ptr<const QMSpace> domain;
    std::shared_ptr<const QMSpace> codomain;
    std::function<RealVector(const RealVector&)> embed;
    std::string pivot = "identity";
    std::string label;
};

// Direct-sum tunnel built from a bridge: lip(a,b) = max{L_A(a), L_B(b),
// ||embed(a) - b||/r}, with the two coordinate surjections implicit.
struct Tunnel {
    std::shared_ptr<DirectSumSpace> total;
    double r = 0.0;
    std::string label;
};

Tunnel evident_tunnel(const Bridge& bridge, double r);

// Evaluator produced by gluing a Lip-norm to a conditional expectation:
// a -> max{ L(a), ||a - E(a)||/eps }.
struct ModifiedLip {
    std::function<double(const RealVector&)> value;
    bool hypothesis_ok = true;
    std::string note;
};

ModifiedLip modified_lipnorm_cond_exp(std::shared_ptr<const QMSpace> space,
                                      std::function<RealVector(const RealVector&)> expectation,
                                      double eps, std::uint64_t seed);

// b -> max{ L_B(b), ||b - E(b)||/eps, L_A(inverse(E(b))) } for a bi-Lipschitz
// realization alpha of A inside B with expectation E onto its image.
ModifiedLip modified_lipnorm_bilip(std::shared_ptr<const QMSpace> space_a,
                                   std::shared_ptr<const QMSpace> space_b,
                                   std::function<RealVector(const RealVector&)> alpha,
                                   std::function<RealVector(const RealVector&)> alpha_inverse,
                                   std::function<RealVector(const RealVector&)> expectation,
                                   double eps, std::uint64_t seed);

struct BridgeSample {
    double distance = 0.0;      // ||embed(a) - candidate(a)|| in the codomain
    double partner_lip = 0.0;   // lip of the candidate partner
    bool certificate = true;    // partner stayed in the unit ball
};

struct BridgeLengthReport {
    double empirical_sup = 0.0;
    std::vector<BridgeSample> samples;
};

// Samples unit-ball elements on one side, maps them by the candidate, and
// records the achieved distances: per-sample upper bounds on the inf, an
// empirical estimate of the bridge length from that side.
BridgeLengthReport bridge_length_estimate(const Bridge& bridge, bool from_domain,
                                          const std::function<RealVector(const RealVector&)>& candidate,
                                          int samples, std::uint64_t seed);

// Net-restricted tunnel extent: lift both nets through the coordinate
// surjections and take the Hausdorff max-min of pairwise engine distances.
double tunnel_extent_estimate(const Tunnel& tunnel, const StateNet& net_a, const StateNet& net_b,
                              const SolverParams& params);

struct BoundLink {
    int from_stage = 0;
    int to_stage = 0;
    std::string theorem;
    double constant = 0.0;
};

struct BoundReport {
    std::vector<BoundLink> links;
    double total = 0.0;                  // sum of the consecutive links
    std::optional<BoundLink> tail;       // stage-to-limit bound
    std::string norm_convention;         // coefficient-convention flags
};

// Chained upper bounds between stages n and M: consecutive links 4*2^{-j},
// tail-to-limit 2^{3-n}.
BoundReport distq_chain_bound(const SupernaturalSequence& sigma, int from_stage, int to_stage);

struct BaireDistance {
    double value = 0.0;
    bool prefix_equal = false;
    int first_difference = 0;  // 1-based, 0 when equal on the compared prefix
};

BaireDistance baire_distance(const std::vector<int>& x, const std::vector<int>& y);

struct BaireCheck {
    int n = 0;               // index of the first difference
    double distance = 0.0;   // 2^{-n}
    double chain = 0.0;      // 8*sum_{j>=n} 2^{-j} twice = 32*2^{-n}
    double ratio = 1.0;      // chain / (32 * distance)
    double evaluator_discrepancy = 0.0;
    bool prefix_equal = false;
    bool pass = false;
};

// Shared-prefix stage identity plus the Lipschitz-in-the-Baire-metric chain
// arithmetic; stage seminorm evaluators are compared on sampled elements at
// every stage both sequences share.
BaireCheck baire_lipschitz_check(const std::vector<int>& x, const std::vector<int>& y, int depth,
                                 int samples, std::uint64_t seed, const GridParams& gp);

}  // namespace bdqm

#endif
