#include "bdqm/thread_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdqm {

CompatReport check_thread_compat(const Thread& t, double tol, const GridParams& gp) {
    CompatReport rep;
    for (int n = 0; n + 1 < t.depth(); ++n) {
        const double gap =
            sup_norm(t.entries[std::size_t(n)].second.f - t.entries[std::size_t(n + 1)].first.f, gp);
        rep.worst_gap = std::max(rep.worst_gap, gap);
        if (gap > tol && rep.ok) {
            rep.ok = false;
            rep.first_violation = n;
        }
    }
    return rep;
}

double thread_seminorm_s0(const Thread& t, const std::function<double(int)>& beta,
                          const GridParams& gp) {
    const CompatReport compat = check_thread_compat(t, std::max(gp.tol, 1e-8), gp);
    if (!compat.ok)
        throw std::invalid_argument("thread_seminorm_s0: incompatible thread at entry " +
                                    std::to_string(compat.first_violation));
    double best = 0.0;
    for (int n = 0; n < t.depth(); ++n) {
        const auto& [a, b] = t.entries[std::size_t(n)];
        const double sa = recursive_seminorm(a, gp);
        const double sb = recursive_seminorm(b, gp);
        const StageElement pushed = embed_next(a, gp);
        const double gap = sup_norm(pushed.f - b.f, gp) / (2.0 * beta(n));
        best = std::max({best, sa, sb, gap});
    }
    return best;
}

Thread embed_psi(const SupernaturalSequence& sigma, int n, const StageElement& a, int depth,
                 const GridParams& gp) {
    if (n >= depth) throw std::invalid_argument("embed_psi: stage index must be below depth");
    if (a.m != n) throw std::invalid_argument("embed_psi: element not at the stated stage");

    Thread t;
    t.sigma = sigma;
    t.entries.reserve(std::size_t(depth));

    // forward pushes a = push_n, push_{n+1}, ..., push_depth
    std::vector<StageElement> push;
    push.push_back(a);
    for (int k = n; k < depth; ++k) push.push_back(embed_next(push.back(), gp));

    for (int k = 0; k < depth; ++k) {
        if (k < n - 1) {
            t.entries.emplace_back(StageElement::zero(sigma, k), StageElement::zero(sigma, k + 1));
        } else if (k == n - 1) {
            t.entries.emplace_back(StageElement::zero(sigma, k), a);
        } else {
            t.entries.emplace_back(push[std::size_t(k - n)], push[std::size_t(k - n + 1)]);
        }
    }
    return t;
}

double thread_norm(const Thread& t, const GridParams& gp) {
    double best = 0.0;
    for (const auto& [a, b] : t.entries)
        best = std::max({best, sup_norm(a.f, gp), sup_norm(b.f, gp)});
    return best;
}

}  // namespace bdqm
