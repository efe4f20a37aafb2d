#ifndef BDQM_THREAD_SPACE_HPP
#define BDQM_THREAD_SPACE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bdqm/stages.hpp"

namespace bdqm {

// Truncated compatibility thread: entry n is a pair in the direct sum of
// stages n and n+1, for n = 0..depth-1.
struct Thread {
    SupernaturalSequence sigma;
    std::vector<std::pair<StageElement, StageElement>> entries;

    int depth() const { return int(entries.size()); }
};

struct CompatReport {
    bool ok = true;
    int first_violation = -1;
    double worst_gap = 0.0;
};

// a^n_{n+1} = a^{n+1}_{n+1} entrywise, within tol.
CompatReport check_thread_compat(const Thread& t, double tol, const GridParams& gp);

// sup over entries of the evident-tunnel seminorm
//   max{ S_n(a), S_{n+1}(b), ||alpha(a) - b|| / (2 beta(n)) }.
double thread_seminorm_s0(const Thread& t, const std::function<double(int)>& beta,
                          const GridParams& gp);

// Isometric embedding of a stage-n element as a thread: zeros before entry
// n-1, (0, a) at entry n-1, forward pushes afterwards.
Thread embed_psi(const SupernaturalSequence& sigma, int n, const StageElement& a, int depth,
                 const GridParams& gp);

double thread_norm(const Thread& t, const GridParams& gp);

}  // namespace bdqm

#endif
