#ifndef BDQM_STAGES_HPP
#define BDQM_STAGES_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "bdqm/matfun.hpp"
#include "bdqm/unitaries.hpp"

namespace bdqm {

// One-periodic matrix function living at stage m of the tower for sigma:
// order boxtimes(m), integer frequencies (denominator 1).
struct StageElement {
    SupernaturalSequence sigma;
    int m = 0;
    PeriodicMatrixFunction f;

    StageElement() = default;
    StageElement(SupernaturalSequence s, int stage, PeriodicMatrixFunction fn);

    static StageElement unit(const SupernaturalSequence& s, int stage);
    static StageElement zero(const SupernaturalSequence& s, int stage);
};

struct StageConstants {
    int m = 0;
    double lU = 0.0;      // Lipschitz seminorm of the previous stage twist unitary
    double k = 1.0;       // max{1, (1 + 2 lU)/sigma_m}
    double kappa = 1.0;   // kappa_0 = kappa_1 = 1, kappa_m = kappa_{m-1}/k_m
    double beta = 1.0;    // 2^{-m}
    double c = 1.0;       // lower sandwich constant 1/(sigma_m^2 k_m)
    double d = 1.0;       // upper sandwich constant k_m
};

long long boxtimes(const SupernaturalSequence& sigma, int m);

// Twisted block-diagonal embedding of stage m into stage m+1.
StageElement embed_next(const StageElement& a, const GridParams& gp);

// Block projection keeping the sigma_m diagonal blocks of size boxtimes(m-1).
Matrix block_diag_project(const SupernaturalSequence& sigma, int m, const Matrix& M);
// Block (j,j), 1 <= j <= sigma_m.
Matrix block_extract(const SupernaturalSequence& sigma, int m, int j, const Matrix& M);

// Conditional expectation onto the image of the previous stage, exact in the
// Fourier representation.  Requires m >= 1.
StageElement stage_expectation(const StageElement& a, const GridParams& gp);

struct InverseResult {
    StageElement value;
    double residual = 0.0;  // sup distance between the re-embedded fit and E(input)
};

// Inverse of the embedding on (a neighborhood of) its image: sample the
// block-compressed function, fit integer frequencies by FFT, report the
// residual.  Requires m >= 1.
InverseResult embed_inverse(const StageElement& b, const GridParams& gp);

std::complex<double> stage_trace(const StageElement& a);

// max{ l(U* a U), ||a - tau(a) 1|| } for self-adjoint a.
double stage_lipnorm(const StageElement& a, const GridParams& gp);

StageConstants stage_constants(const SupernaturalSequence& sigma, int m, const GridParams& gp);
std::vector<StageConstants> stage_constants_table(const SupernaturalSequence& sigma, int max_m,
                                                  const GridParams& gp);

// Recursive seminorm: S_0 = L_0 and for m >= 1
//   S_m(a) = max{ kappa_m L_m(a), S_{m-1}(inverse(E(a))), 2^m ||a - E(a)|| }.
double recursive_seminorm(const StageElement& a, const GridParams& gp);

StageElement random_stage_element(const SupernaturalSequence& sigma, int m, int cutoff,
                                  std::uint64_t seed);

}  // namespace bdqm

#endif
