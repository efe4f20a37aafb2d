#include "bdqm/stages.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdqm/fft.hpp"

namespace bdqm {

namespace {

// drops numerators that are not multiples of Q (numerical dust from exact
// cancellations) and rescales to denominator 1
PeriodicMatrixFunction to_integer_frequencies(const PeriodicMatrixFunction& f,
                                              const GridParams& gp) {
    const long long q = f.denom();
    PeriodicMatrixFunction out(f.order(), 1);
    for (const auto& [nu, c] : f.coeffs()) {
        if (nu % q == 0) {
            out.add_coeff(nu / q, c);
        } else if (c.norm() >= gp.tol) {
            throw std::runtime_error("stage element is not one-periodic: mode " +
                                     std::to_string(nu) + "/" + std::to_string(q));
        }
    }
    out.prune(gp.prune_floor);
    return out;
}

}  // namespace

StageElement::StageElement(SupernaturalSequence s, int stage, PeriodicMatrixFunction fn)
    : sigma(std::move(s)), m(stage), f(std::move(fn)) {
    if (m < 0 || m > sigma.length()) throw std::invalid_argument("stage index out of range");
    if (f.order() != int(sigma.boxtimes(m)))
        throw std::invalid_argument("stage element order mismatch");
    if (f.denom() != 1) throw std::invalid_argument("stage elements use integer frequencies");
}

StageElement StageElement::unit(const SupernaturalSequence& s, int stage) {
    return StageElement(s, stage, PeriodicMatrixFunction::identity(int(s.boxtimes(stage))));
}

StageElement StageElement::zero(const SupernaturalSequence& s, int stage) {
    return StageElement(s, stage, PeriodicMatrixFunction::zero(int(s.boxtimes(stage))));
}

long long boxtimes(const SupernaturalSequence& sigma, int m) { return sigma.boxtimes(m); }

StageElement embed_next(const StageElement& a, const GridParams& gp) {
    const int next = a.m + 1;
    if (next > a.sigma.length()) throw std::out_of_range("embed_next: stage overflow");
    const long long s = a.sigma.entry(next);
    const int n = a.f.order();

    // block diagonal of the rescaled copies, all over denominator s
    PeriodicMatrixFunction blocks(int(n * s), s);
    for (long long j = 0; j < s; ++j) {
        const PeriodicMatrixFunction piece = rescale_compose(a.f, s, j).with_denom(s);
        for (const auto& [nu, c] : piece.coeffs()) {
            Matrix big = Matrix::Zero(n * s, n * s);
            big.block(int(j) * n, int(j) * n, n, n) = c;
            blocks.add_coeff(nu, big);
        }
    }

    const PeriodicMatrixFunction u = stage_twist_unitary(a.sigma, next);
    PeriodicMatrixFunction out = u * blocks * u.adjointed();
    return StageElement(a.sigma, next, to_integer_frequencies(out, gp));
}

Matrix block_diag_project(const SupernaturalSequence& sigma, int m, const Matrix& M) {
    if (m < 1) throw std::invalid_argument("block_diag_project: m >= 1 required");
    const long long n = sigma.boxtimes(m);
    const int p = int(sigma.boxtimes(m - 1));
    const int s = sigma.entry(m);
    if (M.rows() != n || M.cols() != n)
        throw std::invalid_argument("block_diag_project: size mismatch");
    Matrix out = Matrix::Zero(n, n);
    for (int j = 0; j < s; ++j)
        out.block(j * p, j * p, p, p) = M.block(j * p, j * p, p, p);
    return out;
}

Matrix block_extract(const SupernaturalSequence& sigma, int m, int j, const Matrix& M) {
    if (m < 1) throw std::invalid_argument("block_extract: m >= 1 required");
    const int s = sigma.entry(m);
    if (j < 1 || j > s) throw std::invalid_argument("block_extract: block index out of range");
    const long long n = sigma.boxtimes(m);
    const int p = int(sigma.boxtimes(m - 1));
    if (M.rows() != n || M.cols() != n) throw std::invalid_argument("block_extract: size mismatch");
    return M.block((j - 1) * p, (j - 1) * p, p, p);
}

namespace {

// D applied coefficient-wise to U^* a U; shared by the expectation and the
// inverse fit.  Result has denominator sigma_m.
PeriodicMatrixFunction compressed_conjugate(const StageElement& a, const GridParams& gp) {
    const PeriodicMatrixFunction u = stage_twist_unitary(a.sigma, a.m);
    PeriodicMatrixFunction inner = u.adjointed() * a.f * u;
    PeriodicMatrixFunction proj(inner.order(), inner.denom());
    for (const auto& [nu, c] : inner.coeffs())
        proj.add_coeff(nu, block_diag_project(a.sigma, a.m, c));
    proj.prune(gp.prune_floor);
    return proj;
}

}  // namespace

StageElement stage_expectation(const StageElement& a, const GridParams& gp) {
    if (a.m < 1) throw std::invalid_argument("stage_expectation: no previous stage at m = 0");
    const PeriodicMatrixFunction u = stage_twist_unitary(a.sigma, a.m);
    const PeriodicMatrixFunction proj = compressed_conjugate(a, gp);
    PeriodicMatrixFunction out = u * proj * u.adjointed();
    return StageElement(a.sigma, a.m, to_integer_frequencies(out, gp));
}

InverseResult embed_inverse(const StageElement& b, const GridParams& gp) {
    if (b.m < 1) throw std::invalid_argument("embed_inverse: no previous stage at m = 0");
    const long long s = b.sigma.entry(b.m);
    const int p = int(b.sigma.boxtimes(b.m - 1));

    const PeriodicMatrixFunction g = compressed_conjugate(b, gp);

    // the fitted function has integer frequencies bounded by g's numerators
    const long long numax = g.max_abs_numerator();
    const std::size_t want = std::max<std::size_t>(
        std::size_t(gp.oversample) * std::size_t(2 * numax + 1), std::size_t(gp.min_grid));
    const int N = int(next_pow2(want));

    // samples of f over [0,1): block j of g at t = s*x - j for x in [j/s,(j+1)/s)
    std::vector<Matrix> samples(std::size_t(N));
    for (int i = 0; i < N; ++i) {
        const double x = double(i) / double(N);
        const int j = std::min<int>(int(x * double(s)), int(s - 1));
        const double t = double(s) * x - double(j);
        samples[std::size_t(i)] = block_extract(b.sigma, b.m, j + 1, g.evaluate(t));
    }

    PeriodicMatrixFunction fit(p, 1);
    std::vector<std::complex<double>> line(std::size_t(N));
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) {
            for (int i = 0; i < N; ++i) line[std::size_t(i)] = samples[std::size_t(i)](r, c);
            fft_radix2(line, false);
            for (int k = 0; k < N; ++k) {
                const long long nu = (k <= N / 2) ? k : k - N;
                const Complex coeff = line[std::size_t(k)] / double(N);
                if (std::abs(coeff) <= gp.prune_floor) continue;
                Matrix e = Matrix::Zero(p, p);
                e(r, c) = coeff;
                fit.add_coeff(nu, e);
            }
        }
    fit.prune(gp.prune_floor);

    StageElement value(b.sigma, b.m - 1, fit);

    // residual of the fit against the block-compressed target; equals
    // ||alpha(value) - E(b)|| by unitary invariance
    PeriodicMatrixFunction rebuilt(g.order(), s);
    for (long long j = 0; j < s; ++j) {
        const PeriodicMatrixFunction piece = rescale_compose(fit, s, j).with_denom(s);
        for (const auto& [nu, c] : piece.coeffs()) {
            Matrix big = Matrix::Zero(g.order(), g.order());
            big.block(int(j) * p, int(j) * p, p, p) = c;
            rebuilt.add_coeff(nu, big);
        }
    }
    const double residual = sup_norm(rebuilt - g, gp);
    return {std::move(value), residual};
}

std::complex<double> stage_trace(const StageElement& a) {
    return a.f.coeff(0).trace() / double(a.f.order());
}

double stage_lipnorm(const StageElement& a, const GridParams& gp) {
    if (!is_self_adjoint(a.f, gp.tol))
        throw std::invalid_argument("stage_lipnorm: self-adjoint element required");
    PeriodicMatrixFunction conj = a.f;
    if (a.m >= 1) {
        const PeriodicMatrixFunction u = stage_twist_unitary(a.sigma, a.m);
        conj = u.adjointed() * a.f * u;
    }
    const double slope = lipschitz_seminorm(conj, gp);
    const double tau = stage_trace(a).real();
    const PeriodicMatrixFunction centered =
        a.f - PeriodicMatrixFunction::identity(a.f.order()) * Complex(tau, 0.0);
    const double spread = sup_norm(centered, gp);
    return std::max(slope, spread);
}

StageConstants stage_constants(const SupernaturalSequence& sigma, int m, const GridParams& gp) {
    return stage_constants_table(sigma, m, gp).back();
}

std::vector<StageConstants> stage_constants_table(const SupernaturalSequence& sigma, int max_m,
                                                  const GridParams& gp) {
    if (max_m < 1 || max_m > sigma.length())
        throw std::out_of_range("stage_constants: stage out of range");
    std::vector<StageConstants> table;
    double kappa_prev = 1.0;
    for (int m = 1; m <= max_m; ++m) {
        StageConstants sc;
        sc.m = m;
        sc.lU = (m == 1) ? 0.0 : lipschitz_seminorm(twist_unitary(sigma.entry(m - 1)), gp);
        sc.k = std::max(1.0, (1.0 + 2.0 * sc.lU) / double(sigma.entry(m)));
        sc.kappa = (m == 1) ? 1.0 : kappa_prev / sc.k;
        sc.beta = std::ldexp(1.0, -m);
        sc.c = 1.0 / (double(sigma.entry(m)) * double(sigma.entry(m)) * sc.k);
        sc.d = sc.k;
        kappa_prev = sc.kappa;
        table.push_back(sc);
    }
    return table;
}

double recursive_seminorm(const StageElement& a, const GridParams& gp) {
    if (!is_self_adjoint(a.f, gp.tol))
        throw std::invalid_argument("recursive_seminorm: self-adjoint element required");
    if (a.m == 0) return stage_lipnorm(a, gp);

    const auto table = stage_constants_table(a.sigma, a.m, gp);
    const double kappa = table.back().kappa;

    const StageElement expect = stage_expectation(a, gp);
    const InverseResult inv = embed_inverse(a, gp);
    if (inv.residual > std::max(gp.tol, 1e-6))
        throw std::runtime_error("recursive_seminorm: inverse fit residual " +
                                 std::to_string(inv.residual));

    const double term_lip = kappa * stage_lipnorm(a, gp);
    const double term_prev = recursive_seminorm(inv.value, gp);
    const double term_gap = std::ldexp(1.0, a.m) * sup_norm(a.f - expect.f, gp);
    return std::max({term_lip, term_prev, term_gap});
}

StageElement random_stage_element(const SupernaturalSequence& sigma, int m, int cutoff,
                                  std::uint64_t seed) {
    const int n = int(sigma.boxtimes(m));
    return StageElement(sigma, m, random_hermitian_trigpoly(n, cutoff, seed));
}

}  // namespace bdqm
