#include "bdqm/matfun.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bdqm/parallel.hpp"
#include "bdqm/rng.hpp"

namespace bdqm {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
constexpr double kDefaultPruneFloor = 1e-14;

long long llgcd(long long a, long long b) { return std::gcd(a, b); }
long long lllcm(long long a, long long b) { return a / llgcd(a, b) * b; }
}  // namespace

PeriodicMatrixFunction::PeriodicMatrixFunction(int order, long long denom)
    : n_(order), q_(denom) {
    if (order < 1) throw std::invalid_argument("matrix order must be positive");
    if (denom < 1) throw std::invalid_argument("frequency denominator must be positive");
}

PeriodicMatrixFunction PeriodicMatrixFunction::constant(const Matrix& c) {
    if (c.rows() != c.cols()) throw std::invalid_argument("constant: square matrix required");
    PeriodicMatrixFunction f(int(c.rows()), 1);
    if (c.norm() > 0) f.coeffs_[0] = c;
    return f;
}

PeriodicMatrixFunction PeriodicMatrixFunction::identity(int order) {
    return constant(Matrix::Identity(order, order));
}

PeriodicMatrixFunction PeriodicMatrixFunction::zero(int order) {
    return PeriodicMatrixFunction(order, 1);
}

PeriodicMatrixFunction PeriodicMatrixFunction::mode(long long nu, long long denom, const Matrix& c) {
    if (c.rows() != c.cols()) throw std::invalid_argument("mode: square matrix required");
    PeriodicMatrixFunction f(int(c.rows()), denom);
    f.coeffs_[nu] = c;
    return f;
}

Matrix PeriodicMatrixFunction::coeff(long long nu) const {
    auto it = coeffs_.find(nu);
    if (it == coeffs_.end()) return Matrix::Zero(n_, n_);
    return it->second;
}

void PeriodicMatrixFunction::add_coeff(long long nu, const Matrix& c) {
    if (c.rows() != n_ || c.cols() != n_)
        throw std::invalid_argument("add_coeff: dimension mismatch");
    auto it = coeffs_.find(nu);
    if (it == coeffs_.end())
        coeffs_[nu] = c;
    else
        it->second += c;
}

long long PeriodicMatrixFunction::max_abs_numerator() const {
    long long m = 0;
    for (const auto& [nu, c] : coeffs_) m = std::max(m, std::llabs(nu));
    return m;
}

Matrix PeriodicMatrixFunction::evaluate(double t) const {
    Matrix out = Matrix::Zero(n_, n_);
    for (const auto& [nu, c] : coeffs_) {
        const double phase = kTwoPi * double(nu) * t / double(q_);
        out += c * Complex(std::cos(phase), std::sin(phase));
    }
    return out;
}

PeriodicMatrixFunction PeriodicMatrixFunction::derivative() const {
    PeriodicMatrixFunction d(n_, q_);
    for (const auto& [nu, c] : coeffs_) {
        if (nu == 0) continue;
        d.coeffs_[nu] = c * Complex(0.0, kTwoPi * double(nu) / double(q_));
    }
    return d;
}

PeriodicMatrixFunction PeriodicMatrixFunction::adjointed() const {
    PeriodicMatrixFunction a(n_, q_);
    for (const auto& [nu, c] : coeffs_) a.coeffs_[-nu] = c.adjoint();
    return a;
}

PeriodicMatrixFunction PeriodicMatrixFunction::with_denom(long long new_denom) const {
    if (new_denom % q_ != 0)
        throw std::invalid_argument("with_denom: new denominator must be a multiple");
    const long long k = new_denom / q_;
    PeriodicMatrixFunction g(n_, new_denom);
    for (const auto& [nu, c] : coeffs_) g.coeffs_[nu * k] = c;
    return g;
}

PeriodicMatrixFunction PeriodicMatrixFunction::reduced() const {
    long long g = q_;
    for (const auto& [nu, c] : coeffs_) g = llgcd(g, std::llabs(nu));
    if (g <= 1) return *this;
    PeriodicMatrixFunction out(n_, q_ / g);
    for (const auto& [nu, c] : coeffs_) out.coeffs_[nu / g] = c;
    return out;
}

PeriodicMatrixFunction& PeriodicMatrixFunction::prune(double floor) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.norm() <= floor)
            it = coeffs_.erase(it);
        else
            ++it;
    }
    return *this;
}

PeriodicMatrixFunction PeriodicMatrixFunction::operator+(const PeriodicMatrixFunction& g) const {
    if (n_ != g.n_) throw std::invalid_argument("add: matrix order mismatch");
    const long long q = lllcm(q_, g.q_);
    PeriodicMatrixFunction a = with_denom(q);
    const PeriodicMatrixFunction b = g.with_denom(q);
    for (const auto& [nu, c] : b.coeffs_) a.add_coeff(nu, c);
    a.prune(kDefaultPruneFloor);
    return a;
}

PeriodicMatrixFunction PeriodicMatrixFunction::operator-(const PeriodicMatrixFunction& g) const {
    return *this + g * Complex(-1.0, 0.0);
}

PeriodicMatrixFunction PeriodicMatrixFunction::operator*(const PeriodicMatrixFunction& g) const {
    if (n_ != g.n_) throw std::invalid_argument("multiply: matrix order mismatch");
    const long long q = lllcm(q_, g.q_);
    const PeriodicMatrixFunction a = with_denom(q);
    const PeriodicMatrixFunction b = g.with_denom(q);
    PeriodicMatrixFunction out(n_, q);
    for (const auto& [nu1, c1] : a.coeffs_)
        for (const auto& [nu2, c2] : b.coeffs_) out.add_coeff(nu1 + nu2, c1 * c2);
    out.prune(kDefaultPruneFloor);
    return out;
}

PeriodicMatrixFunction PeriodicMatrixFunction::operator*(Complex s) const {
    PeriodicMatrixFunction out(n_, q_);
    for (const auto& [nu, c] : coeffs_) out.coeffs_[nu] = c * s;
    return out;
}

std::string PeriodicMatrixFunction::summary() const {
    std::ostringstream os;
    os << "PMF(n=" << n_ << ", Q=" << q_ << ", modes=" << coeffs_.size()
       << ", numax=" << max_abs_numerator() << ")";
    return os.str();
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
}

int grid_size(const PeriodicMatrixFunction& f, const GridParams& gp) {
    const long long numax = f.max_abs_numerator();
    const std::size_t want =
        std::max<std::size_t>(std::size_t(gp.oversample) * std::size_t(2 * numax + 1),
                              std::size_t(gp.min_grid));
    return int(next_pow2(want));
}

namespace {

// max of t -> operator_norm(f(t)) sampled at t = Q*i/N, then polished by
// golden-section inside the bracketing cells.  The polish is what makes
// pushforward isometries land at 1e-12 instead of grid resolution.
double grid_opnorm_max(const PeriodicMatrixFunction& f, const GridParams& gp) {
    if (f.empty()) return 0.0;
    const int N = grid_size(f, gp);
    const double period = double(f.denom());
    std::vector<double> vals(std::size_t(N));
    par::parallel_for(N, [&](long i) {
        vals[std::size_t(i)] = operator_norm(f.evaluate(period * double(i) / double(N)));
    });
    double best = 0.0;
    int besti = 0;
    for (int i = 0; i < N; ++i)
        if (vals[std::size_t(i)] > best) {
            best = vals[std::size_t(i)];
            besti = i;
        }
    if (!gp.refine) return best;

    const auto h = [&](double t) { return operator_norm(f.evaluate(t)); };
    double lo = period * double(besti - 1) / double(N);
    double hi = period * double(besti + 1) / double(N);
    const double invphi = 0.6180339887498948482;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-14 * std::max(1.0, period); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = h(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

}  // namespace

double sup_norm(const PeriodicMatrixFunction& f, const GridParams& gp) {
    return grid_opnorm_max(f, gp);
}

double sup_norm_distance(const PeriodicMatrixFunction& f, const PeriodicMatrixFunction& g,
                         const GridParams& gp) {
    return sup_norm(f - g, gp);
}

double lipschitz_seminorm(const PeriodicMatrixFunction& f, const GridParams& gp) {
    return sup_norm(f.derivative(), gp);
}

bool is_one_periodic(const PeriodicMatrixFunction& f, const GridParams& gp) {
    for (const auto& [nu, c] : f.coeffs())
        if (nu % f.denom() != 0 && c.norm() >= gp.tol) return false;
    return true;
}

bool is_self_adjoint(const PeriodicMatrixFunction& f, double tol) {
    for (const auto& [nu, c] : f.coeffs())
        if ((f.coeff(-nu) - c.adjoint()).norm() > tol) return false;
    return true;
}

PeriodicMatrixFunction rescale_compose(const PeriodicMatrixFunction& f, long long s, long long j) {
    if (s < 1) throw std::invalid_argument("rescale_compose: s must be positive");
    if (j < 0) throw std::invalid_argument("rescale_compose: j must be nonnegative");
    const long long q = f.denom() * s;
    PeriodicMatrixFunction g(f.order(), q);
    for (const auto& [nu, c] : f.coeffs()) {
        const double phase = kTwoPi * double(nu) * double(j) / double(q);
        g.add_coeff(nu, c * Complex(std::cos(phase), std::sin(phase)));
    }
    return g.reduced();
}

PeriodicMatrixFunction random_hermitian_trigpoly(int order, int cutoff, std::uint64_t seed) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
    Rng rng(seed);
    PeriodicMatrixFunction f(order, 1);
    Matrix c0(order, order);
    for (int p = 0; p < order; ++p)
        for (int q = 0; q < order; ++q) c0(p, q) = rng.cgauss();
    c0 = ((c0 + Matrix(c0.adjoint())) / 2.0).eval();
    f.add_coeff(0, c0);
    for (int nu = 1; nu <= cutoff; ++nu) {
        Matrix c(order, order);
        for (int p = 0; p < order; ++p)
            for (int q = 0; q < order; ++q) c(p, q) = rng.cgauss();
        f.add_coeff(nu, c);
        f.add_coeff(-nu, c.adjoint());
    }
    return f;
}

}  // namespace bdqm
