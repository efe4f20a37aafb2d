#ifndef BDQM_MATFUN_HPP
#define BDQM_MATFUN_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace bdqm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct GridParams {
    int oversample = 8;          // grid density per Nyquist band
    double prune_floor = 1e-14;  // Frobenius floor for stored coefficients
    double tol = 1e-9;           // generic comparison tolerance
    int min_grid = 16;
    bool refine = true;  // golden-section polish around grid maxima
};

// Matrix-valued trigonometric polynomial on the line,
//   f(t) = sum_nu C_nu * exp(2*pi*i * nu * t / Q),
// with integer numerators nu over a stored denominator Q.  Products, adjoints
// and argument rescalings are exact in frequency; only the complex matrix
// coefficients carry floating point error.
class PeriodicMatrixFunction {
public:
    PeriodicMatrixFunction() : n_(1), q_(1) {}
    PeriodicMatrixFunction(int order, long long denom);

    static PeriodicMatrixFunction constant(const Matrix& c);
    static PeriodicMatrixFunction identity(int order);
    static PeriodicMatrixFunction zero(int order);
    // c * exp(2 pi i nu t / denom)
    static PeriodicMatrixFunction mode(long long nu, long long denom, const Matrix& c);

    int order() const { return n_; }
    long long denom() const { return q_; }
    const std::map<long long, Matrix>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }

    Matrix coeff(long long nu) const;  // zero matrix when absent
    void add_coeff(long long nu, const Matrix& c);

    long long max_abs_numerator() const;

    Matrix evaluate(double t) const;
    PeriodicMatrixFunction derivative() const;  // C_nu -> 2*pi*i*(nu/Q)*C_nu
    PeriodicMatrixFunction adjointed() const;   // C_nu -> C_{-nu}^dagger

    // same function over a denominator multiple of the current one
    PeriodicMatrixFunction with_denom(long long new_denom) const;
    // divide out the gcd of all numerators and Q
    PeriodicMatrixFunction reduced() const;

    PeriodicMatrixFunction& prune(double floor);

    PeriodicMatrixFunction operator+(const PeriodicMatrixFunction& g) const;
    PeriodicMatrixFunction operator-(const PeriodicMatrixFunction& g) const;
    PeriodicMatrixFunction operator*(const PeriodicMatrixFunction& g) const;
    PeriodicMatrixFunction operator*(Complex s) const;

    std::string summary() const;

private:
    int n_;
    long long q_;
    std::map<long long, Matrix> coeffs_;
};

double operator_norm(const Matrix& m);  // largest singular value

int grid_size(const PeriodicMatrixFunction& f, const GridParams& gp);

// Grid maximum of t -> operator_norm(f(t)) over one period, with optional
// local refinement; a band-limited under-estimate of the C*-norm.
double sup_norm(const PeriodicMatrixFunction& f, const GridParams& gp);
double sup_norm_distance(const PeriodicMatrixFunction& f, const PeriodicMatrixFunction& g,
                         const GridParams& gp);

// sup_t ||f'(t)||, the Lipschitz seminorm of a C^1 trigonometric polynomial.
double lipschitz_seminorm(const PeriodicMatrixFunction& f, const GridParams& gp);

bool is_one_periodic(const PeriodicMatrixFunction& f, const GridParams& gp);
bool is_self_adjoint(const PeriodicMatrixFunction& f, double tol);

// t -> f((t+j)/s), exact in frequency
PeriodicMatrixFunction rescale_compose(const PeriodicMatrixFunction& f, long long s, long long j);

// Self-adjoint random trig polynomial with integer frequencies |nu| <= cutoff.
PeriodicMatrixFunction random_hermitian_trigpoly(int order, int cutoff, std::uint64_t seed);

}  // namespace bdqm

#endif
