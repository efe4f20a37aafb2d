#include "bdqm/spaces.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdqm/kantorovich.hpp"
#include "bdqm/rng.hpp"

namespace bdqm {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
}

// ---------------------------------------------------------------------------
// FiniteCommutativeSpace

FiniteCommutativeSpace::FiniteCommutativeSpace(Eigen::MatrixXd distances)
    : dist_(std::move(distances)) {
    if (dist_.rows() != dist_.cols() || dist_.rows() < 1)
        throw std::invalid_argument("distance matrix must be square");
    for (int i = 0; i < dist_.rows(); ++i) {
        if (dist_(i, i) != 0.0) throw std::invalid_argument("distance matrix diagonal must be 0");
        for (int j = 0; j < dist_.cols(); ++j) {
            if (dist_(i, j) != dist_(j, i)) throw std::invalid_argument("distances not symmetric");
            if (i != j && dist_(i, j) <= 0.0)
                throw std::invalid_argument("off-diagonal distances must be positive");
        }
    }
}

double FiniteCommutativeSpace::norm(const RealVector& x) const {
    return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

double FiniteCommutativeSpace::lip(const RealVector& x) const {
    double best = 0.0;
    for (int i = 0; i < points(); ++i)
        for (int j = i + 1; j < points(); ++j)
            best = std::max(best, std::abs(x[i] - x[j]) / dist_(i, j));
    return best;
}

RealVector FiniteCommutativeSpace::lip_subgradient(const RealVector& x) const {
    RealVector g = RealVector::Zero(points());
    double best = -1.0;
    int bi = 0, bj = 1;
    for (int i = 0; i < points(); ++i)
        for (int j = i + 1; j < points(); ++j) {
            const double v = std::abs(x[i] - x[j]) / dist_(i, j);
            if (v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    if (points() < 2) return g;
    const double s = (x[bi] >= x[bj]) ? 1.0 : -1.0;
    g[bi] = s / dist_(bi, bj);
    g[bj] = -s / dist_(bi, bj);
    return g;
}

std::string FiniteCommutativeSpace::describe() const {
    return "C(X) on " + std::to_string(points()) + " points";
}

// ---------------------------------------------------------------------------
// StageSpace

StageSpace::StageSpace(SupernaturalSequence sigma, int m, int cutoff, GridParams gp, StageLip kind)
    : sigma_(std::move(sigma)),
      m_(m),
      cutoff_(cutoff),
      n_(int(sigma_.boxtimes(m))),
      gp_(gp),
      kind_(kind),
      twist_(stage_twist_unitary(sigma_, m)) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
}

// Coordinates: j = 0..n^2-1 parameterize the Hermitian zero mode (diagonal
// entries, then re/im of the upper triangle); for nu = 1..cutoff the full
// complex matrix C_nu contributes 2 n^2 real coordinates, with C_{-nu} tied
// to C_nu^dagger.
StageSpace::Coord StageSpace::coord(int j) const {
    const int per_mode0 = n_ * n_;
    if (j < per_mode0) {
        if (j < n_) return {0, j, j, false};
        int r = j - n_;
        const int upper = n_ * (n_ - 1) / 2;
        const bool im = r >= upper;
        if (im) r -= upper;
        int p = 0;
        while (r >= n_ - 1 - p) {
            r -= n_ - 1 - p;
            ++p;
        }
        return {0, p, p + 1 + r, im};
    }
    int r = j - per_mode0;
    const int per_mode = 2 * n_ * n_;
    const int nu = 1 + r / per_mode;
    r %= per_mode;
    const bool im = r >= n_ * n_;
    if (im) r -= n_ * n_;
    return {nu, r / n_, r % n_, im};
}

RealVector StageSpace::encode(const PeriodicMatrixFunction& f) const {
    if (f.order() != n_ || f.denom() != 1)
        throw std::invalid_argument("encode: wrong order or denominator");
    if (f.max_abs_numerator() > cutoff_) throw std::invalid_argument("encode: cutoff exceeded");
    RealVector x = RealVector::Zero(dim());
    for (int j = 0; j < dim(); ++j) {
        const Coord c = coord(j);
        const Matrix cm = f.coeff(c.nu);
        if (c.nu == 0) {
            // Hermitian mode: value stored once per entry pair
            x[j] = c.im ? cm(c.p, c.q).imag() : cm(c.p, c.q).real();
        } else {
            x[j] = c.im ? cm(c.p, c.q).imag() : cm(c.p, c.q).real();
        }
    }
    return x;
}

PeriodicMatrixFunction StageSpace::decode(const RealVector& x) const {
    if (x.size() != dim()) throw std::invalid_argument("decode: dimension mismatch");
    PeriodicMatrixFunction f(n_, 1);
    Matrix c0 = Matrix::Zero(n_, n_);
    std::vector<Matrix> cpos(std::size_t(cutoff_), Matrix::Zero(n_, n_));
    for (int j = 0; j < dim(); ++j) {
        const Coord c = coord(j);
        if (x[j] == 0.0) continue;
        if (c.nu == 0) {
            if (c.p == c.q) {
                c0(c.p, c.p) += x[j];
            } else if (!c.im) {
                c0(c.p, c.q) += x[j];
                c0(c.q, c.p) += x[j];
            } else {
                c0(c.p, c.q) += Complex(0.0, x[j]);
                c0(c.q, c.p) += Complex(0.0, -x[j]);
            }
        } else {
            cpos[std::size_t(c.nu - 1)](c.p, c.q) += c.im ? Complex(0.0, x[j]) : Complex(x[j], 0.0);
        }
    }
    if (c0.norm() > 0) f.add_coeff(0, c0);
    for (int nu = 1; nu <= cutoff_; ++nu) {
        const Matrix& c = cpos[std::size_t(nu - 1)];
        if (c.norm() > 0) {
            f.add_coeff(nu, c);
            f.add_coeff(-nu, c.adjoint());
        }
    }
    return f;
}

StageElement StageSpace::decode_element(const RealVector& x) const {
    return StageElement(sigma_, m_, decode(x));
}

Matrix StageSpace::basis_value(int j, double t) const {
    const Coord c = coord(j);
    Matrix out = Matrix::Zero(n_, n_);
    if (c.nu == 0) {
        if (c.p == c.q) {
            out(c.p, c.p) = 1.0;
        } else if (!c.im) {
            out(c.p, c.q) = 1.0;
            out(c.q, c.p) = 1.0;
        } else {
            out(c.p, c.q) = Complex(0.0, 1.0);
            out(c.q, c.p) = Complex(0.0, -1.0);
        }
        return out;
    }
    const double ang = kTwoPi * double(c.nu) * t;
    const Complex z(std::cos(ang), std::sin(ang));
    const Complex v = c.im ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    out(c.p, c.q) = v * z;
    out(c.q, c.p) = std::conj(v * z);
    return out;
}

Matrix StageSpace::basis_derivative(int j, double t) const {
    const Coord c = coord(j);
    Matrix out = Matrix::Zero(n_, n_);
    if (c.nu == 0) return out;
    const double ang = kTwoPi * double(c.nu) * t;
    const Complex z = Complex(0.0, kTwoPi * double(c.nu)) * Complex(std::cos(ang), std::sin(ang));
    const Complex v = c.im ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    out(c.p, c.q) = v * z;
    out(c.q, c.p) = std::conj(v * z);
    return out;
}

double StageSpace::basis_trace(int j) const {
    const Coord c = coord(j);
    if (c.nu == 0 && c.p == c.q && !c.im) return 1.0 / double(n_);
    return 0.0;
}

RealVector StageSpace::unit() const { return encode(PeriodicMatrixFunction::identity(n_)); }

double StageSpace::norm(const RealVector& x) const { return sup_norm(decode(x), gp_); }

double StageSpace::lip(const RealVector& x) const {
    const StageElement a = decode_element(x);
    return kind_ == StageLip::Plain ? stage_lipnorm(a, gp_) : recursive_seminorm(a, gp_);
}

namespace {

// argmax of ||g(t)|| over the grid of g plus golden-section polish; returns t*
double opnorm_argmax(const PeriodicMatrixFunction& g, const GridParams& gp) {
    const int N = grid_size(g, gp);
    const double period = double(g.denom());
    double best = -1.0, tbest = 0.0;
    for (int i = 0; i < N; ++i) {
        const double t = period * double(i) / double(N);
        const double v = operator_norm(g.evaluate(t));
        if (v > best) {
            best = v;
            tbest = t;
        }
    }
    if (!gp.refine) return tbest;
    const auto h = [&](double t) { return operator_norm(g.evaluate(t)); };
    double lo = tbest - period / double(N), hi = tbest + period / double(N);
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
    double tr = (f1 > f2) ? x1 : x2;
    return (std::max(f1, f2) > best) ? tr : tbest;
}

// top singular pair of M
void top_singular_pair(const Matrix& M, Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU().col(0);
    v = svd.matrixV().col(0);
}

}  // namespace

// Active-branch subgradient of the plain Lip-norm: linearize either the
// derivative term at its maximizing time or the centered-norm term, through
// the top singular pair.
RealVector StageSpace::lip_subgradient(const RealVector& x) const {
    const PeriodicMatrixFunction f = decode(x);
    const StageElement a(sigma_, m_, f);

    if (kind_ == StageLip::Recursive) {
        // forward-difference fallback; only used on tiny spaces
        const double h = 1e-6;
        const double base = lip(x);
        RealVector g(dim());
        for (int j = 0; j < dim(); ++j) {
            RealVector y = x;
            y[j] += h;
            g[j] = (lip(y) - base) / h;
        }
        return g;
    }

    PeriodicMatrixFunction conj = f;
    if (m_ >= 1) conj = twist_.adjointed() * f * twist_;
    const PeriodicMatrixFunction dconj = conj.derivative();
    const double slope = sup_norm(dconj, gp_);

    const double tau = stage_trace(a).real();
    const PeriodicMatrixFunction centered =
        f - PeriodicMatrixFunction::identity(n_) * Complex(tau, 0.0);
    const double spread = sup_norm(centered, gp_);

    RealVector g = RealVector::Zero(dim());
    if (slope >= spread) {
        const double ts = opnorm_argmax(dconj, gp_);
        Eigen::VectorXcd u, v;
        top_singular_pair(dconj.evaluate(ts), u, v);
        if (m_ >= 1) {
            const Matrix U = twist_.evaluate(ts);
            const Matrix Ud = twist_.derivative().evaluate(ts);
            for (int j = 0; j < dim(); ++j) {
                const Matrix B = basis_value(j, ts);
                const Matrix Bd = basis_derivative(j, ts);
                const Matrix term =
                    Ud.adjoint() * B * U + U.adjoint() * Bd * U + U.adjoint() * B * Ud;
                g[j] = (u.adjoint() * term * v).value().real();
            }
        } else {
            for (int j = 0; j < dim(); ++j)
                g[j] = (u.adjoint() * basis_derivative(j, ts) * v).value().real();
        }
    } else {
        const double ts = opnorm_argmax(centered, gp_);
        Eigen::VectorXcd u, v;
        top_singular_pair(centered.evaluate(ts), u, v);
        const Matrix id = Matrix::Identity(n_, n_);
        for (int j = 0; j < dim(); ++j) {
            const Matrix term = basis_value(j, ts) - basis_trace(j) * id;
            g[j] = (u.adjoint() * term * v).value().real();
        }
    }
    return g;
}

std::string StageSpace::describe() const {
    return "stage space m=" + std::to_string(m_) + " order " + std::to_string(n_) + " cutoff " +
           std::to_string(cutoff_) + (kind_ == StageLip::Plain ? " (plain lip)" : " (recursive lip)");
}

// ---------------------------------------------------------------------------
// DirectSumSpace

DirectSumSpace::DirectSumSpace(std::shared_ptr<const QMSpace> left,
                               std::shared_ptr<const QMSpace> right, PairLip pair_lip,
                               std::string label)
    : left_(std::move(left)), right_(std::move(right)), pair_(std::move(pair_lip)),
      label_(std::move(label)) {}

RealVector DirectSumSpace::join(const RealVector& a, const RealVector& b) const {
    RealVector x(dim());
    x.head(left_->dim()) = a;
    x.tail(right_->dim()) = b;
    return x;
}

RealVector DirectSumSpace::unit() const { return join(left_->unit(), right_->unit()); }

double DirectSumSpace::norm(const RealVector& x) const {
    return std::max(left_->norm(left_part(x)), right_->norm(right_part(x)));
}

double DirectSumSpace::lip(const RealVector& x) const {
    return pair_.value(left_part(x), right_part(x));
}

RealVector DirectSumSpace::lip_subgradient(const RealVector& x) const {
    if (pair_.subgrad) return pair_.subgrad(left_part(x), right_part(x));
    const double h = 1e-6;
    const double base = lip(x);
    RealVector g(dim());
    for (int j = 0; j < dim(); ++j) {
        RealVector y = x;
        y[j] += h;
        g[j] = (lip(y) - base) / h;
    }
    return g;
}

// ---------------------------------------------------------------------------
// States and nets

StateFunctional dirac_state(const FiniteCommutativeSpace& sp, int i) {
    RealVector w = RealVector::Zero(sp.points());
    w[i] = 1.0;
    return {"dirac(" + std::to_string(i) + ")", w};
}

StateFunctional probability_state(const FiniteCommutativeSpace& sp, const RealVector& p) {
    if (p.size() != sp.points() || std::abs(p.sum() - 1.0) > 1e-9 || p.minCoeff() < -1e-12)
        throw std::invalid_argument("probability_state: not a probability vector");
    return {"probability", p};
}

StateFunctional stage_point_state(const StageSpace& sp, double t, const Matrix& density) {
    RealVector w(sp.dim());
    for (int j = 0; j < sp.dim(); ++j)
        w[j] = (density * sp.basis_value(j, t)).trace().real();
    return {"point(t=" + std::to_string(t) + ")", w};
}

StateFunctional stage_trace_state(const StageSpace& sp) {
    RealVector w(sp.dim());
    for (int j = 0; j < sp.dim(); ++j) w[j] = sp.basis_trace(j);
    return {"trace", w};
}

StateFunctional lift_state(const DirectSumSpace& sum, const StateFunctional& s, bool left_side) {
    RealVector w = RealVector::Zero(sum.dim());
    if (left_side)
        w.head(sum.left().dim()) = s.w;
    else
        w.tail(sum.right().dim()) = s.w;
    return {s.kind + (left_side ? "|left" : "|right"), w};
}

StateNet state_net(const FiniteCommutativeSpace& sp, const NetParams& np) {
    StateNet net;
    net.params = np;
    RealVector unif = RealVector::Constant(sp.points(), 1.0 / double(sp.points()));
    net.states.push_back(probability_state(sp, unif));
    net.states.back().kind = "uniform";
    for (int i = 0; i < sp.points(); ++i) net.states.push_back(dirac_state(sp, i));
    return net;
}

StateNet state_net(const StageSpace& sp, const NetParams& np) {
    StateNet net;
    net.params = np;
    net.states.push_back(stage_trace_state(sp));
    const int n = sp.order();
    for (int gi = 0; gi < np.grid_points; ++gi) {
        const double t = double(gi) / double(np.grid_points);
        for (int b = 0; b < n; ++b) {
            Matrix rho = Matrix::Zero(n, n);
            rho(b, b) = 1.0;
            auto st = stage_point_state(sp, t, rho);
            st.kind = "pure(" + std::to_string(b) + ",t=" + std::to_string(t) + ")";
            net.states.push_back(st);
        }
        net.states.push_back(stage_point_state(sp, t, Matrix::Identity(n, n) / double(n)));
        net.states.back().kind = "mixed(t=" + std::to_string(t) + ")";
        for (int r = 0; r < np.random_states; ++r) {
            Rng rng(mix_seed(np.seed, std::uint64_t(gi * 1000 + r)));
            Eigen::VectorXcd psi(n);
            for (int i = 0; i < n; ++i) psi[i] = rng.cgauss();
            psi.normalize();
            Matrix rho = psi * psi.adjoint();
            auto st = stage_point_state(sp, t, rho);
            st.kind = "rank1(" + std::to_string(r) + ",t=" + std::to_string(t) + ")";
            net.states.push_back(st);
        }
    }
    return net;
}

// ---------------------------------------------------------------------------
// Lip-norm axiom report

std::vector<CheckResult> check_lipnorm_axioms(const QMSpace& sp, const StateNet& net,
                                              const SolverParams& solver, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const double tol = 1e-9;

    {
        const double lu = sp.lip(sp.unit());
        out.push_back({"lip(unit) = 0", lu <= 10 * tol, 10 * tol - lu, ""});
    }

    {  // homogeneity and triangle inequality on random triples
        double worst = 0.0;
        Rng rng(mix_seed(seed, 17));
        for (int k = 0; k < 20; ++k) {
            RealVector x(sp.dim()), y(sp.dim());
            for (int j = 0; j < sp.dim(); ++j) {
                x[j] = rng.gauss();
                y[j] = rng.gauss();
            }
            const double lam = rng.uniform(-2.0, 2.0);
            const double lx = sp.lip(x), ly = sp.lip(y);
            worst = std::max(worst, std::abs(sp.lip(lam * x) - std::abs(lam) * lx) /
                                        std::max(1.0, std::abs(lam) * lx));
            worst = std::max(worst, (sp.lip(x + y) - lx - ly) / std::max(1.0, lx + ly));
        }
        out.push_back({"seminorm laws (homogeneity, triangle)", worst <= 1e-7, 1e-7 - worst, ""});
    }

    {  // kernel = scalars, evidenced on the unit sphere of the traceless slice
        Rng rng(mix_seed(seed, 18));
        const RealVector u = sp.unit() / sp.unit().norm();
        double minlip = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 30; ++k) {
            RealVector x(sp.dim());
            for (int j = 0; j < sp.dim(); ++j) x[j] = rng.gauss();
            x -= x.dot(u) * u;
            const double nx = sp.norm(x);
            if (nx < 1e-12) continue;
            minlip = std::min(minlip, sp.lip(x / nx));
        }
        out.push_back({"kernel of lip = scalars (sampled)", minlip > 10 * tol, minlip - 10 * tol,
                       "min lip on traceless unit sphere = " + std::to_string(minlip)});
    }

    {  // Kantorovich diameter of the state net
        double diam = 0.0;
        for (std::size_t i = 0; i < net.states.size(); ++i)
            for (std::size_t j = i + 1; j < net.states.size(); ++j)
                diam = std::max(diam,
                                kantorovich(sp, net.states[i], net.states[j], solver).value);
        out.push_back({"state net diameter <= 2", diam <= 2.0 + 1e-6, 2.0 + 1e-6 - diam,
                       "diameter = " + std::to_string(diam)});
    }

    return out;
}

}  // namespace bdqm
