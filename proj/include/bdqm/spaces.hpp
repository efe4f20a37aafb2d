#ifndef BDQM_SPACES_HPP
#define BDQM_SPACES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bdqm/matfun.hpp"
#include "bdqm/stages.hpp"

namespace bdqm {

// Finite-dimensional model of a quantum metric order unit space: a real
// coordinate description of the self-adjoint part with evaluators for the
// order-unit norm and the Lip-norm.
class QMSpace {
public:
    virtual ~QMSpace() = default;
    virtual int dim() const = 0;
    virtual RealVector unit() const = 0;
    virtual double norm(const RealVector& x) const = 0;
    virtual double lip(const RealVector& x) const = 0;
    // A subgradient of lip at x (any active branch); used by the ascent engine.
    virtual RealVector lip_subgradient(const RealVector& x) const = 0;
    virtual std::string describe() const = 0;
};

// Real-valued functions on a finite metric space with the Lipschitz seminorm.
class FiniteCommutativeSpace : public QMSpace {
public:
    explicit FiniteCommutativeSpace(Eigen::MatrixXd distances);

    int points() const { return int(dist_.rows()); }
    const Eigen::MatrixXd& distances() const { return dist_; }

    int dim() const override { return points(); }
    RealVector unit() const override { return RealVector::Ones(points()); }
    double norm(const RealVector& x) const override;
    double lip(const RealVector& x) const override;
    RealVector lip_subgradient(const RealVector& x) const override;
    std::string describe() const override;

private:
    Eigen::MatrixXd dist_;
};

enum class StageLip { Plain, Recursive };  // L_{sigma,m} vs S_{sigma,m}

// Self-adjoint trigonometric polynomials at one tower stage, truncated to
// integer frequencies |nu| <= cutoff.
class StageSpace : public QMSpace {
public:
    StageSpace(SupernaturalSequence sigma, int m, int cutoff, GridParams gp,
               StageLip kind = StageLip::Plain);

    const SupernaturalSequence& sigma() const { return sigma_; }
    int stage() const { return m_; }
    int cutoff() const { return cutoff_; }
    int order() const { return n_; }
    const GridParams& grid() const { return gp_; }
    StageLip lip_kind() const { return kind_; }

    RealVector encode(const PeriodicMatrixFunction& f) const;
    PeriodicMatrixFunction decode(const RealVector& x) const;
    StageElement decode_element(const RealVector& x) const;
    // value of the j-th coordinate basis function at time t, and its derivative
    Matrix basis_value(int j, double t) const;
    Matrix basis_derivative(int j, double t) const;
    double basis_trace(int j) const;

    int dim() const override { return n_ * n_ * (2 * cutoff_ + 1); }
    RealVector unit() const override;
    double norm(const RealVector& x) const override;
    double lip(const RealVector& x) const override;
    RealVector lip_subgradient(const RealVector& x) const override;
    std::string describe() const override;

private:
    struct Coord {  // coordinate j <-> (nu, p, q, imag part?)
        int nu, p, q;
        bool im;
    };
    Coord coord(int j) const;

    SupernaturalSequence sigma_;
    int m_, cutoff_, n_;
    GridParams gp_;
    StageLip kind_;
    PeriodicMatrixFunction twist_;  // cached stage twist unitary
};

// Lip-norm on pairs, used by direct sums (tunnels, admissible norms).
struct PairLip {
    std::function<double(const RealVector&, const RealVector&)> value;
    // optional; when missing the direct sum falls back to forward differences
    std::function<RealVector(const RealVector&, const RealVector&)> subgrad;
};

class DirectSumSpace : public QMSpace {
public:
    DirectSumSpace(std::shared_ptr<const QMSpace> left, std::shared_ptr<const QMSpace> right,
                   PairLip pair_lip, std::string label = "direct sum");

    const QMSpace& left() const { return *left_; }
    const QMSpace& right() const { return *right_; }
    RealVector left_part(const RealVector& x) const { return x.head(left_->dim()); }
    RealVector right_part(const RealVector& x) const { return x.tail(right_->dim()); }
    RealVector join(const RealVector& a, const RealVector& b) const;

    int dim() const override { return left_->dim() + right_->dim(); }
    RealVector unit() const override;
    double norm(const RealVector& x) const override;
    double lip(const RealVector& x) const override;
    RealVector lip_subgradient(const RealVector& x) const override;
    std::string describe() const override { return label_; }

private:
    std::shared_ptr<const QMSpace> left_, right_;
    PairLip pair_;
    std::string label_;
};

// States are linear in the coordinates, so a dense vector suffices.
struct StateFunctional {
    std::string kind;
    RealVector w;
    double operator()(const RealVector& x) const { return w.dot(x); }
};

struct NetParams {
    int grid_points = 3;
    int random_states = 2;
    std::uint64_t seed = 1;
};

struct StateNet {
    std::vector<StateFunctional> states;
    NetParams params;
};

StateFunctional dirac_state(const FiniteCommutativeSpace& sp, int i);
StateFunctional probability_state(const FiniteCommutativeSpace& sp, const RealVector& p);
StateFunctional stage_point_state(const StageSpace& sp, double t, const Matrix& density);
StateFunctional stage_trace_state(const StageSpace& sp);
StateFunctional lift_state(const DirectSumSpace& sum, const StateFunctional& s, bool left_side);

StateNet state_net(const FiniteCommutativeSpace& sp, const NetParams& np);
StateNet state_net(const StageSpace& sp, const NetParams& np);

struct CheckResult {
    std::string name;
    bool pass = false;
    double slack = 0.0;  // signed margin, >= 0 means pass
    std::string details;
};

struct SolverParams;  // kantorovich.hpp

std::vector<CheckResult> check_lipnorm_axioms(const QMSpace& sp, const StateNet& net,
                                              const SolverParams& solver, std::uint64_t seed);

}  // namespace bdqm

#endif
