#include "bdqm/unitaries.hpp"

#include <cmath>
#include <stdexcept>

namespace bdqm {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
}

SupernaturalSequence::SupernaturalSequence(std::vector<int> entries)
    : entries_(std::move(entries)) {
    for (int e : entries_)
        if (e < 2) throw std::invalid_argument("supernatural sequence entries must be >= 2");
}

int SupernaturalSequence::entry(int m) const {
    if (m < 1 || m > length()) throw std::out_of_range("sequence index out of range");
    return entries_[std::size_t(m - 1)];
}

long long SupernaturalSequence::boxtimes(int m) const {
    if (m < 0 || m > length()) throw std::out_of_range("boxtimes index out of range");
    long long p = 1;
    for (int j = 1; j <= m; ++j) p *= entry(j);
    return p;
}

PeriodicMatrixFunction twist_unitary(int m) {
    if (m < 0) throw std::invalid_argument("twist_unitary: m must be nonnegative");
    if (m == 0) return PeriodicMatrixFunction::identity(1);
    PeriodicMatrixFunction u(m, m);
    const double scale = 1.0 / std::sqrt(double(m));
    // entry (j,k): scale * exp(2 pi i (m-j)(t+k-1)/m); row j carries numerator m-j
    for (int j = 1; j <= m; ++j) {
        Matrix c = Matrix::Zero(m, m);
        for (int k = 1; k <= m; ++k) {
            const double phase = kTwoPi * double(m - j) * double(k - 1) / double(m);
            c(j - 1, k - 1) = scale * Complex(std::cos(phase), std::sin(phase));
        }
        u.add_coeff(m - j, c);
    }
    return u;
}

Matrix shift_matrix(int m) {
    if (m < 1) throw std::invalid_argument("shift_matrix: m must be positive");
    Matrix v = Matrix::Zero(m, m);
    v(0, m - 1) = 1.0;
    for (int j = 1; j < m; ++j) v(j, j - 1) = 1.0;
    return v;
}

Matrix kron_with_identity(const Matrix& a, int block) {
    const int n = int(a.rows());
    Matrix out = Matrix::Zero(n * block, n * block);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a(i, k) != Complex(0.0, 0.0))
                for (int r = 0; r < block; ++r) out(i * block + r, k * block + r) = a(i, k);
    return out;
}

PeriodicMatrixFunction stage_twist_unitary(const SupernaturalSequence& sigma, int m) {
    if (m == 0) return PeriodicMatrixFunction::identity(1);
    const PeriodicMatrixFunction base = twist_unitary(sigma.entry(m));
    const int block = int(sigma.boxtimes(m - 1));
    PeriodicMatrixFunction u(int(sigma.boxtimes(m)), base.denom());
    for (const auto& [nu, c] : base.coeffs()) u.add_coeff(nu, kron_with_identity(c, block));
    return u;
}

Matrix stage_shift_matrix(const SupernaturalSequence& sigma, int m) {
    if (m < 1) throw std::invalid_argument("stage_shift_matrix: m must be >= 1");
    return kron_with_identity(shift_matrix(sigma.entry(m)), int(sigma.boxtimes(m - 1)));
}

}  // namespace bdqm
