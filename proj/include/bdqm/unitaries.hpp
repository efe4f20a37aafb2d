#ifndef BDQM_UNITARIES_HPP
#define BDQM_UNITARIES_HPP

#include <vector>

#include "bdqm/matfun.hpp"

namespace bdqm {

// Finite prefix of a supernatural sequence: integers >= 2 indexed from 1.
class SupernaturalSequence {
public:
    SupernaturalSequence() = default;
    explicit SupernaturalSequence(std::vector<int> entries);

    int length() const { return int(entries_.size()); }
    int entry(int m) const;              // sigma_m, 1 <= m <= length
    long long boxtimes(int m) const;     // product of the first m entries, boxtimes_0 = 1
    const std::vector<int>& entries() const { return entries_; }

private:
    std::vector<int> entries_;
};

// The m x m unitary of twisted phase entries, m-periodic with denominator m.
// m = 0 yields the constant 1x1 identity.
PeriodicMatrixFunction twist_unitary(int m);

// Cyclic shift with U_m(t+1) = U_m(t) * shift_matrix(m).
Matrix shift_matrix(int m);

// Block versions acting at stage m of a sequence: twist of order sigma_m
// tensored with the identity of order boxtimes(m-1).
PeriodicMatrixFunction stage_twist_unitary(const SupernaturalSequence& sigma, int m);
Matrix stage_shift_matrix(const SupernaturalSequence& sigma, int m);

Matrix kron_with_identity(const Matrix& a, int block);

}  // namespace bdqm

#endif
