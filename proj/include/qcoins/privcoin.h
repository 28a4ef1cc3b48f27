#ifndef QCOINS_PRIVCOIN_H
#define QCOINS_PRIVCOIN_H

#include <cstdint>
#include <vector>

#include "qcoins/joint_state.h"
#include "qcoins/rng.h"
#include "qcoins/symspace.h"

namespace qcoins {

enum class MillMode { CanonicalBasis, HaarRandom };

/// Idealized private coin scheme: the coin is one pure state |mill> and verification is the
/// rank-1 measurement {|mill><mill|, I - |mill><mill|}.
class PrivateScheme {
   public:
    int local_dim() const {
        return (int)mill_.size();
    }
    MillMode mode() const {
        return mode_;
    }
    /// The secret coin state. Only bank-side code reads this.
    const AmpVector &mill() const {
        return mill_;
    }
    /// Unitary whose first column is |mill>; maps the coin frame (|phi_0> = |mill>) onto the lab basis.
    const Eigen::MatrixXcd &frame() const {
        return frame_;
    }
    /// Rotates a state written in the coin frame into lab coordinates.
    QuantumState to_lab_frame(const QuantumState &s, size_t limit = kDefaultDenseLimit) const;

   private:
    friend PrivateScheme keygen(int d, MillMode mode, uint64_t seed);
    AmpVector mill_;
    Eigen::MatrixXcd frame_;
    MillMode mode_ = MillMode::CanonicalBasis;
};

PrivateScheme keygen(int d, MillMode mode = MillMode::CanonicalBasis, uint64_t seed = 0);

QuantumState mint_private(const PrivateScheme &scheme, int count);

struct VerifyOutcome {
    bool accept = false;
    QuantumState post = QuantumState::empty(2);
};
VerifyOutcome verify_private(const PrivateScheme &scheme, const QuantumState &state, int register_index, Rng &rng);

struct PrivCountOutcome {
    int k = 0;
    QuantumState post = QuantumState::empty(2);
};
/// Measures every register left to right and counts accepts.
PrivCountOutcome priv_count(const PrivateScheme &scheme, const QuantumState &state, Rng &rng);
int priv_count(const PrivateScheme &scheme, JointState &lab, const std::vector<RegisterId> &regs, Rng &rng);

/// <Counter>: sum over registers of the probability of the |mill> outcome.
double count_expectation(const PrivateScheme &scheme, const QuantumState &state);
double count_expectation(const PrivateScheme &scheme, const JointState &lab, const std::vector<RegisterId> &regs);

/// Counter_N = sum_r I x |mill><mill|_r x I as a dense matrix.
DenseMatrix counter_operator_dense(const PrivateScheme &scheme, int n, size_t dense_limit = kDefaultDenseLimit);

}  // namespace qcoins

#endif
