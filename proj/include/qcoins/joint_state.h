#ifndef QCOINS_JOINT_STATE_H
#define QCOINS_JOINT_STATE_H

#include <vector>

#include "qcoins/rng.h"
#include "qcoins/symspace.h"

namespace qcoins {

using RegisterId = int;

/// Pure state of every register alive in one simulated world (adversary, wallets, bank).
/// Registers are addressed by stable ids; measurements sample outcomes with the caller's RNG.
class JointState {
   public:
    explicit JointState(int d, size_t dense_limit = kDefaultDenseLimit);

    int local_dim() const {
        return d_;
    }
    int register_count() const {
        return (int)ids_.size();
    }
    size_t dense_limit() const {
        return limit_;
    }
    bool contains(RegisterId id) const;
    const std::vector<RegisterId> &ids() const {
        return ids_;
    }
    const AmpVector &amplitudes() const {
        return amps_;
    }

    /// Tensors `s` onto the end and returns the ids of its registers in order.
    std::vector<RegisterId> append(const QuantumState &s);

    double sym_pass_probability(const std::vector<RegisterId> &regs) const;
    /// Two-outcome measurement {Pi_Sym, I - Pi_Sym} on `regs`; returns true on the symmetric outcome.
    bool measure_sym(const std::vector<RegisterId> &regs, Rng &rng);

    /// Probability of outcome |v><v| on one register.
    double rank_one_probability(RegisterId id, const AmpVector &v) const;
    bool measure_rank_one(RegisterId id, const AmpVector &v, Rng &rng);

    /// Measures `regs` in the computational basis and removes them from the state.
    void discard(const std::vector<RegisterId> &regs, Rng &rng);

    /// Whole state with registers listed in `order` (must name every live register).
    QuantumState state_in_order(const std::vector<RegisterId> &order) const;

   private:
    int position(RegisterId id) const;
    size_t stride(int pos) const;

    int d_;
    size_t limit_;
    AmpVector amps_{Amp(1)};
    std::vector<RegisterId> ids_;
    RegisterId next_id_ = 0;
};

}  // namespace qcoins

#endif
