#ifndef QCOINS_ADVERSARIES_H
#define QCOINS_ADVERSARIES_H

#include <memory>
#include <string>
#include <vector>

#include "qcoins/joint_state.h"
#include "qcoins/pkqc.h"
#include "qcoins/rng.h"
#include "qcoins/symspace.h"

namespace qcoins {

using Coins = std::vector<std::vector<RegisterId>>;

/// What an adversary can touch during a game. Nothing here exposes the secret coin state.
class Oracles {
   public:
    virtual ~Oracles() = default;

    virtual int kappa() const = 0;
    virtual int local_dim() const = 0;
    virtual int verifier_count() const = 0;

    /// One fresh public coin.
    virtual std::vector<RegisterId> mint() = 0;
    /// Public count by verifier `verifier`; returns the number of accepted coins.
    virtual int count_public(const Coins &coins, int verifier) = 0;
    /// Bank count (refund) of coins the adversary hands in.
    virtual int count_bank(const Coins &coins) = 0;

    /// Turns the consumed registers into `state`, which is written in the coin frame (|phi_0> is the coin).
    /// Stands in for the swap-gadget preparation that only uses the minted copies.
    virtual std::vector<RegisterId> prepare(const std::vector<RegisterId> &consumed, const QuantumState &state) = 0;
    /// Public symmetric-subspace measurement on registers the adversary holds.
    virtual bool measure_sym(const std::vector<RegisterId> &regs) = 0;
    /// Throws registers away.
    virtual void discard(const std::vector<RegisterId> &regs) = 0;
    /// The adversary's own randomness (shares the trial stream).
    virtual Rng &rng() = 0;
};

enum class AdversaryKind { Honest, SymmetricForger, OrthogonalSubmitter, AdaptiveRefundForger, MultiverifierWrapper };

class AdversaryStrategy {
   public:
    virtual ~AdversaryStrategy() = default;
    virtual AdversaryKind kind() const = 0;
    virtual std::string name() const = 0;
    /// Number of verifiers the strategy submits to.
    virtual int targets() const {
        return 1;
    }
    virtual void play(Oracles &oracles) = 0;
    /// Fresh copy with cleared scratch state, one per trial.
    virtual std::unique_ptr<AdversaryStrategy> clone() const = 0;
};

/// The state with n*kappa coin registers and (m - n)*kappa registers in |phi_1>, symmetrized.
QuantumState forge_state(int n, int m, int kappa, int d);

/// Mints m coins per verifier and submits them untouched.
class HonestStrategy : public AdversaryStrategy {
   public:
    explicit HonestStrategy(int m, int verifiers = 1);
    AdversaryKind kind() const override {
        return AdversaryKind::Honest;
    }
    std::string name() const override;
    int targets() const override {
        return verifiers_;
    }
    void play(Oracles &oracles) override;
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<HonestStrategy>(*this);
    }

   private:
    int m_;
    int verifiers_;
};

/// Turns n minted coins into m coins via forge_state and submits them in one public count, once per verifier.
class SymmetricForger : public AdversaryStrategy {
   public:
    SymmetricForger(int n, int m, int verifiers = 1);
    AdversaryKind kind() const override {
        return AdversaryKind::SymmetricForger;
    }
    std::string name() const override;
    int targets() const override {
        return verifiers_;
    }
    void play(Oracles &oracles) override;
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<SymmetricForger>(*this);
    }
    int n() const {
        return n_;
    }
    int m() const {
        return m_;
    }

   private:
    int n_;
    int m_;
    int verifiers_;
};

/// Submits m coins made entirely of |phi_1> registers without minting anything.
class OrthogonalSubmitter : public AdversaryStrategy {
   public:
    explicit OrthogonalSubmitter(int m, int verifiers = 1);
    AdversaryKind kind() const override {
        return AdversaryKind::OrthogonalSubmitter;
    }
    std::string name() const override;
    int targets() const override {
        return verifiers_;
    }
    void play(Oracles &oracles) override;
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<OrthogonalSubmitter>(*this);
    }

   private:
    int m_;
    int verifiers_;
};

/// Prepares forge_state(n, n + 1), submits one coin per public count query, stops at the first rejection
/// and hands every unsubmitted coin to the bank.
class AdaptiveRefundForger : public AdversaryStrategy {
   public:
    explicit AdaptiveRefundForger(int n);
    AdversaryKind kind() const override {
        return AdversaryKind::AdaptiveRefundForger;
    }
    std::string name() const override;
    void play(Oracles &oracles) override;
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<AdaptiveRefundForger>(*this);
    }

   private:
    int n_;
};

/// Single-verifier adversary built from a k-verifier one: picks a target uniformly, forwards that
/// submission and runs the other verifiers itself with freshly minted coins.
class MultiverifierWrapper : public AdversaryStrategy {
   public:
    MultiverifierWrapper(std::unique_ptr<AdversaryStrategy> inner, int k);
    MultiverifierWrapper(const MultiverifierWrapper &other);
    AdversaryKind kind() const override {
        return AdversaryKind::MultiverifierWrapper;
    }
    std::string name() const override;
    void play(Oracles &oracles) override;
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<MultiverifierWrapper>(*this);
    }
    /// Verifier picked in the last play, or -1.
    int last_target() const {
        return last_target_;
    }

   private:
    std::unique_ptr<AdversaryStrategy> inner_;
    int k_;
    int last_target_ = -1;
};

std::unique_ptr<AdversaryStrategy> wrap_multiverifier_to_single(const AdversaryStrategy &inner, int k);

}  // namespace qcoins

#endif
