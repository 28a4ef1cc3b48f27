#ifndef QCOINS_PKQC_H
#define QCOINS_PKQC_H

#include <optional>
#include <string>
#include <vector>

#include "qcoins/joint_state.h"
#include "qcoins/privcoin.h"

namespace qcoins {

struct SchemeParams {
    int d = 2;
    /// Private coins per public coin.
    int kappa = 1;
    size_t dense_limit = kDefaultDenseLimit;
    double tolerance = kProbTolerance;
    uint64_t seed = 0;
    MillMode mill_mode = MillMode::CanonicalBasis;

    void validate() const;
};

/// Public coins built from kappa private coins, verified by comparison against a wallet.
class PkScheme {
   public:
    static PkScheme keygen(const SchemeParams &params);

    const SchemeParams &params() const {
        return params_;
    }
    int kappa() const {
        return params_.kappa;
    }
    int d() const {
        return params_.d;
    }
    /// Bank-side secret; adversaries only see the scheme through game oracles.
    const PrivateScheme &private_scheme() const {
        return priv_;
    }

   private:
    SchemeParams params_;
    PrivateScheme priv_;
};

QuantumState mint_public(const PkScheme &scheme);

/// Verifier-side register collection. Register count is always (1 + m) * kappa.
struct Wallet {
    std::vector<RegisterId> registers;
    /// Coins appended so far, counted before the outcome is known.
    int m = 0;
    /// Coins whose verification succeeded.
    int accepted = 0;
    /// Set on the first rejection; such wallets only go to the bank for a refund.
    bool quarantined = false;
};

Wallet wallet_init(const PkScheme &scheme, JointState &lab);

/// Appends one coin and measures {Pi_Sym, I - Pi_Sym} over the whole wallet. The post-measurement
/// registers stay in the wallet on either outcome.
bool wallet_verify(const PkScheme &scheme, JointState &lab, Wallet &wallet, const std::vector<RegisterId> &coin,
                   Rng &rng);
bool wallet_verify(const PkScheme &scheme, JointState &lab, Wallet &wallet, const QuantumState &coin, Rng &rng);

/// Appends every coin and performs one symmetric measurement over the enlarged wallet.
bool wallet_verify_transaction(const PkScheme &scheme, JointState &lab, Wallet &wallet,
                               const std::vector<std::vector<RegisterId>> &coins, Rng &rng);

/// Per-verifier bookkeeping inside a game.
struct VerifierRecord {
    int submitted = 0;
    int counter = 0;
    bool all_accepted = false;
    double refund = 0;
};

/// Everything a security game reports; utilities and losses are computed from it.
struct GameTranscript {
    /// n: mint oracle calls.
    int mint_calls = 0;
    /// Coins per public count query, in query order.
    std::vector<int> submitted_counts;
    /// m: sum of public count outcomes.
    int public_accepted = 0;
    /// m': sum of bank count outcomes.
    int bank_accepted = 0;
    int public_queries = 0;
    int bank_queries = 0;
    bool fail = false;
    bool adaptive = false;
    std::vector<double> refunds;
    std::vector<VerifierRecord> verifiers;
    /// Public sabotage re-spend phase: chunk sizes and the count each chunk received.
    std::vector<int> chunk_sizes;
    std::vector<int> chunk_counts;
    /// Oracle names in the order the adversary called them.
    std::vector<std::string> schedule;
};

enum class VerifyMode { Sequential, SingleShot };

/// Splits a flat register list into consecutive kappa-sized coins.
std::vector<std::vector<RegisterId>> split_coins(const std::vector<RegisterId> &regs, int kappa);

struct PublicCount {
    int counter = 0;
    Wallet wallet;
};
/// Count with a fresh wallet. Sequential mode verifies coin by coin; SingleShot does one projection and
/// reports either all coins or none.
PublicCount count_public(const PkScheme &scheme, JointState &lab, const std::vector<std::vector<RegisterId>> &coins,
                         Rng &rng, VerifyMode mode = VerifyMode::Sequential);

struct PublicCountOutcome {
    int counter = 0;
    GameTranscript transcript;
};
PublicCountOutcome count_public(const PkScheme &scheme, const QuantumState &coins, Rng &rng,
                                VerifyMode mode = VerifyMode::Sequential);

struct BankOutcome {
    bool accept = false;
    std::optional<std::vector<RegisterId>> replacement;
};
/// Private count on the coin, destroys it, accepts with probability k / kappa and mints a replacement.
BankOutcome verify_bank(const PkScheme &scheme, JointState &lab, const std::vector<RegisterId> &coin, Rng &rng);

struct StandaloneBankOutcome {
    bool accept = false;
    std::optional<QuantumState> replacement;
};
StandaloneBankOutcome verify_bank(const PkScheme &scheme, const QuantumState &coin, Rng &rng);

int count_bank(const PkScheme &scheme, JointState &lab, const std::vector<std::vector<RegisterId>> &coins, Rng &rng);
int count_bank(const PkScheme &scheme, const QuantumState &coins, Rng &rng);

/// Routes the wallet registers through count_bank.
int refund_wallet(const PkScheme &scheme, JointState &lab, const Wallet &wallet, Rng &rng);

}  // namespace qcoins

#endif
