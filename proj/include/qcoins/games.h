#ifndef QCOINS_GAMES_H
#define QCOINS_GAMES_H

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcoins/adversaries.h"
#include "qcoins/pkqc.h"

namespace qcoins {

enum class UtilityVariant {
    FlexAdapt,
    FlexNonadapt,
    AllOrNothingAdapt,
    AllOrNothingNonadapt,
    MultiverifierAllOrNothing,
    MultiverifierFlex,
};

struct UtilitySpec {
    UtilityVariant variant = UtilityVariant::AllOrNothingNonadapt;
};

enum class LossVariant { PrivateSabotage, PublicSabotage, MultiverifierPrivateSabotage };

struct LossSpec {
    LossVariant variant = LossVariant::PrivateSabotage;
    /// Public sabotage only: coins the adversary pays and the re-spend chunk sizes (sum m + 1).
    int m = 0;
    std::vector<int> chunks;

    void validate() const;
};

/// Raised when a nonadaptive utility is asked of an adaptive transcript.
struct UndefinedUtility : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<double> compute_utility(const GameTranscript &t, const UtilitySpec &spec);
double compute_loss(const GameTranscript &t, const LossSpec &spec);

/// Mean with a normal-approximation interval mean +- z * stderr.
struct MonteCarloResult {
    std::vector<double> samples;
    double mean = 0;
    double std_error = 0;
    double ci_low = 0;
    double ci_high = 0;
};

constexpr double kDefaultZ = 3.0;

MonteCarloResult summarize(std::vector<double> samples, double z = kDefaultZ);

/// Runs fn(trial_index, rng) for every trial, each with its own stream derived from (seed, index).
/// Results are placed by index so the outcome does not depend on the worker count.
std::vector<double> run_trials(int trials, uint64_t seed, const std::function<double(int, Rng &)> &fn,
                               int workers = 0);

/// How Game-1 public counts treat the verifier's wallet between queries.
enum class WalletPolicy {
    /// One receiving wallet for the whole game; successive queries extend it.
    PersistentReceiver,
    /// Every query opens a fresh wallet.
    FreshPerQuery,
};

struct GameOptions {
    int trials = 10000;
    uint64_t seed = 1;
    double z = kDefaultZ;
    WalletPolicy wallet_policy = WalletPolicy::PersistentReceiver;
    int workers = 0;
};

/// One trial of the unforgeability game.
GameTranscript play_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, Rng &rng,
                                   WalletPolicy policy = WalletPolicy::PersistentReceiver);
/// One trial of the private sabotage game against `verifiers` independent receiving wallets.
GameTranscript play_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int verifiers,
                                     Rng &rng);
/// One trial of the public sabotage game.
GameTranscript play_public_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, const LossSpec &loss,
                                    Rng &rng);
/// One trial of the multiverifier unforgeability game.
GameTranscript play_multiverifier_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                 Rng &rng);

MonteCarloResult run_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme,
                                    const UtilitySpec &utility, const GameOptions &opts);
MonteCarloResult run_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme,
                                      const GameOptions &opts);
MonteCarloResult run_multiverifier_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                    const GameOptions &opts);
MonteCarloResult run_public_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int k, int m,
                                     const std::vector<int> &chunks, const GameOptions &opts);
MonteCarloResult run_multiverifier_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                  const GameOptions &opts,
                                                  UtilityVariant variant = UtilityVariant::MultiverifierAllOrNothing);

}  // namespace qcoins

#endif
