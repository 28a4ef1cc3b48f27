#include "qcoins/games.h"

#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace qcoins {

void LossSpec::validate() const {
    if (variant != LossVariant::PublicSabotage) {
        return;
    }
    if (m < 1 || chunks.empty()) {
        throw std::invalid_argument("public sabotage needs m >= 1 and at least one chunk");
    }
    int total = 0;
    for (int c : chunks) {
        if (c < 1) {
            throw std::invalid_argument("chunk sizes must be positive");
        }
        total += c;
    }
    if (total != m + 1) {
        throw std::invalid_argument("chunk sizes sum to " + std::to_string(total) + ", expected m + 1 = " +
                                    std::to_string(m + 1));
    }
}

std::optional<double> compute_utility(const GameTranscript &t, const UtilitySpec &spec) {
    const double flex = t.public_accepted + t.bank_accepted - t.mint_calls;
    switch (spec.variant) {
        case UtilityVariant::FlexAdapt:
            return flex;
        case UtilityVariant::FlexNonadapt:
            if (t.adaptive) {
                return std::nullopt;
            }
            return flex;
        case UtilityVariant::AllOrNothingAdapt:
            return t.fail ? -(double)t.mint_calls : flex;
        case UtilityVariant::AllOrNothingNonadapt:
            if (t.adaptive) {
                return std::nullopt;
            }
            return t.fail ? -(double)t.mint_calls : flex;
        case UtilityVariant::MultiverifierAllOrNothing: {
            double u = 0;
            for (const auto &v : t.verifiers) {
                if (v.counter == v.submitted) {
                    u += v.submitted;
                }
            }
            return u + t.bank_accepted - t.mint_calls;
        }
        case UtilityVariant::MultiverifierFlex: {
            double u = 0;
            for (const auto &v : t.verifiers) {
                u += v.counter;
            }
            return u + t.bank_accepted - t.mint_calls;
        }
    }
    return std::nullopt;
}

namespace {

double single_loss(const VerifierRecord &v) {
    if (v.counter == v.submitted) {
        return v.submitted + 1 - v.refund;
    }
    return 1 - v.refund;
}

}  // namespace

double compute_loss(const GameTranscript &t, const LossSpec &spec) {
    if (t.verifiers.empty()) {
        throw std::invalid_argument("transcript has no verifier records");
    }
    switch (spec.variant) {
        case LossVariant::PrivateSabotage:
            return single_loss(t.verifiers[0]);
        case LossVariant::MultiverifierPrivateSabotage: {
            double total = 0;
            for (const auto &v : t.verifiers) {
                total += single_loss(v);
            }
            return total;
        }
        case LossVariant::PublicSabotage: {
            const auto &v = t.verifiers[0];
            if (v.counter != v.submitted) {
                return 1 - v.refund;
            }
            double accepted = 0;
            for (size_t i = 0; i < t.chunk_sizes.size(); i++) {
                if (t.chunk_counts[i] == t.chunk_sizes[i]) {
                    accepted += t.chunk_sizes[i];
                }
            }
            return 1 + v.submitted - accepted;
        }
    }
    throw std::logic_error("unknown loss variant");
}

MonteCarloResult summarize(std::vector<double> samples, double z) {
    MonteCarloResult r;
    const double n = (double)samples.size();
    if (samples.empty()) {
        return r;
    }
    r.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0;
    for (double x : samples) {
        ss += (x - r.mean) * (x - r.mean);
    }
    double var = samples.size() > 1 ? ss / (n - 1) : 0.0;
    r.std_error = std::sqrt(var / n);
    r.ci_low = r.mean - z * r.std_error;
    r.ci_high = r.mean + z * r.std_error;
    r.samples = std::move(samples);
    return r;
}

std::vector<double> run_trials(int trials, uint64_t seed, const std::function<double(int, Rng &)> &fn, int workers) {
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    std::vector<double> out(trials);
    if (workers <= 0) {
        workers = (int)std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, trials);
    auto body = [&](int begin, int step) {
        for (int i = begin; i < trials; i += step) {
            Rng rng = trial_rng(seed, (uint64_t)i);
            out[i] = fn(i, rng);
        }
    };
    if (workers == 1) {
        body(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                body(w, workers);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

namespace {

enum class GameKind { Unforgeability, PrivateSabotage, PublicSabotage, MultiverifierUnforgeability };

// The simulated world of one trial: every register, the verifiers' wallets and the bank.
class World : public Oracles {
   public:
    World(const PkScheme &scheme, Rng &rng, GameKind kind, int verifiers, WalletPolicy policy)
        : scheme_(scheme),
          rng_(rng),
          kind_(kind),
          verifiers_(verifiers),
          policy_(policy),
          lab_(scheme.d(), scheme.params().dense_limit),
          submitted_(verifiers, false) {
        t_.verifiers.resize(verifiers);
    }

    int kappa() const override {
        return scheme_.kappa();
    }
    int local_dim() const override {
        return scheme_.d();
    }
    int verifier_count() const override {
        return verifiers_;
    }

    std::vector<RegisterId> mint() override {
        t_.mint_calls++;
        t_.schedule.push_back("mint");
        return lab_.append(mint_public(scheme_));
    }

    int count_public(const Coins &coins, int verifier) override {
        if (verifier < 0 || verifier >= verifiers_) {
            throw std::invalid_argument("no verifier " + std::to_string(verifier));
        }
        t_.schedule.push_back("count_pk");
        t_.public_queries++;
        t_.submitted_counts.push_back((int)coins.size());
        if (kind_ == GameKind::Unforgeability) {
            return receive_unforgeability(coins);
        }
        if (submitted_[verifier]) {
            throw std::logic_error("verifier " + std::to_string(verifier) + " already received its payment");
        }
        submitted_[verifier] = true;
        Wallet w = wallet_init(scheme_, lab_);
        int counter = 0;
        for (const auto &c : coins) {
            counter += wallet_verify(scheme_, lab_, w, c, rng_) ? 1 : 0;
        }
        t_.public_accepted += counter;
        if (counter != (int)coins.size()) {
            t_.fail = true;
        }
        auto &rec = t_.verifiers[verifier];
        rec.submitted = (int)coins.size();
        rec.counter = counter;
        rec.all_accepted = counter == (int)coins.size();
        if (kind_ == GameKind::PublicSabotage) {
            held_ = w;
        } else if (kind_ == GameKind::PrivateSabotage) {
            // Refund right away; it is never shown to the adversary and acts on the verifier's registers only.
            rec.refund = refund_wallet(scheme_, lab_, w, rng_);
            t_.refunds.push_back(rec.refund);
        } else {
            lab_.discard(w.registers, rng_);
        }
        return counter;
    }

    int count_bank(const Coins &coins) override {
        t_.schedule.push_back("count_sk");
        t_.bank_queries++;
        int r = qcoins::count_bank(scheme_, lab_, coins, rng_);
        t_.bank_accepted += r;
        return r;
    }

    std::vector<RegisterId> prepare(const std::vector<RegisterId> &consumed, const QuantumState &state) override {
        if (state.local_dim() != scheme_.d()) {
            throw std::invalid_argument("prepared state has the wrong local dimension");
        }
        lab_.discard(consumed, rng_);
        return lab_.append(scheme_.private_scheme().to_lab_frame(state, scheme_.params().dense_limit));
    }

    bool measure_sym(const std::vector<RegisterId> &regs) override {
        return lab_.measure_sym(regs, rng_);
    }

    void discard(const std::vector<RegisterId> &regs) override {
        lab_.discard(regs, rng_);
    }

    Rng &rng() override {
        return rng_;
    }

    GameTranscript finish(const LossSpec *loss) {
        t_.adaptive = t_.public_queries + t_.bank_queries > 1;
        if (kind_ == GameKind::PrivateSabotage) {
            for (int v = 0; v < verifiers_; v++) {
                if (!submitted_[v]) {
                    // Untouched wallet: refund of the single fresh coin.
                    Wallet w = wallet_init(scheme_, lab_);
                    t_.verifiers[v].all_accepted = true;
                    t_.verifiers[v].refund = refund_wallet(scheme_, lab_, w, rng_);
                    t_.refunds.push_back(t_.verifiers[v].refund);
                }
            }
        }
        if (kind_ == GameKind::PublicSabotage) {
            finish_public(*loss);
        }
        return std::move(t_);
    }

   private:
    int receive_unforgeability(const Coins &coins) {
        if (policy_ == WalletPolicy::FreshPerQuery || !receiver_) {
            if (receiver_) {
                lab_.discard(receiver_->registers, rng_);
            }
            receiver_ = wallet_init(scheme_, lab_);
        }
        int counter = 0;
        for (const auto &c : coins) {
            counter += wallet_verify(scheme_, lab_, *receiver_, c, rng_) ? 1 : 0;
        }
        t_.public_accepted += counter;
        if (counter != (int)coins.size()) {
            t_.fail = true;
        }
        auto &rec = t_.verifiers[0];
        rec.submitted += (int)coins.size();
        rec.counter += counter;
        rec.all_accepted = rec.submitted == rec.counter;
        return counter;
    }

    void finish_public(const LossSpec &loss) {
        auto &rec = t_.verifiers[0];
        if (!held_) {
            throw std::logic_error("public sabotage adversary never paid");
        }
        if (rec.submitted != loss.m) {
            throw std::invalid_argument("adversary paid " + std::to_string(rec.submitted) + " coins, game expects " +
                                        std::to_string(loss.m));
        }
        if (!rec.all_accepted) {
            rec.refund = refund_wallet(scheme_, lab_, *held_, rng_);
            t_.refunds.push_back(rec.refund);
            return;
        }
        // Re-spend the accepted wallet in chunks, in register order, each to a fresh honest verifier.
        auto coins = split_coins(held_->registers, scheme_.kappa());
        size_t next = 0;
        for (int size : loss.chunks) {
            Coins chunk(coins.begin() + next, coins.begin() + next + size);
            next += size;
            auto pc = qcoins::count_public(scheme_, lab_, chunk, rng_, VerifyMode::Sequential);
            t_.chunk_sizes.push_back(size);
            t_.chunk_counts.push_back(pc.counter);
            lab_.discard(pc.wallet.registers, rng_);
        }
    }

    const PkScheme &scheme_;
    Rng &rng_;
    GameKind kind_;
    int verifiers_;
    WalletPolicy policy_;
    JointState lab_;
    GameTranscript t_;
    std::vector<bool> submitted_;
    std::optional<Wallet> receiver_;
    std::optional<Wallet> held_;
};

}  // namespace

GameTranscript play_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, Rng &rng,
                                   WalletPolicy policy) {
    if (adversary.targets() != 1) {
        throw std::invalid_argument("unforgeability game has a single verifier");
    }
    World w(scheme, rng, GameKind::Unforgeability, 1, policy);
    auto a = adversary.clone();
    a->play(w);
    return w.finish(nullptr);
}

GameTranscript play_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int verifiers,
                                     Rng &rng) {
    if (verifiers < 1 || adversary.targets() > verifiers) {
        throw std::invalid_argument("adversary targets more verifiers than the game has");
    }
    World w(scheme, rng, GameKind::PrivateSabotage, verifiers, WalletPolicy::FreshPerQuery);
    auto a = adversary.clone();
    a->play(w);
    return w.finish(nullptr);
}

GameTranscript play_public_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, const LossSpec &loss,
                                    Rng &rng) {
    loss.validate();
    if (adversary.targets() != 1) {
        throw std::invalid_argument("public sabotage game has a single receiving verifier");
    }
    World w(scheme, rng, GameKind::PublicSabotage, 1, WalletPolicy::FreshPerQuery);
    auto a = adversary.clone();
    a->play(w);
    return w.finish(&loss);
}

GameTranscript play_multiverifier_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                 Rng &rng) {
    if (k < 1 || adversary.targets() > k) {
        throw std::invalid_argument("adversary targets more verifiers than the game has");
    }
    World w(scheme, rng, GameKind::MultiverifierUnforgeability, k, WalletPolicy::FreshPerQuery);
    auto a = adversary.clone();
    a->play(w);
    return w.finish(nullptr);
}

MonteCarloResult run_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme,
                                    const UtilitySpec &utility, const GameOptions &opts) {
    auto samples = run_trials(
        opts.trials, opts.seed,
        [&](int, Rng &rng) {
            auto t = play_unforgeability(adversary, scheme, rng, opts.wallet_policy);
            auto u = compute_utility(t, utility);
            if (!u) {
                throw UndefinedUtility("nonadaptive utility is undefined for adaptive adversary " + adversary.name());
            }
            return *u;
        },
        opts.workers);
    return summarize(std::move(samples), opts.z);
}

MonteCarloResult run_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme,
                                      const GameOptions &opts) {
    LossSpec spec{LossVariant::PrivateSabotage, 0, {}};
    auto samples = run_trials(
        opts.trials, opts.seed,
        [&](int, Rng &rng) { return compute_loss(play_private_sabotage(adversary, scheme, 1, rng), spec); },
        opts.workers);
    return summarize(std::move(samples), opts.z);
}

MonteCarloResult run_multiverifier_private_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                    const GameOptions &opts) {
    LossSpec spec{LossVariant::MultiverifierPrivateSabotage, 0, {}};
    auto samples = run_trials(
        opts.trials, opts.seed,
        [&](int, Rng &rng) { return compute_loss(play_private_sabotage(adversary, scheme, k, rng), spec); },
        opts.workers);
    return summarize(std::move(samples), opts.z);
}

MonteCarloResult run_public_sabotage(const AdversaryStrategy &adversary, const PkScheme &scheme, int k, int m,
                                     const std::vector<int> &chunks, const GameOptions &opts) {
    LossSpec spec{LossVariant::PublicSabotage, m, chunks};
    spec.validate();
    if ((int)chunks.size() != k) {
        throw std::invalid_argument("k must equal the number of chunks");
    }
    auto samples = run_trials(
        opts.trials, opts.seed,
        [&](int, Rng &rng) { return compute_loss(play_public_sabotage(adversary, scheme, spec, rng), spec); },
        opts.workers);
    return summarize(std::move(samples), opts.z);
}

MonteCarloResult run_multiverifier_unforgeability(const AdversaryStrategy &adversary, const PkScheme &scheme, int k,
                                                  const GameOptions &opts, UtilityVariant variant) {
    if (variant != UtilityVariant::MultiverifierAllOrNothing && variant != UtilityVariant::MultiverifierFlex) {
        throw std::invalid_argument("multiverifier game needs a multiverifier utility");
    }
    UtilitySpec spec{variant};
    auto samples = run_trials(
        opts.trials, opts.seed,
        [&](int, Rng &rng) {
            return *compute_utility(play_multiverifier_unforgeability(adversary, scheme, k, rng), spec);
        },
        opts.workers);
    return summarize(std::move(samples), opts.z);
}

}  // namespace qcoins
