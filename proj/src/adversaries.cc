#include "qcoins/adversaries.h"

namespace qcoins {

namespace {

std::vector<RegisterId> flatten(const Coins &coins) {
    std::vector<RegisterId> out;
    for (const auto &c : coins) {
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

Coins mint_many(Oracles &o, int count) {
    Coins out;
    for (int i = 0; i < count; i++) {
        out.push_back(o.mint());
    }
    return out;
}

}  // namespace

QuantumState forge_state(int n, int m, int kappa, int d) {
    if (n < 0 || m <= n) {
        throw std::invalid_argument("forge_state needs m > n >= 0");
    }
    if (kappa < 1 || d < 2) {
        throw std::invalid_argument("forge_state needs kappa >= 1 and d >= 2");
    }
    std::vector<int> counts(d, 0);
    counts[0] = n * kappa;
    counts[1] = (m - n) * kappa;
    return sym_basis_state(TypeVector(counts));
}

HonestStrategy::HonestStrategy(int m, int verifiers) : m_(m), verifiers_(verifiers) {
    if (m < 1 || verifiers < 1) {
        throw std::invalid_argument("honest strategy needs m >= 1 and at least one verifier");
    }
}

std::string HonestStrategy::name() const {
    return "honest(m=" + std::to_string(m_) + ",k=" + std::to_string(verifiers_) + ")";
}

void HonestStrategy::play(Oracles &o) {
    for (int v = 0; v < verifiers_; v++) {
        o.count_public(mint_many(o, m_), v);
    }
}

SymmetricForger::SymmetricForger(int n, int m, int verifiers) : n_(n), m_(m), verifiers_(verifiers) {
    if (n < 0 || m <= n || verifiers < 1) {
        throw std::invalid_argument("forger needs m > n >= 0 and at least one verifier");
    }
}

std::string SymmetricForger::name() const {
    return "symmetric-forger(n=" + std::to_string(n_) + ",m=" + std::to_string(m_) + ",k=" +
           std::to_string(verifiers_) + ")";
}

void SymmetricForger::play(Oracles &o) {
    for (int v = 0; v < verifiers_; v++) {
        auto minted = flatten(mint_many(o, n_));
        auto regs = o.prepare(minted, forge_state(n_, m_, o.kappa(), o.local_dim()));
        o.count_public(split_coins(regs, o.kappa()), v);
    }
}

OrthogonalSubmitter::OrthogonalSubmitter(int m, int verifiers) : m_(m), verifiers_(verifiers) {
    if (m < 1 || verifiers < 1) {
        throw std::invalid_argument("orthogonal submitter needs m >= 1 and at least one verifier");
    }
}

std::string OrthogonalSubmitter::name() const {
    return "orthogonal(m=" + std::to_string(m_) + ",k=" + std::to_string(verifiers_) + ")";
}

void OrthogonalSubmitter::play(Oracles &o) {
    for (int v = 0; v < verifiers_; v++) {
        auto regs = o.prepare({}, QuantumState::product(o.local_dim(), ProductString(m_ * o.kappa(), 1)));
        o.count_public(split_coins(regs, o.kappa()), v);
    }
}

AdaptiveRefundForger::AdaptiveRefundForger(int n) : n_(n) {
    if (n < 1) {
        throw std::invalid_argument("adaptive forger needs n >= 1");
    }
}

std::string AdaptiveRefundForger::name() const {
    return "adaptive-refund(n=" + std::to_string(n_) + ")";
}

void AdaptiveRefundForger::play(Oracles &o) {
    auto minted = flatten(mint_many(o, n_));
    auto regs = o.prepare(minted, forge_state(n_, n_ + 1, o.kappa(), o.local_dim()));
    auto coins = split_coins(regs, o.kappa());
    for (size_t i = 0; i < coins.size(); i++) {
        if (o.count_public({coins[i]}, 0) == 1) {
            continue;
        }
        Coins rest(coins.begin() + i + 1, coins.end());
        if (!rest.empty()) {
            o.count_bank(rest);
        }
        return;
    }
}

namespace {

// Presents k verifiers to the inner strategy; only `target` reaches the real game.
class SimulatedVerifiers : public Oracles {
   public:
    SimulatedVerifiers(Oracles &outer, int k, int target) : outer_(outer), k_(k), target_(target) {
    }
    int kappa() const override {
        return outer_.kappa();
    }
    int local_dim() const override {
        return outer_.local_dim();
    }
    int verifier_count() const override {
        return k_;
    }
    std::vector<RegisterId> mint() override {
        return outer_.mint();
    }
    int count_public(const Coins &coins, int verifier) override {
        if (verifier == target_) {
            return outer_.count_public(coins, 0);
        }
        // Comparison verification run locally against a freshly minted coin.
        auto wallet = outer_.mint();
        int counter = 0;
        for (const auto &c : coins) {
            wallet.insert(wallet.end(), c.begin(), c.end());
            if (outer_.measure_sym(wallet)) {
                counter++;
            }
        }
        outer_.discard(wallet);
        return counter;
    }
    int count_bank(const Coins &coins) override {
        return outer_.count_bank(coins);
    }
    std::vector<RegisterId> prepare(const std::vector<RegisterId> &consumed, const QuantumState &state) override {
        return outer_.prepare(consumed, state);
    }
    bool measure_sym(const std::vector<RegisterId> &regs) override {
        return outer_.measure_sym(regs);
    }
    void discard(const std::vector<RegisterId> &regs) override {
        outer_.discard(regs);
    }
    Rng &rng() override {
        return outer_.rng();
    }

   private:
    Oracles &outer_;
    int k_;
    int target_;
};

}  // namespace

MultiverifierWrapper::MultiverifierWrapper(std::unique_ptr<AdversaryStrategy> inner, int k)
    : inner_(std::move(inner)), k_(k) {
    if (!inner_ || k < 1) {
        throw std::invalid_argument("wrapper needs an inner strategy and k >= 1");
    }
    if (inner_->targets() != k) {
        throw std::invalid_argument("inner strategy targets " + std::to_string(inner_->targets()) +
                                    " verifiers, expected " + std::to_string(k));
    }
}

MultiverifierWrapper::MultiverifierWrapper(const MultiverifierWrapper &other)
    : inner_(other.inner_->clone()), k_(other.k_) {
}

std::string MultiverifierWrapper::name() const {
    return "wrapped(" + inner_->name() + ",k=" + std::to_string(k_) + ")";
}

void MultiverifierWrapper::play(Oracles &o) {
    int target = 0;
    if (k_ > 1) {
        target = (int)(uniform01(o.rng()) * k_);
    }
    last_target_ = target;
    SimulatedVerifiers sim(o, k_, target);
    auto fresh = inner_->clone();
    fresh->play(sim);
}

std::unique_ptr<AdversaryStrategy> wrap_multiverifier_to_single(const AdversaryStrategy &inner, int k) {
    return std::make_unique<MultiverifierWrapper>(inner.clone(), k);
}

}  // namespace qcoins
