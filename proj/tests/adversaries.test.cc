#include "qcoins/adversaries.h"

#include <deque>

#include "gtest/gtest.h"

#include "qcoins/analysis.h"

using namespace qcoins;

namespace {

// Records every oracle call; public counts answer from a script (default: accept everything).
class FakeOracles : public Oracles {
   public:
    FakeOracles(int kappa, int verifiers, uint64_t seed = 2)
        : kappa_(kappa), verifiers_(verifiers), rng_(trial_rng(1, seed)) {
    }
    int kappa() const override {
        return kappa_;
    }
    int local_dim() const override {
        return 2;
    }
    int verifier_count() const override {
        return verifiers_;
    }
    std::vector<RegisterId> mint() override {
        log.push_back("mint");
        mints++;
        return fresh(kappa_);
    }
    int count_public(const Coins &coins, int verifier) override {
        log.push_back("count_pk:" + std::to_string(coins.size()) + "@" + std::to_string(verifier));
        for (const auto &c : coins) {
            EXPECT_EQ((int)c.size(), kappa_);
        }
        if (!script.empty()) {
            int r = script.front();
            script.pop_front();
            return r;
        }
        return (int)coins.size();
    }
    int count_bank(const Coins &coins) override {
        log.push_back("count_sk:" + std::to_string(coins.size()));
        return (int)coins.size();
    }
    std::vector<RegisterId> prepare(const std::vector<RegisterId> &consumed, const QuantumState &state) override {
        log.push_back("prepare:" + std::to_string(consumed.size()) + "->" + std::to_string(state.registers()));
        prepared.push_back(state);
        return fresh(state.registers());
    }
    bool measure_sym(const std::vector<RegisterId> &regs) override {
        log.push_back("sym:" + std::to_string(regs.size()));
        return true;
    }
    void discard(const std::vector<RegisterId> &regs) override {
        log.push_back("discard:" + std::to_string(regs.size()));
    }
    Rng &rng() override {
        return rng_;
    }

    std::vector<std::string> log;
    std::deque<int> script;
    std::vector<QuantumState> prepared;
    int mints = 0;

   private:
    std::vector<RegisterId> fresh(int count) {
        std::vector<RegisterId> out;
        for (int i = 0; i < count; i++) {
            out.push_back(next_++);
        }
        return out;
    }
    int kappa_;
    int verifiers_;
    Rng rng_;
    RegisterId next_ = 0;
};

}  // namespace

TEST(forge_state, type_and_validation) {
    auto s = forge_state(1, 3, 2, 3);
    ASSERT_TRUE(s.is_sym_typed());
    ASSERT_EQ(s.registers(), 6);
    ASSERT_EQ(s.sym().terms.begin()->first, TypeVector({2, 4, 0}));
    ASSERT_THROW(forge_state(2, 2, 1, 2), std::invalid_argument);
    ASSERT_THROW(forge_state(-1, 2, 1, 2), std::invalid_argument);
    ASSERT_THROW(forge_state(0, 1, 0, 2), std::invalid_argument);
    ASSERT_THROW(forge_state(0, 1, 1, 1), std::invalid_argument);
}

TEST(forge_state, pass_probability_is_attack_formula) {
    for (int kappa = 1; kappa <= 3; kappa++) {
        for (int m = 1; m <= 3; m++) {
            for (int n = 0; n < m; n++) {
                auto joint = QuantumState::product(2, ProductString(kappa, 0)).tensor(forge_state(n, m, kappa, 2));
                auto r = project_sym(joint, (m + 1) * kappa);
                ASSERT_EQ(*r.exact, attack_success_prob(n, m, kappa));
            }
        }
    }
}

TEST(honest_strategy, mints_and_pays_each_verifier) {
    FakeOracles o(2, 3);
    HonestStrategy h(2, 3);
    ASSERT_EQ(h.targets(), 3);
    h.play(o);
    ASSERT_EQ(o.log, (std::vector<std::string>{"mint", "mint", "count_pk:2@0", "mint", "mint", "count_pk:2@1", "mint",
                                               "mint", "count_pk:2@2"}));
    ASSERT_THROW(HonestStrategy(0), std::invalid_argument);
    ASSERT_THROW(HonestStrategy(1, 0), std::invalid_argument);
}

TEST(symmetric_forger, consumes_n_and_submits_m) {
    FakeOracles o(2, 1);
    SymmetricForger f(1, 3);
    ASSERT_EQ(f.kind(), AdversaryKind::SymmetricForger);
    f.play(o);
    ASSERT_EQ(o.log, (std::vector<std::string>{"mint", "prepare:2->6", "count_pk:3@0"}));
    ASSERT_EQ(o.prepared[0].sym().terms.begin()->first, TypeVector({2, 4}));
    ASSERT_THROW(SymmetricForger(2, 2), std::invalid_argument);
}

TEST(symmetric_forger, multiverifier_repeats_per_verifier) {
    FakeOracles o(1, 2);
    SymmetricForger f(1, 2, 2);
    f.play(o);
    ASSERT_EQ(o.mints, 2);
    ASSERT_EQ(o.log.back(), "count_pk:2@1");
}

TEST(orthogonal_submitter, mints_nothing) {
    FakeOracles o(3, 1);
    OrthogonalSubmitter a(2);
    a.play(o);
    ASSERT_EQ(o.log, (std::vector<std::string>{"prepare:0->6", "count_pk:2@0"}));
    ASSERT_EQ(o.prepared[0].amplitudes()[63], Amp(1));
}

TEST(adaptive_refund_forger, all_accepted) {
    FakeOracles o(2, 1);
    AdaptiveRefundForger a(2);
    a.play(o);
    ASSERT_EQ(o.log, (std::vector<std::string>{"mint", "mint", "prepare:4->6", "count_pk:1@0", "count_pk:1@0",
                                               "count_pk:1@0"}));
}

TEST(adaptive_refund_forger, stops_at_first_rejection) {
    FakeOracles o(2, 1);
    o.script = {1, 0};
    AdaptiveRefundForger a(3);
    a.play(o);
    ASSERT_EQ(o.log, (std::vector<std::string>{"mint", "mint", "mint", "prepare:6->8", "count_pk:1@0", "count_pk:1@0",
                                               "count_sk:2"}));
}

TEST(adaptive_refund_forger, rejection_on_last_coin_skips_bank) {
    FakeOracles o(1, 1);
    o.script = {1, 0};
    AdaptiveRefundForger a(1);
    a.play(o);
    ASSERT_EQ(o.log.back(), "count_pk:1@0");
    ASSERT_THROW(AdaptiveRefundForger(0), std::invalid_argument);
}

TEST(multiverifier_wrapper, validates_inner) {
    ASSERT_THROW(MultiverifierWrapper(std::make_unique<HonestStrategy>(1, 2), 3), std::invalid_argument);
    ASSERT_THROW(MultiverifierWrapper(nullptr, 1), std::invalid_argument);
    auto w = wrap_multiverifier_to_single(HonestStrategy(1, 2), 2);
    ASSERT_EQ(w->targets(), 1);
    ASSERT_EQ(w->name(), "wrapped(honest(m=1,k=2),k=2)");
}

TEST(multiverifier_wrapper, forwards_only_the_target) {
    MultiverifierWrapper w(std::make_unique<HonestStrategy>(2, 3), 3);
    ASSERT_EQ(w.last_target(), -1);
    std::vector<int> hits(3, 0);
    for (int t = 0; t < 300; t++) {
        FakeOracles o(1, 1, t);
        w.play(o);
        int target = w.last_target();
        ASSERT_GE(target, 0);
        ASSERT_LT(target, 3);
        hits[target]++;
        int forwarded = 0, local_checks = 0, discards = 0;
        for (const auto &e : o.log) {
            forwarded += e.rfind("count_pk", 0) == 0;
            local_checks += e.rfind("sym:", 0) == 0;
            discards += e.rfind("discard", 0) == 0;
        }
        ASSERT_EQ(forwarded, 1);
        ASSERT_EQ(o.log[6 * target + 2], "count_pk:2@0");
        // Two simulated verifiers, two coins each; each simulated wallet uses one extra mint.
        ASSERT_EQ(local_checks, 4);
        ASSERT_EQ(discards, 2);
        ASSERT_EQ(o.mints, 6 + 2);
    }
    for (int v = 0; v < 3; v++) {
        ASSERT_GT(hits[v], 60);
    }
}

TEST(multiverifier_wrapper, single_verifier_needs_no_randomness) {
    MultiverifierWrapper w(std::make_unique<SymmetricForger>(0, 1), 1);
    FakeOracles o(1, 1);
    Rng before = o.rng();
    w.play(o);
    ASSERT_EQ(w.last_target(), 0);
    ASSERT_EQ(o.rng(), before);
}

TEST(strategies, clone_preserves_name) {
    std::vector<std::unique_ptr<AdversaryStrategy>> all;
    all.push_back(std::make_unique<HonestStrategy>(2));
    all.push_back(std::make_unique<SymmetricForger>(1, 2));
    all.push_back(std::make_unique<OrthogonalSubmitter>(1));
    all.push_back(std::make_unique<AdaptiveRefundForger>(2));
    all.push_back(wrap_multiverifier_to_single(SymmetricForger(1, 2, 2), 2));
    for (const auto &a : all) {
        auto c = a->clone();
        ASSERT_EQ(c->name(), a->name());
        ASSERT_EQ(c->kind(), a->kind());
    }
}
