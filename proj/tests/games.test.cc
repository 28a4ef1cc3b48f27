#include "qcoins/games.h"

#include "gtest/gtest.h"

#include "qcoins/analysis.h"

using namespace qcoins;

static PkScheme scheme_with(int kappa, MillMode mode = MillMode::CanonicalBasis) {
    SchemeParams p;
    p.kappa = kappa;
    p.mill_mode = mode;
    p.seed = 4;
    return PkScheme::keygen(p);
}

static GameOptions opts(int trials, uint64_t seed, WalletPolicy policy = WalletPolicy::PersistentReceiver) {
    GameOptions o;
    o.trials = trials;
    o.seed = seed;
    o.wallet_policy = policy;
    return o;
}

static void expect_mean(const MonteCarloResult &r, double exact, double slack = 1e-12) {
    ASSERT_LE(std::abs(r.mean - exact), 3 * r.std_error + slack) << "mean " << r.mean << " exact " << exact;
}

namespace {

// Pays verifier 0 twice.
class DoublePayer : public AdversaryStrategy {
   public:
    AdversaryKind kind() const override {
        return AdversaryKind::Honest;
    }
    std::string name() const override {
        return "double-payer";
    }
    void play(Oracles &o) override {
        o.count_public({o.mint()}, 0);
        o.count_public({o.mint()}, 0);
    }
    std::unique_ptr<AdversaryStrategy> clone() const override {
        return std::make_unique<DoublePayer>(*this);
    }
};

}  // namespace

static GameTranscript transcript(int mint, int pub, int bank, bool fail, bool adaptive) {
    GameTranscript t;
    t.mint_calls = mint;
    t.public_accepted = pub;
    t.bank_accepted = bank;
    t.fail = fail;
    t.adaptive = adaptive;
    return t;
}

TEST(utility, single_verifier_variants) {
    auto ok = transcript(2, 3, 0, false, false);
    ASSERT_EQ(*compute_utility(ok, {UtilityVariant::FlexNonadapt}), 1);
    ASSERT_EQ(*compute_utility(ok, {UtilityVariant::AllOrNothingNonadapt}), 1);
    auto failed = transcript(2, 1, 0, true, false);
    ASSERT_EQ(*compute_utility(failed, {UtilityVariant::FlexNonadapt}), -1);
    ASSERT_EQ(*compute_utility(failed, {UtilityVariant::AllOrNothingNonadapt}), -2);
    auto adaptive = transcript(4, 2, 2, true, true);
    ASSERT_EQ(*compute_utility(adaptive, {UtilityVariant::FlexAdapt}), 0);
    ASSERT_EQ(*compute_utility(adaptive, {UtilityVariant::AllOrNothingAdapt}), -4);
    ASSERT_FALSE(compute_utility(adaptive, {UtilityVariant::FlexNonadapt}).has_value());
    ASSERT_FALSE(compute_utility(adaptive, {UtilityVariant::AllOrNothingNonadapt}).has_value());
}

TEST(utility, multiverifier_variants) {
    GameTranscript t = transcript(3, 0, 1, true, false);
    t.verifiers = {{2, 2, true, 0}, {2, 1, false, 0}};
    ASSERT_EQ(*compute_utility(t, {UtilityVariant::MultiverifierAllOrNothing}), 2 + 1 - 3);
    ASSERT_EQ(*compute_utility(t, {UtilityVariant::MultiverifierFlex}), 3 + 1 - 3);
}

TEST(loss, private_and_multiverifier) {
    GameTranscript t;
    t.verifiers = {{2, 2, true, 3}, {2, 0, false, 0}, {0, 0, true, 1}};
    ASSERT_EQ(compute_loss(t, {LossVariant::PrivateSabotage, 0, {}}), 0);
    ASSERT_EQ(compute_loss(t, {LossVariant::MultiverifierPrivateSabotage, 0, {}}), 0 + 1 + 0);
    ASSERT_THROW(compute_loss(GameTranscript{}, {}), std::invalid_argument);
}

TEST(loss, public_sabotage) {
    LossSpec spec{LossVariant::PublicSabotage, 2, {1, 2}};
    GameTranscript t;
    t.verifiers = {{2, 2, true, 0}};
    t.chunk_sizes = {1, 2};
    t.chunk_counts = {1, 1};
    ASSERT_EQ(compute_loss(t, spec), 1 + 2 - 1);
    t.chunk_counts = {1, 2};
    ASSERT_EQ(compute_loss(t, spec), 0);
    t.verifiers = {{2, 1, false, 2}};
    ASSERT_EQ(compute_loss(t, spec), -1);
}

TEST(loss, spec_validation) {
    ASSERT_NO_THROW((LossSpec{LossVariant::PublicSabotage, 2, {3}}.validate()));
    ASSERT_THROW((LossSpec{LossVariant::PublicSabotage, 2, {2}}.validate()), std::invalid_argument);
    ASSERT_THROW((LossSpec{LossVariant::PublicSabotage, 2, {0, 3}}.validate()), std::invalid_argument);
    ASSERT_THROW((LossSpec{LossVariant::PublicSabotage, 0, {1}}.validate()), std::invalid_argument);
    ASSERT_NO_THROW((LossSpec{LossVariant::PrivateSabotage, 0, {}}.validate()));
}

TEST(monte_carlo, summarize) {
    auto r = summarize({1, 2, 3, 4}, 2);
    ASSERT_DOUBLE_EQ(r.mean, 2.5);
    double se = std::sqrt((1.25 * 4 / 3) / 4);
    ASSERT_NEAR(r.std_error, se, 1e-15);
    ASSERT_NEAR(r.ci_low, 2.5 - 2 * se, 1e-15);
    ASSERT_NEAR(r.ci_high, 2.5 + 2 * se, 1e-15);
    ASSERT_EQ(summarize({}).mean, 0);
    ASSERT_EQ(summarize({5}).std_error, 0);
}

TEST(monte_carlo, trials_do_not_depend_on_worker_count) {
    auto fn = [](int i, Rng &rng) { return uniform01(rng) + i; };
    auto a = run_trials(257, 11, fn, 1);
    auto b = run_trials(257, 11, fn, 4);
    ASSERT_EQ(a, b);
    ASSERT_NE(a, run_trials(257, 12, fn, 1));
    ASSERT_THROW(run_trials(0, 1, fn), std::invalid_argument);
    ASSERT_THROW(run_trials(4, 1, [](int i, Rng &) -> double { throw std::runtime_error("x"); }, 2),
                 std::runtime_error);
}

TEST(unforgeability_game, honest_player_breaks_even) {
    auto s = scheme_with(2);
    HonestStrategy h(3);
    auto r = run_unforgeability(h, s, {UtilityVariant::AllOrNothingNonadapt}, opts(200, 1));
    ASSERT_EQ(r.mean, 0);
    ASSERT_EQ(r.std_error, 0);
    Rng rng = trial_rng(0, 0);
    auto t = play_unforgeability(h, s, rng);
    ASSERT_EQ(t.mint_calls, 3);
    ASSERT_EQ(t.public_accepted, 3);
    ASSERT_FALSE(t.adaptive);
    ASSERT_EQ(t.schedule, (std::vector<std::string>{"mint", "mint", "mint", "count_pk"}));
}

TEST(unforgeability_game, symmetric_forger_matches_exact_utility) {
    for (auto mode : {MillMode::CanonicalBasis, MillMode::HaarRandom}) {
        for (auto [n, m, kappa] : std::vector<std::tuple<int, int, int>>{{1, 2, 1}, {0, 1, 2}, {1, 3, 2}}) {
            auto s = scheme_with(kappa, mode);
            SymmetricForger f(n, m);
            auto r = run_unforgeability(f, s, {UtilityVariant::AllOrNothingNonadapt}, opts(4000, 3 + n + m));
            expect_mean(r, expected_utility_bound(n, m, kappa).tight.convert_to<double>());
        }
    }
}

TEST(unforgeability_game, adaptive_forger_frozen_values) {
    // Exact values from an independent enumeration of every measurement branch.
    struct Case {
        int kappa, n;
        WalletPolicy policy;
        double exact;
    };
    std::vector<Case> cases = {
        {1, 1, WalletPolicy::PersistentReceiver, 2.0 / 3.0},
        {1, 2, WalletPolicy::PersistentReceiver, 0.75},
        {2, 1, WalletPolicy::PersistentReceiver, 0.2333},
        {2, 2, WalletPolicy::PersistentReceiver, 0.3802},
        {1, 1, WalletPolicy::FreshPerQuery, 0.5},
        {2, 1, WalletPolicy::FreshPerQuery, 0.0556},
    };
    for (const auto &c : cases) {
        auto s = scheme_with(c.kappa);
        AdaptiveRefundForger a(c.n);
        auto r = run_unforgeability(a, s, {UtilityVariant::FlexAdapt}, opts(4000, 100 + c.kappa * 10 + c.n, c.policy));
        expect_mean(r, c.exact, 1e-4);
    }
}

TEST(unforgeability_game, adaptive_transcripts) {
    auto s = scheme_with(1);
    AdaptiveRefundForger a(2);
    bool saw_bank = false;
    for (int t = 0; t < 200; t++) {
        Rng rng = trial_rng(7, t);
        auto tr = play_unforgeability(a, s, rng);
        ASSERT_TRUE(tr.adaptive);
        ASSERT_EQ(tr.mint_calls, 2);
        ASSERT_GE(tr.public_queries, 1);
        ASSERT_LE(tr.bank_queries, 1);
        saw_bank |= tr.bank_queries == 1;
        ASSERT_EQ(tr.fail, tr.public_accepted < tr.public_queries);
    }
    ASSERT_TRUE(saw_bank);
    ASSERT_THROW(run_unforgeability(a, s, {UtilityVariant::FlexNonadapt}, opts(10, 1)), UndefinedUtility);
    ASSERT_THROW(play_unforgeability(SymmetricForger(0, 1, 2), s, *std::make_unique<Rng>()), std::invalid_argument);
}

TEST(private_sabotage_game, losses_match_eigenvalues) {
    for (auto [m, kappa] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {1, 3}}) {
        auto s = scheme_with(kappa);
        HonestStrategy h(m);
        auto hr = run_private_sabotage(h, s, opts(300, 5));
        ASSERT_EQ(hr.mean, 0);
        OrthogonalSubmitter o(m);
        expect_mean(run_private_sabotage(o, s, opts(4000, 6)),
                    private_sabotage_eigenvalue(0, m, kappa).convert_to<double>());
        for (int n = 0; n < m; n++) {
            SymmetricForger f(n, m);
            expect_mean(run_private_sabotage(f, s, opts(4000, 7 + n)),
                        private_sabotage_eigenvalue(n * kappa, m, kappa).convert_to<double>());
        }
    }
}

TEST(private_sabotage_game, idle_verifiers_lose_nothing) {
    auto s = scheme_with(1);
    SymmetricForger f(0, 1);
    Rng rng = trial_rng(3, 3);
    auto t = play_private_sabotage(f, s, 3, rng);
    ASSERT_EQ(t.verifiers.size(), 3u);
    ASSERT_EQ(t.verifiers[1].refund, 1);
    ASSERT_EQ(t.verifiers[2].refund, 1);
    ASSERT_THROW(play_private_sabotage(DoublePayer(), s, 1, rng), std::logic_error);
    ASSERT_THROW(play_private_sabotage(HonestStrategy(1, 3), s, 2, rng), std::invalid_argument);
}

TEST(public_sabotage_game, single_chunk_matches_loss_term) {
    for (auto [n, m, kappa] : std::vector<std::tuple<int, int, int>>{{0, 1, 1}, {1, 2, 1}, {0, 2, 2}}) {
        auto s = scheme_with(kappa);
        SymmetricForger f(n, m);
        auto r = run_public_sabotage(f, s, 1, m, {m + 1}, opts(4000, 9 + n + m));
        expect_mean(r, public_sabotage_loss_term(n * kappa, m, kappa).convert_to<double>());
    }
}

TEST(public_sabotage_game, transcript_and_errors) {
    auto s = scheme_with(1);
    HonestStrategy h(2);
    LossSpec spec{LossVariant::PublicSabotage, 2, {1, 2}};
    Rng rng = trial_rng(1, 1);
    auto t = play_public_sabotage(h, s, spec, rng);
    ASSERT_EQ(t.chunk_sizes, (std::vector<int>{1, 2}));
    ASSERT_EQ(t.chunk_counts, (std::vector<int>{1, 2}));
    ASSERT_EQ(compute_loss(t, spec), 0);
    LossSpec wrong{LossVariant::PublicSabotage, 3, {4}};
    ASSERT_THROW(play_public_sabotage(h, s, wrong, rng), std::invalid_argument);
    ASSERT_THROW(run_public_sabotage(h, s, 1, 2, {1, 2}, opts(10, 1)), std::invalid_argument);
}

TEST(multiverifier_game, utility_and_loss_are_additive) {
    auto s = scheme_with(1);
    SymmetricForger f(1, 2, 2);
    auto r = run_multiverifier_unforgeability(f, s, 2, opts(4000, 12));
    expect_mean(r, 2 * expected_utility_bound(1, 2, 1).tight.convert_to<double>());
    auto l = run_multiverifier_private_sabotage(f, s, 2, opts(4000, 13));
    expect_mean(l, 2 * private_sabotage_eigenvalue(1, 2, 1).convert_to<double>());
    ASSERT_THROW(run_multiverifier_unforgeability(f, s, 2, opts(10, 1), UtilityVariant::FlexAdapt),
                 std::invalid_argument);
}

TEST(multiverifier_game, wrapper_scales_by_k) {
    auto s = scheme_with(1);
    for (int k : {2, 3}) {
        SymmetricForger inner(0, 1, k);
        auto wrapped = wrap_multiverifier_to_single(inner, k);
        auto single = run_private_sabotage(*wrapped, s, opts(6000, 20 + k));
        auto multi = run_multiverifier_private_sabotage(inner, s, k, opts(6000, 30 + k));
        double se = std::sqrt(k * k * single.std_error * single.std_error + multi.std_error * multi.std_error);
        ASSERT_LE(std::abs(k * single.mean - multi.mean), 3 * se);
    }
}
