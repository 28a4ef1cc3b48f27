// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.h"
#include "qcoins/adversaries.h"
#include "qcoins/analysis.h"
#include "qcoins/games.h"
#include "qcoins/pkqc.h"

using namespace qcoins;

namespace {

constexpr int kMaxRegisters = 12;
constexpr int kTrials = 10000;

struct GridPoint {
    int n, m, kappa;
};

// Every (n, m, kappa) with (m + 1) kappa <= 12 and 0 <= n < m.
std::vector<GridPoint> attack_grid() {
    std::vector<GridPoint> out;
    for (int kappa = 1; 2 * kappa <= kMaxRegisters; kappa++) {
        for (int m = 1; (m + 1) * kappa <= kMaxRegisters; m++) {
            for (int n = 0; n < m; n++) {
                out.push_back({n, m, kappa});
            }
        }
    }
    return out;
}

std::string at(const GridPoint &g) {
    return "(n=" + std::to_string(g.n) + ",m=" + std::to_string(g.m) + ",kappa=" + std::to_string(g.kappa) + ")";
}

double dbl(const BigRational &r) {
    return r.convert_to<double>();
}

PkScheme scheme_with(int kappa) {
    SchemeParams p;
    p.kappa = kappa;
    p.seed = 2024;
    return PkScheme::keygen(p);
}

GameOptions opts(uint64_t seed, int trials = kTrials) {
    GameOptions o;
    o.trials = trials;
    o.seed = seed;
    return o;
}

// Collects the first few problems of a criterion.
struct Check {
    std::vector<std::string> problems;
    void expect(bool ok, const std::string &what) {
        if (!ok) {
            problems.push_back(what);
        }
    }
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // <= 0 means untimed
    std::function<void(Check &)> body;
};

bool run(const Criterion &c) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
        c.body(check);
    } catch (const std::exception &e) {
        check.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
        check.problems.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(c.time_limit_s) + " s");
    }
    bool ok = check.problems.empty();
    std::printf("%s [%2d] %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
    for (size_t i = 0; i < check.problems.size() && i < 10; i++) {
        std::printf("       %s\n", check.problems[i].c_str());
    }
    std::fflush(stdout);
    return ok;
}

void swap_test(Check &c) {
    auto typed = QuantumState::product(2, {0}).tensor(sym_basis_state(TypeVector({0, 1})));
    auto exact = project_sym(typed, 2);
    c.expect(exact.exact && exact.exact->str() == "1/2", "exact swap-test probability is not 1/2");
    auto dense = project_sym(QuantumState::product(2, {0, 1}), 2);
    c.expect(std::abs(dense.probability - 0.5) < 1e-15, "dense swap-test probability " + std::to_string(dense.probability));

    auto scheme = scheme_with(1);
    auto r = summarize(run_trials(kTrials, 11, [&](int, Rng &rng) {
        JointState lab(2);
        Wallet w = wallet_init(scheme, lab);
        return wallet_verify(scheme, lab, w, QuantumState::product(2, {1}), rng) ? 1.0 : 0.0;
    }));
    double sigma = std::sqrt(0.25 / kTrials);
    c.expect(std::abs(r.mean - 0.5) <= 3 * sigma, "Monte-Carlo acceptance " + std::to_string(r.mean));
}

void attack_formula(Check &c) {
    for (const auto &g : attack_grid()) {
        auto exact = attack_success_prob(g.n, g.m, g.kappa);
        auto joint = QuantumState::product(2, ProductString(g.kappa, 0))
                         .tensor(forge_state(g.n, g.m, g.kappa, 2))
                         .to_dense();
        double dense = project_sym(joint, (g.m + 1) * g.kappa).probability;
        c.expect(std::abs(dense - exact.to_double()) <= 1e-10,
                 at(g) + " dense " + std::to_string(dense) + " vs " + exact.str());
    }
    c.expect(attack_success_prob(1, 2, 1).str() == "2/3", "(1,2,1) is not 2/3");
    BigRational bound = 1;
    for (int kappa = 1; kappa <= 6; kappa++) {
        bound *= BigRational(2, 3);
        c.expect(attack_success_prob(1, 2, kappa).value() <= bound,
                 "(1,2," + std::to_string(kappa) + ") exceeds (2/3)^kappa");
    }
}

void spectral_optimality(Check &c) {
    for (const auto &g : attack_grid()) {
        auto rep = p_operator_spectrum(g.n, g.m, g.kappa, 2);
        c.expect(std::abs(rep.lambda_max() - lambda_max_P(g.n, g.m, g.kappa).to_double()) <= 1e-10,
                 at(g) + " lambda_max " + std::to_string(rep.lambda_max()));
        c.expect(rep.max_abs_deviation <= 1e-10, at(g) + " eigenvalue multiset deviation " +
                                                     std::to_string(rep.max_abs_deviation));
    }
}

void structural_lemmas(Check &c) {
    for (const auto &g : attack_grid()) {
        auto rep = verify_structural_lemmas(g.m, g.n, g.kappa, 2);
        for (const char *name : {"good_sym_commutator", "bad_sym_good", "counter_sym_commutator"}) {
            double v = rep.residual(name);
            c.expect(v < 1e-12, at(g) + " " + name + " = " + std::to_string(v));
        }
    }
}

void completeness(Check &c) {
    int verifications = 0, rejections = 0;
    const int per_cell = (kTrials + 8) / 9;
    for (int kappa = 1; kappa <= 3; kappa++) {
        auto scheme = scheme_with(kappa);
        for (int len = 1; len <= 3; len++) {
            QuantumState coins = QuantumState::empty(2);
            for (int i = 0; i < len; i++) {
                coins = coins.tensor(mint_public(scheme));
            }
            for (int t = 0; t < per_cell; t++) {
                Rng rng = trial_rng(kappa * 10 + len, t);
                auto mode = t % 2 ? VerifyMode::SingleShot : VerifyMode::Sequential;
                rejections += count_public(scheme, coins, rng, mode).counter != len;
                verifications++;
            }
        }
    }
    c.expect(verifications >= kTrials, "only " + std::to_string(verifications) + " verifications");
    c.expect(rejections == 0, std::to_string(rejections) + " rejections");
}

void rational_unforgeability(Check &c) {
    uint64_t seed = 600;
    for (const auto &g : attack_grid()) {
        auto scheme = scheme_with(g.kappa);
        auto r = run_unforgeability(SymmetricForger(g.n, g.m), scheme, {UtilityVariant::AllOrNothingNonadapt},
                                    opts(seed++));
        double bound = dbl(expected_utility_bound(g.n, g.m, g.kappa).bound);
        c.expect(r.mean <= bound + 3 * r.std_error, at(g) + " mean utility " + std::to_string(r.mean));
    }
    for (int kappa = 1; kappa <= 8; kappa++) {
        for (int m = 1; m <= 10; m++) {
            for (int n = 0; n < m; n++) {
                auto u = expected_utility_bound(n, m, kappa);
                c.expect(u.holds, "bound chain fails at " + at({n, m, kappa}));
                if (kappa >= 4 && n >= 1) {
                    c.expect(u.tight < 0, "tight utility not negative at " + at({n, m, kappa}));
                }
            }
        }
    }
}

void adaptive_break(Check &c) {
    const int kappa = 2, n = kappa * kappa;
    auto r = run_unforgeability(AdaptiveRefundForger(n), scheme_with(kappa), {UtilityVariant::FlexAdapt}, opts(700));
    c.expect(r.mean - 3 * r.std_error > 0,
             "mean " + std::to_string(r.mean) + " stderr " + std::to_string(r.std_error));
}

void private_sabotage(Check &c) {
    uint64_t seed = 800;
    for (int kappa = 1; kappa <= 3; kappa++) {
        auto scheme = scheme_with(kappa);
        for (int m = 1; (m + 1) * kappa <= 9; m++) {
            double worst = dbl(private_sabotage_max(m, kappa).first);
            std::vector<std::unique_ptr<AdversaryStrategy>> adversaries;
            adversaries.push_back(std::make_unique<HonestStrategy>(m));
            adversaries.push_back(std::make_unique<OrthogonalSubmitter>(m));
            for (int n = 0; n < m; n++) {
                adversaries.push_back(std::make_unique<SymmetricForger>(n, m));
            }
            adversaries.push_back(wrap_multiverifier_to_single(SymmetricForger(0, m, 2), 2));
            for (const auto &a : adversaries) {
                auto r = run_private_sabotage(*a, scheme, opts(seed++, kTrials / 2));
                c.expect(r.mean <= worst + 3 * r.std_error, a->name() + " kappa=" + std::to_string(kappa) +
                                                                " loss " + std::to_string(r.mean));
            }
        }
    }
    for (int kappa = 1; kappa <= 8; kappa++) {
        for (int m = 1; m <= 10; m++) {
            c.expect(private_sabotage_max(m, kappa).first <= BigRational(1, 1 << (kappa - 1)),
                     "max eigenvalue exceeds 1/2^(kappa-1) at m=" + std::to_string(m) + ",kappa=" +
                         std::to_string(kappa));
        }
    }
}

void public_sabotage(Check &c) {
    for (int kappa = 1; kappa <= 6; kappa++) {
        for (int m = 1; m <= 10; m++) {
            c.expect(public_sabotage_loss_term(m * kappa, m, kappa) == 0, "nonzero term at j0 = m kappa");
        }
    }
    for (int m = 1; m <= 10; m++) {
        for (int j0 = 2; j0 <= 4 * m - 1; j0++) {
            c.expect(public_sabotage_loss_term(j0, m, 4) < 0,
                     "term not negative at m=" + std::to_string(m) + ",j0=" + std::to_string(j0));
        }
    }
    // Paired: the same trial streams drive the single-chunk and chunked games.
    struct Case {
        int n, m, kappa;
        std::vector<int> chunks;
    };
    std::vector<Case> cases = {{0, 1, 1, {1, 1}}, {1, 2, 1, {1, 2}}, {0, 2, 1, {1, 1, 1}}, {0, 1, 2, {1, 1}},
                               {1, 2, 2, {2, 1}}, {2, 3, 1, {2, 2}}};
    uint64_t seed = 900;
    for (const auto &k : cases) {
        auto scheme = scheme_with(k.kappa);
        SymmetricForger f(k.n, k.m);
        auto single = run_public_sabotage(f, scheme, 1, k.m, {k.m + 1}, opts(seed));
        auto chunked = run_public_sabotage(f, scheme, (int)k.chunks.size(), k.m, k.chunks, opts(seed));
        seed++;
        std::vector<double> diff(single.samples.size());
        for (size_t i = 0; i < diff.size(); i++) {
            diff[i] = chunked.samples[i] - single.samples[i];
        }
        auto d = summarize(diff);
        c.expect(d.mean <= 3 * d.std_error, at({k.n, k.m, k.kappa}) + " chunked exceeds single by " +
                                                std::to_string(d.mean));
    }
}

void multiverifier_reduction(Check &c) {
    for (int kappa = 1; kappa <= 2; kappa++) {
        auto scheme = scheme_with(kappa);
        for (int k : {2, 3}) {
            for (int n = 0; n <= 1; n++) {
                SymmetricForger inner(n, 2, k);
                auto wrapped = wrap_multiverifier_to_single(inner, k);
                auto single = run_private_sabotage(*wrapped, scheme, opts(1000 + 10 * k + n));
                auto multi = run_multiverifier_private_sabotage(inner, scheme, k, opts(1100 + 10 * k + n));
                double se = std::hypot(k * single.std_error, multi.std_error);
                c.expect(std::abs(k * single.mean - multi.mean) <= 3 * se,
                         "k=" + std::to_string(k) + " kappa=" + std::to_string(kappa) + " wrapped x k " +
                             std::to_string(k * single.mean) + " vs " + std::to_string(multi.mean));
            }
        }
    }
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Check &c) {
    ExperimentConfig cfg;
    cfg.kappa = 2;
    cfg.trials = 300;
    cfg.seed = 77;
    auto dir = std::filesystem::temp_directory_path();
    std::vector<std::string> texts;
    for (const char *name : {"qcoins_det_a.csv", "qcoins_det_b.csv"}) {
        cfg.out = (dir / name).string();
        std::string err;
        int rc = run_command("security-tables", cfg, &err);
        c.expect(rc != 2, "security-tables failed to run: " + err);
        texts.push_back(slurp(cfg.out));
        std::filesystem::remove(cfg.out);
    }
    c.expect(!texts[0].empty(), "empty output");
    c.expect(texts[0] == texts[1], "outputs differ");
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "swap-test base case", 1, swap_test},
        {2, "attack success formula on the dense grid", 30, attack_formula},
        {3, "spectral optimality of the attack", 60, spectral_optimality},
        {4, "structural operator identities", 30, structural_lemmas},
        {5, "completeness of honest coins", 0, completeness},
        {6, "rational unforgeability bound", 0, rational_unforgeability},
        {7, "adaptive refund attack has positive utility", 0, adaptive_break},
        {8, "private sabotage bound", 0, private_sabotage},
        {9, "public sabotage sign sweep and chunking", 0, public_sabotage},
        {10, "multiverifier reduction identity", 0, multiverifier_reduction},
        {11, "deterministic security tables", 0, determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        failed += !run(c);
    }
    std::printf("%d/%zu criteria passed\n", (int)criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
