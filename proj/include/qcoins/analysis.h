#ifndef QCOINS_ANALYSIS_H
#define QCOINS_ANALYSIS_H

#include <string>
#include <utility>
#include <vector>

#include "qcoins/symspace.h"

namespace qcoins {

/// Probability that all m coins of forge_state(n, m) pass one comparison verification:
/// C(m k, n k) / C((m + 1) k, (n + 1) k).
MultinomialRatio attack_success_prob(int n, int m, int kappa);

/// Largest eigenvalue of Pi_Good~ Pi_Sym Pi_Good~ in closed form.
MultinomialRatio lambda_max_P(int n, int m, int kappa);

/// Eigenvalue of Pi_Good~ Pi_Sym Pi_Good~ on |B~_j>: C(m k, j) / C((m + 1) k, j + k e_0).
MultinomialRatio p_eigenvalue(const TypeVector &j, int m, int kappa);
/// The same value as prod_{r=1..k} (j0 + r) / (m k + r).
MultinomialRatio p_eigenvalue_product(int j0, int m, int kappa);

struct UtilityBound {
    /// m p - n with p = attack_success_prob(n, m, kappa).
    BigRational tight;
    /// m ((n + 1)/(m + 1))^k - n, then (m - n)/(m + 1)^k, then 1/(m + 1)^(k - 1), then 1/2^(k - 1).
    std::vector<BigRational> chain;
    /// 1/(m + 1)^(k - 1).
    BigRational bound;
    bool holds = false;
};
UtilityBound expected_utility_bound(int n, int m, int kappa);

/// m C(m k, j0) / C((m + 1) k, j0 + k) - j0 / k.
BigRational private_sabotage_eigenvalue(int j0, int m, int kappa);
/// Maximum over j0 in [0, m k], with the maximizing j0.
std::pair<BigRational, int> private_sabotage_max(int m, int kappa);

/// (m + 1)(P1 - P2) - (1 - P1) j0 / k with P1 = C(m k, j0)/C((m + 1)k, j0 + k), P2 = C(m k, j0)/C((m + 2)k, j0 + 2k).
BigRational public_sabotage_loss_term(int j0, int m, int kappa);

struct SpectralReport {
    std::string operator_name;
    /// Ascending, from the dense solver.
    std::vector<double> eigenvalues;
    /// Ascending, from the closed form.
    std::vector<BigRational> formula_values;
    double max_abs_deviation = 0;
    /// Named residuals of operator identities (max-entry norms unless noted).
    std::vector<std::pair<std::string, double>> residuals;

    double lambda_max() const {
        return eigenvalues.empty() ? 0.0 : eigenvalues.back();
    }
    double residual(const std::string &name) const;
};

/// Dense spectrum of Pi_Good~ Pi_Sym Pi_Good~ over (m + 1) k registers against the p_eigenvalue family.
SpectralReport p_operator_spectrum(int n, int m, int kappa, int d, size_t dense_limit = kDefaultDenseLimit);

/// Dense spectrum of Pi_H~ (m Pi_Sym - Counter/k + I) Pi_H~ against the closed-form family.
SpectralReport private_sabotage_spectrum(int m, int kappa, int d, size_t dense_limit = kDefaultDenseLimit);

/// Residuals of the structural identities at one grid point:
///   good_sym_commutator     max |[Pi_Good, Pi_Sym]| on m k registers
///   bad_sym_good            max |Pi_Bad~ Pi_Sym Pi_Good~| on (m + 1) k registers
///   counter_sym_commutator  max |[Counter, Pi_Sym]| on (m + 1) k registers
///   good_count_violation    max over Good vectors of Pr[count > n k]
///   bad_count_shortfall     max over Bad basis vectors of 1 - Pr[count > n k]
///   restricted_excess       max over sampled Good vectors of Pr[all pass] - lambda_max
///   sym_goodtilde_commutator max |[Pi_Sym, Pi_Good~]| (nonzero in general; reported, not asserted)
/// The returned report also carries the P-operator spectrum comparison.
SpectralReport verify_structural_lemmas(int m, int n, int kappa, int d, size_t dense_limit = kDefaultDenseLimit);

/// Residual names verify_structural_lemmas asserts to vanish.
const std::vector<std::string> &asserted_lemma_residuals();

}  // namespace qcoins

#endif
