#include "qcoins/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qcoins/rng.h"

namespace qcoins {

namespace {

void check_nmk(int n, int m, int kappa) {
    if (n < 0 || m <= n || kappa < 1) {
        throw std::invalid_argument("need m > n >= 0 and kappa >= 1");
    }
}

void check_mk(int m, int kappa) {
    if (m < 1 || kappa < 1) {
        throw std::invalid_argument("need m >= 1 and kappa >= 1");
    }
}

BigRational ratio(const BigInt &a, const BigInt &b) {
    return BigRational(a, b);
}

BigRational rpow(const BigRational &x, int e) {
    BigRational r = 1;
    for (int i = 0; i < e; i++) {
        r *= x;
    }
    return r;
}

// Sparse Pi_Sym matrices are reused across grid points.
std::shared_ptr<const RealSparse> cached_sym(int n, int d, size_t limit) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const RealSparse>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, d);
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    auto m = std::make_shared<const RealSparse>(sym_projector_sparse(n, d, limit));
    cache[key] = m;
    return m;
}

int zeros_in(size_t index, int d, int n, int from) {
    auto s = index_string(index, d, n);
    return (int)std::count(s.begin() + from, s.end(), 0);
}

RealSparse diagonal(const std::vector<double> &diag) {
    RealSparse m((Eigen::Index)diag.size(), (Eigen::Index)diag.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (size_t i = 0; i < diag.size(); i++) {
        if (diag[i] != 0) {
            trips.emplace_back((int)i, (int)i, diag[i]);
        }
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

double max_entry(const RealSparse &m) {
    double best = 0;
    for (int k = 0; k < m.outerSize(); k++) {
        for (RealSparse::InnerIterator it(m, k); it; ++it) {
            best = std::max(best, std::abs(it.value()));
        }
    }
    return best;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void join(int a, int b) {
        parent[find(a)] = find(b);
    }
};

// Eigenvalues of a real symmetric sparse matrix, solved block by block over its connected components.
// Rows with no entries contribute zeros.
std::vector<double> block_spectrum(const RealSparse &m) {
    const int dim = (int)m.rows();
    UnionFind uf(dim);
    std::vector<bool> touched(dim, false);
    for (int k = 0; k < m.outerSize(); k++) {
        for (RealSparse::InnerIterator it(m, k); it; ++it) {
            uf.join((int)it.row(), (int)it.col());
            touched[it.row()] = touched[it.col()] = true;
        }
    }
    std::map<int, std::vector<int>> blocks;
    std::vector<double> out;
    for (int i = 0; i < dim; i++) {
        if (touched[i]) {
            blocks[uf.find(i)].push_back(i);
        } else {
            out.push_back(0.0);
        }
    }
    std::vector<int> local(dim, -1);
    for (const auto &[root, members] : blocks) {
        const int b = (int)members.size();
        for (int a = 0; a < b; a++) {
            local[members[a]] = a;
        }
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(b, b);
        for (int col : members) {
            for (RealSparse::InnerIterator it(m, col); it; ++it) {
                block(local[it.row()], local[col]) = it.value();
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
        for (int a = 0; a < b; a++) {
            out.push_back(solver.eigenvalues()(a));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void compare(SpectralReport &r) {
    std::sort(r.formula_values.begin(), r.formula_values.end());
    if (r.formula_values.size() != r.eigenvalues.size()) {
        r.max_abs_deviation = INFINITY;
        return;
    }
    double dev = 0;
    for (size_t i = 0; i < r.eigenvalues.size(); i++) {
        dev = std::max(dev, std::abs(r.eigenvalues[i] - r.formula_values[i].convert_to<double>()));
    }
    r.max_abs_deviation = dev;
}

// Mask of |phi_0>^kappa x (body with #zeros <= cutoff); cutoff < 0 keeps every body.
std::vector<double> wallet_mask(int d, int total, int kappa, int cutoff, bool above) {
    size_t dim = checked_pow(d, total, SIZE_MAX);
    std::vector<double> mask(dim, 0.0);
    for (size_t i = 0; i < dim; i++) {
        auto s = index_string(i, d, total);
        bool lead = std::all_of(s.begin(), s.begin() + kappa, [](int x) { return x == 0; });
        if (!lead) {
            continue;
        }
        int z = (int)std::count(s.begin() + kappa, s.end(), 0);
        bool good = cutoff < 0 || z <= cutoff;
        mask[i] = (above ? (cutoff >= 0 && z > cutoff) : good) ? 1.0 : 0.0;
    }
    return mask;
}

}  // namespace

MultinomialRatio attack_success_prob(int n, int m, int kappa) {
    check_nmk(n, m, kappa);
    return MultinomialRatio(binomial(m * kappa, n * kappa), binomial((m + 1) * kappa, (n + 1) * kappa));
}

MultinomialRatio lambda_max_P(int n, int m, int kappa) {
    check_nmk(n, m, kappa);
    // Eigenvalues grow with j0, so the top one sits at j0 = n kappa.
    return p_eigenvalue_product(n * kappa, m, kappa);
}

MultinomialRatio p_eigenvalue(const TypeVector &j, int m, int kappa) {
    check_mk(m, kappa);
    if (j.total() != m * kappa) {
        throw std::invalid_argument("type " + j.str() + " must sum to m * kappa");
    }
    return MultinomialRatio(multinomial(m * kappa, j), multinomial((m + 1) * kappa, j.plus(0, kappa)));
}

MultinomialRatio p_eigenvalue_product(int j0, int m, int kappa) {
    check_mk(m, kappa);
    if (j0 < 0 || j0 > m * kappa) {
        throw std::invalid_argument("j0 out of range");
    }
    BigRational r = 1;
    for (int i = 1; i <= kappa; i++) {
        r *= BigRational(j0 + i, m * kappa + i);
    }
    return MultinomialRatio(r);
}

UtilityBound expected_utility_bound(int n, int m, int kappa) {
    check_nmk(n, m, kappa);
    UtilityBound u;
    u.tight = BigRational(m) * attack_success_prob(n, m, kappa).value() - n;
    u.chain.push_back(BigRational(m) * rpow(BigRational(n + 1, m + 1), kappa) - n);
    u.chain.push_back(BigRational(m - n) / rpow(BigRational(m + 1), kappa));
    u.bound = BigRational(1) / rpow(BigRational(m + 1), kappa - 1);
    u.chain.push_back(u.bound);
    u.chain.push_back(BigRational(1) / rpow(BigRational(2), kappa - 1));
    u.holds = u.tight <= u.chain[0];
    for (size_t i = 1; i < u.chain.size(); i++) {
        u.holds = u.holds && u.chain[i - 1] <= u.chain[i];
    }
    return u;
}

BigRational private_sabotage_eigenvalue(int j0, int m, int kappa) {
    check_mk(m, kappa);
    if (j0 < 0 || j0 > m * kappa) {
        throw std::invalid_argument("j0 out of range");
    }
    return BigRational(m) * ratio(binomial(m * kappa, j0), binomial((m + 1) * kappa, j0 + kappa)) -
           BigRational(j0, kappa);
}

std::pair<BigRational, int> private_sabotage_max(int m, int kappa) {
    check_mk(m, kappa);
    BigRational best = private_sabotage_eigenvalue(0, m, kappa);
    int arg = 0;
    for (int j0 = 1; j0 <= m * kappa; j0++) {
        auto v = private_sabotage_eigenvalue(j0, m, kappa);
        if (v > best) {
            best = v;
            arg = j0;
        }
    }
    return {best, arg};
}

BigRational public_sabotage_loss_term(int j0, int m, int kappa) {
    check_mk(m, kappa);
    if (j0 < 0 || j0 > m * kappa) {
        throw std::invalid_argument("j0 out of range");
    }
    BigRational p1 = ratio(binomial(m * kappa, j0), binomial((m + 1) * kappa, j0 + kappa));
    BigRational p2 = ratio(binomial(m * kappa, j0), binomial((m + 2) * kappa, j0 + 2 * kappa));
    return BigRational(m + 1) * (p1 - p2) - (1 - p1) * BigRational(j0, kappa);
}

double SpectralReport::residual(const std::string &name) const {
    for (const auto &[k, v] : residuals) {
        if (k == name) {
            return v;
        }
    }
    throw std::out_of_range("no residual named " + name);
}

SpectralReport p_operator_spectrum(int n, int m, int kappa, int d, size_t dense_limit) {
    check_nmk(n, m, kappa);
    const int total = (m + 1) * kappa;
    const int body = m * kappa;
    auto sym = cached_sym(total, d, dense_limit);
    RealSparse good = diagonal(wallet_mask(d, total, kappa, n * kappa, false));
    RealSparse p = RealSparse(good * (*sym)) * good;
    p.prune(0.0);

    SpectralReport r;
    r.operator_name = "P(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",kappa=" + std::to_string(kappa) +
                      ",d=" + std::to_string(d) + ")";
    r.eigenvalues = block_spectrum(p);
    for (const auto &j : enumerate_types(d, body)) {
        if (j[0] <= n * kappa) {
            r.formula_values.push_back(p_eigenvalue(j, m, kappa).value());
        }
    }
    r.formula_values.resize(r.eigenvalues.size(), BigRational(0));
    compare(r);
    double top = lambda_max_P(n, m, kappa).to_double();
    r.residuals.emplace_back("lambda_max", std::abs(r.lambda_max() - top));
    return r;
}

SpectralReport private_sabotage_spectrum(int m, int kappa, int d, size_t dense_limit) {
    check_mk(m, kappa);
    const int total = (m + 1) * kappa;
    const int body = m * kappa;
    auto sym = cached_sym(total, d, dense_limit);
    size_t dim = (size_t)sym->rows();

    std::vector<double> counter(dim);
    for (size_t i = 0; i < dim; i++) {
        counter[i] = zeros_in(i, d, total, 0);
    }
    RealSparse cnt = diagonal(counter);
    RealSparse ident(dim, dim);
    ident.setIdentity();
    RealSparse h = diagonal(wallet_mask(d, total, kappa, -1, false));
    RealSparse q = (double)m * (*sym) - cnt / (double)kappa + ident;
    RealSparse restricted = RealSparse(h * q) * h;
    restricted.prune(0.0);

    SpectralReport r;
    r.operator_name = "Q(m=" + std::to_string(m) + ",kappa=" + std::to_string(kappa) + ",d=" + std::to_string(d) + ")";
    r.eigenvalues = block_spectrum(restricted);
    for (const auto &j : enumerate_types(d, body)) {
        BigInt size = multinomial(body, j);
        r.formula_values.push_back(private_sabotage_eigenvalue(j[0], m, kappa));
        for (BigInt c = 1; c < size; c++) {
            r.formula_values.push_back(-BigRational(j[0], kappa));
        }
    }
    r.formula_values.resize(r.eigenvalues.size(), BigRational(0));
    compare(r);
    RealSparse comm = RealSparse(cnt * (*sym)) - RealSparse((*sym) * cnt);
    r.residuals.emplace_back("counter_sym_commutator", max_entry(comm));
    r.residuals.emplace_back("lambda_max",
                             std::abs(r.lambda_max() - private_sabotage_max(m, kappa).first.convert_to<double>()));
    return r;
}

SpectralReport verify_structural_lemmas(int m, int n, int kappa, int d, size_t dense_limit) {
    SpectralReport r = p_operator_spectrum(n, m, kappa, d, dense_limit);
    const int total = (m + 1) * kappa;
    const int body = m * kappa;
    const int cutoff = n * kappa;

    // Body-only Good projector against Pi_Sym on m kappa registers.
    auto sym_body = cached_sym(body, d, dense_limit);
    size_t body_dim = (size_t)sym_body->rows();
    std::vector<double> good_body(body_dim), body_zeros(body_dim);
    for (size_t i = 0; i < body_dim; i++) {
        body_zeros[i] = zeros_in(i, d, body, 0);
        good_body[i] = body_zeros[i] <= cutoff ? 1.0 : 0.0;
    }
    RealSparse g = diagonal(good_body);
    RealSparse comm = RealSparse(g * (*sym_body)) - RealSparse((*sym_body) * g);
    r.residuals.emplace_back("good_sym_commutator", max_entry(comm));

    auto sym = cached_sym(total, d, dense_limit);
    size_t dim = (size_t)sym->rows();
    RealSparse good_t = diagonal(wallet_mask(d, total, kappa, cutoff, false));
    RealSparse bad_t = diagonal(wallet_mask(d, total, kappa, cutoff, true));
    r.residuals.emplace_back("bad_sym_good", max_entry(RealSparse(bad_t * (*sym)) * good_t));

    std::vector<double> counter(dim);
    for (size_t i = 0; i < dim; i++) {
        counter[i] = zeros_in(i, d, total, 0);
    }
    RealSparse cnt = diagonal(counter);
    r.residuals.emplace_back("counter_sym_commutator",
                             max_entry(RealSparse(cnt * (*sym)) - RealSparse((*sym) * cnt)));

    // Counting on Good / Bad basis vectors.
    double violation = 0, shortfall = 0;
    for (size_t i = 0; i < body_dim; i++) {
        bool above = body_zeros[i] > cutoff;
        if (good_body[i] > 0 && above) {
            violation = 1;
        }
        if (good_body[i] == 0 && !above) {
            shortfall = 1;
        }
    }
    r.residuals.emplace_back("good_count_violation", violation);
    r.residuals.emplace_back("bad_count_shortfall", shortfall);

    // Sequential verification of random Good vectors behind a fresh wallet.
    Rng rng = trial_rng(0x5eedULL, (uint64_t)(((m * 64 + n) * 64 + kappa) * 16 + d));
    std::normal_distribution<double> gauss;
    const double lam = lambda_max_P(n, m, kappa).to_double();
    double excess = -INFINITY;
    for (int sample = 0; sample < 8; sample++) {
        AmpVector v(dim, Amp(0));
        double norm2 = 0;
        // Wallet registers in |phi_0> occupy the leading digits, so those indices are just the body index.
        for (size_t b = 0; b < body_dim; b++) {
            if (good_body[b] > 0) {
                v[b] = Amp(gauss(rng), gauss(rng));
                norm2 += std::norm(v[b]);
            }
        }
        for (auto &a : v) {
            a /= std::sqrt(norm2);
        }
        double pass = 1;
        for (int c = 1; c <= m; c++) {
            std::vector<int> subset((c + 1) * kappa);
            std::iota(subset.begin(), subset.end(), 0);
            double kept = apply_sym_projector(v, d, total, subset);
            if (kept <= 0) {
                pass = 0;
                break;
            }
            pass = kept;
        }
        excess = std::max(excess, pass - lam);
    }
    r.residuals.emplace_back("restricted_excess", std::max(0.0, excess));

    RealSparse goodt_comm = RealSparse((*sym) * good_t) - RealSparse(good_t * (*sym));
    r.residuals.emplace_back("sym_goodtilde_commutator", max_entry(goodt_comm));
    return r;
}

const std::vector<std::string> &asserted_lemma_residuals() {
    static const std::vector<std::string> names = {
        "lambda_max",           "good_sym_commutator",  "bad_sym_good",     "counter_sym_commutator",
        "good_count_violation", "bad_count_shortfall", "restricted_excess",
    };
    return names;
}

}  // namespace qcoins
