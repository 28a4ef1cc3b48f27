#include "qcoins/symspace.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace qcoins {

TypeVector::TypeVector(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) {
        throw std::invalid_argument("TypeVector needs at least one letter");
    }
    for (int c : counts_) {
        if (c < 0) {
            throw std::invalid_argument("TypeVector entries must be non-negative");
        }
        total_ += c;
    }
}

TypeVector TypeVector::plus(int k, int extra) const {
    auto c = counts_;
    c.at(k) += extra;
    return TypeVector(std::move(c));
}

std::string TypeVector::str() const {
    std::ostringstream out;
    out << "(";
    for (size_t k = 0; k < counts_.size(); k++) {
        if (k) {
            out << ",";
        }
        out << counts_[k];
    }
    out << ")";
    return out.str();
}

TypeVector type_of(const ProductString &s, int d) {
    std::vector<int> counts(d, 0);
    for (int letter : s) {
        if (letter < 0 || letter >= d) {
            throw std::invalid_argument("letter out of range");
        }
        counts[letter]++;
    }
    return TypeVector(std::move(counts));
}

std::vector<TypeVector> enumerate_types(int d, int n) {
    std::vector<TypeVector> out;
    std::vector<int> cur(d, 0);
    // Recursive fill from the first letter, smallest counts first.
    auto rec = [&](auto &&self, int k, int left) -> void {
        if (k == d - 1) {
            cur[k] = left;
            out.emplace_back(cur);
            return;
        }
        for (int c = 0; c <= left; c++) {
            cur[k] = c;
            self(self, k + 1, left - c);
        }
    };
    rec(rec, 0, n);
    return out;
}

size_t checked_pow(int d, int n, size_t limit) {
    size_t r = 1;
    for (int i = 0; i < n; i++) {
        if (r > limit / (size_t)d) {
            throw DimensionError("dimension " + std::to_string(d) + "^" + std::to_string(n) +
                                 " exceeds the dense limit " + std::to_string(limit));
        }
        r *= (size_t)d;
    }
    if (r > limit) {
        throw DimensionError("dimension exceeds the dense limit");
    }
    return r;
}

size_t string_index(const ProductString &s, int d) {
    size_t idx = 0;
    for (int letter : s) {
        idx = idx * d + letter;
    }
    return idx;
}

ProductString index_string(size_t index, int d, int n) {
    ProductString s(n);
    for (int r = n - 1; r >= 0; r--) {
        s[r] = (int)(index % d);
        index /= d;
    }
    return s;
}

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; i++) {
        r *= i;
    }
    return r;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

BigInt multinomial(int n, const TypeVector &j) {
    if (j.total() != n) {
        throw std::invalid_argument("type vector " + j.str() + " does not sum to " + std::to_string(n));
    }
    BigInt r = factorial(n);
    for (int c : j.counts()) {
        r /= factorial(c);
    }
    return r;
}

MultinomialRatio::MultinomialRatio(BigInt numerator, BigInt denominator) {
    if (denominator <= 0 || numerator < 0) {
        throw std::invalid_argument("MultinomialRatio needs numerator >= 0 and denominator > 0");
    }
    value_ = BigRational(numerator, denominator);
}

MultinomialRatio::MultinomialRatio(BigRational value) : value_(std::move(value)) {
    if (value_ < 0) {
        throw std::invalid_argument("MultinomialRatio must be non-negative");
    }
}

BigInt MultinomialRatio::numerator() const {
    return boost::multiprecision::numerator(value_);
}

BigInt MultinomialRatio::denominator() const {
    return boost::multiprecision::denominator(value_);
}

double MultinomialRatio::to_double() const {
    return value_.convert_to<double>();
}

std::string MultinomialRatio::str() const {
    if (denominator() == 1) {
        return numerator().str();
    }
    return numerator().str() + "/" + denominator().str();
}

MultinomialRatio MultinomialRatio::operator/(const MultinomialRatio &o) const {
    if (o.value_ == 0) {
        throw std::domain_error("division by zero ratio");
    }
    return MultinomialRatio(value_ / o.value_);
}

QuantumState QuantumState::dense(int d, int registers, AmpVector amps, bool normalized) {
    if (d < 1 || registers < 0) {
        throw std::invalid_argument("bad state shape");
    }
    size_t expect = checked_pow(d, registers, SIZE_MAX / 2);
    if (amps.size() != expect) {
        throw std::invalid_argument("amplitude vector has the wrong length");
    }
    return QuantumState(d, registers, Dense{std::move(amps)}, normalized);
}

QuantumState QuantumState::sym_typed(int d, std::map<TypeVector, Amp> terms, int prefix_mills) {
    if (terms.empty()) {
        throw std::invalid_argument("SymTyped state needs at least one term");
    }
    int n = terms.begin()->first.total();
    for (const auto &[j, a] : terms) {
        if (j.dim() != d || j.total() != n) {
            throw std::invalid_argument("inconsistent type vector " + j.str());
        }
    }
    if (prefix_mills < 0) {
        throw std::invalid_argument("negative prefix");
    }
    double nrm = 0;
    for (const auto &[j, a] : terms) {
        nrm += std::norm(a);
    }
    bool normalized = std::abs(nrm - 1) < kProbTolerance;
    return QuantumState(d, n + prefix_mills, SymTyped{std::move(terms), prefix_mills}, normalized);
}

QuantumState QuantumState::product(int d, const ProductString &letters) {
    size_t dim = checked_pow(d, (int)letters.size(), SIZE_MAX / 2);
    AmpVector amps(dim, 0.0);
    amps[string_index(letters, d)] = 1.0;
    return dense(d, (int)letters.size(), std::move(amps));
}

QuantumState QuantumState::empty(int d) {
    return dense(d, 0, AmpVector{1.0});
}

QuantumState QuantumState::to_dense(size_t limit) const {
    if (is_dense()) {
        return *this;
    }
    const auto &s = sym();
    size_t dim = checked_pow(d_, n_, limit);
    int body = n_ - s.prefix_mills;
    size_t body_dim = checked_pow(d_, body, limit);
    std::map<TypeVector, double> scale;
    for (const auto &[j, a] : s.terms) {
        scale[j] = 1.0 / std::sqrt(multinomial(body, j).convert_to<double>());
    }
    AmpVector amps(dim, 0.0);
    // Leading mills mean only the first body_dim indices are populated.
    for (size_t i = 0; i < body_dim; i++) {
        auto t = type_of(index_string(i, d_, body), d_);
        auto it = s.terms.find(t);
        if (it != s.terms.end()) {
            amps[i] = it->second * scale[t];
        }
    }
    return QuantumState(d_, n_, Dense{std::move(amps)}, normalized_);
}

double QuantumState::norm() const {
    double t = 0;
    if (is_dense()) {
        for (const auto &a : amplitudes()) {
            t += std::norm(a);
        }
    } else {
        for (const auto &[j, a] : sym().terms) {
            t += std::norm(a);
        }
    }
    return std::sqrt(t);
}

namespace {

bool is_all_mill(const QuantumState &s) {
    if (!s.is_dense()) {
        return s.sym().terms.size() == 1 && s.sym().terms.begin()->first[0] == s.sym().terms.begin()->first.total() &&
               std::abs(s.sym().terms.begin()->second - Amp(1)) == 0;
    }
    const auto &a = s.amplitudes();
    if (a[0] != Amp(1)) {
        return false;
    }
    return std::all_of(a.begin() + 1, a.end(), [](const Amp &x) { return x == Amp(0); });
}

}  // namespace

QuantumState QuantumState::tensor(const QuantumState &other, size_t limit) const {
    if (other.d_ != d_) {
        throw std::invalid_argument("local dimension mismatch");
    }
    if (n_ == 0) {
        return other;
    }
    if (other.n_ == 0) {
        return *this;
    }
    if (other.is_sym_typed() && is_all_mill(*this)) {
        auto s = other.sym();
        return sym_typed(d_, s.terms, s.prefix_mills + n_);
    }
    auto a = to_dense(limit);
    auto b = other.to_dense(limit);
    size_t dim = checked_pow(d_, n_ + other.n_, limit);
    AmpVector out(dim);
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    for (size_t i = 0; i < x.size(); i++) {
        for (size_t k = 0; k < y.size(); k++) {
            out[i * y.size() + k] = x[i] * y[k];
        }
    }
    return QuantumState(d_, n_ + other.n_, Dense{std::move(out)}, normalized_ && other.normalized_);
}

Amp QuantumState::inner(const QuantumState &other, size_t limit) const {
    if (other.d_ != d_ || other.n_ != n_) {
        throw std::invalid_argument("shape mismatch in inner product");
    }
    if (is_sym_typed() && other.is_sym_typed() && sym().prefix_mills == other.sym().prefix_mills) {
        Amp t = 0;
        for (const auto &[j, a] : sym().terms) {
            auto it = other.sym().terms.find(j);
            if (it != other.sym().terms.end()) {
                t += std::conj(a) * it->second;
            }
        }
        return t;
    }
    auto a = to_dense(limit);
    auto b = other.to_dense(limit);
    Amp t = 0;
    for (size_t i = 0; i < a.amplitudes().size(); i++) {
        t += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return t;
}

QuantumState sym_basis_state(const TypeVector &j) {
    return QuantumState::sym_typed(j.dim(), {{j, Amp(1)}});
}

double apply_sym_projector(AmpVector &amps, int d, int n, const std::vector<int> &subset) {
    const int k = (int)subset.size();
    std::vector<size_t> stride(n);
    size_t s = 1;
    for (int r = n - 1; r >= 0; r--) {
        stride[r] = s;
        s *= d;
    }
    if (amps.size() != s) {
        throw std::invalid_argument("amplitude vector does not match register count");
    }
    std::vector<bool> in_subset(n, false);
    for (int r : subset) {
        if (r < 0 || r >= n || in_subset[r]) {
            throw std::invalid_argument("bad register subset");
        }
        in_subset[r] = true;
    }
    if (k <= 1) {
        double t = 0;
        for (const auto &a : amps) {
            t += std::norm(a);
        }
        return t;
    }

    // Offsets of every local configuration of the subset, grouped by type. Cached per thread since the
    // sequential verifiers hit the same few layouts on every trial.
    thread_local std::map<std::tuple<int, int, std::vector<int>>, std::vector<std::vector<size_t>>> cache;
    auto key = std::make_tuple(d, n, subset);
    auto hit = cache.find(key);
    if (hit == cache.end()) {
        size_t local = 1;
        for (int t = 0; t < k; t++) {
            local *= d;
        }
        std::map<TypeVector, std::vector<size_t>> classes;
        for (size_t c = 0; c < local; c++) {
            auto letters = index_string(c, d, k);
            size_t off = 0;
            for (int t = 0; t < k; t++) {
                off += letters[t] * stride[subset[t]];
            }
            classes[type_of(letters, d)].push_back(off);
        }
        std::vector<std::vector<size_t>> fresh;
        for (auto &[t, offs] : classes) {
            if (offs.size() > 1) {
                fresh.push_back(std::move(offs));
            }
        }
        if (cache.size() > 256) {
            cache.clear();
        }
        hit = cache.emplace(std::move(key), std::move(fresh)).first;
    }
    const auto &groups = hit->second;

    std::vector<int> others;
    for (int r = 0; r < n; r++) {
        if (!in_subset[r]) {
            others.push_back(r);
        }
    }
    std::vector<int> digit(others.size(), 0);
    size_t base = 0;
    while (true) {
        for (const auto &g : groups) {
            Amp mean = 0;
            for (size_t off : g) {
                mean += amps[base + off];
            }
            mean /= (double)g.size();
            for (size_t off : g) {
                amps[base + off] = mean;
            }
        }
        // Mixed-radix increment over the registers outside the subset.
        int p = (int)others.size() - 1;
        while (p >= 0) {
            digit[p]++;
            base += stride[others[p]];
            if (digit[p] < d) {
                break;
            }
            base -= (size_t)d * stride[others[p]];
            digit[p] = 0;
            p--;
        }
        if (p < 0) {
            break;
        }
    }
    double t = 0;
    for (const auto &a : amps) {
        t += std::norm(a);
    }
    return t;
}

namespace {

std::optional<QuantumState> normalized_or_empty(int d, int n, AmpVector amps, double prob, double input_norm2) {
    if (prob <= 1e-14) {
        return std::nullopt;
    }
    double scale = 1.0 / std::sqrt(prob * input_norm2);
    for (auto &a : amps) {
        a *= scale;
    }
    return QuantumState::dense(d, n, std::move(amps));
}

ProjectionResult project_dense(const QuantumState &state, int subset_size, Branch branch, size_t limit) {
    auto dense = state.to_dense(limit);
    const int n = dense.registers();
    const int d = dense.local_dim();
    AmpVector proj = dense.amplitudes();
    std::vector<int> subset(subset_size);
    std::iota(subset.begin(), subset.end(), n - subset_size);
    double kept = apply_sym_projector(proj, d, n, subset);
    double norm2 = dense.norm() * dense.norm();
    ProjectionResult r;
    double pass = std::clamp(kept / norm2, 0.0, 1.0);
    if (branch == Branch::Pass) {
        r.probability = pass;
        r.post = normalized_or_empty(d, n, std::move(proj), pass, norm2);
    } else {
        AmpVector rest = dense.amplitudes();
        for (size_t i = 0; i < rest.size(); i++) {
            rest[i] -= proj[i];
        }
        r.probability = std::clamp(1.0 - pass, 0.0, 1.0);
        r.post = normalized_or_empty(d, n, std::move(rest), r.probability, norm2);
    }
    return r;
}

}  // namespace

ProjectionResult project_sym(const QuantumState &state, int subset_size, Branch branch, size_t dense_limit) {
    const int n = state.registers();
    if (subset_size < 0 || subset_size > n) {
        throw std::invalid_argument("subset size " + std::to_string(subset_size) + " exceeds " + std::to_string(n) +
                                    " registers");
    }
    if (!state.is_sym_typed()) {
        return project_dense(state, subset_size, branch, dense_limit);
    }
    const auto &s = state.sym();
    const int body = n - s.prefix_mills;
    ProjectionResult r;
    if (subset_size <= body || subset_size <= 1) {
        // The projected registers already lie in a symmetric block.
        r.probability = branch == Branch::Pass ? 1.0 : 0.0;
        r.exact = MultinomialRatio::of_int(branch == Branch::Pass ? 1 : 0);
        if (branch == Branch::Pass) {
            r.post = state;
        }
        return r;
    }
    if (subset_size < n) {
        return project_dense(state, subset_size, branch, dense_limit);
    }

    // Full projection: <B~_j|Pi_Sym|B~_j> = M(body, j) / M(n, j + prefix e_0), and distinct j stay orthogonal.
    double norm2 = 0;
    for (const auto &[j, a] : s.terms) {
        norm2 += std::norm(a);
    }
    std::map<TypeVector, Amp> passed;
    MultinomialRatio exact_sum;
    double pass = 0;
    for (const auto &[j, a] : s.terms) {
        MultinomialRatio ratio(multinomial(body, j), multinomial(n, j.plus(0, s.prefix_mills)));
        double rd = ratio.to_double();
        pass += std::norm(a) * rd;
        passed[j.plus(0, s.prefix_mills)] = a * std::sqrt(rd);
        exact_sum = exact_sum + ratio;
    }
    pass /= norm2;
    bool single_unit = s.terms.size() == 1 && std::abs(norm2 - 1) < 1e-15;
    if (branch == Branch::Pass) {
        r.probability = pass;
        if (single_unit) {
            r.exact = exact_sum;
        }
        if (pass > 1e-14) {
            double scale = 1.0 / std::sqrt(pass * norm2);
            for (auto &[j, a] : passed) {
                a *= scale;
            }
            r.post = QuantumState::sym_typed(state.local_dim(), std::move(passed), 0);
        }
        return r;
    }
    if (single_unit) {
        r.exact = MultinomialRatio(BigRational(1) - exact_sum.value());
    }
    auto dense = project_dense(state, subset_size, branch, dense_limit);
    r.probability = dense.probability;
    r.post = std::move(dense.post);
    return r;
}

RealSparse sym_projector_sparse(int n, int d, size_t dense_limit) {
    size_t dim = checked_pow(d, n, dense_limit);
    std::map<TypeVector, std::vector<int>> classes;
    for (size_t i = 0; i < dim; i++) {
        classes[type_of(index_string(i, d, n), d)].push_back((int)i);
    }
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto &[t, members] : classes) {
        double w = 1.0 / (double)members.size();
        for (int a : members) {
            for (int b : members) {
                trips.emplace_back(a, b, w);
            }
        }
    }
    RealSparse m((Eigen::Index)dim, (Eigen::Index)dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

DenseMatrix sym_projector_dense(int n, int d, size_t dense_limit) {
    size_t dim = checked_pow(d, n, dense_limit);
    // The matrix itself has dim^2 entries.
    if (dim > 0 && dim > dense_limit / dim) {
        throw DimensionError("dense projector of side " + std::to_string(dim) + " exceeds the dense limit");
    }
    return DenseMatrix(sym_projector_sparse(n, d, dense_limit).cast<Amp>());
}

DenseMatrix permutation_operator(const std::vector<int> &perm, int d, size_t dense_limit) {
    const int n = (int)perm.size();
    std::vector<int> check(perm);
    std::sort(check.begin(), check.end());
    for (int r = 0; r < n; r++) {
        if (check[r] != r) {
            throw std::invalid_argument("not a permutation");
        }
    }
    size_t dim = checked_pow(d, n, dense_limit);
    DenseMatrix m = DenseMatrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    for (size_t i = 0; i < dim; i++) {
        auto s = index_string(i, d, n);
        ProductString t(n);
        for (int r = 0; r < n; r++) {
            t[perm[r]] = s[r];
        }
        m((Eigen::Index)string_index(t, d), (Eigen::Index)i) = 1.0;
    }
    return m;
}

DenseMatrix permutation_average(int n, int d, size_t dense_limit) {
    size_t dim = checked_pow(d, n, dense_limit);
    DenseMatrix acc = DenseMatrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    size_t count = 0;
    do {
        acc += permutation_operator(perm, d, dense_limit);
        count++;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc / (double)count;
}

}  // namespace qcoins
