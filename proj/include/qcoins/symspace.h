#ifndef QCOINS_SYMSPACE_H
#define QCOINS_SYMSPACE_H

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/multiprecision/cpp_int.hpp>

namespace qcoins {

using Amp = std::complex<double>;
using AmpVector = std::vector<Amp>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Default cap on the number of amplitudes a dense state or matrix side may hold.
constexpr size_t kDefaultDenseLimit = size_t{1} << 20;

/// Tolerance used by floating point probability comparisons.
constexpr double kProbTolerance = 1e-10;

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Occupancy vector of a product string: counts[k] is how many registers hold letter k.
class TypeVector {
   public:
    TypeVector() = default;
    explicit TypeVector(std::vector<int> counts);

    int dim() const {
        return (int)counts_.size();
    }
    int total() const {
        return total_;
    }
    int operator[](int k) const {
        return counts_[k];
    }
    const std::vector<int> &counts() const {
        return counts_;
    }
    /// Returns a copy with `extra` added to letter k.
    TypeVector plus(int k, int extra) const;
    std::string str() const;

    auto operator<=>(const TypeVector &other) const = default;

   private:
    std::vector<int> counts_;
    int total_ = 0;
};

using ProductString = std::vector<int>;

TypeVector type_of(const ProductString &s, int d);

/// All type vectors of length d summing to n, in lexicographic order of counts.
std::vector<TypeVector> enumerate_types(int d, int n);

/// Dense index of a product string; register 0 is the most significant digit.
size_t string_index(const ProductString &s, int d);
ProductString index_string(size_t index, int d, int n);

size_t checked_pow(int d, int n, size_t limit);

BigInt factorial(int n);
BigInt binomial(int n, int k);
BigInt multinomial(int n, const TypeVector &j);

/// Exact non-negative rational kept in lowest terms.
class MultinomialRatio {
   public:
    MultinomialRatio() : value_(0) {
    }
    MultinomialRatio(BigInt numerator, BigInt denominator);
    explicit MultinomialRatio(BigRational value);
    static MultinomialRatio of_int(long long v) {
        return MultinomialRatio(BigInt(v), BigInt(1));
    }

    BigInt numerator() const;
    BigInt denominator() const;
    const BigRational &value() const {
        return value_;
    }
    double to_double() const;
    std::string str() const;

    MultinomialRatio operator*(const MultinomialRatio &o) const {
        return MultinomialRatio(value_ * o.value_);
    }
    MultinomialRatio operator/(const MultinomialRatio &o) const;
    MultinomialRatio operator+(const MultinomialRatio &o) const {
        return MultinomialRatio(value_ + o.value_);
    }
    bool operator==(const MultinomialRatio &o) const {
        return value_ == o.value_;
    }
    bool operator<(const MultinomialRatio &o) const {
        return value_ < o.value_;
    }
    bool operator<=(const MultinomialRatio &o) const {
        return value_ <= o.value_;
    }
    bool operator>(const MultinomialRatio &o) const {
        return value_ > o.value_;
    }

   private:
    BigRational value_;
};

/// Register state: either a dense amplitude vector of length d^N, or an exact
/// superposition of symmetric basis states |B_j> on the last N - prefix registers,
/// preceded by `prefix_mills` registers holding |phi_0>.
class QuantumState {
   public:
    struct Dense {
        AmpVector amps;
    };
    struct SymTyped {
        std::map<TypeVector, Amp> terms;
        int prefix_mills = 0;
    };

    static QuantumState dense(int d, int registers, AmpVector amps, bool normalized = true);
    static QuantumState sym_typed(int d, std::map<TypeVector, Amp> terms, int prefix_mills = 0);
    static QuantumState product(int d, const ProductString &letters);
    static QuantumState empty(int d);

    int local_dim() const {
        return d_;
    }
    int registers() const {
        return n_;
    }
    bool normalized() const {
        return normalized_;
    }
    bool is_dense() const {
        return std::holds_alternative<Dense>(rep_);
    }
    bool is_sym_typed() const {
        return std::holds_alternative<SymTyped>(rep_);
    }
    const SymTyped &sym() const {
        return std::get<SymTyped>(rep_);
    }
    /// Dense amplitudes; requires the dense representation.
    const AmpVector &amplitudes() const {
        return std::get<Dense>(rep_).amps;
    }

    QuantumState to_dense(size_t limit = kDefaultDenseLimit) const;
    double norm() const;
    /// |this> tensor |other>, this on the leading registers.
    QuantumState tensor(const QuantumState &other, size_t limit = kDefaultDenseLimit) const;
    /// <this|other>.
    Amp inner(const QuantumState &other, size_t limit = kDefaultDenseLimit) const;

   private:
    QuantumState(int d, int n, std::variant<Dense, SymTyped> rep, bool normalized)
        : d_(d), n_(n), rep_(std::move(rep)), normalized_(normalized) {
    }
    int d_ = 2;
    int n_ = 0;
    std::variant<Dense, SymTyped> rep_;
    bool normalized_ = true;
};

/// The SymTyped singleton |B_j>.
QuantumState sym_basis_state(const TypeVector &j);

enum class Branch { Pass, Fail };

struct ProjectionResult {
    double probability = 0;
    /// Set when the probability is available as an exact rational.
    std::optional<MultinomialRatio> exact;
    /// Normalized post-measurement state of the requested branch; empty when that branch has probability 0.
    std::optional<QuantumState> post;
};

/// Measures {Pi_Sym, I - Pi_Sym} on the last `subset_size` registers and returns the requested branch.
ProjectionResult project_sym(const QuantumState &state, int subset_size, Branch branch = Branch::Pass,
                             size_t dense_limit = kDefaultDenseLimit);

/// Applies Pi_Sym over `subset` (register positions) to a dense vector in place and returns the squared norm of
/// the result.
double apply_sym_projector(AmpVector &amps, int d, int n, const std::vector<int> &subset);

using DenseMatrix = Eigen::MatrixXcd;
using RealSparse = Eigen::SparseMatrix<double>;

DenseMatrix sym_projector_dense(int n, int d, size_t dense_limit = kDefaultDenseLimit);
/// Same operator as sym_projector_dense, stored sparsely (entries only within type classes).
RealSparse sym_projector_sparse(int n, int d, size_t dense_limit = kDefaultDenseLimit);

/// Maps register r to position perm[r].
DenseMatrix permutation_operator(const std::vector<int> &perm, int d, size_t dense_limit = kDefaultDenseLimit);

/// Average of permutation_operator over all n! permutations.
DenseMatrix permutation_average(int n, int d, size_t dense_limit = kDefaultDenseLimit);

}  // namespace qcoins

#endif
