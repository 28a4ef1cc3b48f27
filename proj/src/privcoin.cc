#include "qcoins/privcoin.h"

#include <cmath>

namespace qcoins {

namespace {

// Gram-Schmidt completion of {mill} to an orthonormal basis, mill first.
Eigen::MatrixXcd complete_basis(const AmpVector &mill) {
    const int d = (int)mill.size();
    Eigen::MatrixXcd u(d, d);
    int filled = 0;
    auto add = [&](Eigen::VectorXcd v) {
        for (int c = 0; c < filled; c++) {
            v -= u.col(c) * u.col(c).dot(v);
        }
        double nv = v.norm();
        if (nv > 1e-8 && filled < d) {
            u.col(filled++) = v / nv;
        }
    };
    Eigen::VectorXcd m(d);
    for (int k = 0; k < d; k++) {
        m[k] = mill[k];
    }
    add(m);
    for (int k = 0; k < d && filled < d; k++) {
        add(Eigen::VectorXcd::Unit(d, k));
    }
    return u;
}

}  // namespace

PrivateScheme keygen(int d, MillMode mode, uint64_t seed) {
    if (d < 2) {
        throw std::invalid_argument("private scheme needs local dimension >= 2");
    }
    PrivateScheme s;
    s.mode_ = mode;
    s.mill_.assign(d, 0.0);
    if (mode == MillMode::CanonicalBasis) {
        s.mill_[0] = 1.0;
        s.frame_ = Eigen::MatrixXcd::Identity(d, d);
        return s;
    }
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double t = 0;
    for (int k = 0; k < d; k++) {
        s.mill_[k] = Amp(g(rng), g(rng));
        t += std::norm(s.mill_[k]);
    }
    for (auto &a : s.mill_) {
        a /= std::sqrt(t);
    }
    s.frame_ = complete_basis(s.mill_);
    return s;
}

QuantumState PrivateScheme::to_lab_frame(const QuantumState &s, size_t limit) const {
    if (mode_ == MillMode::CanonicalBasis || s.registers() == 0) {
        return s;
    }
    const int d = local_dim();
    const int n = s.registers();
    AmpVector amps = s.to_dense(limit).amplitudes();
    // Apply the frame unitary register by register.
    size_t st = amps.size();
    for (int r = 0; r < n; r++) {
        st /= d;
        std::vector<Amp> local(d);
        for (size_t i = 0; i < amps.size(); i++) {
            if ((i / st) % d != 0) {
                continue;
            }
            for (int k = 0; k < d; k++) {
                local[k] = amps[i + k * st];
            }
            for (int k = 0; k < d; k++) {
                Amp acc = 0;
                for (int c = 0; c < d; c++) {
                    acc += frame_(k, c) * local[c];
                }
                amps[i + k * st] = acc;
            }
        }
    }
    return QuantumState::dense(d, n, std::move(amps), s.normalized());
}

QuantumState mint_private(const PrivateScheme &scheme, int count) {
    if (count < 1) {
        throw std::invalid_argument("mint_private needs count >= 1");
    }
    const int d = scheme.local_dim();
    if (scheme.mode() == MillMode::CanonicalBasis) {
        return QuantumState::product(d, ProductString(count, 0));
    }
    QuantumState out = QuantumState::empty(d);
    auto one = QuantumState::dense(d, 1, scheme.mill());
    for (int c = 0; c < count; c++) {
        out = out.tensor(one);
    }
    return out;
}

VerifyOutcome verify_private(const PrivateScheme &scheme, const QuantumState &state, int register_index, Rng &rng) {
    if (register_index < 0 || register_index >= state.registers()) {
        throw std::invalid_argument("register index out of range");
    }
    JointState lab(scheme.local_dim());
    auto ids = lab.append(state);
    VerifyOutcome out;
    out.accept = lab.measure_rank_one(ids[register_index], scheme.mill(), rng);
    out.post = lab.state_in_order(ids);
    return out;
}

int priv_count(const PrivateScheme &scheme, JointState &lab, const std::vector<RegisterId> &regs, Rng &rng) {
    int k = 0;
    for (auto id : regs) {
        k += lab.measure_rank_one(id, scheme.mill(), rng) ? 1 : 0;
    }
    return k;
}

PrivCountOutcome priv_count(const PrivateScheme &scheme, const QuantumState &state, Rng &rng) {
    JointState lab(scheme.local_dim());
    auto ids = lab.append(state);
    PrivCountOutcome out;
    out.k = priv_count(scheme, lab, ids, rng);
    out.post = lab.state_in_order(ids);
    return out;
}

double count_expectation(const PrivateScheme &scheme, const JointState &lab, const std::vector<RegisterId> &regs) {
    double t = 0;
    for (auto id : regs) {
        t += lab.rank_one_probability(id, scheme.mill());
    }
    return t;
}

double count_expectation(const PrivateScheme &scheme, const QuantumState &state) {
    if (state.is_sym_typed() && scheme.mode() == MillMode::CanonicalBasis) {
        // Each |B_j> is a Counter eigenvector with eigenvalue j_0 (plus the mill prefix).
        double t = 0, nrm = 0;
        for (const auto &[j, a] : state.sym().terms) {
            t += std::norm(a) * (j[0] + state.sym().prefix_mills);
            nrm += std::norm(a);
        }
        return t / nrm;
    }
    JointState lab(scheme.local_dim());
    auto ids = lab.append(state);
    return count_expectation(scheme, lab, ids);
}

DenseMatrix counter_operator_dense(const PrivateScheme &scheme, int n, size_t dense_limit) {
    const int d = scheme.local_dim();
    size_t dim = checked_pow(d, n, dense_limit);
    Eigen::MatrixXcd p(d, d);
    for (int a = 0; a < d; a++) {
        for (int b = 0; b < d; b++) {
            p(a, b) = scheme.mill()[a] * std::conj(scheme.mill()[b]);
        }
    }
    DenseMatrix out = DenseMatrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    for (int r = 0; r < n; r++) {
        // I_{d^r} x P x I_{d^(n-r-1)} built by Kronecker-style index arithmetic.
        size_t after = checked_pow(d, n - r - 1, dense_limit);
        for (size_t i = 0; i < dim; i++) {
            int li = (int)((i / after) % d);
            size_t base = i - li * after;
            for (int lj = 0; lj < d; lj++) {
                out((Eigen::Index)i, (Eigen::Index)(base + lj * after)) += p(li, lj);
            }
        }
    }
    return out;
}

}  // namespace qcoins
