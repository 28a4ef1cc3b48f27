#include "qcoins/joint_state.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcoins {

JointState::JointState(int d, size_t dense_limit) : d_(d), limit_(dense_limit) {
    if (d < 2) {
        throw std::invalid_argument("local dimension must be at least 2");
    }
}

bool JointState::contains(RegisterId id) const {
    return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

int JointState::position(RegisterId id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) {
        throw std::invalid_argument("unknown register " + std::to_string(id));
    }
    return (int)(it - ids_.begin());
}

size_t JointState::stride(int pos) const {
    size_t s = 1;
    for (int r = (int)ids_.size() - 1; r > pos; r--) {
        s *= d_;
    }
    return s;
}

std::vector<RegisterId> JointState::append(const QuantumState &s) {
    if (s.local_dim() != d_) {
        throw std::invalid_argument("local dimension mismatch");
    }
    checked_pow(d_, register_count() + s.registers(), limit_);
    auto dense = s.to_dense(limit_);
    const auto &b = dense.amplitudes();
    AmpVector out(amps_.size() * b.size());
    for (size_t i = 0; i < amps_.size(); i++) {
        if (amps_[i] == Amp(0)) {
            continue;
        }
        for (size_t k = 0; k < b.size(); k++) {
            out[i * b.size() + k] = amps_[i] * b[k];
        }
    }
    amps_ = std::move(out);
    std::vector<RegisterId> fresh;
    for (int r = 0; r < s.registers(); r++) {
        ids_.push_back(next_id_);
        fresh.push_back(next_id_++);
    }
    return fresh;
}

namespace {

double norm2(const AmpVector &v) {
    double t = 0;
    for (const auto &a : v) {
        t += std::norm(a);
    }
    return t;
}

}  // namespace

double JointState::sym_pass_probability(const std::vector<RegisterId> &regs) const {
    std::vector<int> pos;
    for (auto id : regs) {
        pos.push_back(position(id));
    }
    AmpVector proj = amps_;
    return std::clamp(apply_sym_projector(proj, d_, register_count(), pos), 0.0, 1.0);
}

bool JointState::measure_sym(const std::vector<RegisterId> &regs, Rng &rng) {
    std::vector<int> pos;
    for (auto id : regs) {
        pos.push_back(position(id));
    }
    AmpVector proj = amps_;
    double p = std::clamp(apply_sym_projector(proj, d_, register_count(), pos), 0.0, 1.0);
    bool pass = bernoulli(rng, p);
    if (pass) {
        double scale = 1.0 / std::sqrt(p);
        for (auto &a : proj) {
            a *= scale;
        }
        amps_ = std::move(proj);
    } else {
        double scale = 1.0 / std::sqrt(1.0 - p);
        for (size_t i = 0; i < amps_.size(); i++) {
            amps_[i] = (amps_[i] - proj[i]) * scale;
        }
    }
    return pass;
}

double JointState::rank_one_probability(RegisterId id, const AmpVector &v) const {
    if ((int)v.size() != d_) {
        throw std::invalid_argument("projector vector has the wrong dimension");
    }
    size_t st = stride(position(id));
    double p = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i / st) % d_ != 0) {
            continue;
        }
        Amp c = 0;
        for (int k = 0; k < d_; k++) {
            c += std::conj(v[k]) * amps_[i + k * st];
        }
        p += std::norm(c);
    }
    return std::clamp(p, 0.0, 1.0);
}

bool JointState::measure_rank_one(RegisterId id, const AmpVector &v, Rng &rng) {
    double p = rank_one_probability(id, v);
    bool hit = bernoulli(rng, p);
    size_t st = stride(position(id));
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i / st) % d_ != 0) {
            continue;
        }
        Amp c = 0;
        for (int k = 0; k < d_; k++) {
            c += std::conj(v[k]) * amps_[i + k * st];
        }
        for (int k = 0; k < d_; k++) {
            Amp projected = v[k] * c;
            amps_[i + k * st] = hit ? projected : amps_[i + k * st] - projected;
        }
    }
    double scale = 1.0 / std::sqrt(norm2(amps_));
    for (auto &a : amps_) {
        a *= scale;
    }
    return hit;
}

void JointState::discard(const std::vector<RegisterId> &regs, Rng &rng) {
    if (regs.empty()) {
        return;
    }
    const int n = register_count();
    std::vector<int> pos;
    std::vector<bool> drop(n, false);
    for (auto id : regs) {
        int p = position(id);
        if (drop[p]) {
            throw std::invalid_argument("register listed twice");
        }
        drop[p] = true;
        pos.push_back(p);
    }
    std::sort(pos.begin(), pos.end());
    std::vector<size_t> st(pos.size());
    for (size_t t = 0; t < pos.size(); t++) {
        st[t] = stride(pos[t]);
    }
    auto config_of = [&](size_t i) {
        size_t c = 0;
        for (size_t t = 0; t < pos.size(); t++) {
            c = c * d_ + (i / st[t]) % d_;
        }
        return c;
    };
    size_t local = checked_pow(d_, (int)pos.size(), limit_);
    std::vector<double> marginal(local, 0.0);
    for (size_t i = 0; i < amps_.size(); i++) {
        marginal[config_of(i)] += std::norm(amps_[i]);
    }
    double u = uniform01(rng) * std::accumulate(marginal.begin(), marginal.end(), 0.0);
    size_t pick = 0;
    for (; pick + 1 < local; pick++) {
        if (u < marginal[pick]) {
            break;
        }
        u -= marginal[pick];
    }
    while (marginal[pick] == 0 && pick > 0) {
        pick--;
    }
    AmpVector out;
    out.reserve(amps_.size() / local);
    for (size_t i = 0; i < amps_.size(); i++) {
        if (config_of(i) == pick) {
            out.push_back(amps_[i]);
        }
    }
    double scale = 1.0 / std::sqrt(marginal[pick]);
    for (auto &a : out) {
        a *= scale;
    }
    amps_ = std::move(out);
    std::vector<RegisterId> kept;
    for (int r = 0; r < n; r++) {
        if (!drop[r]) {
            kept.push_back(ids_[r]);
        }
    }
    ids_ = std::move(kept);
}

QuantumState JointState::state_in_order(const std::vector<RegisterId> &order) const {
    const int n = register_count();
    if ((int)order.size() != n) {
        throw std::invalid_argument("order must list every live register");
    }
    std::vector<size_t> st(n);
    for (int t = 0; t < n; t++) {
        st[t] = stride(position(order[t]));
    }
    AmpVector out(amps_.size());
    for (size_t j = 0; j < out.size(); j++) {
        auto letters = index_string(j, d_, n);
        size_t src = 0;
        for (int t = 0; t < n; t++) {
            src += letters[t] * st[t];
        }
        out[j] = amps_[src];
    }
    return QuantumState::dense(d_, n, std::move(out));
}

}  // namespace qcoins
