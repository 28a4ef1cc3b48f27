#include "qcoins/pkqc.h"

namespace qcoins {

void SchemeParams::validate() const {
    if (d < 2) {
        throw std::invalid_argument("d must be at least 2");
    }
    if (kappa < 1) {
        throw std::invalid_argument("kappa must be at least 1");
    }
    if (dense_limit < 2) {
        throw std::invalid_argument("dense limit too small");
    }
    if (!(tolerance > 0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
}

PkScheme PkScheme::keygen(const SchemeParams &params) {
    params.validate();
    PkScheme s;
    s.params_ = params;
    s.priv_ = qcoins::keygen(params.d, params.mill_mode, params.seed);
    return s;
}

QuantumState mint_public(const PkScheme &scheme) {
    return mint_private(scheme.private_scheme(), scheme.kappa());
}

Wallet wallet_init(const PkScheme &scheme, JointState &lab) {
    Wallet w;
    w.registers = lab.append(mint_public(scheme));
    return w;
}

bool wallet_verify(const PkScheme &scheme, JointState &lab, Wallet &wallet, const std::vector<RegisterId> &coin,
                   Rng &rng) {
    if ((int)coin.size() != scheme.kappa()) {
        throw std::invalid_argument("coin must have exactly kappa registers");
    }
    wallet.registers.insert(wallet.registers.end(), coin.begin(), coin.end());
    wallet.m++;
    bool pass = lab.measure_sym(wallet.registers, rng);
    if (pass) {
        wallet.accepted++;
    } else {
        wallet.quarantined = true;
    }
    return pass;
}

bool wallet_verify(const PkScheme &scheme, JointState &lab, Wallet &wallet, const QuantumState &coin, Rng &rng) {
    if (coin.registers() != scheme.kappa()) {
        throw std::invalid_argument("coin must have exactly kappa registers");
    }
    return wallet_verify(scheme, lab, wallet, lab.append(coin), rng);
}

bool wallet_verify_transaction(const PkScheme &scheme, JointState &lab, Wallet &wallet,
                               const std::vector<std::vector<RegisterId>> &coins, Rng &rng) {
    for (const auto &c : coins) {
        if ((int)c.size() != scheme.kappa()) {
            throw std::invalid_argument("coin must have exactly kappa registers");
        }
        wallet.registers.insert(wallet.registers.end(), c.begin(), c.end());
        wallet.m++;
    }
    bool pass = lab.measure_sym(wallet.registers, rng);
    if (pass) {
        wallet.accepted += (int)coins.size();
    } else {
        wallet.quarantined = true;
    }
    return pass;
}

std::vector<std::vector<RegisterId>> split_coins(const std::vector<RegisterId> &regs, int kappa) {
    if (kappa < 1 || regs.size() % kappa != 0) {
        throw std::invalid_argument("register count is not a multiple of kappa");
    }
    std::vector<std::vector<RegisterId>> out;
    for (size_t i = 0; i < regs.size(); i += kappa) {
        out.emplace_back(regs.begin() + i, regs.begin() + i + kappa);
    }
    return out;
}

PublicCount count_public(const PkScheme &scheme, JointState &lab, const std::vector<std::vector<RegisterId>> &coins,
                         Rng &rng, VerifyMode mode) {
    PublicCount out;
    out.wallet = wallet_init(scheme, lab);
    if (mode == VerifyMode::SingleShot) {
        out.counter = wallet_verify_transaction(scheme, lab, out.wallet, coins, rng) ? (int)coins.size() : 0;
        return out;
    }
    for (const auto &c : coins) {
        if (wallet_verify(scheme, lab, out.wallet, c, rng)) {
            out.counter++;
        }
    }
    return out;
}

PublicCountOutcome count_public(const PkScheme &scheme, const QuantumState &coins, Rng &rng, VerifyMode mode) {
    if (coins.registers() == 0 || coins.registers() % scheme.kappa() != 0) {
        throw std::invalid_argument("submission must hold a positive multiple of kappa registers");
    }
    JointState lab(scheme.d(), scheme.params().dense_limit);
    auto regs = lab.append(coins);
    auto coin_list = split_coins(regs, scheme.kappa());
    auto pc = count_public(scheme, lab, coin_list, rng, mode);
    PublicCountOutcome out;
    out.counter = pc.counter;
    out.transcript.submitted_counts.push_back((int)coin_list.size());
    out.transcript.public_accepted = pc.counter;
    out.transcript.public_queries = 1;
    out.transcript.fail = pc.counter != (int)coin_list.size();
    out.transcript.schedule.push_back("count_pk");
    VerifierRecord rec;
    rec.submitted = (int)coin_list.size();
    rec.counter = pc.counter;
    rec.all_accepted = !out.transcript.fail;
    out.transcript.verifiers.push_back(rec);
    return out;
}

BankOutcome verify_bank(const PkScheme &scheme, JointState &lab, const std::vector<RegisterId> &coin, Rng &rng) {
    if ((int)coin.size() != scheme.kappa()) {
        throw std::invalid_argument("coin must have exactly kappa registers");
    }
    int k = priv_count(scheme.private_scheme(), lab, coin, rng);
    lab.discard(coin, rng);
    BankOutcome out;
    out.accept = bernoulli(rng, (double)k / scheme.kappa());
    if (out.accept) {
        out.replacement = lab.append(mint_public(scheme));
    }
    return out;
}

StandaloneBankOutcome verify_bank(const PkScheme &scheme, const QuantumState &coin, Rng &rng) {
    JointState lab(scheme.d(), scheme.params().dense_limit);
    auto regs = lab.append(coin);
    auto r = verify_bank(scheme, lab, regs, rng);
    StandaloneBankOutcome out;
    out.accept = r.accept;
    if (r.accept) {
        out.replacement = mint_public(scheme);
    }
    return out;
}

int count_bank(const PkScheme &scheme, JointState &lab, const std::vector<std::vector<RegisterId>> &coins, Rng &rng) {
    int total = 0;
    for (const auto &c : coins) {
        auto r = verify_bank(scheme, lab, c, rng);
        if (r.accept) {
            total++;
            // The fresh replacement belongs to the submitter; it plays no further part here.
            lab.discard(*r.replacement, rng);
        }
    }
    return total;
}

int count_bank(const PkScheme &scheme, const QuantumState &coins, Rng &rng) {
    if (coins.registers() == 0) {
        return 0;
    }
    JointState lab(scheme.d(), scheme.params().dense_limit);
    auto regs = lab.append(coins);
    return count_bank(scheme, lab, split_coins(regs, scheme.kappa()), rng);
}

int refund_wallet(const PkScheme &scheme, JointState &lab, const Wallet &wallet, Rng &rng) {
    return count_bank(scheme, lab, split_coins(wallet.registers, scheme.kappa()), rng);
}

}  // namespace qcoins
