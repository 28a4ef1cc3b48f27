#ifndef QCOINS_TOOLS_EXPERIMENTS_H
#define QCOINS_TOOLS_EXPERIMENTS_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoins/symspace.h"

namespace qcoins {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Inclusive integer range.
struct GridRange {
    int lo = 0;
    int hi = 0;
};

struct ExperimentConfig {
    int d = 2;
    /// Coin size used by the security tables.
    int kappa = 2;
    GridRange n{0, 1};
    GridRange m{1, 2};
    GridRange kappa_range{1, 2};
    GridRange k{2, 2};
    /// Public sabotage chunkings; each applies to the m it sums to (m + 1).
    std::vector<std::vector<int>> chunks;
    int trials = 1000;
    uint64_t seed = 1;
    double z = 3.0;
    int workers = 0;
    std::string out;
    OutputFormat format = OutputFormat::Csv;
    size_t dense_limit = kDefaultDenseLimit;

    void validate() const;

    /// Throws ConfigError on malformed input.
    static ExperimentConfig from_json_text(const std::string &text);
    static ExperimentConfig load(const std::string &path);
};

OutputFormat parse_format(const std::string &s);

namespace verdict {
inline const std::string kPass = "pass";
inline const std::string kFail = "fail";
inline const std::string kNotAsserted = "not asserted";
}  // namespace verdict

struct Record {
    std::string claim_id;
    std::string paper_anchor;
    std::string exact_value;
    std::string empirical_value;
    std::string ci;
    std::string verdict;
};

std::vector<Record> cmd_attack_table(const ExperimentConfig &cfg);
std::vector<Record> cmd_security_tables(const ExperimentConfig &cfg);
std::vector<Record> cmd_lemma_suite(const ExperimentConfig &cfg);

/// Sorted by claim id.
void sort_records(std::vector<Record> &records);
std::string to_csv(const std::vector<Record> &records);
std::string to_json(const std::vector<Record> &records);
std::string csv_field(const std::string &s);

bool any_failed(const std::vector<Record> &records);

/// Runs a named command, writes the output file (or stdout when cfg.out is empty) and returns the exit code:
/// 0 when every asserted claim passed, 1 on a failed assertion, 2 on a config or dimension error.
int run_command(const std::string &command, const ExperimentConfig &cfg, std::string *error = nullptr);

const std::vector<std::string> &command_names();

}  // namespace qcoins

#endif
