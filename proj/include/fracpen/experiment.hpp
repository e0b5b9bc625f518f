#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fracpen/gmres.hpp"

namespace fracpen {

enum class Mode { solve, spectrum, penalty_scan, convergence_table };
enum class OutputFormat { csv, json };

/// How the number of time steps follows from n: m = n, m = 10 n, or a fixed m.
struct MRule {
    enum class Kind { eq_n, ten_n, explicit_m } kind = Kind::eq_n;
    std::size_t value = 0;

    [[nodiscard]] std::size_t steps_for(std::size_t n) const;
    [[nodiscard]] std::string to_string() const;
    /// Accepts "eq-n", "10n" or "explicit:<int>".
    [[nodiscard]] static MRule parse(const std::string& text);
};

struct ExperimentConfig {
    Mode mode = Mode::solve;
    double alpha1 = 1.4;
    double alpha2 = 1.7;
    double kx = 1.0;
    double ky = 1.0;
    double a = 2.0;
    double b = 1.0;
    std::vector<std::size_t> n_values;
    MRule m_rule;
    double T = 1.0;
    std::vector<double> etas{1e-5};
    SolverConfig solver;
    std::string out_path;
    OutputFormat format = OutputFormat::csv;
    std::string dump_dense_path;
    std::size_t dense_cap = 4096;

    /// Throws UsageError for empty sweeps, non-positive n, bad orders and so on.
    void validate() const;
};

/// Malformed configuration; maps to exit code 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

[[nodiscard]] Mode parse_mode(const std::string& text);
[[nodiscard]] std::string to_string(Mode mode);

/// Applies one `key = value` setting. Keys are the long flag names without
/// dashes ("alpha1", "n", "m-rule", "no-precond", ...). List keys ("n", "eta")
/// accept comma-separated values and append.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a key-value file: one `key = value` per line, '#' starts a comment.
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

using Cell = std::variant<std::string, long long, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// CSV with a header line; doubles written with 17 significant digits.
void write_csv(std::ostream& os, const Table& table);
/// Array of row objects keyed by column name.
void write_json(std::ostream& os, const Table& table);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitSizeCap = 3;

struct ExperimentOutcome {
    int exit_code = kExitOk;
    Table table;
    std::string message;
};

/// Runs the configured sweep and writes cfg.out_path (and cfg.dump_dense_path)
/// when set. Never throws for configuration or solver problems: they are
/// reported through exit_code and message. Usage and size-cap errors write no files.
[[nodiscard]] ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace fracpen
