#include "fracpen/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "fracpen/errors.hpp"
#include "fracpen/example1.hpp"
#include "fracpen/spectral.hpp"
#include "fracpen/time_stepper.hpp"

namespace fracpen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) {
            throw UsageError("");
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad numeric value for '" + key + "': '" + text + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw UsageError("bad integer value for '" + key + "': '" + text + "'");
    }
    if (v <= 0) {
        throw UsageError("'" + key + "' must be positive, got " + t);
    }
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw UsageError("bad boolean value for '" + key + "': '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            parts.push_back(trim(item));
        }
    }
    return parts;
}

std::string side_name(PreconditionSide s)
{
    return s == PreconditionSide::left ? "left" : "right";
}

std::string reference_name(ResidualReference r)
{
    return r == ResidualReference::rhs ? "rhs" : "r0";
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every row starts with the full parameter tuple so tables are self-describing.
std::vector<std::string> common_columns()
{
    return {"mode", "alpha1", "alpha2", "kx", "ky", "a", "b", "T", "m_rule", "n", "m",
            "eta", "restart", "rtol", "side", "residual_ref"};
}

std::vector<Cell> common_cells(const ExperimentConfig& cfg, std::size_t n, double eta)
{
    return {to_string(cfg.mode),
            cfg.alpha1,
            cfg.alpha2,
            cfg.kx,
            cfg.ky,
            cfg.a,
            cfg.b,
            cfg.T,
            cfg.m_rule.to_string(),
            static_cast<long long>(n),
            static_cast<long long>(cfg.m_rule.steps_for(n)),
            eta,
            static_cast<long long>(cfg.solver.restart),
            cfg.solver.rtol,
            side_name(cfg.solver.side),
            reference_name(cfg.solver.reference)};
}

std::vector<std::string> with_common(std::initializer_list<const char*> extra)
{
    auto cols = common_columns();
    cols.insert(cols.end(), extra.begin(), extra.end());
    return cols;
}

struct Sweep {
    const ExperimentConfig& cfg;
    Example1Params params;
    ProblemDef problem;

    explicit Sweep(const ExperimentConfig& c)
        : cfg(c), params{c.a, c.b, c.alpha1, c.alpha2, c.kx, c.ky}, problem(example1_problem(params))
    {
    }

    [[nodiscard]] GridSpec grid(std::size_t n) const
    {
        return example1_grid(params, n, n, cfg.m_rule.steps_for(n), cfg.T);
    }

    [[nodiscard]] SolveReport solve(std::size_t n, double eta, bool precondition) const
    {
        const GridSpec g = grid(n);
        SolverConfig sc = cfg.solver;
        sc.precondition = precondition;
        return run(problem, g, make_fractional_params(cfg.alpha1, cfg.alpha2, cfg.kx, cfg.ky, g), eta, sc);
    }

    [[nodiscard]] PenalizedOperator op(std::size_t n, double eta) const
    {
        const GridSpec g = grid(n);
        return make_penalized_operator(g, make_fractional_params(cfg.alpha1, cfg.alpha2, cfg.kx, cfg.ky, g),
                                       build_mask(g, problem.region, eta));
    }
};

void write_table(const ExperimentConfig& cfg, const Table& table)
{
    if (cfg.out_path.empty()) {
        return;
    }
    std::ofstream os(cfg.out_path);
    if (!os) {
        throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    }
    if (cfg.format == OutputFormat::csv) {
        write_csv(os, table);
    } else {
        write_json(os, table);
    }
}

void dump_dense(const ExperimentConfig& cfg, const Sweep& sweep)
{
    const std::size_t n = cfg.n_values.front();
    const Eigen::MatrixXd m = sweep.op(n, cfg.etas.front()).dense_M(cfg.dense_cap);
    std::ofstream os(cfg.dump_dense_path);
    if (!os) {
        throw std::runtime_error("cannot open dump file '" + cfg.dump_dense_path + "'");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << (j == 0 ? "" : ",") << format_double(m(i, j));
        }
        os << '\n';
    }
}

// One sweep point; returns false when a solve failed.
using PointRunner = bool (*)(const Sweep&, std::size_t, double, Table&, std::optional<double>&);

bool run_solve_point(const Sweep& s, std::size_t n, double eta, Table& t, std::optional<double>&)
{
    auto row = common_cells(s.cfg, n, eta);
    try {
        const auto rep = s.solve(n, eta, s.cfg.solver.precondition);
        row.insert(row.end(), {s.cfg.solver.precondition ? "true" : "false", rep.relative_error,
                               rep.average_iterations, rep.average_iterations_after_first,
                               rep.max_abs_extension, rep.timings.setup_seconds, rep.timings.solve_seconds,
                               rep.timings.per_step_seconds(rep.steps.size()), "ok"});
        t.rows.push_back(std::move(row));
        return true;
    } catch (const StepFailure& e) {
        row.insert(row.end(), {s.cfg.solver.precondition ? "true" : "false", kNaN, kNaN, kNaN, kNaN, kNaN,
                               kNaN, kNaN, std::string("failed: ") + e.what()});
        t.rows.push_back(std::move(row));
        return false;
    }
}

bool run_convergence_point(const Sweep& s, std::size_t n, double eta, Table& t, std::optional<double>& prev)
{
    auto row = common_cells(s.cfg, n, eta);
    try {
        const auto pg = s.solve(n, eta, true);
        const auto gm = s.solve(n, eta, false);
        double order = kNaN;
        if (prev) {
            order = std::log2(*prev / pg.relative_error);
        }
        prev = pg.relative_error;
        row.insert(row.end(), {pg.relative_error, pg.average_iterations, gm.average_iterations,
                               pg.average_iterations_after_first, gm.average_iterations_after_first,
                               pg.timings.solve_seconds, gm.timings.solve_seconds, order, "ok"});
        t.rows.push_back(std::move(row));
        return true;
    } catch (const StepFailure& e) {
        prev.reset();
        row.insert(row.end(),
                   {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, std::string("failed: ") + e.what()});
        t.rows.push_back(std::move(row));
        return false;
    }
}

bool run_penalty_point(const Sweep& s, std::size_t n, double eta, Table& t, std::optional<double>& prev)
{
    auto row = common_cells(s.cfg, n, eta);
    try {
        const auto rep = s.solve(n, eta, s.cfg.solver.precondition);
        const double ratio = prev ? *prev / rep.max_abs_extension : kNaN;
        prev = rep.max_abs_extension;
        row.insert(row.end(), {rep.max_abs_extension, ratio, rep.relative_error, rep.average_iterations, "ok"});
        t.rows.push_back(std::move(row));
        return true;
    } catch (const StepFailure& e) {
        prev.reset();
        row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, std::string("failed: ") + e.what()});
        t.rows.push_back(std::move(row));
        return false;
    }
}

bool run_spectrum_point(const Sweep& s, std::size_t n, double eta, Table& t, std::optional<double>&)
{
    const PenalizedOperator op = s.op(n, eta);
    const TauPreconditioner p(op);
    const auto rep = spectral_report(op, p, s.cfg.dense_cap);
    auto row = common_cells(s.cfg, n, eta);
    row.insert(row.end(), {rep.tau_inv_a.min, rep.tau_inv_a.max, rep.p_inv_m.min, rep.p_inv_m.max,
                           rep.phat_inv_m_real.min, rep.phat_inv_m_real.max, rep.phat_inv_m_max_imag,
                           std::max(rep.tau_ax.max, rep.tau_ay.max), rep.m.min, rep.row_dominance_slack,
                           "ok"});
    t.rows.push_back(std::move(row));
    return true;
}

}  // namespace

std::size_t MRule::steps_for(std::size_t n) const
{
    switch (kind) {
    case Kind::eq_n:
        return n;
    case Kind::ten_n:
        return 10 * n;
    case Kind::explicit_m:
        return value;
    }
    return n;
}

std::string MRule::to_string() const
{
    switch (kind) {
    case Kind::eq_n:
        return "eq-n";
    case Kind::ten_n:
        return "10n";
    case Kind::explicit_m:
        return "explicit:" + std::to_string(value);
    }
    return "eq-n";
}

MRule MRule::parse(const std::string& text)
{
    const std::string t = trim(text);
    MRule rule;
    if (t == "eq-n") {
        rule.kind = Kind::eq_n;
    } else if (t == "10n") {
        rule.kind = Kind::ten_n;
    } else if (t.rfind("explicit:", 0) == 0) {
        rule.kind = Kind::explicit_m;
        rule.value = parse_size("m-rule", t.substr(9));
    } else {
        throw UsageError("m-rule must be eq-n, 10n or explicit:<int>, got '" + text + "'");
    }
    return rule;
}

Mode parse_mode(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "solve") {
        return Mode::solve;
    }
    if (t == "spectrum") {
        return Mode::spectrum;
    }
    if (t == "penalty-scan") {
        return Mode::penalty_scan;
    }
    if (t == "convergence-table") {
        return Mode::convergence_table;
    }
    throw UsageError("mode must be solve, spectrum, penalty-scan or convergence-table, got '" + text + "'");
}

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::solve:
        return "solve";
    case Mode::spectrum:
        return "spectrum";
    case Mode::penalty_scan:
        return "penalty-scan";
    case Mode::convergence_table:
        return "convergence-table";
    }
    return "solve";
}

void ExperimentConfig::validate() const
{
    if (n_values.empty()) {
        throw UsageError("empty sweep: give at least one --n");
    }
    if (etas.empty()) {
        throw UsageError("empty eta list");
    }
    for (std::size_t n : n_values) {
        if (n == 0) {
            throw UsageError("grid sizes must be positive");
        }
    }
    for (double eta : etas) {
        if (!(eta > 0.0)) {
            throw UsageError("eta values must be positive");
        }
    }
    if (!(alpha1 > 1.0 && alpha1 < 2.0) || !(alpha2 > 1.0 && alpha2 < 2.0)) {
        throw UsageError("alpha1, alpha2 must lie in (1,2)");
    }
    if (!(kx > 0.0) || !(ky > 0.0) || !(a > 0.0) || !(b > 0.0) || !(T > 0.0)) {
        throw UsageError("kx, ky, a, b and T must be positive");
    }
    try {
        solver.validate();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (key == "mode") {
        cfg.mode = parse_mode(value);
    } else if (key == "alpha1") {
        cfg.alpha1 = parse_double(key, value);
    } else if (key == "alpha2") {
        cfg.alpha2 = parse_double(key, value);
    } else if (key == "kx") {
        cfg.kx = parse_double(key, value);
    } else if (key == "ky") {
        cfg.ky = parse_double(key, value);
    } else if (key == "a") {
        cfg.a = parse_double(key, value);
    } else if (key == "b") {
        cfg.b = parse_double(key, value);
    } else if (key == "n") {
        for (const auto& item : split_list(value)) {
            cfg.n_values.push_back(parse_size(key, item));
        }
    } else if (key == "m-rule") {
        cfg.m_rule = MRule::parse(value);
    } else if (key == "T") {
        cfg.T = parse_double(key, value);
    } else if (key == "eta") {
        for (const auto& item : split_list(value)) {
            cfg.etas.push_back(parse_double(key, item));
        }
    } else if (key == "restart") {
        cfg.solver.restart = parse_size(key, value);
    } else if (key == "rtol") {
        cfg.solver.rtol = parse_double(key, value);
    } else if (key == "maxiter") {
        cfg.solver.maxiter = parse_size(key, value);
    } else if (key == "no-precond") {
        cfg.solver.precondition = !parse_bool(key, value);
    } else if (key == "side") {
        const std::string t = trim(value);
        if (t != "left" && t != "right") {
            throw UsageError("side must be left or right");
        }
        cfg.solver.side = t == "left" ? PreconditionSide::left : PreconditionSide::right;
    } else if (key == "residual-ref") {
        const std::string t = trim(value);
        if (t != "rhs" && t != "r0") {
            throw UsageError("residual-ref must be rhs or r0");
        }
        cfg.solver.reference = t == "rhs" ? ResidualReference::rhs : ResidualReference::initial_residual;
    } else if (key == "out") {
        cfg.out_path = trim(value);
    } else if (key == "format") {
        const std::string t = trim(value);
        if (t != "csv" && t != "json") {
            throw UsageError("format must be csv or json");
        }
        cfg.format = t == "csv" ? OutputFormat::csv : OutputFormat::json;
    } else if (key == "dump-dense") {
        cfg.dump_dense_path = trim(value);
    } else if (key == "dense-cap") {
        cfg.dense_cap = parse_size(key, value);
    } else {
        throw UsageError("unknown setting '" + key + "'");
    }
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) {
        throw UsageError("cannot read config file '" + path.string() + "'");
    }
    // A list key in the file replaces the default list rather than extending it.
    bool eta_seen = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key == "eta" && !eta_seen) {
            cfg.etas.clear();
            eta_seen = true;
        }
        apply_setting(cfg, key, line.substr(eq + 1));
    }
}

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        os << (c == 0 ? "" : ",") << table.columns[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c == 0 ? "" : ",");
            std::visit(
                [&os](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        os << format_double(v);
                    } else if constexpr (std::is_same_v<V, std::string>) {
                        const bool quote = v.find_first_of(",\"\n") != std::string::npos;
                        if (quote) {
                            os << '"';
                            for (char ch : v) {
                                os << (ch == '"' ? "\"\"" : std::string(1, ch));
                            }
                            os << '"';
                        } else {
                            os << v;
                        }
                    } else {
                        os << v;
                    }
                },
                row[c]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        obj[table.columns[c]] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
                    } else {
                        obj[table.columns[c]] = v;
                    }
                },
                row[c]);
        }
        out.push_back(std::move(obj));
    }
    os << out.dump(2) << '\n';
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg)
{
    ExperimentOutcome outcome;
    try {
        cfg.validate();
        if (cfg.mode == Mode::spectrum) {
            for (std::size_t n : cfg.n_values) {
                check_dense_cap(n * n, cfg.dense_cap, "spectrum mode");
            }
        }
        if (!cfg.dump_dense_path.empty()) {
            check_dense_cap(cfg.n_values.front() * cfg.n_values.front(), cfg.dense_cap, "--dump-dense");
        }
    } catch (const UsageError& e) {
        return {kExitUsage, {}, e.what()};
    } catch (const SizeCapError& e) {
        return {kExitSizeCap, {}, e.what()};
    }

    try {
        const Sweep sweep(cfg);
        Table& table = outcome.table;
        PointRunner runner = nullptr;
        switch (cfg.mode) {
        case Mode::solve:
            table.columns = with_common({"precond", "error", "avg_iter", "avg_iter_after_first",
                                         "max_abs_extension", "setup_s", "solve_s", "per_step_s", "status"});
            runner = run_solve_point;
            break;
        case Mode::convergence_table:
            table.columns = with_common({"error", "iter_pgmres", "iter_gmres", "iter_pgmres_after_first",
                                         "iter_gmres_after_first", "time_pgmres_s", "time_gmres_s", "order",
                                         "status"});
            runner = run_convergence_point;
            break;
        case Mode::penalty_scan:
            table.columns =
                with_common({"max_abs_extension", "ratio_to_previous_eta", "error", "avg_iter", "status"});
            runner = run_penalty_point;
            break;
        case Mode::spectrum:
            table.columns = with_common({"tau_inv_a_min", "tau_inv_a_max", "p_inv_m_min", "p_inv_m_max",
                                         "phat_inv_m_re_min", "phat_inv_m_re_max", "phat_inv_m_max_imag",
                                         "tau_max_eig", "m_min_eig", "row_dominance_slack", "status"});
            runner = run_spectrum_point;
            break;
        }

        if (!cfg.dump_dense_path.empty()) {
            dump_dense(cfg, sweep);
        }

        bool failed = false;
        if (cfg.mode == Mode::penalty_scan) {
            // Ratios compare successive eta values at a fixed n.
            for (std::size_t n : cfg.n_values) {
                std::optional<double> prev;
                for (double eta : cfg.etas) {
                    failed |= !runner(sweep, n, eta, table, prev);
                    write_table(cfg, table);
                }
            }
        } else {
            // Orders compare successive n values at a fixed eta.
            for (double eta : cfg.etas) {
                std::optional<double> prev;
                for (std::size_t n : cfg.n_values) {
                    failed |= !runner(sweep, n, eta, table, prev);
                    write_table(cfg, table);
                }
            }
        }
        if (failed) {
            outcome.exit_code = kExitSolverFailure;
            outcome.message = "one or more sweep points failed; see the status column";
        }
    } catch (const SizeCapError& e) {
        outcome.exit_code = kExitSizeCap;
        outcome.message = e.what();
    } catch (const NumericBreakdownError& e) {
        outcome.exit_code = kExitSolverFailure;
        outcome.message = e.what();
    } catch (const SingularOperatorError& e) {
        outcome.exit_code = kExitSolverFailure;
        outcome.message = e.what();
    } catch (const std::invalid_argument& e) {
        outcome.exit_code = kExitUsage;
        outcome.message = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitSolverFailure;
        outcome.message = e.what();
    }
    return outcome;
}

}  // namespace fracpen
