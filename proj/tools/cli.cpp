#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ecstel/errors.hpp"
#include "ecstel/landau.hpp"
#include "ecstel/quasi_bell.hpp"
#include "ecstel/teleport.hpp"
#include "ecstel/verify.hpp"
#include "json.hpp"

namespace ecstel::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kFlagKeys{"parallel", "formal-limit"};

struct Shared {
    std::string alpha;
    std::string beta;
    std::optional<std::size_t> cutoff;
    std::optional<double> tolerance;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
    std::string config;
    bool parallel = false;
};

struct TeleportFlags {
    std::optional<double> theta;
    std::string theta_prime;
    bool formal_limit = false;
    std::uint64_t shots = 0;
};

struct SweepFlags {
    std::string mode = "diagonal";
    double start = 0.2;
    double stop = 3.0;
    std::size_t count = 57;
};

struct LandauFlags {
    double mass = 1.0;
    double charge = 1.0;
    double field_b = 1.0;
    std::optional<double> theta_nc;
    std::optional<double> kappa;
    double hbar = 1.0;
    unsigned levels = 5;
    double periods = 10.0;
    double x1 = 1.0;
    double x2 = 0.0;
    double p1 = 0.0;
    double p2 = 1.0;
};

struct VerifyFlags {
    std::optional<double> alpha_max;
};

// Carries an exit code out of a command together with its message.
struct CommandError {
    ErrorCode code;
    std::string message;
};

Json error_record(ErrorCode code, const std::string &message) {
    Json j;
    j["error"]["code"] = std::string(to_string(code));
    j["error"]["message"] = message;
    return j;
}

Json complex_json(std::complex<double> z) {
    Json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

Json qubit_json(const teleport::Qubit &q) {
    Json j = Json::array();
    for (const auto &z : q) {
        j.push_back(Json::array({z.real(), z.imag()}));
    }
    return j;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::string header) { text_ << header << '\n'; }
    void kv(const std::string &key, double value) { text_ << key << ',' << format_number(value) << '\n'; }
    void kv(const std::string &key, const std::string &value) { text_ << key << ',' << value << '\n'; }
    void line(const std::string &raw) { text_ << raw << '\n'; }
    std::string str() const { return text_.str(); }

  private:
    std::ostringstream text_;
};

ChannelSpec channel_from_flags(const Shared &sh) {
    if (sh.alpha.empty() || sh.beta.empty()) {
        throw InvalidArgument("--alpha and --beta are required");
    }
    return make_channel(parse_complex(sh.alpha), parse_complex(sh.beta));
}

void put_channel(Json &j, const ChannelSpec &spec) {
    j["alpha"] = complex_json(spec.alpha);
    j["beta"] = complex_json(spec.beta);
    j["abs_alpha"] = std::abs(spec.alpha);
    j["abs_beta"] = std::abs(spec.beta);
    j["s"] = spec.s;
    j["s_prime"] = spec.s_prime;
    j["theta"] = spec.theta;
    j["theta_prime"] = spec.theta_prime;
}

void put_channel(CsvWriter &csv, const ChannelSpec &spec) {
    csv.kv("alpha_re", spec.alpha.real());
    csv.kv("alpha_im", spec.alpha.imag());
    csv.kv("beta_re", spec.beta.real());
    csv.kv("beta_im", spec.beta.imag());
    csv.kv("abs_alpha", std::abs(spec.alpha));
    csv.kv("abs_beta", std::abs(spec.beta));
    csv.kv("s", spec.s);
    csv.kv("s_prime", spec.s_prime);
    csv.kv("theta", spec.theta);
    csv.kv("theta_prime", spec.theta_prime);
}

struct Emission {
    std::string text;
    int exit_code = kSuccess;
};

// ---------------------------------------------------------------------------
// metrics

Emission cmd_metrics(const Shared &sh) {
    const auto spec = channel_from_flags(sh);
    const auto gram = gram_matrix(spec);
    bool degenerate = false;

    struct StateRow {
        int index;
        std::optional<EntanglementReport> report;
        std::optional<CommandError> error;
    };
    std::vector<StateRow> rows;
    for (int i = 1; i <= 4; ++i) {
        try {
            rows.push_back({i, entanglement_report(i, spec), std::nullopt});
        } catch (const Error &e) {
            rows.push_back({i, std::nullopt, CommandError{e.code(), e.what()}});
            degenerate = true;
        }
    }
    if (!gram.g24()) {
        degenerate = true;
    }
    const double concurrence = concurrence_channel(spec);
    const int exit_code = degenerate ? kInvalidInput : kSuccess;

    if (sh.format == "csv") {
        CsvWriter csv("quantity,value");
        put_channel(csv, spec);
        csv.kv("G13", gram.g13());
        if (gram.g24()) {
            csv.kv("G24", *gram.g24());
        } else {
            csv.kv("G24", "");
            csv.kv("G24_error", std::string(to_string(ErrorCode::degenerate_state)));
        }
        for (const auto &row : rows) {
            const auto tag = std::to_string(row.index);
            if (row.report) {
                csv.kv("lambda_" + tag, row.report->eigen_pair.lambda);
                csv.kv("lambda_prime_" + tag, row.report->eigen_pair.lambda_prime);
                csv.kv("entropy_" + tag, row.report->entropy_bits);
            } else {
                csv.kv("state_" + tag + "_error", std::string(to_string(row.error->code)));
            }
        }
        csv.kv("concurrence", concurrence);
        return {csv.str(), exit_code};
    }

    Json j;
    j["command"] = "metrics";
    put_channel(j, spec);
    j["gram"]["G13"] = gram.g13();
    if (gram.g24()) {
        j["gram"]["G24"] = *gram.g24();
    } else {
        j["gram"]["G24"] = error_record(ErrorCode::degenerate_state, "odd quasi-Bell states vanish");
    }
    Json states = Json::array();
    for (const auto &row : rows) {
        Json s;
        s["index"] = row.index;
        if (row.report) {
            s["lambda"] = row.report->eigen_pair.lambda;
            s["lambda_prime"] = row.report->eigen_pair.lambda_prime;
            s["entropy_bits"] = row.report->entropy_bits;
        } else {
            s.update(error_record(row.error->code, row.error->message));
        }
        states.push_back(std::move(s));
    }
    j["states"] = std::move(states);
    j["concurrence"] = concurrence;
    return {j.dump(2) + "\n", exit_code};
}

// ---------------------------------------------------------------------------
// teleport

Emission cmd_teleport(const Shared &sh, const TeleportFlags &tf) {
    ChannelSpec spec{};
    if (tf.theta) {
        double theta_prime = *tf.theta;
        if (!tf.theta_prime.empty() && tf.theta_prime != "same") {
            theta_prime = parse_complex(tf.theta_prime).real();
            if (parse_complex(tf.theta_prime).imag() != 0.0) {
                throw InvalidArgument("--theta-prime must be real");
            }
        }
        spec = channel_from_angles(*tf.theta, theta_prime);
    } else {
        spec = channel_from_flags(sh);
    }
    if (!teleport::basis_defined(spec) && !tf.formal_limit) {
        throw BasisUndefined("orthonormal basis undefined for a zero coherent label; pass --formal-limit to "
                             "evaluate the closed forms only");
    }
    const auto report = teleport::teleport_report(spec);
    std::optional<std::array<std::uint64_t, 4>> counts;
    if (tf.shots > 0) {
        if (report.formal_limit) {
            throw BasisUndefined("cannot sample shots in the formal limit");
        }
        counts = teleport::sample_counts(spec, teleport::InputQubit::canonical(spec), tf.shots, sh.seed);
    }

    if (sh.format == "csv") {
        CsvWriter csv("quantity,value");
        put_channel(csv, spec);
        csv.kv("formal_limit", report.formal_limit ? "1" : "0");
        for (std::size_t k = 0; k < 4; ++k) {
            const auto key = "P" + std::to_string(k + 1);
            if (report.formal_limit) {
                csv.kv(key, "");
            } else {
                csv.kv(key, report.outcomes[k].probability);
            }
        }
        csv.kv("fidelity", report.fidelity);
        csv.kv("concurrence", report.concurrence);
        csv.kv("masfi", report.masfi);
        if (counts) {
            csv.kv("shots", std::to_string(tf.shots));
            csv.kv("seed", std::to_string(sh.seed));
            for (std::size_t k = 0; k < 4; ++k) {
                csv.kv("count_" + std::to_string(k + 1), std::to_string((*counts)[k]));
                csv.kv("frequency_" + std::to_string(k + 1),
                       static_cast<double>((*counts)[k]) / static_cast<double>(tf.shots));
            }
        }
        return {csv.str(), kSuccess};
    }

    Json j;
    j["command"] = "teleport";
    put_channel(j, spec);
    j["formal_limit"] = report.formal_limit;
    if (!report.formal_limit) {
        Json probs = Json::array();
        Json outcomes = Json::array();
        for (const auto &o : report.outcomes) {
            probs.push_back(o.probability);
            Json entry;
            entry["label"] = std::string(teleport::to_string(o.label));
            entry["probability"] = o.probability;
            entry["corrected"] = qubit_json(o.corrected);
            outcomes.push_back(std::move(entry));
        }
        j["probabilities"] = std::move(probs);
        j["outcomes"] = std::move(outcomes);
    }
    j["fidelity"] = report.fidelity;
    j["concurrence"] = report.concurrence;
    j["masfi"] = report.masfi;
    if (counts) {
        Json shots;
        shots["count"] = tf.shots;
        shots["seed"] = sh.seed;
        Json c = Json::array();
        Json f = Json::array();
        for (auto n : *counts) {
            c.push_back(n);
            f.push_back(static_cast<double>(n) / static_cast<double>(tf.shots));
        }
        shots["counts"] = std::move(c);
        shots["frequencies"] = std::move(f);
        j["shots"] = std::move(shots);
    }
    return {j.dump(2) + "\n", kSuccess};
}

// ---------------------------------------------------------------------------
// sweep

const std::vector<std::string> kSweepColumns{"abs_alpha", "abs_beta", "s",           "s_prime",     "theta",
                                             "theta_prime", "P1",   "P2",          "fidelity",    "concurrence",
                                             "masfi",     "entropy_1", "entropy_2"};

struct SweepRow {
    std::vector<std::optional<double>> cells;
    std::string flag;
};

SweepRow sweep_row(double a, double b) {
    const auto spec = make_channel(a, b);
    SweepRow row;
    row.cells = {a, b, spec.s, spec.s_prime, spec.theta, spec.theta_prime};
    std::vector<std::string> flags;
    if (teleport::basis_defined(spec)) {
        const auto p = teleport::measurement_probabilities(spec);
        row.cells.push_back(p[0]);
        row.cells.push_back(p[1]);
    } else {
        row.cells.push_back(std::nullopt);
        row.cells.push_back(std::nullopt);
        flags.push_back("formal_limit");
    }
    row.cells.push_back(teleport::fidelity(spec));
    row.cells.push_back(concurrence_channel(spec));
    row.cells.push_back(teleport::masfi(spec));
    row.cells.push_back(entanglement_entropy(1, spec));
    if (odd_states_degenerate(spec)) {
        row.cells.push_back(std::nullopt);
        flags.push_back("degenerate");
    } else {
        row.cells.push_back(entanglement_entropy(2, spec));
    }
    for (std::size_t k = 0; k < flags.size(); ++k) {
        row.flag += (k ? ";" : "") + flags[k];
    }
    return row;
}

Emission cmd_sweep(const Shared &sh, const SweepFlags &sf) {
    if (sf.count < 2) {
        throw InvalidArgument("sweep needs --count >= 2");
    }
    if (!(sf.start < sf.stop) || sf.start < 0.0 || !std::isfinite(sf.stop)) {
        throw InvalidArgument("sweep needs 0 <= --start < --stop");
    }
    double fixed_beta = 0.0;
    if (sf.mode == "alpha") {
        if (sh.beta.empty()) {
            throw InvalidArgument("--mode alpha needs a fixed --beta");
        }
        fixed_beta = std::abs(parse_complex(sh.beta));
    }
    std::vector<double> grid(sf.count);
    for (std::size_t k = 0; k < sf.count; ++k) {
        grid[k] = (k + 1 == sf.count) ? sf.stop
                                      : sf.start + (sf.stop - sf.start) * static_cast<double>(k) /
                                                       static_cast<double>(sf.count - 1);
    }
    auto eval = [&](std::size_t k) {
        return sweep_row(grid[k], sf.mode == "alpha" ? fixed_beta : grid[k]);
    };

    std::vector<SweepRow> rows(sf.count);
    if (sh.parallel) {
        std::vector<std::thread> pool;
        const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < sf.count; k += workers) {
                    rows[k] = eval(k);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    } else {
        for (std::size_t k = 0; k < sf.count; ++k) {
            rows[k] = eval(k);
        }
    }

    if (sh.format == "json") {
        Json j;
        j["command"] = "sweep";
        j["mode"] = sf.mode;
        Json columns = Json::array();
        for (const auto &c : kSweepColumns) {
            columns.push_back(c);
        }
        columns.push_back("flag");
        j["columns"] = std::move(columns);
        Json table = Json::array();
        for (const auto &row : rows) {
            Json r = Json::array();
            for (const auto &cell : row.cells) {
                r.push_back(cell ? Json(*cell) : Json(nullptr));
            }
            r.push_back(row.flag);
            table.push_back(std::move(r));
        }
        j["rows"] = std::move(table);
        return {j.dump(2) + "\n", kSuccess};
    }

    std::ostringstream text;
    for (const auto &c : kSweepColumns) {
        text << c << ',';
    }
    text << "flag\n";
    for (const auto &row : rows) {
        for (const auto &cell : row.cells) {
            if (cell) {
                text << format_number(*cell);
            }
            text << ',';
        }
        text << row.flag << '\n';
    }
    return {text.str(), kSuccess};
}

// ---------------------------------------------------------------------------
// landau

Emission cmd_landau(const Shared &sh, const LandauFlags &lf) {
    landau::LandauParams::Fields fields;
    fields.mass = lf.mass;
    fields.charge = lf.charge;
    fields.field_b = lf.field_b;
    fields.hbar = lf.hbar;
    if (lf.theta_nc && lf.kappa) {
        throw InvalidArgument("give either --theta-nc or --kappa, not both");
    }
    fields.theta_nc = lf.theta_nc.value_or(0.0);
    const auto params = lf.kappa ? landau::LandauParams::from_kappa(fields, *lf.kappa) : landau::LandauParams(fields);
    const auto eff = landau::effective_params(params);
    const landau::ClassicalState init{lf.x1, lf.x2, lf.p1, lf.p2, 0.0};
    const auto drift = landau::conservation_drift(init, params, lf.periods);

    std::vector<double> energies(lf.levels + 2);
    for (unsigned n = 0; n < energies.size(); ++n) {
        energies[n] = landau::energy_level(n, params);
    }

    if (sh.format == "csv") {
        CsvWriter csv("quantity,value");
        csv.kv("M", params.mass());
        csv.kv("e", params.charge());
        csv.kv("B", params.field_b());
        csv.kv("theta_nc", params.theta_nc());
        csv.kv("kappa", params.kappa());
        csv.kv("hbar", params.hbar());
        csv.kv("M_star", eff.mass_star);
        csv.kv("omega", eff.omega);
        csv.kv("omega_star", eff.omega_star);
        for (unsigned n = 0; n <= lf.levels; ++n) {
            csv.kv("E_" + std::to_string(n), energies[n]);
            csv.kv("spacing_" + std::to_string(n), energies[n + 1] - energies[n]);
        }
        csv.kv("drift_P1", drift.drift[0]);
        csv.kv("drift_P2", drift.drift[1]);
        csv.kv("drift_K1", drift.drift[2]);
        csv.kv("drift_K2", drift.drift[3]);
        csv.kv("drift_max", drift.max_drift());
        return {csv.str(), kSuccess};
    }

    Json j;
    j["command"] = "landau";
    j["M"] = params.mass();
    j["e"] = params.charge();
    j["B"] = params.field_b();
    j["theta_nc"] = params.theta_nc();
    j["kappa"] = params.kappa();
    j["hbar"] = params.hbar();
    j["M_star"] = eff.mass_star;
    j["omega"] = eff.omega;
    j["omega_star"] = eff.omega_star;
    Json levels = Json::array();
    for (unsigned n = 0; n <= lf.levels; ++n) {
        Json level;
        level["n"] = n;
        level["energy"] = energies[n];
        level["spacing"] = energies[n + 1] - energies[n];
        levels.push_back(std::move(level));
    }
    j["levels"] = std::move(levels);
    j["periods"] = lf.periods;
    j["steps"] = drift.steps;
    j["drift"]["P1"] = drift.drift[0];
    j["drift"]["P2"] = drift.drift[1];
    j["drift"]["K1"] = drift.drift[2];
    j["drift"]["K2"] = drift.drift[3];
    j["drift"]["max"] = drift.max_drift();
    return {j.dump(2) + "\n", kSuccess};
}

// ---------------------------------------------------------------------------
// verify

Emission cmd_verify(const Shared &sh, const VerifyFlags &vf, std::ostream &err) {
    verify::SuiteConfig config;
    if (vf.alpha_max) {
        if (!(*vf.alpha_max > 0.0)) {
            throw InvalidArgument("--alpha-max must be positive");
        }
        config.labels = verify::labels_up_to(*vf.alpha_max);
    }
    config.cutoff = sh.cutoff;
    if (sh.cutoff && *sh.cutoff == 0) {
        throw InvalidArgument("--cutoff must be positive");
    }
    config.tolerance = sh.tolerance;
    config.parallel = sh.parallel;
    const auto report = verify::run_suite(config);
    err << "verify: " << report.checks.size() << " checks in " << report.seconds << " s\n";
    const int code = report.all_passed() ? kSuccess : kVerificationFailed;

    auto status = [](const verify::CheckResult &c) {
        return c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL");
    };
    if (sh.format == "json") {
        Json j;
        j["command"] = "verify";
        j["passed"] = report.all_passed();
        Json checks = Json::array();
        for (const auto &c : report.checks) {
            Json entry;
            entry["name"] = c.name;
            entry["status"] = status(c);
            entry["max_deviation"] = c.max_deviation;
            entry["tolerance"] = c.tolerance;
            entry["note"] = c.note;
            checks.push_back(std::move(entry));
        }
        j["checks"] = std::move(checks);
        return {j.dump(2) + "\n", code};
    }
    std::ostringstream text;
    if (sh.format == "csv") {
        text << "name,status,max_deviation,tolerance\n";
        for (const auto &c : report.checks) {
            text << c.name << ',' << status(c) << ',' << format_number(c.max_deviation) << ','
                 << format_number(c.tolerance) << '\n';
        }
        return {text.str(), code};
    }
    for (const auto &c : report.checks) {
        text << status(c) << "  " << c.name << "  max_deviation=" << format_number(c.max_deviation)
             << "  tolerance=" << format_number(c.tolerance);
        if (!c.note.empty()) {
            text << "  # " << c.note;
        }
        text << '\n';
    }
    text << (report.all_passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
    return {text.str(), code};
}

// ---------------------------------------------------------------------------

void add_shared(CLI::App *sub, Shared &sh, bool text_format) {
    sub->add_option("--alpha", sh.alpha, "coherent label of mode A, e.g. 0.8 or 0.5+0.3i");
    sub->add_option("--beta", sh.beta, "coherent label of mode B");
    sub->add_option("--cutoff", sh.cutoff, "Fock cutoff per mode");
    sub->add_option("--tolerance", sh.tolerance, "override comparison tolerance");
    std::vector<std::string> formats{"json", "csv"};
    if (text_format) {
        formats.push_back("text");
    }
    sub->add_option("--format", sh.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--output", sh.output, "write the report to this path");
    sub->add_option("--seed", sh.seed, "sampling seed");
    sub->add_option("--config", sh.config, "key=value defaults file");
    sub->add_flag("--parallel", sh.parallel, "evaluate grids concurrently");
}

std::optional<std::string> find_config_path(const std::vector<std::string> &args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return std::nullopt;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

void emit_error(const Shared &sh, ErrorCode code, const std::string &message, std::ostream &out,
                std::ostream &err) {
    if (sh.format == "json") {
        out << error_record(code, message).dump(2) << '\n';
    }
    err << "error: " << to_string(code) << ": " << message << '\n';
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
    const std::string s = trim(text);
    auto parse_real = [&](std::string_view part) {
        double v = 0.0;
        if (part == "+" || part.empty()) {
            return part.empty() ? 0.0 : 1.0;
        }
        if (part == "-") {
            return -1.0;
        }
        if (part.front() == '+') {
            part.remove_prefix(1);
        }
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(v)) {
            throw InvalidArgument("cannot parse number '" + std::string(part) + "' in '" + s + "'");
        }
        return v;
    };
    if (s.empty()) {
        throw InvalidArgument("empty complex number");
    }
    if (s.back() != 'i') {
        return {parse_real(s), 0.0};
    }
    const std::string_view body(s.data(), s.size() - 1);
    // The real/imaginary split is the last sign that is not an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_real(body)};
    }
    return {parse_real(body.substr(0, split)), parse_real(body.substr(split))};
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
    return std::string(buf, result.ptr);
}

std::vector<std::string> merge_config(std::vector<std::string> args, const std::string &config_text) {
    std::istringstream in(config_text);
    std::string line;
    while (std::getline(in, line)) {
        const auto content = trim(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line without '=': " + content);
        }
        const auto key = trim(std::string_view(content).substr(0, eq));
        auto value = trim(std::string_view(content).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        const auto flag = "--" + key;
        const bool present = std::any_of(args.begin(), args.end(), [&](const std::string &a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (present) {
            continue;
        }
        if (std::find(kFlagKeys.begin(), kFlagKeys.end(), key) != kFlagKeys.end()) {
            if (value == "true" || value == "1" || value == "yes" || value == "on") {
                args.push_back(flag);
            }
            continue;
        }
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

int run(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    Shared sh;
    TeleportFlags tf;
    SweepFlags sf;
    LandauFlags lf;
    VerifyFlags vf;

    std::vector<std::string> args = raw_args;
    try {
        if (const auto path = find_config_path(args)) {
            std::ifstream file(*path);
            if (!file) {
                err << "error: cannot read config file " << *path << '\n';
                return kInvalidInput;
            }
            std::stringstream buffer;
            buffer << file.rdbuf();
            args = merge_config(std::move(args), buffer.str());
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    CLI::App app{"Teleportation over entangled coherent-state channels: metrics, protocol, sweeps, checks",
                 "ecstel"};
    app.require_subcommand(1);

    auto *metrics = app.add_subcommand("metrics", "overlaps, Gram entries, reduced spectra, entropies");
    add_shared(metrics, sh, false);

    auto *tele = app.add_subcommand("teleport", "outcome probabilities, fidelity, concurrence, MASFI");
    add_shared(tele, sh, false);
    tele->add_option("--theta", tf.theta, "mixing angle in (0, pi/4] instead of --alpha");
    tele->add_option("--theta-prime", tf.theta_prime, "mixing angle of mode B, or 'same' (the default)");
    tele->add_flag("--formal-limit", tf.formal_limit, "evaluate closed forms where the basis is undefined");
    tele->add_option("--shots", tf.shots, "number of sampled protocol runs");

    auto *sweep = app.add_subcommand("sweep", "CSV table over a label range");
    add_shared(sweep, sh, false);
    sweep->add_option("--mode", sf.mode, "diagonal (|alpha| = |beta|) or alpha (fixed --beta)")
        ->check(CLI::IsMember({"diagonal", "alpha"}));
    sweep->add_option("--start", sf.start, "first |alpha|");
    sweep->add_option("--stop", sf.stop, "last |alpha|");
    sweep->add_option("--count", sf.count, "number of grid points");

    auto *land = app.add_subcommand("landau", "exotic Landau parameters, levels, conservation drift");
    add_shared(land, sh, false);
    land->add_option("--M,--mass", lf.mass, "mass");
    land->add_option("--e,--charge", lf.charge, "charge");
    land->add_option("--B,--field", lf.field_b, "magnetic field");
    land->add_option("--theta-nc", lf.theta_nc, "noncommutative parameter");
    land->add_option("--kappa", lf.kappa, "exotic parameter (theta_nc = kappa / M^2)");
    land->add_option("--hbar", lf.hbar, "reduced Planck constant");
    land->add_option("--levels", lf.levels, "highest level index reported");
    land->add_option("--periods", lf.periods, "cyclotron periods integrated for the drift");
    land->add_option("--x1", lf.x1);
    land->add_option("--x2", lf.x2);
    land->add_option("--p1", lf.p1);
    land->add_option("--p2", lf.p2);

    auto *ver = app.add_subcommand("verify", "closed forms against the Fock-space oracle");
    add_shared(ver, sh, true);
    ver->add_option("--alpha-max", vf.alpha_max, "largest grid label");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    if (sh.format.empty()) {
        sh.format = ver->parsed() ? "text" : (sweep->parsed() ? "csv" : "json");
    }

    Emission emission;
    try {
        if (metrics->parsed()) {
            emission = cmd_metrics(sh);
        } else if (tele->parsed()) {
            emission = cmd_teleport(sh, tf);
        } else if (sweep->parsed()) {
            emission = cmd_sweep(sh, sf);
        } else if (land->parsed()) {
            emission = cmd_landau(sh, lf);
        } else {
            emission = cmd_verify(sh, vf, err);
        }
    } catch (const Error &e) {
        emit_error(sh, e.code(), e.what(), out, err);
        return kInvalidInput;
    }

    if (!sh.output.empty()) {
        std::ofstream file(sh.output, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << sh.output << '\n';
            return kInvalidInput;
        }
        file << emission.text;
    } else {
        out << emission.text;
    }
    return emission.exit_code;
}

}  // namespace ecstel::cli
