#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "covertcap/finite_blocklength.hpp"
#include "covertcap/fock.hpp"
#include "covertcap/symplectic.hpp"
#include "covertcap/verify.hpp"
#include "covertcap/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

std::string format_value(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct Config {
    std::optional<double> q0;
    std::optional<double> q1;
    double adaptive_tol = 1e-8;
    int adaptive_step = 4;
};

Config load_config(const std::string& path) {
    Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config file not readable: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "q0") cfg.q0 = std::stod(value);
        else if (key == "q1") cfg.q1 = std::stod(value);
        else if (key == "adaptive_tol") cfg.adaptive_tol = std::stod(value);
        else if (key == "adaptive_step") cfg.adaptive_step = std::stoi(value);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    return cfg;
}

json base_manifest(const std::string& command, const Config& cfg) {
    json m;
    m["tool"] = "covertcap";
    m["version"] = covertcap::kVersion;
    m["timestamp"] = iso_timestamp();
    m["command"] = command;
    m["truncation"] = {{"adaptive_tol", cfg.adaptive_tol},
                       {"adaptive_step", cfg.adaptive_step},
                       {"thermal_tail_bound", 1e-12},
                       {"matrix_layout", "qqpp"}};
    return m;
}

// ---------------------------------------------------------------- sweep ---

struct PointParams {
    double eta = 0.5;
    double nbar_b = 1.0;
    double delta = 1.0;
    double epsilon = 0.1;
    std::int64_t n = 1000000;
    std::optional<double> nbar_s;  // derived from the budget when absent
    double v = 1.0;
};

struct Quantity {
    std::string units;
    std::function<double(const PointParams&)> eval;
};

struct CalibrationCache {
    const Config* cfg = nullptr;
    std::map<std::pair<double, double>, covertcap::QCalibration> by_channel;

    covertcap::QCalibration get(const covertcap::ChannelParams& ch) {
        if (cfg->q0 && cfg->q1) return covertcap::QCalibration{*cfg->q0, *cfg->q1};
        const auto key = std::make_pair(ch.eta, ch.nbar_b);
        auto it = by_channel.find(key);
        if (it == by_channel.end()) {
            it = by_channel.emplace(key, covertcap::calibrate_q(ch)).first;
        }
        return it->second;
    }
};

double resolved_nbar_s(const PointParams& p) {
    if (p.nbar_s) return *p.nbar_s;
    return covertcap::photon_budget(covertcap::ChannelParams(p.eta, p.nbar_b), p.delta, p.n)
        .nbar_s;
}

std::map<std::string, Quantity> quantity_table(CalibrationCache& calib) {
    using covertcap::ChannelParams;
    std::map<std::string, Quantity> q;
    q["nbar_s"] = {"photons/mode", [](const PointParams& p) { return resolved_nbar_s(p); }};
    q["c_cov"] = {"1", [](const PointParams& p) {
                      return covertcap::covert_constant(ChannelParams(p.eta, p.nbar_b));
                  }};
    q["holevo_capacity"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::holevo_capacity(ChannelParams(p.eta, p.nbar_b), resolved_nbar_s(p));
    }};
    q["holevo_capacity_taylor_upper"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::holevo_capacity_taylor_upper(ChannelParams(p.eta, p.nbar_b),
                                                       resolved_nbar_s(p));
    }};
    q["ea_capacity"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::ea_capacity(ChannelParams(p.eta, p.nbar_b), resolved_nbar_s(p));
    }};
    q["ea_capacity_expansion"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::ea_capacity_expansion(ChannelParams(p.eta, p.nbar_b),
                                                resolved_nbar_s(p));
    }};
    q["ea_variance_closed"] = {"bits^2/mode", [](const PointParams& p) {
        return covertcap::ea_variance_closed(ChannelParams(p.eta, p.nbar_b), resolved_nbar_s(p));
    }};
    q["ea_variance_expansion"] = {"bits^2/mode", [](const PointParams& p) {
        return covertcap::ea_variance_expansion(ChannelParams(p.eta, p.nbar_b),
                                                resolved_nbar_s(p));
    }};
    q["gaussian_ensemble_variance"] = {"bits^2/mode", [](const PointParams& p) {
        return covertcap::gaussian_ensemble_variance(ChannelParams(p.eta, p.nbar_b),
                                                     resolved_nbar_s(p));
    }};
    q["qpsk_chi"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::qpsk_leading_moments(ChannelParams(p.eta, p.nbar_b), resolved_nbar_s(p))
            .chi;
    }};
    q["qpsk_vchi"] = {"bits^2/mode", [](const PointParams& p) {
        return covertcap::qpsk_leading_moments(ChannelParams(p.eta, p.nbar_b), resolved_nbar_s(p))
            .v_chi;
    }};
    q["l_no_ea"] = {"bits", [](const PointParams& p) {
        return covertcap::covert_constants(ChannelParams(p.eta, p.nbar_b), p.delta).l_no_ea;
    }};
    q["l_ea"] = {"bits", [](const PointParams& p) {
        return covertcap::covert_constants(ChannelParams(p.eta, p.nbar_b), p.delta).l_ea;
    }};
    q["k_no_ea"] = {"bits", [](const PointParams& p) {
        return covertcap::covert_constants(ChannelParams(p.eta, p.nbar_b), p.delta).k_no_ea;
    }};
    q["k_ea"] = {"bits", [](const PointParams& p) {
        return covertcap::covert_constants(ChannelParams(p.eta, p.nbar_b), p.delta).k_ea;
    }};
    q["structured_receiver_rate"] = {"bits/mode", [](const PointParams& p) {
        return covertcap::structured_receiver_rate(ChannelParams(p.eta, p.nbar_b),
                                                   resolved_nbar_s(p),
                                                   covertcap::ReceiverParams(p.v));
    }};
    q["structured_receiver_covert_constant"] = {"bits", [](const PointParams& p) {
        return covertcap::structured_receiver_covert_constant(ChannelParams(p.eta, p.nbar_b));
    }};
    q["m_bound_no_ea"] = {"bits", [&calib](const PointParams& p) {
        const ChannelParams ch(p.eta, p.nbar_b);
        return covertcap::m_bound_no_ea(ch, p.delta, p.epsilon, p.n, calib.get(ch)).m_lower;
    }};
    q["m_bound_ea"] = {"bits", [&calib](const PointParams& p) {
        const ChannelParams ch(p.eta, p.nbar_b);
        return covertcap::m_bound_ea(ch, p.delta, p.epsilon, p.n, calib.get(ch)).m_lower;
    }};
    return q;
}

std::vector<double> build_axis_values(const std::vector<double>& explicit_values, double start,
                                      double stop, int count, const std::string& spacing) {
    if (!explicit_values.empty()) return explicit_values;
    if (count < 1) throw std::runtime_error("sweep: count must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    if (spacing == "log") {
        if (start <= 0.0 || stop <= 0.0)
            throw std::runtime_error("sweep: log spacing needs positive start/stop");
        const double ls = std::log(start), le = std::log(stop);
        for (int i = 0; i < count; ++i)
            out.push_back(std::exp(ls + (le - ls) * i / (count - 1)));
    } else if (spacing == "linear") {
        for (int i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * i / (count - 1));
    } else {
        throw std::runtime_error("sweep: spacing must be linear or log");
    }
    return out;
}

void apply_axis(PointParams& p, const std::string& axis, double value) {
    if (axis == "n") {
        p.n = static_cast<std::int64_t>(std::llround(value));
        p.nbar_s.reset();
    } else if (axis == "nbar_s") {
        p.nbar_s = value;
    } else if (axis == "eta") {
        p.eta = value;
    } else if (axis == "nbar_b") {
        p.nbar_b = value;
    } else if (axis == "delta") {
        p.delta = value;
        p.nbar_s.reset();
    } else if (axis == "epsilon") {
        p.epsilon = value;
    } else {
        throw std::runtime_error("sweep: unknown axis '" + axis + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covert-communication quantities for lossy thermal-noise bosonic channels"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (flags win)");

    // ---- budget ----
    auto* budget_cmd = app.add_subcommand("budget", "per-mode photon budget for covertness");
    double b_eta = 0.0, b_nbar_b = 0.0, b_delta = 1.0;
    std::int64_t b_n = 0;
    bool b_json = false;
    budget_cmd->add_option("--eta", b_eta, "channel transmissivity in (0,1)")->required();
    budget_cmd->add_option("--nbar-b", b_nbar_b, "environment mean photon number")->required();
    budget_cmd->add_option("--delta", b_delta, "covertness parameter (default 1)");
    budget_cmd->add_option("--n", b_n, "number of channel uses (modes)")->required();
    budget_cmd->add_flag("--json", b_json, "machine-readable output");

    // ---- capacity ----
    auto* cap_cmd = app.add_subcommand("capacity", "covert-capacity constants of a channel");
    double c_eta = 0.0, c_nbar_b = 0.0, c_delta = 1.0;
    bool c_json = false;
    cap_cmd->add_option("--eta", c_eta, "channel transmissivity in (0,1)")->required();
    cap_cmd->add_option("--nbar-b", c_nbar_b, "environment mean photon number")->required();
    cap_cmd->add_option("--delta", c_delta, "covertness parameter (default 1)");
    cap_cmd->add_flag("--json", c_json, "machine-readable output");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate quantities along one axis, CSV out");
    std::string s_axis, s_spacing = "log", s_output;
    std::vector<double> s_values;
    double s_start = 0.0, s_stop = 0.0;
    int s_count = 0;
    std::vector<std::string> s_quantities;
    PointParams fixed;
    double s_nbar_s_flag = -1.0;
    sweep_cmd->add_option("--axis", s_axis, "one of n, nbar_s, eta, nbar_b, delta, epsilon")
        ->required();
    sweep_cmd->add_option("--values", s_values, "explicit axis values")->delimiter(',');
    sweep_cmd->add_option("--start", s_start, "axis start (with --stop/--count)");
    sweep_cmd->add_option("--stop", s_stop, "axis stop");
    sweep_cmd->add_option("--count", s_count, "number of points");
    sweep_cmd->add_option("--spacing", s_spacing, "linear or log (default log)");
    sweep_cmd->add_option("--quantities", s_quantities, "comma-separated quantity names")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--eta", fixed.eta, "fixed transmissivity");
    sweep_cmd->add_option("--nbar-b", fixed.nbar_b, "fixed environment photon number");
    sweep_cmd->add_option("--delta", fixed.delta, "fixed covertness parameter");
    sweep_cmd->add_option("--epsilon", fixed.epsilon, "fixed decoding error probability");
    sweep_cmd->add_option("--n", fixed.n, "fixed blocklength");
    sweep_cmd->add_option("--nbar-s", s_nbar_s_flag,
                          "fixed per-mode photon number (otherwise from the budget)");
    sweep_cmd->add_option("--v", fixed.v, "receiver design parameter");
    sweep_cmd->add_option("--output", s_output, "CSV file (manifest written alongside)");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "run the oracle cross-check suite");
    std::string v_level = "fast";
    verify_cmd->add_option("--level", v_level, "fast or full (default fast)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        const Config cfg = load_config(config_path);

        if (budget_cmd->parsed()) {
            const covertcap::ChannelParams ch(b_eta, b_nbar_b);
            const covertcap::CovertBudget budget = covertcap::photon_budget(ch, b_delta, b_n);
            const double c_cov = covertcap::covert_constant(ch);
            if (b_json) {
                json out = base_manifest("budget", cfg);
                out["parameters"] = {{"eta", b_eta}, {"nbar_b", b_nbar_b},
                                     {"delta", b_delta}, {"n", b_n}};
                out["nbar_s"] = budget.nbar_s;
                out["c_cov"] = c_cov;
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "nbar_s = " << format_value(budget.nbar_s) << " photons/mode\n"
                          << "c_cov  = " << format_value(c_cov) << "\n";
            }
            return 0;
        }

        if (cap_cmd->parsed()) {
            const covertcap::ChannelParams ch(c_eta, c_nbar_b);
            const covertcap::CovertConstants k = covertcap::covert_constants(ch, c_delta);
            if (c_json) {
                json out = base_manifest("capacity", cfg);
                out["parameters"] = {{"eta", c_eta}, {"nbar_b", c_nbar_b}, {"delta", c_delta}};
                out["constants"] = {{"c_cov", k.c_cov},
                                    {"c_rel_no_ea", k.c_rel_no_ea},
                                    {"c_rel_ea", k.c_rel_ea},
                                    {"l_no_ea", k.l_no_ea},
                                    {"k_no_ea", k.k_no_ea},
                                    {"l_ea", k.l_ea},
                                    {"k_ea", k.k_ea}};
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "constant        value\n"
                          << "c_cov           " << format_value(k.c_cov) << "\n"
                          << "c_rel_no_ea     " << format_value(k.c_rel_no_ea) << " bits\n"
                          << "c_rel_ea        " << format_value(k.c_rel_ea) << " bits\n"
                          << "L_no_ea         " << format_value(k.l_no_ea) << " bits\n"
                          << "K_no_ea         " << format_value(k.k_no_ea) << " bits\n"
                          << "L_ea            " << format_value(k.l_ea) << " bits\n"
                          << "K_ea            " << format_value(k.k_ea) << " bits\n";
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            if (s_nbar_s_flag >= 0.0) fixed.nbar_s = s_nbar_s_flag;
            if (s_quantities.empty()) throw std::runtime_error("sweep: empty quantity list");
            CalibrationCache calib;
            calib.cfg = &cfg;
            auto table = quantity_table(calib);
            for (const auto& name : s_quantities) {
                if (!table.count(name))
                    throw std::runtime_error("sweep: unknown quantity '" + name + "'");
            }
            const std::vector<double> values =
                build_axis_values(s_values, s_start, s_stop, s_count, s_spacing);
            if (values.empty()) throw std::runtime_error("sweep: empty axis value list");

            std::ostringstream csv;
            csv.imbue(std::locale::classic());
            csv << s_axis;
            for (const auto& name : s_quantities)
                csv << "," << name << " [" << table[name].units << "]";
            csv << ",flags\n";
            for (double value : values) {
                PointParams p = fixed;
                apply_axis(p, s_axis, value);
                csv << format_value(value);
                std::string flags;
                for (const auto& name : s_quantities) {
                    try {
                        csv << "," << format_value(table[name].eval(p));
                    } catch (const std::exception& e) {
                        csv << ",";
                        if (!flags.empty()) flags += "|";
                        flags += name + ":error";
                    }
                }
                csv << "," << flags << "\n";
            }

            json manifest = base_manifest("sweep", cfg);
            manifest["parameters"] = {{"axis", s_axis},
                                      {"eta", fixed.eta},
                                      {"nbar_b", fixed.nbar_b},
                                      {"delta", fixed.delta},
                                      {"epsilon", fixed.epsilon},
                                      {"n", fixed.n},
                                      {"v", fixed.v},
                                      {"values", values},
                                      {"quantities", s_quantities}};
            if (fixed.nbar_s) manifest["parameters"]["nbar_s"] = *fixed.nbar_s;
            json calib_json = json::object();
            for (const auto& [key, qc] : calib.by_channel) {
                calib_json[format_value(key.first) + "," + format_value(key.second)] = {
                    {"q0", qc.q0}, {"q1", qc.q1}};
            }
            if (cfg.q0 && cfg.q1)
                calib_json["config_override"] = {{"q0", *cfg.q0}, {"q1", *cfg.q1}};
            manifest["calibration"] = calib_json;

            if (s_output.empty()) {
                std::cout << csv.str();
                std::cerr << manifest.dump(2) << "\n";
            } else {
                std::ofstream out(s_output);
                if (!out) throw std::runtime_error("sweep: cannot write " + s_output);
                out << csv.str();
                std::ofstream mout(s_output + ".manifest.json");
                mout << manifest.dump(2) << "\n";
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            covertcap::VerifyLevel level;
            if (v_level == "fast") level = covertcap::VerifyLevel::fast;
            else if (v_level == "full") level = covertcap::VerifyLevel::full;
            else throw std::runtime_error("verify: level must be fast or full");
            const auto results = covertcap::run_verify(level);
            bool all_pass = true;
            for (const auto& r : results) {
                std::cout << covertcap::format_check(r) << "\n";
                all_pass &= r.pass;
            }
            std::cout << (all_pass ? "verify: all checks passed\n"
                                   : "verify: at least one check failed\n");
            return all_pass ? 0 : kExitVerifyFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
