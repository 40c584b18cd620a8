#include "rieszspec/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace rieszspec {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    std::ostringstream os;
    os << "config error (line " << line << "): " << msg;
    throw ConfigError(os.str());
}

Complex parse_complex(const std::string& raw, int line) {
    std::string s = trim(raw);
    try {
        if (!s.empty() && s.front() == '(') {
            if (s.back() != ')') fail(line, "unterminated complex literal '" + s + "'");
            auto comma = s.find(',');
            if (comma == std::string::npos) fail(line, "complex literal needs '(re,im)'");
            return {std::stod(s.substr(1, comma - 1)), std::stod(s.substr(comma + 1, s.size() - comma - 2))};
        }
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (trim(s.substr(used)).size()) fail(line, "trailing characters in number '" + s + "'");
        return {v, 0.0};
    } catch (const std::invalid_argument&) {
        fail(line, "cannot parse number '" + s + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range '" + s + "'");
    }
}

double parse_double(const std::string& s, int line) { return parse_complex(s, line).real(); }

int parse_int(const std::string& raw, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(trim(raw), &used);
        if (trim(trim(raw).substr(used)).size()) fail(line, "trailing characters in integer");
        return v;
    } catch (const std::exception&) {
        fail(line, "cannot parse integer '" + trim(raw) + "'");
    }
}

BoundaryCondition parse_bc(const std::string& s, int line) {
    if (s == "per+" || s == "perplus") return BoundaryCondition::PerPlus;
    if (s == "per-" || s == "perminus") return BoundaryCondition::PerMinus;
    if (s == "dir" || s == "dirichlet") return BoundaryCondition::Dirichlet;
    fail(line, "unknown boundary condition '" + s + "' (expected per+, per-, dir)");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.config_hash = fnv1a64(text);

    std::map<int, Complex> gasymov_c_by_k;
    std::map<int, double> alpha_by_i;
    std::map<int, Complex> g_by_i;
    bool kind_set = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (val.empty()) fail(lineno, "empty value for '" + key + "'");

        int index = 0;
        bool has_index = false;
        auto br = key.find('[');
        if (br != std::string::npos) {
            if (key.back() != ']') fail(lineno, "unterminated index in key '" + key + "'");
            index = parse_int(key.substr(br + 1, key.size() - br - 2), lineno);
            key = trim(key.substr(0, br));
            has_index = true;
        }

        if (key == "kind") {
            if (val == "hill_regular") cfg.kind = PotentialKind::HillRegular;
            else if (val == "hill_singular") cfg.kind = PotentialKind::HillSingular;
            else if (val == "dirac") cfg.kind = PotentialKind::Dirac;
            else fail(lineno, "unknown kind '" + val + "'");
            kind_set = true;
        } else if (key == "family") {
            if (val != "table" && val != "zero" && val != "w_table" && val != "gasymov" &&
                val != "delta_comb" && val != "dirac_table")
                fail(lineno, "unknown family '" + val + "'");
            cfg.family = val;
        } else if (key == "coeff") {
            if (!has_index) fail(lineno, "coeff needs an index: coeff[m] = value");
            cfg.coeffs.emplace_back(index, parse_complex(val, lineno));
        } else if (key == "w") {
            if (!has_index) fail(lineno, "w needs an index: w[m] = value");
            cfg.w_coeffs.emplace_back(index, parse_complex(val, lineno));
        } else if (key == "p") {
            if (!has_index) fail(lineno, "p needs an index: p[k] = value");
            cfg.dirac_p.emplace_back(index, parse_complex(val, lineno));
        } else if (key == "q") {
            if (!has_index) fail(lineno, "q needs an index: q[k] = value");
            cfg.dirac_q.emplace_back(index, parse_complex(val, lineno));
        } else if (key == "gasymov_K") {
            cfg.gasymov_cutoff = parse_int(val, lineno);
        } else if (key == "gasymov_c") {
            if (has_index) gasymov_c_by_k[index] = parse_complex(val, lineno);
            else gasymov_c_by_k[1] = parse_complex(val, lineno);
        } else if (key == "comb_K") {
            cfg.comb_cutoff = parse_int(val, lineno);
        } else if (key == "comb_alpha") {
            alpha_by_i[has_index ? index : 1] = parse_double(val, lineno);
        } else if (key == "comb_g") {
            g_by_i[has_index ? index : 1] = parse_complex(val, lineno);
        } else if (key == "bc") {
            cfg.bcs.clear();
            std::istringstream bs(val);
            std::string tok;
            while (bs >> tok) cfg.bcs.push_back(parse_bc(tok, lineno));
            if (cfg.bcs.empty()) fail(lineno, "bc list is empty");
        } else if (key == "cutoff") {
            cfg.cutoff = parse_int(val, lineno);
        } else if (key == "window") {
            std::istringstream ws(val);
            if (!(ws >> cfg.window_min >> cfg.window_max))
                fail(lineno, "window needs two integers: window = n_min n_max");
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        } else if (key == "parallelism") {
            cfg.parallelism = parse_int(val, lineno);
        } else if (key == "orlicz_samples") {
            cfg.orlicz_samples = parse_int(val, lineno);
        } else if (key == "series_tol") {
            cfg.tol.series_tol = parse_double(val, lineno);
        } else if (key == "proj_tol") {
            cfg.tol.proj_tol = parse_double(val, lineno);
        } else if (key == "jordan_tol") {
            cfg.tol.jordan_rel = parse_double(val, lineno);
        } else if (key == "m1m2_tol") {
            cfg.tol.m1m2_offdiag_tol = parse_double(val, lineno);
        } else if (key == "trunc_tol") {
            cfg.tol.trunc_rel = parse_double(val, lineno);
        } else if (key == "trunc_tol_singular") {
            cfg.tol.trunc_rel_singular = parse_double(val, lineno);
        } else if (key == "t_floor") {
            cfg.tol.t_floor = parse_double(val, lineno);
        } else if (key == "fund_slack") {
            cfg.tol.fund_slack = parse_double(val, lineno);
        } else if (key == "zero_tol") {
            cfg.tol.zero_tol = parse_double(val, lineno);
        } else if (key == "beta_floor") {
            cfg.tol.beta_floor = parse_double(val, lineno);
        } else if (key == "slope_tol") {
            cfg.tol.slope_tol = parse_double(val, lineno);
        } else if (key == "divergence_threshold") {
            cfg.tol.divergence_threshold = parse_double(val, lineno);
        } else if (key == "quad_points") {
            cfg.tol.quad_points = parse_int(val, lineno);
        } else if (key == "beta_order") {
            cfg.tol.beta_order = parse_int(val, lineno);
        } else if (key == "beta_band_factor") {
            cfg.tol.beta_band_factor = parse_int(val, lineno);
        } else if (key == "min_blocks") {
            cfg.tol.min_blocks = parse_int(val, lineno);
        } else if (key == "t_min_points") {
            cfg.tol.t_min_points = parse_int(val, lineno);
        } else if (key == "lp_grid") {
            cfg.tol.lp_grid = parse_int(val, lineno);
        } else if (key == "xi_tol") {
            cfg.tol.xi_tol = parse_double(val, lineno);
        } else if (key == "bound_slack") {
            cfg.tol.bound_slack = parse_double(val, lineno);
        } else if (key == "residual_tol") {
            cfg.tol.residual_tol = parse_double(val, lineno);
        } else if (key == "dist_tol") {
            cfg.tol.dist_tol_rel = parse_double(val, lineno);
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }

    if (cfg.family == "gasymov") {
        if (!kind_set) cfg.kind = PotentialKind::HillSingular;
        if (cfg.gasymov_cutoff < 1) throw ConfigError("config error: gasymov_K must be set (>= 1)");
        if (gasymov_c_by_k.empty()) throw ConfigError("config error: gasymov_c missing");
        int kmax = gasymov_c_by_k.rbegin()->first;
        cfg.gasymov_c.resize(std::max(kmax, 1), gasymov_c_by_k.begin()->second);
        Complex last = gasymov_c_by_k.begin()->second;
        for (int k = 1; k <= kmax; ++k) {
            auto it = gasymov_c_by_k.find(k);
            if (it != gasymov_c_by_k.end()) last = it->second;
            cfg.gasymov_c[k - 1] = last;
        }
    }
    if (cfg.family == "delta_comb") {
        if (!kind_set) cfg.kind = PotentialKind::HillSingular;
        if (cfg.comb_cutoff < 1) throw ConfigError("config error: comb_K must be set (>= 1)");
        if (alpha_by_i.size() != g_by_i.size() || alpha_by_i.empty())
            throw ConfigError("config error: comb_alpha[i] and comb_g[i] must pair up");
        for (const auto& [i, a] : alpha_by_i) {
            auto it = g_by_i.find(i);
            if (it == g_by_i.end())
                throw ConfigError("config error: comb_g missing for point " + std::to_string(i));
            cfg.comb_alpha.push_back(a);
            cfg.comb_g.push_back(it->second);
        }
    }
    if (cfg.family == "dirac_table") cfg.kind = PotentialKind::Dirac;
    if (cfg.kind == PotentialKind::Dirac && cfg.family == "table")
        cfg.family = "dirac_table";
    if (cfg.cutoff < 8) throw ConfigError("config error: cutoff must be >= 8");
    if (cfg.window_min < 1) throw ConfigError("config error: window n_min must be >= 1");
    if (cfg.window_max != 0 && cfg.window_max < cfg.window_min)
        throw ConfigError("config error: window n_max < n_min");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

FourierPotential build_potential(const ExperimentConfig& cfg) {
    if (cfg.family == "zero")
        return FourierPotential::from_trig_coeffs({}, cfg.kind == PotentialKind::Dirac
                                                          ? PotentialKind::HillRegular
                                                          : cfg.kind);
    if (cfg.family == "table") return FourierPotential::from_trig_coeffs(cfg.coeffs, cfg.kind);
    if (cfg.family == "w_table") return FourierPotential::from_w(cfg.w_coeffs);
    if (cfg.family == "gasymov")
        return FourierPotential::gasymov(cfg.gasymov_c, cfg.gasymov_cutoff);
    if (cfg.family == "delta_comb")
        return FourierPotential::delta_comb(cfg.comb_alpha, cfg.comb_g, cfg.comb_cutoff);
    if (cfg.family == "dirac_table") {
        if (cfg.family == "dirac_table" && cfg.kind == PotentialKind::Dirac &&
            cfg.dirac_p.empty() && cfg.dirac_q.empty() && !cfg.coeffs.empty())
            throw ConfigError("config error: dirac potentials use p[k]/q[k], not coeff[m]");
        return FourierPotential::dirac(cfg.dirac_p, cfg.dirac_q);
    }
    throw ConfigError("config error: unhandled family '" + cfg.family + "'");
}

std::string effective_settings(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    const Tolerances& t = cfg.tol;
    os << "kind = " << to_string(cfg.kind) << "\n";
    os << "family = " << cfg.family << "\n";
    os << "cutoff = " << cfg.cutoff << "\n";
    os << "window = " << cfg.window_min << " " << cfg.effective_window_max() << "\n";
    os << "bc =";
    for (auto bc : cfg.bcs) os << " " << to_string(bc);
    os << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "parallelism = " << cfg.parallelism << "\n";
    os << "orlicz_samples = " << cfg.orlicz_samples << "\n";
    os << "series_tol = " << t.series_tol << "\n";
    os << "proj_tol = " << t.proj_tol << "\n";
    os << "jordan_tol = " << t.jordan_rel << "\n";
    os << "m1m2_tol = " << t.m1m2_offdiag_tol << "\n";
    os << "trunc_tol = " << t.trunc_rel << "\n";
    os << "trunc_tol_singular = " << t.trunc_rel_singular << "\n";
    os << "t_floor = " << t.t_floor << "\n";
    os << "fund_slack = " << t.fund_slack << "\n";
    os << "zero_tol = " << t.zero_tol << "\n";
    os << "beta_floor = " << t.beta_floor << "\n";
    os << "slope_tol = " << t.slope_tol << "\n";
    os << "divergence_threshold = " << t.divergence_threshold << "\n";
    os << "quad_points = " << t.quad_points << "\n";
    os << "beta_order = " << t.beta_order << "\n";
    os << "beta_band_factor = " << t.beta_band_factor << "\n";
    os << "min_blocks = " << t.min_blocks << "\n";
    os << "t_min_points = " << t.t_min_points << "\n";
    os << "lp_grid = " << t.lp_grid << "\n";
    os << "xi_tol = " << t.xi_tol << "\n";
    os << "bound_slack = " << t.bound_slack << "\n";
    os << "residual_tol = " << t.residual_tol << "\n";
    os << "dist_tol = " << t.dist_tol_rel << "\n";
    return os.str();
}

}  // namespace rieszspec
