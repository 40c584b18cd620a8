#include "rieszspec/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rieszspec/beta.hpp"
#include "rieszspec/geometry.hpp"

namespace rieszspec {

namespace {

using nlohmann::json;

std::string bc_slug(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::PerPlus: return "perplus";
        case BoundaryCondition::PerMinus: return "perminus";
        case BoundaryCondition::Dirichlet: return "dir";
    }
    return "bc";
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Deterministic complex gaussian samples (Box-Muller over the raw engine so the
// stream does not depend on the standard library's distribution internals).
Eigen::VectorXcd random_vector(std::mt19937_64& eng, int dim) {
    auto uniform = [&]() { return ((eng() >> 11) + 0.5) * 0x1.0p-53; };
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * std::numbers::pi * uniform();
        v(i) = Complex(r * std::cos(th), r * std::sin(th));
    }
    return v;
}

bool in_window(const ExperimentConfig& cfg, int n) {
    const int a = std::abs(n);
    return a >= cfg.window_min && a <= cfg.effective_window_max();
}

// Drop blocks outside the configured window before consolidation.
BlockAssembly filter_window(BlockAssembly assembly, const ExperimentConfig& cfg) {
    std::vector<SpectralBlock> keep;
    for (auto& b : assembly.blocks)
        if (in_window(cfg, b.n)) keep.push_back(std::move(b));
    assembly.blocks = std::move(keep);
    assembly.excluded_blocks = 0;
    for (const auto& b : assembly.blocks)
        if (!b.accepted) ++assembly.excluded_blocks;
    return assembly;
}

std::string make_summary(const ExperimentConfig& cfg, BoundaryCondition bc, const BcResult& res) {
    const CriterionReport& rep = res.report;
    std::ostringstream os;
    os << "[" << to_string(bc) << "] N* = " << rep.n_star << ", dim S_N* = " << rep.dim_S
       << ", blocks = " << rep.rows.size() << " (excluded by drift: " << rep.excluded_blocks
       << ")\n";
    int m = 0, m1 = 0, m2 = 0;
    double max_gamma = 0.0;
    for (const auto& row : rep.rows) {
        switch (row.block_class) {
            case BlockClass::M: ++m; break;
            case BlockClass::M1: ++m1; break;
            case BlockClass::M2: ++m2; break;
        }
        max_gamma = std::max(max_gamma, std::abs(row.gamma));
    }
    os << "  classes: M = " << m << ", M1 = " << m1 << ", M2 = " << m2 << "\n";
    if (m == 0 && m2 == 0 && !rep.rows.empty())
        os << "  all blocks M1, gamma = 0 within tolerance: trivially a Riesz system\n";
    if (m == 0 && m1 == 0 && !rep.rows.empty()) {
        os << "  all computed blocks M2 (Jordan)";
        if (!res.xi.empty()) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& [n, x] : res.xi) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            os << "; Option-2 xi_n in [" << lo << ", " << hi << "] (ratio " << hi / lo << ")";
        }
        os << "\n";
    }
    os << "  criterion (4) kappa bounded: " << to_string(rep.verdict_kappa)
       << "  (sup = " << rep.kappa_sup << ", slope = " << rep.kappa_slope << ")\n";
    os << "  criterion (5) R bounded:     " << to_string(rep.verdict_R)
       << "  (sup = " << rep.R_sup << ", slope = " << rep.r_slope << ")\n";
    os << "  criterion (7) t two-sided:   " << to_string(rep.verdict_t)
       << "  (informative points = " << rep.informative_t << ", slope = " << rep.t_slope << ")\n";
    if (rep.verdict_t == Verdict::Fails) os << "  t-criterion fails\n";
    os << "  verdict consistency: " << (rep.consistent ? "consistent" : "INCONSISTENT")
       << "; overall: " << to_string(rep.overall) << "\n";
    if (res.orlicz_c1 > 0) os << "  Orlicz C1 over sampled span: " << res.orlicz_c1 << "\n";
    if (cfg.kind == PotentialKind::HillRegular && !rep.rows.empty())
        os << "  Bari-Markus tail: deviation norms "
           << (res.bari_markus_decreasing ? "decreasing" : "NOT decreasing")
           << ", upper-half share of sum ||P_n - P_n^0||^2 = " << res.bari_markus_tail_fraction
           << "\n";
    for (const auto& note : rep.notes) os << "  note: " << note << "\n";
    return os.str();
}

json report_block_json(const BlockRow& row) {
    json b;
    b["n"] = row.n;
    b["gamma"] = cjson(row.gamma);
    b["delta"] = cjson(row.delta);
    b["z_star"] = cjson(row.z_star);
    b["mu"] = cjson(row.mu);
    b["class"] = to_string(row.block_class);
    b["accepted"] = row.accepted;
    b["kappa"] = row.kappa;
    if (row.r) b["r"] = *row.r;
    if (row.r_alt) b["r_alt"] = *row.r_alt;
    if (row.t) b["t"] = std::isfinite(*row.t) ? json(*row.t) : json("inf");
    b["t_informative"] = row.t_informative;
    if (row.xi) b["xi"] = *row.xi;
    b["deviation_norm"] = row.deviation_norm;
    b["projection_norm"] = row.projection_norm;
    b["fund_residual_r_6k"] = row.fund_residual_1;
    b["fund_residual_k_16_72r"] = row.fund_residual_2;
    b["gap_residual"] = row.gap_residual;
    b["beta_converged"] = row.beta_converged;
    b["lp_ratio"] = row.lp;
    return b;
}

}  // namespace

RunResult run_in_memory(const ExperimentConfig& cfg) {
    FourierPotential pot = build_potential(cfg);
    RunResult result;

    for (BoundaryCondition bc : cfg.bcs) {
        if (bc == BoundaryCondition::Dirichlet) {
            // dimension/localization summary only; Dirichlet pairs feed the Per runs
            TruncatedOperator op = build_matrix(pot, bc, cfg.cutoff);
            auto eigs = eigensolve(op, cfg.tol);
            Localization loc = localize(eigs, op);
            DirichletSummary ds;
            ds.n_star = loc.n_star;
            Eigen::MatrixXcd S =
                riesz_projection_box(op, loc.box_half_side, cfg.tol.quad_points, cfg.tol, &eigs);
            ds.dim_S = static_cast<int>(std::lround(S.trace().real()));
            for (const auto& [n, idx] : loc.assignment) {
                if (!in_window(cfg, n)) continue;
                Eigen::MatrixXcd P =
                    riesz_projection(op, Complex(op.lambda0(n), 0.0),
                                     disc_radius(op, loc.n_star, n), cfg.tol.quad_points,
                                     cfg.tol, &eigs);
                ds.ranks[n] = static_cast<int>(std::lround(P.trace().real()));
            }
            result.dirichlet[bc] = std::move(ds);
            continue;
        }

        BlockAssembly assembly =
            filter_window(assemble_blocks(pot, bc, cfg.cutoff, cfg.tol, cfg.parallelism), cfg);

        // beta functionals at z*_n (Hill potentials only)
        std::map<int, BetaEval> betas;
        if (pot.is_hill()) {
            for (const auto& b : assembly.blocks) {
                if (!b.accepted) continue;
                const int band = std::max(8, cfg.tol.beta_band_factor * std::abs(b.n));
                try {
                    betas.emplace(b.n,
                                  beta_pm(pot, std::abs(b.n), b.z_star, cfg.tol.beta_order, band,
                                          cfg.tol));
                } catch (const ComputationError&) {
                    // |z*| outside the series domain: leave the block without beta data
                }
            }
        }

        BcResult res;
        res.report = consolidate(assembly, betas, cfg.tol);

        // Option-2 associated vectors on Jordan blocks
        for (auto& row : res.report.rows) {
            if (row.block_class != BlockClass::M2 || !row.accepted) continue;
            for (const auto& b : assembly.blocks)
                if (b.n == row.n) {
                    auto [u, xi] = option2_vectors(b, assembly.op);
                    (void)u;
                    row.xi = xi;
                    res.xi[row.n] = xi;
                    break;
                }
        }

        // Orlicz two-sided check over {S_N*} u {P_n} on samples from their span
        {
            std::vector<Eigen::MatrixXcd> projections;
            projections.push_back(assembly.projections.S_nstar);
            for (const auto& [n, P] : assembly.projections.P) projections.push_back(P);
            Eigen::MatrixXcd total =
                Eigen::MatrixXcd::Zero(assembly.op.dim(), assembly.op.dim());
            for (const auto& P : projections) total += P;
            std::mt19937_64 eng(cfg.seed);
            std::vector<Eigen::VectorXcd> samples;
            samples.reserve(cfg.orlicz_samples);
            for (int s = 0; s < cfg.orlicz_samples; ++s)
                samples.push_back(total * random_vector(eng, assembly.op.dim()));
            OrliczResult oc = orlicz_check(projections, samples);
            res.orlicz_c1 = oc.c1;
            res.orlicz_worst_sample = oc.worst_sample;
            res.report.orlicz_c1 = oc.c1;
        }

        // Bari-Markus evidence for L2 Hill potentials
        if (cfg.kind == PotentialKind::HillRegular && assembly.blocks.size() >= 4) {
            std::vector<double> devs;
            std::vector<int> ns;
            for (const auto& b : assembly.blocks) {
                devs.push_back(b.deviation_norm);
                ns.push_back(b.n);
            }
            res.bari_markus_decreasing = loglog_slope(ns, devs) < 0.0;
            double total = 0.0, upper = 0.0;
            for (std::size_t i = 0; i < devs.size(); ++i) {
                total += devs[i] * devs[i];
                if (i >= devs.size() / 2) upper += devs[i] * devs[i];
            }
            res.bari_markus_tail_fraction = total > 0 ? upper / total : 0.0;
        }

        res.summary = make_summary(cfg, bc, res);
        result.per_bc[bc] = std::move(res);
    }
    return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult result = run_in_memory(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    FourierPotential pot = build_potential(cfg);

    json root;
    root["tool"] = "rieszspec";
    root["version"] = kToolVersion;
    root["config_hash"] = cfg.config_hash;
    root["seed"] = cfg.seed;
    root["cutoff"] = cfg.cutoff;
    root["window"] = json::array({cfg.window_min, cfg.effective_window_max()});
    root["settings"] = effective_settings(cfg);
    {
        json p;
        p["kind"] = to_string(pot.kind());
        p["family"] = pot.family();
        p["support_bound"] = pot.support_bound();
        if (pot.window_bound()) p["window_bound"] = *pot.window_bound();
        if (pot.bound_A()) p["bound_A"] = *pot.bound_A();
        p["dominance"] = pot.dominance_flag();
        p["warnings"] = pot.warnings();
        root["potential"] = p;
    }

    for (const auto& [bc, res] : result.per_bc) {
        json r;
        r["n_star"] = res.report.n_star;
        r["dim_S"] = res.report.dim_S;
        r["verdict_kappa"] = to_string(res.report.verdict_kappa);
        r["verdict_R"] = to_string(res.report.verdict_R);
        r["verdict_t"] = to_string(res.report.verdict_t);
        r["consistent"] = res.report.consistent;
        r["overall"] = to_string(res.report.overall);
        r["kappa_sup"] = res.report.kappa_sup;
        r["R_sup"] = res.report.R_sup;
        r["t_slope"] = res.report.t_slope;
        r["kappa_slope"] = res.report.kappa_slope;
        r["r_slope"] = res.report.r_slope;
        r["lp_sup"] = res.report.lp_sup;
        r["orlicz_c1"] = res.orlicz_c1;
        r["blocks_in_M"] = res.report.blocks_in_M;
        r["informative_t"] = res.report.informative_t;
        r["excluded_blocks"] = res.report.excluded_blocks;
        r["notes"] = res.report.notes;
        json blocks = json::array();
        for (const auto& row : res.report.rows) blocks.push_back(report_block_json(row));
        r["blocks"] = blocks;
        root["runs"][to_string(bc)] = r;
    }
    for (const auto& [bc, ds] : result.dirichlet) {
        json r;
        r["n_star"] = ds.n_star;
        r["dim_S"] = ds.dim_S;
        json ranks = json::object();
        for (const auto& [n, rk] : ds.ranks) ranks[std::to_string(n)] = rk;
        r["ranks"] = ranks;
        root["runs"][to_string(bc)] = r;
    }

    const std::string report_path = (fs::path(cfg.out_dir) / "report.json").string();
    {
        std::ofstream out(report_path);
        out << root.dump(2) << "\n";
    }
    result.files_written.push_back(report_path);

    for (const auto& [bc, res] : result.per_bc) {
        const std::string plot_path =
            (fs::path(cfg.out_dir) / ("plots_" + bc_slug(bc) + ".tsv")).string();
        std::ofstream out(plot_path);
        out << "n\tre_gamma\tim_gamma\tabs_gamma\tre_delta\tim_delta\tkappa\tr\tt\t"
               "dev_norm\tproj_norm\tclass\taccepted\n";
        for (const auto& row : res.report.rows) {
            out << row.n << '\t' << fmt17(row.gamma.real()) << '\t' << fmt17(row.gamma.imag())
                << '\t' << fmt17(std::abs(row.gamma)) << '\t' << fmt17(row.delta.real()) << '\t'
                << fmt17(row.delta.imag()) << '\t' << fmt17(row.kappa) << '\t'
                << (row.r ? fmt17(*row.r) : "nan") << '\t' << (row.t ? fmt17(*row.t) : "nan")
                << '\t' << fmt17(row.deviation_norm) << '\t' << fmt17(row.projection_norm) << '\t'
                << to_string(row.block_class) << '\t' << (row.accepted ? 1 : 0) << "\n";
        }
        result.files_written.push_back(plot_path);
    }

    const std::string summary_path = (fs::path(cfg.out_dir) / "summary.txt").string();
    {
        std::ofstream out(summary_path);
        out << "rieszspec " << kToolVersion << "  (config hash " << cfg.config_hash << ")\n";
        out << "potential: kind = " << to_string(pot.kind()) << ", family = " << pot.family()
            << ", support bound " << pot.support_bound() << "\n";
        for (const auto& w : pot.warnings()) out << "warning: " << w << "\n";
        out << "\n";
        for (const auto& [bc, res] : result.per_bc) out << res.summary << "\n";
        for (const auto& [bc, ds] : result.dirichlet)
            out << "[" << to_string(bc) << "] N* = " << ds.n_star << ", dim S_N* = " << ds.dim_S
                << ", window blocks all rank 1\n";
        out << "\neffective settings:\n" << effective_settings(cfg);
    }
    result.files_written.push_back(summary_path);
    return result;
}

CompareResult compare_reports(const std::vector<std::string>& report_paths) {
    if (report_paths.size() < 2)
        throw ComputationError("compare needs at least two reports");
    std::vector<json> reports;
    for (const auto& p : report_paths) {
        std::ifstream in(p);
        if (!in) throw ComputationError("cannot open report '" + p + "'");
        reports.push_back(json::parse(in));
    }
    const json& a = reports[0];
    CompareResult out;
    std::ostringstream table;
    table << "quantity drift between " << report_paths[0] << " (cutoff "
          << a.value("cutoff", 0) << ") and later reports\n";
    table << "bc\tn\tquantity\tdrift\tflag\n";

    for (std::size_t ri = 1; ri < reports.size(); ++ri) {
        const json& b = reports[ri];
        if (a.value("window", json::array()) != b.value("window", json::array()))
            throw ComputationError("compare: mismatched windows between reports");
        double trunc_tol = 1e-6;
        // recover trunc_tol from the embedded settings block
        {
            std::istringstream ss(a.value("settings", std::string()));
            std::string line;
            while (std::getline(ss, line))
                if (line.rfind("trunc_tol", 0) == 0) {
                    auto eq = line.find('=');
                    if (eq != std::string::npos) trunc_tol = std::stod(line.substr(eq + 1));
                }
        }
        if (!a.contains("runs") || !b.contains("runs")) continue;
        for (auto it = a["runs"].begin(); it != a["runs"].end(); ++it) {
            const std::string bc = it.key();
            if (!b["runs"].contains(bc)) continue;
            const json& ra = it.value();
            const json& rb = b["runs"][bc];
            if (!ra.contains("blocks") || !rb.contains("blocks")) continue;
            std::map<int, json> bb;
            for (const auto& blk : rb["blocks"]) bb[blk["n"].get<int>()] = blk;
            for (const auto& blk : ra["blocks"]) {
                const int n = blk["n"].get<int>();
                auto itb = bb.find(n);
                if (itb == bb.end()) continue;
                auto drift_of = [&](const char* key) -> double {
                    if (!blk.contains(key) || !itb->second.contains(key)) return 0.0;
                    if (blk[key].is_array()) {
                        const double dre =
                            blk[key][0].get<double>() - itb->second[key][0].get<double>();
                        const double dim =
                            blk[key][1].get<double>() - itb->second[key][1].get<double>();
                        return std::hypot(dre, dim);
                    }
                    if (!blk[key].is_number() || !itb->second[key].is_number()) return 0.0;
                    return std::abs(blk[key].get<double>() - itb->second[key].get<double>());
                };
                const bool hill =
                    a.contains("potential") &&
                    a["potential"].value("kind", std::string("hill")).rfind("hill", 0) == 0;
                const double lam0 =
                    hill ? std::max(1.0, static_cast<double>(n) * n)
                         : std::max(1.0, std::abs(static_cast<double>(n)));
                for (const char* q : {"gamma", "delta", "mu", "kappa", "r", "t"}) {
                    CompareRow row;
                    row.n = n;
                    row.quantity = q;
                    row.drift = drift_of(q);
                    row.flagged = row.drift > trunc_tol * lam0;
                    if (row.flagged) ++out.flagged;
                    table << bc << '\t' << n << '\t' << q << '\t' << fmt17(row.drift) << '\t'
                          << (row.flagged ? "DRIFT" : "ok") << "\n";
                    out.rows.push_back(std::move(row));
                }
            }
        }
    }
    out.table = table.str();
    return out;
}

}  // namespace rieszspec
