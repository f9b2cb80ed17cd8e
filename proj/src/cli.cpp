#include <td/cli.hpp>

#include <td/densities.hpp>
#include <td/geometry.hpp>
#include <td/ot.hpp>
#include <td/parallel.hpp>
#include <td/quadrature.hpp>
#include <td/regularity.hpp>
#include <td/sigma.hpp>

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace td {

namespace {

using nlohmann::ordered_json;

// verdict thresholds pinned by the acceptance checks
constexpr double kDualityRelTol = 1e-5;
constexpr double kLpRelTol = 0.05;
constexpr double kPdeResidualFactor = 50.0;
constexpr double kGradTol = 1e-5;
constexpr double kRayDerivTol = 1e-8;
constexpr double kMassTol = 1e-8;

struct UsageError {
    std::string msg;
};
struct IoError {
    std::string msg;
};

// --- parameter plumbing -----------------------------------------------------

struct Params {
    const std::map<std::string, std::string>& kv;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string str(const std::string& key, const std::string& def) const {
        const auto it = kv.find(key);
        return it == kv.end() ? def : it->second;
    }

    std::string required(const std::string& key) const {
        const auto it = kv.find(key);
        if (it == kv.end() || it->second.empty())
            throw UsageError{"missing required parameter --" + key};
        return it->second;
    }

    double num(const std::string& key, double def) const {
        const auto it = kv.find(key);
        if (it == kv.end()) return def;
        const char* s = it->second.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s, &end);
        if (errno != 0 || end == s || *end != '\0')
            throw UsageError{"parameter --" + key + " expects a number, got '" +
                             it->second + "'"};
        return v;
    }

    int integer(const std::string& key, int def) const {
        const double v = num(key, def);
        if (v != std::floor(v))
            throw UsageError{"parameter --" + key + " expects an integer"};
        return static_cast<int>(v);
    }
};

void check_keys(const ExperimentSpec& spec,
                std::initializer_list<const char*> allowed) {
    std::set<std::string> ok{"seed"};
    for (const char* k : allowed) ok.insert(k);
    for (const auto& [k, v] : spec.params)
        if (!ok.count(k)) {
            std::string list;
            for (const char* a : allowed) list += std::string(" --") + a;
            throw UsageError{"unknown parameter --" + k + " for command '" +
                             spec.command + "' (accepted:" + list + ")"};
        }
}

GammaConfig config_from(const Params& p) {
    GammaConfig cfg;
    cfg.gamma = p.num("gamma", cfg.gamma);
    cfg.beta = p.num("beta", cfg.beta);
    cfg.quad_tol = p.num("quad-tol", cfg.quad_tol);
    cfg.root_tol = p.num("root-tol", cfg.root_tol);
    if (!(cfg.gamma > 0.0)) throw UsageError{"--gamma must be > 0"};
    if (!(cfg.quad_tol > 0.0) || !(cfg.root_tol > 0.0))
        throw UsageError{"tolerances must be > 0"};
    return cfg;
}

// --- output -----------------------------------------------------------------

void write_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError{"cannot open '" + tmp + "' for writing"};
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) throw IoError{"short write to '" + tmp + "'"};
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError{"cannot rename '" + tmp + "' to '" + path +
                      "': " + std::strerror(errno)};
}

// reports go to --out when given, to stdout otherwise
void emit(const Params& p, const std::string& bytes) {
    if (p.has("out"))
        write_atomic(p.str("out", ""), bytes);
    else
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
}

ordered_json envelope(const ExperimentSpec& spec, const GammaConfig& cfg) {
    ordered_json j;
    j["spec"]["command"] = spec.command;
    j["spec"]["params"] = spec.params; // std::map: key-sorted, deterministic
    j["config"]["gamma"] = cfg.gamma;
    j["config"]["beta"] = cfg.beta;
    j["config"]["quad_tol"] = cfg.quad_tol;
    j["config"]["root_tol"] = cfg.root_tol;
    return j;
}

int verdict_exit(bool consistent) {
    return consistent ? kExitConsistent : kExitInconsistent;
}

// u0 increment by direct quadrature over the short interval (cheap and exact;
// see the potential audit)
double u0_step(double a0, double a1, const GammaConfig& cfg) {
    if (a0 == a1) return 0.0;
    const double lo = std::min(a0, a1), hi = std::max(a0, a1);
    const double v = integrate(
        [&](double s) {
            return 1.0 / std::sqrt(1.0 + 0.25 * std::pow(s, 2.0 * cfg.gamma));
        },
        lo, hi, 1e-15);
    return a1 >= a0 ? v : -v;
}

// --- commands ----------------------------------------------------------------

int cmd_eval(const ExperimentSpec& spec) {
    check_keys(spec, {"gamma", "beta", "quad-tol", "root-tol", "grid", "out"});
    const Params p{spec.params};
    const GammaConfig cfg0 = config_from(p);
    const int n = p.integer("grid", 128);
    if (n < 2 || n > 2048)
        throw UsageError{"--grid must be in [2, 2048]"};
    const DensityInstance inst = make_single(cfg0);
    const GammaConfig& cfg = inst.cfg;

    // sheared lattice: grid^2 cell centres, every one inside the triangle
    std::vector<std::string> cols(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double x1 = -1.0 + 2.0 * (i + 0.5) / n;
        std::string block;
        block.reserve(static_cast<std::size_t>(n) * 96);
        double u_prev = 0.0, a_prev = 0.0;
        bool have_u = false;
        char line[256];
        for (int j = 0; j < n; ++j) {
            const double x2 = (j + 0.5) / n * 0.5 * (x1 + 1.0);
            const RayCoord rc = point_to_ray({x1, x2}, cfg);
            const SigmaJet jet = sigma_jet(rc, inst);
            // walk u0 up the column instead of re-integrating from 0
            double u0;
            if (!have_u) {
                u0 = potential_u0(rc.a, cfg);
                have_u = true;
            } else {
                u0 = u_prev + u0_step(a_prev, rc.a, cfg);
            }
            u_prev = u0;
            a_prev = rc.a;
            const double u = u0 - rc.t * ray_length(rc.a, cfg);
            std::snprintf(line, sizeof line,
                          "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", x1,
                          x2, rc.t, rc.a, jet.sigma, u, jet.dx2);
            block += line;
        }
        cols[i] = std::move(block);
    });
    std::string out;
    {
        char head[160];
        std::snprintf(head, sizeof head,
                      "# config gamma=%.17g beta=%.17g quad_tol=%.3g "
                      "root_tol=%.3g\n",
                      cfg.gamma, cfg.beta, cfg.quad_tol, cfg.root_tol);
        out = head;
    }
    out += "x1,x2,t,a,sigma,u,dsigma_dx2\n";
    for (const std::string& c : cols) out += c;
    emit(p, out);
    return kExitConsistent;
}

int cmd_holder(const ExperimentSpec& spec) {
    check_keys(spec, {"gamma", "beta", "quad-tol", "root-tol", "eps-min",
                      "eps-max", "points", "out"});
    const Params p{spec.params};
    const DensityInstance inst = make_single(config_from(p));
    const double emin = p.num("eps-min", 1e-6);
    const double emax = p.num("eps-max", 1e-3);
    const int pts = p.integer("points", 16);
    if (!(emin > 0.0) || !(emin < emax) || !(emax <= 1e-2))
        throw UsageError{"need 0 < --eps-min < --eps-max <= 1e-2"};
    if (pts < 10) throw UsageError{"--points must be >= 10"};
    const ScalingReport rep = holder_exponent_fit(inst, emin, emax, pts);
    ordered_json j = envelope(spec, inst.cfg);
    j["report"] = ordered_json::parse(report_to_json(rep));
    emit(p, j.dump(2) + "\n");
    return verdict_exit(rep.verdict == Verdict::Consistent);
}

int cmd_sobolev(const ExperimentSpec& spec) {
    check_keys(spec, {"gamma", "beta", "quad-tol", "root-tol", "p", "r0-min",
                      "r0-max", "points", "out"});
    const Params p{spec.params};
    const DensityInstance inst = make_single(config_from(p));
    const double pnorm = p.num("p", 2.0);
    const double rmin = p.num("r0-min", 1e-4);
    const double rmax = p.num("r0-max", 1e-2);
    const int pts = p.integer("points", 9);
    if (!(pnorm >= 1.0)) throw UsageError{"--p must be >= 1"};
    if (!(rmin > 0.0) || !(rmin < rmax) || !(rmax < 0.1))
        throw UsageError{"need 0 < --r0-min < --r0-max < 0.1"};
    if (pts < 6) throw UsageError{"--points must be >= 6"};
    std::vector<double> radii(pts);
    for (int k = 0; k < pts; ++k)
        radii[k] = std::exp(std::log(rmax) +
                            k * (std::log(rmin) - std::log(rmax)) / (pts - 1));
    const ScalingReport rep = divergence_rate_fit(inst, pnorm, radii);
    ordered_json j = envelope(spec, inst.cfg);
    j["report"] = ordered_json::parse(report_to_json(rep));
    emit(p, j.dump(2) + "\n");
    return verdict_exit(rep.verdict == Verdict::Consistent);
}

int cmd_bv(const ExperimentSpec& spec) {
    check_keys(spec, {"gamma", "beta", "quad-tol", "root-tol", "n-max", "out"});
    const Params p{spec.params};
    const GammaConfig cfg = config_from(p);
    if (!(cfg.gamma > 1.0))
        throw UsageError{"--gamma must be > 1 for the chain (finite turning)"};
    const int n_max = p.integer("n-max", 200);
    if (n_max < 50) throw UsageError{"--n-max must be >= 50"};
    const DensityInstance inst = make_chain(cfg, n_max);
    const ScalingReport sums = bv_partial_sums(inst, n_max);
    const ScalingReport comp = bv_companion_sums(inst, n_max);
    ordered_json j = envelope(spec, inst.cfg);
    j["partial_sums"] = ordered_json::parse(report_to_json(sums));
    j["companion"] = ordered_json::parse(report_to_json(comp));
    emit(p, j.dump(2) + "\n");
    return verdict_exit(sums.verdict == Verdict::Consistent &&
                        comp.verdict == Verdict::Consistent);
}

int cmd_verify(const ExperimentSpec& spec) {
    check_keys(spec, {"what", "gamma", "beta", "quad-tol", "root-tol", "cells",
                      "samples", "out"});
    const Params p{spec.params};
    const std::string what = p.str("what", "all");
    const std::set<std::string> known{"duality", "lp", "pde", "gradients",
                                      "all"};
    if (!known.count(what))
        throw UsageError{
            "verify expects duality | lp | pde | gradients | all, got '" +
            what + "'"};
    const DensityInstance inst = make_single(config_from(p));
    const GammaConfig& cfg = inst.cfg;
    const int cells = p.integer("cells", 32);
    const int samples = p.integer("samples", 10000);
    if (cells < 2 || cells > 64)
        throw UsageError{"--cells must be in [2, 64]"};
    if (samples < 10000) throw UsageError{"--samples must be >= 10000"};

    ordered_json j = envelope(spec, cfg);
    bool ok = true;

    const auto battery = default_bump_battery();
    auto pde_bound = [&](std::size_t i) {
        const double gmax = 96.0 / (25.0 * std::sqrt(5.0) * battery[i].r);
        return kPdeResidualFactor * cfg.quad_tol * gmax;
    };

    if (what == "duality" || what == "all") {
        const double P = monotone_ray_plan_cost(inst);
        const double D = dual_objective(inst);
        const double gap = P - D;
        const double rel = P > 0.0 ? std::fabs(gap) / P : std::fabs(gap);
        j["primal_cost"] = P;
        j["dual_value"] = D;
        j["gap"] = gap;
        j["relative_gap"] = rel;
        j["relative_gap_tolerance"] = kDualityRelTol;
        ok = ok && rel <= kDualityRelTol;
    }
    if (what == "lp" || what == "all") {
        if (!j.contains("primal_cost"))
            j["primal_cost"] = monotone_ray_plan_cost(inst);
        const double P = j["primal_cost"].get<double>();
        const Quantization q = quantize_density(inst, cells);
        const TransportPlan plan = solve_discrete_ot(q.plus, q.minus);
        const double rel =
            P > 0.0 ? std::fabs(P - plan.cost) / P : std::fabs(plan.cost);
        j["lp_cost"] = plan.cost;
        j["resolution"] = cells;
        j["lp_relative_difference"] = rel;
        j["lp_iterations"] = plan.iterations;
        j["max_cs_violation"] = plan.max_cs_violation;
        j["max_infeasibility"] = plan.max_infeasibility;
        ok = ok && rel <= kLpRelTol &&
             plan.max_cs_violation <= 1e-9 * std::sqrt(5.0) &&
             plan.max_infeasibility <= 1e-10;
    }
    if (what == "pde" || what == "all") {
        const auto res = weak_pde_residual(inst, battery);
        double mx = 0.0;
        bool within = true;
        for (std::size_t i = 0; i < res.size(); ++i) {
            mx = std::max(mx, res[i]);
            within = within && res[i] <= pde_bound(i);
        }
        j["residuals"] = res;
        j["max_residual"] = mx;
        ok = ok && within;
    }
    if (what == "gradients" || what == "all") {
        const GradientAudit audit = gradient_constraints_audit(inst, samples);
        j["gradients"]["samples"] = samples;
        j["gradients"]["max_violation"] = audit.max_violation;
        j["gradients"]["max_active_violation"] = audit.max_active_violation;
        j["gradients"]["max_ray_derivative_error"] =
            audit.max_ray_derivative_error;
        ok = ok && audit.max_violation <= kGradTol &&
             audit.max_active_violation <= kGradTol &&
             audit.max_ray_derivative_error <= kRayDerivTol;
    }
    j["verdict"] = ok ? "consistent" : "inconsistent";
    emit(p, j.dump(2) + "\n");
    return verdict_exit(ok);
}

int cmd_smooth(const ExperimentSpec& spec) {
    check_keys(spec, {"gamma", "beta", "quad-tol", "root-tol", "eps",
                      "eps-prime", "a0", "samples", "out"});
    const Params p{spec.params};
    GammaConfig cfg0 = config_from(p);
    if (!p.has("gamma")) cfg0.gamma = 3.0;
    SmoothConfig sc;
    sc.eps = p.num("eps", sc.eps);
    sc.eps_prime = p.num("eps-prime", sc.eps_prime);
    sc.a0 = p.num("a0", sc.a0);
    const int samples = p.integer("samples", 20);
    if (samples < 4) throw UsageError{"--samples must be >= 4"};
    const DensityInstance inst = make_smooth(cfg0, sc);
    const GammaConfig& cfg = inst.cfg;

    ordered_json j = envelope(spec, cfg);
    j["smooth"]["eps"] = sc.eps;
    j["smooth"]["eps_prime"] = sc.eps_prime;
    j["smooth"]["a0"] = sc.a0;

    // per-subgraph balance at log-spaced labels
    std::vector<double> as(samples), res(samples);
    for (int k = 0; k < samples; ++k)
        as[k] = std::exp(std::log(1e-3) +
                         (std::log(1.0) - std::log(1e-3)) * k / (samples - 1));
    parallel_for(as.size(), [&](std::size_t k) {
        res[k] = mass_balance_residual(as[k], inst);
    });
    const double worst = *std::max_element(res.begin(), res.end());
    j["mass"]["labels"] = as;
    j["mass"]["residuals"] = res;
    j["mass"]["max_residual"] = worst;
    j["mass"]["tolerance"] = kMassTol;

    // correction slope envelope |c'(a)| <= C a near the vertex
    const int ne = 16;
    std::vector<double> ea(ne), ratio(ne);
    for (int k = 0; k < ne; ++k)
        ea[k] = std::exp(std::log(1e-4) +
                         (std::log(0.5 * sc.eps) - std::log(1e-4)) * k /
                             (ne - 1));
    parallel_for(ea.size(), [&](std::size_t k) {
        const double a = ea[k];
        const double cp =
            (smooth_correction_c(1.5 * a, sc, cfg) -
             smooth_correction_c(0.5 * a, sc, cfg)) /
            a;
        ratio[k] = std::fabs(cp) / a;
    });
    j["correction"]["labels"] = ea;
    j["correction"]["slope_over_a"] = ratio;
    j["correction"]["envelope_constant"] =
        *std::max_element(ratio.begin(), ratio.end());

    const bool ok = worst <= kMassTol;
    j["verdict"] = ok ? "consistent" : "inconsistent";
    emit(p, j.dump(2) + "\n");
    return verdict_exit(ok);
}

int cmd_render(const ExperimentSpec& spec) {
    check_keys(spec, {"in", "field", "out"});
    const Params p{spec.params};
    const std::string in = p.required("in");
    const std::string out = p.required("out");
    const std::string field = p.str("field", "sigma");
    {
        std::ifstream probe(in);
        if (!probe) throw IoError{"cannot read '" + in + "'"};
    }
    {
        // fail early with the i/o code if the target is not writable
        const std::string tmp = out + ".tmp";
        std::ofstream probe(tmp, std::ios::binary | std::ios::trunc);
        if (!probe) throw IoError{"cannot open '" + tmp + "' for writing"};
        probe.close();
        std::remove(tmp.c_str());
    }
    render_heatmap(in, out, field);
    return kExitConsistent;
}

// --- SVG ---------------------------------------------------------------------

void rgb_of(double v, int rgb[3]) {
    static constexpr double stops[5][3] = {{68, 1, 84},
                                           {59, 82, 139},
                                           {33, 145, 140},
                                           {94, 201, 98},
                                           {253, 231, 37}};
    const double s = std::clamp(v, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(s));
    const double f = s - k;
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(
            std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
}

} // namespace

void render_heatmap(const std::string& grid_csv, const std::string& out_svg,
                    const std::string& field) {
    std::ifstream f(grid_csv);
    if (!f) throw SchemaMismatch("render_heatmap: cannot read " + grid_csv);
    std::string line;
    // skip config comments, then the header row
    do {
        if (!std::getline(f, line))
            throw SchemaMismatch("render_heatmap: empty grid file");
    } while (!line.empty() && line[0] == '#');
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
    }
    auto col_of = [&](const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw SchemaMismatch("render_heatmap: no column '" + name +
                                 "' in " + grid_csv);
        return static_cast<std::size_t>(it - names.begin());
    };
    const std::size_t cx1 = col_of("x1"), cx2 = col_of("x2"),
                      cv = col_of(field);

    struct Sample {
        double x1, x2, v;
    };
    std::vector<Sample> rows;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw SchemaMismatch("render_heatmap: non-numeric cell '" +
                                     cell + "'");
            vals.push_back(v);
        }
        if (vals.size() != names.size())
            throw SchemaMismatch("render_heatmap: ragged row in " + grid_csv);
        const Sample s{vals[cx1], vals[cx2], vals[cv]};
        if (!std::isfinite(s.v))
            throw SchemaMismatch("render_heatmap: non-finite value in '" +
                                 field + "'");
        rows.push_back(s);
    }
    if (rows.empty()) throw SchemaMismatch("render_heatmap: no data rows");

    // group into x1 columns (the eval lattice is column-aligned)
    std::map<long long, std::vector<Sample>> cols;
    for (const Sample& s : rows)
        cols[std::llround(s.x1 * 1e9)].push_back(s);
    double vmin = rows[0].v, vmax = rows[0].v;
    for (const Sample& s : rows) {
        vmin = std::min(vmin, s.v);
        vmax = std::max(vmax, s.v);
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    const double px0 = 40.0, py0 = 420.0, sc = 360.0;
    auto PX = [&](double x1) { return px0 + (x1 + 1.0) * sc; };
    auto PY = [&](double x2) { return py0 - x2 * sc; };
    const double dx = cols.size() > 1 ? 2.0 / static_cast<double>(cols.size())
                                      : 2.0;

    std::string svg;
    svg.reserve(rows.size() * 64 + 4096);
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" "
           "height=\"480\" viewBox=\"0 0 860 480\">\n";
    svg += "<rect width=\"860\" height=\"480\" fill=\"#ffffff\"/>\n";
    char buf[192];
    for (auto& [key, col] : cols) {
        std::sort(col.begin(), col.end(),
                  [](const Sample& a, const Sample& b) { return a.x2 < b.x2; });
        const double hy = col.size() > 1 ? col[1].x2 - col[0].x2
                                         : 0.5 * (col[0].x1 + 1.0);
        for (const Sample& s : col) {
            int rgb[3];
            rgb_of((s.v - vmin) / span, rgb);
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                          "height=\"%.2f\" fill=\"#%02x%02x%02x\"/>\n",
                          PX(s.x1 - 0.5 * dx), PY(s.x2 + 0.5 * hy), dx * sc,
                          hy * sc, rgb[0], rgb[1], rgb[2]);
            svg += buf;
        }
    }
    // domain outline
    std::snprintf(buf, sizeof buf,
                  "<path d=\"M %.2f %.2f L %.2f %.2f L %.2f %.2f Z\" "
                  "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                  PX(-1), PY(0), PX(1), PY(0), PX(1), PY(1));
    svg += buf;
    // legend: gradient bar plus min / mid / max labels
    for (int k = 0; k < 64; ++k) {
        int rgb[3];
        rgb_of((k + 0.5) / 64.0, rgb);
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"790\" y=\"%.2f\" width=\"20\" height=\"%.2f\" "
                      "fill=\"#%02x%02x%02x\"/>\n",
                      py0 - (k + 1) * sc / 64.0, sc / 64.0, rgb[0], rgb[1],
                      rgb[2]);
        svg += buf;
    }
    const double vmid = 0.5 * (vmin + vmax);
    std::snprintf(buf, sizeof buf,
                  "<text x=\"816\" y=\"%.2f\" font-family=\"monospace\" "
                  "font-size=\"13\">%.4g</text>\n",
                  py0, vmin);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"816\" y=\"%.2f\" font-family=\"monospace\" "
                  "font-size=\"13\">%.4g</text>\n",
                  py0 - 0.5 * sc, vmid);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"816\" y=\"%.2f\" font-family=\"monospace\" "
                  "font-size=\"13\">%.4g</text>\n",
                  py0 - sc + 13.0, vmax);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"790\" y=\"36\" font-family=\"monospace\" "
                  "font-size=\"14\">%s</text>\n",
                  field.c_str());
    svg += buf;
    svg += "</svg>\n";

    try {
        write_atomic(out_svg, svg);
    } catch (const IoError& e) {
        throw SchemaMismatch("render_heatmap: " + e.msg);
    }
}

// --- spec serialization -------------------------------------------------------

ExperimentSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("spec_from_json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
        throw SchemaMismatch("spec_from_json: need an object with a "
                             "\"command\" string");
    ExperimentSpec spec;
    spec.command = j["command"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object())
            throw SchemaMismatch("spec_from_json: \"params\" must be an object");
        for (const auto& [k, v] : j["params"].items()) {
            if (v.is_string())
                spec.params[k] = v.get<std::string>();
            else if (v.is_number() || v.is_boolean())
                spec.params[k] = v.dump();
            else
                throw SchemaMismatch("spec_from_json: parameter '" + k +
                                     "' must be a scalar");
        }
    }
    return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
    ordered_json j;
    j["command"] = spec.command;
    j["params"] = spec.params;
    return j.dump(2);
}

int run(const ExperimentSpec& spec) {
    try {
        if (spec.command == "eval") return cmd_eval(spec);
        if (spec.command == "holder") return cmd_holder(spec);
        if (spec.command == "sobolev") return cmd_sobolev(spec);
        if (spec.command == "bv") return cmd_bv(spec);
        if (spec.command == "verify") return cmd_verify(spec);
        if (spec.command == "smooth") return cmd_smooth(spec);
        if (spec.command == "render") return cmd_render(spec);
        throw UsageError{"unknown command '" + spec.command +
                         "' (expected eval | holder | sobolev | bv | verify | "
                         "smooth | render)"};
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.msg.c_str());
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.msg.c_str());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}

} // namespace td
