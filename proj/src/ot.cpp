#include <td/ot.hpp>

#include <td/eta.hpp>
#include <td/parallel.hpp>
#include <td/quadrature.hpp>
#include <td/sigma.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace td {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_single(const DensityInstance& inst, const char* who) {
    if (inst.kind != InstanceKind::SingleTriangle)
        throw InvalidParameter(std::string(who) +
                               ": single-triangle instances only");
}

// Distance margins of a disk to the three edges x2 = 0, x1 = 1 and
// x2 = (x1+1)/2 (inward normal (−1, 2)/sqrt 5).
double bump_margin(const Bump& b) {
    const double base = b.c.x2;
    const double right = 1.0 - b.c.x1;
    const double hyp = (b.c.x1 + 1.0 - 2.0 * b.c.x2) / std::sqrt(5.0);
    return std::min({base, right, hyp}) - b.r;
}

void validate_battery(const std::vector<Bump>& battery) {
    if (battery.empty())
        throw InvalidParameter("weak_pde_residual: empty battery");
    for (const Bump& b : battery) {
        if (!(b.r > 0.0))
            throw InvalidParameter("weak_pde_residual: bump radius must be > 0");
        if (!(bump_margin(b) > 0.0))
            throw InvalidParameter(
                "weak_pde_residual: bump disk leaves the triangle");
    }
}

// Transport cost of the per-ray monotone rearrangement on ray a, from the
// 2048-node piecewise-linear CDFs of f+(X(.,a)) J and f-(X(.,a)) J.
double ray_plan_cost(const DensityInstance& inst, double a) {
    constexpr int NT = 2048;
    const double h = 1.0 / (NT - 1);
    RayDensity rd(inst, a);
    std::vector<double> p(NT), q(NT), F(NT), G(NT);
    for (int k = 0; k < NT; ++k) {
        const double t = k * h;
        const double J = jacobian({t, a}, inst.cfg);
        p[k] = J;
        q[k] = (1.0 - rd.deficit(t)) * J;
    }
    F[0] = G[0] = 0.0;
    for (int k = 1; k < NT; ++k) {
        F[k] = F[k - 1] + 0.5 * h * (p[k - 1] + p[k]);
        G[k] = G[k - 1] + 0.5 * h * (q[k - 1] + q[k]);
    }
    if (!(F[NT - 1] > 0.0) || !(G[NT - 1] > 0.0)) return 0.0;
    // the per-ray masses agree analytically; rescale away the quadrature drift
    const double scale = F[NT - 1] / G[NT - 1];
    for (int k = 0; k < NT; ++k) G[k] *= scale;
    double acc = 0.0, prev = 0.0;
    int j = 0;
    for (int k = 0; k < NT; ++k) {
        while (j < NT - 2 && G[j + 1] < F[k]) ++j;
        const double seg = G[j + 1] - G[j];
        double T = j * h;
        if (seg > 0.0) T += h * std::clamp((F[k] - G[j]) / seg, 0.0, 1.0);
        const double c = std::fabs(k * h - T) * p[k];
        if (k > 0) acc += 0.5 * h * (prev + c);
        prev = c;
    }
    return ray_length(a, inst.cfg) * acc;
}

// u0(a1) - u0(a0) by direct quadrature of the integrand over the short
// interval, so nearby potential values difference exactly instead of
// subtracting two independent adaptive runs.
double u0_between(double a0, double a1, const GammaConfig& cfg) {
    if (a0 == a1) return 0.0;
    const double lo = std::min(a0, a1), hi = std::max(a0, a1);
    const double v = integrate(
        [&](double s) {
            return 1.0 / std::sqrt(1.0 + 0.25 * std::pow(s, 2.0 * cfg.gamma));
        },
        lo, hi, 1e-15);
    return a1 >= a0 ? v : -v;
}

// u(q) - u(base), u(X(t,a)) = u0(a) - t l(a).
double u_increment(const RayCoord& base, const RayCoord& q,
                   const GammaConfig& cfg) {
    return u0_between(base.a, q.a, cfg) -
           (q.t * ray_length(q.a, cfg) - base.t * ray_length(base.a, cfg));
}

// --- network simplex ------------------------------------------------------

struct BasisArc {
    int i = 0, j = 0; // source / target index
    double f = 0.0;
    double c = 0.0;
};

} // namespace

std::vector<Bump> default_bump_battery() {
    return {
        {{-0.60, 0.08}, 0.06}, {{-0.35, 0.10}, 0.08}, {{0.00, 0.06}, 0.05},
        {{0.40, 0.10}, 0.08},  {{0.80, 0.12}, 0.08},  {{-0.10, 0.25}, 0.12},
        {{0.30, 0.30}, 0.12},  {{0.70, 0.35}, 0.15},  {{0.20, 0.48}, 0.07},
        {{0.60, 0.70}, 0.07},  {{0.90, 0.60}, 0.08},  {{0.85, 0.86}, 0.04},
    };
}

std::vector<double> weak_pde_residual(const DensityInstance& inst,
                                      const std::vector<Bump>& battery) {
    require_single(inst, "weak_pde_residual");
    validate_battery(battery);
    const auto& cfg = inst.cfg;
    std::vector<double> out(battery.size());
    parallel_for(battery.size(), [&](std::size_t bi) {
        const Bump& b = battery[bi];
        const double r2 = b.r * b.r;
        // angular direction table: the ring integrand is smooth and periodic,
        // so the uniform rule is spectrally accurate
        constexpr int NPSI = 96;
        std::array<double, NPSI> cs, sn;
        for (int k = 0; k < NPSI; ++k) {
            cs[k] = std::cos(2.0 * kPi * k / NPSI);
            sn[k] = std::sin(2.0 * kPi * k / NPSI);
        }
        auto ring = [&](double rho) {
            const double w = 1.0 - rho * rho / r2;
            const double phi = w * w * w;
            const double gcoef = -6.0 / r2 * w * w; // grad phi = gcoef (x - c)
            double acc = 0.0;
            for (int k = 0; k < NPSI; ++k) {
                const Point x{b.c.x1 + rho * cs[k], b.c.x2 + rho * sn[k]};
                const RayCoord rc = point_to_ray(x, cfg);
                const auto e = unit_ray_direction(rc.a, cfg);
                // grad u . grad phi with grad u = -e(a)
                const double gd = -gcoef * rho * (e[0] * cs[k] + e[1] * sn[k]);
                const double def = f_plus(x, inst) - f_minus(x, inst);
                acc += sigma(rc, inst) * gd - phi * def;
            }
            return acc * (2.0 * kPi / NPSI) * rho;
        };
        out[bi] = std::fabs(
            integrate(ring, 0.0, b.r, 0.05 * std::max(cfg.quad_tol, 1e-14)));
    });
    return out;
}

double monotone_ray_plan_cost(const DensityInstance& inst) {
    require_single(inst, "monotone_ray_plan_cost");
    const double tol = 0.1 * std::max(inst.cfg.quad_tol, 1e-13);
    return integrate([&](double a) { return ray_plan_cost(inst, a); }, 0.0, 1.0,
                     tol);
}

double dual_objective(const DensityInstance& inst) {
    require_single(inst, "dual_objective");
    const auto& cfg = inst.cfg;
    const double inner_tol = 0.1 * std::max(cfg.quad_tol, 1e-13);
    auto per_ray = [&](double a) {
        RayDensity rd(inst, a);
        // int u (f+ - f-) over the ray splits as u0(a) int F J - l int t F J;
        // the first moment vanishes ray by ray (mass balance), but it is kept
        // and integrated honestly.
        const double I0 = integrate(
            [&](double t) { return rd.deficit(t) * jacobian({t, a}, cfg); },
            0.0, 1.0, inner_tol);
        const double I1 = integrate(
            [&](double t) { return t * rd.deficit(t) * jacobian({t, a}, cfg); },
            0.0, 1.0, inner_tol);
        return potential_u0(a, cfg) * I0 - ray_length(a, cfg) * I1;
    };
    return integrate(per_ray, 0.0, 1.0, inner_tol);
}

double duality_gap(const DensityInstance& inst) {
    return monotone_ray_plan_cost(inst) - dual_objective(inst);
}

// --- quantization ----------------------------------------------------------

double DiscreteMeasure::total() const {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

Quantization quantize_density(const DensityInstance& inst, int side) {
    require_single(inst, "quantize_density");
    if (side < 2 || side > 64)
        throw InvalidParameter("quantize_density: side must be in [2, 64]");
    const auto& cfg = inst.cfg;
    const double wx = 2.0 / side, wy = 1.0 / side;
    struct Cell {
        Point mid;
        double wp = 0.0, wm = 0.0;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(side) * side);
    parallel_for(cells.size(), [&](std::size_t ci) {
        const int i = static_cast<int>(ci) % side;
        const int j = static_cast<int>(ci) / side;
        const double X0 = -1.0 + i * wx, X1 = X0 + wx;
        const double Y0 = j * wy, Y1 = Y0 + wy;
        Cell cell{{X0 + 0.5 * wx, Y0 + 0.5 * wy}, 0.0, 0.0};
        // the hypotenuse x2 = (x1+1)/2 enters the strip [Y0, Y1] between
        // x1 = 2 Y0 - 1 and x1 = 2 Y1 - 1
        const double lo = std::max(X0, 2.0 * Y0 - 1.0);
        if (lo < X1) {
            const double split = std::clamp(2.0 * Y1 - 1.0, lo, X1);
            // inner x2 integral of f- in closed form through eta'
            auto col = [&](double x1, double top) {
                const double zpp = zeta_jet(x1)[2];
                return (top - Y0) * (1.0 + cfg.beta * zpp) +
                       cfg.beta *
                           (eta_jet(top, cfg).eta1 - eta_jet(Y0, cfg).eta1);
            };
            if (split > lo) { // clipped by the hypotenuse
                cell.wp += 0.25 * ((split + 1.0) * (split + 1.0) -
                                   (lo + 1.0) * (lo + 1.0)) -
                           Y0 * (split - lo);
                cell.wm += integrate(
                    [&](double x1) { return col(x1, 0.5 * (x1 + 1.0)); }, lo,
                    split, 1e-14);
            }
            if (X1 > split) { // full-height columns
                cell.wp += (X1 - split) * wy;
                cell.wm += integrate([&](double x1) { return col(x1, Y1); },
                                     split, X1, 1e-14);
            }
        }
        cells[ci] = cell;
    });
    Quantization out;
    out.side = side;
    for (const Cell& c : cells) {
        if (c.wp > 1e-16) {
            out.plus.x.push_back(c.mid);
            out.plus.w.push_back(c.wp);
        }
        if (c.wm > 1e-16) {
            out.minus.x.push_back(c.mid);
            out.minus.w.push_back(c.wm);
        }
    }
    // both families integrate to exactly 1 (triangle area; global balance)
    for (DiscreteMeasure* dm : {&out.plus, &out.minus}) {
        const double s = dm->total();
        if (std::fabs(s - 1.0) > 1e-10)
            throw QuadratureFailure("quantize_density: cell masses drifted");
        dm->w.back() += 1.0 - s;
    }
    return out;
}

// --- transportation simplex -------------------------------------------------

TransportPlan solve_discrete_ot(const DiscreteMeasure& src,
                                const DiscreteMeasure& dst) {
    const int m = static_cast<int>(src.w.size());
    const int n = static_cast<int>(dst.w.size());
    if (m < 1 || n < 1 || m > 4096 || n > 4096 ||
        src.x.size() != src.w.size() || dst.x.size() != dst.w.size())
        throw InvalidParameter("solve_discrete_ot: need 1..4096 atoms per side");
    for (double v : src.w)
        if (!(v > 0.0))
            throw InvalidParameter("solve_discrete_ot: masses must be > 0");
    for (double v : dst.w)
        if (!(v > 0.0))
            throw InvalidParameter("solve_discrete_ot: masses must be > 0");
    const double S = src.total(), D = dst.total();
    if (std::fabs(S - D) > 1e-10 * std::max({S, D, 1.0}))
        throw Unbalanced("solve_discrete_ot: total masses differ");

    auto cost = [&](int i, int j) {
        return std::hypot(src.x[i].x1 - dst.x[j].x1,
                          src.x[i].x2 - dst.x[j].x2);
    };
    double cmax = 1e-30;
    {
        double xlo = src.x[0].x1, xhi = xlo, ylo = src.x[0].x2, yhi = ylo;
        auto fold = [&](const Point& p) {
            xlo = std::min(xlo, p.x1);
            xhi = std::max(xhi, p.x1);
            ylo = std::min(ylo, p.x2);
            yhi = std::max(yhi, p.x2);
        };
        for (const Point& p : src.x) fold(p);
        for (const Point& p : dst.x) fold(p);
        cmax = std::max(cmax, std::hypot(xhi - xlo, yhi - ylo));
    }

    // rescale demands onto the exact supply total, then perturb them so every
    // pivot moves a strictly positive amount of mass (the classic
    // anti-degeneracy device; it is stripped again after optimality)
    std::vector<double> s(src.w), d(dst.w);
    for (double& v : d) v *= S / D;
    const double delta = S * 1e-11 / (0.5 * double(n) * (n + 1.0) + 1.0);
    std::vector<double> sp(s), dp(d);
    for (int j = 0; j < n; ++j) dp[j] += delta * (j + 1);
    sp[m - 1] += delta * (0.5 * double(n) * (n + 1.0));

    const int N = m + n;
    std::vector<BasisArc> basis;
    basis.reserve(N - 1);
    { // north-west corner starting tree
        int i = 0, j = 0;
        double rs = sp[0], rd = dp[0];
        for (;;) {
            const double f = std::min(rs, rd);
            basis.push_back({i, j, f, cost(i, j)});
            rs -= f;
            rd -= f;
            if (i == m - 1 && j == n - 1) break;
            if (rs <= 0.0 && i < m - 1) {
                rs = sp[++i];
            } else if (j < n - 1) {
                rd = dp[++j];
            } else {
                rs = sp[++i];
            }
        }
    }

    std::vector<std::vector<int>> adj(N); // basis slots per node
    for (int p = 0; p < static_cast<int>(basis.size()); ++p) {
        adj[basis[p].i].push_back(p);
        adj[m + basis[p].j].push_back(p);
    }
    std::vector<double> pot(N);
    std::vector<int> parent(N, -1), parc(N, -1), order(N), seen(N, 0);
    int stamp = 0;
    auto rebuild = [&] {
        ++stamp;
        int head = 0, tail = 0;
        order[tail++] = 0;
        seen[0] = stamp;
        parent[0] = parc[0] = -1;
        pot[0] = 0.0;
        while (head < tail) {
            const int u = order[head++];
            for (const int p : adj[u]) {
                const BasisArc& a = basis[p];
                const int v = (u == a.i) ? m + a.j : a.i;
                if (seen[v] == stamp) continue;
                seen[v] = stamp;
                parent[v] = u;
                parc[v] = p;
                pot[v] = a.c - pot[u]; // u_i + v_j = c_ij on the tree
                order[tail++] = v;
            }
        }
        if (tail != N)
            throw NoConvergence("solve_discrete_ot: basis tree disconnected");
    };
    rebuild();

    // depth on demand from parent pointers
    auto depth_of = [&](int u) {
        int d0 = 0;
        for (int v = u; parent[v] >= 0; v = parent[v]) ++d0;
        return d0;
    };

    const double price_tol = 1e-12 * cmax;
    const long long MN = static_cast<long long>(m) * n;
    const long long BLOCK = 8192;
    long long scan = 0;
    const long long iter_cap = std::max(200000LL, 100LL * N);
    int iterations = 0;
    std::vector<std::pair<int, int>> cyc; // (slot, sign)
    for (;;) {
        // circular block pricing: take the most negative reduced cost in the
        // first block that contains one
        long long best_k = -1;
        double best_red = -price_tol;
        long long scanned = 0;
        while (scanned < MN) {
            const long long stop = std::min(BLOCK, MN - scanned);
            for (long long b = 0; b < stop; ++b) {
                const long long k = (scan + scanned + b) % MN;
                const int i = static_cast<int>(k / n);
                const int j = static_cast<int>(k % n);
                const double red = cost(i, j) - pot[i] - pot[m + j];
                if (red < best_red) {
                    best_red = red;
                    best_k = k;
                }
            }
            scanned += stop;
            if (best_k >= 0) break;
        }
        if (best_k < 0) break; // optimal
        scan = best_k + 1;
        if (++iterations > iter_cap)
            throw NoConvergence("solve_discrete_ot: pivot budget exhausted");

        const int ei = static_cast<int>(best_k / n);
        const int ej = static_cast<int>(best_k % n);
        // cycle: tree path from entering source ei to entering target m+ej.
        // Crossing an arc source->target ships the new flow backwards (-1),
        // target->source forwards (+1).
        cyc.clear();
        int ua = ei, ub = m + ej;
        int da = depth_of(ua), db = depth_of(ub);
        while (da > db) {
            const int p = parc[ua];
            cyc.push_back({p, ua == basis[p].i ? -1 : +1});
            ua = parent[ua];
            --da;
        }
        while (db > da) {
            const int p = parc[ub];
            cyc.push_back({p, ub == basis[p].i ? +1 : -1});
            ub = parent[ub];
            --db;
        }
        while (ua != ub) {
            const int pa = parc[ua];
            cyc.push_back({pa, ua == basis[pa].i ? -1 : +1});
            ua = parent[ua];
            const int pb = parc[ub];
            cyc.push_back({pb, ub == basis[pb].i ? +1 : -1});
            ub = parent[ub];
        }
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (const auto& [p, sg] : cyc)
            if (sg < 0 && basis[p].f < theta) {
                theta = basis[p].f;
                leave = p;
            }
        if (leave < 0)
            throw NoConvergence("solve_discrete_ot: unbounded pivot cycle");
        for (const auto& [p, sg] : cyc) basis[p].f += sg * theta;
        // swap the leaving slot for the entering arc
        const BasisArc old = basis[leave];
        auto drop = [&](int node) {
            auto& l = adj[node];
            l.erase(std::find(l.begin(), l.end(), leave));
        };
        drop(old.i);
        drop(m + old.j);
        basis[leave] = {ei, ej, theta, cost(ei, ej)};
        adj[ei].push_back(leave);
        adj[m + ej].push_back(leave);
        rebuild();
    }

    // certificate: worst reduced cost over all arcs under the final potentials
    double min_red = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            min_red = std::min(min_red, cost(i, j) - pot[i] - pot[m + j]);

    // re-derive the flows on the final tree from the unperturbed masses by
    // peeling leaves, which removes the anti-degeneracy offsets exactly
    std::vector<double> excess(N), flow(basis.size(), 0.0);
    for (int i = 0; i < m; ++i) excess[i] = s[i];
    for (int j = 0; j < n; ++j) excess[m + j] = -d[j];
    std::vector<int> deg(N, 0), used(basis.size(), 0);
    for (int p = 0; p < static_cast<int>(basis.size()); ++p) {
        ++deg[basis[p].i];
        ++deg[m + basis[p].j];
    }
    std::vector<int> leaves;
    leaves.reserve(N);
    for (int u = 0; u < N; ++u)
        if (deg[u] == 1) leaves.push_back(u);
    for (std::size_t h = 0; h < leaves.size(); ++h) {
        const int u = leaves[h];
        if (deg[u] != 1) continue;
        int slot = -1;
        for (const int p : adj[u])
            if (!used[p]) {
                slot = p;
                break;
            }
        if (slot < 0) continue;
        const BasisArc& a = basis[slot];
        const double f = (u == a.i) ? excess[u] : -excess[u];
        flow[slot] = f;
        used[slot] = 1;
        excess[a.i] -= f;
        excess[m + a.j] += f;
        const int v = (u == a.i) ? m + a.j : a.i;
        --deg[u];
        if (--deg[v] == 1) leaves.push_back(v);
    }

    TransportPlan plan;
    plan.iterations = iterations;
    plan.max_cs_violation = std::max(0.0, -min_red);
    plan.u.assign(pot.begin(), pot.begin() + m);
    plan.v.assign(pot.begin() + m, pot.end());
    std::vector<double> row(m, 0.0), colsum(n, 0.0);
    for (int p = 0; p < static_cast<int>(basis.size()); ++p) {
        const double f = std::max(0.0, flow[p]); // perturbation leftovers
        if (f <= 0.0) continue;
        plan.from.push_back(basis[p].i);
        plan.to.push_back(basis[p].j);
        plan.flow.push_back(f);
        plan.cost += f * basis[p].c;
        row[basis[p].i] += f;
        colsum[basis[p].j] += f;
    }
    for (int i = 0; i < m; ++i)
        plan.max_infeasibility =
            std::max(plan.max_infeasibility, std::fabs(row[i] - src.w[i]));
    for (int j = 0; j < n; ++j)
        plan.max_infeasibility =
            std::max(plan.max_infeasibility, std::fabs(colsum[j] - dst.w[j]));
    return plan;
}

// --- potential audit --------------------------------------------------------

GradientAudit gradient_constraints_audit(const DensityInstance& inst,
                                         int samples) {
    require_single(inst, "gradient_constraints_audit");
    if (samples < 10000)
        throw InvalidParameter(
            "gradient_constraints_audit: need at least 1e4 samples");
    const auto& cfg = inst.cfg;
    const double h = 1e-6, margin = 1e-2;
    auto halton = [](std::size_t idx, int base) {
        double f = 1.0, r = 0.0;
        for (std::size_t i = idx; i > 0; i /= base) {
            f /= base;
            r += f * static_cast<double>(i % base);
        }
        return r;
    };
    std::vector<double> viol(samples), active(samples);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t k) {
        const double u = halton(k + 1, 2), v = halton(k + 1, 3);
        const double x1 = -1.0 + 3.0 * margin + (2.0 - 4.0 * margin) * u;
        const double x2 = (margin + (1.0 - 2.0 * margin) * v) * 0.5 * (x1 + 1.0);
        const RayCoord rc = point_to_ray({x1, x2}, cfg);
        auto du = [&](const Point& p) {
            return u_increment(rc, point_to_ray(p, cfg), cfg);
        };
        const double g1 = (du({x1 + h, x2}) - du({x1 - h, x2})) / (2.0 * h);
        const double g2 = (du({x1, x2 + h}) - du({x1, x2 - h})) / (2.0 * h);
        const double dev = std::hypot(g1, g2) - 1.0;
        viol[k] = dev;
        active[k] = sigma(rc, inst) > 1e-6
                        ? std::fabs(dev)
                        : -std::numeric_limits<double>::infinity();
    });
    GradientAudit audit;
    audit.max_violation = *std::max_element(viol.begin(), viol.end());
    audit.max_active_violation =
        std::max(0.0, *std::max_element(active.begin(), active.end()));
    // along each ray u is exactly linear with slope -1; the finite difference
    // only probes the coordinate solves
    const double hr = 1e-4;
    std::vector<double> ray_err(128);
    parallel_for(ray_err.size(), [&](std::size_t k) {
        const double a = 0.02 + 0.96 * halton(k + 1, 5);
        const RayCoord rc{0.37, a};
        const Point x = ray_to_point(rc, cfg);
        const auto e = unit_ray_direction(a, cfg);
        const RayCoord pp = point_to_ray({x.x1 + hr * e[0], x.x2 + hr * e[1]}, cfg);
        const RayCoord pm = point_to_ray({x.x1 - hr * e[0], x.x2 - hr * e[1]}, cfg);
        const double dds =
            (u_increment(rc, pp, cfg) - u_increment(rc, pm, cfg)) / (2.0 * hr);
        ray_err[k] = std::fabs(dds + 1.0);
    });
    audit.max_ray_derivative_error =
        *std::max_element(ray_err.begin(), ray_err.end());
    return audit;
}

// --- certificate ------------------------------------------------------------

DualityCertificate make_certificate(const DensityInstance& inst, int side) {
    DualityCertificate cert;
    cert.primal_cost = monotone_ray_plan_cost(inst);
    cert.dual_value = dual_objective(inst);
    cert.gap = cert.primal_cost - cert.dual_value;
    const Quantization q = quantize_density(inst, side);
    cert.lp_cost = solve_discrete_ot(q.plus, q.minus).cost;
    cert.resolution = side;
    cert.residuals = weak_pde_residual(inst, default_bump_battery());
    return cert;
}

std::string certificate_json(const DualityCertificate& cert,
                             const DensityInstance& inst) {
    nlohmann::ordered_json j;
    j["instance"] = nlohmann::ordered_json::parse(instance_to_json(inst));
    j["primal_cost"] = cert.primal_cost;
    j["dual_value"] = cert.dual_value;
    j["gap"] = cert.gap;
    j["lp_cost"] = cert.lp_cost;
    j["resolution"] = cert.resolution;
    j["residuals"] = cert.residuals;
    return j.dump(2);
}

} // namespace td
