#include "mipd/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace mipd {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    // into (−π, π]
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

struct Sample {
    double theta;
    cplx z;
};

void require_above_floor(const Sample &s, double strength, double asymmetry) {
    if (std::abs(s.z) < kPathFloor) {
        std::ostringstream msg;
        msg << "phase path ill-defined: |z| = " << std::abs(s.z) << " at theta=" << s.theta << " (C=" << strength
            << ", A=" << asymmetry << ")";
        throw IllDefinedPathError(msg.str());
    }
}

}  // namespace

PhaseCurve unwrap_phase(double strength, double asymmetry, Direction d, int resolution, const SignalFn &signal) {
    if (resolution < kMinCurveResolution) {
        throw UsageError("phase curve resolution must be >= " + std::to_string(kMinCurveResolution));
    }
    auto eval = [&](double th) {
        Sample s{th, signal({strength, asymmetry, th, d})};
        require_above_floor(s, strength, asymmetry);
        return s;
    };

    std::vector<Sample> coarse;
    coarse.reserve(resolution);
    for (int i = 0; i < resolution; i++) {
        coarse.push_back(eval(i == resolution - 1 ? kPi : kPi * i / (resolution - 1)));
    }

    const double min_width = kPi * std::ldexp(1.0, -40);
    std::vector<Sample> fine{coarse.front()};
    std::function<void(const Sample &, const Sample &)> refine = [&](const Sample &a, const Sample &b) {
        if (std::abs(wrap_angle(std::arg(b.z) - std::arg(a.z))) < kPi / 2) {
            fine.push_back(b);
            return;
        }
        if (b.theta - a.theta < min_width) {
            std::ostringstream msg;
            msg << "phase path ill-defined: unresolved phase jump near theta=" << a.theta;
            throw IllDefinedPathError(msg.str());
        }
        const Sample mid = eval(0.5 * (a.theta + b.theta));
        refine(a, mid);
        refine(mid, b);
    };
    for (std::size_t i = 1; i < coarse.size(); i++) {
        refine(coarse[i - 1], coarse[i]);
    }

    PhaseCurve curve;
    curve.theta.reserve(fine.size());
    curve.z.reserve(fine.size());
    curve.chi_unwrapped.reserve(fine.size());
    double unwrapped = 0.0;
    for (std::size_t i = 0; i < fine.size(); i++) {
        if (i > 0) {
            unwrapped += wrap_angle(std::arg(fine[i].z) - std::arg(fine[i - 1].z));
        }
        curve.theta.push_back(fine[i].theta);
        curve.z.push_back(fine[i].z);
        curve.chi_unwrapped.push_back(unwrapped / 2);
    }
    const double turns = curve.chi_unwrapped.back() / kPi;
    if (std::abs(turns - std::round(turns)) <= kWindingTolerance) {
        curve.winding = static_cast<int>(std::lround(turns));
    }
    return curve;
}

int winding_number(double strength, double asymmetry, Direction d, int resolution) {
    const PhaseCurve curve = unwrap_phase(strength, asymmetry, d, resolution);
    if (!curve.winding) {
        std::ostringstream msg;
        msg << "non-integral winding " << curve.chi_unwrapped.back() / kPi << " at C=" << strength
            << " A=" << asymmetry;
        throw IllDefinedPathError(msg.str());
    }
    return *curve.winding;
}

double accumulated_phase(std::span<const cplx> loop) {
    double total = 0.0;
    for (std::size_t i = 0; i < loop.size(); i++) {
        const cplx &next = loop[(i + 1) % loop.size()];
        total += wrap_angle(std::arg(next) - std::arg(loop[i]));
    }
    return total;
}

double loop_phase_in_strength_asymmetry(double center_strength, double center_asymmetry, double radius, int points,
                                        double theta, Direction d) {
    std::vector<cplx> zs;
    zs.reserve(points);
    for (int k = 0; k < points; k++) {
        const double phi = 2.0 * kPi * k / points;
        zs.push_back(asymptotic_z(
            {center_strength + radius * std::cos(phi), center_asymmetry + radius * std::sin(phi), theta, d}));
    }
    return accumulated_phase(zs);
}

// ---------------------------------------------------------------------------

namespace {

struct Point2 {
    double x;
    double y;
};

using Residual2 = std::function<cplx(Point2)>;
using Domain2 = std::function<bool(Point2)>;

struct Solve2Result {
    Point2 at;
    double residual;
    int iterations;
    bool converged;
};

// Derivative-free descent on |f|², used when Newton stalls.
Point2 nelder_mead(const Residual2 &f, const Domain2 &inside, Point2 start, double size, int max_iterations) {
    auto cost = [&](Point2 p) { return inside(p) ? std::norm(f(p)) : INFINITY; };
    std::array<Point2, 3> s{start, Point2{start.x + size, start.y}, Point2{start.x, start.y + size}};
    std::array<double, 3> c{cost(s[0]), cost(s[1]), cost(s[2])};
    for (int it = 0; it < max_iterations; it++) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return c[a] < c[b]; });
        const int best = order[0], mid = order[1], worst = order[2];
        const Point2 centroid{0.5 * (s[best].x + s[mid].x), 0.5 * (s[best].y + s[mid].y)};
        auto along = [&](double t) {
            return Point2{centroid.x + t * (s[worst].x - centroid.x), centroid.y + t * (s[worst].y - centroid.y)};
        };
        const Point2 refl = along(-1.0);
        const double c_refl = cost(refl);
        if (c_refl < c[best]) {
            const Point2 exp = along(-2.0);
            const double c_exp = cost(exp);
            if (c_exp < c_refl) {
                s[worst] = exp, c[worst] = c_exp;
            } else {
                s[worst] = refl, c[worst] = c_refl;
            }
        } else if (c_refl < c[mid]) {
            s[worst] = refl, c[worst] = c_refl;
        } else {
            const Point2 con = along(0.5);
            const double c_con = cost(con);
            if (c_con < c[worst]) {
                s[worst] = con, c[worst] = c_con;
            } else {
                for (int k : {mid, worst}) {
                    s[k] = Point2{0.5 * (s[k].x + s[best].x), 0.5 * (s[k].y + s[best].y)};
                    c[k] = cost(s[k]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(c.begin(), c.end()) - c.begin());
    return s[best];
}

// Damped Newton on the two real equations Re f = Im f = 0.
Solve2Result solve2(const Residual2 &f, const Domain2 &inside, Point2 x, const RootOptions &opts,
                    bool &left_domain) {
    left_domain = false;
    const double h = opts.jacobian_step;
    double r = std::abs(f(x));
    int it = 0;
    bool used_fallback = false;
    for (; it < opts.max_iterations && r > kRootTolerance * 1e-3; it++) {
        const cplx fx = f(x);
        const cplx dfx = (f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2 * h);
        const cplx dfy = (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2 * h);
        // [Re dfx  Re dfy] [dx]   [Re fx]
        // [Im dfx  Im dfy] [dy] = −[Im fx]
        const double det = dfx.real() * dfy.imag() - dfy.real() * dfx.imag();
        bool stepped = false;
        if (det != 0.0 && std::isfinite(det)) {
            const double dx = -(fx.real() * dfy.imag() - dfy.real() * fx.imag()) / det;
            const double dy = -(dfx.real() * fx.imag() - fx.real() * dfx.imag()) / det;
            bool saw_outside = false;
            for (double lambda = 1.0; lambda >= 1.0 / 1024; lambda /= 2) {
                const Point2 trial{x.x + lambda * dx, x.y + lambda * dy};
                if (!inside(trial)) {
                    saw_outside = true;
                    continue;
                }
                const double rt = std::abs(f(trial));
                if (rt < (1.0 - 1e-4 * lambda) * r) {
                    x = trial;
                    r = rt;
                    stepped = true;
                    break;
                }
            }
            if (!stepped && saw_outside && r > kRootTolerance) {
                left_domain = true;
            }
        }
        if (!stepped) {
            if (r <= kRootTolerance) {
                break;  // at the floating-point floor
            }
            if (used_fallback) {
                break;
            }
            used_fallback = true;
            const Point2 nm = nelder_mead(f, inside, x, 0.05, 200);
            const double rn = std::abs(f(nm));
            if (rn < r) {
                x = nm;
                r = rn;
                left_domain = false;
            } else {
                break;
            }
        }
    }
    return Solve2Result{x, r, it, r <= kRootTolerance};
}

CriticalPoint finish(const Solve2Result &res, CriticalPoint cp, bool left_domain, const char *mode) {
    cp.residual = res.residual;
    cp.iterations = res.iterations;
    if (!res.converged) {
        std::ostringstream msg;
        msg.precision(10);
        msg << mode << ": no convergence, best |z| = " << res.residual << " at C=" << cp.strength
            << " A=" << cp.asymmetry << " theta=" << cp.theta;
        if (left_domain) {
            throw OutOfDomainError(msg.str() + " (root lies outside C >= 0, theta in [0, pi])");
        }
        throw NoConvergenceError(msg.str(), cp);
    }
    return cp;
}

}  // namespace

CriticalPoint find_critical_point(double seed_strength, double seed_theta, double asymmetry, Direction d,
                                  const RootOptions &opts) {
    if (seed_strength < 0 || seed_theta < 0 || seed_theta > kPi) {
        throw OutOfDomainError("critical point seed outside C >= 0, theta in [0, pi]");
    }
    const Residual2 f = [&](Point2 p) { return asymptotic_z({p.x, asymmetry, p.y, d}); };
    const Domain2 inside = [](Point2 p) { return p.x >= 0.0 && p.y >= 0.0 && p.y <= kPi; };
    bool left = false;
    const Solve2Result res = solve2(f, inside, {seed_strength, seed_theta}, opts, left);
    CriticalPoint cp{res.at.x, asymmetry, res.at.y, d, 0.0, 0};
    return finish(res, cp, left, "find_critical_point");
}

CriticalPoint find_critical_point_at_theta(double seed_strength, double seed_asymmetry, double theta, Direction d,
                                           const RootOptions &opts) {
    if (seed_strength < 0 || theta < 0 || theta > kPi) {
        throw OutOfDomainError("critical point seed outside C >= 0, theta in [0, pi]");
    }
    const Residual2 f = [&](Point2 p) { return asymptotic_z({p.x, p.y, theta, d}); };
    const Domain2 inside = [](Point2 p) { return p.x >= 0.0; };
    bool left = false;
    const Solve2Result res = solve2(f, inside, {seed_strength, seed_asymmetry}, opts, left);
    CriticalPoint cp{res.at.x, res.at.y, theta, d, 0.0, 0};
    return finish(res, cp, left, "find_critical_point_at_theta");
}

const char *stop_name(CriticalLine::Stop s) {
    switch (s) {
        case CriticalLine::Stop::RangeEnd:
            return "range-end";
        case CriticalLine::Stop::Stalled:
            return "stalled";
        case CriticalLine::Stop::LeftDomain:
            return "left-domain";
    }
    return "unknown";
}

CriticalLine trace_critical_line(double a_start, double a_end, Direction d, double seed_strength, double seed_theta,
                                 const TraceOptions &opts) {
    CriticalLine line;
    line.points.push_back(find_critical_point(seed_strength, seed_theta, a_start, d, opts.root));
    if (a_start == a_end) {
        return line;
    }
    const double dir = a_end > a_start ? 1.0 : -1.0;
    double h = opts.initial_step;
    double a = a_start;
    while (dir * (a_end - a) > 0) {
        const double a_next = dir * (a + dir * h - a_end) > 0 ? a_end : a + dir * h;
        const CriticalPoint &last = line.points.back();
        double c_pred = last.strength;
        double t_pred = last.theta;
        if (line.points.size() >= 2) {
            const CriticalPoint &prev = line.points[line.points.size() - 2];
            const double slope_scale = (a_next - last.asymmetry) / (last.asymmetry - prev.asymmetry);
            c_pred += slope_scale * (last.strength - prev.strength);
            t_pred += slope_scale * (last.theta - prev.theta);
        }
        c_pred = std::max(c_pred, 0.0);
        t_pred = std::clamp(t_pred, 0.0, kPi);

        bool ok = false;
        bool outside = false;
        try {
            const CriticalPoint cp = find_critical_point(c_pred, t_pred, a_next, d, opts.root);
            const double jump = std::hypot(cp.strength - c_pred, cp.theta - t_pred);
            if (jump <= 10.0 * std::abs(a_next - a) + 1e-3) {
                line.points.push_back(cp);
                a = a_next;
                ok = true;
            }
        } catch (const OutOfDomainError &) {
            outside = true;
        } catch (const NoConvergenceError &) {
        }
        if (ok) {
            h = std::min(opts.initial_step, 2 * h);
            continue;
        }
        h /= 2;
        if (h < opts.min_step) {
            line.stop = outside ? CriticalLine::Stop::LeftDomain : CriticalLine::Stop::Stalled;
            return line;
        }
    }
    line.stop = CriticalLine::Stop::RangeEnd;
    return line;
}

// ---------------------------------------------------------------------------

void AxisSpec::validate() const {
    if (count < 2) {
        throw UsageError("axis count must be >= 2");
    }
    if (!(start < end)) {
        throw UsageError("axis start must be < end");
    }
}

ScanGrid scan_grid(const AxisSpec &strength, const AxisSpec &asymmetry, double theta, Direction d,
                   std::size_t threads) {
    strength.validate();
    asymmetry.validate();
    Measurement probe{0.0, 0.0, theta, d};
    probe.validate();
    if (strength.start < 0) {
        throw UsageError("strength axis must start at C >= 0");
    }
    ScanGrid grid{strength, asymmetry, theta, d, {}};
    const std::size_t n = static_cast<std::size_t>(strength.count) * asymmetry.count;
    grid.cells.resize(n);
    parallel_for(
        n,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; k++) {
                const int ia = static_cast<int>(k / strength.count);
                const int ic = static_cast<int>(k % strength.count);
                grid.cells[k] = asymptotic_signal({strength.at(ic), asymmetry.at(ia), theta, d});
            }
        },
        threads);
    return grid;
}

std::vector<GridMinimum> local_minima(const ScanGrid &grid, double below) {
    std::vector<GridMinimum> out;
    const int na = grid.asymmetry.count;
    const int nc = grid.strength.count;
    for (int ia = 0; ia < na; ia++) {
        for (int ic = 0; ic < nc; ic++) {
            const double v = std::abs(grid.at(ia, ic).z);
            if (!(v < below)) {
                continue;
            }
            bool minimum = true;
            for (int da = -1; da <= 1 && minimum; da++) {
                for (int dc = -1; dc <= 1; dc++) {
                    const int ja = ia + da, jc = ic + dc;
                    if ((da == 0 && dc == 0) || ja < 0 || jc < 0 || ja >= na || jc >= nc) {
                        continue;
                    }
                    const double w = std::abs(grid.at(ja, jc).z);
                    const bool earlier = ja * nc + jc < ia * nc + ic;
                    if (w < v || (earlier && w == v)) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (minimum) {
                out.push_back(GridMinimum{ia, ic, grid.strength.at(ic), grid.asymmetry.at(ia), v});
            }
        }
    }
    return out;
}

}  // namespace mipd
