#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lsseg/field.hpp"
#include "lsseg/region.hpp"
#include "lsseg/spf.hpp"

namespace lsseg {

/// Initial contour geometry in pixel coordinates. Pixel centers on the
/// boundary count as inside.
struct InitShape {
    enum class Kind { rectangle, circle };
    Kind kind = Kind::rectangle;
    // rectangle: [x0, x1] x [y0, y1]; circle: center (cx, cy), radius r
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double cx = 0, cy = 0, r = 0;

    static InitShape rectangle(double x0, double y0, double x1, double y1) {
        InitShape s;
        s.kind = Kind::rectangle;
        s.x0 = x0; s.y0 = y0; s.x1 = x1; s.y1 = y1;
        return s;
    }

    static InitShape circle(double cx, double cy, double r) {
        InitShape s;
        s.kind = Kind::circle;
        s.cx = cx; s.cy = cy; s.r = r;
        return s;
    }

    bool contains(int x, int y) const {
        if (kind == Kind::rectangle)
            return x >= x0 && x <= x1 && y >= y0 && y <= y1;
        const double dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= r * r;
    }

    void validate(int width, int height) const {
        bool ok;
        if (kind == Kind::rectangle)
            ok = x0 >= 0 && y0 >= 0 && x1 <= width - 1 && y1 <= height - 1 && x0 <= x1 && y0 <= y1;
        else
            ok = r > 0 && cx - r >= 0 && cx + r <= width - 1 && cy - r >= 0 && cy + r <= height - 1;
        if (!ok)
            throw std::invalid_argument("init geometry out of image bounds");
    }

    /// Centered rectangle spanning 60% of each dimension.
    static InitShape default_for(int width, int height) {
        return rectangle(0.2 * width, 0.2 * height, 0.8 * width - 1.0, 0.8 * height - 1.0);
    }
};

/// All solver knobs. Defaults target 8-bit images normalized to [0,1].
/// `mu` and `nu` are accepted for interface parity with the published
/// parameter list but drive no update rule.
struct ModelParams {
    double alpha = 20.0;      // evolution speed
    double w = 0.5;           // hybrid weight: 1 = all-global, 0 = all-local
    double epsilon = 1.0;     // Heaviside/Dirac width
    double sigma_fit = 3.0;   // local fitting kernel width
    int radius_fit = 9;       // local fitting kernel truncation radius
    double sigma_reg = 1.0;   // Gaussian regularization of phi; 0 disables
    double dt = 1.0;          // time step
    double eta = 1e-8;        // gradient magnitude guard (inside the sqrt)
    double conv_T = 0.01;     // convergence threshold on the relative update
    int max_iter = 300;
    bool binary_step = true;                // snap phi to +/- c0 before smoothing
    std::optional<InitShape> init;          // empty: centered rectangle at 60%
    double c0 = 1.0;                        // initial level set magnitude

    // CV baseline extras
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double mu_cv = 0.0;       // curvature (length) weight of the CV model

    // accepted, unused
    double mu = 0.0;
    double nu = 0.0;

    void validate() const {
        if (alpha <= 0.0) throw std::invalid_argument("params: alpha must be > 0");
        if (w < 0.0 || w > 1.0) throw std::invalid_argument("params: w must be in [0, 1]");
        if (epsilon <= 0.0) throw std::invalid_argument("params: epsilon must be > 0");
        if (sigma_fit <= 0.0) throw std::invalid_argument("params: sigma_fit must be > 0");
        if (radius_fit < 1) throw std::invalid_argument("params: radius_fit must be >= 1");
        if (sigma_reg < 0.0) throw std::invalid_argument("params: sigma_reg must be >= 0");
        if (dt <= 0.0) throw std::invalid_argument("params: dt must be > 0");
        if (eta < 0.0) throw std::invalid_argument("params: eta must be >= 0");
        if (conv_T <= 0.0) throw std::invalid_argument("params: conv_T must be > 0");
        if (max_iter < 1) throw std::invalid_argument("params: max_iter must be >= 1");
        if (c0 <= 0.0) throw std::invalid_argument("params: c0 must be > 0");
        if (lambda1 <= 0.0 || lambda2 <= 0.0)
            throw std::invalid_argument("params: lambda1/lambda2 must be > 0");
        if (mu_cv < 0.0) throw std::invalid_argument("params: mu_cv must be >= 0");
    }
};

/// Per-run record: iteration count, per-iteration residuals, convergence
/// flag, wall time, and the noise seed when one applies.
struct RunReport {
    int iterations = 0;
    std::vector<double> residuals;
    bool converged = false;
    double wall_seconds = 0.0;
    std::optional<uint64_t> seed;
};

struct RunResult {
    ScalarField phi;
    RunReport report;
};

/// Optional instrumentation of a run. `stats_override` edits the region
/// statistics each iteration (test harness hook); `on_iteration` sees the
/// level set after each full iteration update.
struct RunHooks {
    std::function<void(RegionStats&)> stats_override;
    std::function<void(int, const ScalarField&)> on_iteration;
};

/// Binary constant initialization: +c0 inside the geometry, -c0 outside.
inline ScalarField init_phi(int width, int height, const InitShape& init, double c0) {
    init.validate(width, height);
    ScalarField phi(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            phi.at(x, y) = init.contains(x, y) ? c0 : -c0;
    return phi;
}

/// sqrt(dx^2 + dy^2 + eta) with central differences (h = 1) and replicate
/// boundary padding. eta keeps the value positive on flat regions.
inline ScalarField grad_mag(const ScalarField& phi, double eta) {
    if (eta < 0.0)
        throw std::invalid_argument("grad_mag: eta must be >= 0");
    const int w = phi.width(), h = phi.height();
    ScalarField g(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dx = 0.5 * (phi.at(detail::clamp_index(x + 1, w), y) -
                               phi.at(detail::clamp_index(x - 1, w), y));
            double dy = 0.5 * (phi.at(x, detail::clamp_index(y + 1, h)) -
                               phi.at(x, detail::clamp_index(y - 1, h)));
            g.at(x, y) = std::sqrt(dx * dx + dy * dy + eta);
        }
    }
    return g;
}

/// Forward-Euler update phi + dt * alpha * spf * |grad phi|.
inline ScalarField step(const ScalarField& phi, const SpfField& spf, const ModelParams& params) {
    if (!phi.same_dims(spf.values))
        throw std::invalid_argument("step: phi and spf dimensions differ");
    ScalarField g = grad_mag(phi, params.eta);
    ScalarField out(phi.width(), phi.height());
    for (size_t i = 0; i < phi.size(); ++i)
        out[i] = phi[i] + params.dt * params.alpha * spf.values[i] * g[i];
    return out;
}

/// Selective-binary snap (phi -> +/- c0, sign(0) = +1) followed by Gaussian
/// smoothing, each applied only when enabled by the parameters.
inline ScalarField regularize(const ScalarField& phi, const ModelParams& params) {
    ScalarField out = phi;
    if (params.binary_step) {
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = out[i] >= 0.0 ? params.c0 : -params.c0;
    }
    if (params.sigma_reg > 0.0) {
        GaussianKernel k = make_kernel(params.sigma_reg, kernel_radius_for(params.sigma_reg));
        out = convolve(out, k);
    }
    return out;
}

/// Relative-update convergence test: residual = max|new - old| over
/// max(max|old|, 1e-12), converged iff residual < T.
inline std::pair<bool, double> converged(const ScalarField& phi_new, const ScalarField& phi_old,
                                         double T) {
    if (!phi_new.same_dims(phi_old))
        throw std::invalid_argument("converged: dimension mismatch");
    double num = 0.0;
    for (size_t i = 0; i < phi_new.size(); ++i) {
        double d = std::fabs(phi_new[i] - phi_old[i]);
        num = d > num ? d : num;
    }
    double den = std::max(phi_old.max_abs(), 1e-12);
    double residual = num / den;
    return {residual < T, residual};
}

/// Curvature div(grad phi / |grad phi|) via central differences, |grad phi|
/// floored at 1e-8.
inline ScalarField curvature(const ScalarField& phi) {
    const int w = phi.width(), h = phi.height();
    ScalarField nx(w, h), ny(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dx = 0.5 * (phi.at(detail::clamp_index(x + 1, w), y) -
                               phi.at(detail::clamp_index(x - 1, w), y));
            double dy = 0.5 * (phi.at(x, detail::clamp_index(y + 1, h)) -
                               phi.at(x, detail::clamp_index(y - 1, h)));
            double norm = std::max(std::sqrt(dx * dx + dy * dy), 1e-8);
            nx.at(x, y) = dx / norm;
            ny.at(x, y) = dy / norm;
        }
    }
    ScalarField k(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dnx = 0.5 * (nx.at(detail::clamp_index(x + 1, w), y) -
                                nx.at(detail::clamp_index(x - 1, w), y));
            double dny = 0.5 * (ny.at(x, detail::clamp_index(y + 1, h)) -
                                ny.at(x, detail::clamp_index(y - 1, h)));
            k.at(x, y) = dnx + dny;
        }
    }
    return k;
}

/// CV data force -delta(phi) (lambda1 (I - c1)^2 - lambda2 (I - c2)^2).
inline ScalarField cv_data_force(const ScalarField& image, const ScalarField& phi,
                                 double c1, double c2, double lambda1, double lambda2,
                                 double epsilon) {
    ScalarField f(image.width(), image.height());
    for (size_t i = 0; i < image.size(); ++i) {
        double d1 = image[i] - c1;
        double d2 = image[i] - c2;
        f[i] = -dirac(phi[i], epsilon) * (lambda1 * d1 * d1 - lambda2 * d2 * d2);
    }
    return f;
}

namespace detail {

// One region side emptied. Tolerated on the first iteration (the stats fall
// back to the global mean); afterwards the run aborts.
inline void handle_degenerate(RegionStats& stats, int iteration) {
    if (!stats.degenerate()) return;
    if (iteration > 1) {
        const char* side = stats.inside_empty ? "inside" : "outside";
        throw std::runtime_error("degenerate region (" + std::string(side) +
                                 " empty) at iteration " + std::to_string(iteration));
    }
    stats.inside_empty = false;
    stats.outside_empty = false;
}

// Shared SPF-driven evolution loop (Eq.-style: d phi/dt = spf * alpha *
// |grad phi|). The models differ only in how the pressure field is built.
template <typename SpfBuilder>
RunResult run_spf_model(const ScalarField& image, const ModelParams& params,
                        SpfBuilder&& build_spf, const RunHooks& hooks) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const InitShape init = params.init ? *params.init
                                       : InitShape::default_for(image.width(), image.height());
    ScalarField phi = init_phi(image.width(), image.height(), init, params.c0);

    RunReport report;
    for (int iter = 1; iter <= params.max_iter; ++iter) {
        RegionStats stats = region_stats(image, phi);
        handle_degenerate(stats, iter);
        if (hooks.stats_override) hooks.stats_override(stats);

        SpfField spf = build_spf(image, phi, stats);
        ScalarField stepped = step(phi, spf, params);

        // A zero-velocity step ends the run before regularization, so a
        // constant image converges at iteration 1 with the initial mask
        // intact. Otherwise convergence compares successive regularized
        // iterates; once the mask is stationary that residual is exactly 0.
        auto [conv_step, res_step] = converged(stepped, phi, params.conv_T);
        report.iterations = iter;
        if (conv_step) {
            report.residuals.push_back(res_step);
            report.converged = true;
            phi = std::move(stepped);
            if (hooks.on_iteration) hooks.on_iteration(iter, phi);
            break;
        }

        ScalarField next = regularize(stepped, params);
        auto [conv_reg, res_reg] = converged(next, phi, params.conv_T);
        report.residuals.push_back(res_reg);
        report.converged = conv_reg;
        phi = std::move(next);
        if (hooks.on_iteration) hooks.on_iteration(iter, phi);
        if (conv_reg) break;
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RunResult{std::move(phi), std::move(report)};
}

}  // namespace detail

/// Hybrid-SPF evolution: per iteration, region statistics, local fitting
/// means and energies, global/local/hybrid pressure fields, one explicit
/// step, then selective-binary/Gaussian regularization until the update
/// falls below conv_T or max_iter is reached.
inline RunResult run_hzspf(const ScalarField& image, const ModelParams& params,
                           const RunHooks& hooks = {}) {
    GaussianKernel fit_kernel = make_kernel(params.sigma_fit, params.radius_fit);
    return detail::run_spf_model(
        image, params,
        [&](const ScalarField& img, const ScalarField& phi, const RegionStats& stats) {
            LocalFields lf = local_fit(img, phi, fit_kernel, params.epsilon);
            local_energies(img, phi, lf, fit_kernel, params.epsilon);
            SpfField g = spf_global(img, stats);
            SpfField l = spf_local(lf.e1, lf.e2);
            return spf_hybrid(g, l, params.w);
        },
        hooks);
}

/// SBGFRLS baseline: same loop with the mean-midpoint pressure field.
inline RunResult run_sbgfrls(const ScalarField& image, const ModelParams& params,
                             const RunHooks& hooks = {}) {
    return detail::run_spf_model(
        image, params,
        [](const ScalarField& img, const ScalarField&, const RegionStats& stats) {
            return spf_sbgfrls(img, stats);
        },
        hooks);
}

/// CV baseline: explicit stepping of the two-phase data force plus an
/// optional curvature (length) term, with Heaviside-weighted region means.
inline RunResult run_cv(const ScalarField& image, const ModelParams& params,
                        const RunHooks& hooks = {}) {
    params.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const InitShape init = params.init ? *params.init
                                       : InitShape::default_for(image.width(), image.height());
    ScalarField phi = init_phi(image.width(), image.height(), init, params.c0);

    RunReport report;
    for (int iter = 1; iter <= params.max_iter; ++iter) {
        RegionStats crisp = region_stats(image, phi);
        detail::handle_degenerate(crisp, iter);

        double sum_h = 0.0, sum_ih = 0.0, sum_g = 0.0, sum_ig = 0.0;
        for (size_t i = 0; i < image.size(); ++i) {
            double hv = heaviside(phi[i], params.epsilon);
            sum_h += hv;
            sum_ih += image[i] * hv;
            sum_g += 1.0 - hv;
            sum_ig += image[i] * (1.0 - hv);
        }
        double c1 = sum_ih / sum_h;
        double c2 = sum_ig / sum_g;

        ScalarField force = cv_data_force(image, phi, c1, c2, params.lambda1, params.lambda2,
                                          params.epsilon);
        if (params.mu_cv > 0.0) {
            ScalarField kappa = curvature(phi);
            for (size_t i = 0; i < force.size(); ++i)
                force[i] += params.mu_cv * dirac(phi[i], params.epsilon) * kappa[i];
        }

        ScalarField stepped(phi.width(), phi.height());
        for (size_t i = 0; i < phi.size(); ++i)
            stepped[i] = phi[i] + params.dt * force[i];

        auto [conv, residual] = converged(stepped, phi, params.conv_T);
        report.residuals.push_back(residual);
        report.iterations = iter;
        report.converged = conv;

        phi = std::move(stepped);
        if (hooks.on_iteration) hooks.on_iteration(iter, phi);
        if (conv) break;
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RunResult{std::move(phi), std::move(report)};
}

}  // namespace lsseg
