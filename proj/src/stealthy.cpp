#include "hud/stealthy.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hud/errors.hpp"

namespace hud {

namespace {

// Short-range repulsion u(t) = (1 - t/sigma)^3 for t < sigma: C2 at the core
// edge, zero outside, so a feasible final state carries no penalty at all.
struct PairPenalty {
    double sigma;
    double weight;

    double value(double r) const {
        if (sigma <= 0.0 || r >= sigma) return 0.0;
        const double t = 1.0 - r / sigma;
        return weight * t * t * t;
    }
    // du/dr
    double derivative(double r) const {
        if (sigma <= 0.0 || r >= sigma) return 0.0;
        const double t = 1.0 - r / sigma;
        return -3.0 * weight * t * t / sigma;
    }
};

}  // namespace

void StealthyTargetSpec::validate() const {
    if (n_points < 1) throw InvalidArgument("N must be >= 1");
    if (!(chi > 0.0) || chi > 0.5) throw InvalidArgument("chi must lie in (0, 0.5]");
    if (!(box_length > 0.0)) throw InvalidArgument("box length must be positive");
    if (min_separation < 0.0) throw InvalidArgument("min separation must be >= 0");
    if (min_separation * std::sqrt(static_cast<double>(n_points)) >= box_length) {
        throw InvalidArgument("min separation too large for N points in this box");
    }
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (max_iterations < 1) throw InvalidArgument("max iterations must be >= 1");
}

StealthObjective::StealthObjective(std::vector<Vec2> wavevectors, double soft_core_radius,
                                   double penalty_weight)
    : wavevectors_(std::move(wavevectors)),
      soft_core_radius_(soft_core_radius),
      penalty_weight_(penalty_weight) {}

double StealthObjective::evaluate(const std::vector<double>& positions,
                                  std::vector<double>* gradient) const {
    const std::size_t n = positions.size() / 2;
    if (gradient) gradient->assign(positions.size(), 0.0);

    double phi = 0.0;
    std::vector<double> cos_buf(n), sin_buf(n);
    for (const Vec2& k : wavevectors_) {
        double c_sum = 0.0, s_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = k.x * positions[2 * i] + k.y * positions[2 * i + 1];
            cos_buf[i] = std::cos(arg);
            sin_buf[i] = std::sin(arg);
            c_sum += cos_buf[i];
            s_sum += sin_buf[i];
        }
        phi += (c_sum * c_sum + s_sum * s_sum) / static_cast<double>(n);
        if (gradient) {
            const double scale = 2.0 / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double coef = scale * (s_sum * cos_buf[i] - c_sum * sin_buf[i]);
                (*gradient)[2 * i] += coef * k.x;
                (*gradient)[2 * i + 1] += coef * k.y;
            }
        }
    }

    if (soft_core_radius_ > 0.0 && penalty_weight_ > 0.0) {
        const PairPenalty pen{soft_core_radius_, penalty_weight_};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = min_image(positions[2 * i] - positions[2 * j], 1.0);
                const double dy = min_image(positions[2 * i + 1] - positions[2 * j + 1], 1.0);
                const double r = std::hypot(dx, dy);
                if (r >= pen.sigma) continue;
                phi += pen.value(r);
                if (gradient && r > 0.0) {
                    const double g = pen.derivative(r) / r;
                    (*gradient)[2 * i] += g * dx;
                    (*gradient)[2 * i + 1] += g * dy;
                    (*gradient)[2 * j] -= g * dx;
                    (*gradient)[2 * j + 1] -= g * dy;
                }
            }
        }
    }
    return phi;
}

double StealthObjective::stealth_objective(const std::vector<double>& positions,
                                           double* max_s) const {
    const std::size_t n = positions.size() / 2;
    double phi = 0.0;
    double worst = 0.0;
    for (const Vec2& k : wavevectors_) {
        double c_sum = 0.0, s_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = k.x * positions[2 * i] + k.y * positions[2 * i + 1];
            c_sum += std::cos(arg);
            s_sum += std::sin(arg);
        }
        const double s = (c_sum * c_sum + s_sum * s_sum) / static_cast<double>(n);
        phi += s;
        worst = std::max(worst, s);
    }
    if (max_s) *max_s = worst;
    return phi;
}

namespace {

// ---------------------------------------------------------------------------
// Levenberg-Marquardt driver shared by both parametrizations. A model fills
// the residual vector and Jacobian at the current parameters; the driver owns
// damping adaptation. All work happens in scaled units (unit box).
// ---------------------------------------------------------------------------

struct LmResult {
    int iterations = 0;
    double max_s = std::numeric_limits<double>::infinity();
};

template <typename Model>
LmResult levenberg_marquardt(Model& model, std::vector<double>& params, double target_max_s,
                             int max_iterations) {
    const Eigen::Index dof = static_cast<Eigen::Index>(model.parameter_count());
    Eigen::MatrixXd jac(model.residual_count(), dof);
    Eigen::VectorXd residual(model.residual_count());
    Eigen::MatrixXd normal(dof, dof);
    Eigen::MatrixXd damped(dof, dof);
    Eigen::VectorXd rhs(dof), delta(dof);
    std::vector<double> trial(params.size());

    LmResult result;
    double f = model.linearize(params, jac, residual, &result.max_s);
    double lambda = 1e-4;
    while (result.iterations < max_iterations && result.max_s > target_max_s) {
        ++result.iterations;
        normal.noalias() = jac.transpose() * jac;
        rhs.noalias() = -jac.transpose() * residual;
        const double diag_scale =
            std::max(normal.trace() / static_cast<double>(dof), 1e-30);

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            damped = normal;
            damped.diagonal().array() += lambda * diag_scale;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            if (ldlt.info() == Eigen::Success) {
                delta = ldlt.solve(rhs);
                for (std::size_t i = 0; i < trial.size(); ++i) {
                    trial[i] = params[i] + delta(static_cast<Eigen::Index>(i));
                }
                const double f_try = model.objective(trial);
                if (f_try < f) {
                    params.swap(trial);
                    lambda = std::max(lambda / 3.0, 1e-14);
                    accepted = true;
                    break;
                }
            }
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (!accepted) break;  // stationary point of this basin
        f = model.linearize(params, jac, residual, &result.max_s);
    }
    return result;
}

// Residuals of the direct parametrization: {C_k, S_k}/sqrt(N) per constrained
// vector plus one soft-core residual per overlapping pair. The first point is
// pinned to kill the rigid-translation gauge freedom.
class DirectModel {
public:
    DirectModel(const std::vector<Vec2>& ks, std::size_t n, PairPenalty penalty)
        : ks_(ks), n_(n), penalty_(penalty) {
        pair_rows_ = penalty_.sigma > 0.0 ? n_ * (n_ - 1) / 2 : 0;
    }

    std::size_t parameter_count() const { return 2 * (n_ - 1); }
    Eigen::Index residual_count() const {
        return static_cast<Eigen::Index>(2 * ks_.size() + pair_rows_);
    }

    // full parameter vector = positions of points 1..n-1 (point 0 at origin)
    double linearize(const std::vector<double>& p, Eigen::MatrixXd& jac,
                     Eigen::VectorXd& residual, double* max_s) const {
        jac.setZero();
        const double sqrt_n = std::sqrt(static_cast<double>(n_));
        double worst = 0.0;
        double f = 0.0;
        for (std::size_t kk = 0; kk < ks_.size(); ++kk) {
            double c_sum = 1.0, s_sum = 0.0;  // point 0 at the origin
            for (std::size_t i = 1; i < n_; ++i) {
                const double arg = ks_[kk].x * p[2 * (i - 1)] + ks_[kk].y * p[2 * (i - 1) + 1];
                const double c = std::cos(arg);
                const double s = std::sin(arg);
                c_sum += c;
                s_sum += s;
                jac(2 * kk, 2 * (i - 1)) = -s * ks_[kk].x / sqrt_n;
                jac(2 * kk, 2 * (i - 1) + 1) = -s * ks_[kk].y / sqrt_n;
                jac(2 * kk + 1, 2 * (i - 1)) = c * ks_[kk].x / sqrt_n;
                jac(2 * kk + 1, 2 * (i - 1) + 1) = c * ks_[kk].y / sqrt_n;
            }
            residual(2 * kk) = c_sum / sqrt_n;
            residual(2 * kk + 1) = s_sum / sqrt_n;
            const double s_val = (c_sum * c_sum + s_sum * s_sum) / static_cast<double>(n_);
            f += s_val;
            worst = std::max(worst, s_val);
        }
        if (pair_rows_ > 0) f += penalty_rows(p, &jac, &residual);
        if (max_s) *max_s = worst;
        return f;
    }

    double objective(const std::vector<double>& p) const {
        double f = 0.0;
        for (const Vec2& k : ks_) {
            double c_sum = 1.0, s_sum = 0.0;
            for (std::size_t i = 1; i < n_; ++i) {
                const double arg = k.x * p[2 * (i - 1)] + k.y * p[2 * (i - 1) + 1];
                c_sum += std::cos(arg);
                s_sum += std::sin(arg);
            }
            f += (c_sum * c_sum + s_sum * s_sum) / static_cast<double>(n_);
        }
        if (pair_rows_ > 0) f += penalty_rows(p, nullptr, nullptr);
        return f;
    }

    std::vector<double> full_positions(const std::vector<double>& p) const {
        std::vector<double> x(2 * n_);
        x[0] = 0.0;
        x[1] = 0.0;
        std::copy(p.begin(), p.end(), x.begin() + 2);
        return x;
    }

private:
    // residual sqrt(w) (1 - r/sigma)^(3/2) per pair below the core radius;
    // squares back to the C2 penalty used by StealthObjective.
    double penalty_rows(const std::vector<double>& p, Eigen::MatrixXd* jac,
                        Eigen::VectorXd* residual) const {
        const double sq_w = std::sqrt(penalty_.weight);
        double f = 0.0;
        std::size_t row = 2 * ks_.size();
        auto coord = [&](std::size_t i, int axis) {
            return i == 0 ? 0.0 : p[2 * (i - 1) + axis];
        };
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j, ++row) {
                const double dx = min_image(coord(i, 0) - coord(j, 0), 1.0);
                const double dy = min_image(coord(i, 1) - coord(j, 1), 1.0);
                const double r = std::hypot(dx, dy);
                if (residual) (*residual)(row) = 0.0;
                if (r >= penalty_.sigma || r <= 0.0) continue;
                const double t = 1.0 - r / penalty_.sigma;
                const double res = sq_w * std::pow(t, 1.5);
                f += res * res;
                if (!residual || !jac) continue;
                (*residual)(row) = res;
                const double drdr = -1.5 * sq_w * std::sqrt(t) / (penalty_.sigma * r);
                if (i >= 1) {
                    (*jac)(row, 2 * (i - 1)) = drdr * dx;
                    (*jac)(row, 2 * (i - 1) + 1) = drdr * dy;
                }
                (*jac)(row, 2 * (j - 1)) = -drdr * dx;
                (*jac)(row, 2 * (j - 1) + 1) = -drdr * dy;
            }
        }
        return f;
    }

    const std::vector<Vec2>& ks_;
    std::size_t n_;
    PairPenalty penalty_;
    std::size_t pair_rows_ = 0;
};

// Inversion-symmetric parametrization for the fully constrained case
// (2M > 2(N-1), reachable only at chi = 0.5 with N even). Points come in
// +-u pairs about the box origin, which makes every Fourier sum real:
// F(k) = 2 sum_i cos(k.u_i). That halves the constraint count to M on N pair
// coordinates and exact zeros become reachable again. The symmetry is a
// construction device; it is invisible to |A(k)|^2, S(k) and all statistics.
class SymmetricModel {
public:
    SymmetricModel(const std::vector<Vec2>& ks, std::size_t n, PairPenalty penalty)
        : ks_(ks), n_(n), pairs_(n / 2), penalty_(penalty) {
        pair_rows_ = penalty_.sigma > 0.0 ? pairs_ * (pairs_ + 1) / 2 : 0;
    }

    std::size_t parameter_count() const { return 2 * pairs_; }
    Eigen::Index residual_count() const {
        return static_cast<Eigen::Index>(ks_.size() + pair_rows_);
    }

    double linearize(const std::vector<double>& u, Eigen::MatrixXd& jac,
                     Eigen::VectorXd& residual, double* max_s) const {
        jac.setZero();
        const double sqrt_n = std::sqrt(static_cast<double>(n_));
        double worst = 0.0;
        double f = 0.0;
        for (std::size_t kk = 0; kk < ks_.size(); ++kk) {
            double c_sum = 0.0;
            for (std::size_t i = 0; i < pairs_; ++i) {
                const double arg = ks_[kk].x * u[2 * i] + ks_[kk].y * u[2 * i + 1];
                c_sum += std::cos(arg);
                const double s = std::sin(arg);
                jac(kk, 2 * i) = -2.0 * s * ks_[kk].x / sqrt_n;
                jac(kk, 2 * i + 1) = -2.0 * s * ks_[kk].y / sqrt_n;
            }
            residual(kk) = 2.0 * c_sum / sqrt_n;
            const double s_val = residual(kk) * residual(kk);
            f += s_val;
            worst = std::max(worst, s_val);
        }
        if (pair_rows_ > 0) f += penalty_rows(u, &jac, &residual);
        if (max_s) *max_s = worst;
        return f;
    }

    double objective(const std::vector<double>& u) const {
        double f = 0.0;
        for (const Vec2& k : ks_) {
            double c_sum = 0.0;
            for (std::size_t i = 0; i < pairs_; ++i) {
                c_sum += std::cos(k.x * u[2 * i] + k.y * u[2 * i + 1]);
            }
            f += 4.0 * c_sum * c_sum / static_cast<double>(n_);
        }
        if (pair_rows_ > 0) f += penalty_rows(u, nullptr, nullptr);
        return f;
    }

    std::vector<double> full_positions(const std::vector<double>& u) const {
        std::vector<double> x(2 * n_);
        for (std::size_t i = 0; i < pairs_; ++i) {
            x[2 * i] = u[2 * i];
            x[2 * i + 1] = u[2 * i + 1];
            x[2 * (pairs_ + i)] = -u[2 * i];
            x[2 * (pairs_ + i) + 1] = -u[2 * i + 1];
        }
        return x;
    }

private:
    // Pair distances in the full point set: u_i vs u_j and u_i vs -u_j (their
    // mirrors duplicate these), plus each point against its own image at
    // distance |2 u_i|. One residual row per (i, j <= i) combination.
    double penalty_rows(const std::vector<double>& u, Eigen::MatrixXd* jac,
                        Eigen::VectorXd* residual) const {
        double f = 0.0;
        std::size_t row = ks_.size();
        for (std::size_t i = 0; i < pairs_; ++i) {
            for (std::size_t j = 0; j <= i; ++j, ++row) {
                if (residual) (*residual)(row) = 0.0;
                if (i == j) {
                    const double dx = min_image(2.0 * u[2 * i], 1.0);
                    const double dy = min_image(2.0 * u[2 * i + 1], 1.0);
                    f += add_row(dx, dy, std::sqrt(2.0), row, jac, residual,
                                 [&](double gx, double gy) {
                                     if (!jac) return;
                                     (*jac)(row, 2 * i) = 2.0 * gx;
                                     (*jac)(row, 2 * i + 1) = 2.0 * gy;
                                 });
                } else {
                    const double ax = min_image(u[2 * i] - u[2 * j], 1.0);
                    const double ay = min_image(u[2 * i + 1] - u[2 * j + 1], 1.0);
                    f += add_row(ax, ay, std::sqrt(2.0), row, jac, residual,
                                 [&](double gx, double gy) {
                                     if (!jac) return;
                                     (*jac)(row, 2 * i) = gx;
                                     (*jac)(row, 2 * i + 1) = gy;
                                     (*jac)(row, 2 * j) = -gx;
                                     (*jac)(row, 2 * j + 1) = -gy;
                                 });
                    // cross distance shares the row budget: fold it into the
                    // same row only when the direct one is inactive
                    const double bx = min_image(u[2 * i] + u[2 * j], 1.0);
                    const double by = min_image(u[2 * i + 1] + u[2 * j + 1], 1.0);
                    if (std::hypot(ax, ay) >= penalty_.sigma) {
                        f += add_row(bx, by, std::sqrt(2.0), row, jac, residual,
                                     [&](double gx, double gy) {
                                         if (!jac) return;
                                         (*jac)(row, 2 * i) = gx;
                                         (*jac)(row, 2 * i + 1) = gy;
                                         (*jac)(row, 2 * j) = gx;
                                         (*jac)(row, 2 * j + 1) = gy;
                                     });
                    }
                }
            }
        }
        return f;
    }

    template <typename Writer>
    double add_row(double dx, double dy, double multiplicity, std::size_t row,
                   Eigen::MatrixXd* jac, Eigen::VectorXd* residual, Writer&& write) const {
        const double r = std::hypot(dx, dy);
        if (r >= penalty_.sigma || r <= 0.0) return 0.0;
        const double t = 1.0 - r / penalty_.sigma;
        const double sq_w = multiplicity * std::sqrt(penalty_.weight);
        const double res = sq_w * std::pow(t, 1.5);
        if (residual) (*residual)(row) = res;
        const double drdr = -1.5 * sq_w * std::sqrt(t) / (penalty_.sigma * r);
        write(drdr * dx, drdr * dy);
        (void)jac;
        return res * res;
    }

    const std::vector<Vec2>& ks_;
    std::size_t n_;
    std::size_t pairs_;
    PairPenalty penalty_;
    std::size_t pair_rows_ = 0;
};

double min_pair_distance_unit_box(const std::vector<double>& x, int* out_i, int* out_j) {
    const std::size_t n = x.size() / 2;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = min_image(x[2 * i] - x[2 * j], 1.0);
            const double dy = min_image(x[2 * i + 1] - x[2 * j + 1], 1.0);
            const double d = std::hypot(dx, dy);
            if (d < best) {
                best = d;
                if (out_i) *out_i = static_cast<int>(i);
                if (out_j) *out_j = static_cast<int>(j);
            }
        }
    }
    return best;
}

}  // namespace

std::pair<PointPattern, OptimizationReport> generate_stealthy(const StealthyTargetSpec& spec) {
    spec.validate();

    const std::size_t n = static_cast<std::size_t>(spec.n_points);
    const ConstrainedSet constrained = constrained_lattice(spec.chi, n, spec.box_length);
    const std::size_t m = constrained.wavevectors.size();

    // scaled-unit wavevectors: 2*pi*(nx, ny)
    std::vector<Vec2> scaled_ks;
    scaled_ks.reserve(m);
    for (const auto& [nx, ny] : constrained.indices) {
        scaled_ks.push_back({kTwoPi * nx, kTwoPi * ny});
    }

    // Feasibility of exact zeros: the direct parametrization has 2(N-1)
    // gauge-free coordinates against 2M constraints; at full capacity
    // (M = N, i.e. chi = 0.5) only the symmetric parametrization still has
    // enough freedom (M constraints on N coordinates).
    const bool direct_feasible = m <= n - 1;
    const bool symmetric_feasible = n % 2 == 0 && m <= n;
    const bool use_symmetric = !direct_feasible && symmetric_feasible;

    const PairPenalty penalty{spec.min_separation / spec.box_length, 10.0};

    OptimizationReport report;
    report.k_c = constrained.k_c;
    report.constrained_count = static_cast<int>(m);
    report.achieved_chi = constrained.chi_achieved;

    double best_objective = std::numeric_limits<double>::infinity();
    std::string last_failure;

    for (int attempt = 0; attempt <= spec.max_restarts; ++attempt) {
        SeededRng rng(spec.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
        report.restarts_used = attempt;

        std::vector<double> x;  // full positions in the unit box
        if (use_symmetric) {
            SymmetricModel model(scaled_ks, n, penalty);
            std::vector<double> params(model.parameter_count());
            for (double& v : params) v = rng.uniform();
            const LmResult lm =
                levenberg_marquardt(model, params, 0.01 * spec.tolerance, spec.max_iterations);
            report.iterations += lm.iterations;
            x = model.full_positions(params);
        } else {
            DirectModel model(scaled_ks, n, penalty);
            std::vector<double> params(model.parameter_count());
            for (double& v : params) v = rng.uniform();
            const LmResult lm =
                levenberg_marquardt(model, params, 0.01 * spec.tolerance, spec.max_iterations);
            report.iterations += lm.iterations;
            x = model.full_positions(params);
        }
        for (double& xi : x) xi = wrap_coordinate(xi, 1.0);

        const StealthObjective checker(scaled_ks, 0.0, 0.0);
        double max_s = 0.0;
        const double stealth = checker.stealth_objective(x, &max_s);
        best_objective = std::min(best_objective, stealth);

        int ci = -1, cj = -1;
        const double min_dist = min_pair_distance_unit_box(x, &ci, &cj) * spec.box_length;

        if (max_s > spec.tolerance) {
            std::ostringstream msg;
            msg << "stealthy optimization did not reach tolerance " << spec.tolerance
                << " (best max S = " << max_s << ")";
            last_failure = msg.str();
            continue;
        }
        if (min_dist < spec.min_separation) {
            std::ostringstream msg;
            msg << "min separation violated: points " << ci << " and " << cj << " are "
                << min_dist << " m apart (< " << spec.min_separation << ")";
            if (attempt == spec.max_restarts) throw SeparationError(msg.str(), min_dist, ci, cj);
            last_failure = msg.str();
            continue;
        }

        PointPattern pattern;
        pattern.box_x = spec.box_length;
        pattern.box_y = spec.box_length;
        pattern.points.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            pattern.points.push_back(
                {wrap_coordinate(x[2 * i] * spec.box_length, spec.box_length),
                 wrap_coordinate(x[2 * i + 1] * spec.box_length, spec.box_length)});
        }
        std::ostringstream label;
        label << "hud N=" << spec.n_points << " chi=" << spec.chi << " seed=" << spec.seed;
        pattern.label = label.str();

        // independent certificate: direct sum over the constrained set
        const std::vector<double> s_check =
            structure_factor_direct(pattern, constrained.wavevectors);
        report.max_structure_factor = *std::max_element(s_check.begin(), s_check.end());
        if (report.max_structure_factor > spec.tolerance * 10.0) {
            last_failure = "stealth certificate failed after optimization";
            continue;
        }

        report.final_objective = stealth;
        report.min_separation = min_dist;
        report.mean_nearest_neighbor = pattern.mean_nearest_neighbor_distance();
        report.converged = true;
        return {pattern, report};
    }
    if (last_failure.empty()) last_failure = "stealthy optimization failed";
    throw ConvergenceError(last_failure + " after " + std::to_string(spec.max_restarts + 1) +
                               " starts",
                           best_objective);
}

}  // namespace hud
