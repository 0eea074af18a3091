#include "aci/accuracy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "aci/errors.hpp"

namespace aci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(const LogisticParams& p, double sinr) {
    return p.amplitude / (1.0 + std::exp(-p.slope * (sinr - p.midpoint))) + p.offset;
}

void check_point(const AccuracyModel& model, int k, bool allow_local) {
    const int upper = allow_local ? model.num_points() : model.num_points() - 1;
    if (k < 0 || k > upper) {
        throw std::out_of_range("partition point " + std::to_string(k) + " outside [0, " +
                                std::to_string(upper) + "]");
    }
}

}  // namespace

void AccuracyModel::validate() const {
    if (points.empty()) throw ValidationError("accuracy_model", "no partition points");
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        const std::string at = "accuracy_model[" + std::to_string(k) + "]";
        if (!(p.amplitude > 0.0)) throw ValidationError(at + ".A", "must be > 0");
        if (!(p.slope > 0.0)) throw ValidationError(at + ".tau", "must be > 0");
        if (!std::isfinite(p.midpoint)) throw ValidationError(at + ".phi", "must be finite");
        if (!(p.offset >= 0.0)) throw ValidationError(at + ".b", "must be >= 0");
        if (p.offset + p.amplitude > 1.0 + 1e-12) throw ValidationError(at, "A + b must be <= 1");
    }
    if (!(local_accuracy > 0.0 && local_accuracy <= 1.0)) {
        throw ValidationError("accuracy_model.local_accuracy", "must lie in (0, 1]");
    }
}

AccuracyModel default_accuracy_model() {
    AccuracyModel model;
    constexpr std::array<double, 5> a{0.86, 0.85, 0.83, 0.89, 0.84};
    constexpr std::array<double, 5> tau{0.38, 0.70, 0.46, 0.42, 0.57};
    constexpr std::array<double, 5> phi{6.98, 7.29, 11.79, 14.08, 11.58};
    constexpr std::array<double, 5> b{0.09, 0.10, 0.12, 0.06, 0.11};
    for (std::size_t k = 0; k < a.size(); ++k) model.points.push_back({a[k], tau[k], phi[k], b[k]});
    model.local_accuracy = 0.95;
    return model;
}

double accuracy(const AccuracyModel& model, int k, double sinr) {
    check_point(model, k, true);
    if (k == model.num_points()) return model.local_accuracy;
    return logistic(model.points[static_cast<std::size_t>(k)], sinr);
}

double min_sinr_for_accuracy(const AccuracyModel& model, int k, double acc_min) {
    check_point(model, k, false);
    const auto& p = model.points[static_cast<std::size_t>(k)];
    const double excess = acc_min - p.offset;
    if (excess <= 0.0) return -kInf;
    if (excess >= p.amplitude) return kInf;
    return p.midpoint - std::log(p.amplitude / excess - 1.0) / p.slope;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

using Vec4 = Eigen::Vector4d;

LogisticParams to_params(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
Vec4 to_vec(const LogisticParams& p) { return {p.amplitude, p.slope, p.midpoint, p.offset}; }

constexpr double kMinPositive = 1e-9;

// Nearest point of {A >= eps, tau >= eps, b >= 0, A + b <= 1}.
Vec4 project(Vec4 v) {
    v[1] = std::max(v[1], kMinPositive);
    v[0] = std::max(v[0], kMinPositive);
    v[3] = std::max(v[3], 0.0);
    const double excess = v[0] + v[3] - 1.0;
    if (excess > 0.0) {
        v[0] -= excess / 2.0;
        v[3] -= excess / 2.0;
        if (v[3] < 0.0) {
            v[0] = 1.0;
            v[3] = 0.0;
        } else if (v[0] < kMinPositive) {
            v[0] = kMinPositive;
            v[3] = 1.0 - kMinPositive;
        }
    }
    return v;
}

struct Problem {
    std::vector<double> x;
    std::vector<double> y;
};

double sse(const Problem& pr, const Vec4& v) {
    const LogisticParams p = to_params(v);
    double s = 0.0;
    for (std::size_t i = 0; i < pr.x.size(); ++i) {
        const double r = logistic(p, pr.x[i]) - pr.y[i];
        s += r * r;
    }
    return s;
}

struct LmOutcome {
    Vec4 params;
    double sse;
    int iterations;
};

LmOutcome levenberg_marquardt(const Problem& pr, Vec4 v) {
    constexpr int kMaxIter = 2000;
    constexpr double kStepTol = 1e-10;
    v = project(v);
    double cost = sse(pr, v);
    double lambda = 1e-3;
    int it = 0;
    for (; it < kMaxIter; ++it) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Vec4 jtr = Vec4::Zero();
        for (std::size_t i = 0; i < pr.x.size(); ++i) {
            const double d = pr.x[i] - v[2];
            const double s = 1.0 / (1.0 + std::exp(-v[1] * d));
            const double ds = s * (1.0 - s);
            const double r = v[0] * s + v[3] - pr.y[i];
            const Vec4 g{s, v[0] * ds * d, -v[0] * ds * v[1], 1.0};
            jtj += g * g.transpose();
            jtr += g * r;
        }
        bool improved = false;
        Vec4 step = Vec4::Zero();
        while (lambda < 1e12) {
            Eigen::Matrix4d damped = jtj;
            for (int d = 0; d < 4; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            const Vec4 delta = damped.ldlt().solve(-jtr);
            const Vec4 trial = project(v + delta);
            const double trial_cost = sse(pr, trial);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                step = trial - v;
                v = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
        if (step.norm() < kStepTol * (1.0 + v.norm())) break;
    }
    return {v, cost, it};
}

}  // namespace

FitResult fit_accuracy(std::span<const AccuracySample> samples, int k,
                       std::optional<LogisticParams> init) {
    Problem pr;
    for (const auto& s : samples) {
        if (s.partition_point != k) continue;
        pr.x.push_back(s.sinr);
        pr.y.push_back(s.accuracy);
    }
    if (pr.x.size() < 8) {
        throw FitError("need at least 8 samples for partition point " + std::to_string(k) +
                       ", got " + std::to_string(pr.x.size()));
    }
    const auto [xmin, xmax] = std::minmax_element(pr.x.begin(), pr.x.end());
    if (*xmax - *xmin <= 0.0) throw FitError("samples must span at least two distinct SINRs");
    const auto [ymin, ymax] = std::minmax_element(pr.y.begin(), pr.y.end());
    if (*ymax - *ymin < 1e-12) {
        throw FitError("non-identifiable: all samples have the same accuracy");
    }

    // Data-driven start: offset at the floor, amplitude spanning the data,
    // midpoint where accuracy first passes the halfway level.
    std::vector<std::size_t> order(pr.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pr.x[a] < pr.x[b]; });
    const double half = (*ymin + *ymax) / 2.0;
    double mid = (*xmin + *xmax) / 2.0;
    for (std::size_t i : order) {
        if (pr.y[i] >= half) {
            mid = pr.x[i];
            break;
        }
    }
    const double span = *xmax - *xmin;

    std::vector<Vec4> starts;
    for (double c : {4.0, 8.0, 16.0, 32.0}) starts.push_back({*ymax - *ymin, c / span, mid, *ymin});
    if (init) starts.push_back(to_vec(*init));

    LmOutcome best{Vec4::Zero(), std::numeric_limits<double>::infinity(), 0};
    int total_iterations = 0;
    for (const Vec4& s : starts) {
        const LmOutcome out = levenberg_marquardt(pr, s);
        total_iterations += out.iterations;
        if (out.sse < best.sse) best = out;
    }
    return {to_params(best.params), std::sqrt(best.sse / static_cast<double>(pr.x.size())),
            total_iterations};
}

std::vector<AccuracySample> read_accuracy_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sample file '" + path + "'");
    std::vector<AccuracySample> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-') continue;
        std::stringstream ss(line);
        std::string kf, sf, af;
        if (!std::getline(ss, kf, ',') || !std::getline(ss, sf, ',') || !std::getline(ss, af)) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected k,sinr,accuracy");
        }
        AccuracySample s;
        try {
            s.partition_point = std::stoi(kf);
            s.sinr = std::stod(sf);
            s.accuracy = std::stod(af);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": malformed number");
        }
        if (!(s.sinr >= 0.0)) throw ParseError(path + ":" + std::to_string(line_no) + ": sinr < 0");
        if (!(s.accuracy >= 0.0 && s.accuracy <= 1.0)) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": accuracy outside [0, 1]");
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace aci
