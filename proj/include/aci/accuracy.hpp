#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aci {

// Four-parameter logistic accuracy curve for one partition point:
//   acc(sinr) = amplitude / (1 + exp(-slope * (sinr - midpoint))) + offset
// SINR is a linear power ratio, not dB.
struct LogisticParams {
    double amplitude = 0.0;
    double slope = 0.0;
    double midpoint = 0.0;
    double offset = 0.0;

    bool operator==(const LogisticParams&) const = default;
};

// Curves for partition points 0..K-1 (those that transmit features) plus the
// accuracy of fully local inference at k = K, which jamming cannot touch.
struct AccuracyModel {
    std::vector<LogisticParams> points;
    double local_accuracy = 0.95;

    int num_points() const { return static_cast<int>(points.size()); }

    // Throws ValidationError naming the offending field.
    void validate() const;

    bool operator==(const AccuracyModel&) const = default;
};

// Fitted ResNet-18 / CIFAR-10 parameter sets for k = 0..4.
AccuracyModel default_accuracy_model();

double accuracy(const AccuracyModel& model, int k, double sinr);

// Smallest linear SINR reaching `acc_min` at point k < K. Returns -inf when
// the requirement holds at every SINR and +inf when no SINR reaches it.
double min_sinr_for_accuracy(const AccuracyModel& model, int k, double acc_min);

struct AccuracySample {
    int partition_point = 0;
    double sinr = 0.0;
    double accuracy = 0.0;
};

struct FitResult {
    LogisticParams params;
    double rmse = 0.0;
    int iterations = 0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bounded least-squares fit of the logistic curve to the samples of point k.
// Levenberg-Marquardt with projection onto the model's feasible box, restarted
// from several initial slopes. Needs at least 8 samples over two distinct SINRs.
FitResult fit_accuracy(std::span<const AccuracySample> samples, int k,
                       std::optional<LogisticParams> init = std::nullopt);

// CSV with header "k,sinr,accuracy".
std::vector<AccuracySample> read_accuracy_samples(const std::string& path);

}  // namespace aci
