#pragma once

#include <vector>

#include "matting/imagery/image.hpp"

namespace matting::metrics {

// Constants used by the perceptual metrics; recorded in report headers so
// results are self-describing.
struct MetricParams {
    double sigma = 1.4;  // gaussian-derivative scale
    double q = 2.0;      // gradient error exponent
    double theta = 0.15; // connectivity penalty knee
    double step = 0.1;   // connectivity threshold spacing
};

// All metrics are pixel-count averages over [0,1]-normalized mattes and
// throw std::invalid_argument on shape mismatch.

// mean |pred - gt|.
double sad(const imagery::AlphaMatte& pred, const imagery::AlphaMatte& gt);

// mean (pred - gt)^2.
double mse(const imagery::AlphaMatte& pred, const imagery::AlphaMatte& gt);

// Both mattes are filtered with first-order gaussian-derivative kernels
// (correlation, replicate edges) in x and y; the error is the mean of
// ||grad pred - grad gt||^q.
double gradient_error(const imagery::AlphaMatte& pred, const imagery::AlphaMatte& gt,
                      double sigma = 1.4, double q = 2.0);

// Connectivity per thresholded component analysis: Omega is the largest
// 4-connected region fully opaque (>= 1 - 1e-6) in BOTH mattes; per pixel,
// l_i is the highest threshold level at which the pixel stays 4-connected
// to Omega, d_i = a_i - l_i is penalized when >= theta, and the error is
// mean |phi_pred - phi_gt|. With no fully-opaque shared region the error
// falls back to mean |pred - gt|.
double connectivity_error(const imagery::AlphaMatte& pred, const imagery::AlphaMatte& gt,
                          double theta = 0.15, double step = 0.1);

// 1-D taps shared by the separable gradient-error path: a unit-sum
// gaussian and its derivative, normalized so a unit ramp maps to slope 1.
// radius = ceil(3 sigma).
std::vector<double> gaussian_taps(double sigma);
std::vector<double> gaussian_deriv_taps(double sigma);

}  // namespace matting::metrics
