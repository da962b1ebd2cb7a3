#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stlmine/util.hpp"

namespace stlmine {

struct Observation {
    std::vector<double> u;       // point in [0,1]^dim
    double y = 0.0;              // noisy score
    double noise_estimate = 0.0; // standard error of y
};

struct GpHyperparams {
    std::vector<double> length_scales;  // one per dimension
    double signal_var = 1.0;
};

// Gaussian-process regression with a squared-exponential kernel and
// per-dimension length scales.  Per-observation noise variance is
// max(noise_estimate^2, 1e-6).  The prior mean is the mean of the training
// targets.
class GpModel {
public:
    explicit GpModel(int dim);

    int dim() const { return dim_; }
    int count() const { return static_cast<int>(ys_.size()); }
    const GpHyperparams& hyperparams() const { return hp_; }

    void add(const Observation& o);

    // Factorizes the kernel matrix under the given hyperparameters,
    // escalating diagonal jitter until the factorization succeeds.
    void fit(const GpHyperparams& hp);

    // Maximum-likelihood fit over a small grid: isotropic length scales in
    // {0.05, 0.1, 0.2, 0.4, 0.8} crossed with signal variance in
    // {0.25, 1, 4} * var(y), then one greedy per-dimension {x0.5, x2} pass.
    void fit_ml();

    double log_marginal(const GpHyperparams& hp) const;

    std::pair<double, double> posterior(const std::vector<double>& u) const;  // mean, variance

    // Column i of out_mean/out_var corresponds to column i of U (dim x m).
    void posterior_batch(const Eigen::MatrixXd& U, Eigen::VectorXd& out_mean,
                         Eigen::VectorXd& out_var) const;

private:
    struct Factorization {
        Eigen::LLT<Eigen::MatrixXd> llt;
        Eigen::VectorXd alpha;
        double y_mean = 0.0;
        double log_ml = 0.0;
    };
    Factorization factorize(const GpHyperparams& hp) const;
    Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& U) const;

    int dim_;
    Eigen::MatrixXd X_;          // dim x n
    std::vector<double> ys_;
    std::vector<double> noise_var_;
    GpHyperparams hp_;
    Factorization fac_;
    bool fitted_ = false;
};

}  // namespace stlmine
