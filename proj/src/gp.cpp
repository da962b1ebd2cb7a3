#include "stlmine/gp.hpp"

#include <cmath>
#include <numbers>

namespace stlmine {

GpModel::GpModel(int dim) : dim_(dim), X_(dim, 0) {
    if (dim < 1) throw Error("GpModel requires dim >= 1");
    hp_.length_scales.assign(dim, 0.2);
    hp_.signal_var = 1.0;
}

void GpModel::add(const Observation& o) {
    if (static_cast<int>(o.u.size()) != dim_) throw Error("observation dimension mismatch");
    X_.conservativeResize(Eigen::NoChange, X_.cols() + 1);
    for (int d = 0; d < dim_; ++d) X_(d, X_.cols() - 1) = o.u[d];
    ys_.push_back(o.y);
    noise_var_.push_back(std::max(o.noise_estimate * o.noise_estimate, 1e-6));
    fitted_ = false;
}

GpModel::Factorization GpModel::factorize(const GpHyperparams& hp) const {
    int n = count();
    if (n == 0) throw Error("GP fit requires at least one observation");
    if (static_cast<int>(hp.length_scales.size()) != dim_) throw Error("hyperparameter dimension mismatch");
    for (double l : hp.length_scales)
        if (!(l > 0)) throw Error("length scales must be positive");
    if (!(hp.signal_var > 0)) throw Error("signal variance must be positive");

    Factorization f;
    f.y_mean = 0.0;
    for (double y : ys_) f.y_mean += y;
    f.y_mean /= n;

    Eigen::MatrixXd S = X_;  // scaled inputs
    for (int d = 0; d < dim_; ++d) S.row(d) /= hp.length_scales[d];
    Eigen::VectorXd sq = S.colwise().squaredNorm();
    Eigen::MatrixXd K = -2.0 * (S.transpose() * S);
    K.colwise() += sq;
    K.rowwise() += sq.transpose();
    K = (hp.signal_var * (-0.5 * K.array()).exp()).matrix();

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        K(i, i) = hp.signal_var + noise_var_[i];
        y(i) = ys_[i] - f.y_mean;
    }

    double jitter = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd Kj = K;
        if (jitter > 0) Kj.diagonal().array() += jitter;
        f.llt.compute(Kj);
        if (f.llt.info() == Eigen::Success) {
            f.alpha = f.llt.solve(y);
            double log_det = 0.0;
            for (int i = 0; i < n; ++i) log_det += std::log(f.llt.matrixLLT()(i, i));
            f.log_ml = -0.5 * y.dot(f.alpha) - log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
            return f;
        }
        jitter = jitter == 0.0 ? 1e-10 * hp.signal_var : jitter * 100.0;
    }
    throw Error("kernel matrix not positive definite even with jitter");
}

void GpModel::fit(const GpHyperparams& hp) {
    fac_ = factorize(hp);
    hp_ = hp;
    fitted_ = true;
}

double GpModel::log_marginal(const GpHyperparams& hp) const { return factorize(hp).log_ml; }

void GpModel::fit_ml() {
    int n = count();
    if (n == 0) throw Error("GP fit requires at least one observation");
    double mean = 0.0;
    for (double y : ys_) mean += y;
    mean /= n;
    double var = 0.0;
    for (double y : ys_) var += (y - mean) * (y - mean);
    var = std::max(var / n, 1e-6);

    GpHyperparams best;
    double best_ml = -std::numeric_limits<double>::infinity();
    for (double l : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        for (double sf : {0.25 * var, var, 4.0 * var}) {
            GpHyperparams hp;
            hp.length_scales.assign(dim_, l);
            hp.signal_var = sf;
            double ml = log_marginal(hp);
            if (ml > best_ml) {
                best_ml = ml;
                best = hp;
            }
        }
    }
    for (int d = 0; d < dim_; ++d) {
        for (double factor : {0.5, 2.0}) {
            GpHyperparams hp = best;
            hp.length_scales[d] *= factor;
            double ml = log_marginal(hp);
            if (ml > best_ml) {
                best_ml = ml;
                best = hp;
            }
        }
    }
    fit(best);
}

Eigen::MatrixXd GpModel::cross_kernel(const Eigen::MatrixXd& U) const {
    Eigen::MatrixXd S = X_;
    Eigen::MatrixXd T = U;
    for (int d = 0; d < dim_; ++d) {
        S.row(d) /= hp_.length_scales[d];
        T.row(d) /= hp_.length_scales[d];
    }
    Eigen::VectorXd sq_s = S.colwise().squaredNorm();
    Eigen::VectorXd sq_t = T.colwise().squaredNorm();
    Eigen::MatrixXd D = -2.0 * (S.transpose() * T);
    D.colwise() += sq_s;
    D.rowwise() += sq_t.transpose();
    return (hp_.signal_var * (-0.5 * D.array()).exp()).matrix();
}

void GpModel::posterior_batch(const Eigen::MatrixXd& U, Eigen::VectorXd& out_mean,
                              Eigen::VectorXd& out_var) const {
    if (!fitted_) throw Error("posterior on unfit model");
    if (U.rows() != dim_) throw Error("query dimension mismatch");
    Eigen::MatrixXd Ks = cross_kernel(U);  // n x m
    out_mean = ((Ks.transpose() * fac_.alpha).array() + fac_.y_mean).matrix();
    Eigen::MatrixXd V = fac_.llt.matrixL().solve(Ks);
    Eigen::ArrayXd explained = V.colwise().squaredNorm().transpose().array();
    out_var = (hp_.signal_var - explained).cwiseMax(0.0).matrix();
}

std::pair<double, double> GpModel::posterior(const std::vector<double>& u) const {
    if (static_cast<int>(u.size()) != dim_) throw Error("query dimension mismatch");
    Eigen::MatrixXd U(dim_, 1);
    for (int d = 0; d < dim_; ++d) U(d, 0) = u[d];
    Eigen::VectorXd m, v;
    posterior_batch(U, m, v);
    return {m(0), v(0)};
}

}  // namespace stlmine
