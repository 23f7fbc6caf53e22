#include "alloclab/urn.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace alloclab {

namespace {

constexpr double kStochasticTol = 1e-9;
constexpr double kPowerTol = 1e-12;
constexpr int kPowerMaxIter = 100000;

void check_stochastic(const Matrix& h) {
    if (h.rows() != h.cols() || h.rows() < 2)
        throw std::invalid_argument("spectral: design matrix must be square with K >= 2");
    for (std::size_t i = 0; i < h.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < h.cols(); ++j) {
            if (h(i, j) < -kStochasticTol)
                throw std::invalid_argument("spectral: negative entry in design matrix");
            s += h(i, j);
        }
        if (std::abs(s - 1.0) > kStochasticTol)
            throw std::invalid_argument("spectral: design matrix rows must sum to 1");
    }
}

std::vector<double> principal_left_vector(const Matrix& h) {
    const std::size_t k = h.rows();
    std::vector<double> v(k, 1.0 / static_cast<double>(k));
    for (int it = 0; it < kPowerMaxIter; ++it) {
        std::vector<double> next = left_multiply(v, h);
        double delta = 0.0, total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            next[j] = 0.5 * (next[j] + v[j]);  // lazy chain: same fixed point, aperiodic
            total += next[j];
        }
        for (std::size_t j = 0; j < k; ++j) {
            next[j] /= total;
            delta = std::max(delta, std::abs(next[j] - v[j]));
        }
        v = std::move(next);
        if (delta < kPowerTol) break;
    }
    return v;
}

double nonprincipal_max_real(const Matrix& h) {
    const auto k = static_cast<Eigen::Index>(h.rows());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = h(i, j);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
    Eigen::Index principal = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i] - 1.0) < std::abs(ev[principal] - 1.0)) principal = i;
    double lambda = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (i != principal) lambda = std::max(lambda, ev[i].real());
    return lambda;
}

}  // namespace

double UrnState::total() const { return std::accumulate(balls.begin(), balls.end(), 0.0); }

void UrnState::validate() const {
    if (balls.size() < 2 || balls.size() > kMaxArms)
        throw std::invalid_argument("urn: unsupported number of ball types");
    for (double y : balls)
        if (!(y >= 0.0)) throw std::invalid_argument("urn: ball counts must be nonnegative");
    if (!(total() > 0.0)) throw std::invalid_argument("urn: initial urn must hold some balls");
}

Assignment draw_arm(const UrnState& urn, RandomStream& rng) {
    const double total = urn.total();
    if (!(total > 0.0)) throw std::domain_error("extinct urn");
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < urn.balls.size(); ++k) {
        if (urn.balls[k] <= 0.0) continue;
        acc += urn.balls[k];
        last = k;
        if (target < acc) return {k};
    }
    return {last};
}

UrnState rpw_update(UrnState urn, Assignment arm, Outcome outcome) {
    if (urn.balls.size() != 2) throw std::invalid_argument("rpw_update: two-arm rule");
    if (arm.arm > 1) throw std::out_of_range("rpw_update: arm index out of range");
    urn.balls[outcome.success ? arm.arm : 1 - arm.arm] += 1.0;
    return urn;
}

UrnState wei_update(UrnState urn, Assignment arm, Outcome outcome) {
    const std::size_t k = urn.balls.size();
    if (arm.arm >= k) throw std::out_of_range("wei_update: arm index out of range");
    if (outcome.success) {
        urn.balls[arm.arm] += 1.0;
    } else {
        const double share = 1.0 / static_cast<double>(k - 1);
        for (std::size_t j = 0; j < k; ++j)
            if (j != arm.arm) urn.balls[j] += share;
    }
    return urn;
}

UrnState seu_update(UrnState urn, Assignment arm, Outcome outcome, const ParamEstimate& estimate) {
    const std::size_t k = urn.balls.size();
    if (arm.arm >= k) throw std::out_of_range("seu_update: arm index out of range");
    if (estimate.p_hat.size() != k) throw std::invalid_argument("seu_update: estimate size mismatch");
    if (outcome.success) {
        urn.balls[arm.arm] += 1.0;
        return urn;
    }
    double others = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        if (j != arm.arm) others += estimate.p_hat[j];
    for (std::size_t j = 0; j < k; ++j)
        if (j != arm.arm) urn.balls[j] += estimate.p_hat[j] / others;
    return urn;
}

DesignMatrix wei_design_matrix(std::span<const double> p) {
    const std::size_t k = p.size();
    if (k < 2) throw std::invalid_argument("wei_design_matrix: need K >= 2");
    Matrix h(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        const double q = 1.0 - p[i];
        for (std::size_t j = 0; j < k; ++j)
            h(i, j) = (i == j) ? p[i] : q / static_cast<double>(k - 1);
    }
    return {h};
}

DesignMatrix seu_design_matrix(std::span<const double> p, std::span<const double> x) {
    const std::size_t k = p.size();
    if (k < 2 || x.size() != k) throw std::invalid_argument("seu_design_matrix: size mismatch");
    Matrix h(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        double others = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) others += x[j];
        for (std::size_t j = 0; j < k; ++j)
            h(i, j) = (i == j) ? p[i] : (1.0 - p[i]) * x[j] / others;
    }
    return {h};
}

SpectralInfo spectral(const DesignMatrix& design) {
    const Matrix& h = design.h;
    check_stochastic(h);
    SpectralInfo info;
    if (h.rows() == 2) {
        const double a = h(0, 1), b = h(1, 0);
        info.v = (a + b > 0.0) ? std::vector<double>{b / (a + b), a / (a + b)}
                               : std::vector<double>{0.5, 0.5};
        info.lambda = h(0, 0) + h(1, 1) - 1.0;
    } else {
        info.v = principal_left_vector(h);
        info.lambda = nonprincipal_max_real(h);
    }
    info.normality_regime = info.lambda < 0.5;
    return info;
}

}  // namespace alloclab
