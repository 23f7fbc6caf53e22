#include "alloclab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "alloclab/core.hpp"

namespace alloclab {

namespace {

void check_two_arm(std::span<const double> p) {
    if (p.size() != 2) throw std::invalid_argument("asymptotics: two-arm formula");
    BernoulliArms{std::vector<double>(p.begin(), p.end())};
}

}  // namespace

Matrix two_arm_matrix(double s) { return Matrix{{s, -s}, {-s, s}}; }

AsymptoticSummary var_pw(std::span<const double> p) {
    check_two_arm(p);
    const double q1 = 1.0 - p[0], q2 = 1.0 - p[1], s = q1 + q2;
    AsymptoticSummary out;
    out.v = {q2 / s, q1 / s};
    out.sigma2 = two_arm_matrix(q1 * q2 * (p[0] + p[1]) / (s * s * s));
    return out;
}

AsymptoticSummary var_rpw(std::span<const double> p) {
    check_two_arm(p);
    const double q1 = 1.0 - p[0], q2 = 1.0 - p[1], s = q1 + q2;
    AsymptoticSummary out;
    out.v = {q2 / s, q1 / s};
    if (s > 0.5) {
        out.sigma2 = two_arm_matrix(q1 * q2 * (5.0 - 2.0 * s) / ((2.0 * s - 1.0) * s * s));
    } else {
        out.regime = Regime::DegenerateOrUnknown;
        out.note = s < 0.5 ? "unknown: q1+q2<1/2" : "unknown: q1+q2=1/2";
    }
    return out;
}

AsymptoticSummary var_dl(std::span<const double> p) {
    const BernoulliArms arms{std::vector<double>(p.begin(), p.end())};
    const std::size_t k = arms.size();
    AsymptoticSummary out;
    out.v = rho(TargetKind::UrnProportion, p);
    std::vector<double> d(k);
    for (std::size_t j = 0; j < k; ++j) d[j] = out.v[j] * arms.p(j) / arms.q(j);
    // (I - 1'v)(i, j) = delta_ij - v_j
    Matrix centre = Matrix::identity(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) centre(i, j) -= out.v[j];
    out.sigma2 = centre.transpose() * Matrix::diagonal(d) * centre;
    return out;
}

AsymptoticSummary var_mcad(const MarkovParams& params, std::span<const double> p) {
    check_two_arm(p);
    const ChainCoefficients c = compose(params, p[0], p[1]);
    AsymptoticSummary out;
    if (c.alpha + c.beta >= 2.0) {
        out.regime = Regime::DegenerateOrUnknown;
        out.note = "degenerate chain: no unique stationary distribution";
        return out;
    }
    const double mu = mcad_stationary(c);
    out.v = {mu, 1.0 - mu};
    out.sigma2 = two_arm_matrix(mcad_variance(c));
    return out;
}

Matrix lower_bound(TargetKind target, std::span<const double> p) {
    const Matrix j = grad_rho(target, p);
    const std::vector<double> r = rho(target, p);
    std::vector<double> inv_info(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) inv_info[k] = 1.0 / (r[k] * fisher_bernoulli(p[k]));
    return j.transpose() * Matrix::diagonal(inv_info) * j;
}

double closed_form_lower_bound(TargetKind target, double p1, double p2) {
    const double q1 = 1.0 - p1, q2 = 1.0 - p2;
    switch (target) {
        case TargetKind::UrnProportion: {
            const double s = q1 + q2;
            return q1 * q2 * (p1 + p2) / (s * s * s);
        }
        case TargetKind::Rsihr: {
            const double a = std::sqrt(p1), b = std::sqrt(p2), s = a + b;
            return (p2 * q1 / a + p1 * q2 / b) / (4.0 * s * s * s);
        }
        case TargetKind::Neyman: {
            const double a = std::sqrt(p1 * q1), b = std::sqrt(p2 * q2), s = a + b;
            const double d1 = 1.0 - 2.0 * p1, d2 = 1.0 - 2.0 * p2;
            return (p2 * q2 * d1 * d1 / a + p1 * q1 * d2 * d2 / b) / (4.0 * s * s * s);
        }
    }
    return 0.0;
}

Matrix variability_comparison(VariabilityModel model, TargetKind target, std::span<const double> p,
                          std::optional<double> gamma) {
    const Matrix lb = lower_bound(target, p);
    const std::vector<double> r = rho(target, p);
    const Matrix allocation = Matrix::diagonal(r) - Matrix::outer(r);
    switch (model) {
        case VariabilityModel::Seu: return allocation + 6.0 * lb;
        case VariabilityModel::Gdl: return 2.0 * lb;
        case VariabilityModel::Dbcd: {
            if (!gamma) throw std::invalid_argument("variability_comparison: gamma is required for the DBCD row");
            if (!(*gamma >= 0.0)) throw std::invalid_argument("variability_comparison: gamma must be >= 0");
            if (std::isinf(*gamma)) return lb;
            const double g = *gamma;
            return (1.0 / (1.0 + 2.0 * g)) * allocation + ((2.0 + 2.0 * g) / (1.0 + 2.0 * g)) * lb;
        }
    }
    return lb;
}

std::vector<WorkedExample> worked_examples(std::span<const double> p, double gamma) {
    check_two_arm(p);
    const double p1 = p[0], p2 = p[1], q1 = 1.0 - p1, q2 = 1.0 - p2;
    const double inv = 1.0 / (1.0 + 2.0 * gamma);
    const double half_tail = (1.0 + gamma) / (2.0 * (1.0 + 2.0 * gamma));

    const double s_urn = q1 + q2;
    const double urn = q1 * q2 * (p1 + p2) / std::pow(s_urn, 3) + 2.0 * q1 * q2 * inv / std::pow(s_urn, 3);

    const double a = std::sqrt(p1 * q1), b = std::sqrt(p2 * q2), s_ney = a + b;
    const double neyman = std::sqrt(p1 * q1 * p2 * q2) * inv / (s_ney * s_ney) +
                          half_tail / std::pow(s_ney, 3) *
                              (p2 * q2 * (q1 - p1) * (q1 - p1) / a + p1 * q1 * (q2 - p2) * (q2 - p2) / b);

    const double c = std::sqrt(p1), d = std::sqrt(p2), s_rs = c + d;
    const double rsihr = std::sqrt(p1 * p2) * inv / (s_rs * s_rs) +
                         half_tail / std::pow(s_rs, 3) * (p2 * q1 / c + p1 * q2 / d);

    std::vector<WorkedExample> out;
    for (auto [target, closed] : {std::pair{TargetKind::UrnProportion, urn},
                                  std::pair{TargetKind::Neyman, neyman},
                                  std::pair{TargetKind::Rsihr, rsihr}}) {
        const double general = dbcd_variance(target, p, gamma)(0, 0);
        out.push_back({target, closed, general, std::abs(closed - general)});
    }
    return out;
}

}  // namespace alloclab
