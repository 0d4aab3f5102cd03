#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgh/bridge.hpp"
#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/rng.hpp"

namespace qgh {

/// Lower/upper interval for the distance between two Lip-von Neumann
/// algebras, with the provenance of both bounds.
///
///   upper = min over candidate bridges of (net Hausdorff + covering slacks)
///   lower = max(0, |R_M - R_N| - radius slacks), floored by the upper bound
///
/// `net_hausdorff` keeps the winning bridge's raw (slack-free) net value.
struct DistanceEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::string bridge;
    double net_slack_M = 0.0;
    double net_slack_N = 0.0;
    std::array<double, 2> radii{0.0, 0.0};
    double net_hausdorff = 0.0;
};

inline nlohmann::json to_json(const DistanceEstimate& e) {
    return nlohmann::json{{"lower", e.lower},
                          {"upper", e.upper},
                          {"bridge", e.bridge},
                          {"slack", {{"M", e.net_slack_M}, {"N", e.net_slack_N}}},
                          {"radii", {e.radii[0], e.radii[1]}}};
}

struct EstimateOptions {
    int covering_probes = 64;
    std::uint64_t seed = 0x51700e75;
};

/// Covering slack of a 2x2 net under the lifted norm; the Hausdorff value of
/// any bridge over exact positive balls exceeds the net value by at most the
/// two nets' covering radii in their lifted norms.
inline double lifted_covering_slack(const Net& net, const DualLipNormSpec& L, int probes, Rng& rng) {
    DualLipNormSpec lifted = lift2(L, net.amplification);
    return estimate_covering(
        net, [&](const AlgebraElement& a, const AlgebraElement& b) { return lifted.eval(a - b); },
        probes, rng);
}

inline DistanceEstimate estimate_distance(const DualLipNormSpec& LM, const DualLipNormSpec& LN,
                                          const std::vector<BridgeSpec>& candidates, const Net& netM,
                                          const Net& netN, const RadiusEstimate& radM,
                                          const RadiusEstimate& radN, const EstimateOptions& opts = {}) {
    if (netM.target != NetTarget::positive_unit_ball_2x2 ||
        netN.target != NetTarget::positive_unit_ball_2x2)
        throw std::invalid_argument("distance estimation needs 2x2 positive-ball nets");
    if (!same_algebra(*netM.base, *LM.algebra()) || !same_algebra(*netN.base, *LN.algebra()))
        throw algebra_mismatch("nets do not match the norms' algebras");

    Rng rngM(opts.seed, 11), rngN(opts.seed, 13);
    double slackM = lifted_covering_slack(netM, LM, opts.covering_probes, rngM);
    double slackN = lifted_covering_slack(netN, LN, opts.covering_probes, rngN);

    auto endpoint_ok = [](const DualLipNormSpec& have, const DualLipNormSpec& want) {
        if (!same_algebra(*have.algebra(), *want.algebra())) return false;
        if (have.kind() == NormKind::tabulated && want.kind() == NormKind::tabulated) return true;
        return same_norm(have, want);
    };

    DistanceEstimate est;
    bool found = false;
    for (const auto& J : candidates) {
        if (!endpoint_ok(J.left_norm(), LM) || !endpoint_ok(J.right_norm(), LN)) continue;
        double h = net_hausdorff(J, netM, netN);
        double upper = h + slackM + slackN;
        if (!found || upper < est.upper) {
            est.upper = upper;
            est.net_hausdorff = h;
            est.bridge = J.name();
            found = true;
        }
    }
    if (!found) throw bridge_error("no valid bridge candidate");

    est.net_slack_M = slackM;
    est.net_slack_N = slackN;
    est.radii = {radM.value, radN.value};
    double lower = std::abs(radM.value - radN.value) - (radM.slack + radN.slack);
    est.lower = std::min(std::max(0.0, lower), est.upper);
    return est;
}

/// Hausdorff distance of the positive unit balls of two algebras on one
/// ambient space, under an Effros-Marechal norm of ambient differences.
inline double em_plus_distance(const Net& netM, const Net& netN, const DualLipNormSpec& em_norm) {
    if (netM.target != NetTarget::positive_unit_ball || netN.target != NetTarget::positive_unit_ball)
        throw std::invalid_argument("EM+ distance needs positive-unit-ball nets");
    if (netM.point_algebra->ambient_dim() != netN.point_algebra->ambient_dim())
        throw algebra_mismatch("algebras act on different ambient spaces");
    std::vector<Mat> XM, XN;
    XM.reserve(netM.points.size());
    XN.reserve(netN.points.size());
    for (const auto& p : netM.points) XM.push_back(embed(p));
    for (const auto& p : netN.points) XN.push_back(embed(p));
    auto one_sided = [&](const std::vector<Mat>& P, const std::vector<Mat>& Q) {
        auto worst = parallel::reduce_max(P.size(), [&](std::size_t i) {
            double best = -1.0;
            for (const auto& q : Q) {
                double v = em_norm.em_ambient(P[i] - q);
                if (best < 0 || v < best) best = v;
            }
            return best;
        });
        return worst.value;
    };
    return std::max(one_sided(XM, XN), one_sided(XN, XM));
}

/// Search for a coupler isometry minimizing the net Hausdorff value: random
/// restarts plus coordinate descent on a skew-Hermitian parametrization with
/// the exponential map. Any isometry yields a sound bound, so the search only
/// affects tightness. The objective is evaluated on net prefixes of at most
/// 128 points to keep the search cheap.
inline BridgeSpec optimize_coupler(const DualLipNormSpec& LM, const DualLipNormSpec& LN,
                                   const Net& netM, const Net& netN, int budget = 200,
                                   std::uint64_t seed = 0xc091e5) {
    int DM = LM.algebra()->ambient_dim(), DN = LN.algebra()->ambient_dim();
    if (DN < DM) throw bridge_error("coupler needs target ambient at least as large as source");

    auto prefix = [](const Net& net, std::size_t cap) {
        Net sub = net;
        if (sub.points.size() > cap) sub.points.resize(cap);
        return sub;
    };
    Net subM = prefix(netM, 128), subN = prefix(netN, 128);

    auto unitary_from = [&](const Eigen::VectorXd& theta) {
        Mat H = Mat::Zero(DN, DN);
        int t = 0;
        for (int i = 0; i < DN; ++i) H(i, i) = theta(t++);
        for (int i = 0; i < DN; ++i)
            for (int j = i + 1; j < DN; ++j) {
                H(i, j) = cplx(theta(t), theta(t + 1));
                H(j, i) = std::conj(H(i, j));
                t += 2;
            }
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        Vec phases(DN);
        for (int i = 0; i < DN; ++i) phases(i) = std::exp(cplx(0.0, es.eigenvalues()(i)));
        Mat U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        return Mat(U.leftCols(DM));
    };

    int evals = 0;
    auto objective = [&](const Eigen::VectorXd& theta) {
        ++evals;
        return net_hausdorff(coupler_bridge(unitary_from(theta), LM, LN), subM, subN);
    };

    int nparams = DN * DN;
    Rng rng(seed, 3);
    Eigen::VectorXd best_theta = Eigen::VectorXd::Zero(nparams);
    double best = objective(best_theta);
    for (int restart = 0; restart < 3 && evals < budget; ++restart) {
        Eigen::VectorXd theta(nparams);
        if (restart == 0) {
            theta.setZero();
        } else {
            for (int i = 0; i < nparams; ++i) theta(i) = (2.0 * rng.uniform() - 1.0) * M_PI;
        }
        double cur = restart == 0 ? best : objective(theta);
        double step = 0.8;
        while (evals < budget && step > 1e-3) {
            bool improved = false;
            for (int i = 0; i < nparams && evals < budget; ++i) {
                for (double sgn : {1.0, -1.0}) {
                    Eigen::VectorXd trial = theta;
                    trial(i) += sgn * step;
                    double v = objective(trial);
                    if (v < cur - 1e-15) {
                        cur = v;
                        theta = trial;
                        improved = true;
                        break;
                    }
                    if (evals >= budget) break;
                }
            }
            if (!improved) step *= 0.5;
        }
        if (cur < best) {
            best = cur;
            best_theta = theta;
        }
    }
    return coupler_bridge(unitary_from(best_theta), LM, LN);
}

}  // namespace qgh
