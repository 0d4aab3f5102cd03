#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgh/decompose.hpp"
#include "qgh/distance.hpp"
#include "qgh/fock.hpp"
#include "qgh/lipnorm.hpp"
#include "qgh/net.hpp"
#include "qgh/util.hpp"

namespace qgh {

/// Parameters of a truncated free scalar field experiment. Test functions are
/// reduced to per-mode coefficient tuples; "local algebra" means the algebra
/// generated by the corresponding truncated Weyl operators.
struct FreeFieldConfig {
    double beta = 1.0;
    double base_mass = 0.0;
    std::vector<double> masses;  // grid, ascending
    std::vector<Vec> generators;
    std::shared_ptr<const TruncatedFock> fock;

    void validate() const {
        if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
        if (!fock) throw std::invalid_argument("missing Fock space");
        if (masses.empty()) throw std::invalid_argument("mass grid is empty");
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (masses[i] < 0) throw std::invalid_argument("masses must be nonnegative");
            if (i > 0 && masses[i] < masses[i - 1])
                throw std::invalid_argument("mass grid must be sorted ascending");
        }
        if (base_mass < 0) throw std::invalid_argument("base mass must be nonnegative");
        if (generators.empty()) throw std::invalid_argument("need at least one generator");
        for (const auto& f : generators) {
            if (f.size() != fock->modes()) throw std::invalid_argument("generator tuple has wrong length");
            if (f.norm() == 0.0) throw std::invalid_argument("generator tuples must be nonzero");
        }
    }
};

/// Default smearing coefficients: one fixed generic tuple, scaled so the
/// Weyl phases stay inside (-π, π) (no wrap-around degeneracies in the
/// generated algebra).
inline std::vector<Vec> default_generators(int modes) {
    Rng rng(0xf0c5, 1);
    Vec f(modes);
    for (int k = 0; k < modes; ++k) f(k) = rng.cgaussian();
    f *= 0.8 / f.norm();
    return {f};
}

inline FreeFieldConfig default_freefield_config() {
    FreeFieldConfig cfg;
    cfg.beta = 1.0;
    cfg.base_mass = 0.0;
    cfg.masses = {0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0};
    cfg.fock = std::make_shared<TruncatedFock>(std::vector<double>{0.5, 1.0, 2.0}, 4);
    cfg.generators = default_generators(3);
    return cfg;
}

/// The algebra generated by the Weyl operators of the given coefficient
/// tuples, with Ω = vacuum. The block structure is recovered numerically;
/// whether Ω is separating is decided by the rank test.
inline AlgebraPtr local_algebra(const TruncatedFock& fock, const std::vector<Vec>& generators) {
    if (generators.empty()) throw std::invalid_argument("need at least one generator");
    std::vector<Mat> weyls;
    for (const auto& f : generators) weyls.push_back(weyl(fock, f));
    return algebra_from_generators(weyls, fock.dim(), fock.vacuum());
}

/// Orthonormal basis of the cyclic subspace A·Ω for the algebra generated by
/// the given matrices, with Ω itself as the first column. Built from exact
/// generator words, so the subspace is invariant under the generators to
/// machine precision.
inline Mat cyclic_subspace(const std::vector<Mat>& generators, const Vec& omega) {
    int D = static_cast<int>(omega.size());
    std::vector<Vec> cols;
    auto append = [&](Vec v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& c : cols) v -= c.dot(v) * c;
        double n = v.norm();
        if (n <= 1e-9) return false;
        cols.push_back(v / n);
        return true;
    };
    append(omega / omega.norm());
    std::vector<Mat> gens;
    for (const auto& g : generators) {
        gens.push_back(g);
        gens.push_back(g.adjoint());
    }
    std::size_t frontier = 0;
    while (frontier < cols.size() && static_cast<int>(cols.size()) < D) {
        std::size_t end = cols.size();
        for (std::size_t i = frontier; i < end; ++i)
            for (const auto& g : gens) append(g * cols[i]);
        frontier = end;
    }
    Mat B(D, static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) B.col(static_cast<int>(i)) = cols[i];
    return B;
}

/// The algebra in the representation its vacuum vector generates. Truncation
/// breaks the Reeh-Schlieder property on the full Fock space, but compressing
/// to the cyclic subspace A·Ω (which is invariant under the *-closed A)
/// restores the separating property for abelian algebras; the norm family
/// ‖e^{-βH} A Ω‖ only ever sees this subspace of A's action.
struct VacuumRepresentation {
    AlgebraPtr algebra;  // original when already separating, else compressed
    Mat subspace;        // ambient isometry onto the carrier of `algebra`
    bool reduced = false;
};

inline VacuumRepresentation vacuum_representation(const AlgebraPtr& alg,
                                                  const std::vector<Mat>& ambient_generators) {
    if (omega_is_separating(alg))
        return {alg, Mat::Identity(alg->ambient_dim(), alg->ambient_dim()), false};
    Mat B = cyclic_subspace(ambient_generators, alg->omega());
    std::vector<Mat> reduced;
    for (const auto& g : ambient_generators) reduced.push_back(B.adjoint() * g * B);
    Vec omega_red = B.adjoint() * alg->omega();
    auto reduced_alg =
        algebra_from_generators(reduced, static_cast<int>(B.cols()), std::move(omega_red));
    return {reduced_alg, B, true};
}

/// The free-field dual-Lip-norm A ↦ ‖e^{-βH_m} A Ω‖ on the given algebra
/// (kernel kind with T the heat semigroup and Ω the vacuum). Construction
/// fails with norm_property_error when Ω is not separating for the algebra.
inline DualLipNormSpec free_lip_norm(const AlgebraPtr& algebra, const TruncatedFock& fock, double m,
                                     double beta) {
    if (algebra->ambient_dim() != fock.dim())
        throw algebra_mismatch("algebra does not act on this Fock space");
    return DualLipNormSpec::kernel(algebra, semigroup(fock, m, beta), fock.vacuum());
}

/// Certified bound on sup_{‖A‖≤1} ‖(e^{-βH_{m'}} - e^{-βH_m}) A Ω‖ in
/// truncation: exact maximum of |e^{-βE_{m'}(n)} - e^{-βE_m(n)}| over the
/// occupation basis (the operator norm of the diagonal difference), since
/// ‖AΩ‖ ≤ 1.
inline double mass_gap_bound(const TruncatedFock& fock, double m, double mp, double beta) {
    return (semigroup_diag(fock, mp, beta) - semigroup_diag(fock, m, beta)).cwiseAbs().maxCoeff();
}

struct SweepRow {
    double m_prime = 0.0;
    double certified_bound = 0.0;
    double net_sup = 0.0;
    double qgh_upper = 0.0;       // net Hausdorff of the kernel bridge
    double qgh_upper_slack = 0.0; // covering slack to add for a ball-to-ball bound
};

struct SweepOptions {
    int net_count = 512;
    int covering_probes = 64;
    std::uint64_t seed = 0x5eed;
};

struct SweepResult {
    double base_mass = 0.0;
    double beta = 0.0;
    std::vector<SweepRow> rows;
};

/// Mass sweep: for each grid mass m', the certified enumeration bound, the
/// net supremum of ‖(e^{-βH_{m'}} - e^{-βH_m}) A Ω‖ over a unit-ball net of
/// the algebra, and the distance estimator's kernel-bridge Hausdorff value
/// over shared 2x2 positive-ball nets. The norm family is evaluated in the
/// vacuum representation of the configured algebra; configurations whose
/// vacuum fails to separate even there are rejected.
inline SweepResult mass_sweep(const FreeFieldConfig& cfg, const SweepOptions& opts = {}) {
    cfg.validate();
    const TruncatedFock& fock = *cfg.fock;
    AlgebraPtr full = local_algebra(fock, cfg.generators);
    std::vector<Mat> weyls;
    for (const auto& f : cfg.generators) weyls.push_back(weyl(fock, f));
    VacuumRepresentation rep = vacuum_representation(full, weyls);
    if (!omega_is_separating(rep.algebra))
        throw norm_property_error("vacuum is not separating for the configured algebra");
    const AlgebraPtr& algebra = rep.algebra;
    const Mat& B = rep.subspace;
    Vec omega_red = algebra->omega();

    auto reduced_semigroup = [&](double m) {
        return Mat(B.adjoint() * semigroup(fock, m, cfg.beta) * B);
    };

    Net ball = build_net(algebra, NetTarget::unit_ball, opts.net_count, opts.seed);
    {
        Rng cov_rng(opts.seed, 21);
        ball.covering_estimate = estimate_covering_opnorm(ball, opts.covering_probes, cov_rng);
        ball.covering_method = CoveringMethod::empirical;
    }
    // One shared 2x2 net serves both sides of every estimate; with identical
    // nets the bridge Hausdorff value at m' = m is exactly zero.
    Net net2 = build_net(algebra, NetTarget::positive_unit_ball_2x2, opts.net_count, opts.seed + 1);

    std::vector<Vec> ball_images;  // A Ω per ball-net point
    ball_images.reserve(ball.points.size());
    for (const auto& p : ball.points) ball_images.push_back(act(p, omega_red));

    Mat base_op = reduced_semigroup(cfg.base_mass);
    DualLipNormSpec base_norm = DualLipNormSpec::kernel(algebra, base_op, omega_red);
    RadiusEstimate base_radius = radius(base_norm, ball);

    SweepResult result;
    result.base_mass = cfg.base_mass;
    result.beta = cfg.beta;
    for (double mp : cfg.masses) {
        SweepRow row;
        row.m_prime = mp;
        row.certified_bound = mass_gap_bound(fock, cfg.base_mass, mp, cfg.beta);

        Mat op_mp = reduced_semigroup(mp);
        Mat diff = op_mp - base_op;
        for (const auto& img : ball_images)
            row.net_sup = std::max(row.net_sup, (diff * img).norm());

        DualLipNormSpec norm_mp = DualLipNormSpec::kernel(algebra, op_mp, omega_red);
        BridgeSpec bridge = kernel_bridge(op_mp, base_op, omega_red, norm_mp, base_norm);
        EstimateOptions eopts;
        eopts.covering_probes = opts.covering_probes;
        eopts.seed = opts.seed + 2;
        DistanceEstimate est = estimate_distance(norm_mp, base_norm, {bridge}, net2, net2,
                                                 radius(norm_mp, ball), base_radius, eopts);
        row.qgh_upper = est.net_hausdorff;
        row.qgh_upper_slack = est.net_slack_M + est.net_slack_N;
        result.rows.push_back(row);
    }
    return result;
}

/// CSV with the exact header m_prime,certified_bound,net_sup,qgh_upper and
/// shortest-round-trip decimals.
inline std::string sweep_csv(const SweepResult& r) {
    std::string out = "m_prime,certified_bound,net_sup,qgh_upper\n";
    for (const auto& row : r.rows) {
        out += format_double(row.m_prime) + ',' + format_double(row.certified_bound) + ',' +
               format_double(row.net_sup) + ',' + format_double(row.qgh_upper) + '\n';
    }
    return out;
}

inline nlohmann::json sweep_json(const SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"m_prime", row.m_prime},
                        {"certified_bound", row.certified_bound},
                        {"net_sup", row.net_sup},
                        {"qgh_upper", row.qgh_upper},
                        {"net_slack", row.qgh_upper_slack}});
    return nlohmann::json{{"base_mass", r.base_mass}, {"beta", r.beta}, {"rows", rows}};
}

}  // namespace qgh
