#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "qgh/algebra.hpp"

namespace qgh {

/// Bosonic Fock space over finitely many momentum modes, truncated at a
/// total occupation cutoff. The basis enumerates all occupation tuples
/// (n_1..n_K) with Σ n_k ≤ N in lexicographic order, so the vacuum tuple
/// (0..0) sits at index 0; dim = C(N+K, K).
class TruncatedFock {
public:
    TruncatedFock(std::vector<double> momenta, int cutoff)
        : momenta_(std::move(momenta)), cutoff_(cutoff) {
        if (momenta_.empty()) throw std::invalid_argument("need at least one mode");
        for (double p : momenta_)
            if (p < 0) throw std::invalid_argument("momenta must be nonnegative");
        if (cutoff_ < 0) throw std::invalid_argument("cutoff must be nonnegative");
        std::vector<int> tuple(momenta_.size(), 0);
        enumerate(tuple, 0, cutoff_);
        for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = static_cast<int>(i);
    }

    int modes() const { return static_cast<int>(momenta_.size()); }
    int cutoff() const { return cutoff_; }
    const std::vector<double>& momenta() const { return momenta_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::vector<int>>& basis() const { return basis_; }
    const std::vector<int>& tuple(int i) const { return basis_[i]; }

    int index_of(const std::vector<int>& tuple) const {
        auto it = index_.find(tuple);
        return it == index_.end() ? -1 : it->second;
    }

    /// Vacuum vector (1, 0, 0, ...).
    Vec vacuum() const {
        Vec v = Vec::Zero(dim());
        v(0) = 1.0;
        return v;
    }

private:
    void enumerate(std::vector<int>& tuple, std::size_t mode, int remaining) {
        if (mode == tuple.size()) {
            basis_.push_back(tuple);
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            tuple[mode] = n;
            enumerate(tuple, mode + 1, remaining - n);
        }
        tuple[mode] = 0;
    }

    std::vector<double> momenta_;
    int cutoff_;
    std::vector<std::vector<int>> basis_;
    std::map<std::vector<int>, int> index_;
};

/// Single-particle energy ω_m(p) = sqrt(m² + p²).
inline double dispersion(double m, double p) {
    if (m < 0 || p < 0) throw std::invalid_argument("dispersion needs nonnegative mass and momentum");
    return std::sqrt(m * m + p * p);
}

/// Energies E_m(n) = Σ_k n_k ω_m(p_k) per basis tuple; vacuum energy 0.
inline Eigen::VectorXd energies(const TruncatedFock& fock, double m) {
    Eigen::VectorXd e(fock.dim());
    for (int i = 0; i < fock.dim(); ++i) {
        double s = 0.0;
        const auto& n = fock.tuple(i);
        for (int k = 0; k < fock.modes(); ++k) s += n[k] * dispersion(m, fock.momenta()[k]);
        e(i) = s;
    }
    return e;
}

/// Diagonal of the heat semigroup e^{-β H_m}: entries e^{-β E_m(n)} ∈ (0, 1],
/// vacuum entry exactly 1.
inline Eigen::VectorXd semigroup_diag(const TruncatedFock& fock, double m, double beta) {
    if (beta <= 0) throw std::invalid_argument("beta must be positive");
    Eigen::VectorXd e = energies(fock, m);
    for (int i = 0; i < e.size(); ++i) e(i) = std::exp(-beta * e(i));
    return e;
}

inline Mat semigroup(const TruncatedFock& fock, double m, double beta) {
    return semigroup_diag(fock, m, beta).cast<cplx>().asDiagonal();
}

/// Smeared field operator φ(f) = Σ_k (conj(f_k) a_k + f_k a_k†) compressed to
/// the truncated space: creation amplitudes √(n_k+1) are zeroed when the
/// target leaves the cutoff, which keeps the matrix exactly Hermitian.
inline Mat field_operator(const TruncatedFock& fock, const Vec& f) {
    if (f.size() != fock.modes()) throw std::invalid_argument("coefficient tuple has wrong length");
    Mat phi = Mat::Zero(fock.dim(), fock.dim());
    for (int i = 0; i < fock.dim(); ++i) {
        std::vector<int> n = fock.tuple(i);
        for (int k = 0; k < fock.modes(); ++k) {
            if (n[k] > 0) {  // annihilation
                n[k] -= 1;
                int j = fock.index_of(n);
                phi(j, i) += std::conj(f(k)) * std::sqrt(static_cast<double>(n[k] + 1));
                n[k] += 1;
            }
            n[k] += 1;  // creation, zeroed past the cutoff
            int j = fock.index_of(n);
            if (j >= 0) phi(j, i) += f(k) * std::sqrt(static_cast<double>(n[k]));
            n[k] -= 1;
        }
    }
    return phi;
}

/// Truncated Weyl operator exp(i φ(f)), exactly as the exponential of the
/// skew-Hermitian i·φ via spectral decomposition of the Hermitian generator.
inline Mat weyl(const TruncatedFock& fock, const Vec& f) {
    Mat phi = field_operator(fock, f);
    if (phi.cwiseAbs().maxCoeff() == 0.0) return Mat::Identity(fock.dim(), fock.dim());
    Eigen::SelfAdjointEigenSolver<Mat> es(phi);
    Vec phases(fock.dim());
    for (int i = 0; i < fock.dim(); ++i) phases(i) = std::exp(cplx(0.0, es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qgh
