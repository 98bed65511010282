#ifndef GCM_LATTICES_HPP
#define GCM_LATTICES_HPP

#include <string>
#include <vector>

#include "gcm/bounds.hpp"

namespace gcm::lattices {

enum class LatticeName { Zn, A2, D4, E8, Leech };

// A named lattice in its standard presentation. Theta coefficients are
// generated on demand; norms are integers in every presentation used here.
struct LatticeModel {
    LatticeName name = LatticeName::Zn;
    int dim = 0;
    double det_covolume = 1.0;
    std::string label;
};

LatticeModel make_lattice(LatticeName name, int zn_dim = 0);
// Labels: "Z<n>" (e.g. "Z1", "Z24"), "A2", "D4", "E8", "Leech".
LatticeModel lattice_from_label(const std::string& label);

struct ThetaCoefficient {
    long long norm = 0;  // squared length in the standard presentation
    long long count = 0; // representation count N(norm)
};

// Nonzero coefficients with 0 < norm <= max_norm, ascending. When cache_dir
// is nonempty, "<label>.theta" there is used as a plain-text "norm count"
// cache and regenerated if absent or too short.
std::vector<ThetaCoefficient> theta_coefficients(const LatticeModel& model, long long max_norm,
                                                 const std::string& cache_dir = "");

// tau(1..m_max) from Delta = q prod (1-q^m)^24, exact integers.
std::vector<long long> ramanujan_tau(int m_max);

// Gaussian energy of the lattice rescaled to density rho:
// sum_{l^2} N(l^2) exp(-alpha l^2 / s^2) with s = (rho det_covolume)^{1/n}.
bounds::BoundResult lattice_energy(const LatticeModel& model, double alpha, double rho,
                                   double tol = 1e-12, const std::string& cache_dir = "");

} // namespace gcm::lattices

#endif
