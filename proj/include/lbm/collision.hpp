/// @file collision.hpp
/// @brief Collision operators: BGK, raw-moment MRT and central-moment MRT.
///
/// MRT relaxation is Omega = -Minv * D * M * (f - feq), where M projects onto
/// the monomial moment basis (c - s)^q with s = 0 for raw moments and s = u
/// for central moments. M factorizes per axis into 3x3 Vandermonde blocks, so
/// the production evaluator applies three forward stages, the diagonal rates,
/// and three inverse stages per node instead of dense 27x27 products.
///
/// Moment rows are ordered by total monomial degree (ties by (q_z,q_y,q_x)
/// lexicographic), so row 0 is density and rows 1-3 are x/y/z momentum.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lbm/core.hpp"
#include "lbm/lattice.hpp"

namespace lbm {

enum class CollisionKind { BGK, RawMomentMRT, CentralMomentMRT };

enum class RatePolicy { Constant, RelaxTowardOne };

/// Exponents (q_x,q_y,q_z) of moment row r in the canonical order.
const std::array<std::array<int, 3>, 27>& moment_exponents();

/// Total degree q_x+q_y+q_z of moment row r.
int moment_degree(int row);

struct CollisionModel {
    CollisionKind kind = CollisionKind::BGK;
    double nu = 0.1;                 // kinematic viscosity, lattice units
    std::array<double, 27> rates{};  // diagonal of D, canonical moment order
    RatePolicy policy = RatePolicy::Constant;
    double policy_eps0 = 0.01;  // non-equilibrium scale of the default policy

    double omega_nu() const { return 1.0 / (3.0 * nu + 0.5); }

    static CollisionModel bgk(double nu);
    static CollisionModel raw_mrt(double nu, double high_order_rate = 1.0);
    static CollisionModel central_mrt(double nu, double high_order_rate = 1.0,
                                      RatePolicy policy = RatePolicy::Constant);

    /// Checks 0 < rate < 2 for all non-conserved moments. Throws ConfigError.
    void validate() const;
};

/// Second-order truncated Maxwellian; moments are rho and rho*u by construction.
std::array<double, 27> equilibrium(double rho, const Vec3& u);

/// Lattice Mach guard used by callers to flag instability (|u| >= 0.4).
inline bool mach_limit_exceeded(const Vec3& u) { return u.norm2() >= 0.16; }

/// First pass of the split evaluation covers output indices [0, 14).
inline constexpr int kSplitBoundary = 14;

/// Full collision result Omega for one node.
std::array<double, 27> collide(const std::array<double, 27>& f, double rho, const Vec3& u,
                               const CollisionModel& model);

/// Split evaluation: pass 0 writes Omega_0..13, pass 1 writes Omega_14..26
/// into out[0..n). Arithmetic per output index is identical to collide().
void collide_split(const std::array<double, 27>& f, double rho, const Vec3& u,
                   const CollisionModel& model, int pass, double* out);

/// Shared kernel: computes Omega for output indices [i_begin, i_end).
void collide_range(const std::array<double, 27>& f, double rho, const Vec3& u,
                   const CollisionModel& model, int i_begin, int i_end, double* out);

/// Moments sum_i f_i * prod_a (c_{i,a} - shift_a)^{q_a} in canonical row order.
std::array<double, 27> moments_of(const std::array<double, 27>& f, const Vec3& shift);

/// ftilde = D*M(u)*(f - feq), the input vector of the monomial table.
std::array<double, 27> scaled_moment_deviations(const std::array<double, 27>& f, double rho,
                                                const Vec3& u, const CollisionModel& model);

/// Local fields handed to the adaptive rate policy.
struct LocalNodeState {
    double rho = 1.0;
    Vec3 u;
    std::array<double, 27> f_dev{};  // f - feq
};

/// Per-node relaxation rates after applying the model's policy. The constant
/// policy returns the configured vector unchanged; heuristic outputs are
/// clamped into [0.05, 1.95].
std::array<double, 27> adaptive_rates(const LocalNodeState& local, const CollisionModel& model);

/// Expansion of Minv(u) into monomials u_x^p0 u_y^p1 u_z^p2 with p in {0,1,2}^3:
/// Omega_i = -sum_p u^p * sum_j coeff(i,p,j) * ftilde_j. The per-monomial
/// weights are what the dense expression shares across outputs.
class MonomialTable {
public:
    MonomialTable();

    double coeff(int i, int p, int j) const { return coeff_[(i * 27 + p) * 27 + j]; }
    double& coeff(int i, int p, int j) { return coeff_[(i * 27 + p) * 27 + j]; }

    /// Number of monomials with a nonzero weight for at least one output.
    int active_monomials() const;

    std::array<double, 27> evaluate(const std::array<double, 27>& ftilde, const Vec3& u) const;

private:
    std::vector<double> coeff_;  // [i][p][j], p = px + 3*py + 9*pz
};

/// Requires a central-moment model (the raw basis has no u-dependence).
MonomialTable build_monomial_table(const CollisionModel& model);

}  // namespace lbm
