#include "lbm/collision.hpp"

#include <algorithm>
#include <cmath>

namespace lbm {

namespace {

struct Tables {
    std::array<std::array<int, 3>, 27> exponents;  // canonical row -> (qx,qy,qz)
    std::array<int, 27> degree;
    std::array<int, 27> dir_to_tensor;  // direction i -> (cx+1) + 3(cy+1) + 9(cz+1)
    std::array<int, 27> row_to_tensor;  // canonical row -> qx + 3 qy + 9 qz
    std::array<int, 27> tensor_to_row;
};

Tables build_tables() {
    Tables t;
    std::vector<std::array<int, 3>> q;
    for (int qz = 0; qz <= 2; ++qz)
        for (int qy = 0; qy <= 2; ++qy)
            for (int qx = 0; qx <= 2; ++qx) q.push_back({qx, qy, qz});
    std::stable_sort(q.begin(), q.end(), [](const auto& a, const auto& b) {
        int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
        if (da != db) return da < db;
        if (a[2] != b[2]) return a[2] < b[2];
        if (a[1] != b[1]) return a[1] < b[1];
        return a[0] < b[0];
    });
    for (int r = 0; r < 27; ++r) {
        t.exponents[r] = q[r];
        t.degree[r] = q[r][0] + q[r][1] + q[r][2];
        t.row_to_tensor[r] = q[r][0] + 3 * q[r][1] + 9 * q[r][2];
        t.tensor_to_row[t.row_to_tensor[r]] = r;
    }
    const auto& lat = LatticeD3Q27::instance();
    for (int i = 0; i < 27; ++i)
        t.dir_to_tensor[i] =
            (lat.c[i][0] + 1) + 3 * (lat.c[i][1] + 1) + 9 * (lat.c[i][2] + 1);
    return t;
}

const Tables& tables() {
    static const Tables t = build_tables();
    return t;
}

// One forward 3-point stage along the axis with element stride `stride`:
// m_q = sum_c (c - 1 - s)^q v_c for q in {0,1,2}.
inline void forward_axis(double* t, int stride, double s) {
    const double x0 = -1.0 - s, x1 = -s, x2 = 1.0 - s;
    const double x0s = x0 * x0, x1s = x1 * x1, x2s = x2 * x2;
    for (int hi = 0; hi < 27; hi += stride * 3) {
        for (int lo = 0; lo < stride; ++lo) {
            double* p = t + hi + lo;
            const double v0 = p[0], v1 = p[stride], v2 = p[2 * stride];
            p[0] = v0 + v1 + v2;
            p[stride] = x0 * v0 + x1 * v1 + x2 * v2;
            p[2 * stride] = x0s * v0 + x1s * v1 + x2s * v2;
        }
    }
}

// Inverse stage: Lagrange coefficients of the shifted 3-node basis. The
// denominators are node differences (c - d), independent of the shift.
inline void inverse_axis(double* t, int stride, double s) {
    const double s2 = s * s;
    const double b00 = 0.5 * (s2 - s), b01 = 0.5 * (2.0 * s - 1.0), b02 = 0.5;
    const double b10 = 1.0 - s2, b11 = -2.0 * s, b12 = -1.0;
    const double b20 = 0.5 * (s2 + s), b21 = 0.5 * (2.0 * s + 1.0), b22 = 0.5;
    for (int hi = 0; hi < 27; hi += stride * 3) {
        for (int lo = 0; lo < stride; ++lo) {
            double* p = t + hi + lo;
            const double m0 = p[0], m1 = p[stride], m2 = p[2 * stride];
            p[0] = b00 * m0 + b01 * m1 + b02 * m2;
            p[stride] = b10 * m0 + b11 * m1 + b12 * m2;
            p[2 * stride] = b20 * m0 + b21 * m1 + b22 * m2;
        }
    }
}

inline void forward_transform(double* t, const Vec3& shift) {
    forward_axis(t, 1, shift.x);
    forward_axis(t, 3, shift.y);
    forward_axis(t, 9, shift.z);
}

inline void inverse_transform(double* t, const Vec3& shift) {
    inverse_axis(t, 1, shift.x);
    inverse_axis(t, 3, shift.y);
    inverse_axis(t, 9, shift.z);
}

// Per-axis Lagrange coefficients as polynomials in the shift s:
// basis_poly[c][q][e] is the u^e coefficient of Binv[c][q](s).
constexpr double kBasisPoly[3][3][3] = {
    {{0.0, -0.5, 0.5}, {-0.5, 1.0, 0.0}, {0.5, 0.0, 0.0}},
    {{1.0, 0.0, -1.0}, {0.0, -2.0, 0.0}, {-1.0, 0.0, 0.0}},
    {{0.0, 0.5, 0.5}, {0.5, 1.0, 0.0}, {0.5, 0.0, 0.0}},
};

}  // namespace

const std::array<std::array<int, 3>, 27>& moment_exponents() { return tables().exponents; }

int moment_degree(int row) { return tables().degree[row]; }

CollisionModel CollisionModel::bgk(double nu) {
    CollisionModel m;
    m.kind = CollisionKind::BGK;
    m.nu = nu;
    m.rates.fill(m.omega_nu());
    m.validate();
    return m;
}

CollisionModel CollisionModel::raw_mrt(double nu, double high_order_rate) {
    CollisionModel m;
    m.kind = CollisionKind::RawMomentMRT;
    m.nu = nu;
    for (int r = 0; r < 27; ++r) {
        int d = moment_degree(r);
        m.rates[r] = d < 2 ? 1.0 : (d == 2 ? m.omega_nu() : high_order_rate);
    }
    m.validate();
    return m;
}

CollisionModel CollisionModel::central_mrt(double nu, double high_order_rate,
                                           RatePolicy policy) {
    CollisionModel m = raw_mrt(nu, high_order_rate);
    m.kind = CollisionKind::CentralMomentMRT;
    m.policy = policy;
    return m;
}

void CollisionModel::validate() const {
    if (!(nu > 0.0)) throw ConfigError("collision: viscosity must be > 0");
    for (int r = 0; r < 27; ++r) {
        if (moment_degree(r) < 2) continue;  // conserved-moment rates are irrelevant
        if (!(rates[r] > 0.0 && rates[r] < 2.0))
            throw ConfigError("collision: relaxation rate out of (0,2) at moment row " +
                              std::to_string(r));
    }
}

std::array<double, 27> equilibrium(double rho, const Vec3& u) {
    const auto& lat = LatticeD3Q27::instance();
    std::array<double, 27> feq;
    const double usq = 1.5 * u.norm2();
    for (int i = 0; i < 27; ++i) {
        const double cu = lat.c[i][0] * u.x + lat.c[i][1] * u.y + lat.c[i][2] * u.z;
        feq[i] = lat.w[i] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - usq);
    }
    return feq;
}

std::array<double, 27> adaptive_rates(const LocalNodeState& local, const CollisionModel& model) {
    std::array<double, 27> rates = model.rates;
    if (model.policy == RatePolicy::Constant) return rates;
    // Default heuristic: relax high-order rates toward 1 as the local
    // non-equilibrium magnitude grows.
    double eps = 0.0;
    for (double d : local.f_dev) eps += std::abs(d);
    eps /= std::max(local.rho, 1e-300);
    const double s = eps / (eps + model.policy_eps0);
    for (int r = 0; r < 27; ++r) {
        if (moment_degree(r) < 3) continue;
        double v = rates[r] + (1.0 - rates[r]) * s;
        rates[r] = std::clamp(v, 0.05, 1.95);
    }
    return rates;
}

void collide_range(const std::array<double, 27>& f, double rho, const Vec3& u,
                   const CollisionModel& model, int i_begin, int i_end, double* out) {
    const std::array<double, 27> feq = equilibrium(rho, u);
    if (model.kind == CollisionKind::BGK) {
        const double omega = model.omega_nu();
        for (int i = i_begin; i < i_end; ++i) out[i - i_begin] = -omega * (f[i] - feq[i]);
        return;
    }

    const Tables& tb = tables();
    double t[27];
    for (int i = 0; i < 27; ++i) t[tb.dir_to_tensor[i]] = f[i] - feq[i];

    const Vec3 shift = model.kind == CollisionKind::CentralMomentMRT ? u : Vec3{};
    forward_transform(t, shift);

    if (model.policy == RatePolicy::Constant) {
        for (int mu = 0; mu < 27; ++mu) t[mu] *= model.rates[tb.tensor_to_row[mu]];
    } else {
        LocalNodeState local;
        local.rho = rho;
        local.u = u;
        for (int i = 0; i < 27; ++i) local.f_dev[i] = f[i] - feq[i];
        const auto rates = adaptive_rates(local, model);
        for (int mu = 0; mu < 27; ++mu) t[mu] *= rates[tb.tensor_to_row[mu]];
    }

    inverse_transform(t, shift);
    for (int i = i_begin; i < i_end; ++i) out[i - i_begin] = -t[tb.dir_to_tensor[i]];
}

std::array<double, 27> collide(const std::array<double, 27>& f, double rho, const Vec3& u,
                               const CollisionModel& model) {
    std::array<double, 27> omega;
    collide_range(f, rho, u, model, 0, 27, omega.data());
    return omega;
}

void collide_split(const std::array<double, 27>& f, double rho, const Vec3& u,
                   const CollisionModel& model, int pass, double* out) {
    if (pass == 0)
        collide_range(f, rho, u, model, 0, kSplitBoundary, out);
    else
        collide_range(f, rho, u, model, kSplitBoundary, 27, out);
}

std::array<double, 27> moments_of(const std::array<double, 27>& f, const Vec3& shift) {
    const Tables& tb = tables();
    double t[27];
    for (int i = 0; i < 27; ++i) t[tb.dir_to_tensor[i]] = f[i];
    forward_transform(t, shift);
    std::array<double, 27> m;
    for (int r = 0; r < 27; ++r) m[r] = t[tb.row_to_tensor[r]];
    return m;
}

std::array<double, 27> scaled_moment_deviations(const std::array<double, 27>& f, double rho,
                                                const Vec3& u, const CollisionModel& model) {
    const std::array<double, 27> feq = equilibrium(rho, u);
    std::array<double, 27> dev;
    for (int i = 0; i < 27; ++i) dev[i] = f[i] - feq[i];
    const Vec3 shift = model.kind == CollisionKind::CentralMomentMRT ? u : Vec3{};
    std::array<double, 27> m = moments_of(dev, shift);
    for (int r = 0; r < 27; ++r) m[r] *= model.rates[r];
    return m;
}

MonomialTable::MonomialTable() : coeff_(27 * 27 * 27, 0.0) {}

int MonomialTable::active_monomials() const {
    int n = 0;
    for (int p = 0; p < 27; ++p) {
        bool used = false;
        for (int i = 0; i < 27 && !used; ++i)
            for (int j = 0; j < 27; ++j)
                if (coeff(i, p, j) != 0.0) {
                    used = true;
                    break;
                }
        if (used) ++n;
    }
    return n;
}

std::array<double, 27> MonomialTable::evaluate(const std::array<double, 27>& ftilde,
                                               const Vec3& u) const {
    // Shared monomial values, computed once and read back per output.
    double mono[27];
    double ux[3] = {1.0, u.x, u.x * u.x};
    double uy[3] = {1.0, u.y, u.y * u.y};
    double uz[3] = {1.0, u.z, u.z * u.z};
    for (int pz = 0; pz < 3; ++pz)
        for (int py = 0; py < 3; ++py)
            for (int px = 0; px < 3; ++px)
                mono[px + 3 * py + 9 * pz] = ux[px] * uy[py] * uz[pz];

    std::array<double, 27> omega;
    for (int i = 0; i < 27; ++i) {
        double acc = 0.0;
        for (int p = 0; p < 27; ++p) {
            double w = 0.0;
            for (int j = 0; j < 27; ++j) w += coeff(i, p, j) * ftilde[j];
            acc += mono[p] * w;
        }
        omega[i] = -acc;
    }
    return omega;
}

MonomialTable build_monomial_table(const CollisionModel& model) {
    if (model.kind != CollisionKind::CentralMomentMRT)
        throw ConfigError("monomial table requires a central-moment model");
    const auto& lat = LatticeD3Q27::instance();
    const Tables& tb = tables();
    MonomialTable table;
    for (int i = 0; i < 27; ++i) {
        const int ci[3] = {lat.c[i][0] + 1, lat.c[i][1] + 1, lat.c[i][2] + 1};
        for (int j = 0; j < 27; ++j) {
            const auto& q = tb.exponents[j];
            for (int pz = 0; pz < 3; ++pz)
                for (int py = 0; py < 3; ++py)
                    for (int px = 0; px < 3; ++px) {
                        double v = kBasisPoly[ci[0]][q[0]][px] * kBasisPoly[ci[1]][q[1]][py] *
                                   kBasisPoly[ci[2]][q[2]][pz];
                        if (v != 0.0) table.coeff(i, px + 3 * py + 9 * pz, j) += v;
                    }
        }
    }
    return table;
}

}  // namespace lbm
