#include "couette/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "couette/error.hpp"

namespace couette {

namespace {

/// Squared seminorms |f|_k^2 for k = 0..3 (each multi-index counted once).
std::array<double, 4> seminorms2(const ScalarField& f) {
    std::array<double, 4> out{};
    // d1^a d2^b f for a + b <= 3, reusing lower-order x1 derivatives.
    ScalarField d1 = f;
    for (int a = 0; a <= 3; ++a) {
        if (a > 0) d1 = ddx1(d1);
        ScalarField d = d1;
        for (int b = 0; a + b <= 3; ++b) {
            if (b > 0) d = ddx2(d);
            out[a + b] += integrate(d * d);
        }
    }
    return out;
}

std::array<double, 2> low_seminorms2(const ScalarField& f) {
    const ScalarField d1 = ddx1(f), d2 = ddx2(f);
    return {integrate(f * f), integrate(d1 * d1) + integrate(d2 * d2)};
}

double sum_to(const std::array<double, 4>& s, int k) {
    double acc = 0.0;
    for (int m = 0; m <= k; ++m) acc += s[m];
    return acc;
}

std::array<double, 4> add(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

double linf_tendency(const Tendency& k) {
    return std::max({linf_norm(k.dphi), linf_norm(k.dpsi1), linf_norm(k.dpsi2),
                     linf_norm(k.dtheta)});
}

double linf_state(const PerturbationState& s) {
    return std::max({linf_norm(s.phi), linf_norm(s.psi1), linf_norm(s.psi2), linf_norm(s.theta)});
}

/// d/dt of the tendency along the flow, by a central difference in state space.
Tendency second_derivative(const PerturbationState& s, const Tendency& k, const BaseFlow& base,
                           const PhysicalParams& p, const Grid& g, TendencyOptions options) {
    const double kn = linf_tendency(k);
    if (kn == 0.0) return Tendency::zero(g);
    const double sn = std::max(linf_state(s), std::numeric_limits<double>::min());
    const double delta = 1e-4 * sn / kn;
    Tendency plus = tendency(axpy(s, delta, k), base, p, g, options);
    Tendency minus = tendency(axpy(s, -delta, k), base, p, g, options);
    plus.mask_walls();
    minus.mask_walls();
    minus *= -1.0;
    plus += minus;
    plus *= 1.0 / (2.0 * delta);
    return plus;
}

}  // namespace

double n_functional(const EnergyReport& r, double eps) {
    const double e2 = eps * eps;
    return r.a0 / e2 + r.a1 + r.a2 + e2 * r.a3 + e2 * r.a4 + e2 * e2 * r.a5;
}

double entropy_kernel(double z) {
    if (!(z > -1.0)) return std::numeric_limits<double>::quiet_NaN();
    if (std::abs(z) < 0.1) {
        // z - ln(1+z) = sum_{k>=2} (-1)^k z^k / k; the direct form cancels catastrophically.
        double term = z * z, sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            const double t = (k % 2 == 0 ? term : -term) / k;
            sum += t;
            if (std::abs(t) <= 1e-18 * sum) break;
            term *= z;
        }
        return sum;
    }
    return z - std::log1p(z);
}

double relative_entropy(const PerturbationState& s, const BaseFlow& base,
                        const PhysicalParams& p, const Grid& g) {
    const double e2 = p.eps * p.eps;
    ScalarField eta(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j <= g.n2; ++j) {
            const double rho = base.rho_t(j) + s.phi(i, j);
            const double temp = base.temp_t(j) + s.theta(i, j);
            if (!(rho > 0.0)) {
                std::ostringstream os;
                os << "relative entropy: density term undefined, rho = " << rho << " at (i=" << i
                   << ", j=" << j << ")";
                throw PositivityError(os.str(), i, j);
            }
            if (!(temp > 0.0)) {
                std::ostringstream os;
                os << "relative entropy: temperature term undefined, T = " << temp << " at (i="
                   << i << ", j=" << j << ")";
                throw PositivityError(os.str(), i, j);
            }
            const double u1 = s.psi1(i, j), u2 = s.psi2(i, j);
            eta(i, j) = e2 * rho * (u1 * u1 + u2 * u2) / (2.0 * base.temp_t(j)) +
                        rho / (p.gamma - 1.0) * entropy_kernel(s.theta(i, j) / base.temp_t(j)) +
                        rho * entropy_kernel(-s.phi(i, j) / rho);
        }
    }
    return integrate(eta);
}

double quadratic_entropy(const PerturbationState& s, const PhysicalParams& p) {
    const double phi = l2_norm(s.phi), psi1 = l2_norm(s.psi1), psi2 = l2_norm(s.psi2),
                 theta = l2_norm(s.theta);
    return 0.5 * phi * phi + 0.5 * p.eps * p.eps * (psi1 * psi1 + psi2 * psi2) +
           theta * theta / (2.0 * (p.gamma - 1.0));
}

EnergyReport report(const PerturbationState& s, const Tendency& tendency_in,
                    const BaseFlow& base, const PhysicalParams& p, const Grid& g,
                    EnergyAccumulator& acc, long step) {
    const double ie2 = 1.0 / (p.eps * p.eps);
    const double ie4 = ie2 * ie2;
    const double ie = 1.0 / p.eps;

    Tendency k = tendency_in;
    k.mask_walls();

    const auto phi = seminorms2(s.phi);
    const auto psi = add(seminorms2(s.psi1), seminorms2(s.psi2));
    const auto theta = seminorms2(s.theta);

    const auto phit = low_seminorms2(k.dphi);
    const auto psi1t = low_seminorms2(k.dpsi1), psi2t = low_seminorms2(k.dpsi2);
    const double psit0 = psi1t[0] + psi2t[0], psit1 = psi1t[1] + psi2t[1];
    const auto thetat = low_seminorms2(k.dtheta);

    const Tendency ktt = second_derivative(s, k, base, p, g, acc.options());
    const double psitt = integrate(ktt.dpsi1 * ktt.dpsi1) + integrate(ktt.dpsi2 * ktt.dpsi2);
    const double thetatt = integrate(ktt.dtheta * ktt.dtheta);

    const double sup_now[EnergyAccumulator::kSup] = {
        psi[0] + ie2 * phi[0] + ie2 * theta[0],
        psi[1] + ie2 * theta[1],
        ie2 * phi[1],
        ie2 * phit[0] + psit0 + ie2 * thetat[0],
        ie2 * phi[2] + psi[2] + ie2 * theta[2],
        ie2 * phi[3] + psi[3] + psit1 + ie2 * (theta[3] + thetat[1]),
    };
    // 0..5: integrands of A0..A5 with A2 split into (phi_h1, phi_t, rest); 8: dissipation.
    const double integrand[EnergyAccumulator::kInt] = {
        sum_to(psi, 1) + ie2 * sum_to(theta, 1),
        psit0 + ie2 * thetat[0],
        sum_to(psi, 2) + ie2 * sum_to(theta, 2),
        psit1 + ie2 * thetat[1],
        ie4 * sum_to(phi, 2) + sum_to(psi, 3) + ie2 * sum_to(theta, 3),
        psitt + ie2 * thetatt,
        ie4 * sum_to(phi, 1),
        ie2 * phit[0],
        p.eps * p.eps * sum_to(psi, 1) + sum_to(theta, 1),
    };

    const double t = s.time;
    for (int m = 0; m < EnergyAccumulator::kSup; ++m)
        acc.sup_[m] = acc.records_ == 0 ? sup_now[m] : std::max(acc.sup_[m], sup_now[m]);
    for (int m = 0; m < EnergyAccumulator::kInt; ++m) {
        if (acc.records_ > 0)
            acc.integral_[m] += 0.5 * (t - acc.last_time_) * (acc.last_integrand_[m] + integrand[m]);
        acc.last_integrand_[m] = integrand[m];
    }
    acc.last_time_ = t;

    EnergyReport r;
    r.time = t;
    r.step = step;
    r.l2 = {std::sqrt(phi[0]), std::sqrt(psi[0]), std::sqrt(theta[0])};
    r.h1 = {std::sqrt(sum_to(phi, 1)), std::sqrt(sum_to(psi, 1)), std::sqrt(sum_to(theta, 1))};
    r.h2 = {std::sqrt(sum_to(phi, 2)), std::sqrt(sum_to(psi, 2)), std::sqrt(sum_to(theta, 2))};
    r.h3 = {std::sqrt(sum_to(phi, 3)), std::sqrt(sum_to(psi, 3)), std::sqrt(sum_to(theta, 3))};
    r.linf = {linf_norm(s.phi), std::sqrt((s.psi1.values().square() + s.psi2.values().square()).maxCoeff()),
              linf_norm(s.theta)};
    r.entropy = relative_entropy(s, base, p, g);

    const double* I = acc.integral_;
    r.a0 = acc.sup_[0] + I[0];
    r.a1 = acc.sup_[1] + I[1];
    r.a2_phi_h1 = I[6];
    r.a2_phi_t = I[7];
    r.a2 = acc.sup_[2] + (I[6] + I[7]) + I[2];
    r.a3 = acc.sup_[3] + I[3];
    r.a4 = acc.sup_[4] + I[4];
    r.a5 = acc.sup_[5] + I[5];
    r.n_func = n_functional(r, p.eps);
    r.dissipation = I[8];
    r.mass = integrate(s.phi);

    const ScalarField rho_gap = ScalarField::from_profile(g, base.rho_dev) + s.phi;
    const ScalarField temp_gap = ScalarField::from_profile(g, base.temp_dev) + s.theta;
    r.limit_gap = {l2_norm(rho_gap), r.l2.psi, l2_norm(temp_gap)};

    const double w0 = ie * r.l2.phi + r.l2.psi + ie * r.l2.theta;
    const double w1 = ie * std::sqrt(phi[1]) + std::sqrt(psi[1]) + ie * std::sqrt(theta[1]);
    if (acc.records_ == 0) {
        acc.sup_gap_ = r.limit_gap;
        acc.sup_weighted_l2_ = w0;
        acc.sup_weighted_h1_ = w1;
    } else {
        acc.sup_gap_.phi = std::max(acc.sup_gap_.phi, r.limit_gap.phi);
        acc.sup_gap_.psi = std::max(acc.sup_gap_.psi, r.limit_gap.psi);
        acc.sup_gap_.theta = std::max(acc.sup_gap_.theta, r.limit_gap.theta);
        acc.sup_weighted_l2_ = std::max(acc.sup_weighted_l2_, w0);
        acc.sup_weighted_h1_ = std::max(acc.sup_weighted_h1_, w1);
    }
    r.sup_gap = acc.sup_gap_;
    r.sup_weighted_l2 = acc.sup_weighted_l2_;
    r.sup_weighted_h1 = acc.sup_weighted_h1_;
    ++acc.records_;
    return r;
}

UniformBoundCheck check_uniform_bounds(const EnergyReport& r, const PhysicalParams& p,
                                       const UniformBoundThresholds& th) {
    UniformBoundCheck c;
    c.measured_l2 = r.sup_weighted_l2 / p.eps;
    c.measured_h1 = r.sup_weighted_h1;
    std::ostringstream os;
    if (!(c.measured_l2 <= th.c_l2)) {
        c.pass = false;
        os << "sup(eps^-1|phi| + |psi| + eps^-1|theta|)/eps = " << c.measured_l2
           << " exceeds " << th.c_l2 << "; ";
    }
    if (!(c.measured_h1 <= th.c_h1)) {
        c.pass = false;
        os << "sup(eps^-1|phi|_1 + |psi|_1 + eps^-1|theta|_1) = " << c.measured_h1
           << " exceeds " << th.c_h1 << "; ";
    }
    c.detail = c.pass ? "within bounds" : os.str();
    return c;
}

double entropy_monotonicity(const std::vector<EnergyReport>& reports, std::size_t skip,
                            double tolerance) {
    std::size_t total = 0, good = 0;
    for (std::size_t k = std::max<std::size_t>(skip, 1); k < reports.size(); ++k) {
        ++total;
        const double prev = reports[k - 1].entropy;
        if (reports[k].entropy <= prev + tolerance * std::abs(prev)) ++good;
    }
    return total == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(total);
}

double best_dissipation_constant(const std::vector<EnergyReport>& reports, double tolerance) {
    // S_k(c) = E_k + c D_k. Each step requires dE + c dD <= tol (E_k + c D_k), i.e.
    // c (dD - tol D_k) <= tol E_k - dE: a half-line in c.
    double upper = std::numeric_limits<double>::infinity();
    double lower = 0.0;
    for (std::size_t k = 1; k < reports.size(); ++k) {
        const double e = reports[k - 1].entropy, d = reports[k - 1].dissipation;
        const double de = reports[k].entropy - e, dd = reports[k].dissipation - d;
        const double a = dd - tolerance * d, b = tolerance * e - de;
        if (a > 0.0) upper = std::min(upper, b / a);
        else if (a < 0.0) lower = std::max(lower, b / a);
        else if (b < 0.0) return -1.0;
    }
    if (upper < lower) return -1.0;
    if (!std::isfinite(upper)) return std::numeric_limits<double>::infinity();
    return upper;
}

std::string csv_header() {
    return "time,l2_phi,l2_psi,l2_theta,h1_phi,h1_psi,h1_theta,h2_psi,h2_theta,linf_phi,"
           "linf_psi,linf_theta,entropy,a0,a1,a2,a3,a4,a5,n_func,mass,gap_rho,gap_u,gap_temp";
}

void write_csv_header(std::ostream& os) { os << csv_header() << '\n'; }

void write_csv_row(std::ostream& os, const EnergyReport& r) {
    const double v[] = {r.time,     r.l2.phi,   r.l2.psi,   r.l2.theta,  r.h1.phi,
                        r.h1.psi,   r.h1.theta, r.h2.psi,   r.h2.theta,  r.linf.phi,
                        r.linf.psi, r.linf.theta, r.entropy, r.a0,       r.a1,
                        r.a2,       r.a3,       r.a4,       r.a5,        r.n_func,
                        r.mass,     r.limit_gap.phi, r.limit_gap.psi, r.limit_gap.theta};
    char buf[32];
    bool first = true;
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        if (!first) os << ',';
        os << buf;
        first = false;
    }
    os << '\n';
}

DiagnosticsRecorder::DiagnosticsRecorder(const BaseFlow& base, const PhysicalParams& params,
                                         const Grid& grid, TendencyOptions options,
                                         std::ostream* csv)
    : base_(base), params_(params), grid_(grid), accumulator_(options), csv_(csv) {
    if (csv_) write_csv_header(*csv_);
}

void DiagnosticsRecorder::operator()(const PerturbationState& state, const Tendency& tendency,
                                     long step) {
    reports_.push_back(report(state, tendency, base_, params_, grid_, accumulator_, step));
    if (csv_) write_csv_row(*csv_, reports_.back());
}

DiagnosticSink DiagnosticsRecorder::sink() {
    return [this](const PerturbationState& s, const Tendency& k, long step) { (*this)(s, k, step); };
}

std::vector<EnergyReport> replay(const std::vector<PerturbationState>& states,
                                 const std::vector<long>& steps, const BaseFlow& base,
                                 const PhysicalParams& params, const Grid& grid,
                                 TendencyOptions options) {
    DiagnosticsRecorder rec(base, params, grid, options);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const long step = k < steps.size() ? steps[k] : static_cast<long>(k);
        rec(states[k], tendency(states[k], base, params, grid, options), step);
    }
    return rec.reports();
}

}  // namespace couette
