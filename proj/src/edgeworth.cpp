#include "blockboot/edgeworth.hpp"

#include <cmath>

namespace blockboot {

std::string cumulant_source_name(CumulantSource s) {
    switch (s) {
        case CumulantSource::kAnalytic: return "analytic";
        case CumulantSource::kKStatistic: return "k-statistic";
        case CumulantSource::kCentralMoment: return "central-moment";
    }
    throw ValidationError("cumulant_source_name: unknown tag");
}

CumulantVector CumulantVector::make(std::vector<double> chi_2_to_s, CumulantSource source) {
    if (chi_2_to_s.empty()) throw ValidationError("CumulantVector: need at least chi_2");
    CumulantVector cv;
    cv.order = static_cast<int>(chi_2_to_s.size()) + 1;
    cv.chi.assign(static_cast<std::size_t>(cv.order) + 1, 0.0);
    for (std::size_t i = 0; i < chi_2_to_s.size(); ++i) {
        if (!std::isfinite(chi_2_to_s[i]))
            throw ValidationError("CumulantVector: non-finite cumulant");
        cv.chi[i + 2] = chi_2_to_s[i];
    }
    if (!(cv.chi[2] > 0.0)) throw ValidationError("CumulantVector: chi_2 must be > 0");
    cv.source = source;
    return cv;
}

double CumulantVector::at(int r) const {
    if (r < 2 || r > order)
        throw ValidationError("CumulantVector: cumulant order out of range");
    return chi[static_cast<std::size_t>(r)];
}

CumulantVector sample_cumulants(std::span<const double> samples, int max_order,
                                CumulantSource mode) {
    if (max_order < 2 || max_order > 6)
        throw ValidationError("sample_cumulants: supported orders are 2..6");
    if (mode == CumulantSource::kAnalytic)
        throw ValidationError("sample_cumulants: analytic is not an estimation mode");
    const std::size_t count = samples.size();
    if (count < static_cast<std::size_t>(max_order) + 1)
        throw ValidationError("sample_cumulants: need at least max_order+1 samples");

    const double n = static_cast<double>(count);
    const double mean = mean_of(samples);
    // central moments m[2..6]
    double m[7] = {0, 0, 0, 0, 0, 0, 0};
    for (double x : samples) {
        const double d = x - mean;
        double dk = d;
        for (int r = 2; r <= max_order; ++r) {
            dk *= d;
            m[r] += dk;
        }
    }
    for (int r = 2; r <= max_order; ++r) m[r] /= n;

    std::vector<double> chi(static_cast<std::size_t>(max_order) - 1, 0.0);
    auto set = [&chi](int r, double v) { chi[static_cast<std::size_t>(r) - 2] = v; };

    if (mode == CumulantSource::kCentralMoment) {
        set(2, m[2]);
        if (max_order >= 3) set(3, m[3]);
        if (max_order >= 4) set(4, m[4] - 3.0 * m[2] * m[2]);
        if (max_order >= 5) set(5, m[5] - 10.0 * m[3] * m[2]);
        if (max_order >= 6)
            set(6, m[6] - 15.0 * m[4] * m[2] - 10.0 * m[3] * m[3] +
                       30.0 * m[2] * m[2] * m[2]);
    } else {
        // k-statistics for orders 2-4
        set(2, n / (n - 1.0) * m[2]);
        if (max_order >= 3) set(3, n * n / ((n - 1.0) * (n - 2.0)) * m[3]);
        if (max_order >= 4)
            set(4, n * n * ((n + 1.0) * m[4] - 3.0 * (n - 1.0) * m[2] * m[2]) /
                       ((n - 1.0) * (n - 2.0) * (n - 3.0)));
        // no simple unbiased form carried beyond order 4; fall back to the
        // central-moment formulas, bias O(1/n)
        if (max_order >= 5) set(5, m[5] - 10.0 * m[3] * m[2]);
        if (max_order >= 6)
            set(6, m[6] - 15.0 * m[4] * m[2] - 10.0 * m[3] * m[3] +
                       30.0 * m[2] * m[2] * m[2]);
    }
    return CumulantVector::make(std::move(chi), mode);
}

double hermite_he(int k, double x) {
    if (k < 0) throw ValidationError("hermite_he: negative order");
    double h_prev = 1.0;  // He_0
    if (k == 0) return h_prev;
    double h = x;  // He_1
    for (int j = 1; j < k; ++j) {
        const double h_next = x * h - static_cast<double>(j) * h_prev;
        h_prev = h;
        h = h_next;
    }
    return h;
}

const std::vector<double>& ExpansionPolys::p(int r) const {
    if (r < 1 || r > s - 2) throw ValidationError("ExpansionPolys: r out of range");
    return polys[static_cast<std::size_t>(r) - 1];
}

namespace {

// Polynomials in (it) as coefficient vectors, index = power of (it).
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

void poly_axpy(Poly& acc, double c, const Poly& p) {
    if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) acc[j] += c * p[j];
}

double factorial(int r) {
    double f = 1.0;
    for (int i = 2; i <= r; ++i) f *= static_cast<double>(i);
    return f;
}

// Coefficients Q_r of exp(sum_{rho=3}^{s} chi_rho (it)^rho v^{rho-2} / rho!)
// = 1 + sum_r v^r Q_r(t), truncated at v^{s-2}. Uses the derivative
// recurrence r Q_r = sum_m m a_m Q_{r-m}, which is exact coefficient
// matching.
std::vector<Poly> exp_series_polys(const CumulantVector& cumulants, int s) {
    const int top = s - 2;
    std::vector<Poly> a(static_cast<std::size_t>(top) + 1);  // a[m], m = 1..top
    for (int rho = 3; rho <= s; ++rho) {
        const int m = rho - 2;
        if (m > top) break;
        Poly p(static_cast<std::size_t>(rho) + 1, 0.0);
        p[static_cast<std::size_t>(rho)] = cumulants.at(rho) / factorial(rho);
        a[static_cast<std::size_t>(m)] = std::move(p);
    }
    std::vector<Poly> q(static_cast<std::size_t>(top) + 1);
    q[0] = Poly{1.0};
    for (int r = 1; r <= top; ++r) {
        Poly acc{0.0};
        for (int m = 1; m <= r; ++m) {
            if (a[static_cast<std::size_t>(m)].empty()) continue;
            poly_axpy(acc, static_cast<double>(m),
                      poly_mul(a[static_cast<std::size_t>(m)],
                               q[static_cast<std::size_t>(r - m)]));
        }
        for (double& c : acc) c /= static_cast<double>(r);
        q[static_cast<std::size_t>(r)] = std::move(acc);
    }
    return q;
}

double half_power(double base, int r) {
    // base^{r/2} with the integer part as repeated multiplication
    double out = 1.0;
    for (int i = 0; i < r / 2; ++i) out *= base;
    if (r % 2 != 0) out *= std::sqrt(base);
    return out;
}

}  // namespace

ExpansionPolys formal_expansion(const CumulantVector& cumulants, double b_tilde, int s) {
    if (s < 3) throw ValidationError("formal_expansion: s must be >= 3");
    if (cumulants.order < s)
        throw ValidationError("formal_expansion: cumulants up to order s required");
    if (!(b_tilde > 0.0)) throw ValidationError("formal_expansion: b_tilde must be > 0");

    const std::vector<Poly> q = exp_series_polys(cumulants, s);
    ExpansionPolys out;
    out.s = s;
    out.b_tilde = b_tilde;
    out.polys.resize(static_cast<std::size_t>(s) - 2);
    for (int r = 1; r <= s - 2; ++r) {
        Poly p = q[static_cast<std::size_t>(r)];
        const double scale = half_power(b_tilde, r);
        for (double& c : p) c *= scale;
        out.polys[static_cast<std::size_t>(r) - 1] = std::move(p);
    }
    return out;
}

double ee_cdf(double x, const CumulantVector& cumulants, double b_tilde, int s) {
    if (s < 3) throw ValidationError("ee_cdf: s must be >= 3");
    if (!(b_tilde > 0.0)) throw ValidationError("ee_cdf: b_tilde must be > 0");
    const double chi2 = cumulants.at(2);
    if (!(chi2 > 0.0)) throw ValidationError("ee_cdf: chi_2 must be > 0");

    // Net coefficients b_tilde^{-r/2} P_r = Q_r; assembling from Q_r keeps
    // the cancellation exact.
    const std::vector<Poly> q = exp_series_polys(cumulants, s);

    const double sigma = std::sqrt(chi2);
    const double z = x / sigma;
    double cdf = normal_cdf(z);
    const double pdf = normal_pdf(z);

    // c (it)^j exp(-chi2 t^2 / 2)  inverts to  -c sigma^{-j} He_{j-1}(z) phi(z)
    for (int r = 1; r <= s - 2; ++r) {
        const Poly& p = q[static_cast<std::size_t>(r)];
        double corr = 0.0;
        double sigma_pow = 1.0;  // sigma^{-j}, built incrementally
        for (std::size_t j = 1; j < p.size(); ++j) {
            sigma_pow /= sigma;
            if (p[j] == 0.0) continue;
            corr += p[j] * sigma_pow * hermite_he(static_cast<int>(j) - 1, z);
        }
        cdf -= corr * pdf;
    }
    return cdf;
}

double studentized_p1(double y, const StudentizedEEParams& params) {
    if (!(params.sigma_inf_sq > 0.0))
        throw ValidationError("studentized_p1: sigma_inf_sq must be > 0");
    if (params.n < 1 || params.ell < 1)
        throw ValidationError("studentized_p1: n and ell required");
    const double n13 = std::cbrt(static_cast<double>(params.n));
    return (y * y - 1.0) * params.weighted_gamma_sum / params.sigma_inf_sq *
           (n13 / static_cast<double>(params.ell));
}

namespace {

struct P2Coeffs {
    double c1;  // coefficient of y
    double c3;  // coefficient of y^3 - 3y
};

P2Coeffs p2_coeffs(const StudentizedEEParams& params) {
    if (!(params.eu11_sq > 0.0))
        throw ValidationError("studentized_p2: E U_11^2 must be > 0");
    const double eu = params.eu11_sq;
    const double eu32 = eu * std::sqrt(eu);        // eu^{3/2}
    const double eu52 = eu * eu * std::sqrt(eu);   // eu^{5/2}
    const double root_n = std::sqrt(static_cast<double>(params.n));
    P2Coeffs c;
    c.c1 = -params.ezv_scaled / (2.0 * eu32);
    c.c3 = (root_n * params.ez3 / eu32 - 3.0 / eu52 * params.ez2 * params.ezv_scaled) / 6.0;
    return c;
}

}  // namespace

double studentized_p2(double y, const StudentizedEEParams& params) {
    if (params.n < 1) throw ValidationError("studentized_p2: n required");
    const P2Coeffs c = p2_coeffs(params);
    return c.c1 * y + c.c3 * (y * y * y - 3.0 * y);
}

double studentized_ee_cdf(double x, std::size_t n, const StudentizedEEParams& params,
                          int order) {
    if (order < 1 || order > 2)
        throw ValidationError("studentized_ee_cdf: order must be 1 or 2 (higher-order "
                              "polynomial coefficients are not available)");
    if (n < 1) throw ValidationError("studentized_ee_cdf: n must be >= 1");
    if (params.n != n)
        throw ValidationError("studentized_ee_cdf: params were built for a different n");
    if (params.ell < 1) throw ValidationError("studentized_ee_cdf: params.ell required");
    if (!(params.sigma_inf_sq > 0.0))
        throw ValidationError("studentized_ee_cdf: sigma_inf_sq must be > 0");

    const double nf = static_cast<double>(n);
    const double pdf = normal_pdf(x);
    // int_{-inf}^x (y^2-1) phi = -x phi(x); int y phi = -phi; int (y^3-3y) phi
    // = -(x^2-1) phi(x)
    const double a1 = params.weighted_gamma_sum / params.sigma_inf_sq *
                      (std::cbrt(nf) / static_cast<double>(params.ell));
    double cdf = normal_cdf(x) - a1 * x * pdf / std::cbrt(nf);
    if (order >= 2) {
        const P2Coeffs c = p2_coeffs(params);
        cdf -= (c.c1 + c.c3 * (x * x - 1.0)) * pdf / std::sqrt(nf);
    }
    return cdf;
}

}  // namespace blockboot
