#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// QUADPACK 15-point Kronrod nodes (absolute values) and weights, with the
// embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    // Deep bisection toward an integrable endpoint singularity eventually
    // rounds a node onto the endpoint itself; the true contribution of such
    // a collapsed panel is negligible, so non-finite samples count as zero.
    auto safe = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = safe(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double fsum = safe(c - x) + safe(c + x);
        resk += kWgk[i] * fsum;
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    return {resk * h, std::abs(resk - resg) * h};
}

double integrate_impl(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth) {
    const auto gk = gk15(f, a, b);
    if (depth <= 0 || gk.error <= tol * std::abs(gk.value) + 1e-305) return gk.value;
    const double c = 0.5 * (a + b);
    return integrate_impl(f, a, c, tol, depth - 1) +
           integrate_impl(f, c, b, tol, depth - 1);
}

double eval_G(const mtf::FractionalOrders& orders, double tau, double s) {
    double v = 0.0;
    for (const auto& [mu, alpha] : orders.terms())
        v += mu / mtf::gamma_fn(3.0 - alpha) * std::pow(s, 1.0 - alpha) *
             (s - (1.0 - 0.5 * alpha)) * std::pow(tau, 2.0 - alpha);
    return v;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (!(b > a)) return 0.0;
    return integrate_impl(f, a, b, tol, max_depth);
}

double sigma_by_bisection(const mtf::FractionalOrders& orders, double tau) {
    double lo = orders.b1(), hi = orders.b2();
    // G(lo) <= 0 <= G(hi); keep the sign invariant while halving
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval_G(orders, tau, mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double coeff_a_by_quadrature(double alpha, double t_star,
                             const mtf::GradedTimeMesh& mesh, std::size_t n,
                             std::size_t j) {
    const double lower = mesh.t(j - 1);
    double value;
    if (j == n) {
        // The kernel is singular at the upper limit t_star; adaptive panels
        // cannot resolve a w^(-alpha) endpoint tail (its mass decays like
        // delta^(1-alpha)).  Quadrate the regular half and finish the
        // singular half with the power rule.
        const double delta = 0.5 * (t_star - lower);
        value = integrate(
                    [&](double eta) { return std::pow(t_star - eta, -alpha); },
                    lower, t_star - delta) +
                std::pow(delta, 1.0 - alpha) / (1.0 - alpha);
    } else {
        value = integrate(
            [&](double eta) { return std::pow(t_star - eta, -alpha); }, lower,
            mesh.t(j));
    }
    return value / mtf::gamma_fn(1.0 - alpha);
}

double coeff_b_by_quadrature(double alpha, double t_star,
                             const mtf::GradedTimeMesh& mesh, std::size_t n,
                             std::size_t j) {
    if (j + 1 > n) throw std::invalid_argument("coeff_b oracle: needs j <= n-1");
    const double lower = mesh.t(j - 1);
    const double upper = mesh.t(j);
    const double mid = 0.5 * (lower + upper);
    // (eta - mid) integrates the constant part of the kernel to zero exactly,
    // but a tiny cell far from t_star makes the raw product nearly
    // antisymmetric and the quadrature sum cancels catastrophically.  Drop
    // the constant part analytically and quadrate only the kernel deviation,
    // evaluated via expm1/log1p so it keeps full relative precision; the
    // remaining integrand is one-signed.
    const double w = t_star - mid;
    const double k_mid = std::pow(w, -alpha);
    const double value = integrate(
        [&](double eta) {
            const double s = eta - mid;
            return k_mid * std::expm1(-alpha * std::log1p(-s / w)) * s;
        },
        lower, upper);
    return 2.0 * value / (mtf::gamma_fn(1.0 - alpha) * (mesh.t(j + 1) - lower));
}

double caputo_by_quadrature(double alpha, const std::function<double(double)>& v_prime,
                            double t) {
    // Split at t/2.  On the left half the kernel is regular (only v_prime
    // may be endpoint-singular, which the adaptive rule resolves).  On the
    // right half substitute eta = t - s^(1/(1-alpha)), which turns
    // (t-eta)^(-alpha) d eta into ds/(1-alpha) and leaves a smooth integrand,
    // so the kernel singularity at eta = t never meets the quadrature.
    const double delta = 0.5 * t;
    const double left = integrate(
        [&](double eta) { return std::pow(t - eta, -alpha) * v_prime(eta); }, 0.0,
        t - delta, 1e-13, 70);
    const double q = 1.0 / (1.0 - alpha);
    const double right =
        q * integrate([&](double s) { return v_prime(t - std::pow(s, q)); }, 0.0,
                      std::pow(delta, 1.0 - alpha), 1e-13, 70);
    return (left + right) / mtf::gamma_fn(1.0 - alpha);
}

std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[pivot][k])) pivot = i;
        if (A[pivot][k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(A[k], A[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = A[i][k] / A[k][k];
            for (std::size_t c = k; c < n; ++c) A[i][c] -= m * A[k][c];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

ReferenceRun reference_stepper_1d(const mtf::FractionalOrders& orders,
                                  const mtf::GradedTimeMesh& tmesh, double X,
                                  std::size_t Ms, double a_const,
                                  const std::function<double(double, double)>& f_xt,
                                  const std::function<double(double)>& u0) {
    const std::size_t N = tmesh.N();
    const std::size_t m = Ms - 1;  // interior unknowns
    const double h = X / static_cast<double>(Ms);

    // textbook tridiagonal mass/stiffness as dense matrices
    std::vector<std::vector<double>> M(m, std::vector<double>(m, 0.0)), S = M;
    for (std::size_t i = 0; i < m; ++i) {
        M[i][i] = 4.0 * h / 6.0;
        S[i][i] = 2.0 / h;
        if (i + 1 < m) {
            M[i][i + 1] = M[i + 1][i] = h / 6.0;
            S[i][i + 1] = S[i + 1][i] = -1.0 / h;
        }
    }

    // 3-point Gauss load vector at fixed time
    const double gx[3] = {0.5 - 0.5 * std::sqrt(3.0 / 5.0), 0.5,
                          0.5 + 0.5 * std::sqrt(3.0 / 5.0)};
    const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    auto load = [&](double t) {
        std::vector<double> F(m, 0.0);
        for (std::size_t e = 0; e < Ms; ++e) {
            const double x0 = e * h;
            for (int q = 0; q < 3; ++q) {
                const double x = x0 + gx[q] * h;
                const double w = gw[q] * h;
                const double fv = f_xt(x, t);
                if (e >= 1) F[e - 1] += w * fv * (1.0 - gx[q]);  // phi_e
                if (e + 1 <= m) F[e] += w * fv * gx[q];          // phi_{e+1}
            }
        }
        return F;
    };

    // per-step sigma by bisection; kernel rows by the naive closed forms
    std::vector<double> sstar(N + 1), toff(N + 1);
    for (std::size_t k = 1; k <= N; ++k) {
        sstar[k] = sigma_by_bisection(orders, tmesh.tau(k));
        toff[k] = tmesh.t(k - 1) + sstar[k] * tmesh.tau(k);
    }
    auto coeff_a_naive = [&](double alpha, double ts, std::size_t n, std::size_t j) {
        const double upper = j == n ? ts : tmesh.t(j);
        return (std::pow(ts - tmesh.t(j - 1), 1.0 - alpha) -
                std::pow(ts - upper, 1.0 - alpha)) /
               mtf::gamma_fn(2.0 - alpha);
    };
    auto coeff_b_naive = [&](double alpha, double ts, std::size_t j) {
        const double w0 = ts - tmesh.t(j);
        const double w1 = ts - tmesh.t(j - 1);
        const double Mm = ts - 0.5 * (tmesh.t(j - 1) + tmesh.t(j));
        const double I =
            Mm * (std::pow(w1, 1.0 - alpha) - std::pow(w0, 1.0 - alpha)) / (1.0 - alpha) -
            (std::pow(w1, 2.0 - alpha) - std::pow(w0, 2.0 - alpha)) / (2.0 - alpha);
        return 2.0 * I /
               (mtf::gamma_fn(1.0 - alpha) * (tmesh.t(j + 1) - tmesh.t(j - 1)));
    };
    auto g_row = [&](std::size_t n) {
        std::vector<double> row(n, 0.0);
        for (const auto& [mu, alpha] : orders.terms()) {
            for (std::size_t j = 1; j <= n; ++j) {
                double g;
                const double a_nj = coeff_a_naive(alpha, toff[n], n, j);
                if (n == 1) {
                    g = a_nj / tmesh.tau(1);
                } else if (j == 1) {
                    g = (a_nj - coeff_b_naive(alpha, toff[n], 1)) / tmesh.tau(1);
                } else if (j < n) {
                    g = (a_nj + coeff_b_naive(alpha, toff[n], j - 1) -
                         coeff_b_naive(alpha, toff[n], j)) /
                        tmesh.tau(j);
                } else {
                    g = (a_nj + coeff_b_naive(alpha, toff[n], n - 1)) / tmesh.tau(n);
                }
                row[j - 1] += mu * g;
            }
        }
        return row;
    };

    ReferenceRun out;
    out.t_offsets.assign(toff.begin() + 1, toff.end());
    std::vector<double> U0(m);
    for (std::size_t i = 0; i < m; ++i) U0[i] = u0((i + 1) * h);
    out.levels.push_back(U0);

    auto matvec = [&](const std::vector<std::vector<double>>& A,
                      const std::vector<double>& x) {
        std::vector<double> y(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < m; ++c) y[i] += A[i][c] * x[c];
        return y;
    };

    for (std::size_t n = 1; n <= N; ++n) {
        const auto g = g_row(n);
        std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < m; ++c)
                A[i][c] = g[n - 1] * M[i][c] + sstar[n] * a_const * S[i][c];

        std::vector<double> hist(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) hist[i] = g[0] * out.levels[0][i];
        for (std::size_t j = 2; j <= n; ++j)
            for (std::size_t i = 0; i < m; ++i)
                hist[i] += (g[j - 1] - g[j - 2]) * out.levels[j - 1][i];

        auto rhs = matvec(M, hist);
        const auto Su = matvec(S, out.levels[n - 1]);
        const auto F = load(toff[n]);
        for (std::size_t i = 0; i < m; ++i)
            rhs[i] += -(1.0 - sstar[n]) * a_const * Su[i] + F[i];

        out.levels.push_back(dense_solve(A, rhs));
    }
    return out;
}

DenseAssembly brute_force_assembly_2d(std::size_t Ms) {
    const std::size_t nodes = (Ms + 1) * (Ms + 1);
    const double h = 1.0 / static_cast<double>(Ms);
    DenseAssembly out;
    out.mass.assign(nodes, std::vector<double>(nodes, 0.0));
    out.stiffness.assign(nodes, std::vector<double>(nodes, 0.0));

    auto node = [&](std::size_t i, std::size_t j) { return i + j * (Ms + 1); };
    for (std::size_t cj = 0; cj < Ms; ++cj) {
        for (std::size_t ci = 0; ci < Ms; ++ci) {
            const std::size_t lower[3] = {node(ci, cj), node(ci + 1, cj),
                                          node(ci + 1, cj + 1)};
            const std::size_t upper[3] = {node(ci, cj), node(ci + 1, cj + 1),
                                          node(ci, cj + 1)};
            for (const auto* tri : {lower, upper}) {
                double px[3], py[3];
                for (int v = 0; v < 3; ++v) {
                    px[v] = (tri[v] % (Ms + 1)) * h;
                    py[v] = (tri[v] / (Ms + 1)) * h;
                }
                const double area =
                    0.5 * std::abs((px[1] - px[0]) * (py[2] - py[0]) -
                                   (px[2] - px[0]) * (py[1] - py[0]));
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        out.mass[tri[a]][tri[b]] += area / 12.0 * (a == b ? 2.0 : 1.0);
                        // edge vectors opposite the vertices
                        const int a1 = (a + 1) % 3, a2 = (a + 2) % 3;
                        const int b1 = (b + 1) % 3, b2 = (b + 2) % 3;
                        const double eax = px[a2] - px[a1], eay = py[a2] - py[a1];
                        const double ebx = px[b2] - px[b1], eby = py[b2] - py[b1];
                        out.stiffness[tri[a]][tri[b]] +=
                            (eax * ebx + eay * eby) / (4.0 * area);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace oracle
