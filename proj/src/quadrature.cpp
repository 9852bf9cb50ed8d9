#include "inls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "inls/errors.hpp"

namespace inls {

namespace {

// Monic three-term recurrence x pi_k = pi_{k+1} + a_k pi_k + b_k pi_{k-1}
// for the Jacobi weight (1-x)^A (1+x)^B on [-1, 1], plus the total mass
// mu0. The k = 0 and k = 1 entries use their dedicated forms because the
// generic formulas are 0/0 at A+B = 0 and A+B = -1.
struct JacobiRecurrence {
    double mu0;
    std::vector<double> a, b;  // b[0] unused
};

JacobiRecurrence jacobi_recurrence(int n, double A, double B) {
    if (A <= -1.0 || B <= -1.0) throw DomainError("Jacobi exponents must exceed -1");
    JacobiRecurrence rec;
    rec.mu0 = std::pow(2.0, A + B + 1.0) *
              std::exp(std::lgamma(A + 1.0) + std::lgamma(B + 1.0) -
                       std::lgamma(A + B + 2.0));
    rec.a.resize(n);
    rec.b.resize(n, 0.0);
    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            rec.a[k] = (B - A) / (A + B + 2.0);
            continue;
        }
        double t = 2.0 * k + A + B;
        rec.a[k] = (B * B - A * A) / (t * (t + 2.0));
        if (k == 1)
            rec.b[k] = 4.0 * (1.0 + A) * (1.0 + B) /
                       ((2.0 + A + B) * (2.0 + A + B) * (3.0 + A + B));
        else
            rec.b[k] = 4.0 * k * (k + A) * (k + B) * (k + A + B) /
                       (t * t * (t + 1.0) * (t - 1.0));
    }
    return rec;
}

// Golub-Welsch: eigen-decompose the symmetric tridiagonal matrix with
// diagonal a_k and off-diagonal sqrt(b_k); nodes are the eigenvalues and
// weights mu0 times the squared first eigenvector components.
QuadRule golub_welsch(const JacobiRecurrence& rec) {
    int n = static_cast<int>(rec.a.size());
    Eigen::VectorXd diag(n), sub(n - 1 > 0 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) diag[k] = rec.a[k];
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(rec.b[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = es.eigenvalues()[k];
        double v = es.eigenvectors().col(k)[0];
        rule.weights[k] = rec.mu0 * v * v;
    }
    return rule;
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    return golub_welsch(jacobi_recurrence(n, 0.0, 0.0));
}

QuadRule gauss_legendre_ab(int n, double a, double b) {
    QuadRule r = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = mid + half * r.nodes[k];
        r.weights[k] *= half;
    }
    return r;
}

QuadRule gauss_jacobi01(int n, double p, double q) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    // Map r = (1+x)/2 from the [-1, 1] rule with weight (1-x)^q (1+x)^p.
    QuadRule r = golub_welsch(jacobi_recurrence(n, q, p));
    double scale = std::pow(2.0, -p - q - 1.0);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = 0.5 * (1.0 + r.nodes[k]);
        r.weights[k] *= scale;
    }
    return r;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (positive half;
// symmetric completion below). Odd-index abscissae form the embedded
// 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct PanelResult {
    std::complex<double> kronrod;
    double err;
};

PanelResult gk_panel(const std::function<std::complex<double>(double)>& f, double a,
                     double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> resk = kWgk[7] * f(mid);
    std::complex<double> resg = kWg[3] * f(mid);
    for (int j = 0; j < 7; ++j) {
        double dx = half * kXgk[j];
        std::complex<double> fsum = f(mid - dx) + f(mid + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    resk *= half;
    resg *= half;
    return {resk, std::abs(resk - resg)};
}

struct Panel {
    double a, b;
    std::complex<double> val;
    double err;
    int depth;
};

}  // namespace

std::complex<double> integrate_gk(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, double tol, double* abs_error,
                                  int max_depth) {
    // Global strategy: keep splitting the panel with the largest error
    // estimate until the total meets the tolerance or no split can help.
    // Bounded panel count guarantees termination on hostile integrands.
    constexpr std::size_t kMaxPanels = 60000;
    PanelResult first = gk_panel(f, a, b);
    std::vector<Panel> panels{{a, b, first.kronrod, first.err, 0}};
    auto worse = [](const Panel& x, const Panel& y) {
        return x.err < y.err || (x.err == y.err && x.a > y.a);
    };
    std::make_heap(panels.begin(), panels.end(), worse);
    double total_err = first.err;
    while (total_err > tol && panels.size() < kMaxPanels) {
        std::pop_heap(panels.begin(), panels.end(), worse);
        Panel top = panels.back();
        // A panel whose error is at the rounding floor cannot improve.
        if (top.err <= 1e-16 * (1.0 + std::abs(top.val)) || top.depth >= max_depth) break;
        panels.pop_back();
        double mid = 0.5 * (top.a + top.b);
        PanelResult l = gk_panel(f, top.a, mid);
        PanelResult r = gk_panel(f, mid, top.b);
        total_err += l.err + r.err - top.err;
        panels.push_back({top.a, mid, l.kronrod, l.err, top.depth + 1});
        std::push_heap(panels.begin(), panels.end(), worse);
        panels.push_back({mid, top.b, r.kronrod, r.err, top.depth + 1});
        std::push_heap(panels.begin(), panels.end(), worse);
    }
    std::complex<double> acc = 0.0;
    total_err = 0.0;
    for (const Panel& p : panels) {
        acc += p.val;
        total_err += p.err;
    }
    if (abs_error) *abs_error = total_err;
    return acc;
}

}  // namespace inls
