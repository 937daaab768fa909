#include "pathint/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "pathint/errors.hpp"

namespace pathint {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, std::span<const double> breakpoints) {
    if (!(b >= a)) throw DomainError("integrate_adaptive: b < a");
    QuadratureResult out;
    if (b == a) return out;

    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    using boost::math::quadrature::gauss_kronrod;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        out.value += gauss_kronrod<double, 15>::integrate(f, edges[i], edges[i + 1], 20, rel_tol,
                                                           &err, &l1);
        out.error_estimate += err;
    }
    return out;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
    if (n < 2) throw GridMismatchError("simpson: need at least two samples");
    std::vector<double> w(n, 0.0);
    const std::size_t intervals = n - 1;
    if (intervals == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    if (intervals == 3) {
        const double c = 3.0 * h / 8.0;
        w[0] += c;
        w[1] += 3 * c;
        w[2] += 3 * c;
        w[3] += c;
        return w;
    }
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const double c = 3.0 * h / 8.0;
        w[simpson_end] += c;
        w[simpson_end + 1] += 3 * c;
        w[simpson_end + 2] += 3 * c;
        w[simpson_end + 3] += c;
    }
    return w;
}

double simpson(std::span<const double> samples, double h) {
    const auto w = simpson_weights(samples.size(), h);
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) s += w[i] * samples[i];
    return s;
}

}  // namespace pathint
