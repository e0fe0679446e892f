#include "specritz/quadrature.hpp"

#include <cmath>
#include <vector>

#include "specritz/error.hpp"

namespace specritz {

namespace {

struct Panel {
    double a, b;
    double fa, fm, fb;
    double whole;
    double tol;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options) {
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    const std::size_t panels = options.initial_panels == 0 ? 1 : options.initial_panels;
    const double width = (b - a) / static_cast<double>(panels);

    std::vector<Panel> stack;
    stack.reserve(64);
    for (std::size_t p = panels; p-- > 0;) {
        const double pa = a + width * static_cast<double>(p);
        const double pb = (p + 1 == panels) ? b : pa + width;
        const double pm = 0.5 * (pa + pb);
        const double fa = f(pa), fm = f(pm), fb = f(pb);
        stack.push_back({pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb), options.abs_tol / static_cast<double>(panels)});
    }

    std::size_t live = panels;  // intervals created so far
    bool capped = false;
    double value = 0.0;
    double error = 0.0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m);
        const double rm = 0.5 * (m + p.b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(p.a, m, p.fa, flm, p.fm);
        const double right = simpson(m, p.b, p.fm, frm, p.fb);
        const double delta = left + right - p.whole;
        const bool tiny = !(lm > p.a && m > lm && rm > m && p.b > rm);
        if (std::abs(delta) <= 15.0 * p.tol || tiny || capped) {
            value += left + right + delta / 15.0;
            error += std::abs(delta) / 15.0;
            ++result.intervals;
            continue;
        }
        if (live + 1 > options.max_intervals) {
            capped = true;
            value += left + right + delta / 15.0;
            error += std::abs(delta) / 15.0;
            ++result.intervals;
            continue;
        }
        ++live;
        stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol});
        stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol});
    }

    result.value = sign * value;
    result.error_estimate = error;
    result.converged = !capped && std::isfinite(value);
    return result;
}

}  // namespace specritz
