#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fseries::quad {

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename V>
struct Result {
    V value{};
    double err_est = 0.0;   // accumulated panel estimates plus skipped-sliver bounds
    long evals = 0;
    bool converged = false;
};

/// Globally adaptive Gauss7/Kronrod15 on [a,b] (a < b required). Panels are
/// split worst-first until the summed estimate drops below abs_tol or the
/// evaluation budget runs out. `presplit` lists interior points that become
/// initial panel boundaries (jumps aligned there never enter any estimate).
Result<double> integrate(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, long max_evals,
                         const std::vector<double>& presplit = {});

Result<std::complex<double>> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                               double a, double b, double abs_tol, long max_evals,
                                               const std::vector<double>& presplit = {});

/// Integral over the straight segment z0 -> z1 of a complex function.
Result<std::complex<double>> integrate_line(const std::function<std::complex<double>(std::complex<double>)>& f,
                                            std::complex<double> z0, std::complex<double> z1,
                                            double abs_tol, long max_evals);

/// Integral on (a,b] of a function that oscillates with unbounded frequency as
/// t -> a+ while |f(t)| <= amp_bound(t-a). Panels shrink dyadically toward a;
/// once amp_bound(delta)*delta falls below the remaining tolerance the last
/// sliver is skipped and its bound charged to err_est.
Result<std::complex<double>> integrate_cusp(const std::function<std::complex<double>(double)>& f,
                                            double a, double b,
                                            const std::function<double(double)>& amp_bound,
                                            double abs_tol, long max_evals,
                                            const std::vector<double>& presplit = {});

}  // namespace fseries::quad
