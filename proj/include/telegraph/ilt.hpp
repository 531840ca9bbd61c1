#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <span>
#include <vector>

namespace telegraph {

/// Numerical inversion of Laplace transforms by fixed-node rules of the form
///   f(t) ~ (1/t) sum_k Re[ w_k F(a_k / t)]
/// (Abate & Whitt's unified framework). Three rules are provided:
///  - Gaver: Gaver-Stehfest, real nodes only. Handles delayed or kinked
///    functions gracefully but is ill-conditioned; weights grow like 10^{N/2}.
///  - Talbot: fixed Talbot deformed contour. Very accurate for transforms
///    analytic off the negative real axis; unreliable for delayed functions.
///  - Euler: Bromwich line with Euler summation of the Fourier series.
enum class IltMethod { Gaver, Talbot, Euler };

const char* to_string(IltMethod m) noexcept;
IltMethod parse_ilt_method(const std::string& name);

struct IltConfig {
    IltMethod method = IltMethod::Talbot;
    int terms = 32;
    int precision_bits = 64;
    /// When set, the second method also runs and its disagreement enters the
    /// error estimate.
    std::optional<IltMethod> cross_check;
    int cross_check_terms = 18;
};

/// Transform evaluator. Must be safe to call concurrently. The Gaver rule calls
/// it only with real arguments (zero imaginary part).
using LaplaceTransform = std::function<std::complex<long double>(std::complex<long double>)>;

struct IltResult {
    std::vector<double> values;
    std::vector<double> errors;
};

/// Node/weight pairs of a rule, independent of t.
struct IltRule {
    IltMethod method;
    int terms;
    std::vector<std::complex<long double>> nodes;
    std::vector<std::complex<long double>> weights;

    /// sum |w_k|: bounds how much evaluator noise is amplified.
    long double amplification() const;
};

/// Throws PrecisionInsufficient when the configuration violates the
/// conditioning rules (terms >= 6, 53 <= precision_bits <= 64 with extended
/// working precision, Gaver needs precision_bits >= 2.2 terms).
void validate(const IltConfig& cfg);

IltRule make_rule(IltMethod method, int terms);

/// Single inversion with a prepared rule; no error estimate.
double apply_rule(const IltRule& rule, const LaplaceTransform& F, double t);

/// Inverts F at every t (all t > 0). The error estimate is the discrepancy
/// against the same rule at half the terms, and against `cross_check` when set.
IltResult invert(const LaplaceTransform& F, std::span<const double> t_values, const IltConfig& cfg);

}  // namespace telegraph
