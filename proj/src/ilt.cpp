#include "telegraph/ilt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "telegraph/error.hpp"

namespace telegraph {

using cld = std::complex<long double>;

const char* to_string(IltMethod m) noexcept {
    switch (m) {
    case IltMethod::Gaver: return "gaver";
    case IltMethod::Talbot: return "talbot";
    case IltMethod::Euler: return "euler";
    }
    return "unknown";
}

IltMethod parse_ilt_method(const std::string& name) {
    if (name == "gaver" || name == "stehfest") return IltMethod::Gaver;
    if (name == "talbot") return IltMethod::Talbot;
    if (name == "euler") return IltMethod::Euler;
    throw Error(ErrorCode::ConfigError, "ilt_method", "unknown method '" + name + "'");
}

long double IltRule::amplification() const {
    long double s = 0;
    for (const auto& w : weights) s += std::abs(w);
    return s;
}

void validate(const IltConfig& cfg) {
    if (cfg.terms < 6) throw Error(ErrorCode::PrecisionInsufficient, "terms", "need at least 6 terms");
    if (cfg.precision_bits < 53)
        throw Error(ErrorCode::PrecisionInsufficient, "precision_bits", "need at least 53 bits");
    if (cfg.precision_bits > std::numeric_limits<long double>::digits)
        throw Error(ErrorCode::PrecisionInsufficient, "precision_bits",
                    "working precision is limited to " + std::to_string(std::numeric_limits<long double>::digits) +
                        " bits");
    if (cfg.method == IltMethod::Gaver) {
        if (cfg.terms % 2 != 0) throw Error(ErrorCode::PrecisionInsufficient, "terms", "Gaver needs an even count");
        if (cfg.precision_bits < 2.2 * cfg.terms)
            throw Error(ErrorCode::PrecisionInsufficient, "precision_bits", "Gaver needs precision_bits >= 2.2 terms");
    }
}

namespace {

long double factorial(int n) {
    long double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

IltRule gaver_rule(int N) {
    IltRule rule{IltMethod::Gaver, N, {}, {}};
    const int half = N / 2;
    const long double ln2 = std::numbers::ln2_v<long double>;
    for (int k = 1; k <= N; ++k) {
        long double v = 0;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            v += std::pow(static_cast<long double>(j), half) * factorial(2 * j) /
                 (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k));
        }
        if ((k + half) % 2 != 0) v = -v;
        rule.nodes.emplace_back(k * ln2, 0);
        rule.weights.emplace_back(ln2 * v, 0);
    }
    return rule;
}

IltRule talbot_rule(int M) {
    IltRule rule{IltMethod::Talbot, M, {}, {}};
    const long double pi = std::numbers::pi_v<long double>;
    const long double r = 2.0L * M / 5.0L;
    rule.nodes.emplace_back(r, 0);
    rule.weights.emplace_back(0.5L * std::exp(r) * r / M, 0);
    for (int k = 1; k < M; ++k) {
        const long double theta = k * pi / M;
        const long double cot = std::cos(theta) / std::sin(theta);
        const cld node(r * theta * cot, r * theta);
        const long double sigma = theta + (theta * cot - 1.0L) * cot;
        rule.nodes.push_back(node);
        rule.weights.push_back((r / M) * std::exp(node) * cld(1.0L, sigma));
    }
    return rule;
}

IltRule euler_rule(int M) {
    IltRule rule{IltMethod::Euler, M, {}, {}};
    const long double pi = std::numbers::pi_v<long double>;
    const long double a = M * std::log(10.0L) / 3.0L;
    const long double scale = std::pow(10.0L, M / 3.0L);
    std::vector<long double> xi(2 * M + 1, 1.0L);
    xi[0] = 0.5L;
    const long double two_m = std::pow(2.0L, -M);
    xi[2 * M] = two_m;
    long double binom = 1;  // C(M, k)
    for (int k = 1; k < M; ++k) {
        binom = binom * (M - k + 1) / k;
        xi[2 * M - k] = xi[2 * M - k + 1] + two_m * binom;
    }
    for (int k = 0; k <= 2 * M; ++k) {
        rule.nodes.emplace_back(a, k * pi);
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        rule.weights.emplace_back(scale * sign * xi[k], 0);
    }
    return rule;
}

}  // namespace

IltRule make_rule(IltMethod method, int terms) {
    switch (method) {
    case IltMethod::Gaver: return gaver_rule(terms);
    case IltMethod::Talbot: return talbot_rule(terms);
    case IltMethod::Euler: return euler_rule(terms);
    }
    throw Error(ErrorCode::ConfigError, "method", "unknown inversion method");
}

double apply_rule(const IltRule& rule, const LaplaceTransform& F, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::IltFailure, "t", "inversion needs t > 0");
    const long double tt = t;
    long double sum = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const cld p = rule.nodes[k] / tt;
        const cld value = F(p);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw Error(ErrorCode::EvaluatorFailure,
                        "p=(" + std::to_string(static_cast<double>(p.real())) + "," +
                            std::to_string(static_cast<double>(p.imag())) + ")",
                        "transform returned a non-finite value");
        sum += (rule.weights[k] * value).real();
    }
    return static_cast<double>(sum / tt);
}

namespace {

int reduced_terms(IltMethod method, int terms) {
    int half = std::max(4, terms / 2);
    if (method == IltMethod::Gaver && half % 2 != 0) ++half;
    return half;
}

}  // namespace

IltResult invert(const LaplaceTransform& F, std::span<const double> t_values, const IltConfig& cfg) {
    validate(cfg);
    const IltRule main = make_rule(cfg.method, cfg.terms);
    const IltRule coarse = make_rule(cfg.method, reduced_terms(cfg.method, cfg.terms));
    std::optional<IltRule> cross;
    if (cfg.cross_check) cross = make_rule(*cfg.cross_check, cfg.cross_check_terms);

    IltResult out;
    out.values.reserve(t_values.size());
    out.errors.reserve(t_values.size());
    for (double t : t_values) {
        const double f = apply_rule(main, F, t);
        double err = std::abs(f - apply_rule(coarse, F, t));
        if (cross) err = std::max(err, std::abs(f - apply_rule(*cross, F, t)));
        out.values.push_back(f);
        out.errors.push_back(err);
    }
    return out;
}

}  // namespace telegraph
