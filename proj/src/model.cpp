#include "telegraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace telegraph {

ProcessParams validate_params(double mu0, double mu1, double lambda0, double lambda1, double B,
                              Validation mode) {
    const std::pair<const char*, double> fields[] = {
        {"mu0", mu0}, {"mu1", mu1}, {"lambda0", lambda0}, {"lambda1", lambda1}, {"B", B}};
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteInput, name, "value is not finite");
    }
    if (!(mu0 < 0.0)) throw Error(ErrorCode::SignViolation, "mu0", "must be negative");
    if (!(mu1 > 0.0)) throw Error(ErrorCode::SignViolation, "mu1", "must be positive");
    if (!(B > 0.0)) throw Error(ErrorCode::SignViolation, "B", "must be positive");
    if (lambda0 < 0.0) throw Error(ErrorCode::SignViolation, "lambda0", "must be non-negative");
    if (lambda1 < 0.0) throw Error(ErrorCode::SignViolation, "lambda1", "must be non-negative");
    if (mode == Validation::Strict) {
        if (lambda0 == 0.0)
            throw Error(ErrorCode::ZeroRateInStrictMode, "lambda0", "strict mode needs a positive rate");
        if (lambda1 == 0.0)
            throw Error(ErrorCode::ZeroRateInStrictMode, "lambda1", "strict mode needs a positive rate");
    }
    return ProcessParams{mu0, mu1, lambda0, lambda1, B};
}

InitialCondition::InitialCondition(std::vector<Atom> atoms, double B) : atoms_(std::move(atoms)), B_(B) {
    if (atoms_.empty()) throw Error(ErrorCode::InvalidInitialCondition, "atoms", "list is empty");
    if (!(B_ > 0.0) || !std::isfinite(B_))
        throw Error(ErrorCode::InvalidInitialCondition, "B", "domain width must be positive");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        const std::string tag = "atoms[" + std::to_string(i) + "]";
        if (!std::isfinite(a.weight) || !(a.weight > 0.0))
            throw Error(ErrorCode::InvalidInitialCondition, tag, "weight must be positive");
        if (!std::isfinite(a.position) || a.position < 0.0 || a.position > B_)
            throw Error(ErrorCode::InvalidInitialCondition, tag, "position outside [0, B]");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidInitialCondition, "atoms",
                    "weights sum to " + std::to_string(total) + ", expected 1");
}

double InitialCondition::regime_weight(Regime s) const noexcept {
    double w = 0.0;
    for (const Atom& a : atoms_)
        if (a.regime == s) w += a.weight;
    return w;
}

double InitialCondition::stuck_weight() const noexcept {
    double w = 0.0;
    for (const Atom& a : atoms_)
        if (a.regime == Regime::Up && a.position == B_) w += a.weight;
    return w;
}

double initial_ccdf(const InitialCondition& init, Regime s, double A) {
    if (!(A >= 0.0 && A <= init.domain_width()))
        throw Error(ErrorCode::PositionOutOfDomain, "A", "query outside [0, B]");
    double sum = 0.0;
    for (const Atom& a : init.atoms())
        if (a.regime == s && a.position >= A) sum += a.weight;
    return std::min(sum, 1.0);
}

std::complex<double> initial_finite_laplace(const InitialCondition& init, Regime s,
                                            std::complex<double> xi) {
    return scaled_initial_finite_laplace<double>(init, s, xi, {0.0, 0.0});
}

}  // namespace telegraph
