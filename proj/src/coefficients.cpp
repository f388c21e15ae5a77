#include "spdelab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spdelab {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::value(double x) const noexcept { return derivative(x, 0); }

double Polynomial::derivative(double x, int order) const noexcept {
    // Horner on the differentiated coefficients.
    const auto n = static_cast<int>(coeffs_.size());
    double acc = 0.0;
    for (int k = n - 1; k >= order; --k) {
        double falling = 1.0;
        for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
        acc = acc * x + falling * coeffs_[static_cast<std::size_t>(k)];
    }
    return acc;
}

CoefficientField::CoefficientField() : pieces_{Polynomial{}} {}

CoefficientField CoefficientField::constant(double value) { return polynomial({value}); }

CoefficientField CoefficientField::polynomial(std::vector<double> coefficients) {
    CoefficientField f;
    f.pieces_ = {Polynomial(std::move(coefficients))};
    return f;
}

CoefficientField CoefficientField::piecewise_in_time(std::vector<double> breaks,
                                                     std::vector<Polynomial> pieces) {
    if (pieces.empty() || breaks.size() + 1 != pieces.size()) {
        throw std::invalid_argument("piecewise field needs one more piece than breaks");
    }
    if (!std::is_sorted(breaks.begin(), breaks.end()) ||
        std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end()) {
        throw std::invalid_argument("time breaks must be strictly increasing");
    }
    CoefficientField f;
    f.breaks_ = std::move(breaks);
    f.pieces_ = std::move(pieces);
    return f;
}

std::size_t CoefficientField::piece_index(double t) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
}

namespace {

template <class Fn>
double sampled_max(std::size_t samples, Fn&& fn) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(samples - 1);
        m = std::max(m, fn(x));
    }
    return m;
}

}  // namespace

double CoefficientField::c2_norm(std::size_t samples) const {
    double worst = 0.0;
    for (const auto& p : pieces_) {
        double total = 0.0;
        for (int order = 0; order <= 2; ++order) {
            total += sampled_max(samples, [&](double x) { return std::abs(p.derivative(x, order)); });
        }
        worst = std::max(worst, total);
    }
    return worst;
}

double CoefficientField::sup_abs(std::size_t samples) const {
    double worst = 0.0;
    for (const auto& p : pieces_) {
        worst = std::max(worst, sampled_max(samples, [&](double x) { return std::abs(p.value(x)); }));
    }
    return worst;
}

double CoefficientField::min_value(std::size_t samples) const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
        lo = std::min(lo, -sampled_max(samples, [&](double x) { return -p.value(x); }));
    }
    return lo;
}

}  // namespace spdelab
