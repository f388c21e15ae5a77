#pragma once

#include <cstddef>
#include <vector>

namespace spdelab {

/// Polynomial in x with coefficients in increasing degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    double value(double x) const noexcept;
    /// order-th derivative (order 0 is the value itself).
    double derivative(double x, int order) const noexcept;

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    bool operator==(const Polynomial&) const = default;

private:
    std::vector<double> coeffs_;
};

/// Coefficient field f(t, x): piecewise constant in t, polynomial in x.
///
/// Piece k is active on [breaks[k-1], breaks[k]) with breaks[-1] = -inf and the
/// last piece extending to +inf. A time-constant field has a single piece.
class CoefficientField {
public:
    CoefficientField();  // identically zero
    static CoefficientField constant(double value);
    static CoefficientField polynomial(std::vector<double> coefficients);
    static CoefficientField piecewise_in_time(std::vector<double> breaks, std::vector<Polynomial> pieces);

    double operator()(double t, double x) const noexcept { return piece(t).value(x); }
    double dx(double t, double x) const noexcept { return piece(t).derivative(x, 1); }
    double dxx(double t, double x) const noexcept { return piece(t).derivative(x, 2); }

    std::size_t piece_index(double t) const noexcept;
    const Polynomial& piece(double t) const noexcept { return pieces_[piece_index(t)]; }
    const std::vector<Polynomial>& pieces() const noexcept { return pieces_; }
    const std::vector<double>& breaks() const noexcept { return breaks_; }
    bool time_constant() const noexcept { return pieces_.size() == 1; }

    /// max over pieces of sup|f| + sup|f_x| + sup|f_xx| on [0,1], sampled.
    double c2_norm(std::size_t samples = 1025) const;
    double sup_abs(std::size_t samples = 1025) const;
    double min_value(std::size_t samples = 1025) const;

    bool operator==(const CoefficientField&) const = default;

private:
    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_;
};

}  // namespace spdelab
