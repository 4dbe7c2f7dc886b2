#include "stipula/decimal.hpp"

#include <cmath>
#include <limits>

namespace stipula {

namespace {

std::int64_t checked(__int128 wide) {
    if (wide > std::numeric_limits<std::int64_t>::max() || wide < std::numeric_limits<std::int64_t>::min())
        throw DecimalError("decimal overflow");
    return static_cast<std::int64_t>(wide);
}

} // namespace

Decimal Decimal::from_int(std::int64_t whole) {
    return from_units(checked(static_cast<__int128>(whole) * one));
}

Decimal Decimal::parse(std::string_view text) {
    if (text.empty())
        throw DecimalError("empty decimal literal");
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        ++i;
    }
    __int128 whole = 0;
    std::size_t digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
        whole = whole * 10 + (text[i] - '0');
        if (whole > std::numeric_limits<std::int64_t>::max())
            throw DecimalError("decimal overflow in '" + std::string(text) + "'");
    }
    if (digits == 0)
        throw DecimalError("malformed decimal '" + std::string(text) + "'");
    __int128 frac = 0;
    int frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            if (++frac_digits > scale)
                throw DecimalError("more than four fractional digits in '" + std::string(text) + "'");
            frac = frac * 10 + (text[i] - '0');
        }
        if (frac_digits == 0)
            throw DecimalError("malformed decimal '" + std::string(text) + "'");
    }
    if (i != text.size())
        throw DecimalError("malformed decimal '" + std::string(text) + "'");
    for (int k = frac_digits; k < scale; ++k)
        frac *= 10;
    __int128 units = whole * one + frac;
    return from_units(checked(negative ? -units : units));
}

Decimal Decimal::from_double(double value) {
    if (!std::isfinite(value))
        throw DecimalError("non-finite number");
    double scaled = std::round(value * static_cast<double>(one));
    if (std::fabs(scaled) > 9.0e18)
        throw DecimalError("decimal overflow");
    return from_units(static_cast<std::int64_t>(scaled));
}

std::string Decimal::to_string() const {
    __int128 u = units_;
    bool negative = u < 0;
    if (negative)
        u = -u;
    auto whole_part = static_cast<unsigned long long>(u / one);
    auto frac_part = static_cast<unsigned long long>(u % one);
    std::string frac = std::to_string(frac_part);
    frac.insert(0, scale - frac.size(), '0');
    return (negative ? "-" : "") + std::to_string(whole_part) + "." + frac;
}

Decimal operator+(Decimal a, Decimal b) {
    return Decimal::from_units(checked(static_cast<__int128>(a.units_) + b.units_));
}

Decimal operator-(Decimal a, Decimal b) {
    return Decimal::from_units(checked(static_cast<__int128>(a.units_) - b.units_));
}

Decimal operator*(Decimal a, Decimal b) {
    __int128 wide = static_cast<__int128>(a.units_) * b.units_;
    return Decimal::from_units(checked(wide / Decimal::one));
}

Decimal operator/(Decimal a, Decimal b) {
    if (b.units_ == 0)
        throw DecimalError("division by zero");
    __int128 wide = static_cast<__int128>(a.units_) * Decimal::one;
    return Decimal::from_units(checked(wide / b.units_));
}

} // namespace stipula
