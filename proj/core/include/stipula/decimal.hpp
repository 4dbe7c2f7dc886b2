#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stipula {

class DecimalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Signed fixed-point number with exactly four fractional digits.
///
/// Addition and subtraction are exact. Multiplication and division truncate
/// toward zero at the fourth fractional digit. Every operation that would
/// leave the representable range throws DecimalError instead of wrapping.
class Decimal {
public:
    static constexpr int scale = 4;
    static constexpr std::int64_t one = 10000;

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) {
        Decimal d;
        d.units_ = units;
        return d;
    }
    static Decimal from_int(std::int64_t whole);

    /// Accepts `[-]digits[.digits]` with at most four fractional digits.
    static Decimal parse(std::string_view text);

    /// Nearest representable value; used for JSON numbers.
    static Decimal from_double(double value);

    constexpr std::int64_t units() const { return units_; }
    constexpr bool is_zero() const { return units_ == 0; }
    constexpr bool is_negative() const { return units_ < 0; }
    constexpr bool is_integral() const { return units_ % one == 0; }
    constexpr std::int64_t whole() const { return units_ / one; }

    /// Always renders four fractional digits, e.g. "2.0000".
    std::string to_string() const;

    friend Decimal operator+(Decimal a, Decimal b);
    friend Decimal operator-(Decimal a, Decimal b);
    friend Decimal operator*(Decimal a, Decimal b);
    friend Decimal operator/(Decimal a, Decimal b);

    friend constexpr bool operator==(Decimal, Decimal) = default;
    friend constexpr auto operator<=>(Decimal, Decimal) = default;

private:
    std::int64_t units_ = 0;
};

} // namespace stipula
