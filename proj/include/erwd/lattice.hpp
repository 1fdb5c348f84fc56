#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace erwd {

/// Largest lattice dimension supported by simulations and path enumeration.
inline constexpr int kMaxDimension = 16;

/// A nearest-neighbour displacement: +e_axis or -e_axis.
///
/// Directions are indexed 0..2d-1 as (+e1, -e1, +e2, -e2, ...), so the two
/// first-coordinate moves always come first.
struct Step {
    int axis = 0;
    int sign = 1;

    static constexpr Step from_direction(int dir) { return {dir / 2, (dir % 2 == 0) ? 1 : -1}; }
    constexpr int direction() const { return 2 * axis + (sign > 0 ? 0 : 1); }
    /// First-coordinate component e_1 . x.
    constexpr int first() const { return axis == 0 ? sign : 0; }
    constexpr Step reversed() const { return {axis, -sign}; }

    friend constexpr bool operator==(Step, Step) = default;
};

/// A site of Z^d, stored inline (no allocation) for d <= kMaxDimension.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(int d);

    static LatticePoint origin(int d) { return LatticePoint(d); }
    static LatticePoint unit(int d, int axis, int sign = 1);

    int dimension() const { return d_; }
    std::int32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::int32_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    LatticePoint& operator+=(Step s) {
        c_[static_cast<std::size_t>(s.axis)] += s.sign;
        return *this;
    }
    friend LatticePoint operator+(LatticePoint p, Step s) { return p += s; }

    /// l1 distance to the origin.
    std::int64_t norm1() const;
    std::string to_string() const;

    friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
        return a.d_ == b.d_ && a.c_ == b.c_;
    }
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
        return a.d_ != b.d_ ? a.d_ < b.d_ : a.c_ < b.c_;
    }

private:
    std::array<std::int32_t, kMaxDimension> c_{};
    int d_ = 0;
};

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const noexcept;
};

}  // namespace erwd
