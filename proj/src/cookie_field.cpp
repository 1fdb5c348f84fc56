#include "erwd/cookie_field.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <sstream>

#include "erwd/errors.hpp"
#include "erwd/params.hpp"
#include "erwd/rng.hpp"

namespace erwd {

LatticePoint::LatticePoint(int d) : d_(d) {
    if (d < 1 || d > kMaxDimension) {
        throw DomainError("lattice dimension must lie in [1, " + std::to_string(kMaxDimension) +
                          "], got " + std::to_string(d));
    }
}

LatticePoint LatticePoint::unit(int d, int axis, int sign) {
    LatticePoint p(d);
    p[axis] = sign;
    return p;
}

std::int64_t LatticePoint::norm1() const {
    std::int64_t s = 0;
    for (int i = 0; i < d_; ++i) s += std::abs(static_cast<std::int64_t>(c_[static_cast<std::size_t>(i)]));
    return s;
}

std::string LatticePoint::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < d_; ++i) os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
    os << ')';
    return os.str();
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.dimension());
    for (int i = 0; i < p.dimension(); ++i) {
        h = splitmix64(h ^ static_cast<std::uint32_t>(p[i]));
    }
    return static_cast<std::size_t>(h);
}

WalkParams::WalkParams(int d, double beta, double mu) : d_(d), beta_(beta), mu_(mu) {
    if (d < 1) throw DomainError("dimension d must be >= 1, got " + std::to_string(d));
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("beta must lie in [0,1], got " + std::to_string(beta));
    }
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw DomainError("mu must lie in [0,1], got " + std::to_string(mu));
    }
}

PackedCoder::PackedCoder(int d, int bits) : d_(d), bits_(bits) {
    assert(d * bits <= 128 && bits >= 2);
}

PackedCoder PackedCoder::for_radius(int d, std::int64_t radius) {
    radius = std::max<std::int64_t>(radius, 1);
    // need 2^(bits-1) - 1 >= radius
    const int bits = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(radius))) + 1;
    if (d * bits > 128) return {};
    // spread any spare bits so walks that exceed the nominal radius still fit
    return PackedCoder(d, std::min(62, 128 / d));
}

PackedKey PackedCoder::encode(const LatticePoint& p) const {
    assert(valid());
    PackedKey key = 0;
    const std::int64_t offset = std::int64_t{1} << (bits_ - 1);
    for (int i = 0; i < d_; ++i) {
        const std::int64_t c = p[i];
        if (c > max_abs_coordinate() || c < -max_abs_coordinate()) {
            throw DomainError("coordinate " + std::to_string(c) + " exceeds the packed range of the cookie field");
        }
        key |= static_cast<PackedKey>(static_cast<std::uint64_t>(c + offset)) << (bits_ * i);
    }
    return key;
}

PackedKeySet::PackedKeySet(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap *= 2;
    slots_.assign(cap, 0);
    mask_ = cap - 1;
}

void PackedKeySet::clear() {
    std::fill(slots_.begin(), slots_.end(), PackedKey{0});
    size_ = 0;
}

void PackedKeySet::grow() {
    std::vector<PackedKey> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, 0);
    mask_ = slots_.size() - 1;
    size_ = 0;
    for (PackedKey k : old) {
        if (k != 0) insert(k);
    }
}

CookieField::CookieField(int d, std::int64_t radius)
    : d_(d), coder_(d <= kMaxDimension ? PackedCoder::for_radius(d, radius) : PackedCoder{}) {
    if (d < 1 || d > kMaxDimension) {
        throw DomainError("cookie field dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
    }
}

void CookieField::check_point(const LatticePoint& x) const {
    if (x.dimension() != d_) {
        throw DomainError("lattice point dimension " + std::to_string(x.dimension()) +
                          " does not match cookie field dimension " + std::to_string(d_));
    }
}

bool CookieField::contains(const LatticePoint& x) const {
    check_point(x);
    if (packed()) {
        for (int i = 0; i < d_; ++i) {
            if (std::abs(static_cast<std::int64_t>(x[i])) > coder_.max_abs_coordinate()) return false;
        }
        return keys_.contains(coder_.encode(x));
    }
    return points_.count(x) != 0;
}

bool CookieField::insert(const LatticePoint& x) {
    check_point(x);
    if (packed()) return keys_.insert(coder_.encode(x));
    return points_.insert(x).second;
}

std::size_t CookieField::size() const { return packed() ? keys_.size() : points_.size(); }

void CookieField::clear() {
    keys_.clear();
    points_.clear();
}

}  // namespace erwd
