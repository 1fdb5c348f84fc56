#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "erwd/lattice.hpp"

namespace erwd {

using PackedKey = unsigned __int128;

/// Packs the coordinates of a lattice point into one 128-bit integer.
///
/// Each coordinate gets `bits` bits and is stored with an offset of
/// 2^(bits-1), so a unit step along axis i changes the key by +-2^(bits*i)
/// and the all-zero key is never produced.
class PackedCoder {
public:
    PackedCoder() = default;
    PackedCoder(int d, int bits);

    /// Smallest coder that represents every site within l1 distance `radius`
    /// of the origin, or an invalid coder if d * bits would exceed 128.
    static PackedCoder for_radius(int d, std::int64_t radius);

    bool valid() const { return bits_ > 0; }
    int bits() const { return bits_; }
    std::int64_t max_abs_coordinate() const { return (std::int64_t{1} << (bits_ - 1)) - 1; }

    PackedKey encode(const LatticePoint& p) const;
    PackedKey unit(int axis) const { return PackedKey{1} << (bits_ * axis); }

private:
    int d_ = 0;
    int bits_ = 0;
};

/// Open-addressing set of packed keys with linear probing.
class PackedKeySet {
public:
    explicit PackedKeySet(std::size_t expected = 16);

    /// Inserts the key; returns true if it was not present before.
    bool insert(PackedKey key) {
        if (2 * (size_ + 1) > slots_.size()) grow();
        std::size_t i = slot_of(key);
        while (true) {
            PackedKey& s = slots_[i];
            if (s == 0) {
                s = key;
                ++size_;
                return true;
            }
            if (s == key) return false;
            i = (i + 1) & mask_;
        }
    }

    bool contains(PackedKey key) const {
        std::size_t i = slot_of(key);
        while (true) {
            const PackedKey s = slots_[i];
            if (s == 0) return false;
            if (s == key) return true;
            i = (i + 1) & mask_;
        }
    }

    std::size_t size() const { return size_; }
    void clear();

private:
    static std::uint64_t mix(PackedKey key) {
        auto lo = static_cast<std::uint64_t>(key);
        auto hi = static_cast<std::uint64_t>(key >> 64);
        std::uint64_t x = lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x632be59bd9b4e019ULL) * 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 29;
        x *= 0x94d049bb133111ebULL;
        return x ^ (x >> 32);
    }
    std::size_t slot_of(PackedKey key) const { return static_cast<std::size_t>(mix(key)) & mask_; }
    void grow();

    std::vector<PackedKey> slots_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
};

/// The set of visited sites. Every site outside the set still holds its
/// cookie; a site loses its cookie the first time the walk leaves it.
///
/// Sites reachable within `radius` steps of the origin are stored as packed
/// keys when d * bits fits in 128 bits; otherwise a hashed set of points is
/// used. Membership is exact in both representations.
class CookieField {
public:
    static constexpr std::int64_t kDefaultRadius = 32767;

    explicit CookieField(int d, std::int64_t radius = kDefaultRadius);

    int dimension() const { return d_; }
    bool packed() const { return coder_.valid(); }
    const PackedCoder& coder() const { return coder_; }

    bool contains(const LatticePoint& x) const;
    bool has_cookie(const LatticePoint& x) const { return !contains(x); }
    /// Marks x visited; returns true if x still held its cookie.
    bool insert(const LatticePoint& x);
    std::size_t size() const;
    void clear();

    // Packed fast path; only valid when packed() is true.
    bool insert_key(PackedKey key) { return keys_.insert(key); }
    bool contains_key(PackedKey key) const { return keys_.contains(key); }

private:
    void check_point(const LatticePoint& x) const;

    int d_;
    PackedCoder coder_;
    PackedKeySet keys_;
    std::unordered_set<LatticePoint, LatticePointHash> points_;
};

}  // namespace erwd
