#pragma once

#include <cstdint>
#include <vector>

#include "uedge/error.hpp"

namespace uedge {

/// Dense H x W grid with value semantics. Row-major, (y, x) indexing.
template <typename T>
class Map2d {
public:
    Map2d() = default;
    Map2d(int height, int width, T fill = T{})
        : h_(height), w_(width), v_(static_cast<size_t>(height) * width, fill) {
        if (height < 0 || width < 0) throw InvalidInput("Map2d: negative dimensions");
    }

    int height() const { return h_; }
    int width() const { return w_; }
    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    T& at(int y, int x) { return v_[static_cast<size_t>(y) * w_ + x]; }
    const T& at(int y, int x) const { return v_[static_cast<size_t>(y) * w_ + x]; }
    T& operator[](size_t i) { return v_[i]; }
    const T& operator[](size_t i) const { return v_[i]; }

    T* data() { return v_.data(); }
    const T* data() const { return v_.data(); }
    std::vector<T>& raw() { return v_; }
    const std::vector<T>& raw() const { return v_; }

    bool in_bounds(int y, int x) const { return y >= 0 && y < h_ && x >= 0 && x < w_; }
    bool same_shape(const Map2d& o) const { return h_ == o.h_ && w_ == o.w_; }

    void fill(T value) { std::fill(v_.begin(), v_.end(), value); }

    friend bool operator==(const Map2d& a, const Map2d& b) {
        return a.h_ == b.h_ && a.w_ == b.w_ && a.v_ == b.v_;
    }

private:
    int h_ = 0, w_ = 0;
    std::vector<T> v_;
};

using MapD = Map2d<double>;
/// Binary masks hold exactly 0 or 1.
using BinaryMap = Map2d<uint8_t>;

inline void require_same_shape(const MapD& a, const MapD& b, const char* where) {
    if (!a.same_shape(b)) throw InvalidInput(std::string(where) + ": shape mismatch");
}

}  // namespace uedge
