#pragma once

#include <cstddef>
#include <vector>

#include "uedge/error.hpp"
#include "uedge/map2d.hpp"

namespace uedge {

/// Row-major C x H x W tensor of doubles. Images are c=3, feature maps
/// arbitrary c, single-channel maps convert to/from Map2d.
class Tensor {
public:
    Tensor() = default;
    Tensor(int c, int h, int w, double fill = 0.0)
        : c_(c), h_(h), w_(w), v_(static_cast<size_t>(c) * h * w, fill) {
        if (c < 0 || h < 0 || w < 0) throw InvalidInput("Tensor: negative dimensions");
    }

    int channels() const { return c_; }
    int height() const { return h_; }
    int width() const { return w_; }
    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& at(int c, int y, int x) {
        return v_[(static_cast<size_t>(c) * h_ + y) * w_ + x];
    }
    double at(int c, int y, int x) const {
        return v_[(static_cast<size_t>(c) * h_ + y) * w_ + x];
    }
    double& operator[](size_t i) { return v_[i]; }
    double operator[](size_t i) const { return v_[i]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* channel(int c) { return v_.data() + static_cast<size_t>(c) * h_ * w_; }
    const double* channel(int c) const { return v_.data() + static_cast<size_t>(c) * h_ * w_; }

    bool same_shape(const Tensor& o) const { return c_ == o.c_ && h_ == o.h_ && w_ == o.w_; }
    void fill(double value) { std::fill(v_.begin(), v_.end(), value); }

    MapD to_map() const {
        if (c_ != 1) throw InvalidInput("Tensor::to_map: expected single channel");
        MapD m(h_, w_);
        std::copy(v_.begin(), v_.end(), m.raw().begin());
        return m;
    }

    static Tensor from_map(const MapD& m) {
        Tensor t(1, m.height(), m.width());
        std::copy(m.raw().begin(), m.raw().end(), t.v_.begin());
        return t;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.c_ == b.c_ && a.h_ == b.h_ && a.w_ == b.w_ && a.v_ == b.v_;
    }

private:
    int c_ = 0, h_ = 0, w_ = 0;
    std::vector<double> v_;
};

}  // namespace uedge
