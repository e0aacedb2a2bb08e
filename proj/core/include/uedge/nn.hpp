#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "uedge/rng.hpp"
#include "uedge/tensor.hpp"

namespace uedge::nn {

inline double sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

inline double softplus_inverse(double y) { return std::log(std::expm1(y)); }

inline double swish(double x) { return x * sigmoid(x); }

/// Learnable tensor plus its gradient accumulator.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    Param() = default;
    Param(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
        grad = Tensor(value.channels(), value.height(), value.width(), 0.0);
    }
    void zero_grad() { grad.fill(0.0); }
};

/// 2-D convolution, square kernel, "same" padding (pad = k/2). stride 2
/// halves even spatial dimensions.
class Conv2d {
public:
    Conv2d() = default;
    Conv2d(std::string name, int in_c, int out_c, int ksize, int stride = 1);

    /// Fan-in scaled Gaussian init (He), zero bias.
    void init(Rng& rng);

    Tensor forward(const Tensor& x) const;
    /// Accumulates w/b grads; returns dL/dx.
    Tensor backward(const Tensor& x, const Tensor& dy);

    int in_channels() const { return in_c_; }
    int out_channels() const { return out_c_; }
    int kernel() const { return k_; }
    int stride() const { return stride_; }

    Param w;  // (out_c, in_c, k*k)
    Param b;  // (out_c, 1, 1)

private:
    int in_c_ = 0, out_c_ = 0, k_ = 0, stride_ = 1;
};

/// Group normalization over (channels/groups, H, W) slabs.
class GroupNorm {
public:
    GroupNorm() = default;
    GroupNorm(std::string name, int channels, int groups);

    Tensor forward(const Tensor& x, std::vector<double>& saved_mean,
                   std::vector<double>& saved_istd) const;
    Tensor backward(const Tensor& x, const Tensor& dy, const std::vector<double>& saved_mean,
                    const std::vector<double>& saved_istd);

    int channels() const { return channels_; }
    int groups() const { return groups_; }

    Param gamma;  // (c, 1, 1)
    Param beta;   // (c, 1, 1)

private:
    int channels_ = 0, groups_ = 1;
    double eps_ = 1e-5;
};

/// Single-forward computation tape. Supports the op set needed for
/// encoder-decoder nets with skip connections; backward accumulates
/// parameter gradients and per-node input gradients in reverse order.
class Graph {
public:
    int input(Tensor x);
    int conv(Conv2d& layer, int x);
    int gnorm(GroupNorm& layer, int x);
    int swish(int x);
    int softplus(int x);
    int upsample2(int x);
    int concat(const std::vector<int>& xs);

    const Tensor& value(int node) const { return nodes_[node].val; }
    /// Valid after backward(); zero tensor if the node was never touched.
    const Tensor& grad(int node) const { return nodes_[node].grad; }

    void backward(const std::vector<std::pair<int, Tensor>>& seeds);

private:
    enum class Op { kInput, kConv, kGnorm, kSwish, kSoftplus, kUpsample2, kConcat };
    struct Node {
        Tensor val;
        Tensor grad;
        bool touched = false;
    };
    struct Step {
        Op op;
        std::vector<int> in;
        int out;
        Conv2d* conv = nullptr;
        GroupNorm* gn = nullptr;
        std::vector<double> gn_mean, gn_istd;
    };

    int push_value(Tensor v);
    void seed_grad(int node, Tensor g);
    void add_grad(int node, const Tensor& g);

    std::vector<Node> nodes_;
    std::vector<Step> steps_;
};

}  // namespace uedge::nn
