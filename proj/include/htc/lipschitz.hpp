#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace htc {

/// An n-variate function with an almost-everywhere gradient and a declared
/// metric d_p under which it is `lipschitz_constant`-Lipschitz.
class LipschitzFn {
public:
    virtual ~LipschitzFn() = default;

    virtual std::string name() const = 0;
    virtual std::size_t arity() const = 0;
    virtual double eval(std::span<const double> x) const = 0;
    /// Writes the a.e. gradient into g (size arity()).
    virtual void grad(std::span<const double> x, std::span<double> g) const = 0;
    /// p of the declared metric d_p; +inf for d_inf.
    virtual double metric() const = 0;
    virtual double lipschitz_constant() const { return 1.0; }
    virtual nlohmann::json describe() const = 0;

    /// d_p-1-Lipschitz implies d_q-1-Lipschitz for every q <= p.
    bool lipschitz_wrt(double q) const { return q <= metric(); }
};

using LipschitzFnPtr = std::shared_ptr<const LipschitzFn>;

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_n, hi_n]; hi may be +inf and lo -inf.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dimension() const { return lo.size(); }
};

/// max_i x_i; gradient e_k for the lowest index k attaining the max. Declared for d_inf.
LipschitzFnPtr max_fn(std::size_t n);

/// 1-D ramp (x - m)_+.
LipschitzFnPtr activation_fn(double m);

/// n^(-(p-1)/p) * sum_i x_i, declared for d_p.
LipschitzFnPtr scaled_sum_fn(std::size_t n, double p);

/// min{Euclidean distance to the union of boxes, cap}, declared for d_2.
LipschitzFnPtr distance_to_set_fn(std::vector<Box> boxes, double cap);

/// |x|_2 with zero gradient at the origin.
LipschitzFnPtr l2_norm_fn(std::size_t n);

/// w . x with |w|_2 <= 1, declared for d_2.
LipschitzFnPtr linear_fn(std::vector<double> weights);

/// Constant c on R^n (0-Lipschitz in every metric).
LipschitzFnPtr constant_fn(std::size_t n, double c);

/// Euclidean distance from x to a box.
double box_distance(const Box& box, std::span<const double> x);
/// Euclidean gap between two boxes (coordinate-wise gaps combined in l2).
double box_gap(const Box& a, const Box& b);

/// Registry lookup: "max", "l2_norm", "identity", "activation:m=2", "scaled_sum:p=1.5",
/// "linear:w=0.6;0.8", "distance:lo=0;0,hi=1;1,cap=10", "constant:c=1".
/// `n` is the dimension for the dimension-generic functions.
LipschitzFnPtr make_function(const std::string& spec, std::size_t n);

/// Names understood by make_function.
std::vector<std::string> function_names();

/// l_p distance; p = +inf gives the max norm.
double dp_distance(std::span<const double> x, std::span<const double> y, double p);

}  // namespace htc
