#include "htc/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "htc/errors.hpp"

namespace htc {
namespace {

constexpr double kInfP = std::numeric_limits<double>::infinity();

class MaxFn final : public LipschitzFn {
public:
    explicit MaxFn(std::size_t n) : n_(n) {}
    std::string name() const override { return "max"; }
    std::size_t arity() const override { return n_; }
    double eval(std::span<const double> x) const override { return *std::max_element(x.begin(), x.end()); }
    void grad(std::span<const double> x, std::span<double> g) const override {
        std::fill(g.begin(), g.end(), 0.0);
        g[static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin())] = 1.0;
    }
    double metric() const override { return kInfP; }
    nlohmann::json describe() const override { return {{"name", "max"}, {"n", n_}, {"metric", "inf"}}; }

private:
    std::size_t n_;
};

class Activation final : public LipschitzFn {
public:
    explicit Activation(double m) : m_(m) {}
    std::string name() const override { return "activation"; }
    std::size_t arity() const override { return 1; }
    double eval(std::span<const double> x) const override { return x[0] >= m_ ? x[0] - m_ : 0.0; }
    void grad(std::span<const double> x, std::span<double> g) const override { g[0] = x[0] > m_ ? 1.0 : 0.0; }
    double metric() const override { return kInfP; }
    nlohmann::json describe() const override { return {{"name", "activation"}, {"m", m_}, {"metric", "inf"}}; }

private:
    double m_;
};

class ScaledSum final : public LipschitzFn {
public:
    ScaledSum(std::size_t n, double p)
        : n_(n), p_(p), coef_(std::pow(static_cast<double>(n), -(p - 1.0) / p)) {}
    std::string name() const override { return "scaled_sum"; }
    std::size_t arity() const override { return n_; }
    double eval(std::span<const double> x) const override {
        return coef_ * std::accumulate(x.begin(), x.end(), 0.0);
    }
    void grad(std::span<const double>, std::span<double> g) const override { std::fill(g.begin(), g.end(), coef_); }
    double metric() const override { return p_; }
    nlohmann::json describe() const override {
        return {{"name", "scaled_sum"}, {"n", n_}, {"p", p_}, {"coefficient", coef_}, {"metric", p_}};
    }

private:
    std::size_t n_;
    double p_;
    double coef_;
};

class DistanceToSet final : public LipschitzFn {
public:
    DistanceToSet(std::vector<Box> boxes, double cap) : boxes_(std::move(boxes)), cap_(cap) {}
    std::string name() const override { return "distance"; }
    std::size_t arity() const override { return boxes_.front().dimension(); }
    double eval(std::span<const double> x) const override { return std::min(nearest(x).second, cap_); }
    void grad(std::span<const double> x, std::span<double> g) const override {
        std::fill(g.begin(), g.end(), 0.0);
        const auto [k, d] = nearest(x);
        if (d <= 0.0 || d >= cap_) return;
        const Box& b = boxes_[k];
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double proj = std::clamp(x[i], b.lo[i], b.hi[i]);
            g[i] = (x[i] - proj) / d;
        }
    }
    double metric() const override { return 2.0; }
    nlohmann::json describe() const override {
        nlohmann::json boxes = nlohmann::json::array();
        auto end = [](double v) -> nlohmann::json {
            if (std::isfinite(v)) return v;
            return v > 0 ? "inf" : "-inf";
        };
        for (const auto& b : boxes_) {
            nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
            for (double v : b.lo) lo.push_back(end(v));
            for (double v : b.hi) hi.push_back(end(v));
            boxes.push_back({{"lo", lo}, {"hi", hi}});
        }
        return {{"name", "distance"}, {"boxes", boxes}, {"cap", cap_}, {"metric", 2.0}};
    }

private:
    std::pair<std::size_t, double> nearest(std::span<const double> x) const {
        std::size_t best = 0;
        double best_d = kInfP;
        for (std::size_t k = 0; k < boxes_.size(); ++k) {
            const double d = box_distance(boxes_[k], x);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        return {best, best_d};
    }

    std::vector<Box> boxes_;
    double cap_;
};

class L2Norm final : public LipschitzFn {
public:
    explicit L2Norm(std::size_t n) : n_(n) {}
    std::string name() const override { return "l2_norm"; }
    std::size_t arity() const override { return n_; }
    double eval(std::span<const double> x) const override {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    void grad(std::span<const double> x, std::span<double> g) const override {
        const double r = eval(x);
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = r > 0.0 ? x[i] / r : 0.0;
    }
    double metric() const override { return 2.0; }
    nlohmann::json describe() const override { return {{"name", "l2_norm"}, {"n", n_}, {"metric", 2.0}}; }

private:
    std::size_t n_;
};

class Linear final : public LipschitzFn {
public:
    explicit Linear(std::vector<double> w) : w_(std::move(w)) {}
    std::string name() const override { return "linear"; }
    std::size_t arity() const override { return w_.size(); }
    double eval(std::span<const double> x) const override {
        return std::inner_product(w_.begin(), w_.end(), x.begin(), 0.0);
    }
    void grad(std::span<const double>, std::span<double> g) const override { std::copy(w_.begin(), w_.end(), g.begin()); }
    double metric() const override { return 2.0; }
    nlohmann::json describe() const override { return {{"name", "linear"}, {"weights", w_}, {"metric", 2.0}}; }

private:
    std::vector<double> w_;
};

class Constant final : public LipschitzFn {
public:
    Constant(std::size_t n, double c) : n_(n), c_(c) {}
    std::string name() const override { return "constant"; }
    std::size_t arity() const override { return n_; }
    double eval(std::span<const double>) const override { return c_; }
    void grad(std::span<const double>, std::span<double> g) const override { std::fill(g.begin(), g.end(), 0.0); }
    double metric() const override { return kInfP; }
    double lipschitz_constant() const override { return 0.0; }
    nlohmann::json describe() const override { return {{"name", "constant"}, {"n", n_}, {"c", c_}, {"metric", "inf"}}; }

private:
    std::size_t n_;
    double c_;
};

void require_arity(std::size_t n) {
    if (n < 1) throw DomainError("function arity must be at least 1");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number '" + item + "' in function parameters");
        }
    }
    return out;
}

}  // namespace

double box_distance(const Box& box, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double gap = 0.0;
        if (x[i] < box.lo[i]) gap = box.lo[i] - x[i];
        else if (x[i] > box.hi[i]) gap = x[i] - box.hi[i];
        s += gap * gap;
    }
    return std::sqrt(s);
}

double box_gap(const Box& a, const Box& b) {
    if (a.dimension() != b.dimension()) throw DomainError("box_gap: boxes of different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const double gap = std::max({0.0, b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]});
        s += gap * gap;
    }
    return std::sqrt(s);
}

LipschitzFnPtr max_fn(std::size_t n) {
    require_arity(n);
    return std::make_shared<MaxFn>(n);
}

LipschitzFnPtr activation_fn(double m) {
    if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("activation function requires m >= 1");
    return std::make_shared<Activation>(m);
}

LipschitzFnPtr scaled_sum_fn(std::size_t n, double p) {
    require_arity(n);
    if (!(p > 1.0 && p <= 2.0)) throw DomainError("scaled sum requires 1 < p <= 2");
    return std::make_shared<ScaledSum>(n, p);
}

LipschitzFnPtr distance_to_set_fn(std::vector<Box> boxes, double cap) {
    if (boxes.empty()) throw DomainError("distance to set requires a nonempty box list");
    if (!(cap > 0.0)) throw DomainError("distance to set requires cap > 0");
    const std::size_t n = boxes.front().dimension();
    require_arity(n);
    for (const auto& b : boxes) {
        if (b.lo.size() != n || b.hi.size() != n) throw DomainError("boxes must share one dimension");
        for (std::size_t i = 0; i < n; ++i) {
            if (!(b.lo[i] <= b.hi[i])) throw DomainError("box with lo > hi");
        }
    }
    return std::make_shared<DistanceToSet>(std::move(boxes), cap);
}

LipschitzFnPtr l2_norm_fn(std::size_t n) {
    require_arity(n);
    return std::make_shared<L2Norm>(n);
}

LipschitzFnPtr linear_fn(std::vector<double> weights) {
    require_arity(weights.size());
    double s = 0.0;
    for (double w : weights) s += w * w;
    if (!(s <= 1.0 + 1e-12)) throw DomainError("linear function requires |w|_2 <= 1");
    return std::make_shared<Linear>(std::move(weights));
}

LipschitzFnPtr constant_fn(std::size_t n, double c) {
    require_arity(n);
    return std::make_shared<Constant>(n, c);
}

double dp_distance(std::span<const double> x, std::span<const double> y, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), p);
    return std::pow(s, 1.0 / p);
}

std::vector<std::string> function_names() {
    return {"max", "l2_norm", "identity", "activation", "scaled_sum", "linear", "distance", "constant"};
}

LipschitzFnPtr make_function(const std::string& spec, std::size_t n) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::map<std::string, std::string> params;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw DomainError("function parameter '" + kv + "' is not key=value");
            params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    auto scalar = [&](const std::string& key, double fallback) {
        const auto it = params.find(key);
        if (it == params.end()) return fallback;
        const auto v = parse_list(it->second);
        if (v.size() != 1) throw DomainError("function parameter '" + key + "' must be a single number");
        return v[0];
    };
    auto require_one = [&] {
        if (n != 1) throw DomainError("function '" + name + "' is one-dimensional; dimension must be 1");
    };

    if (name == "max") return max_fn(n);
    if (name == "l2_norm") return l2_norm_fn(n);
    if (name == "identity") {
        std::vector<double> w(n, 0.0);
        w.at(0) = 1.0;
        return linear_fn(std::move(w));
    }
    if (name == "activation") {
        require_one();
        return activation_fn(scalar("m", 2.0));
    }
    if (name == "scaled_sum") return scaled_sum_fn(n, scalar("p", 2.0));
    if (name == "constant") return constant_fn(n, scalar("c", 0.0));
    if (name == "linear") {
        const auto it = params.find("w");
        if (it == params.end()) throw DomainError("linear function needs w=w1;w2;...");
        auto w = parse_list(it->second);
        if (w.size() != n) throw DomainError("linear weights must have one entry per dimension");
        return linear_fn(std::move(w));
    }
    if (name == "distance") {
        Box b;
        b.lo = params.count("lo") ? parse_list(params["lo"]) : std::vector<double>(n, 0.0);
        b.hi = params.count("hi") ? parse_list(params["hi"]) : std::vector<double>(n, 1.0);
        if (b.lo.size() != n || b.hi.size() != n) throw DomainError("distance box must have one bound per dimension");
        return distance_to_set_fn({b}, scalar("cap", 10.0));
    }
    throw DomainError("unknown function '" + name + "'");
}

}  // namespace htc
