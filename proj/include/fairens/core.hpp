#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairens {

// ---------------------------------------------------------------------------
// errors

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t at)
        : std::runtime_error(msg + " (at byte " + std::to_string(at) + ")"), offset(at) {}
};

// ---------------------------------------------------------------------------
// dense row-major matrix of doubles

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool operator==(const Matrix&) const = default;

    // new matrix holding the given rows, in the given order
    Matrix take_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

template <typename T>
std::vector<T> take(const std::vector<T>& v, std::span<const std::size_t> idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

// ---------------------------------------------------------------------------
// deterministic randomness
//
// All stochastic behavior in the library flows from 64-bit seeds derived by
// fnv1a over a canonical string, and is drawn through Rng below. The raw
// engine is xoshiro-free plain splitmix64 so streams are identical on every
// platform (std:: distributions are implementation-defined and avoided).

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> parts) {
    std::uint64_t h = fnv1a(std::to_string(master));
    for (auto p : parts) {
        h = fnv1a("|", h);
        h = fnv1a(p, h);
    }
    return h;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::size_t uniform_int(std::size_t n) {
        return n == 0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
    }

    double normal() {
        // Box-Muller; one value per call keeps the stream position obvious
        double u1 = std::max(uniform(), 1e-300);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_int(i)]);
    }

    // k indices drawn with replacement, probability proportional to weights
    // (uniform when weights is empty)
    std::vector<std::size_t> sample_with_replacement(std::size_t n, std::size_t k,
                                                     std::span<const double> weights = {}) {
        std::vector<std::size_t> out(k);
        if (weights.empty()) {
            for (auto& o : out) o = uniform_int(n);
            return out;
        }
        std::vector<double> cum(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) cum[i] = (acc += weights[i]);
        for (auto& o : out) {
            double u = uniform() * acc;
            o = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (o >= n) o = n - 1;
        }
        return out;
    }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// number formatting (shortest round-trip, used in canonical pipeline texts)

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// backtracking gradient descent, shared by the logistic-family fitters
//
// Minimizes f over a flat parameter vector. Accepts a step only when it
// decreases the objective (Armijo), halving the step otherwise, so the loss
// trace is monotone over accepted steps by construction.

struct GdResult {
    std::vector<double> x;
    double loss = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // loss after each accepted step
};

struct GdProblem {
    // returns loss, fills grad (same size as x)
    std::function<double(std::span<const double> x, std::span<double> grad)> eval;
};

inline GdResult gradient_descent(const GdProblem& prob, std::vector<double> x0, double step0,
                                 std::size_t max_iters, double grad_tol = 1e-8) {
    GdResult res;
    res.x = std::move(x0);
    std::vector<double> grad(res.x.size(), 0.0);
    std::vector<double> trial(res.x.size(), 0.0);
    std::vector<double> trial_grad(res.x.size(), 0.0);
    res.loss = prob.eval(res.x, grad);
    if (std::isnan(res.loss)) throw DataError("gradient descent: initial loss is NaN");
    double step = step0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        double gnorm2 = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
        if (std::sqrt(gnorm2) < grad_tol) {
            res.converged = true;
            break;
        }
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t j = 0; j < res.x.size(); ++j) trial[j] = res.x[j] - step * grad[j];
            double tl = prob.eval(trial, trial_grad);
            if (std::isnan(tl))
                throw DataError("gradient descent diverged (loss NaN at step " + format_double(step) + ")");
            if (tl <= res.loss - 1e-4 * step * gnorm2) {
                res.x.swap(trial);
                grad.swap(trial_grad);
                res.loss = tl;
                res.trace.push_back(tl);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        res.iterations = it + 1;
        if (!accepted) {
            res.converged = std::sqrt(gnorm2) < 1e-5;
            break;
        }
        step = std::min(step * 2.0, step0 * 16.0);
    }
    return res;
}

// ---------------------------------------------------------------------------
// min-max feature scaling over a column mask (fit on training rows only)

struct MinMaxScaler {
    std::vector<std::size_t> columns;
    std::vector<double> lo, hi;

    static MinMaxScaler fit(const Matrix& X, std::span<const std::size_t> rows,
                            std::span<const std::size_t> cols) {
        MinMaxScaler s;
        s.columns.assign(cols.begin(), cols.end());
        s.lo.assign(cols.size(), 0.0);
        s.hi.assign(cols.size(), 0.0);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (auto r : rows) {
                double v = X.at(r, cols[j]);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            s.lo[j] = lo;
            s.hi[j] = hi;
        }
        return s;
    }

    void apply(Matrix& X) const {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            double range = hi[j] - lo[j];
            for (std::size_t r = 0; r < X.rows(); ++r) {
                double& v = X.at(r, columns[j]);
                v = range > 0.0 ? (v - lo[j]) / range : 0.0;
            }
        }
    }
};

}  // namespace fairens
