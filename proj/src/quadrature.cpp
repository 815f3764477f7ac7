#include "fagg/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "fagg/errors.hpp"

namespace fagg {
namespace {

// QUADPACK qk21 abscissae and weights on [-1, 1]; odd entries of kNodes are
// the 10-point Gauss-Legendre nodes.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
    }
    return y;
}

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = checked(f, center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kNodes[j];
        const double pair = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("quadrature tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) {
        throw DomainError("quadrature needs at least one subdivision");
    }
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw DomainError("integration bounds must be finite with a < b");
    }

    std::priority_queue<Segment> heap;
    const Segment first = gauss_kronrod(f, a, b);
    heap.push(first);
    double total = first.value;
    double total_err = first.error;
    std::size_t segments = 1;

    auto converged = [&] {
        return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    };

    while (!converged()) {
        if (segments >= spec.max_subdivisions) {
            throw ConvergenceError("quadrature did not converge within " +
                                       std::to_string(spec.max_subdivisions) +
                                       " subdivisions",
                                   total_err);
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            throw ConvergenceError("quadrature interval cannot be bisected further", total_err);
        }
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }

    // Re-sum from the heap to shed the drift of the running updates.
    std::vector<Segment> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    double value = 0.0;
    double err = 0.0;
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
        value += it->value;
        err += it->error;
    }
    return {value, err, segments};
}

}  // namespace fagg
