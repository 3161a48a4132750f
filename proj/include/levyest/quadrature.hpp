#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levyest {

// Composite Simpson rule over an odd number of equally spaced nodes.
template <typename T>
T simpson(const std::vector<T>& f, double step) {
    if (f.size() < 3 || f.size() % 2 == 0)
        throw std::invalid_argument("simpson: need an odd node count >= 3");
    T acc = f.front() + f.back();
    for (std::size_t k = 1; k + 1 < f.size(); ++k)
        acc += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    return (step / 3.0) * acc;
}

// Same rule using every other node (half resolution). Node count must be of
// the form 4m+1 so the strided grid is itself Simpson-compatible.
template <typename T>
T simpson_half(const std::vector<T>& f, double step) {
    if (f.size() < 5 || (f.size() - 1) % 4 != 0)
        throw std::invalid_argument("simpson_half: need 4m+1 nodes");
    T acc = f.front() + f.back();
    for (std::size_t k = 2; k + 2 < f.size(); k += 2)
        acc += (k % 4 == 2 ? 4.0 : 2.0) * f[k];
    return (2.0 * step / 3.0) * acc;
}

template <typename F>
double simpson_fn(F&& fn, double a, double b, std::size_t nodes) {
    if (nodes < 3 || nodes % 2 == 0)
        throw std::invalid_argument("simpson_fn: need an odd node count >= 3");
    const double step = (b - a) / static_cast<double>(nodes - 1);
    double acc = fn(a) + fn(b);
    for (std::size_t k = 1; k + 1 < nodes; ++k)
        acc += (k % 2 == 1 ? 4.0 : 2.0) * fn(a + step * static_cast<double>(k));
    return (step / 3.0) * acc;
}

// Trapezoid rule over equally spaced nodes.
inline double trapezoid(const std::vector<double>& f, double step) {
    if (f.size() < 2) throw std::invalid_argument("trapezoid: need >= 2 nodes");
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) acc += f[k];
    return step * acc;
}

}  // namespace levyest
