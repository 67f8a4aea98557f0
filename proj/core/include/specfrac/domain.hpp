#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace specfrac {

enum class BoundaryKind { Neumann, Periodic };

// Axis-aligned box (0, l_1) x ... x (0, l_N), N <= 3.
struct BoxDomain {
    int dim = 1;
    std::array<double, 3> lengths{1.0, 0.0, 0.0};
    BoundaryKind boundary = BoundaryKind::Neumann;

    BoxDomain() = default;

    BoxDomain(std::span<const double> ls, BoundaryKind b) : boundary(b) {
        if (ls.empty() || ls.size() > 3)
            throw std::invalid_argument("BoxDomain: dimension must be 1, 2 or 3");
        dim = static_cast<int>(ls.size());
        for (int i = 0; i < dim; ++i) {
            if (!(ls[i] > 0.0))
                throw std::invalid_argument("BoxDomain: side lengths must be positive");
            lengths[static_cast<std::size_t>(i)] = ls[i];
        }
    }

    BoxDomain(std::initializer_list<double> ls, BoundaryKind b)
        : BoxDomain(std::span<const double>(ls.begin(), ls.size()), b) {}

    BoxDomain(const std::vector<double>& ls, BoundaryKind b)
        : BoxDomain(std::span<const double>(ls.data(), ls.size()), b) {}

    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim; ++i) v *= lengths[static_cast<std::size_t>(i)];
        return v;
    }

    // Closure membership: boundary points count as inside.
    bool contains(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim) return false;
        for (int i = 0; i < dim; ++i)
            if (x[i] < 0.0 || x[i] > lengths[static_cast<std::size_t>(i)]) return false;
        return true;
    }
};

} // namespace specfrac
