#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace macwt {

struct Axis {
    std::string name;
    std::size_t size = 0;
};

using AxisList = std::vector<std::string>;

// Dense probability tensor over named finite axes, stored row-major (last axis
// fastest). Construction validates nonnegativity, normalization within 1e-10
// and uniqueness of axis names.
class JointPmf {
public:
    JointPmf(std::vector<Axis> axes, std::vector<double> mass);

    const std::vector<Axis>& axes() const noexcept { return axes_; }
    const std::vector<double>& mass() const noexcept { return mass_; }
    std::size_t rank() const noexcept { return axes_.size(); }
    std::size_t axis_index(const std::string& name) const;
    std::size_t axis_size(const std::string& name) const { return axes_[axis_index(name)].size; }

    // Marginal on the listed axes, laid out row-major in the listed order.
    // Cells are visited in storage order, so the floating-point summation order
    // is fixed and results are reproducible bit for bit.
    std::vector<double> marginal(const AxisList& keep) const;

    static constexpr double kNormTolerance = 1e-10;

private:
    std::vector<Axis> axes_;
    std::vector<double> mass_;
};

// Entropy in bits of a probability vector; 0 log 0 = 0.
double entropy_of(std::span<const double> probs);

double entropy(const JointPmf& p, const AxisList& axes);

// I(A;B) = H(A) + H(B) - H(A,B), clamped into [0, min(H(A), H(B))] only when the
// overshoot is below 1e-9.
double mutual_information(const JointPmf& p, const AxisList& a, const AxisList& b);

// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), equal to sum_c p(c) I(A;B|C=c).
double conditional_mutual_information(const JointPmf& p, const AxisList& a, const AxisList& b,
                                      const AxisList& c);

inline constexpr double kClampTolerance = 1e-9;

}  // namespace macwt
