#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wilsonline {

using Complex = std::complex<double>;

inline constexpr int kMaxRepDim = 8;

// Representation matrices. Storage is inline up to kMaxRepDim so the
// per-sample holonomy loops never touch the heap.
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0,
                             kMaxRepDim, kMaxRepDim>;

// Operators on the tensor square C^n (x) C^n (up to 64 x 64).
using TensorMatrix = Eigen::MatrixXcd;

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Malformed input: bad files, inconsistent sizes, violated preconditions
// on user data.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical identity that must hold by construction did not.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wilsonline
