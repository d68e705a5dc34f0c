#ifndef SPECFLOW_STEP_FUNCTION_HPP
#define SPECFLOW_STEP_FUNCTION_HPP

#include <numbers>
#include <span>
#include <vector>

namespace specflow {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Integer-valued, left-continuous step function on (0, 2π) with finitely many jumps.
///
/// The value on the first piece (0, first jump] is `base()`. Crossing a jump at
/// angle `at` (from left to right) adds `delta`. Jumps closer than `kMergeTol`
/// are merged and zero jumps are dropped, so equal functions have equal
/// representations.
class StepFunction {
 public:
  static constexpr double kMergeTol = 1e-12;

  struct Jump {
    double at;
    int delta;
  };

  struct Piece {
    double from;
    double to;
    int value;
  };

  StepFunction() = default;
  explicit StepFunction(int base, std::vector<Jump> jumps = {});

  int base() const noexcept { return base_; }
  std::span<const Jump> jumps() const noexcept { return jumps_; }

  int left_limit(double theta) const;
  int right_limit(double theta) const;
  /// Left-continuous value.
  int operator()(double theta) const { return left_limit(theta); }
  /// Sum of the one-sided limits; the mean value is half of it.
  int twice_mean(double theta) const { return left_limit(theta) + right_limit(theta); }
  double mean(double theta) const { return 0.5 * twice_mean(theta); }

  std::vector<Piece> pieces() const;
  double integral() const;
  bool is_constant() const noexcept { return jumps_.empty(); }
  int min_value() const;
  int max_value() const;

  /// Equality in the quotient by constant integers.
  bool equiv_mod_const(const StepFunction& other) const;

  StepFunction operator-() const;
  StepFunction& operator+=(const StepFunction& other);
  StepFunction& operator-=(const StepFunction& other);
  StepFunction& operator+=(int shift) {
    base_ += shift;
    return *this;
  }

  friend StepFunction operator+(StepFunction a, const StepFunction& b) { return a += b; }
  friend StepFunction operator-(StepFunction a, const StepFunction& b) { return a -= b; }
  friend StepFunction operator+(StepFunction a, int shift) { return a += shift; }
  friend bool operator==(const StepFunction& a, const StepFunction& b);

 private:
  void normalize();

  int base_ = 0;
  std::vector<Jump> jumps_;
};

/// ρ₁(f, g) = min over integers n of ∫₀^{2π} |f − g + n| dθ.
double rho1(const StepFunction& f, const StepFunction& g);

/// Integer n attaining the minimum in `rho1`.
int rho1_shift(const StepFunction& f, const StepFunction& g);

}  // namespace specflow

#endif  // SPECFLOW_STEP_FUNCTION_HPP
