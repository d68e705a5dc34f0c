// Matrix paths accepted by `specflow track` and `specflow mu`.
#ifndef SPECFLOW_TOOLS_PATHS_HPP
#define SPECFLOW_TOOLS_PATHS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specflow/lift.hpp"
#include "specflow/unispec.hpp"

namespace specflow::cli {

struct MatrixPath {
  double a = 0.0;
  double b = 1.0;
  std::function<UnitaryTC(double)> matrix;
  std::vector<double> seed_grid;
};

/// U(r) = e^{2πir} on an N-dimensional identity block, r ∈ [0, 1].
MatrixPath loop_path(int copies);

/// U(r) = e^{irH}, r ∈ [0, r_max].
MatrixPath exp_path(const Eigen::MatrixXcd& h, double r_max);

/// Geodesic interpolation U_k exp(t log(U_k* U_{k+1})) between samples at
/// increasing r_k, with the principal logarithm.
MatrixPath sampled_path(std::vector<double> r, std::vector<Eigen::MatrixXcd> samples);

/// Parses "loop", "loop N=3", "exp(irH)"; `h` is required for the latter.
MatrixPath builtin_path(const std::string& name, const Eigen::MatrixXcd* h, double r_max);

SpectrumPath spectrum_path(const MatrixPath& m, bool starts_at_identity, double cluster_tol);

}  // namespace specflow::cli

#endif  // SPECFLOW_TOOLS_PATHS_HPP
