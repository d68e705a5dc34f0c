#include "paths.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "specflow/error.hpp"

namespace specflow::cli {

MatrixPath loop_path(int copies) {
  if (copies < 0) throw Error(ErrorKind::InvalidArgument, "loop needs N >= 0");
  MatrixPath p;
  p.matrix = [copies](double r) {
    return UnitaryTC(std::polar(1.0, kTwoPi * r) * Eigen::MatrixXcd::Identity(copies, copies));
  };
  return p;
}

MatrixPath exp_path(const Eigen::MatrixXcd& h, double r_max) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::DimensionMismatch, "H must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorKind::InvalidArgument, "H must be Hermitian");
  if (!(r_max > 0)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");
  MatrixPath p;
  p.b = r_max;
  p.matrix = [h](double r) { return UnitaryTC(expi_hermitian(h, r)); };
  return p;
}

namespace {

// −i log W for unitary W, via the Schur form (diagonal for normal W).
Eigen::MatrixXcd hermitian_log(const Eigen::MatrixXcd& w) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(w);
  const Eigen::MatrixXcd& q = schur.matrixU();
  Eigen::VectorXcd angles = schur.matrixT().diagonal().unaryExpr([](Complex z) { return Complex(std::arg(z), 0.0); });
  return q * angles.asDiagonal() * q.adjoint();
}

}  // namespace

MatrixPath sampled_path(std::vector<double> r, std::vector<Eigen::MatrixXcd> samples) {
  if (r.size() != samples.size() || r.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw Error(ErrorKind::InvalidArgument, "sample r values must increase");
  }
  std::vector<Eigen::MatrixXcd> logs;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (void)UnitaryTC(samples[i]);  // validates shape and unitarity
    if (samples[i].rows() != samples[0].rows()) throw Error(ErrorKind::DimensionMismatch, "samples differ in size");
    if (i > 0) logs.push_back(hermitian_log(samples[i - 1].adjoint() * samples[i]));
  }
  MatrixPath p;
  p.a = r.front();
  p.b = r.back();
  p.seed_grid.assign(r.begin() + 1, r.end() - 1);
  p.matrix = [r, samples, logs](double x) {
    auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t k = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
    if (k + 1 >= r.size()) return UnitaryTC(samples.back());
    const double t = (x - r[k]) / (r[k + 1] - r[k]);
    return UnitaryTC(samples[k] * expi_hermitian(logs[k], t), 1e-9);
  };
  return p;
}

MatrixPath builtin_path(const std::string& name, const Eigen::MatrixXcd* h, double r_max) {
  static const std::regex loop_re(R"(\s*loop(\s+N\s*=\s*(\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(name, m, loop_re)) return loop_path(m[2].matched ? std::stoi(m[2].str()) : 1);
  if (name == "exp(irH)") {
    if (h == nullptr) throw Error(ErrorKind::InvalidArgument, "exp(irH) needs --hamiltonian");
    return exp_path(*h, r_max);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown builtin path '" + name + "'");
}

SpectrumPath spectrum_path(const MatrixPath& m, bool starts_at_identity, double cluster_tol) {
  SpectrumPath p;
  p.a = m.a;
  p.b = m.b;
  p.starts_at_identity = starts_at_identity;
  p.seed_grid = m.seed_grid;
  p.sampler = [f = m.matrix, cluster_tol](double r) { return spec(f(r), cluster_tol); };
  return p;
}

}  // namespace specflow::cli
