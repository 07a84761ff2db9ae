#include "carnot/group.hpp"

#include <cmath>
#include <map>

#include "carnot/rng.hpp"

namespace carnot {

namespace {

int recompute_q(const std::vector<int>& layer_dims) {
  int q = 0;
  for (std::size_t j = 0; j < layer_dims.size(); ++j)
    q += static_cast<int>(j + 1) * layer_dims[j];
  return q;
}

void check_skew(const Mat& j, const std::string& name) {
  if (j.rows() != j.cols())
    throw InvalidArgument(name + ": J matrix must be square");
  const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
  if ((j + j.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument(name + ": J matrix is not skew-symmetric");
}

// (sum z_l J_l)^2 must equal -lambda^2 * Id for a single lambda > 0,
// uniformly over unit center vectors. Returns lambda.
double check_clifford(const std::vector<Mat>& jmaps, const std::string& name) {
  const int m = static_cast<int>(jmaps[0].rows());
  const int k = static_cast<int>(jmaps.size());
  rng::CounterRng rg(0x487479706543686bull);
  double lambda2 = -1.0;
  for (int trial = 0; trial < 32; ++trial) {
    Vec z(k);
    for (int l = 0; l < k; ++l) z[l] = 2.0 * rg.uniform(trial, l) - 1.0;
    if (z.norm() < 1e-3) z[0] += 1.0;
    z /= z.norm();
    Mat jz = Mat::Zero(m, m);
    for (int l = 0; l < k; ++l) jz += z[l] * jmaps[l];
    Mat sq = jz * jz;
    const double cand = -sq(0, 0);
    if (cand <= 0.0)
      throw InvalidArgument(name + ": H-type condition fails (J_z^2 not negative definite)");
    if (lambda2 < 0.0) lambda2 = cand;
    Mat resid = sq + lambda2 * Mat::Identity(m, m);
    if (resid.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, lambda2))
      throw InvalidArgument(name + ": H-type condition fails (J_z^2 != -lambda^2 Id)");
  }
  return std::sqrt(lambda2);
}

GroupSpec finish_step_two(GroupSpec spec) {
  spec.step = 2;
  const int m = static_cast<int>(spec.jmaps[0].rows());
  const int k = static_cast<int>(spec.jmaps.size());
  spec.layer_dims = {m, k};
  spec.hom_dimension = recompute_q(spec.layer_dims);
  for (const auto& j : spec.jmaps) {
    if (j.rows() != m) throw InvalidArgument(spec.name + ": J matrices differ in size");
    check_skew(j, spec.name);
  }
  return spec;
}

std::vector<Mat> quaternion_jmaps() {
  // Left multiplication by i, j, k on the basis (1, i, j, k) of R^4.
  Mat ji(4, 4), jj(4, 4), jk(4, 4);
  ji << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  jj << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
  jk << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  return {ji, jj, jk};
}

}  // namespace

GroupSpec make_heisenberg(int n) {
  if (n < 1) throw InvalidArgument("heisenberg: n must be >= 1");
  GroupSpec spec;
  spec.name = "heis" + std::to_string(n);
  spec.kind = GroupKind::Heisenberg;
  spec.heis_n = n;
  Mat j = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 2.0;
    j(n + i, i) = -2.0;
  }
  spec.jmaps = {j};
  spec = finish_step_two(std::move(spec));
  spec.clifford_scale = 2.0;
  if (spec.hom_dimension != 2 * n + 2)
    throw InvalidArgument("heisenberg: homogeneous dimension mismatch");
  return spec;
}

GroupSpec make_htype(std::string name, std::vector<Mat> jmaps) {
  if (jmaps.empty()) throw InvalidArgument("htype: needs at least one J matrix");
  GroupSpec spec;
  spec.name = std::move(name);
  spec.kind = GroupKind::HType;
  spec.jmaps = std::move(jmaps);
  spec = finish_step_two(std::move(spec));
  spec.clifford_scale = check_clifford(spec.jmaps, spec.name);
  return spec;
}

GroupSpec make_euclidean(int n) {
  if (n < 1) throw InvalidArgument("euclidean: n must be >= 1");
  GroupSpec spec;
  spec.name = "euclid" + std::to_string(n);
  spec.kind = GroupKind::Euclidean;
  spec.step = 1;
  spec.layer_dims = {n};
  spec.hom_dimension = recompute_q(spec.layer_dims);
  return spec;
}

GroupSpec make_step_two(std::string name, std::vector<Mat> structure_constants) {
  if (structure_constants.empty())
    throw InvalidArgument("step_two: needs structure constants");
  GroupSpec spec;
  spec.name = std::move(name);
  spec.kind = GroupKind::StepTwoGeneric;
  spec.bracket = structure_constants;
  for (auto& b : structure_constants) check_skew(b, spec.name);
  spec.jmaps.reserve(structure_constants.size());
  for (auto& b : structure_constants) spec.jmaps.push_back(-0.5 * b);
  return finish_step_two(std::move(spec));
}

const GroupSpec& builtin_group(const std::string& name) {
  static const std::map<std::string, GroupSpec> catalog = [] {
    std::map<std::string, GroupSpec> c;
    c.emplace("heis1", make_heisenberg(1));
    c.emplace("heis2", make_heisenberg(2));
    c.emplace("quaternionic", make_htype("quaternionic", quaternion_jmaps()));
    c.emplace("euclid3", make_euclidean(3));
    c.emplace("euclid5", make_euclidean(5));
    return c;
  }();
  auto it = catalog.find(name);
  if (it == catalog.end())
    throw InvalidArgument("unknown builtin group '" + name + "'");
  return it->second;
}

std::vector<std::string> builtin_group_names() {
  return {"heis1", "heis2", "quaternionic", "euclid3", "euclid5"};
}

void check_point(const GroupSpec& spec, const Point& g) {
  if (g.dim() != spec.dim())
    throw DimensionMismatch(spec.name + ": point has dimension " +
                            std::to_string(g.dim()) + ", expected " +
                            std::to_string(spec.dim()));
}

Point identity(const GroupSpec& spec) { return Point::zero(spec.dim()); }

Point multiply(const GroupSpec& spec, const Point& g, const Point& h) {
  check_point(spec, g);
  check_point(spec, h);
  std::span<const double> gs(g.coords.data(), g.coords.size());
  std::span<const double> hs(h.coords.data(), h.coords.size());
  auto out = multiply_t<double>(spec, gs, hs);
  return Point(Eigen::Map<const Vec>(out.data(), static_cast<long>(out.size())));
}

Point inverse(const GroupSpec& spec, const Point& g) {
  check_point(spec, g);
  return Point(-g.coords);  // exponential coordinates, step <= 2
}

Point dilate(const GroupSpec& spec, double lambda, const Point& g) {
  if (!(lambda > 0.0)) throw InvalidArgument("dilate: lambda must be positive");
  check_point(spec, g);
  std::span<const double> gs(g.coords.data(), g.coords.size());
  auto out = dilate_t<double>(spec, lambda, gs);
  return Point(Eigen::Map<const Vec>(out.data(), static_cast<long>(out.size())));
}

std::vector<Vec> frame_coefficients(const GroupSpec& spec, const Point& g) {
  check_point(spec, g);
  std::span<const double> gs(g.coords.data(), g.coords.size());
  auto rows = frame_coefficients_t<double>(spec, gs);
  std::vector<Vec> out;
  out.reserve(rows.size());
  for (auto& r : rows)
    out.push_back(Eigen::Map<const Vec>(r.data(), static_cast<long>(r.size())));
  return out;
}

}  // namespace carnot
