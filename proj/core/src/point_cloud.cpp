#include "milnorkit/point_cloud.hpp"

#include <bit>
#include <cstring>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

#include "milnorkit/error.hpp"

namespace milnorkit {

Radii Radii::from_epsilon(double epsilon) {
  Radii r;
  r.epsilon = epsilon;
  r.eta = epsilon / 20.0;
  r.tau = r.eta / 10.0;
  return r;
}

void Radii::validate() const {
  if (!(epsilon > 0.0 && eta > 0.0 && tau > 0.0))
    throw Error(Errc::precondition, "radii must be positive");
  if (eta > epsilon / 10.0 * (1.0 + 1e-12))
    throw Error(Errc::precondition, "radii must satisfy eta <= epsilon/10");
  if (tau > eta / 10.0 * (1.0 + 1e-12))
    throw Error(Errc::precondition, "radii must satisfy tau <= eta/10");
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::fiber: return "fiber";
    case TargetKind::boundary: return "boundary";
    case TargetKind::link: return "link";
    case TargetKind::page: return "page";
  }
  return "fiber";
}

TargetKind parse_target_kind(const std::string& s) {
  if (s == "fiber") return TargetKind::fiber;
  if (s == "boundary") return TargetKind::boundary;
  if (s == "link") return TargetKind::link;
  if (s == "page") return TargetKind::page;
  throw Error(Errc::precondition, "unknown target kind '" + s + "'");
}

PointCloud PointCloud::subset(std::span<const std::size_t> rows) const {
  PointCloud out = *this;
  out.coords.clear();
  out.coords.reserve(rows.size() * dim);
  out.near_singular.clear();
  out.multiplicity.clear();
  for (std::size_t r : rows) {
    out.push_back(point(r));
    if (!multiplicity.empty()) out.multiplicity.push_back(multiplicity[r]);
  }
  return out;
}

PointCloud make_cloud(std::size_t dim, std::vector<double> coords) {
  if (dim == 0 || coords.size() % dim != 0)
    throw Error(Errc::dimension, "coordinate count is not a multiple of the dimension");
  PointCloud c;
  c.dim = dim;
  c.coords = std::move(coords);
  return c;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "point cloud binary I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw Error(Errc::io, "truncated point cloud file");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_point_cloud_binary(std::ostream& out, const PointCloud& cloud) {
  out.write("MKPC", 4);
  put<std::uint32_t>(out, kPointCloudFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.dim));
  put<std::uint64_t>(out, cloud.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.kind));
  put<std::int32_t>(out, cloud.stage);
  put<std::uint64_t>(out, cloud.seed);
  put<double>(out, cloud.radii.epsilon);
  put<double>(out, cloud.radii.eta);
  put<double>(out, cloud.radii.tau);
  put<double>(out, cloud.residual_equations);
  put<double>(out, cloud.residual_sphere);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.regular_value.size()));
  for (double v : cloud.regular_value) put<double>(out, v);
  for (double v : cloud.coords) put<double>(out, v);
  if (!out) throw Error(Errc::io, "failed writing point cloud");
}

PointCloud read_point_cloud_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "MKPC", 4) != 0)
    throw Error(Errc::io, "not a point cloud file (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kPointCloudFormatVersion)
    throw Error(Errc::io, "unsupported point cloud version " + std::to_string(version));
  PointCloud c;
  c.dim = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  const auto kind = get<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(TargetKind::page))
    throw Error(Errc::io, "invalid target kind in point cloud header");
  c.kind = static_cast<TargetKind>(kind);
  c.stage = get<std::int32_t>(in);
  c.seed = get<std::uint64_t>(in);
  c.radii.epsilon = get<double>(in);
  c.radii.eta = get<double>(in);
  c.radii.tau = get<double>(in);
  c.residual_equations = get<double>(in);
  c.residual_sphere = get<double>(in);
  const auto ylen = get<std::uint32_t>(in);
  c.regular_value.resize(ylen);
  for (auto& v : c.regular_value) v = get<double>(in);
  c.coords.resize(count * c.dim);
  for (auto& v : c.coords) v = get<double>(in);
  return c;
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# format=milnorkit.point_cloud.csv/" << kPointCloudFormatVersion << "\n";
  out << "# kind=" << to_string(cloud.kind) << "\n";
  out << "# stage=" << cloud.stage << "\n";
  out << "# seed=" << cloud.seed << "\n";
  out << "# epsilon=" << cloud.radii.epsilon << "\n";
  out << "# eta=" << cloud.radii.eta << "\n";
  out << "# tau=" << cloud.radii.tau << "\n";
  out << "# regular_value=";
  for (std::size_t i = 0; i < cloud.regular_value.size(); ++i)
    out << (i ? ";" : "") << cloud.regular_value[i];
  out << "\n";
  out << "# residual_equations=" << cloud.residual_equations << "\n";
  out << "# residual_sphere=" << cloud.residual_sphere << "\n";
  for (std::size_t j = 0; j < cloud.dim; ++j) out << (j ? "," : "") << "x" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < cloud.dim; ++j) out << (j ? "," : "") << p[j];
    out << "\n";
  }
}

}  // namespace milnorkit
