#include "milnorkit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <unordered_map>

#include "milnorkit/error.hpp"
#include "milnorkit/linalg.hpp"

namespace milnorkit {

namespace {

std::size_t page_rows(const NewtonSystem& s) { return s.page_normals.size(); }

std::size_t system_rows(const NewtonSystem& s) {
  return s.stage + (s.on_sphere ? 1 : 0) + page_rows(s);
}

void residual_and_jacobian(const NewtonSystem& s, std::span<const double> x, Eigen::VectorXd& r,
                           Eigen::MatrixXd* jac) {
  const std::size_t m = x.size();
  const std::size_t k = s.germ->target_dim();
  const Eigen::VectorXd fx = s.germ->evaluate(x);
  const std::size_t rows = system_rows(s);
  r.resize(static_cast<Eigen::Index>(rows));
  Eigen::MatrixXd df;
  if (jac) {
    df = s.germ->jacobian(x);
    jac->resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
  }
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < s.stage; ++i, ++row) {
    r(row) = fx(static_cast<Eigen::Index>(i)) - s.target[i];
    if (jac) jac->row(row) = df.row(static_cast<Eigen::Index>(i));
  }
  if (s.on_sphere) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    r(row) = (n2 - s.epsilon * s.epsilon) / (2.0 * s.epsilon);
    if (jac)
      for (std::size_t j = 0; j < m; ++j) (*jac)(row, static_cast<Eigen::Index>(j)) = x[j] / s.epsilon;
    ++row;
  }
  for (const auto& normal : s.page_normals) {
    double v = 0.0;
    for (std::size_t t = 0; t < normal.size(); ++t)
      v += normal[t] * fx(static_cast<Eigen::Index>(s.stage + t));
    r(row) = v;
    if (jac) {
      jac->row(row).setZero();
      for (std::size_t t = 0; t < normal.size(); ++t)
        jac->row(row) += normal[t] * df.row(static_cast<Eigen::Index>(s.stage + t));
    }
    ++row;
  }
  (void)k;
}

double max_abs(const Eigen::VectorXd& r) { return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff(); }

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Hash grid for near-duplicate rejection. Cells are 4x the radius, so a
/// point needs to look into a neighbouring cell only along coordinates where
/// it sits within one radius of a cell wall.
class Deduper {
 public:
  Deduper(std::size_t dim, double radius) : dim_(dim), radius_(radius), cell_(4.0 * radius) {}

  /// Inserts p unless a stored point is within the radius; either way
  /// returns the index of the point that represents p.
  std::size_t insert(std::span<const double> p) {
    if (radius_ <= 0.0) {
      points_.insert(points_.end(), p.begin(), p.end());
      return points_.size() / dim_ - 1;
    }
    std::vector<std::int64_t> base(dim_);
    std::vector<int> side(dim_, 0);
    for (std::size_t t = 0; t < dim_; ++t) {
      const double q = p[t] / cell_;
      base[t] = static_cast<std::int64_t>(std::floor(q));
      const double frac = (q - std::floor(q)) * cell_;
      if (frac < radius_) side[t] = -1;
      else if (cell_ - frac < radius_) side[t] = 1;
    }
    // Enumerate the 2^(#near walls) neighbouring cells.
    std::vector<std::size_t> near;
    for (std::size_t t = 0; t < dim_; ++t)
      if (side[t] != 0) near.push_back(t);
    const std::size_t combos = std::size_t{1} << near.size();
    std::vector<std::int64_t> key(dim_);
    for (std::size_t mask = 0; mask < combos; ++mask) {
      key = base;
      for (std::size_t b = 0; b < near.size(); ++b)
        if (mask & (std::size_t{1} << b)) key[near[b]] += side[near[b]];
      const auto it = grid_.find(hash(key));
      if (it == grid_.end()) continue;
      for (std::size_t idx : it->second) {
        double d2 = 0.0;
        for (std::size_t t = 0; t < dim_; ++t) {
          const double d = points_[idx * dim_ + t] - p[t];
          d2 += d * d;
        }
        if (d2 < radius_ * radius_) return idx;
      }
    }
    const std::size_t idx = points_.size() / dim_;
    points_.insert(points_.end(), p.begin(), p.end());
    grid_[hash(base)].push_back(idx);
    return idx;
  }

  std::vector<double> take() { return std::move(points_); }

 private:
  static std::uint64_t hash(const std::vector<std::int64_t>& key) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return h;
  }

  std::size_t dim_;
  double radius_;
  double cell_;
  std::vector<double> points_;
  // Hash collisions only cost extra distance checks.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

std::mt19937_64 block_stream(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

void uniform_in_ball(std::mt19937_64& rng, double radius, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double n = 0.0;
  do {
    n = 0.0;
    for (double& v : out) {
      v = gauss(rng);
      n += v * v;
    }
  } while (n == 0.0);
  n = std::sqrt(n);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(out.size()));
  for (double& v : out) v *= r / n;
}

struct RunStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

using Accept = std::function<bool(std::span<const double>)>;

/// Proposal loop shared by all samplers. Blocks are generated independently
/// and merged in block order, so the result does not depend on opts.threads.
std::vector<double> run_proposals(const NewtonSystem& system, const Radii& radii, std::size_t n,
                                  std::uint64_t seed, const SamplerOptions& opts,
                                  const Accept& accept, RunStats& stats) {
  const std::size_t m = system.germ->source_dim();
  const std::uint64_t budget =
      opts.max_proposals ? opts.max_proposals
                         : std::max<std::uint64_t>(1000, 50 * static_cast<std::uint64_t>(n));
  const std::size_t block = std::max<std::size_t>(1, opts.block_size);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<double> accepted;

  const auto run_block = [&](std::uint64_t b, std::uint64_t count, std::vector<double>& out) {
    auto rng = block_stream(seed, b);
    std::vector<double> x(m);
    for (std::uint64_t p = 0; p < count; ++p) {
      uniform_in_ball(rng, radii.epsilon, x);
      if (newton_project(system, x, opts) && accept(x)) out.insert(out.end(), x.begin(), x.end());
    }
  };

  std::uint64_t next_block = 0;
  while (stats.accepted < n && stats.proposals < budget) {
    const std::uint64_t blocks_left = (budget - stats.proposals + block - 1) / block;
    const unsigned batch = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks_left));
    std::vector<std::vector<double>> results(batch);
    std::vector<std::uint64_t> counts(batch);
    for (unsigned t = 0; t < batch; ++t) {
      const std::uint64_t start = stats.proposals + t * block;
      counts[t] = std::min<std::uint64_t>(block, budget > start ? budget - start : 0);
    }
    if (batch == 1) {
      run_block(next_block, counts[0], results[0]);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < batch; ++t)
        pool.emplace_back([&, t] { run_block(next_block + t, counts[t], results[t]); });
      for (auto& th : pool) th.join();
    }
    for (unsigned t = 0; t < batch && stats.accepted < n; ++t) {
      stats.proposals += counts[t];
      const std::size_t got = results[t].size() / m;
      const std::size_t take = static_cast<std::size_t>(
          std::min<std::uint64_t>(got, n - stats.accepted));
      accepted.insert(accepted.end(), results[t].begin(),
                      results[t].begin() + static_cast<std::ptrdiff_t>(take * m));
      stats.accepted += take;
    }
    next_block += batch;
  }
  return accepted;
}

PointCloud finish_cloud(const NewtonSystem& system, std::vector<double> raw, TargetKind kind,
                        const Radii& radii, std::uint64_t seed, const RunStats& stats,
                        const SamplerOptions& opts) {
  const std::size_t m = system.germ->source_dim();
  Deduper dedup(m, opts.dedup_factor * radii.epsilon);
  std::vector<std::uint32_t> mult;
  for (std::size_t i = 0; i * m < raw.size(); ++i) {
    const std::size_t idx = dedup.insert({raw.data() + i * m, m});
    if (idx == mult.size()) mult.push_back(0);
    ++mult[idx];
  }
  PointCloud cloud;
  cloud.dim = m;
  cloud.coords = dedup.take();
  cloud.multiplicity = std::move(mult);
  cloud.kind = kind;
  cloud.stage = static_cast<int>(system.stage);
  cloud.regular_value = system.target;
  cloud.radii = radii;
  cloud.seed = seed;
  cloud.proposals = stats.proposals;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    cloud.residual_equations = std::max(cloud.residual_equations, system_residual(system, p));
    if (system.on_sphere)
      cloud.residual_sphere = std::max(cloud.residual_sphere, std::abs(norm_of(p) - radii.epsilon));
  }
  return cloud;
}

void check_rates(const RunStats& stats, const SamplerOptions& opts, const std::string& what) {
  if (stats.accepted == 0)
    throw Error(Errc::empty_fiber, what + ": no point converged in " +
                                       std::to_string(stats.proposals) + " proposals");
  const double rate = static_cast<double>(stats.accepted) / static_cast<double>(stats.proposals);
  if (rate < opts.min_acceptance)
    throw Error(Errc::acceptance_rate_too_low,
                what + ": acceptance rate " + std::to_string(rate) + " below " +
                    std::to_string(opts.min_acceptance));
}

void check_stage(const MapGerm& f, std::size_t stage) {
  if (stage < 1 || stage > f.target_dim())
    throw Error(Errc::range, "stage I=" + std::to_string(stage) + " outside 1.." +
                                 std::to_string(f.target_dim()));
}

void check_value(std::size_t stage, std::span<const double> y, const Radii& radii) {
  if (y.size() != stage)
    throw Error(Errc::dimension, "regular value must have " + std::to_string(stage) + " entries");
  const double ny = norm_of(y);
  if (ny == 0.0) throw Error(Errc::precondition, "regular value y = 0 is the critical value");
  if (std::abs(ny - radii.eta) > 1e-9 * std::max(1.0, radii.eta))
    throw Error(Errc::precondition, "regular value must satisfy |y| = eta");
}

NewtonSystem sphere_system(const MapGerm& f, std::size_t stage, std::vector<double> target,
                           const Radii& radii) {
  NewtonSystem sys;
  sys.germ = &f;
  sys.stage = stage;
  sys.target = std::move(target);
  sys.on_sphere = true;
  sys.epsilon = radii.epsilon;
  return sys;
}

}  // namespace

double system_residual(const NewtonSystem& system, std::span<const double> x) {
  Eigen::VectorXd r;
  residual_and_jacobian(system, x, r, nullptr);
  return max_abs(r);
}

bool newton_project(const NewtonSystem& system, std::span<double> x, const SamplerOptions& opts,
                    double* residual) {
  Eigen::VectorXd r;
  Eigen::VectorXd r_try;
  Eigen::MatrixXd jac;
  std::vector<double> trial(x.size());
  residual_and_jacobian(system, x, r, &jac);
  double merit = r.squaredNorm();
  bool ok = false;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    if (!std::isfinite(merit)) break;
    if (max_abs(r) < opts.tol_newton) {
      ok = true;
      break;
    }
    if (it == opts.max_iterations) break;
    const Eigen::VectorXd step = min_norm_solve(jac, -r);
    if (!step.allFinite() || step.squaredNorm() == 0.0) break;
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
      for (std::size_t j = 0; j < x.size(); ++j)
        trial[j] = x[j] + t * step(static_cast<Eigen::Index>(j));
      residual_and_jacobian(system, trial, r_try, nullptr);
      const double m_try = r_try.squaredNorm();
      if (std::isfinite(m_try) && m_try <= (1.0 - 1e-4 * t) * merit) {
        std::copy(trial.begin(), trial.end(), x.begin());
        moved = true;
        break;
      }
    }
    if (!moved) break;
    residual_and_jacobian(system, x, r, &jac);
    merit = r.squaredNorm();
  }
  if (residual) *residual = max_abs(r);
  return ok;
}

std::vector<double> default_regular_value(std::size_t stage, double eta) {
  std::vector<double> y(stage, 0.0);
  if (stage > 0) y[0] = eta;
  return y;
}

PointCloud sample_fiber(const MapGerm& f, std::size_t stage, std::span<const double> y,
                        const Radii& radii, std::size_t n, std::uint64_t seed,
                        const SamplerOptions& opts) {
  check_stage(f, stage);
  radii.validate();
  check_value(stage, y, radii);
  NewtonSystem sys;
  sys.germ = &f;
  sys.stage = stage;
  sys.target.assign(y.begin(), y.end());
  RunStats stats;
  const double eps = radii.epsilon;
  auto raw = run_proposals(sys, radii, n, seed, opts,
                           [eps](std::span<const double> x) { return norm_of(x) <= eps; }, stats);
  if (n > 0) check_rates(stats, opts, "fiber");
  return finish_cloud(sys, std::move(raw), TargetKind::fiber, radii, seed, stats, opts);
}

PointCloud sample_boundary(const MapGerm& f, std::size_t stage, std::span<const double> y,
                           const Radii& radii, std::size_t n, std::uint64_t seed,
                           const SamplerOptions& opts) {
  check_stage(f, stage);
  radii.validate();
  check_value(stage, y, radii);
  NewtonSystem sys = sphere_system(f, stage, {y.begin(), y.end()}, radii);
  RunStats stats;
  auto raw = run_proposals(sys, radii, n, seed, opts,
                           [](std::span<const double>) { return true; }, stats);
  if (n > 0) check_rates(stats, opts, "boundary");
  return finish_cloud(sys, std::move(raw), TargetKind::boundary, radii, seed, stats, opts);
}

PointCloud sample_link(const MapGerm& f, std::size_t stage, const Radii& radii, std::size_t n,
                       std::uint64_t seed, const SamplerOptions& opts) {
  check_stage(f, stage);
  radii.validate();
  NewtonSystem sys = sphere_system(f, stage, std::vector<double>(stage, 0.0), radii);
  RunStats stats;
  auto raw = run_proposals(sys, radii, n, seed, opts,
                           [](std::span<const double>) { return true; }, stats);
  auto cloud = finish_cloud(sys, std::move(raw), TargetKind::link, radii, seed, stats, opts);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::MatrixXd df = f.jacobian(cloud.point(i)).topRows(static_cast<Eigen::Index>(stage));
    if (numerical_rank(df, opts.rank_tol) < stage) cloud.near_singular.push_back(i);
  }
  return cloud;
}

OpenBookSample sample_openbook_page(const MapGerm& f, std::size_t stage,
                                    std::span<const double> theta, const Radii& radii,
                                    std::size_t n, std::uint64_t seed,
                                    const SamplerOptions& opts) {
  check_stage(f, stage);
  radii.validate();
  const std::size_t rest = f.target_dim() - stage;
  if (rest < 1) throw Error(Errc::precondition, "open-book pages need K - I >= 1");
  if (theta.size() != rest)
    throw Error(Errc::dimension, "theta must have K - I = " + std::to_string(rest) + " entries");
  if (std::abs(norm_of(theta) - 1.0) > 1e-9) throw Error(Errc::precondition, "theta must be a unit vector");

  NewtonSystem sys = sphere_system(f, stage, default_regular_value(stage, radii.eta), radii);
  if (rest >= 2) {
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(rest), 1);
    for (std::size_t t = 0; t < rest; ++t) basis(static_cast<Eigen::Index>(t), 0) = theta[t];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd q = qr.householderQ();
    for (Eigen::Index c = 1; c < q.cols(); ++c) {
      std::vector<double> normal(rest);
      for (std::size_t t = 0; t < rest; ++t) normal[t] = q(static_cast<Eigen::Index>(t), c);
      sys.page_normals.push_back(std::move(normal));
    }
  }
  const std::vector<double> dir(theta.begin(), theta.end());
  const auto along = [&f, stage, dir](std::span<const double> x) {
    const Eigen::VectorXd fx = f.evaluate(x);
    double dot = 0.0;
    for (std::size_t t = 0; t < dir.size(); ++t)
      dot += dir[t] * fx(static_cast<Eigen::Index>(stage + t));
    return dot;
  };
  RunStats stats;
  auto raw = run_proposals(sys, radii, n, seed, opts,
                           [&along](std::span<const double> x) { return along(x) > 0.0; }, stats);
  if (n > 0) check_rates(stats, opts, "open-book page");

  OpenBookSample out;
  out.theta = dir;
  out.page = finish_cloud(sys, std::move(raw), TargetKind::page, radii, seed, stats, opts);
  for (std::size_t i = 0; i < out.page.size(); ++i) {
    const Eigen::VectorXd fx = f.evaluate(out.page.point(i));
    const Eigen::VectorXd tail = fx.tail(static_cast<Eigen::Index>(rest));
    const double c = std::clamp(along(out.page.point(i)) / tail.norm(), -1.0, 1.0);
    out.max_angle = std::max(out.max_angle, std::acos(c));
  }
  return out;
}

std::vector<std::vector<double>> page_angles(std::size_t dim, std::size_t count) {
  std::vector<std::vector<double>> out;
  if (dim == 0 || count == 0) return out;
  if (dim == 1) {
    out.push_back({1.0});
    if (count > 1) out.push_back({-1.0});
    return out;
  }
  if (dim == 2) {
    for (std::size_t j = 0; j < count; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  std::mt19937_64 rng(0x5eedu + dim);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (out.size() < count) {
    std::vector<double> v(dim);
    double n = 0.0;
    for (double& c : v) {
      c = gauss(rng);
      n += c * c;
    }
    if (n == 0.0) continue;
    for (double& c : v) c /= std::sqrt(n);
    out.push_back(std::move(v));
  }
  return out;
}

const std::vector<double>& epsilon_ladder() {
  static const std::vector<double> ladder{0.5, 0.25, 0.1, 0.05, 0.025, 0.01};
  return ladder;
}

RadiiChoice choose_radii(const MapGerm& f, std::size_t stage, std::size_t budget,
                         std::uint64_t seed, const SamplerOptions& opts) {
  check_stage(f, stage);
  if (budget < 1000) throw Error(Errc::precondition, "choose_radii needs a budget of >= 1000 probes");
  const std::size_t k = f.target_dim();
  constexpr std::size_t kValues = 8;
  const std::uint64_t per_set = std::max<std::uint64_t>(1, budget / (2 * kValues));

  RadiiChoice choice;
  for (double eps : epsilon_ladder()) {
    const Radii radii = Radii::from_epsilon(eps);
    RadiusProbe probe;
    probe.epsilon = eps;
    probe.min_sv_df_stage_with_g = std::numeric_limits<double>::infinity();
    probe.min_sv_a = std::numeric_limits<double>::infinity();
    probe.min_sv_df_stage = std::numeric_limits<double>::infinity();
    std::size_t boundary_probes = 0;

    SamplerOptions probe_opts = opts;
    probe_opts.max_proposals = per_set;
    probe_opts.min_acceptance = 0.0;
    for (std::size_t j = 0; j < kValues; ++j) {
      std::vector<double> y(stage, 0.0);
      if (stage == 1) {
        y[0] = (j % 2 == 0) ? radii.eta : -radii.eta;
      } else {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / kValues;
        y[0] = radii.eta * std::cos(a);
        y[1] = radii.eta * std::sin(a);
      }
      const std::uint64_t s = seed + 1000 * j;
      PointCloud bd;
      PointCloud fib;
      try {
        bd = sample_boundary(f, stage, y, radii, per_set, s, probe_opts);
      } catch (const Error& e) {
        if (e.code() != Errc::empty_fiber) throw;
      }
      try {
        fib = sample_fiber(f, stage, y, radii, per_set, s + 1, probe_opts);
      } catch (const Error& e) {
        if (e.code() != Errc::empty_fiber) throw;
      }
      for (std::size_t i = 0; i < bd.size(); ++i) {
        const auto x = bd.point(i);
        const Eigen::MatrixXd df = f.jacobian(x);
        const auto g = distance_gradient(x);
        Eigen::MatrixXd dfg(static_cast<Eigen::Index>(stage + 1), df.cols());
        dfg.topRows(static_cast<Eigen::Index>(stage)) = df.topRows(static_cast<Eigen::Index>(stage));
        dfg.row(static_cast<Eigen::Index>(stage)) = g;
        const auto sv = singular_values(dfg);
        probe.min_sv_df_stage_with_g = std::min(probe.min_sv_df_stage_with_g, sv.minCoeff());
        if (numerical_rank(sv, opts.rank_tol) != stage + 1) ++probe.rank_failures;
        const Eigen::VectorXd fx = f.evaluate(x);
        const double tail =
            stage < k ? fx.tail(static_cast<Eigen::Index>(k - stage)).norm() : 0.0;
        if (tail <= radii.eta) {
          ++probe.binding_probes;
          Eigen::MatrixXd a(static_cast<Eigen::Index>(k + 1), df.cols());
          a.topRows(static_cast<Eigen::Index>(k)) = df;
          a.row(static_cast<Eigen::Index>(k)) = g;
          const auto sa = singular_values(a);
          probe.min_sv_a = std::min(probe.min_sv_a, sa.minCoeff());
          if (numerical_rank(sa, opts.rank_tol) != k + 1) ++probe.rank_failures;
        }
      }
      boundary_probes += bd.size();
      for (std::size_t i = 0; i < fib.size(); ++i) {
        const Eigen::MatrixXd df =
            f.jacobian(fib.point(i)).topRows(static_cast<Eigen::Index>(stage));
        const auto sv = singular_values(df);
        probe.min_sv_df_stage = std::min(probe.min_sv_df_stage, sv.minCoeff());
        if (numerical_rank(sv, opts.rank_tol) != stage) ++probe.rank_failures;
      }
      probe.probes += bd.size() + fib.size();
    }
    if (boundary_probes == 0) {
      probe.reason = "no probe converged on the sphere";
    } else if (probe.rank_failures > 0) {
      probe.reason = std::to_string(probe.rank_failures) + " rank-deficient probes";
    } else {
      probe.accepted = true;
    }
    choice.ladder.push_back(probe);
    if (probe.accepted) {
      choice.radii = radii;
      return choice;
    }
  }
  const auto& last = choice.ladder.back();
  throw Error(Errc::no_radius_found,
              "no radius on the ladder passed the rank checks (smallest eps " +
                  std::to_string(last.epsilon) + ": " + last.reason +
                  ", min sv [df_I;dg] = " + std::to_string(last.min_sv_df_stage_with_g) +
                  ", min sv A = " + std::to_string(last.min_sv_a) + ")");
}

}  // namespace milnorkit
