#include "milnorkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "milnorkit/error.hpp"

namespace milnorkit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::unstable: return "UNSTABLE";
  }
  return "UNSTABLE";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::unstable || b == Verdict::unstable) return Verdict::unstable;
  return Verdict::pass;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::unstable: return 3;
    case Verdict::fail: return 4;
  }
  return 4;
}

std::vector<SetSpec> all_sets(const MapGerm& f, const std::vector<TargetKind>& kinds) {
  std::vector<SetSpec> out;
  for (std::size_t i = 1; i <= f.target_dim(); ++i)
    for (TargetKind k : kinds) out.push_back({k, i});
  return out;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::int64_t expected_value(const StageReport& report, const SetSpec& set) {
  const auto& row = report.at(static_cast<int>(set.stage));
  switch (set.kind) {
    case TargetKind::fiber: return row.chi_fiber;
    case TargetKind::boundary: return row.chi_boundary;
    case TargetKind::link: return row.chi_link;
    case TargetKind::page: break;
  }
  throw Error(Errc::precondition, "verify measures fiber, boundary and link only");
}

StageParams stage_params(const Radii& radii, const MeasureParams& params, std::uint64_t seed) {
  StageParams sp;
  sp.radii = radii;
  sp.samples = params.samples;
  sp.seed = seed;
  sp.shrink_fiber = params.shrink_fiber;
  sp.sampler.threads = params.threads;
  sp.estimator.rips.threads = params.threads;
  sp.estimator.rips.budget = params.clique_budget;
  return sp;
}

double angle_to(const Eigen::VectorXd& v, std::span<const double> theta) {
  const double n = v.norm();
  if (n == 0.0) return M_PI;
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) dot += v[static_cast<Eigen::Index>(i)] * theta[i];
  return std::acos(std::clamp(dot / n, -1.0, 1.0));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, TargetKind kind, std::size_t stage,
                          std::uint64_t salt) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint64_t>(kind));
  h = splitmix(h ^ stage);
  return splitmix(h ^ salt);
}

Radii resolve_radii(const MapGerm& f, const std::vector<std::size_t>& stages,
                    const MeasureParams& params) {
  if (params.epsilon > 0.0) {
    Radii r = Radii::from_epsilon(params.epsilon);
    r.validate();
    return r;
  }
  double eps = epsilon_ladder().front();
  SamplerOptions opts;
  opts.threads = params.threads;
  for (std::size_t s : stages) {
    const auto choice = choose_radii(f, s, 1000, params.seed, opts);
    eps = std::min(eps, choice.radii.epsilon);
  }
  return Radii::from_epsilon(eps);
}

Measurement measure_set(const MapGerm& f, const SetSpec& set, const Radii& radii,
                        const MeasureParams& params) {
  Measurement m;
  m.set = set;
  m.dimension = target_dimension(f, set.stage, set.kind);
  m.seed = derive_seed(params.seed, set.kind, set.stage);
  try {
    const auto est = estimate_stage(f, set.stage, set.kind, stage_params(radii, params, m.seed));
    m.estimate = est.estimate;
    m.shrunk = est.shrunk;
    m.points = est.cloud.size();
    m.proposals = est.cloud.proposals;
    m.residual_equations = est.cloud.residual_equations;
    m.residual_sphere = est.cloud.residual_sphere;
    m.near_singular = est.cloud.near_singular.size();
    m.note = est.note;
  } catch (const Error& e) {
    if (e.code() == Errc::empty_fiber) {
      // chi of the empty set; surfaced through the note.
      m.estimate.confidence = Confidence::stable;
      m.note = std::string("empty ") + to_string(set.kind) + ": " + e.what();
    } else if (e.code() == Errc::acceptance_rate_too_low) {
      m.estimate.confidence = Confidence::unstable;
      m.note = e.what();
    } else {
      throw;
    }
  }
  return m;
}

VerifyResult run_verify(const MapGerm& f, const std::string& name, const VerifyParams& params) {
  VerifyResult out;
  out.germ_name = name;
  out.source_dim = f.source_dim();
  out.target_dim = f.target_dim();
  const std::size_t k = f.target_dim();
  for (const auto& s : params.sets) {
    if (s.kind == TargetKind::page)
      throw Error(Errc::precondition, "verify measures fiber, boundary and link only");
    if (s.stage < 1 || s.stage > k)
      throw Error(Errc::range, "stage " + std::to_string(s.stage) + " outside 1.." +
                                   std::to_string(k));
  }

  std::set<std::size_t> stages;
  for (const auto& s : params.sets) stages.insert(s.stage);
  if (!params.chi_f) stages.insert(k);
  out.radii = resolve_radii(f, {stages.begin(), stages.end()}, params.measure);

  if (params.chi_f) {
    out.chi_f = *params.chi_f;
    out.chi_f_source = "pinned";
  } else {
    out.chi_f_measurement = measure_set(f, {TargetKind::fiber, k}, out.radii, params.measure);
    out.chi_f = out.chi_f_measurement->estimate.chi;
    out.chi_f_source = "measured";
    out.chi_f_verdict = out.chi_f_measurement->estimate.confidence == Confidence::stable
                            ? Verdict::pass
                            : Verdict::unstable;
  }
  out.expected = build_stage_report(static_cast<int>(out.source_dim),
                                    static_cast<int>(out.target_dim), out.chi_f);

  Verdict overall = out.chi_f_verdict;
  for (const auto& s : params.sets) {
    SetVerdict v;
    if (out.chi_f_measurement && s == out.chi_f_measurement->set)
      v.measured = *out.chi_f_measurement;
    else
      v.measured = measure_set(f, s, out.radii, params.measure);
    v.expected = expected_value(out.expected, s);
    for (const auto& c : params.components)
      if (c.set == s) v.expected_components = c.components;
    if (v.measured.estimate.confidence != Confidence::stable)
      v.verdict = Verdict::unstable;
    else if (v.measured.estimate.chi != v.expected)
      v.verdict = Verdict::fail;
    else if (v.expected_components && !v.measured.note.starts_with("empty") &&
             v.measured.estimate.components != *v.expected_components)
      v.verdict = Verdict::fail;
    else
      v.verdict = Verdict::pass;
    overall = combine(overall, v.verdict);
    out.sets.push_back(std::move(v));
  }

  for (std::size_t s : stages) {
    const SetVerdict* b = nullptr;
    const SetVerdict* l = nullptr;
    for (const auto& v : out.sets) {
      if (v.measured.set.stage != s) continue;
      if (v.measured.set.kind == TargetKind::boundary) b = &v;
      if (v.measured.set.kind == TargetKind::link) l = &v;
    }
    if (!b || !l) continue;
    DbCheck db;
    db.stage = s;
    db.expected = out.expected.db;
    db.measured = b->measured.estimate.chi - l->measured.estimate.chi;
    const bool stable = b->measured.estimate.confidence == Confidence::stable &&
                        l->measured.estimate.confidence == Confidence::stable;
    db.verdict = !stable ? Verdict::unstable
                         : (db.measured == db.expected ? Verdict::pass : Verdict::fail);
    overall = combine(overall, db.verdict);
    out.db_checks.push_back(db);
  }
  out.overall = overall;
  return out;
}

OpenbookResult run_openbook(const MapGerm& f, const std::string& name,
                            const OpenbookParams& params) {
  const std::size_t k = f.target_dim();
  if (params.stage < 1 || params.stage >= k)
    throw Error(Errc::range, "open book needs 1 <= I < K, got I=" + std::to_string(params.stage));
  if (params.num_angles == 0) throw Error(Errc::precondition, "num_angles must be positive");
  OpenbookResult out;
  out.germ_name = name;
  out.stage = params.stage;
  out.page_dimension = target_dimension(f, params.stage, TargetKind::page);
  out.chi_f = params.chi_f;
  out.radii = resolve_radii(f, {params.stage}, params.measure);

  const std::size_t rest = k - params.stage;
  const auto thetas = rest == 1 ? std::vector<std::vector<double>>{{1.0}, {-1.0}}
                                : page_angles(rest, params.num_angles);
  const auto maps = stage(f, params.stage);
  Verdict verdict = Verdict::pass;
  for (std::size_t p = 0; p < thetas.size(); ++p) {
    PageMeasurement page;
    page.theta = thetas[p];
    page.seed = derive_seed(params.measure.seed, TargetKind::page, params.stage, p);
    StageParams sp = stage_params(out.radii, params.measure, page.seed);
    sp.theta = page.theta;
    const auto est = estimate_stage(f, params.stage, TargetKind::page, sp);
    page.estimate = est.estimate;
    page.points = est.cloud.size();
    for (std::size_t i = 0; i < est.cloud.size(); ++i)
      page.max_angle =
          std::max(page.max_angle, angle_to(maps.f_rest.evaluate(est.cloud.point(i)), page.theta));
    if (page.estimate.confidence != Confidence::stable) verdict = combine(verdict, Verdict::unstable);
    out.pages.push_back(std::move(page));
  }
  out.all_equal = std::all_of(out.pages.begin(), out.pages.end(), [&](const PageMeasurement& p) {
    return p.estimate.chi == out.pages.front().estimate.chi;
  });
  if (!out.all_equal) verdict = combine(verdict, Verdict::fail);
  if (out.chi_f) out.matches_chi_f = out.all_equal && out.pages.front().estimate.chi == *out.chi_f;
  out.verdict = verdict;
  return out;
}

TamenessRun run_tameness(const MapGerm& f, const std::string& name, const Radii& radii,
                         std::size_t starts, std::uint64_t seed) {
  TamenessRun out;
  out.germ_name = name;
  out.radii = radii;
  out.starts = starts;
  out.seed = seed;
  out.evidence = tameness_evidence(f, radii, starts, seed);
  for (std::size_t s = 1; s <= f.target_dim(); ++s) {
    StageRadii sr;
    sr.stage = s;
    try {
      sr.choice = choose_radii(f, s, 1000, derive_seed(seed, TargetKind::boundary, s));
    } catch (const Error& e) {
      if (e.code() != Errc::no_radius_found) throw;
      sr.error = e.what();
    }
    out.radius_search.push_back(std::move(sr));
  }
  return out;
}

}  // namespace milnorkit
