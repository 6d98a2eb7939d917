#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "milnorkit/catalog.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/formulas.hpp"
#include "milnorkit/germ_parser.hpp"
#include "milnorkit/pipeline.hpp"
#include "milnorkit/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace milnorkit;

namespace {

constexpr const char* kOutDirEnv = "MILNORKIT_OUT_DIR";

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir;
  std::string format = "json";
};

struct Record {
  std::vector<std::string> argv;
  std::string command;
  json parameters = json::object();
  std::vector<std::string> outputs;
  std::string verdict;
  std::string started;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::syntax:
    case Errc::dimension:
    case Errc::hypothesis:
    case Errc::constant_term:
    case Errc::range:
    case Errc::precondition:
    case Errc::unknown_name: return 2;
    case Errc::no_radius_found:
    case Errc::acceptance_rate_too_low:
    case Errc::empty_fiber:
    case Errc::clique_budget_exceeded: return 3;
    case Errc::invariant_breach:
    case Errc::io: return 1;
  }
  return 1;
}

/// A germ argument is a file path or, failing that, a catalog name.
struct GermSource {
  std::string name;
  MapGerm germ;
  const CatalogEntry* entry = nullptr;
};

GermSource load_germ(const std::string& arg) {
  if (fs::exists(arg)) {
    auto germ = load_germ_file(arg);
    return {fs::path(arg).stem().string(), std::move(germ), nullptr};
  }
  const CatalogEntry& e = catalog_entry(arg);
  return {e.name, e.germ(), &e};
}

void write_output(Record& rec, const fs::path& path, const std::string& content) {
  write_text_file(path.string(), content);
  rec.outputs.push_back(path.string());
}

void write_record(const Record& rec, const fs::path& dir, int code) {
  json j{{"schema", "milnorkit.run_record"},
         {"schema_version", kReportSchemaVersion},
         {"argv", rec.argv},
         {"command", rec.command},
         {"parameters", rec.parameters},
         {"started", rec.started},
         {"finished", utc_now()},
         {"outputs", rec.outputs},
         {"verdict", rec.verdict},
         {"exit_code", code}};
  write_text_file((dir / "run.json").string(), j.dump(2) + "\n");
}

void print_verify(const VerifyResult& r) {
  std::cout << r.germ_name << ": chi_f = " << r.chi_f << " (" << r.chi_f_source
            << "), epsilon = " << r.radii.epsilon << "\n";
  for (const auto& v : r.sets) {
    std::cout << "  " << std::left << std::setw(9) << to_string(v.measured.set.kind) << " I="
              << v.measured.set.stage << "  expected " << std::setw(3) << v.expected
              << " measured " << std::setw(3) << v.measured.estimate.chi << " "
              << std::setw(8) << to_string(v.measured.estimate.confidence) << " components "
              << v.measured.estimate.components << "  " << to_string(v.verdict) << "\n";
  }
  for (const auto& d : r.db_checks)
    std::cout << "  DB at I=" << d.stage << ": expected " << d.expected << " measured "
              << d.measured << "  " << to_string(d.verdict) << "\n";
  std::cout << "  overall " << to_string(r.overall) << "\n";
}

void print_openbook(const OpenbookResult& r) {
  std::cout << r.germ_name << ": open book at I=" << r.stage << ", page dimension "
            << r.page_dimension << "\n";
  for (std::size_t i = 0; i < r.pages.size(); ++i) {
    const auto& p = r.pages[i];
    std::cout << "  page " << i << " theta=(";
    for (std::size_t t = 0; t < p.theta.size(); ++t)
      std::cout << (t ? ", " : "") << std::setprecision(4) << p.theta[t];
    std::cout << ") chi " << p.estimate.chi << " " << to_string(p.estimate.confidence) << "\n";
  }
  if (r.matches_chi_f)
    std::cout << "  page chi equals chi_f: " << (*r.matches_chi_f ? "yes" : "no") << "\n";
  std::cout << "  pages agree: " << (r.all_equal ? "yes" : "no") << "  " << to_string(r.verdict)
            << "\n";
}

void print_tameness(const TamenessRun& r) {
  const auto& ev = r.evidence;
  std::cout << r.germ_name << ": " << ev.hits.size() << " of " << r.starts
            << " starts ended on Sing f outside V(f)";
  if (ev.has_hits()) std::cout << " (norms " << ev.min_hit_norm << " .. " << ev.max_hit_norm << ")";
  std::cout << "\n  inclusion violations: " << ev.inclusion.violations << "\n";
  for (const auto& s : r.radius_search) {
    std::cout << "  radius search I=" << s.stage << ": ";
    if (s.choice)
      std::cout << "epsilon " << s.choice->radii.epsilon << "\n";
    else
      std::cout << s.error << "\n";
  }
}

int run(std::vector<std::string> args) {
  Record rec;
  rec.argv = args;
  rec.started = utc_now();

  CLI::App app{"milnorkit: Euler characteristics of Milnor fibers, boundaries and links"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  if (const char* env = std::getenv(kOutDirEnv)) g.out_dir = env;
  if (g.out_dir.empty()) g.out_dir = "milnorkit-out";
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir,
                 std::string("Output directory (default from ") + kOutDirEnv + " or ./milnorkit-out)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  // A replayed command may repeat a global option; the last one wins.
  for (const char* name : {"--seed", "--threads", "--out-dir", "--format"})
    app.get_option(name)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // formulas
  auto* formulas = app.add_subcommand("formulas", "Closed-form Euler characteristics for every stage");
  int fm = 0, fk = 0;
  std::int64_t fchi = 0;
  formulas->add_option("--m", fm, "Source dimension M")->required();
  formulas->add_option("--k", fk, "Target dimension K")->required();
  formulas->add_option("--chi-f", fchi, "Euler characteristic of the Milnor fiber")->required();

  // shared measurement options
  struct Measure {
    double epsilon = 0.5;
    std::size_t samples = 0;
    std::uint64_t budget = RipsOptions{}.budget;
    bool shrink = false;
    bool svg = false;
  };
  auto add_measure = [](CLI::App* sub, Measure& m) {
    sub->add_option("--epsilon", m.epsilon, "Ball radius; 0 searches the radius ladder")->capture_default_str();
    sub->add_option("--samples", m.samples, "Accepted proposals per set (0 = default by dimension)");
    sub->add_option("--budget", m.budget, "Clique budget per scale")->capture_default_str();
  };

  // verify
  auto* verify = app.add_subcommand("verify", "Measure chi of fibers, boundaries and links and compare with the closed forms");
  std::string vgerm;
  std::vector<std::size_t> vstages;
  std::vector<std::string> vkinds{"fiber", "boundary", "link"};
  std::optional<std::int64_t> vchi;
  Measure vm;
  verify->add_option("germ", vgerm, "Germ file or catalog name")->required();
  verify->add_option("--stage", vstages, "Stages to measure (default: all)");
  verify->add_option("--kinds", vkinds, "Sets to measure")->delimiter(',')->check(CLI::IsMember({"fiber", "boundary", "link"}));
  verify->add_option("--chi-f", vchi, "Pin chi(F_f) instead of measuring the fiber at stage K");
  verify->add_flag("--shrink-fiber", vm.shrink, "Also scan fibers cut to 0.95 epsilon");
  verify->add_flag("--svg", vm.svg, "Write an SVG chart per scan");
  add_measure(verify, vm);

  // openbook
  auto* openbook = app.add_subcommand("openbook", "Sample open-book pages and compare their chi");
  std::string ogerm;
  std::size_t ostage = 1, oangles = 8;
  Measure om;
  openbook->add_option("germ", ogerm, "Germ file or catalog name")->required();
  openbook->add_option("--stage", ostage, "Stage I (needs K - I >= 1)")->capture_default_str();
  openbook->add_option("--angles", oangles, "Number of pages")->capture_default_str();
  add_measure(openbook, om);

  // tameness
  auto* tameness = app.add_subcommand("tameness", "Search for evidence against tameness");
  std::string tgerm;
  std::size_t tstarts = 200;
  double teps = 0.5;
  tameness->add_option("germ", tgerm, "Germ file or catalog name")->required();
  tameness->add_option("--starts", tstarts, "Random starts (>= 100)")->capture_default_str();
  tameness->add_option("--epsilon", teps, "Ball radius")->capture_default_str();

  // catalog
  auto* cat = app.add_subcommand("catalog", "Built-in germs with known chi(F_f)");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "List catalog entries");
  auto* cat_show = cat->add_subcommand("show", "Print an entry");
  std::string show_name;
  cat_show->add_option("name", show_name)->required();
  auto* cat_run = cat->add_subcommand("run", "Run an entry (or 'all') against its expected report");
  std::string run_name;
  Measure cm;
  cat_run->add_option("name", run_name)->required();
  cat_run->add_flag("--svg", cm.svg, "Write an SVG chart per scan");
  add_measure(cat_run, cm);

  // sample
  auto* sample = app.add_subcommand("sample", "Export a raw point cloud (binary .mkpc, or CSV with --format csv)");
  std::string sgerm, skind = "fiber";
  std::size_t sstage = 1, sn = 1000;
  double seps = 0.5;
  std::vector<double> stheta;
  sample->add_option("germ", sgerm, "Germ file or catalog name")->required();
  sample->add_option("--kind", skind, "fiber, boundary, link or page")->check(CLI::IsMember({"fiber", "boundary", "link", "page"}))->capture_default_str();
  sample->add_option("--stage", sstage, "Stage I")->capture_default_str();
  sample->add_option("--n", sn, "Accepted proposals")->capture_default_str();
  sample->add_option("--epsilon", seps, "Ball radius")->capture_default_str();
  sample->add_option("--theta", stheta, "Page direction (kind=page)")->delimiter(',');

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run the command stored in a run.json record");
  std::string replay_path;
  replay->add_option("record", replay_path, "run.json written by an earlier run")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const ReportFormat fmt = parse_report_format(g.format);
  const fs::path out(g.out_dir);
  auto measure_params = [&](const Measure& m) {
    MeasureParams p;
    p.epsilon = m.epsilon;
    p.samples = m.samples;
    p.seed = g.seed;
    p.threads = g.threads;
    p.shrink_fiber = m.shrink;
    p.clique_budget = m.budget;
    return p;
  };
  auto measure_json = [&](const Measure& m) {
    return json{{"epsilon", m.epsilon}, {"samples", m.samples}, {"budget", m.budget},
                {"shrink_fiber", m.shrink}, {"svg", m.svg}};
  };
  rec.parameters = {{"seed", g.seed}, {"threads", g.threads}, {"out_dir", g.out_dir}, {"format", g.format}};

  try {
    if (*formulas) {
      rec.command = "formulas";
      rec.parameters["M"] = fm;
      rec.parameters["K"] = fk;
      rec.parameters["chi_f"] = fchi;
      const auto report = build_stage_report(fm, fk, fchi);
      const std::string text = stage_report_text(report, fmt);
      const fs::path dir = out / ("formulas-M" + std::to_string(fm) + "-K" + std::to_string(fk) +
                                  "-chi" + std::to_string(fchi));
      write_output(rec, dir / ("report" + extension(fmt)), text);
      std::cout << text;
      rec.verdict = "PASS";
      write_record(rec, dir, 0);
      return 0;
    }

    if (*verify) {
      rec.command = "verify";
      const auto src = load_germ(vgerm);
      VerifyParams vp;
      std::vector<TargetKind> kinds;
      for (const auto& k : vkinds) kinds.push_back(parse_target_kind(k));
      if (vstages.empty()) {
        vp.sets = all_sets(src.germ, kinds);
      } else {
        for (std::size_t s : vstages)
          for (TargetKind k : kinds) vp.sets.push_back({k, s});
      }
      vp.chi_f = vchi;
      if (!vp.chi_f && src.entry) {
        vp.chi_f = src.entry->chi_f;
        vp.components = src.entry->components;
      }
      vp.measure = measure_params(vm);
      rec.parameters["germ"] = vgerm;
      rec.parameters["stages"] = vstages;
      rec.parameters["kinds"] = vkinds;
      if (vchi) rec.parameters["chi_f"] = *vchi;
      rec.parameters["measure"] = measure_json(vm);
      const auto result = run_verify(src.germ, src.name, vp);
      const fs::path dir = out / src.name;
      write_output(rec, dir / ("verdict" + extension(fmt)), verify_text(result, fmt));
      write_output(rec, dir / ("report" + extension(fmt)), stage_report_text(result.expected, fmt));
      write_output(rec, dir / "scans.json", verify_scans_json(result));
      if (vm.svg)
        for (const auto& v : result.sets) {
          const std::string key = to_string(v.measured.set.kind) + "-" + std::to_string(v.measured.set.stage);
          write_output(rec, dir / "svg" / (key + ".svg"),
                       scan_svg(v.measured.estimate, src.name + " " + key));
        }
      print_verify(result);
      rec.verdict = to_string(result.overall);
      const int code = exit_code(result.overall);
      write_record(rec, dir, code);
      return code;
    }

    if (*openbook) {
      rec.command = "openbook";
      const auto src = load_germ(ogerm);
      OpenbookParams op;
      op.stage = ostage;
      op.num_angles = oangles;
      op.measure = measure_params(om);
      if (src.entry) op.chi_f = src.entry->chi_f;
      rec.parameters["germ"] = ogerm;
      rec.parameters["stage"] = ostage;
      rec.parameters["angles"] = oangles;
      rec.parameters["measure"] = measure_json(om);
      const auto result = run_openbook(src.germ, src.name, op);
      const fs::path dir = out / src.name;
      write_output(rec, dir / ("openbook-I" + std::to_string(ostage) + extension(fmt)),
                   openbook_text(result, fmt));
      print_openbook(result);
      rec.verdict = to_string(result.verdict);
      const int code = exit_code(result.verdict);
      write_record(rec, dir, code);
      return code;
    }

    if (*tameness) {
      rec.command = "tameness";
      const auto src = load_germ(tgerm);
      rec.parameters["germ"] = tgerm;
      rec.parameters["starts"] = tstarts;
      rec.parameters["epsilon"] = teps;
      const auto result = run_tameness(src.germ, src.name, Radii::from_epsilon(teps), tstarts, g.seed);
      const fs::path dir = out / src.name;
      write_output(rec, dir / ("tameness" + extension(fmt)), tameness_text(result, fmt));
      print_tameness(result);
      rec.verdict = result.evidence.has_hits() ? "HITS" : "NO_HITS";
      write_record(rec, dir, 0);
      return 0;
    }

    if (*cat) {
      if (*cat_list) {
        std::cout << catalog_list_text(fmt);
        return 0;
      }
      if (*cat_show) {
        std::cout << catalog_show_text(catalog_entry(show_name), fmt);
        return 0;
      }
      rec.command = "catalog run";
      rec.parameters["name"] = run_name;
      rec.parameters["measure"] = measure_json(cm);
      std::vector<const CatalogEntry*> entries;
      if (run_name == "all") {
        for (const auto& e : catalog()) entries.push_back(&e);
      } else {
        entries.push_back(&catalog_entry(run_name));
      }
      Verdict overall = Verdict::pass;
      for (const auto* e : entries) {
        const auto result = run_catalog_entry(*e, measure_params(cm));
        const fs::path dir = out / e->name;
        write_output(rec, dir / ("catalog-run" + extension(fmt)), catalog_run_text(result, fmt));
        write_output(rec, dir / ("report" + extension(fmt)), stage_report_text(e->expected, fmt));
        if (result.verify) {
          write_output(rec, dir / "scans.json", verify_scans_json(*result.verify));
          if (cm.svg)
            for (const auto& v : result.verify->sets) {
              const std::string key = to_string(v.measured.set.kind) + "-" + std::to_string(v.measured.set.stage);
              write_output(rec, dir / "svg" / (key + ".svg"),
                           scan_svg(v.measured.estimate, e->name + " " + key));
            }
          print_verify(*result.verify);
        }
        if (result.openbook) print_openbook(*result.openbook);
        print_tameness(result.tameness);
        std::cout << e->name << ": " << to_string(result.overall) << "\n";
        overall = combine(overall, result.overall);
      }
      rec.verdict = to_string(overall);
      const int code = exit_code(overall);
      write_record(rec, entries.size() == 1 ? out / entries.front()->name : out, code);
      return code;
    }

    if (*sample) {
      rec.command = "sample";
      const auto src = load_germ(sgerm);
      const TargetKind kind = parse_target_kind(skind);
      const Radii radii = Radii::from_epsilon(seps);
      SamplerOptions so;
      so.threads = g.threads;
      PointCloud cloud;
      const auto y = default_regular_value(sstage, radii.eta);
      switch (kind) {
        case TargetKind::fiber: cloud = sample_fiber(src.germ, sstage, y, radii, sn, g.seed, so); break;
        case TargetKind::boundary: cloud = sample_boundary(src.germ, sstage, y, radii, sn, g.seed, so); break;
        case TargetKind::link: cloud = sample_link(src.germ, sstage, radii, sn, g.seed, so); break;
        case TargetKind::page: {
          std::vector<double> theta = stheta;
          if (theta.empty() && sstage < src.germ.target_dim()) {
            theta.assign(src.germ.target_dim() - sstage, 0.0);
            theta[0] = 1.0;
          }
          cloud = sample_openbook_page(src.germ, sstage, theta, radii, sn, g.seed, so).page;
          break;
        }
      }
      rec.parameters["germ"] = sgerm;
      rec.parameters["kind"] = skind;
      rec.parameters["stage"] = sstage;
      rec.parameters["n"] = sn;
      rec.parameters["epsilon"] = seps;
      rec.parameters["theta"] = stheta;
      const fs::path dir = out / src.name;
      const fs::path file = dir / (skind + "-I" + std::to_string(sstage) +
                                   (fmt == ReportFormat::csv ? ".csv" : ".mkpc"));
      fs::create_directories(dir);
      {
        std::ofstream os(file, std::ios::binary);
        if (!os) throw Error(Errc::io, "cannot open " + file.string());
        if (fmt == ReportFormat::csv)
          write_point_cloud_csv(os, cloud);
        else
          write_point_cloud_binary(os, cloud);
      }
      rec.outputs.push_back(file.string());
      std::cout << cloud.size() << " points (" << cloud.proposals << " proposals) -> " << file.string() << "\n";
      rec.verdict = "PASS";
      write_record(rec, dir, 0);
      return 0;
    }

    if (*replay) {
      std::ifstream in(replay_path);
      const json j = json::parse(in);
      std::vector<std::string> argv = j.at("argv").get<std::vector<std::string>>();
      // Options given to replay itself (e.g. --out-dir) override the record.
      std::vector<std::string> replayed{argv.front()};
      replayed.insert(replayed.end(), argv.begin() + 1, argv.end());
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "replay") {
          ++i;  // skip the record path
          continue;
        }
        replayed.push_back(args[i]);
      }
      return run(replayed);
    }
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }
