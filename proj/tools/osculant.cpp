// Command-line front end: loads surface definitions, runs flag analyses and
// the verification suite, generates example immersions and emits
// deterministic JSON/CSV reports.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "osculant/report.hpp"
#include "osculant/version.hpp"

namespace {

using namespace osculant;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCheckFailed = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

Vec parse_point(const std::string& text) {
  Vec point;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    size_t pos = 0;
    double value = std::stod(part, &pos);
    while (pos < part.size() && (part[pos] == ' ' || part[pos] == '\t')) ++pos;
    if (pos != part.size())
      throw std::runtime_error("invalid coordinate '" + part + "'");
    point.push_back(value);
  }
  if (point.empty()) throw std::runtime_error("empty point");
  return point;
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string(buf);
}

struct AnalyzeArgs {
  std::string spec_path;
  std::string point_text;
  int max_order = -1;  // -1: take from the spec file
  double tol = 1e-8;
  std::string out_path;
  std::string format = "json";
  bool stamp = false;
  bool invariance = false;
  std::uint64_t invariance_seed = 1;
};

int cmd_analyze(const AnalyzeArgs& args) {
  ImmersionSpec spec = load_spec_file(args.spec_path);
  Vec point = args.point_text.empty() ? spec.base_point
                                      : parse_point(args.point_text);
  int max_order = args.max_order >= 0 ? args.max_order : spec.max_order;
  if (max_order < 1) throw std::runtime_error("max order must be >= 1");
  RankTolerance tol{args.tol};

  FlagReport report = analyze(spec.immersion, point, max_order, tol);
  if (args.invariance)
    report.frame_invariance_residual = verify_frame_invariance(
        spec.immersion, point, max_order, tol, args.invariance_seed);

  std::string text = args.format == "csv"
                         ? report_csv(report)
                         : report_json(report, args.stamp ? iso_timestamp() : "");
  write_output(text, args.out_path);

  if (!report.bound_satisfied || !report.oracle_match) {
    std::cerr << "verification failed: "
              << (!report.bound_satisfied ? "rank bound violated"
                                          : "oracle dimensions disagree")
              << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_extremal(int n, int r, const std::string& coeffs_text,
                 const std::string& out_path) {
  std::vector<double> coefficients;
  if (!coeffs_text.empty()) coefficients = parse_point(coeffs_text);
  ImmersionSpec spec;
  spec.immersion = extremal_example(n, r, coefficients);
  spec.base_point.assign(static_cast<size_t>(n), 0.0);
  spec.max_order = r;
  write_output(save_spec(spec), out_path);
  return kExitOk;
}

int cmd_random(int n, int m, int max_degree, std::uint64_t seed,
               const std::string& out_path) {
  ImmersionSpec spec;
  spec.immersion = random_polynomial_immersion(n, m, max_degree, seed);
  spec.base_point.assign(static_cast<size_t>(n), 0.0);
  spec.max_order = 2;
  write_output(save_spec(spec), out_path);
  return kExitOk;
}

int cmd_verify(const std::string& suite, int count, std::uint64_t seed,
               double tol) {
  SuiteOptions options;
  options.corpus = suite == "random" ? SuiteOptions::Corpus::random
                                     : SuiteOptions::Corpus::gallery;
  options.count = count;
  options.seed = seed;
  options.tol = RankTolerance{tol};
  SuiteResult result = run_verify_suite(options);
  std::cout << "suite " << suite << " seed " << seed;
  if (options.corpus == SuiteOptions::Corpus::random)
    std::cout << " count " << count;
  std::cout << " tol " << tol << "\n" << format_suite_table(result);
  return result.failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_save_gallery(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const GalleryEntry& entry : builtin_gallery()) {
    std::filesystem::path path = std::filesystem::path(dir) / (entry.id + ".spec");
    save_spec_file(entry.spec, path.string());
  }
  std::cerr << "wrote " << builtin_gallery().size() << " spec files to " << dir
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"osculating-space flags and higher-order normal curvatures of "
               "parametrized immersions"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "analyze a surface definition and write a report");
  analyze_cmd->add_option("spec", analyze_args.spec_path, "surface definition file")
      ->required();
  analyze_cmd->add_option("--point", analyze_args.point_text,
                          "base point, comma-separated (default: from the file)");
  analyze_cmd->add_option("--max-order", analyze_args.max_order,
                          "highest curvature order (default: from the file)");
  analyze_cmd->add_option("--tol", analyze_args.tol, "relative rank tolerance")
      ->envname("OSCULANT_TOL");
  analyze_cmd->add_option("--out", analyze_args.out_path,
                          "output file (default: stdout)");
  analyze_cmd->add_option("--format", analyze_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_flag("--stamp", analyze_args.stamp,
                        "include a timestamp in the report");
  analyze_cmd->add_flag("--invariance", analyze_args.invariance,
                        "also run one seeded domain-rotation invariance check");
  analyze_cmd->add_option("--invariance-seed", analyze_args.invariance_seed,
                          "seed for --invariance");

  int ex_n = 0, ex_r = 0;
  std::string ex_coeffs, ex_out;
  auto* extremal_cmd = app.add_subcommand(
      "extremal", "write the rank-maximal polynomial example as a spec file");
  extremal_cmd->add_option("--n", ex_n, "domain dimension")->required();
  extremal_cmd->add_option("--r", ex_r, "target order")->required();
  extremal_cmd->add_option("--coeffs", ex_coeffs,
                           "monomial coefficients, comma-separated (default: all 1)");
  extremal_cmd->add_option("--out", ex_out, "output file (default: stdout)");

  int rnd_n = 0, rnd_m = 0, rnd_degree = 2;
  std::uint64_t rnd_seed = 1;
  std::string rnd_out;
  auto* random_cmd = app.add_subcommand(
      "random", "write a seeded random polynomial immersion as a spec file");
  random_cmd->add_option("--n", rnd_n, "domain dimension")->required();
  random_cmd->add_option("--m", rnd_m, "ambient dimension")->required();
  random_cmd->add_option("--max-degree", rnd_degree, "highest monomial degree");
  random_cmd->add_option("--seed", rnd_seed, "generator seed");
  random_cmd->add_option("--out", rnd_out, "output file (default: stdout)");

  std::string verify_suite = "gallery";
  int verify_count = 200;
  std::uint64_t verify_seed = 7;
  double verify_tol = 1e-8;
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the full invariant suite over the gallery or a random corpus");
  verify_cmd->add_option("--suite", verify_suite, "gallery or random")
      ->check(CLI::IsMember({"gallery", "random"}));
  verify_cmd->add_option("--count", verify_count, "random corpus size");
  verify_cmd->add_option("--seed", verify_seed, "random corpus seed");
  verify_cmd->add_option("--tol", verify_tol, "relative rank tolerance")
      ->envname("OSCULANT_TOL");

  std::string gallery_dir;
  auto* gallery_cmd =
      app.add_subcommand("save-gallery", "write the bundled gallery spec files");
  gallery_cmd->add_option("--dir", gallery_dir, "target directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args);
    if (*extremal_cmd) return cmd_extremal(ex_n, ex_r, ex_coeffs, ex_out);
    if (*random_cmd) return cmd_random(rnd_n, rnd_m, rnd_degree, rnd_seed, rnd_out);
    if (*verify_cmd)
      return cmd_verify(verify_suite, verify_count, verify_seed, verify_tol);
    if (*gallery_cmd) return cmd_save_gallery(gallery_dir);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
