// projlen: batch pipeline over curve / measure / transform files.
//
//   projlen measure     curve.json -> measure.json
//   projlen transform   measure.json -> samples.csv (or .json)
//   projlen invert      samples.csv -> measure.json (NNLS on a tag grid)
//   projlen reconstruct measure.json -> curve.json + certificate report
//   projlen verify      seeded invariant battery -> report.json
//
// Exit codes: 0 ok, 1 parse error, 2 precondition violation,
// 3 solver non-convergence, 4 verification failure.

#include <projlen/projlen.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

namespace {

bool json_path(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

int cmd_measure(const std::string& input, const std::string& output) {
  const projlen::PcvCurve curve =
      projlen::curve_from_json_text(projlen::read_text_file(input));
  projlen::write_text_file(output, projlen::to_json(projlen::measure_of(curve)) + "\n");
  return 0;
}

int cmd_transform(const std::string& input, const std::string& output, int grid) {
  const projlen::DiscreteMeasure mu =
      projlen::measure_from_json_text(projlen::read_text_file(input));
  const projlen::TransformSamples samples = projlen::sample_transform(mu, grid);
  projlen::write_text_file(
      output, json_path(output) ? projlen::to_json(samples) + "\n" : projlen::to_csv(samples));
  return 0;
}

int cmd_invert(const std::string& input, const std::string& output, int cells, double tol) {
  const std::string text = projlen::read_text_file(input);
  const projlen::TransformSamples samples = json_path(input)
                                                ? projlen::samples_from_json_text(text)
                                                : projlen::samples_from_csv_text(text);
  const projlen::TaggedPartition grid = projlen::uniform_partition(samples.d, cells);
  const projlen::InversionResult inv = projlen::invert_nnls(samples, grid, tol);
  std::cout << "residual_rms=" << projlen::format_double(inv.residual_rms)
            << " kkt_residual=" << projlen::format_double(inv.kkt_residual)
            << " kernel_rank=" << inv.kernel_rank << " atoms=" << inv.measure.size()
            << "\n";
  if (!inv.converged) {
    std::cerr << "projlen: NNLS did not reach the requested tolerance\n";
    return 3;
  }
  projlen::write_text_file(output, projlen::to_json(inv.measure) + "\n");
  return 0;
}

int cmd_reconstruct(const std::string& input, const std::string& output,
                    const std::string& report, int cells, int levels, int factor) {
  const projlen::DiscreteMeasure mu =
      projlen::measure_from_json_text(projlen::read_text_file(input));
  const projlen::TaggedPartition base = projlen::uniform_partition(mu.dim(), cells);
  const projlen::SurjectivityResult seq =
      projlen::surjectivity_sequence(mu, base, levels, factor);
  projlen::write_text_file(output, projlen::to_json(seq.curves.back()) + "\n");
  if (!report.empty()) projlen::write_text_file(report, projlen::to_json(seq) + "\n");
  std::cout << "levels=" << seq.levels.size()
            << " final_weak_distance=" << projlen::format_double(seq.levels.back().weak_dist)
            << " certificate=" << (seq.certificate_ok ? "ok" : "violated") << "\n";
  return seq.certificate_ok ? 0 : 3;
}

int cmd_verify(std::uint64_t seed, int trials, const std::string& output) {
  const auto checks = projlen::run_all_checks(seed, trials);
  bool all_pass = true;
  std::string json = "{\"seed\":" + std::to_string(seed) +
                     ",\"trials\":" + std::to_string(trials) + ",\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    all_pass = all_pass && c.pass();
    std::printf("%-34s %s  trials=%d failures=%d worst_margin=%s\n", c.name.c_str(),
                c.pass() ? "PASS" : "FAIL", c.trials, c.failures,
                projlen::format_double(c.worst_margin).c_str());
    if (i) json += ",";
    json += "{\"name\":\"" + c.name + "\",\"trials\":" + std::to_string(c.trials) +
            ",\"failures\":" + std::to_string(c.failures) +
            ",\"worst_margin\":" + projlen::format_double(c.worst_margin) + "}";
  }
  json += "],\"all_pass\":";
  json += all_pass ? "true" : "false";
  json += "}";
  if (!output.empty()) projlen::write_text_file(output, json + "\n");
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projected-length tomography pipelines"};
  app.require_subcommand(1);

  std::string input, output, report;
  int grid = 180, cells = 32, levels = 4, factor = 2, trials = 100;
  double tol = 1e-10;
  std::uint64_t seed = 1;

  auto* measure = app.add_subcommand("measure", "curve file -> induced measure file");
  measure->add_option("--input", input)->required();
  measure->add_option("--output", output)->required();

  auto* transform =
      app.add_subcommand("transform", "measure file -> sampled transform (CSV or JSON)");
  transform->add_option("--input", input)->required();
  transform->add_option("--output", output)->required();
  transform->add_option("--grid", grid, "number of sample directions");

  auto* invert = app.add_subcommand("invert", "sampled transform -> measure via NNLS");
  invert->add_option("--input", input)->required();
  invert->add_option("--output", output)->required();
  invert->add_option("--cells", cells, "tag-grid size");
  invert->add_option("--tol", tol, "KKT residual tolerance");

  auto* reconstruct =
      app.add_subcommand("reconstruct", "measure file -> broken line + certificate");
  reconstruct->add_option("--input", input)->required();
  reconstruct->add_option("--output", output)->required();
  reconstruct->add_option("--report", report, "certificate JSON path");
  reconstruct->add_option("--cells", cells, "base partition size");
  reconstruct->add_option("--levels", levels, "refinement levels");
  reconstruct->add_option("--factor", factor, "refinement factor");

  auto* verify = app.add_subcommand("verify", "run the randomized invariant battery");
  verify->add_option("--seed", seed);
  verify->add_option("--trials", trials);
  verify->add_option("--output", output, "report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(measure)) return cmd_measure(input, output);
    if (app.got_subcommand(transform)) return cmd_transform(input, output, grid);
    if (app.got_subcommand(invert)) return cmd_invert(input, output, cells, tol);
    if (app.got_subcommand(reconstruct))
      return cmd_reconstruct(input, output, report, cells, levels, factor);
    if (app.got_subcommand(verify)) return cmd_verify(seed, trials, output);
  } catch (const projlen::ParseError& e) {
    std::cerr << "projlen: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "projlen: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "projlen: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
