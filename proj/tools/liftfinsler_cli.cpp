#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "liftfinsler/liftfinsler.hpp"

namespace lf = liftfinsler;

namespace {

// A path that exists wins over a preset of the same name.
lf::InstanceFile load(const std::string& source) {
  if (!std::filesystem::exists(source)) {
    if (const lf::Preset* p = lf::find_preset(source)) return lf::parse_instance_unchecked(std::string(p->text));
  }
  return lf::parse_instance_unchecked(lf::read_text_file(source));
}

int run_validate(const std::string& source, const std::string& format) {
  const lf::InstanceFile inst = load(source);
  const lf::ValidationReport r = lf::validate_instance(inst, lf::resolve_tolerances(inst));
  if (format == "json") {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"value", lf::detail::num(c.value)}, {"tolerance", lf::detail::num(c.tolerance)},
                        {"passed", c.passed}, {"detail", c.detail}});
    }
    std::cout << nlohmann::json{{"instance", inst.name}, {"passed", r.passed()}, {"checks", checks}}.dump(2) << "\n";
  } else {
    lf::Report shell;
    shell.instance = inst.name;
    shell.phi = inst.phi.kind;
    shell.validation = r;
    std::string text = lf::emit_text(shell);
    std::cout << text.substr(0, text.find("seed "));
  }
  return r.passed() ? lf::kExitOk : lf::kExitValidation;
}

int run_analyze(const std::string& source, std::optional<int> planes, std::optional<std::uint64_t> seed,
                std::optional<double> tol_class, const std::string& format) {
  const lf::InstanceFile inst = load(source);
  const lf::ReportOptions opt = lf::make_options(inst, planes, seed, tol_class);
  const lf::Report report = lf::run_analysis(inst, opt);
  std::cout << (format == "json" ? lf::emit_json(report) : lf::emit_text(report));
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted (alpha,beta)-metrics on tangent Lie groups: classification and flag curvature"};
  app.require_subcommand(1);

  std::string source;
  std::string format = "text";

  auto* validate = app.add_subcommand("validate", "Parse an instance (file or preset name) and run the validation checks");
  validate->add_option("instance", source, "Instance file or preset name")->required();
  validate->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::optional<int> planes;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_class;
  auto* analyze = app.add_subcommand("analyze", "Classify F, F^c, F^v and evaluate flag curvatures");
  analyze->add_option("instance", source, "Instance file or preset name")->required();
  analyze->add_option("--planes", planes, "Random planes per case tag (default 20)")->check(CLI::Range(1, 100000));
  analyze->add_option("--seed", seed, "Seed for random planes (default: instance seed, else 0)");
  analyze->add_option("--tol-class", tol_class, "Tolerance for the Berwald / Douglas criteria")->check(CLI::PositiveNumber);
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* presets = app.add_subcommand("presets", "Shipped example instances");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List preset names");
  std::string preset_name;
  auto* show = presets->add_subcommand("show", "Print a preset instance file");
  show->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lf::kExitParse;
  }

  try {
    if (validate->parsed()) return run_validate(source, format);
    if (analyze->parsed()) return run_analyze(source, planes, seed, tol_class, format);
    if (presets->got_subcommand("list")) {
      for (const auto& p : lf::presets()) std::cout << p.name << "  " << p.summary << "\n";
      return lf::kExitOk;
    }
    if (show->parsed()) {
      const lf::Preset* p = lf::find_preset(preset_name);
      if (p == nullptr) {
        std::cerr << "error: unknown preset '" << preset_name << "'\n";
        return lf::kExitParse;
      }
      std::cout << p->text << "\n";
      return lf::kExitOk;
    }
  } catch (const lf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return lf::kExitParse;
  } catch (const lf::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return lf::kExitParse;
  } catch (const lf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return lf::kExitValidation;
  } catch (const lf::InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return lf::kExitInconsistency;
  }
  return lf::kExitOk;
}
