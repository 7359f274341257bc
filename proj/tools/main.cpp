#include <cstdio>
#include <cstdlib>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"
#include "common.hpp"
#include "dapkit/errors.hpp"
#include "version.hpp"

namespace {

// Exit codes: 0 ok, 1 internal, 2 usage, 3 file I/O, 4 input parse/validation,
// 5 model/domain, 6 resource guard.
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;
constexpr int kExitDomain = 5;
constexpr int kExitResource = 6;

void diagnostic(const char* code, const std::string& message) {
  std::fprintf(stderr, "error: code=%s msg=\"%s\"\n", code, message.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dapkit;
  using namespace dapkit::cli;

  CLI::App app{"dapkit: donor-acceptor pair emission modeling toolkit"};
  app.set_version_flag("--version", std::string("dapkit ") + kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "Materials database file")
      ->envname("DAPKIT_CONFIG");
  app.add_option("--out", opts.out_path, "Output file (default: stdout)");
  app.add_option("--format", opts.format, "csv or json (informational; commands pick)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", opts.threads, "Worker pool size for grid fans (default 1)")
      ->check(CLI::PositiveNumber);

  register_shells(app, opts);
  register_zpl_series(app, opts);
  register_zpl_fit(app, opts);
  register_pl_spectrum(app, opts);
  register_dipole(app, opts);
  register_stark_fit(app, opts);
  register_interaction_map(app, opts);
  register_lifetime(app, opts);
  register_ctl(app, opts);
  register_reproduce(app, opts);

  // global flags (--out, --config, ...) may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage
    diagnostic("usage", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    diagnostic("io", e.what());
    return kExitIo;
  } catch (const ParseError& e) {
    diagnostic("parse", e.what());
    return kExitParse;
  } catch (const ValidationError& e) {
    diagnostic("validation", e.what());
    return kExitParse;
  } catch (const ResourceError& e) {
    diagnostic("resource", e.what());
    return kExitResource;
  } catch (const Error& e) {
    diagnostic("domain", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    diagnostic("internal", e.what());
    return kExitInternal;
  }
  return 0;
}
