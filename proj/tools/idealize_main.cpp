// idealize: command-line front end for the analysis pipeline and JSON API.
//
//   idealize analyze --text-file idea.txt --geo US --timeframe "Past 12 months" --out report/
//   idealize extract --text-file idea.txt
//   idealize serve --config idealize.conf --port 8080

#include <csignal>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "idealize/analysis.hpp"
#include "idealize/error.hpp"
#include "idealize/http_api.hpp"

namespace fs = std::filesystem;
using namespace idealize;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kTrends = 3 };

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ValidationError:
    case ErrorKind::ConfigError:
      return kInvalid;
    case ErrorKind::TrendsError:
      return kTrends;
    default:
      return kFailure;
  }
}

service::ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct CommonArgs {
  std::string config_path;
  std::string text_file;
  std::string text;
};

service::ServiceConfig base_config(const CommonArgs& args) {
  return args.config_path.empty() ? service::ServiceConfig{} : service::load_config(args.config_path);
}

std::string request_text(const CommonArgs& args) {
  if (!args.text_file.empty()) return read_file(args.text_file);
  return args.text;
}

void add_text_options(CLI::App& cmd, CommonArgs& args) {
  auto* file = cmd.add_option("--text-file", args.text_file, "UTF-8 file holding the idea text")
                   ->check(CLI::ExistingFile);
  auto* inline_text = cmd.add_option("--text", args.text, "Idea text given inline");
  file->excludes(inline_text);
  cmd.add_option("--config", args.config_path, "Config file (JSON or key=value)")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Idealize: rank the keywords of an idea and measure their search interest"};
  app.require_subcommand(1);

  CommonArgs analyze_args;
  service::AnalysisRequest request;
  std::string mode, fixtures, out_dir, format_name = "json";
  std::optional<int> window;
  bool normalized_scale = false, partial = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full analysis and write the report");
  add_text_options(*analyze, analyze_args);
  analyze->add_option("--geo", request.geo, "Country code, or empty for worldwide")->capture_default_str();
  analyze->add_option("--context", request.context, "web, news, images, froogle or youtube")->capture_default_str();
  analyze->add_option("--timeframe", request.timeframe_label, "Timeframe label")->capture_default_str();
  analyze->add_option("--max-keywords", request.max_keywords, "Keywords sent to the trends stage")
      ->capture_default_str();
  analyze->add_option("--mode", mode, "Trends source")->check(CLI::IsMember({"fixture", "wire"}));
  analyze->add_option("--fixtures", fixtures, "Fixture directory")->check(CLI::ExistingDirectory);
  analyze->add_option("--window", window, "Co-occurrence window (2..10)");
  analyze->add_flag("--normalized-scale", normalized_scale, "Drop the division by the keyword count");
  analyze->add_flag("--partial", partial, "Skip keywords whose trends fetch fails");
  analyze->add_option("--out", out_dir, "Write report.json, trend_chart.<fmt> and choropleth.<fmt> here");
  analyze->add_option("--format", format_name, "Chart document format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  CommonArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Print the ranked keywords only");
  add_text_options(*extract, extract_args);

  std::string serve_config, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  serve->add_option("--config", serve_config, "Config file (JSON or key=value)")->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port")->capture_default_str()->check(CLI::Range(1, 65535));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      auto config = base_config(analyze_args);
      if (!mode.empty()) config.mode = mode;
      if (!fixtures.empty()) config.fixtures_dir = fixtures;
      if (partial) config.partial = true;
      request.text = request_text(analyze_args);
      if (window) request.options.window = *window;
      if (normalized_scale) request.options.normalized_scale = true;

      const service::Analyzer analyzer(config);
      const auto report = analyzer.analyze(request);
      const auto format = *service::parse_format(format_name);
      const auto report_bytes = service::serialize_report(report);
      if (out_dir.empty()) {
        std::cout << report_bytes;
      } else {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        write_file_atomic(dir / "report.json", report_bytes);
        write_file_atomic(dir / ("trend_chart." + format_name), service::emit_trend_chart_data(report, format));
        write_file_atomic(dir / ("choropleth." + format_name), service::emit_choropleth(report, format));
      }
      for (const auto& k : report.metadata.failed_keywords) {
        std::cerr << "warning: no trend data for '" << k << "'\n";
      }
    } else if (*extract) {
      const service::Analyzer analyzer(base_config(extract_args));
      service::AnalysisRequest req;
      req.text = request_text(extract_args);
      const auto result = analyzer.extract(req);
      for (const auto& k : result.keywords) std::cout << format_number(k.weight) << '\t' << k.text << '\n';
      if (!result.converged) std::cerr << "warning: PageRank stopped before converging\n";
    } else if (*serve) {
      auto config = serve_config.empty() ? service::ServiceConfig{} : service::load_config(serve_config);
      auto analyzer = std::make_shared<const service::Analyzer>(std::move(config));
      service::ApiServer server(analyzer);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "idealize: serving " << analyzer->client().mode() << " mode on http://" << host << ":" << port
                << "\n";
      server.listen(host, port);
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "idealize: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "idealize: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
