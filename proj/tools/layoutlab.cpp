// Copyright 2026 The LayoutLab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// layoutlab: benchmark generation, iterative inpainting runs, evaluation,
// training export and the session service.
//
// Exit status: 0 success, 1 usage error, 2 runtime error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "layoutlab.hpp"

namespace fs = std::filesystem;
using namespace layoutlab;

namespace {

struct SplitFlags {
  std::string skill;
  std::string split;

  std::vector<BenchSplit> resolve() const {
    std::optional<Skill> s;
    if (!skill.empty()) s = parse_skill(skill);
    return select_splits(s, split.empty() ? std::nullopt : std::optional<std::string>(split));
  }
};

void add_split_flags(CLI::App* cmd, SplitFlags& f) {
  cmd->add_option("--skill", f.skill, "number|position|size|shape|id (default: all OOD skills)");
  cmd->add_option("--split", f.split, "split name within the skill");
}

struct BackendFlags {
  std::string backend = "procedural";
  std::string endpoint;
  double guidance = 4.0;
  int steps = 50;
  int jitter = 0;
  int timeout_ms = 120000;
  int max_inflight = 4;

  BackendConfig config(std::uint64_t seed) const {
    BackendConfig c;
    c.kind = parse_backend_kind(backend);
    c.endpoint = resolve_endpoint(endpoint);
    c.guidance_scale = guidance;
    c.steps = steps;
    c.jitter_px = jitter;
    c.seed = seed;
    c.timeout_ms = timeout_ms;
    c.max_inflight = max_inflight;
    return c;
  }
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.backend, "procedural|remote|perturb")->capture_default_str();
  cmd->add_option("--endpoint", f.endpoint, "remote backend URL (LAYOUTLAB_ENDPOINT overrides)");
  cmd->add_option("--guidance", f.guidance, "classifier-free guidance scale")->capture_default_str();
  cmd->add_option("--steps", f.steps, "sampling steps")->capture_default_str();
  cmd->add_option("--jitter", f.jitter, "perturb backend offset bound in px")->capture_default_str();
  cmd->add_option("--timeout-ms", f.timeout_ms, "remote request timeout")->capture_default_str();
  cmd->add_option("--max-inflight", f.max_inflight, "remote concurrent requests")->capture_default_str();
}

std::string split_dir(const std::string& root, const BenchSplit& s) {
  return root + "/" + std::string(to_string(s.skill)) + "_" + s.split;
}

std::vector<ManifestEntry> load_split(const std::string& bench, const BenchSplit& s) {
  return read_manifest(bench + "/" + manifest_file_name(s));
}

// Splits of `flags` whose manifest exists under `bench`; explicit flags must
// all be present.
std::vector<BenchSplit> present_splits(const std::string& bench, const SplitFlags& flags) {
  std::vector<BenchSplit> wanted;
  if (flags.skill.empty() && flags.split.empty()) {
    wanted = select_splits(std::nullopt, std::nullopt);
    wanted.push_back({Skill::kId, std::string(kIdSplit)});
    std::vector<BenchSplit> out;
    for (const auto& s : wanted) {
      if (fs::exists(bench + "/" + manifest_file_name(s))) out.push_back(s);
    }
    if (out.empty()) throw IoError("no split manifests under " + bench);
    return out;
  }
  wanted = flags.resolve();
  for (const auto& s : wanted) {
    if (!fs::exists(bench + "/" + manifest_file_name(s))) {
      throw IoError("missing manifest " + bench + "/" + manifest_file_name(s));
    }
  }
  return wanted;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
}

void write_json(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

int cmd_generate_bench(const SplitFlags& flags, std::size_t n, std::uint64_t seed,
                       const std::string& out) {
  ensure_dir(out);
  for (const auto& s : flags.resolve()) {
    const auto path = out + "/" + manifest_file_name(s);
    write_manifest(path, generate_split(s, n, seed));
    std::cout << path << " (" << n << " scenes)\n";
  }
  return 0;
}

int cmd_render_gt(const std::string& bench, const SplitFlags& flags, const std::string& out,
                  unsigned threads) {
  for (const auto& s : present_splits(bench, flags)) {
    const auto manifest = load_split(bench, s);
    const auto dir = split_dir(out, s);
    write_images(manifest, render_manifest(manifest, threads), dir, threads);
    write_manifest(dir + "/layouts.jsonl", manifest);
    std::cout << dir << " (" << manifest.size() << " images)\n";
  }
  return 0;
}

int cmd_run(const std::string& bench, const SplitFlags& flags, const BackendFlags& bf,
            const EngineOptions& opts, bool traces, const std::string& out, unsigned threads) {
  const auto backend = make_backend(bf.config(opts.seed));
  for (const auto& s : present_splits(bench, flags)) {
    const auto manifest = load_split(bench, s);
    const auto dir = split_dir(out, s);
    const auto result = run_manifest(manifest, *backend, opts, traces, threads);
    write_images(manifest, result.images, dir, threads);
    if (traces) {
      detail::parallel_for(manifest.size(), threads, [&](std::size_t i) {
        export_trace(result.traces[i], dir + "/traces/" + manifest[i].image_id());
      });
    }
    std::cout << dir << " (" << manifest.size() << " images)\n";
  }
  return 0;
}

int cmd_eval(const std::string& bench, const SplitFlags& flags, const std::string& images,
             const std::string& detections_path, const std::string& method, bool shuffled,
             std::uint64_t seed, const std::string& out, unsigned threads) {
  if (images.empty() == detections_path.empty()) {
    throw CLI::ValidationError("eval", "exactly one of --images or --detections is required");
  }
  ensure_dir(out);
  std::map<std::string, std::vector<Detection>> ingested;
  if (!detections_path.empty()) {
    for (auto& d : read_detections(detections_path)) ingested[d.image_id].push_back(std::move(d));
  }
  std::vector<Detection> all_dets;
  for (const auto& s : present_splits(bench, flags)) {
    const auto manifest = load_split(bench, s);
    std::vector<Detection> dets;
    if (images.empty()) {
      std::map<std::string, int> ids;
      for (const auto& e : manifest) ids[e.image_id()];
      for (const auto& [id, v] : ingested) {
        if (ids.contains(id)) dets.insert(dets.end(), v.begin(), v.end());
      }
    } else {
      dets = detect_all(manifest, read_images(manifest, split_dir(images, s), threads), threads);
      all_dets.insert(all_dets.end(), dets.begin(), dets.end());
    }
    const auto report = shuffled ? shuffled_baseline(manifest, dets, seed) : evaluate_run(manifest, dets);
    const std::string name = std::string(to_string(s.skill)) + "_" + s.split;
    write_json(out + "/" + name + ".json",
               {{"method", method}, {"skill", to_string(s.skill)}, {"split", s.split},
                {"report", to_json(report)}});
    std::printf("%-20s AP %5.1f  AP50 %5.1f\n", name.c_str(), 100 * report.ap, 100 * report.ap50);
  }
  if (!images.empty()) write_detections(out + "/detections.jsonl", all_dets);
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::map<ReportKey, EvalReport> reports;
  for (const auto& in : inputs) {
    std::vector<fs::path> files;
    if (fs::is_directory(in)) {
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
    } else {
      files.push_back(in);
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto j = json::parse(read_text_file(f.string()));
      reports[{j.at("method").get<std::string>(), j.at("split").get<std::string>()}] =
          report_from_json(j.at("report"));
    }
  }
  const auto table = report_table(reports);
  if (!out.empty()) {
    ensure_dir(out);
    write_text_file(out + "/table.txt", table.text);
    write_text_file(out + "/table.csv", table.csv);
  }
  std::cout << table.text;
  return 0;
}

int cmd_export_training(const SplitFlags& flags, std::size_t n_scenes, const ExportOptions& opts,
                        const std::string& out) {
  SplitFlags f = flags;
  if (f.skill.empty() && f.split.empty()) f.skill = "id";
  std::vector<Scene> scenes;
  for (const auto& s : f.resolve()) {
    for (auto& e : generate_split(s, n_scenes, opts.seed)) scenes.push_back(std::move(e.scene));
  }
  const auto path = export_manifest(scenes, opts, out);
  const auto report = validate_manifest(path, opts.threads);
  std::cout << path << ": " << report.n_examples << " examples, " << report.n_foreground
            << " foreground\n";
  for (const auto& failure : report.failures) std::cerr << "invalid example " << failure << "\n";
  return report.ok() ? 0 : 2;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const BackendFlags& bf, std::uint64_t seed, const std::string& host, int port,
              int ttl_s) {
  ServiceOptions so;
  so.seed = seed;
  so.session_ttl = std::chrono::seconds(ttl_s);
  Service service(make_backend(bf.config(seed)), so);
  httplib::Server server;
  service.mount(server);
  g_server = &server;
  std::signal(SIGINT, [](int) { g_server->stop(); });
  std::signal(SIGTERM, [](int) { g_server->stop(); });
  if (port == 0) {
    port = server.bind_to_any_port(host);
    if (port < 0) throw IoError("cannot bind " + host);
    std::cout << "listening on http://" << host << ":" << port << std::endl;
    server.listen_after_bind();
  } else {
    std::cout << "listening on http://" << host << ":" << port << std::endl;
    if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LayoutBench harness: scenes, iterative inpainting, layout-accuracy evaluation"};
  app.require_subcommand(1);

  SplitFlags split_flags;
  BackendFlags backend_flags;
  std::size_t n = 200;
  std::uint64_t seed = 0;
  std::string out, bench, images, detections, method = "run";
  std::string mode = "paste", order = "given";
  bool traces = false, shuffled = false;
  unsigned threads = 0;
  double fg_ratio = 0.3;
  std::size_t n_scenes = 1000;
  std::vector<std::string> inputs;
  std::string host = "127.0.0.1";
  int port = 8080, ttl_s = 3600;

  auto* gen = app.add_subcommand("generate-bench", "sample split manifests");
  add_split_flags(gen, split_flags);
  gen->add_option("--n", n, "scenes per split")->capture_default_str();
  gen->add_option("--seed", seed, "first scene seed")->capture_default_str();
  gen->add_option("--out", out, "output directory")->required();

  auto* gt = app.add_subcommand("render-gt", "render ground-truth images of a benchmark");
  gt->add_option("--bench", bench, "directory of split manifests")->required();
  add_split_flags(gt, split_flags);
  gt->add_option("--out", out, "output directory")->required();
  gt->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* run = app.add_subcommand("run", "generate every layout of a benchmark with a backend");
  run->add_option("--bench", bench, "directory of split manifests")->required();
  add_split_flags(run, split_flags);
  add_backend_flags(run, backend_flags);
  run->add_option("--mode", mode, "paste|repaint")->capture_default_str();
  run->add_option("--order", order, "given|random|top|bottom")->capture_default_str();
  run->add_option("--seed", seed, "random-order and perturb seed")->capture_default_str();
  run->add_flag("--traces", traces, "also write per-step images and masks");
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* ev = app.add_subcommand("eval", "score images or ingested detections against layouts");
  ev->add_option("--bench", bench, "directory of split manifests")->required();
  add_split_flags(ev, split_flags);
  ev->add_option("--images", images, "image root written by run or render-gt");
  ev->add_option("--detections", detections, "detections JSONL to ingest instead of detecting");
  ev->add_option("--method", method, "row name in the report table")->capture_default_str();
  ev->add_flag("--shuffled", shuffled, "pair each layout with another image's detections");
  ev->add_option("--seed", seed, "shuffle seed")->capture_default_str();
  ev->add_option("--out", out, "report directory")->required();
  ev->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* rep = app.add_subcommand("report", "merge eval reports into one table");
  rep->add_option("inputs", inputs, "report files or directories")->required();
  rep->add_option("--out", out, "directory for table.txt and table.csv");

  auto* exp = app.add_subcommand("export-training", "write IterInpaint training triples");
  add_split_flags(exp, split_flags);
  exp->add_option("--n", n, "number of examples")->capture_default_str();
  exp->add_option("--scenes", n_scenes, "scenes sampled per split")->capture_default_str();
  exp->add_option("--fg-ratio", fg_ratio, "foreground fraction")->capture_default_str();
  exp->add_option("--seed", seed, "seed")->capture_default_str();
  exp->add_option("--out", out, "output directory")->required();
  exp->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* serve = app.add_subcommand("serve", "run the session HTTP service");
  add_backend_flags(serve, backend_flags);
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "port (0 = any free port)")->capture_default_str();
  serve->add_option("--seed", seed, "session id and perturb seed")->capture_default_str();
  serve->add_option("--session-ttl", ttl_s, "idle session lifetime in seconds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate_bench(split_flags, n, seed, out);
    if (*gt) return cmd_render_gt(bench, split_flags, out, threads);
    if (*run) {
      EngineOptions opts;
      opts.mode = parse_mode(mode);
      opts.order = parse_order(order);
      opts.seed = seed;
      return cmd_run(bench, split_flags, backend_flags, opts, traces, out, threads);
    }
    if (*ev) return cmd_eval(bench, split_flags, images, detections, method, shuffled, seed, out, threads);
    if (*rep) return cmd_report(inputs, out);
    if (*exp) {
      ExportOptions opts;
      opts.n_examples = n;
      opts.fg_ratio = fg_ratio;
      opts.seed = seed;
      opts.threads = threads;
      return cmd_export_training(split_flags, n_scenes, opts, out);
    }
    if (*serve) return cmd_serve(backend_flags, seed, host, port, ttl_s);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "layoutlab: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "layoutlab: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "layoutlab: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
