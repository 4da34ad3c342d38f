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
#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <utility>

#include <httplib.h>

#include "layoutlab/backends.hpp"
#include "layoutlab/engine.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/metrics.hpp"
#include "layoutlab/random.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

struct ServiceOptions {
  std::chrono::seconds session_ttl{3600};
  std::uint64_t seed = 0;  // session ids
  std::function<std::chrono::steady_clock::time_point()> now = [] {
    return std::chrono::steady_clock::now();
  };
};

// JSON-over-HTTP front end for sessions, full-layout generation and
// evaluation. handle() is the transport-free entry point; mount() wires it
// into an httplib server. Each session is locked for the duration of one
// request; distinct sessions run concurrently.
class Service {
 public:
  explicit Service(std::shared_ptr<const InpaintBackend> backend, ServiceOptions opts = {})
      : backend_(std::move(backend)), opts_(std::move(opts)) {
    if (!backend_) throw InvalidArgument("service needs a backend");
  }

  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::string& body) {
    static const std::regex kSessionOp(R"(^/session/([A-Za-z0-9]+)/(add|remove|undo|image)$)");
    try {
      if (path == "/session") {
        if (method != "POST") return error(405, "method not allowed");
        return create_session(parse_body(body));
      }
      if (path == "/generate") {
        if (method != "POST") return error(405, "method not allowed");
        return generate_layout(parse_body(body));
      }
      if (path == "/evaluate") {
        if (method != "POST") return error(405, "method not allowed");
        return evaluate(parse_body(body));
      }
      std::smatch m;
      if (std::regex_match(path, m, kSessionOp)) {
        const std::string op = m[2].str();
        const bool is_get = op == "image";
        if (method != (is_get ? "GET" : "POST")) return error(405, "method not allowed");
        return session_op(m[1].str(), op, is_get ? json::object() : parse_body(body));
      }
      return error(404, "no route for " + method + " " + path);
    } catch (const HistoryEmptyError& e) {
      return error(409, e.what());
    } catch (const BackendUnavailable& e) {
      return error(502, e.what());
    } catch (const BackendTimeout& e) {
      return error(502, e.what());
    } catch (const BackendRejected& e) {
      return error(502, e.what());
    } catch (const BackendProtocolError& e) {
      return error(502, e.what());
    } catch (const Error& e) {
      return error(400, e.what());
    } catch (const json::exception& e) {
      return error(400, std::string("schema violation: ") + e.what());
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

  void mount(httplib::Server& server) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      const auto r = handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Post(R"(/.*)", forward);
    server.Get(R"(/.*)", forward);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  }

  std::size_t session_count() {
    std::lock_guard lock(table_mu_);
    evict_expired_locked();
    return sessions_.size();
  }

 private:
  struct Entry {
    std::mutex mu;
    Session session;
    std::chrono::steady_clock::time_point last_used;
  };

  static HttpResponse error(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
  }

  static HttpResponse ok(const json& j) { return {200, j.dump()}; }

  static json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InvalidArgument("body must be a JSON object");
    return j;
  }

  static json objects_json(const Session& s) {
    json out = json::array();
    for (const auto& r : s.objects) out.push_back({{"caption", r.caption}, {"box", to_json(r.box)}});
    return out;
  }

  static json session_json(const std::string& id, const Session& s) {
    return {{"id", id},
            {"image", image_to_base64(s.image)},
            {"objects", objects_json(s)},
            {"history_depth", s.history.size()}};
  }

  static json step_json(const StepTrace& t) {
    return {{"step", t.step_index},
            {"prompt", t.prompt},
            {"mask", mask_to_base64(t.mask)},
            {"image", image_to_base64(t.committed)}};
  }

  std::string next_id() {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::splitmix64(
                      detail::stream_seed("session", opts_.seed) + next_serial_++)));
    return buf;
  }

  void evict_expired_locked() {
    const auto now = opts_.now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock entry_lock(it->second->mu, std::try_to_lock);
      if (entry_lock.owns_lock() && now - it->second->last_used > opts_.session_ttl) {
        entry_lock.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }

  HttpResponse create_session(const json& body) {
    Session s;
    const Mode mode = body.contains("mode") ? parse_mode(body.at("mode").get<std::string>())
                                            : Mode::kPaste;
    if (body.contains("image")) {
      s = make_session(image_from_base64(body.at("image").get<std::string>()), mode);
    } else {
      const Canvas c = body.contains("canvas") ? canvas_from_json(body.at("canvas")) : Canvas{};
      if (c.width <= 0 || c.height <= 0) throw InvalidArgument("canvas must be non-empty");
      s = make_session(c, mode);
    }
    auto entry = std::make_shared<Entry>();
    entry->session = std::move(s);
    entry->last_used = opts_.now();
    std::string id;
    {
      std::lock_guard lock(table_mu_);
      evict_expired_locked();
      id = next_id();
      sessions_[id] = entry;
    }
    return ok(session_json(id, entry->session));
  }

  HttpResponse session_op(const std::string& id, const std::string& op, const json& body) {
    std::shared_ptr<Entry> entry;
    {
      std::lock_guard lock(table_mu_);
      evict_expired_locked();
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return error(404, "unknown session '" + id + "'");
      entry = it->second;
    }
    std::lock_guard lock(entry->mu);
    entry->last_used = opts_.now();
    Session& s = entry->session;
    json extra = json::object();
    if (op == "add") {
      add_object(s, body.at("caption").get<std::string>(), bbox_from_json(body.at("box")), *backend_);
    } else if (op == "remove") {
      remove_region(s, bbox_from_json(body.at("box")), *backend_);
    } else if (op == "undo") {
      undo(s);
    }
    json out = session_json(id, s);
    if ((op == "add" || op == "remove") && !s.history.empty()) {
      out["step"] = step_json(s.history.back().step);
    }
    return ok(out);
  }

  HttpResponse generate_layout(const json& body) {
    const Layout layout = layout_from_json(body.at("layout"));
    EngineOptions opts;
    if (body.contains("mode")) opts.mode = parse_mode(body.at("mode").get<std::string>());
    if (body.contains("order")) opts.order = parse_order(body.at("order").get<std::string>());
    if (body.contains("seed")) opts.seed = body.at("seed").get<std::uint64_t>();
    const auto result = generate(layout, *backend_, opts);
    json steps = json::array();
    for (const auto& t : result.trace) steps.push_back(step_json(t));
    return ok({{"image", image_to_base64(result.image)}, {"steps", steps}});
  }

  // Ground truth comes either as {"scenes": [manifest lines]} or as
  // {"ground_truths": [{"image_id", "class_id", "box"}]}.
  HttpResponse evaluate(const json& body) {
    std::vector<Detection> dets;
    for (const auto& d : body.at("detections")) dets.push_back(detection_from_json(d));
    EvalOptions opts;
    if (body.contains("max_dets_per_image")) {
      opts.max_dets_per_image = body.at("max_dets_per_image").get<std::size_t>();
    }
    if (body.contains("scenes")) {
      std::vector<ManifestEntry> manifest;
      for (const auto& e : body.at("scenes")) manifest.push_back(manifest_entry_from_json(e));
      return ok(to_json(evaluate_run(manifest, dets, opts)));
    }
    std::vector<GroundTruth> gts;
    for (const auto& g : body.at("ground_truths")) {
      gts.push_back({g.at("image_id").get<std::string>(), g.at("class_id").get<int>(),
                     bbox_from_json(g.at("box"))});
    }
    return ok(to_json(average_precision(dets, gts, opts)));
  }

  std::shared_ptr<const InpaintBackend> backend_;
  ServiceOptions opts_;
  std::mutex table_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_serial_ = 0;
};

}  // namespace layoutlab
