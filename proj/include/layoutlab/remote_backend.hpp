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
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <regex>
#include <string>

#include <httplib.h>

#include "layoutlab/backends.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

inline constexpr const char* kEndpointEnvVar = "LAYOUTLAB_ENDPOINT";

// The environment variable, when set and non-empty, wins over `flag_value`.
inline std::string resolve_endpoint(const std::string& flag_value) {
  if (const char* env = std::getenv(kEndpointEnvVar); env && *env) return env;
  return flag_value;
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base_path;
};

inline Endpoint parse_endpoint(const std::string& url) {
  static const std::regex kUrl(R"(^(http://[^/\s]+)(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw InvalidArgument("endpoint must look like http://host[:port][/path]: '" + url + "'");
  }
  std::string base = m[2].matched ? m[2].str() : "";
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {m[1].str(), base};
}

namespace detail {

// Counting gate bounding concurrent requests.
class InflightGate {
 public:
  explicit InflightGate(int limit) : free_(limit) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

}  // namespace detail

// Client for POST {endpoint}/inpaint. Safe to share across threads; at most
// `max_inflight` requests are outstanding at once.
class RemoteBackend final : public InpaintBackend {
 public:
  explicit RemoteBackend(const BackendConfig& config)
      : config_(config), endpoint_(parse_endpoint(config.endpoint)),
        gate_(std::make_unique<detail::InflightGate>(config.max_inflight)) {
    config_.validate();
  }

  static json request_body(const Image& ctx, const std::string& prompt, const Mask& mask,
                           double guidance_scale, int steps) {
    return {{"image", image_to_base64(ctx)},
            {"mask", mask_to_base64(mask)},
            {"prompt", prompt},
            {"guidance_scale", guidance_scale},
            {"steps", steps}};
  }

  Image inpaint(const Image& ctx, const std::string& prompt, const Mask& mask) const override {
    require_same_dims(ctx, mask);
    const std::string body =
        request_body(ctx, prompt, mask, config_.guidance_scale, config_.steps).dump();

    httplib::Client client(endpoint_.origin);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    gate_->acquire();
    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(endpoint_.base_path + "/inpaint", body, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    gate_->release();

    if (!res) {
      const auto err = res.error();
      const std::string what = "POST " + config_.endpoint + "/inpaint: " + httplib::to_string(err);
      if (err == httplib::Error::ConnectionTimeout ||
          (err == httplib::Error::Read && elapsed >= timeout)) {
        throw BackendTimeout(what);
      }
      throw BackendUnavailable(what);
    }
    if (res->status < 200 || res->status >= 300) throw BackendRejected(res->status, res->body);

    Image out;
    try {
      out = image_from_base64(json::parse(res->body).at("image").get<std::string>());
    } catch (const std::exception& e) {
      throw BackendProtocolError(std::string("malformed inpaint response: ") + e.what());
    }
    if (out.width() != ctx.width() || out.height() != ctx.height()) {
      throw BackendProtocolError("inpaint response has dimensions " + std::to_string(out.width()) +
                                 "x" + std::to_string(out.height()));
    }
    return out;
  }

 private:
  BackendConfig config_;
  Endpoint endpoint_;
  std::unique_ptr<detail::InflightGate> gate_;
};

}  // namespace layoutlab
