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

#include <optional>
#include <stdexcept>
#include <string>

namespace layoutlab {

// Root of every error the library throws. Engine steps stamp the failing
// step index onto the in-flight exception before rethrowing it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  void set_step(std::size_t step) { step_ = step; }
  std::optional<std::size_t> step() const { return step_; }

 private:
  std::optional<std::size_t> step_;
};

#define LAYOUTLAB_DEFINE_ERROR(Name)     \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

LAYOUTLAB_DEFINE_ERROR(InvalidArgument)
LAYOUTLAB_DEFINE_ERROR(DimensionError)
LAYOUTLAB_DEFINE_ERROR(PlacementError)
LAYOUTLAB_DEFINE_ERROR(BucketError)
LAYOUTLAB_DEFINE_ERROR(IndexOutOfRange)
LAYOUTLAB_DEFINE_ERROR(DegenerateBoxError)
LAYOUTLAB_DEFINE_ERROR(ClassMapError)
LAYOUTLAB_DEFINE_ERROR(PromptParseError)
LAYOUTLAB_DEFINE_ERROR(EmptyMaskError)
LAYOUTLAB_DEFINE_ERROR(BackendUnavailable)
LAYOUTLAB_DEFINE_ERROR(BackendTimeout)
LAYOUTLAB_DEFINE_ERROR(BackendProtocolError)
LAYOUTLAB_DEFINE_ERROR(HistoryEmptyError)
LAYOUTLAB_DEFINE_ERROR(NoObjectError)
LAYOUTLAB_DEFINE_ERROR(IoError)
LAYOUTLAB_DEFINE_ERROR(UndefinedMetricError)
LAYOUTLAB_DEFINE_ERROR(ManifestMismatchError)

#undef LAYOUTLAB_DEFINE_ERROR

// Non-2xx answer from a remote inpainting service.
class BackendRejected : public Error {
 public:
  BackendRejected(int status, std::string body)
      : Error("backend rejected request with HTTP " + std::to_string(status) +
              ": " + body),
        status_(status),
        body_(std::move(body)) {}

  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

}  // namespace layoutlab
