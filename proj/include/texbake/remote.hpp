/*
Copyright 2026 The texbake Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "texbake/image.hpp"

namespace texbake {

class RemoteError : public std::runtime_error {
 public:
  enum class Kind { kTransport, kTimeout, kHttpStatus, kMalformed };

  RemoteError(Kind kind, std::string message, int view = -1)
      : std::runtime_error(std::move(message)), kind_(kind), view_(view) {}

  Kind kind() const { return kind_; }
  // Index of the offending view, or -1 when the failure is request-wide.
  int view() const { return view_; }

 private:
  Kind kind_;
  int view_;
};

struct Endpoint {
  std::string host;
  int port = 80;
  std::string base_path;  // no trailing slash

  // Accepts http://host[:port][/prefix].
  static Endpoint parse(std::string_view url);
  std::string url() const;
};

struct RemoteOptions {
  std::chrono::seconds timeout{300};
  int retries = 1;
};

// POSTs a JSON document and returns the parsed JSON reply. Transport
// failures are retried `options.retries` times; non-2xx replies and
// unparsable bodies are not.
nlohmann::json post_json(const Endpoint& endpoint, std::string_view route,
                         const nlohmann::json& body, const RemoteOptions& options = {});

std::string png_base64(const Rgb8& image);
std::string png_base64(const Gray8& image);
Rgb8 rgb_from_png_base64(std::string_view text);

}  // namespace texbake
