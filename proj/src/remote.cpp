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

#include "texbake/remote.hpp"

#include <charconv>

#include <httplib.h>

#include "texbake/base64.hpp"

namespace texbake {

Endpoint Endpoint::parse(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind("https://", 0) == 0) {
    throw RemoteError(RemoteError::Kind::kTransport, "https endpoints are not supported: " + std::string(url));
  }
  if (url.rfind(kScheme, 0) == 0) url.remove_prefix(kScheme.size());
  Endpoint endpoint;
  const auto slash = url.find('/');
  std::string_view authority = url.substr(0, slash);
  if (slash != std::string_view::npos) {
    std::string_view path = url.substr(slash);
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    endpoint.base_path = std::string(path);
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || ptr != port.data() + port.size() || value <= 0 || value > 65535) {
      throw RemoteError(RemoteError::Kind::kTransport, "bad port in url: " + std::string(url));
    }
    endpoint.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw RemoteError(RemoteError::Kind::kTransport, "missing host in url: " + std::string(url));
  }
  endpoint.host = std::string(authority);
  return endpoint;
}

std::string Endpoint::url() const {
  return "http://" + host + ":" + std::to_string(port) + base_path;
}

nlohmann::json post_json(const Endpoint& endpoint, std::string_view route,
                         const nlohmann::json& body, const RemoteOptions& options) {
  httplib::Client client(endpoint.host, endpoint.port);
  const auto seconds = static_cast<time_t>(options.timeout.count());
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_write_timeout(seconds, 0);
  const std::string path = endpoint.base_path + std::string(route);
  const std::string payload = body.dump();

  httplib::Result result;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    result = client.Post(path, payload, "application/json");
    if (result) break;
  }
  if (!result) {
    const auto error = result.error();
    const auto kind = error == httplib::Error::Read || error == httplib::Error::ConnectionTimeout
                          ? RemoteError::Kind::kTimeout
                          : RemoteError::Kind::kTransport;
    throw RemoteError(kind, "POST " + endpoint.url() + std::string(route) +
                                " failed: " + httplib::to_string(error));
  }
  if (result->status < 200 || result->status >= 300) {
    throw RemoteError(RemoteError::Kind::kHttpStatus,
                      "POST " + endpoint.url() + std::string(route) + " returned HTTP " +
                          std::to_string(result->status));
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::exception& e) {
    throw RemoteError(RemoteError::Kind::kMalformed,
                      std::string("reply is not valid JSON: ") + e.what());
  }
}

std::string png_base64(const Rgb8& image) { return base64_encode(encode_png(image)); }
std::string png_base64(const Gray8& image) { return base64_encode(encode_png(image)); }

Rgb8 rgb_from_png_base64(std::string_view text) {
  return decode_png_rgb(base64_decode(text));
}

}  // namespace texbake
